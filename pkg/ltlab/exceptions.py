class LtlabError(Exception):
    pass


class InvalidArgument(LtlabError, ValueError):
    pass


class NotPSDError(InvalidArgument):
    """
    A sampled potential has a node eigenvalue below the PSD tolerance.

    """
    def __init__(self, message, min_eigenvalue=None, node=None):
        super(NotPSDError, self).__init__(message)
        self.min_eigenvalue = min_eigenvalue
        self.node = node


class SolverFailure(LtlabError):
    """
    Wrap a failure of the eigenvalue solver.

    :param diagnostics: what was being solved (dimension, channels, spacing...).
    :type  diagnostics: dict

    """
    def __init__(self, message, diagnostics=None):
        super(SolverFailure, self).__init__(message)
        self.diagnostics = diagnostics or {}

    def __repr__(self):
        return '{}({!r}, diagnostics={!r})'.format(
            self.__class__.__name__,
            str(self),
            self.diagnostics,
        )


class RankDeficientError(LtlabError):
    def __init__(self, message, index=None, pivot=None):
        super(RankDeficientError, self).__init__(message)
        self.index = index
        self.pivot = pivot


class ConsistencyFailure(LtlabError):
    """
    The energy identity does not close within tolerance.

    :param residuals: per-eigenvalue residuals.
    :type  residuals: list[float]

    """
    def __init__(self, message, residuals=None):
        super(ConsistencyFailure, self).__init__(message)
        self.residuals = list(residuals or [])


class ResolutionError(LtlabError):
    pass


class NumericError(LtlabError):
    pass


class SearchFailure(LtlabError):
    """
    Every objective evaluation of a search failed.

    :type exceptions: list[Exception]
    """
    def __init__(self, exceptions):
        self.exceptions = list(exceptions)
        super(SearchFailure, self).__init__(
            'all {} evaluations failed'.format(len(self.exceptions)))

    def __repr__(self):
        return '<{} {}>'.format(self.__class__.__name__, repr([repr(ex) for ex in self.exceptions]))

    def __str__(self):
        return '{}({})'.format(self.__class__.__name__, str([str(ex) for ex in self.exceptions]))
