# -*- coding: utf-8 -*-
"""
Discretized Schrödinger operator H = -d²/dx² - V and its negative spectrum.

Unknowns are ordered node-major: component j at node i has index i*M + j,
so H is Hermitian with upper bandwidth M.
"""
import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import splu

from ltlab import cache, logger, settings
from ltlab.exceptions import InvalidArgument, SolverFailure
from ltlab.grid import default_grid, richardson
from ltlab.potentials import sample

# Eigenvalues closer than this (relative) share an inverse-iteration block.
CLUSTER_TOL = 1e-6
INVERSE_ITERATIONS = 4


class DiscretizedOperator(object):
    """
    Block-tridiagonal matrix with diagonal blocks (2/h²)I - V(x_i) and
    off-diagonal blocks (-1/h²)I.
    """

    def __init__(self, field):
        self.field = field
        self.grid = field.grid
        self.channels = field.channels

    @property
    def dimension(self):
        return self.grid.n_interior * self.channels

    @property
    def is_real(self):
        return not np.any(self.field.samples.imag)

    def tridiagonal(self):
        """
        (diagonal, off-diagonal) for the scalar case.
        """
        if self.channels != 1:
            raise InvalidArgument('tridiagonal form needs M=1, got M={}'.format(self.channels))
        h2 = self.grid.spacing ** 2
        diagonal = 2.0 / h2 - self.field.samples[:, 0, 0].real
        off_diagonal = np.full(self.grid.n_interior - 1, -1.0 / h2)
        return diagonal, off_diagonal

    def banded(self):
        """
        Upper banded storage: ``ab[M + r - c, c] = H[r, c]`` for r <= c.
        """
        m = self.channels
        n = self.grid.n_interior
        h2 = self.grid.spacing ** 2
        samples = self.field.samples
        dtype = float if self.is_real else complex
        ab = np.zeros((m + 1, n * m), dtype=dtype)
        for j in range(m):
            for k in range(j, m):
                values = -samples[:, j, k]
                if dtype is float:
                    values = values.real
                ab[m - (k - j), k::m] = values
            ab[m, j::m] += 2.0 / h2
        ab[0, m:] = -1.0 / h2
        return ab

    def to_sparse(self):
        m = self.channels
        n = self.grid.n_interior
        h2 = self.grid.spacing ** 2
        nodes = np.repeat(np.arange(n), m * m)
        rows = nodes * m + np.tile(np.repeat(np.arange(m), m), n)
        cols = nodes * m + np.tile(np.tile(np.arange(m), m), n)
        samples = self.field.samples
        values = -samples.reshape(-1) if not self.is_real else -samples.real.reshape(-1)
        potential = sparse.coo_matrix((values, (rows, cols)), shape=(n * m, n * m))
        laplacian = sparse.diags(
            [np.full(n * m - m, -1.0 / h2), np.full(n * m, 2.0 / h2), np.full(n * m - m, -1.0 / h2)],
            [-m, 0, m],
        )
        return (laplacian + potential).tocsc()

    def to_dense(self):
        return self.to_sparse().toarray()

    def hermiticity_defect(self):
        matrix = self.to_sparse()
        return float(abs(matrix - matrix.conj().T).max()) if matrix.nnz else 0.0

    def norm_bound(self):
        """
        Gershgorin-style bound on ||H||.
        """
        return 4.0 / self.grid.spacing ** 2 + self.field_max()

    def field_max(self):
        return float(max(0.0, self.field.node_eigenvalues().max()))

    def diagnostics(self):
        return {
            "dimension": self.dimension,
            "M": self.channels,
            "h": self.grid.spacing,
            "L": self.grid.half_width,
        }

    def __repr__(self):
        return '<DiscretizedOperator M={} dimension={} h={:g}>'.format(
            self.channels, self.dimension, self.grid.spacing)


class Spectrum(object):
    """
    Negative eigenvalues below -eps_cut, ascending.

    :param eigenvectors: optional list of (n, M) arrays on *grid*,
        normalized in the quadrature inner product.
    :param meta: h, L, eps_cut, richardson_applied, ...
    """

    def __init__(self, grid, negatives, eigenvectors=None, error_estimates=None, meta=None):
        self.grid = grid
        self.negatives = np.asarray(negatives, dtype=float)
        self.eigenvectors = eigenvectors
        if error_estimates is None:
            error_estimates = np.zeros_like(self.negatives)
        self.error_estimates = np.asarray(error_estimates, dtype=float)
        self.meta = meta or {}

    def __len__(self):
        return len(self.negatives)

    @property
    def channels(self):
        if not self.eigenvectors:
            return None
        return self.eigenvectors[0].shape[1]

    def to_dict(self):
        return {
            "negatives": self.negatives.tolist(),
            "error_estimates": self.error_estimates.tolist(),
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, grid, data):
        return cls(grid, data["negatives"], error_estimates=data["error_estimates"], meta=dict(data["meta"]))

    def __repr__(self):
        return '<Spectrum {} negatives {!r}>'.format(len(self), self.negatives.tolist())


def assemble(field):
    return DiscretizedOperator(field)


def _normalize(grid, vector, channels):
    values = vector.reshape(grid.n_interior, channels)
    norm = np.sqrt(abs(grid.inner(values, values)))
    return values / norm


def _cluster(eigenvalues):
    groups = []
    for index, value in enumerate(eigenvalues):
        if groups and value - eigenvalues[groups[-1][-1]] <= CLUSTER_TOL * max(1.0, abs(value)):
            groups[-1].append(index)
        else:
            groups.append([index])
    return groups


def _inverse_iteration(op, eigenvalues):
    """
    Eigenvectors for known eigenvalues by shifted block inverse iteration,
    one block per cluster, finished with a Rayleigh-Ritz step.
    """
    matrix = op.to_sparse()
    identity = sparse.identity(op.dimension, format='csc')
    dtype = complex if not op.is_real else float
    rng = np.random.default_rng(0)
    vectors = []
    for group in _cluster(eigenvalues):
        values = eigenvalues[group]
        shift = values.mean() - 1e-10 * max(1.0, abs(values.mean()))
        lu = splu((matrix - shift * identity).tocsc().astype(dtype))
        block = rng.standard_normal((op.dimension, len(group)))
        if dtype is complex:
            block = block + 1j * rng.standard_normal((op.dimension, len(group)))
        block, _ = np.linalg.qr(block)
        for _ in range(INVERSE_ITERATIONS):
            block = lu.solve(np.ascontiguousarray(block, dtype=dtype))
            block, _ = np.linalg.qr(block)
        vectors.append(block)

    # one Rayleigh-Ritz pass over all blocks removes cross-cluster leakage
    basis, _ = np.linalg.qr(np.hstack(vectors))
    projected = basis.conj().T.dot(matrix.dot(basis))
    _, rotation = np.linalg.eigh(0.5 * (projected + projected.conj().T))
    basis = basis.dot(rotation)
    return [basis[:, i] for i in range(basis.shape[1])]


def negative_eigenvalues(op, eps_cut=None, want_vectors=False):
    """
    All eigenvalues of *op* below -eps_cut.

    M=1 uses LAPACK's symmetric tridiagonal bisection; M>1 the banded
    Hermitian solver, with eigenvectors from inverse iteration.

    :type op: DiscretizedOperator
    :type eps_cut: float
    :type want_vectors: bool
    :rtype: Spectrum
    """
    if eps_cut is None:
        eps_cut = settings.LTLAB_EPS_CUT
    if not eps_cut > 0:
        raise InvalidArgument('eps_cut must be > 0, got {!r}'.format(eps_cut))
    grid = op.grid
    meta = {
        "h": grid.spacing,
        "L": grid.half_width,
        "eps_cut": eps_cut,
        "richardson_applied": False,
    }
    depth = op.field_max()
    # H >= -max ||V(x)||, so a shallow potential has nothing below -eps_cut
    if depth <= eps_cut:
        return Spectrum(grid, [], [] if want_vectors else None, meta=meta)

    lower = -depth - 1.0
    vectors = None
    try:
        if op.channels == 1:
            diagonal, off_diagonal = op.tridiagonal()
            eigenvalues = linalg.eigh_tridiagonal(
                diagonal, off_diagonal, eigvals_only=True,
                select='v', select_range=(lower, -eps_cut),
            )
            if want_vectors and len(eigenvalues):
                eigenvalues, columns = linalg.eigh_tridiagonal(
                    diagonal, off_diagonal, select='i', select_range=(0, len(eigenvalues) - 1),
                )
                vectors = [columns[:, i] for i in range(columns.shape[1])]
        else:
            eigenvalues = linalg.eig_banded(
                op.banded(), lower=False, eigvals_only=True,
                select='v', select_range=(lower, -eps_cut),
            )
            if want_vectors and len(eigenvalues):
                eigenvalues = np.sort(eigenvalues)
                vectors = _inverse_iteration(op, eigenvalues)
    except (linalg.LinAlgError, ValueError, RuntimeError) as err:
        diagnostics = op.diagnostics()
        diagnostics["error"] = repr(err)
        raise SolverFailure('eigensolver failed on {!r}: {}'.format(op, err), diagnostics=diagnostics)

    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = np.asarray(eigenvalues)[order]
    keep = eigenvalues < -eps_cut
    eigenvalues = eigenvalues[keep]
    if want_vectors:
        if vectors is None:
            vectors = []
        else:
            vectors = [_normalize(grid, vectors[i], op.channels) for i, kept in zip(order, keep) if kept]
    logger.debug('{!r}: {} negative eigenvalues'.format(op, len(eigenvalues)))
    return Spectrum(grid, eigenvalues, vectors, meta=meta)


def solve(spec, grid, eps_cut=None, want_vectors=False):
    return negative_eigenvalues(assemble(sample(spec, grid)), eps_cut, want_vectors)


def converged_spectrum(spec, grid=None, eps_cut=None, want_vectors=False):
    """
    Richardson-extrapolated negative spectrum from spacings h and h/2.

    Eigenvalues are paired in ascending order. If the two grids disagree
    on the count, the smaller set is kept and ``meta["count_mismatch"]``
    is set. Eigenvectors, when requested, come from the refined grid and
    ``spectrum.grid`` is that grid.

    :type spec: ltlab.potentials.PotentialSpec
    :type grid: ltlab.grid.Grid
    :rtype: Spectrum
    """
    if grid is None:
        grid = default_grid(spec.channels)
    if eps_cut is None:
        eps_cut = settings.LTLAB_EPS_CUT
    fine_grid = grid.refined()

    key = cache.cache_key(spec.to_dict(), grid.to_dict(), eps_cut)
    if not want_vectors:
        cached = cache.get_cached(key)
        if cached is not None:
            return Spectrum.from_dict(fine_grid, cached)

    coarse = solve(spec, grid, eps_cut)
    fine = solve(spec, fine_grid, eps_cut, want_vectors=want_vectors)

    count = min(len(coarse), len(fine))
    v_h = coarse.negatives[:count]
    v_h2 = fine.negatives[:count]
    extrapolated = richardson(v_h, v_h2, 2)
    errors = np.abs(v_h - v_h2)
    stable = extrapolated < -eps_cut
    meta = {
        "h": grid.spacing,
        "L": grid.half_width,
        "eps_cut": eps_cut,
        "richardson_applied": True,
        "count_mismatch": len(coarse) != len(fine),
        "counts": [len(coarse), len(fine)],
    }
    if meta["count_mismatch"]:
        logger.warning('{}: {} eigenvalues at h={:g} but {} at h={:g}, keeping {}'.format(
            spec.label, len(coarse), grid.spacing, len(fine), fine_grid.spacing, int(stable.sum())))

    vectors = None
    if want_vectors:
        vectors = [vector for vector, kept in zip(fine.eigenvectors[:count], stable) if kept]
    spectrum = Spectrum(fine_grid, extrapolated[stable], vectors, errors[stable], meta)
    cache.set_cached(key, spectrum.to_dict())
    return spectrum


def riesz_mean(spectrum, gamma):
    """
    Sum of |lambda_n|^gamma over the negative eigenvalues.
    """
    if not gamma >= 0:
        raise InvalidArgument('gamma must be >= 0, got {!r}'.format(gamma))
    return float(np.sum(np.abs(spectrum.negatives) ** gamma))


def riesz_error(spectrum, gamma):
    """
    First-order propagation of the per-eigenvalue error estimates into
    the Riesz mean.
    """
    if not gamma >= 0:
        raise InvalidArgument('gamma must be >= 0, got {!r}'.format(gamma))
    if gamma == 0:
        return 0.0
    return float(np.sum(gamma * np.abs(spectrum.negatives) ** (gamma - 1.0) * spectrum.error_estimates))


def box_levels(field, e_max):
    """
    Every eigenvalue of the Dirichlet box operator below *e_max*, ascending.
    """
    op = assemble(field)
    lower = -op.field_max() - 1.0
    try:
        if op.channels == 1:
            diagonal, off_diagonal = op.tridiagonal()
            levels = linalg.eigh_tridiagonal(
                diagonal, off_diagonal, eigvals_only=True, select='v', select_range=(lower, e_max))
        else:
            levels = linalg.eig_banded(
                op.banded(), lower=False, eigvals_only=True, select='v', select_range=(lower, e_max))
    except (linalg.LinAlgError, ValueError) as err:
        diagnostics = op.diagnostics()
        diagnostics["error"] = repr(err)
        raise SolverFailure('box level computation failed on {!r}: {}'.format(op, err), diagnostics=diagnostics)
    return np.sort(np.asarray(levels))
