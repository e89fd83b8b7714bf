# -*- coding: utf-8 -*-
"""
Orthonormal systems of vector functions, the diagonal of their projection
kernel and the trace Sobolev and Agmon inequalities:

    ∫ Tr[U(x,x)³] dx <= Σ_n Σ_j ∫ |φ_n'(x,j)|² dx
    |f(x)|² <= ∫ |f f'|
"""
import numpy as np

from ltlab import logger
from ltlab.exceptions import InvalidArgument, RankDeficientError
from ltlab.grid import Grid, GridFunction, default_grid, differentiate, integrate
from ltlab.report import CheckReport

RANK_TOL = 1e-12
SOBOLEV_TOL = 1e-8
AGMON_TOL = 1e-6
DEFAULT_PAIRS = 64


class OrthonormalSystem(object):
    """
    N functions φ_n(x_i, j), stored as an array of shape (N, n, M).
    """

    def __init__(self, grid, functions, channels=None):
        functions = np.asarray(functions, dtype=complex)
        if functions.ndim == 2:
            functions = functions[:, :, None]
        if functions.size == 0:
            functions = np.zeros((0, grid.n_interior, channels or 1), dtype=complex)
        if functions.ndim != 3 or functions.shape[1] != grid.n_interior:
            raise InvalidArgument('functions must have shape (N, {}, M), got {}'.format(
                grid.n_interior, functions.shape))
        self.grid = grid
        self.functions = functions

    @property
    def size(self):
        return self.functions.shape[0]

    N = size

    @property
    def channels(self):
        return self.functions.shape[2]

    M = channels

    def gram(self):
        """
        Quadrature Gram matrix G[a, b] = (φ_a, φ_b).
        """
        weighted = self.functions * self.grid.weights[None, :, None]
        return np.einsum('aij,bij->ab', weighted, np.conj(self.functions))

    def gram_defect(self):
        if not self.size:
            return 0.0
        return float(np.abs(self.gram() - np.eye(self.size)).max())

    def rotated(self, unitary):
        """
        The system W φ_n for a constant M x M matrix W.
        """
        unitary = np.asarray(unitary)
        return OrthonormalSystem(self.grid, np.einsum('jk,nik->nij', unitary, self.functions))

    def rescaled(self, factor):
        # not orthonormal any more unless |factor| == 1
        return OrthonormalSystem(self.grid, self.functions * factor)

    def __repr__(self):
        return '<OrthonormalSystem N={} M={} {!r}>'.format(self.size, self.channels, self.grid)


class KernelDiagonal(object):
    """
    U(x_i, x_i) as an array of shape (n, M, M).
    """

    def __init__(self, grid, matrices):
        self.grid = grid
        self.matrices = np.asarray(matrices, dtype=complex)
        self._eigenvalues = None

    @property
    def channels(self):
        return self.matrices.shape[1]

    def eigenvalues(self):
        if self._eigenvalues is None:
            self._eigenvalues = np.clip(np.linalg.eigvalsh(self.matrices), 0.0, None)
        return self._eigenvalues

    def trace(self):
        return GridFunction(self.grid, np.einsum('ijj->i', self.matrices).real)

    def trace_integral(self):
        return float(integrate(self.trace()))

    def trace_power(self, p):
        return GridFunction(self.grid, (self.eigenvalues() ** p).sum(axis=1))

    def __repr__(self):
        return '<KernelDiagonal M={} {!r}>'.format(self.channels, self.grid)


def _as_values(function):
    if isinstance(function, GridFunction):
        values = function.values
    else:
        values = np.asarray(function)
    values = np.asarray(values, dtype=complex)
    if values.ndim == 1:
        values = values[:, None]
    return values


def gram_schmidt(raw, grid=None, channels=None):
    """
    Modified Gram-Schmidt in the quadrature inner product, with one
    re-orthogonalization pass per vector.

    :param raw: GridFunctions or (n,) / (n, M) arrays.
    :param grid: required when *raw* holds bare arrays.
    :rtype: OrthonormalSystem
    :raise RankDeficientError: a vector has no component left after projection.
    """
    raw = list(raw)
    if grid is None:
        grids = [f.grid for f in raw if isinstance(f, GridFunction)]
        if not grids:
            raise InvalidArgument('gram_schmidt needs a grid for raw arrays')
        grid = grids[0]
    basis = []
    for index, function in enumerate(raw):
        vector = _as_values(function).copy()
        norm0 = np.sqrt(abs(grid.inner(vector, vector)))
        for _ in range(2):
            for q in basis:
                vector -= grid.inner(vector, q) * q
        pivot = np.sqrt(abs(grid.inner(vector, vector)))
        if norm0 == 0 or pivot < RANK_TOL * max(1.0, norm0):
            raise RankDeficientError(
                'function {} is linearly dependent on the previous ones (pivot {:.3g})'.format(index, pivot),
                index=index,
                pivot=pivot,
            )
        basis.append(vector / pivot)
    if basis:
        functions = np.stack(basis)
    else:
        functions = np.zeros((0, grid.n_interior, channels or 1), dtype=complex)
    return OrthonormalSystem(grid, functions)


def system_from_spectrum(spectrum):
    """
    Orthonormalized eigenfunctions of a Spectrum computed with vectors.
    """
    if spectrum.eigenvectors is None:
        raise InvalidArgument('spectrum was computed without eigenvectors')
    return gram_schmidt(spectrum.eigenvectors, grid=spectrum.grid)


def kernel_diagonal(system):
    """
    u_jk(x_i, x_i) = Σ_n φ_n(x_i, j) conj(φ_n(x_i, k)).
    """
    phi = system.functions
    matrices = np.einsum('nij,nik->ijk', phi, np.conj(phi))
    matrices = 0.5 * (matrices + np.conj(np.swapaxes(matrices, 1, 2)))
    return KernelDiagonal(system.grid, matrices)


def projection_defect(system, pairs=DEFAULT_PAIRS, seed=0):
    """
    max over sampled node pairs (x, z) of ||∫ U(x,y) U(y,z) dy - U(x,z)||.

    The y integral is Φ(x) C Φ(z)* with C[n, m] = ∫ φ_n(y)* φ_m(y) dy.
    Nodes are drawn with probability proportional to Tr U(x,x), and the
    peak node is always paired with itself.
    """
    if not system.size:
        return 0.0
    phi = system.functions
    overlap = system.gram().T
    density = np.einsum('nij,nij->i', phi, np.conj(phi)).real
    total = density.sum()
    if total <= 0:
        return 0.0
    rng = np.random.default_rng(seed)
    chosen = rng.choice(system.grid.n_interior, size=(pairs, 2), p=density / total)
    peak = int(np.argmax(density))
    chosen = np.vstack([[[peak, peak]], chosen])

    defect = 0.0
    for x, z in chosen:
        left = phi[:, x, :].T
        right = np.conj(phi[:, z, :])
        kernel = left.dot(right)
        composed = left.dot(overlap).dot(right)
        defect = max(defect, float(np.linalg.norm(composed - kernel, 2)))
    return defect


def sobolev_lhs(kernel):
    """
    ∫ Tr[U(x,x)³] dx.
    """
    return float(integrate(kernel.trace_power(3)))


def kinetic_energy(system):
    """
    Σ_n Σ_j ∫ |φ_n'(x,j)|² dx with the central difference stencil.
    """
    total = 0.0
    for function in system.functions:
        derivative = differentiate(GridFunction(system.grid, function)).values
        total += float(integrate(GridFunction(system.grid, (np.abs(derivative) ** 2).sum(axis=1))))
    return total


def check_sobolev(system):
    """
    :rtype: ltlab.report.CheckReport
    """
    lhs = sobolev_lhs(kernel_diagonal(system))
    rhs = kinetic_energy(system)
    passed = lhs <= rhs + SOBOLEV_TOL * (1.0 + rhs)
    logger.debug('sobolev N={} M={}: lhs={:.6g} rhs={:.6g}'.format(system.size, system.channels, lhs, rhs))
    return CheckReport(
        'sobolev', lhs, rhs, passed,
        meta={"N": system.size, "M": system.channels, "h": system.grid.spacing,
              "gram_defect": system.gram_defect()},
    )


def agmon_check(f, grid=None):
    """
    sup |f(x_i)|² against ∫ |f f'|.

    :param f: scalar GridFunction, or an array together with *grid*.
    """
    if isinstance(f, GridFunction):
        grid, values = f.grid, np.asarray(f.values)
    else:
        if grid is None:
            raise InvalidArgument('agmon_check needs a grid for a raw array')
        values = np.asarray(f)
    if values.ndim != 1:
        raise InvalidArgument('agmon_check takes a scalar function, got shape {}'.format(values.shape))
    sup_sq = float(np.max(np.abs(values) ** 2)) if values.size else 0.0
    derivative = differentiate(GridFunction(grid, values)).values
    integral = float(integrate(GridFunction(grid, np.abs(values * derivative))))
    return CheckReport(
        'agmon', sup_sq, integral, sup_sq <= integral + AGMON_TOL,
        meta={"sup_sq": sup_sq, "integral": integral, "h": grid.spacing},
    )


def dilated_gaussian(grid, b=1.0, center=0.0):
    """
    b^(1/2) φ(b (x - center)) with φ(x) = π^(-1/4) exp(-x²/2), unit L² norm.
    """
    y = b * (grid.nodes - center)
    return GridFunction(grid, np.sqrt(b) * np.pi ** -0.25 * np.exp(-0.5 * y * y))


def gaussian_system(grid, b=1.0):
    return OrthonormalSystem(grid, dilated_gaussian(grid, b).values[None, :])


def random_system(size, channels, seed, grid=None):
    """
    Orthonormalized random Gaussian bumps with complex channel amplitudes.
    """
    if size < 0 or channels < 1:
        raise InvalidArgument('need N >= 0 and M >= 1, got N={} M={}'.format(size, channels))
    if grid is None:
        grid = default_grid(channels)
    rng = np.random.default_rng(seed)
    raw = []
    for _ in range(size):
        center = rng.uniform(-5.0, 5.0)
        width = rng.uniform(0.5, 2.0)
        amplitudes = rng.standard_normal(channels) + 1j * rng.standard_normal(channels)
        profile = np.exp(-((grid.nodes - center) / width) ** 2)
        raw.append(profile[:, None] * amplitudes[None, :])
    return gram_schmidt(raw, grid=grid, channels=channels)


def equality_grid():
    """
    Fine grid on which the Gaussian equality cases resolve to 1e-6.
    """
    return Grid(10.0, 19999)
