# -*- coding: utf-8 -*-
"""
Scalar and Hermitian matrix-valued potential families V >= 0.

A :class:`PotentialSpec` is a JSON-friendly description
(``{"family": ..., "params": ..., "M": ...}``); :func:`sample` evaluates it
on a :class:`~ltlab.grid.Grid` into a :class:`MatrixPotentialField`.
"""
import json
import math

import numpy as np

from ltlab import logger
from ltlab.exceptions import InvalidArgument, NotPSDError
from ltlab.grid import GridFunction, integrate
from ltlab.utils import complex_array, json_dumps

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10

POSCHL_TELLER = 'poschl_teller'
SQUARE_WELL = 'square_well'
GAUSSIAN_WELL = 'gaussian_well'
MATRIX_DIAGONAL = 'matrix_diagonal'
MATRIX_CONJUGATED = 'matrix_conjugated'
MATRIX_GAUSSIAN_MIX = 'matrix_gaussian_mix'
CUSTOM_SAMPLED = 'custom_sampled'

FAMILIES = (
    POSCHL_TELLER,
    SQUARE_WELL,
    GAUSSIAN_WELL,
    MATRIX_DIAGONAL,
    MATRIX_CONJUGATED,
    MATRIX_GAUSSIAN_MIX,
    CUSTOM_SAMPLED,
)

SCALAR_FAMILIES = (POSCHL_TELLER, SQUARE_WELL, GAUSSIAN_WELL)


def _encode_matrix(matrix):
    matrix = np.asarray(matrix, dtype=complex)
    return {"real": matrix.real.tolist(), "imag": matrix.imag.tolist()}


def _sech(y):
    # overflow-free form of 1/cosh
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


def _min_eigenvalue(matrix):
    return float(np.linalg.eigvalsh(matrix).min())


class PotentialSpec(object):
    """
    Description of a potential family and its parameters.

    *params* holds only JSON values (matrices as ``{"real", "imag"}``
    nested lists, nested specs as dicts) so that serialization round-trips
    bit for bit.
    """

    def __init__(self, family, params, channels=None):
        if family not in FAMILIES:
            raise InvalidArgument('unknown potential family {!r}'.format(family))
        self.family = family
        self.params = json.loads(json_dumps(params))
        self._parsed = None
        self.channels = self._validate()
        if channels is not None and int(channels) != self.channels:
            raise InvalidArgument('{} spec has M={}, got M={}'.format(family, self.channels, channels))

    # Constructors

    @classmethod
    def poschl_teller(cls, s, b=1.0):
        return cls(POSCHL_TELLER, {"s": float(s), "b": float(b)})

    @classmethod
    def square_well(cls, depth, width, center=0.0):
        return cls(SQUARE_WELL, {"depth": float(depth), "width": float(width), "center": float(center)})

    @classmethod
    def gaussian_well(cls, amplitude, width, center=0.0):
        return cls(GAUSSIAN_WELL, {"amplitude": float(amplitude), "width": float(width), "center": float(center)})

    @classmethod
    def matrix_diagonal(cls, blocks):
        return cls(MATRIX_DIAGONAL, {"blocks": [block.to_dict() for block in blocks]})

    @classmethod
    def matrix_conjugated(cls, base, unitary):
        return cls(MATRIX_CONJUGATED, {"base": base.to_dict(), "unitary": _encode_matrix(unitary)})

    @classmethod
    def matrix_gaussian_mix(cls, bumps):
        """
        :param bumps: (B_k, center_k, width_k) with B_k Hermitian PSD
        :type bumps: list[tuple]
        """
        return cls(MATRIX_GAUSSIAN_MIX, {"bumps": [
            {"matrix": _encode_matrix(np.atleast_2d(matrix)), "center": float(center), "width": float(width)}
            for matrix, center, width in bumps
        ]})

    @classmethod
    def custom_sampled(cls, half_width, values):
        """
        :param values: (n, M, M) samples on the interior nodes of
            ``Grid(half_width, n)``; scalar samples of shape (n,) are accepted.
        """
        values = np.asarray(values, dtype=complex)
        if values.ndim == 1:
            values = values[:, None, None]
        return cls(CUSTOM_SAMPLED, {"half_width": float(half_width), "values": _encode_matrix(values)})

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["family"], data["params"], data.get("M"))
        except (KeyError, TypeError) as err:
            raise InvalidArgument('malformed potential spec: {!r}'.format(err))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"family": self.family, "params": self.params, "M": self.channels}

    def to_json(self):
        return json_dumps(self.to_dict())

    # Validation

    def _validate(self):
        p = self.params
        family = self.family
        try:
            if family == POSCHL_TELLER:
                if not (p["s"] > 0 and p["b"] > 0):
                    raise InvalidArgument('poschl_teller needs s > 0 and b > 0, got {!r}'.format(p))
                return 1
            if family == SQUARE_WELL:
                p.setdefault("center", 0.0)
                if not (p["depth"] >= 0 and p["width"] > 0):
                    raise InvalidArgument('square_well needs depth >= 0 and width > 0, got {!r}'.format(p))
                return 1
            if family == GAUSSIAN_WELL:
                p.setdefault("center", 0.0)
                if not (p["amplitude"] >= 0 and p["width"] > 0):
                    raise InvalidArgument('gaussian_well needs amplitude >= 0 and width > 0, got {!r}'.format(p))
                return 1
            if family == MATRIX_DIAGONAL:
                blocks = [PotentialSpec.from_dict(block) for block in p["blocks"]]
                if not blocks:
                    raise InvalidArgument('matrix_diagonal needs at least one block')
                self._parsed = blocks
                return sum(block.channels for block in blocks)
            if family == MATRIX_CONJUGATED:
                base = PotentialSpec.from_dict(p["base"])
                unitary = np.atleast_2d(complex_array(p["unitary"]))
                if unitary.shape != (base.channels, base.channels):
                    raise InvalidArgument('unitary has shape {}, base has M={}'.format(unitary.shape, base.channels))
                defect = np.abs(unitary.conj().T.dot(unitary) - np.eye(base.channels)).max()
                if defect > UNITARY_TOL:
                    raise InvalidArgument('matrix is not unitary (defect {:.3g})'.format(defect))
                self._parsed = (base, unitary)
                return base.channels
            if family == MATRIX_GAUSSIAN_MIX:
                bumps = []
                for bump in p["bumps"]:
                    matrix = np.atleast_2d(complex_array(bump["matrix"]))
                    self._check_hermitian_psd(matrix)
                    if not bump["width"] > 0:
                        raise InvalidArgument('bump width must be > 0, got {!r}'.format(bump["width"]))
                    bumps.append((matrix, float(bump["center"]), float(bump["width"])))
                if not bumps:
                    raise InvalidArgument('matrix_gaussian_mix needs at least one bump')
                sizes = set(matrix.shape for matrix, _, _ in bumps)
                if len(sizes) != 1:
                    raise InvalidArgument('bump matrices have different shapes: {}'.format(sorted(sizes)))
                self._parsed = bumps
                return bumps[0][0].shape[0]
            if family == CUSTOM_SAMPLED:
                values = complex_array(p["values"])
                if values.ndim != 3 or values.shape[1] != values.shape[2]:
                    raise InvalidArgument('custom_sampled values must have shape (n, M, M)')
                if not p["half_width"] > 0:
                    raise InvalidArgument('custom_sampled half_width must be > 0')
                for matrix in values:
                    self._check_hermitian_psd(matrix)
                self._parsed = values
                return values.shape[1]
        except (KeyError, TypeError) as err:
            raise InvalidArgument('missing or malformed {} parameter: {!r}'.format(family, err))
        raise InvalidArgument('unknown potential family {!r}'.format(family))

    @staticmethod
    def _check_hermitian_psd(matrix):
        scale = max(1.0, float(np.abs(matrix).max()))
        if np.abs(matrix - matrix.conj().T).max() > HERMITIAN_TOL * scale:
            raise InvalidArgument('matrix is not Hermitian')
        smallest = _min_eigenvalue((matrix + matrix.conj().T) / 2)
        if smallest < -PSD_TOL:
            raise NotPSDError('matrix is not positive semidefinite (min eigenvalue {:.3g})'.format(smallest),
                              min_eigenvalue=smallest)

    # Evaluation

    def evaluate(self, x):
        """
        V at arbitrary points.

        :param x: points
        :type x: array-like
        :return: array of shape (len(x), M, M), complex
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        p = self.params
        family = self.family
        if family in SCALAR_FAMILIES:
            return self._evaluate_scalar(x)[:, None, None].astype(complex)
        if family == MATRIX_DIAGONAL:
            out = np.zeros((x.size, self.channels, self.channels), dtype=complex)
            offset = 0
            for block in self._parsed:
                m = block.channels
                out[:, offset:offset + m, offset:offset + m] = block.evaluate(x)
                offset += m
            return out
        if family == MATRIX_CONJUGATED:
            base, unitary = self._parsed
            return np.einsum('ji,njk,kl->nil', unitary.conj(), base.evaluate(x), unitary)
        if family == MATRIX_GAUSSIAN_MIX:
            out = np.zeros((x.size, self.channels, self.channels), dtype=complex)
            for matrix, center, width in self._parsed:
                profile = np.exp(-((x - center) / width) ** 2)
                out += profile[:, None, None] * matrix[None, :, :]
            return out
        if family == CUSTOM_SAMPLED:
            values = self._parsed
            half_width = p["half_width"]
            n = values.shape[0]
            h = 2.0 * half_width / (n + 1)
            xp = -half_width + h * np.arange(n + 2)
            out = np.zeros((x.size, self.channels, self.channels), dtype=complex)
            padded = np.zeros((n + 2,) + values.shape[1:], dtype=complex)
            padded[1:-1] = values
            for j in range(self.channels):
                for k in range(self.channels):
                    out[:, j, k] = (np.interp(x, xp, padded[:, j, k].real, left=0.0, right=0.0) +
                                    1j * np.interp(x, xp, padded[:, j, k].imag, left=0.0, right=0.0))
            return out
        raise InvalidArgument('unknown potential family {!r}'.format(family))

    def _evaluate_scalar(self, x):
        p = self.params
        if self.family == POSCHL_TELLER:
            s, b = p["s"], p["b"]
            return s * (s + 1.0) * b * b * _sech(b * x) ** 2
        if self.family == SQUARE_WELL:
            return np.where(np.abs(x - p["center"]) < p["width"] / 2.0, p["depth"], 0.0)
        return p["amplitude"] * np.exp(-((x - p["center"]) / p["width"]) ** 2)

    def breakpoints(self):
        """
        Points where V is discontinuous (adaptive quadrature hints).
        """
        if self.family == SQUARE_WELL:
            half = self.params["width"] / 2.0
            return [self.params["center"] - half, self.params["center"] + half]
        if self.family == MATRIX_DIAGONAL:
            return sorted(set(x for block in self._parsed for x in block.breakpoints()))
        if self.family == MATRIX_CONJUGATED:
            return self._parsed[0].breakpoints()
        return []

    def depth(self):
        """
        Upper bound of max_x ||V(x)||, used to size eigenvalue windows.
        """
        p = self.params
        if self.family == POSCHL_TELLER:
            return p["s"] * (p["s"] + 1.0) * p["b"] ** 2
        if self.family == SQUARE_WELL:
            return p["depth"]
        if self.family == GAUSSIAN_WELL:
            return p["amplitude"]
        if self.family == MATRIX_DIAGONAL:
            return max(block.depth() for block in self._parsed)
        if self.family == MATRIX_CONJUGATED:
            return self._parsed[0].depth()
        if self.family == MATRIX_GAUSSIAN_MIX:
            return sum(float(np.linalg.eigvalsh(matrix).max()) for matrix, _, _ in self._parsed)
        return float(max(np.linalg.eigvalsh(matrix).max() for matrix in self._parsed))

    def scaled(self, c):
        """
        Spec of V_c(x) = c^2 V(c x).
        """
        if not c > 0:
            raise InvalidArgument('scale must be > 0, got {!r}'.format(c))
        p = self.params
        if self.family == POSCHL_TELLER:
            return PotentialSpec.poschl_teller(p["s"], p["b"] * c)
        if self.family == SQUARE_WELL:
            return PotentialSpec.square_well(p["depth"] * c * c, p["width"] / c, p["center"] / c)
        if self.family == GAUSSIAN_WELL:
            return PotentialSpec.gaussian_well(p["amplitude"] * c * c, p["width"] / c, p["center"] / c)
        if self.family == MATRIX_DIAGONAL:
            return PotentialSpec.matrix_diagonal([block.scaled(c) for block in self._parsed])
        if self.family == MATRIX_CONJUGATED:
            base, unitary = self._parsed
            return PotentialSpec.matrix_conjugated(base.scaled(c), unitary)
        if self.family == MATRIX_GAUSSIAN_MIX:
            return PotentialSpec.matrix_gaussian_mix([
                (matrix * c * c, center / c, width / c) for matrix, center, width in self._parsed
            ])
        raise InvalidArgument('cannot rescale a {} potential'.format(self.family))

    @property
    def label(self):
        p = self.params
        if self.family == POSCHL_TELLER:
            return 'poschl_teller(s={:g},b={:g})'.format(p["s"], p["b"])
        if self.family == SQUARE_WELL:
            return 'square_well(depth={:g},width={:g})'.format(p["depth"], p["width"])
        if self.family == GAUSSIAN_WELL:
            return 'gaussian_well(amplitude={:g},width={:g},center={:g})'.format(
                p["amplitude"], p["width"], p["center"])
        if self.family == MATRIX_DIAGONAL:
            return 'diag[{}]'.format(','.join(block.label for block in self._parsed))
        if self.family == MATRIX_CONJUGATED:
            return 'conj[{}]'.format(self._parsed[0].label)
        if self.family == MATRIX_GAUSSIAN_MIX:
            return 'gaussian_mix(M={},K={})'.format(self.channels, len(self._parsed))
        return 'custom(M={},n={})'.format(self.channels, self._parsed.shape[0])

    def __eq__(self, other):
        return isinstance(other, PotentialSpec) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return '<PotentialSpec {}>'.format(self.label)


class MatrixPotentialField(object):
    """
    Per-node M x M Hermitian PSD samples of a potential on a grid.
    """

    def __init__(self, grid, samples):
        samples = np.asarray(samples, dtype=complex)
        if samples.ndim != 3 or samples.shape[0] != grid.n_interior or samples.shape[1] != samples.shape[2]:
            raise InvalidArgument('samples must have shape ({}, M, M), got {}'.format(
                grid.n_interior, samples.shape))
        self.grid = grid
        self.samples = samples
        self._eigenvalues = None

    @property
    def channels(self):
        return self.samples.shape[1]

    M = channels

    def hermiticity_defect(self):
        return float(np.abs(self.samples - np.conj(np.swapaxes(self.samples, 1, 2))).max())

    def node_eigenvalues(self):
        """
        Eigenvalues of V(x_i), shape (n, M), ascending per node.
        """
        if self._eigenvalues is None:
            self._eigenvalues = np.linalg.eigvalsh(self.samples)
        return self._eigenvalues

    def min_eigenvalue(self):
        return float(self.node_eigenvalues().min())

    def check_psd(self):
        mu = self.node_eigenvalues()
        node = int(np.argmin(mu.min(axis=1)))
        smallest = float(mu[node].min())
        if smallest < -PSD_TOL:
            raise NotPSDError(
                'potential is not PSD at x={:g} (min eigenvalue {:.3g})'.format(self.grid.nodes[node], smallest),
                min_eigenvalue=smallest,
                node=node,
            )

    def trace_power(self, p):
        """
        Node values Tr[V(x_i)^p].
        """
        self.check_psd()
        mu = np.clip(self.node_eigenvalues(), 0.0, None)
        return (mu ** p).sum(axis=1)

    def __repr__(self):
        return '<MatrixPotentialField M={} {!r}>'.format(self.channels, self.grid)


def sample(spec, grid):
    """
    Evaluate *spec* on the interior nodes of *grid*.

    Samples are symmetrized as (A + A*)/2; a node eigenvalue below the PSD
    tolerance raises :class:`~ltlab.exceptions.NotPSDError`.
    """
    values = spec.evaluate(grid.nodes)
    values = 0.5 * (values + np.conj(np.swapaxes(values, 1, 2)))
    field = MatrixPotentialField(grid, values)
    field.check_psd()
    return field


def trace_power_integral(field, p):
    """
    Integral of Tr[V(x)^p] over the box.
    """
    if not p >= 1:
        raise InvalidArgument('trace power must be >= 1, got {!r}'.format(p))
    return float(integrate(GridFunction(field.grid, field.trace_power(p))))


def random_psd_potential(channels, bumps, seed):
    """
    Seeded Hermitian PSD Gaussian mixture: B_k = A_k A_k* rescaled to
    operator norm in [0.5, 10], centers in [-5, 5], widths in [0.5, 3].

    :type channels: int
    :type bumps: int
    :type seed: int
    :rtype: PotentialSpec
    """
    if channels < 1 or bumps < 1:
        raise InvalidArgument('need channels >= 1 and bumps >= 1, got M={} K={}'.format(channels, bumps))
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(bumps):
        a = rng.standard_normal((channels, channels)) + 1j * rng.standard_normal((channels, channels))
        matrix = a.dot(a.conj().T)
        matrix = 0.5 * (matrix + matrix.conj().T)
        amplitude = rng.uniform(0.5, 10.0)
        matrix *= amplitude / np.linalg.eigvalsh(matrix).max()
        center = rng.uniform(-5.0, 5.0)
        width = rng.uniform(0.5, 3.0)
        specs.append((matrix, center, width))
    logger.debug('random_psd_potential M={} K={} seed={}'.format(channels, bumps, seed))
    return PotentialSpec.matrix_gaussian_mix(specs)


def random_unitary(channels, seed):
    """
    Haar-ish unitary from the QR factorization of a complex Gaussian matrix.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((channels, channels)) + 1j * rng.standard_normal((channels, channels))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases[None, :]


def poschl_teller_levels(s, b=1.0):
    """
    Exact bound states -b^2 (s - k)^2, k < s, ascending.

    >>> poschl_teller_levels(2.0)
    [-4.0, -1.0]
    """
    levels = []
    k = 0
    while s - k > 0:
        levels.append(-(b * (s - k)) ** 2)
        k += 1
    return levels


def poschl_teller_trace_integral(s, b=1.0, p=1.5):
    """
    Whole-line value of the integral of V^p for V = s(s+1) b^2 sech^2(bx):
    (s(s+1) b^2)^p * B(1/2, p) / b.
    """
    depth = s * (s + 1.0) * b * b
    beta = math.gamma(0.5) * math.gamma(p) / math.gamma(p + 0.5)
    return depth ** p * beta / b
