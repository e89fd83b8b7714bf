# -*- coding: utf-8 -*-
"""
Uniform discretization of the real line, truncated to [-L, L] with
Dirichlet ends: boundary values are 0 and only interior nodes are stored.
"""
import numpy as np

from ltlab import settings
from ltlab.exceptions import InvalidArgument


class Grid(object):
    """
    Interior nodes x_i = -L + i*h, i = 1..n, with h = 2L/(n+1).

    Instances are immutable; all derived arrays are computed once.
    """
    __slots__ = ('_half_width', '_n_interior', '_spacing', '_nodes', '_weights')

    def __init__(self, half_width, n_interior):
        if not half_width > 0:
            raise InvalidArgument('half_width must be > 0, got {!r}'.format(half_width))
        if int(n_interior) != n_interior or n_interior < 3:
            raise InvalidArgument('n_interior must be an integer >= 3, got {!r}'.format(n_interior))
        self._half_width = float(half_width)
        self._n_interior = int(n_interior)
        self._spacing = 2.0 * self._half_width / (self._n_interior + 1)
        nodes = -self._half_width + self._spacing * np.arange(1, self._n_interior + 1)
        nodes.flags.writeable = False
        self._nodes = nodes
        weights = simpson_weights(self._n_interior, self._spacing)
        weights.flags.writeable = False
        self._weights = weights

    @property
    def half_width(self):
        return self._half_width

    @property
    def n_interior(self):
        return self._n_interior

    @property
    def spacing(self):
        return self._spacing

    h = spacing

    @property
    def nodes(self):
        return self._nodes

    @property
    def weights(self):
        return self._weights

    def refined(self):
        """
        Same box, half the spacing: 2n+1 interior nodes.
        """
        return Grid(self._half_width, 2 * self._n_interior + 1)

    def inner(self, f, g):
        """
        Quadrature inner product sum_i w_i sum_j f(x_i, j) conj(g(x_i, j)).

        :param f: values of shape (n,) or (n, M)
        :param g: same shape as *f*
        """
        f = np.asarray(f)
        g = np.asarray(g)
        prod = f * np.conj(g)
        if prod.ndim > 1:
            prod = prod.reshape(prod.shape[0], -1).sum(axis=1)
        return np.dot(self._weights, prod)

    def to_dict(self):
        return {"L": self._half_width, "n_interior": self._n_interior}

    def __eq__(self, other):
        return (isinstance(other, Grid) and
                self._half_width == other._half_width and
                self._n_interior == other._n_interior)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self._half_width, self._n_interior))

    def __repr__(self):
        return '<Grid L={} n_interior={} h={:g}>'.format(
            self._half_width, self._n_interior, self._spacing)


class GridFunction(object):
    """
    Samples on the interior nodes of a grid, one value (or one row of M
    channel values) per node.
    """

    def __init__(self, grid, values):
        values = np.asarray(values)
        if values.shape[:1] != (grid.n_interior,):
            raise InvalidArgument('expected {} values, got shape {}'.format(grid.n_interior, values.shape))
        self.grid = grid
        self.values = values

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            other = other.values
        return GridFunction(self.grid, self.values * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, GridFunction):
            other = other.values
        return GridFunction(self.grid, self.values + other)

    def conj(self):
        return GridFunction(self.grid, np.conj(self.values))

    def __repr__(self):
        return '<GridFunction {!r} shape={}>'.format(self.grid, self.values.shape)


def simpson_weights(n_interior, h):
    """
    Composite Simpson weights restricted to the interior nodes.

    The two boundary nodes carry zero values, so their weights are dropped.
    When the number of intervals (n_interior + 1) is odd, the last three
    intervals use Simpson's 3/8 rule.

    >>> simpson_weights(3, 3.0)
    array([4., 2., 4.])
    """
    n_points = n_interior + 2
    intervals = n_points - 1
    w = np.zeros(n_points)
    if intervals % 2 == 0:
        simpson_end = intervals
    else:
        simpson_end = intervals - 3
    if simpson_end > 0:
        w[0:simpson_end + 1:2] += 2.0
        w[1:simpson_end:2] += 4.0
        w[0] -= 1.0
        w[simpson_end] -= 1.0
        w[:simpson_end + 1] *= h / 3.0
    if simpson_end < intervals:
        w[simpson_end:] += np.array([1.0, 3.0, 3.0, 1.0]) * (3.0 * h / 8.0)
    return w[1:-1]


def make_grid(half_width, n_interior):
    """
    >>> make_grid(1.0, 3).nodes
    array([-0.5,  0. ,  0.5])
    """
    return Grid(half_width, n_interior)


def grid_for_spacing(half_width, spacing):
    """
    Grid on [-L, L] whose spacing is as close as possible to *spacing*.
    """
    if not spacing > 0:
        raise InvalidArgument('spacing must be > 0, got {!r}'.format(spacing))
    n_interior = int(round(2.0 * half_width / spacing)) - 1
    return Grid(half_width, n_interior)


def default_grid(channels=1):
    spacing = settings.LTLAB_SPACING if channels == 1 else settings.LTLAB_MATRIX_SPACING
    return grid_for_spacing(settings.LTLAB_HALF_WIDTH, spacing)


def _values(f):
    if isinstance(f, GridFunction):
        return f.grid, f.values
    raise InvalidArgument('expected a GridFunction, got {!r}'.format(type(f)))


def integrate(f):
    """
    Composite Simpson approximation of the integral over [-L, L].

    Multi-channel values are integrated channel-wise.
    """
    grid, values = _values(f)
    return np.tensordot(grid.weights, values, axes=(0, 0))


def differentiate(f):
    """
    Central difference (f[i+1] - f[i-1]) / 2h with zero ghost values at
    both ends, so constants pick up a boundary artifact on the end nodes.
    """
    grid, values = _values(f)
    padded_shape = (values.shape[0] + 2,) + values.shape[1:]
    padded = np.zeros(padded_shape, dtype=values.dtype if np.iscomplexobj(values) else float)
    padded[1:-1] = values
    return GridFunction(grid, (padded[2:] - padded[:-2]) / (2.0 * grid.spacing))


def richardson(v_h, v_h2, order):
    """
    Richardson extrapolation of values at spacings h and h/2.

    >>> round(richardson(1.04, 1.01, 2), 12)
    1.0
    """
    if int(order) != order or order <= 0:
        raise InvalidArgument('order must be a positive integer, got {!r}'.format(order))
    factor = 2.0 ** order
    return (factor * v_h2 - v_h) / (factor - 1.0)
