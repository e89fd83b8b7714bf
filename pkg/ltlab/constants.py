# -*- coding: utf-8 -*-
"""
Named Lieb-Thirring constants.

``C_THM1`` is the matrix 1D constant at γ=1, ``R`` its ratio to the
semiclassical constant, ``C_KELLER`` the one-bound-state constant.
"""
import math

import numpy as np
from scipy import integrate as quadrature
from scipy.special import beta, gamma as gamma_fn

from ltlab.exceptions import InvalidArgument, NumericError

C_THM1 = 2.0 / (3.0 * math.sqrt(3.0))
C_KELLER = 4.0 / (3.0 * math.sqrt(3.0) * math.pi)
R = math.pi / math.sqrt(3.0)

QUAD_TOL = 1e-12


def _check_d_gamma(d, gamma):
    if int(d) != d or d < 1:
        raise InvalidArgument('dimension must be an integer >= 1, got {!r}'.format(d))
    if not gamma >= 0:
        raise InvalidArgument('gamma must be >= 0, got {!r}'.format(gamma))


def sphere_area(d):
    """
    |S^(d-1)|, the area of the unit sphere in R^d.

    >>> round(sphere_area(1), 12)
    2.0
    """
    if int(d) != d or d < 1:
        raise InvalidArgument('dimension must be an integer >= 1, got {!r}'.format(d))
    return float(2.0 * math.pi ** (d / 2.0) / gamma_fn(d / 2.0))


def lt_classical(d, gamma):
    """
    Semiclassical constant (2π)^-d ∫ (1 - |ξ|²)_+^γ dξ in closed form,
    Γ(γ+1) / (2^d π^(d/2) Γ(γ+1+d/2)).

    >>> round(lt_classical(1, 1), 7)
    0.2122066
    """
    _check_d_gamma(d, gamma)
    return float(gamma_fn(gamma + 1.0) / (2.0 ** d * math.pi ** (d / 2.0) * gamma_fn(gamma + 1.0 + d / 2.0)))


def lt_classical_quadrature(d, gamma):
    """
    Same constant by adaptive radial quadrature; d in {1, 2, 3}.
    """
    _check_d_gamma(d, gamma)
    if d > 3:
        raise InvalidArgument('radial quadrature supports d <= 3, got {}'.format(d))
    value, error = quadrature.quad(
        lambda r: (1.0 - r * r) ** gamma * r ** (d - 1),
        0.0, 1.0, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200,
    )
    if not np.isfinite(value) or error > 1e-10:
        raise NumericError('radial quadrature did not converge (d={}, gamma={}, error={:.3g})'.format(
            d, gamma, error))
    return float(sphere_area(d) * value / (2.0 * math.pi) ** d)


def lt_classical_variant(d, gamma):
    """
    The (1 - |ξ|)_+^γ reading: |S^(d-1)| B(d, γ+1) / (2π)^d.
    It gives 1/(2π), not 2/(3π), at d=1, γ=1.

    >>> round(lt_classical_variant(1, 1) * 2 * math.pi, 12)
    1.0
    """
    _check_d_gamma(d, gamma)
    return float(sphere_area(d) * beta(d, gamma + 1.0) / (2.0 * math.pi) ** d)


def lt_bound(d, gamma):
    """
    R · L^cl_{d,γ}, the bound constant for γ >= 1.
    """
    return R * lt_classical(d, gamma)


class ConstantsTable(object):
    """
    Lcl and bound per (d, γ), plus the standalone constants.
    """

    def __init__(self, entries=()):
        self.c_thm1 = C_THM1
        self.r = R
        self.c_keller = C_KELLER
        self.twice_lcl_1_1 = 2.0 * lt_classical(1, 1)
        self.entries = {}
        for d, gamma in entries:
            self.add(d, gamma)

    def add(self, d, gamma):
        lcl = lt_classical(d, gamma)
        self.entries[(d, gamma)] = {"Lcl": lcl, "bound": R * lcl}
        return self.entries[(d, gamma)]

    def ordered(self):
        return self.c_keller < self.c_thm1 < self.twice_lcl_1_1

    def to_dict(self):
        return {
            "c_thm1": self.c_thm1,
            "R": self.r,
            "c_keller": self.c_keller,
            "2Lcl_1_1": self.twice_lcl_1_1,
            "ordered": self.ordered(),
            "entries": [
                {"d": d, "gamma": gamma, "Lcl": value["Lcl"], "bound": value["bound"]}
                for (d, gamma), value in sorted(self.entries.items())
            ],
        }

    def __repr__(self):
        return '<ConstantsTable c_thm1={:.7f} R={:.7f} c_keller={:.7f}>'.format(
            self.c_thm1, self.r, self.c_keller)


def named_constants(entries=()):
    table = ConstantsTable(entries)
    if not table.ordered():
        raise NumericError('expected c_keller < c_thm1 < 2 Lcl(1,1), got {!r}'.format(table))
    return table


def keller_minimize(a):
    """
    Minimize f(X) = X - a X^(1/3) over X >= 0.

    :return: (x_star, min_value) with x_star = (a/3)^(3/2) and
        min_value = -C_THM1 a^(3/2).
    """
    if not a > 0:
        raise InvalidArgument('a must be > 0, got {!r}'.format(a))
    x_star = (a / 3.0) ** 1.5
    min_value = -C_THM1 * a ** 1.5

    def f(x):
        return x - a * np.cbrt(x)

    for delta in (1e-3, 1e-2, 1e-1):
        step = delta * max(x_star, 1e-300)
        if min(f(x_star - step), f(x_star + step)) < f(x_star):
            raise NumericError('x_star={!r} is not a local minimum of X - {!r} X^(1/3)'.format(x_star, a))
    return x_star, min_value
