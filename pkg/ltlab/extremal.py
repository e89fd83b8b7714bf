# -*- coding: utf-8 -*-
"""
Derivative-free search for potentials maximizing the Lieb-Thirring ratio
Σ|λ_n|^γ / ∫ V^(γ+1/2) within a parametric family.
"""
from collections import OrderedDict
import itertools

import numpy as np

from ltlab import logger
from ltlab.cache import remember
from ltlab.constants import C_THM1, lt_bound
from ltlab.exceptions import InvalidArgument, LtlabError, SearchFailure
from ltlab.grid import default_grid
from ltlab.ltcheck import check_lieb_thirring
from ltlab.potentials import PotentialSpec
from ltlab.utils import format_exc, json_dumps, pool_map

FAMILIES = OrderedDict([
    ('pt', OrderedDict([('s', (0.1, 5.0)), ('b', (1.0, 1.0))])),
    ('gaussian', OrderedDict([('amplitude', (0.1, 20.0)), ('width', (0.2, 5.0))])),
    ('gaussian_pair', OrderedDict([
        ('amplitude_1', (0.1, 20.0)),
        ('amplitude_2', (0.1, 20.0)),
        ('width', (0.2, 3.0)),
        ('separation', (0.0, 8.0)),
    ])),
    ('square', OrderedDict([('depth', (0.1, 20.0)), ('width', (0.2, 5.0))])),
])

ALIASES = {
    'poschl_teller': 'pt',
    'gaussian_well': 'gaussian',
    'square_well': 'square',
}

MAX_SWEEP_AXES = 3
DIAMETER_TOL = 1e-6
SAFEGUARD_TOL = 1e-6

# reflection, expansion, contraction, shrink
ALPHA, CHI, RHO, SIGMA = 1.0, 2.0, 0.5, 0.5

_EVALUATIONS = {}


def family_spec(family, params):
    """
    PotentialSpec for a search family and a parameter mapping.
    """
    family = ALIASES.get(family, family)
    if family == 'pt':
        return PotentialSpec.poschl_teller(params['s'], params['b'])
    if family == 'gaussian':
        return PotentialSpec.gaussian_well(params['amplitude'], params['width'])
    if family == 'gaussian_pair':
        half = params['separation'] / 2.0
        return PotentialSpec.matrix_gaussian_mix([
            ([[params['amplitude_1']]], -half, params['width']),
            ([[params['amplitude_2']]], half, params['width']),
        ])
    if family == 'square':
        return PotentialSpec.square_well(params['depth'], params['width'])
    raise InvalidArgument('unknown search family {!r}, expected one of {}'.format(family, list(FAMILIES)))


class SearchSpace(object):
    """
    A family, a box of parameter bounds, γ and an optional bound-state
    count target. Axes with ``lower == upper`` are fixed.

    :param bounds: overrides of the family's default bounds.
    :type bounds: dict[str, (float, float)]
    """

    def __init__(self, family, bounds=None, gamma=1.0, bound_states=None, grid=None):
        family = ALIASES.get(family, family)
        if family not in FAMILIES:
            raise InvalidArgument('unknown search family {!r}, expected one of {}'.format(family, list(FAMILIES)))
        self.family = family
        self.bounds = OrderedDict(FAMILIES[family])
        for name, (lower, upper) in (bounds or {}).items():
            if name not in self.bounds:
                raise InvalidArgument('{} has no parameter {!r}'.format(family, name))
            self.bounds[name] = (float(lower), float(upper))
        for name, (lower, upper) in self.bounds.items():
            if not (np.isfinite(lower) and np.isfinite(upper)) or lower > upper:
                raise InvalidArgument('invalid bounds for {}: [{}, {}]'.format(name, lower, upper))
        self.gamma = float(gamma)
        self.bound_states = bound_states
        self.grid = grid if grid is not None else default_grid(1)

    @property
    def names(self):
        return list(self.bounds)

    @property
    def free(self):
        return [name for name, (lower, upper) in self.bounds.items() if lower < upper]

    def lower(self):
        return np.array([self.bounds[name][0] for name in self.free])

    def upper(self):
        return np.array([self.bounds[name][1] for name in self.free])

    def clamp(self, point):
        return np.clip(point, self.lower(), self.upper())

    def params(self, point=()):
        """
        Full parameter mapping for a point in the free coordinates.
        """
        values = OrderedDict((name, lower) for name, (lower, _) in self.bounds.items())
        for name, value in zip(self.free, point):
            values[name] = float(value)
        return values

    def center(self):
        return 0.5 * (self.lower() + self.upper())

    def refined(self):
        return SearchSpace(self.family, self.bounds, self.gamma, self.bound_states, self.grid.refined())

    def to_dict(self):
        return {
            "family": self.family,
            "bounds": OrderedDict((name, list(bound)) for name, bound in self.bounds.items()),
            "gamma": self.gamma,
            "bound_states": self.bound_states,
            "grid": self.grid.to_dict(),
        }

    def __repr__(self):
        return '<SearchSpace {} free={} gamma={:g}>'.format(self.family, self.free, self.gamma)


class Evaluation(object):
    __slots__ = ('params', 'ratio', 'error')

    def __init__(self, params, ratio=None, error=None):
        self.params = params
        self.ratio = ratio
        self.error = error

    @property
    def ok(self):
        return self.ratio is not None

    def __repr__(self):
        return '<Evaluation {} ratio={} error={}>'.format(dict(self.params), self.ratio, self.error)


def _raw_evaluation(spec, grid, gamma):
    """
    (ratio, bound-state count, error) for one potential, cached without
    any search constraint applied.
    """
    key = json_dumps([spec.to_dict(), grid.to_dict(), gamma])
    if key not in _EVALUATIONS:
        try:
            report = check_lieb_thirring(spec, grid, gamma)
            remember(_EVALUATIONS, key, (report.ratio or 0.0, len(report.spectrum_meta.get("negatives", [])), None))
        except LtlabError as err:
            logger.warning('evaluation failed for {}: {}'.format(spec.label, format_exc(err)))
            remember(_EVALUATIONS, key, (None, None, format_exc(err)))
    return _EVALUATIONS[key]


def evaluate(space, params):
    """
    LT ratio of ``family_spec(space.family, params)``; solver errors and
    infeasible points come back as an Evaluation without a ratio.
    """
    try:
        spec = family_spec(space.family, params)
    except LtlabError as err:
        return Evaluation(params, error=format_exc(err))
    ratio, count, error = _raw_evaluation(spec, space.grid, space.gamma)
    if error is not None:
        return Evaluation(params, error=error)
    if space.bound_states is not None and count != space.bound_states:
        return Evaluation(params, error='infeasible: {} bound states'.format(count))
    return Evaluation(params, ratio)


class SearchResult(object):
    """
    Best point of a search and the trace of every evaluation.
    """

    def __init__(self, space, evaluations, method, meta=None):
        self.space = space
        self.evaluations = list(evaluations)
        self.method = method
        self.meta = meta or {}
        successful = [e for e in self.evaluations if e.ok]
        if successful:
            best = min(successful, key=lambda e: (-e.ratio, tuple(e.params.values())))
            self.best_params = best.params
            self.best_ratio = best.ratio
        else:
            self.best_params = None
            self.best_ratio = None

    @property
    def evaluation_count(self):
        return len(self.evaluations)

    @property
    def failures(self):
        return [e for e in self.evaluations if not e.ok]

    def trace_rows(self):
        """
        (param values..., ratio) rows, one per evaluation, in call order.
        """
        return [list(e.params.values()) + [e.ratio] for e in self.evaluations]

    def to_dict(self):
        return {
            "method": self.method,
            "space": self.space.to_dict(),
            "best_params": self.best_params,
            "best_ratio": self.best_ratio,
            "evaluations": self.evaluation_count,
            "failures": len(self.failures),
            "trace_header": self.space.names + ["ratio"],
            "trace": self.trace_rows(),
            "meta": self.meta,
        }

    def __repr__(self):
        return '<SearchResult {} best_ratio={} evaluations={}>'.format(
            self.method, self.best_ratio, self.evaluation_count)


def _finish(space, evaluations, method):
    successful = [e for e in evaluations if e.ok]
    errors = [e.error for e in evaluations if e.error and not e.error.startswith('infeasible')]
    if evaluations and not successful and len(errors) == len(evaluations):
        raise SearchFailure(errors)
    result = SearchResult(space, evaluations, method, meta={
        "gamma": space.gamma,
        "bound": C_THM1 if space.gamma == 1 else lt_bound(1, space.gamma),
        "refined": False,
        "exceeds_bound": False,
    })
    return _safeguard(result)


def _safeguard(result):
    """
    A γ=1 ratio above the proven constant is a discretization artifact
    until the refined grid says otherwise.
    """
    space = result.space
    if result.best_ratio is None:
        return result
    if space.gamma == 1 and result.best_ratio > C_THM1 + SAFEGUARD_TOL:
        logger.warning('ratio {:.8f} above {:.8f} at {}, re-running on a finer grid'.format(
            result.best_ratio, C_THM1, dict(result.best_params)))
        check = evaluate(space.refined(), result.best_params)
        result.meta["refined"] = True
        if check.ok:
            result.best_ratio = check.ratio
        result.meta["exceeds_bound"] = bool(check.ok and check.ratio > C_THM1 + SAFEGUARD_TOL)
        if result.meta["exceeds_bound"]:
            logger.error('ratio {:.8f} still above {:.8f} after refinement'.format(check.ratio, C_THM1))
    elif result.best_ratio is not None:
        logger.info('{} gamma={:g}: best ratio {:.6f}, headroom {:.6f} to {:.6f}'.format(
            space.family, space.gamma, result.best_ratio, result.meta["bound"] - result.best_ratio,
            result.meta["bound"]))
    return result


def _evaluate_params(args):
    space, params = args
    return evaluate(space, params)


def sweep(space, points=11, workers=1):
    """
    Exhaustive lattice over the free axes (at most three), *points* per axis.
    """
    free = space.free
    if len(free) > MAX_SWEEP_AXES:
        raise InvalidArgument('sweep supports at most {} free parameters, got {}'.format(MAX_SWEEP_AXES, free))
    if points < 1:
        raise InvalidArgument('points must be >= 1, got {!r}'.format(points))
    axes = [np.linspace(lower, upper, points) for lower, upper in zip(space.lower(), space.upper())]
    lattice = [space.params(point) for point in itertools.product(*axes)]
    evaluations = pool_map(_evaluate_params, [(space, params) for params in lattice], workers)
    return _finish(space, evaluations, 'sweep')


def nelder_mead(space, start=None, budget=200):
    """
    Reflect / expand / contract / shrink simplex on the free parameters,
    maximizing the ratio. Points are clamped to the box; ties are broken
    by lexicographic parameter order.

    Stops when the simplex diameter drops below 1e-6 or *budget*
    evaluations have been spent. With fewer than n+1 evaluations
    available only *start* is evaluated.
    """
    n = len(space.free)
    start = space.center() if start is None else space.clamp(np.asarray(start, dtype=float))
    evaluations = []

    def f(point):
        evaluation = evaluate(space, space.params(point))
        evaluations.append(evaluation)
        return -evaluation.ratio if evaluation.ok else np.inf

    if n == 0 or budget < n + 1:
        f(start)
        return _finish(space, evaluations, 'nelder_mead')

    span = space.upper() - space.lower()
    simplex = [start]
    for axis in range(n):
        vertex = start.copy()
        step = 0.1 * span[axis]
        vertex[axis] = start[axis] + step if start[axis] + step <= space.upper()[axis] else start[axis] - step
        simplex.append(vertex)
    values = [f(vertex) for vertex in simplex]

    def order():
        ranked = sorted(zip(values, simplex), key=lambda pair: (pair[0], tuple(pair[1])))
        return [v for v, _ in ranked], [p for _, p in ranked]

    while len(evaluations) < budget:
        values, simplex = order()
        diameter = max(np.linalg.norm(p - simplex[0]) for p in simplex[1:])
        if diameter < DIAMETER_TOL:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        reflected = space.clamp(centroid + ALPHA * (centroid - worst))
        f_reflected = f(reflected)
        if values[0] <= f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
            continue
        if f_reflected < values[0]:
            if len(evaluations) >= budget:
                simplex[-1], values[-1] = reflected, f_reflected
                break
            expanded = space.clamp(centroid + CHI * (reflected - centroid))
            f_expanded = f(expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
            continue
        if len(evaluations) >= budget:
            break
        if f_reflected < values[-1]:
            contracted = space.clamp(centroid + RHO * (reflected - centroid))
            f_contracted = f(contracted)
            accept = f_contracted <= f_reflected
        else:
            contracted = space.clamp(centroid + RHO * (worst - centroid))
            f_contracted = f(contracted)
            accept = f_contracted < values[-1]
        if accept:
            simplex[-1], values[-1] = contracted, f_contracted
            continue
        for i in range(1, len(simplex)):
            if len(evaluations) >= budget:
                break
            simplex[i] = simplex[0] + SIGMA * (simplex[i] - simplex[0])
            values[i] = f(simplex[i])

    return _finish(space, evaluations, 'nelder_mead')


def _restart_job(args):
    space, start, budget = args
    return nelder_mead(space, start, budget)


def restarts(space, count=5, seed=0, budget=200, workers=1):
    """
    Nelder-Mead from *count* seeded uniform random starts.

    :rtype: list[SearchResult]
    """
    if count < 1:
        raise InvalidArgument('count must be >= 1, got {!r}'.format(count))
    rng = np.random.default_rng(seed)
    starts = [rng.uniform(space.lower(), space.upper()) for _ in range(count)]
    jobs = [(space, start, budget) for start in starts]
    results = pool_map(_restart_job, jobs, workers)
    ratios = [r.best_ratio for r in results if r.best_ratio is not None]
    if ratios:
        logger.info('{} restarts: best ratios in [{:.6f}, {:.6f}]'.format(count, min(ratios), max(ratios)))
    return results


def clear_evaluation_cache():
    _EVALUATIONS.clear()
