# -*- coding: utf-8 -*-
"""
Campaigns: a JSON file listing check jobs, expanded into independent
cases and run through a process pool.

Example::

    {
        "seed": 1,
        "workers": 4,
        "jobs": [
            {"spec_file": "pt2.json", "gammas": [1, 1.5]},
            {"random": {"M": [1, 2, 3, 4], "K": 3, "count": 200}},
            {"spec": {...}, "spec2": {...}, "d": 2, "gammas": [1]},
            {"check": "sobolev", "count": 100, "N": 8, "M": 3},
            {"check": "proof_chain", "spec_file": "pt1.json"}
        ]
    }
"""
import json
import os

import numpy as np

from ltlab import logger, logging_context, settings
from ltlab.exceptions import InvalidArgument, LtlabError
from ltlab.grid import Grid, default_grid, grid_for_spacing
from ltlab.ltcheck import check_lieb_thirring, check_proof_chain, check_theorem2_separable
from ltlab.potentials import PotentialSpec, random_psd_potential
from ltlab.report import CheckReport
from ltlab.sobolev import check_sobolev, random_system
from ltlab.utils import as_list, format_exc, pool_map

LIEB_THIRRING = 'lieb_thirring'
SOBOLEV = 'sobolev'
PROOF_CHAIN = 'proof_chain'
CHECKS = (LIEB_THIRRING, SOBOLEV, PROOF_CHAIN)

FORMATS = ('json', 'csv', 'human')


def derive_seed(seed, job, case):
    """
    Seed of one case, independent of execution order.

    >>> derive_seed(1, 0, 3) == derive_seed(1, 0, 3)
    True
    """
    return int(np.random.SeedSequence([seed, job, case]).generate_state(1)[0])


class CampaignConfig(object):
    """
    Parsed campaign file.

    :param jobs: job dicts; relative ``spec_file`` paths are resolved
        against *base_dir*.
    """

    def __init__(self, jobs, fmt='human', seed=0, workers=None, base_dir='.'):
        if fmt not in FORMATS:
            raise InvalidArgument('unknown format {!r}, expected one of {}'.format(fmt, FORMATS))
        self.format = fmt
        self.seed = int(seed)
        self.workers = workers
        self.base_dir = base_dir
        self.jobs = [self._validate(index, dict(job)) for index, job in enumerate(jobs)]

    @classmethod
    def from_dict(cls, data, base_dir='.'):
        if not isinstance(data, dict) or "jobs" not in data:
            raise InvalidArgument('campaign config needs a "jobs" list')
        return cls(data["jobs"], fmt=data.get("format", "human"), seed=data.get("seed", 0),
                   workers=data.get("workers"), base_dir=base_dir)

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as fd:
                data = json.load(fd)
        except (IOError, OSError, ValueError) as err:
            raise InvalidArgument('cannot read campaign {}: {}'.format(path, err))
        return cls.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))

    def _load_spec(self, job, key):
        if key in job and job[key] is not None:
            return PotentialSpec.from_dict(job[key])
        file_key = key + "_file"
        if file_key in job:
            path = os.path.join(self.base_dir, job[file_key])
            if not os.path.exists(path):
                raise InvalidArgument('spec file not found: {}'.format(path))
            try:
                with open(path) as fd:
                    return PotentialSpec.from_json(fd.read())
            except ValueError as err:
                raise InvalidArgument('cannot parse spec file {}: {}'.format(path, err))
        return None

    def _validate(self, index, job):
        check = job.get("check", LIEB_THIRRING)
        if check not in CHECKS:
            raise InvalidArgument('job {}: unknown check {!r}'.format(index, check))
        job["check"] = check
        job["gammas"] = [float(g) for g in as_list(job.get("gammas", job.get("gamma", 1.0)))]
        job["d"] = int(job.get("d", 1))
        if job["d"] not in (1, 2):
            raise InvalidArgument('job {}: d must be 1 or 2, got {}'.format(index, job["d"]))
        if job["d"] >= 2 and any(g < 1 for g in job["gammas"]):
            raise InvalidArgument('job {}: gamma must be >= 1 for d >= 2'.format(index))
        if check == SOBOLEV:
            return job
        spec = self._load_spec(job, "spec")
        if spec is not None:
            job["spec"] = spec.to_dict()
        elif "random" not in job:
            raise InvalidArgument('job {}: needs "spec", "spec_file" or "random"'.format(index))
        if job["d"] == 2:
            spec2 = self._load_spec(job, "spec2")
            if spec is None or spec2 is None:
                raise InvalidArgument('job {}: d=2 needs both "spec" and "spec2"'.format(index))
            job["spec2"] = spec2.to_dict()
        return job

    def to_dict(self):
        return {"jobs": self.jobs, "format": self.format, "seed": self.seed, "workers": self.workers}


def resolve_workers(cli_workers=None, config_workers=None):
    """
    --workers, then LTLAB_WORKERS from the environment, then the campaign
    file, then the settings default.
    """
    if cli_workers:
        return int(cli_workers)
    if os.environ.get("LTLAB_WORKERS"):
        return int(os.environ["LTLAB_WORKERS"])
    if config_workers:
        return int(config_workers)
    return int(settings.LTLAB_WORKERS)


def _grid(job, channels):
    overrides = job.get("grid")
    if not overrides:
        return default_grid(channels)
    half_width = overrides.get("L", settings.LTLAB_HALF_WIDTH)
    if "n_interior" in overrides:
        return Grid(half_width, overrides["n_interior"])
    spacing = overrides.get("h", settings.LTLAB_SPACING if channels == 1 else settings.LTLAB_MATRIX_SPACING)
    return grid_for_spacing(half_width, spacing)


def expand(config):
    """
    Cases as plain tuples ``(job_index, case_index, kind, payload)``.
    """
    cases = []
    for job_index, job in enumerate(config.jobs):
        check = job["check"]
        if check == SOBOLEV:
            for case_index in range(int(job.get("count", 1))):
                seed = derive_seed(config.seed, job_index, case_index)
                rng = np.random.default_rng(seed)
                payload = {
                    "N": int(rng.integers(1, int(job.get("N", 8)) + 1)),
                    "M": int(rng.integers(1, int(job.get("M", 3)) + 1)),
                    "seed": seed,
                    "grid": job.get("grid"),
                }
                cases.append((job_index, case_index, SOBOLEV, payload))
            continue

        if "spec" in job:
            specs = [job["spec"]]
        else:
            random_job = job["random"]
            channels = as_list(random_job.get("M", 1))
            bumps = as_list(random_job.get("K", 1))
            specs = []
            for i in range(int(random_job.get("count", 1))):
                seed = derive_seed(config.seed, job_index, i)
                spec = random_psd_potential(channels[i % len(channels)], bumps[i % len(bumps)], seed)
                specs.append(spec.to_dict())

        case_index = 0
        for spec in specs:
            if check == PROOF_CHAIN:
                cases.append((job_index, case_index, PROOF_CHAIN, {"spec": spec, "grid": job.get("grid")}))
                case_index += 1
                continue
            for gamma in job["gammas"]:
                payload = {"spec": spec, "spec2": job.get("spec2"), "d": job["d"], "gamma": gamma,
                           "grid": job.get("grid")}
                cases.append((job_index, case_index, LIEB_THIRRING, payload))
                case_index += 1
    return cases


def run_case(case):
    """
    Run one case; an LtlabError becomes a failed CheckReport.

    :rtype: list
    """
    job_index, case_index, kind, payload = case
    with logging_context.scope(job=job_index, case=case_index):
        try:
            return _run_case(kind, payload)
        except LtlabError as err:
            logger.error('case failed: {}'.format(format_exc(err)))
            return [CheckReport(kind, float('nan'), float('nan'), False,
                                label='job={} case={}'.format(job_index, case_index),
                                meta={"error": format_exc(err)})]


def _run_case(kind, payload):
    if kind == SOBOLEV:
        system = random_system(payload["N"], payload["M"], payload["seed"], _grid(payload, payload["M"]))
        report = check_sobolev(system)
        report.label = 'random(N={},M={},seed={})'.format(payload["N"], payload["M"], payload["seed"])
        return [report]
    spec = PotentialSpec.from_dict(payload["spec"])
    grid = _grid(payload, spec.channels)
    if kind == PROOF_CHAIN:
        return check_proof_chain(spec, grid)
    if payload["d"] == 2:
        spec2 = PotentialSpec.from_dict(payload["spec2"])
        return [check_theorem2_separable(spec, spec2, payload["gamma"], grid)]
    return [check_lieb_thirring(spec, grid, payload["gamma"])]


def run_campaign(config, workers=1):
    """
    Reports of every case, ordered by job index then case index.
    """
    cases = expand(config)
    logger.info('campaign: {} jobs, {} cases, {} workers'.format(len(config.jobs), len(cases), workers))
    results = pool_map(run_case, cases, workers)
    reports = [report for result in results for report in result]
    _log_maxima(reports)
    return reports


def _log_maxima(reports):
    maxima = {}
    for report in reports:
        if getattr(report, "kind", None) != LIEB_THIRRING or report.ratio is None:
            continue
        key = (report.d, report.gamma)
        maxima[key] = max(maxima.get(key, 0.0), report.ratio)
    for (d, gamma), ratio in sorted(maxima.items()):
        logger.info('campaign: max ratio {:.6f} at d={} gamma={:g}'.format(ratio, d, gamma))
