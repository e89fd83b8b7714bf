import os
import unittest

from flaky import flaky
from mock import patch
from sure import expect

from ltlab import cache, logging_context
from ltlab.campaign import (
    CampaignConfig,
    derive_seed,
    expand,
    resolve_workers,
    run_campaign,
    run_case,
)
from ltlab.constants import C_THM1
from ltlab.exceptions import InvalidArgument
from ltlab.potentials import PotentialSpec
from ltlab.utils import json_dumps
from tests.data import data_path


PT2 = PotentialSpec.poschl_teller(2).to_dict()


class TestDeriveSeed(unittest.TestCase):
    def test_depends_on_every_part(self):
        seeds = {derive_seed(1, 0, 0), derive_seed(1, 0, 1), derive_seed(1, 1, 0), derive_seed(2, 0, 0)}
        expect(seeds).to.have.length_of(4)
        expect(derive_seed(7, 3, 5)).to.equal(derive_seed(7, 3, 5))


class TestCampaignConfig(unittest.TestCase):
    def test_from_file(self):
        config = CampaignConfig.from_file(data_path("campaign.json"))
        expect(config.format).to.equal("json")
        expect(config.seed).to.equal(1)
        expect(config.workers).to.equal(1)
        expect(config.jobs).to.have.length_of(4)
        expect(config.jobs[0]["spec"]).to.equal(PT2)
        expect(config.jobs[0]["gammas"]).to.equal([1.0, 1.5])
        expect(config.jobs[2]["d"]).to.equal(2)
        expect(config.jobs[2]["spec2"]["family"]).to.equal("gaussian_well")

    def test_defaults(self):
        config = CampaignConfig.from_dict({"jobs": [{"spec": PT2}]})
        expect(config.format).to.equal("human")
        expect(config.jobs[0]["check"]).to.equal("lieb_thirring")
        expect(config.jobs[0]["gammas"]).to.equal([1.0])

    def test_invalid_configs(self):
        cases = [
            {},
            {"jobs": [{"spec": PT2}], "format": "xml"},
            {"jobs": [{"spec": PT2, "check": "energy"}]},
            {"jobs": [{"spec": PT2, "d": 3}]},
            {"jobs": [{"spec": PT2, "spec2": PT2, "d": 2, "gammas": [0.5]}]},
            {"jobs": [{"gammas": [1]}]},
            {"jobs": [{"spec": PT2, "d": 2}]},
            {"jobs": [{"spec_file": "missing.json"}]},
        ]
        for data in cases:
            expect(CampaignConfig.from_dict).when.called_with(data).to.throw(InvalidArgument)

    def test_unreadable_file(self):
        expect(CampaignConfig.from_file).when.called_with(data_path("nope.json")).to.throw(InvalidArgument)


class TestExpand(unittest.TestCase):
    def test_case_counts(self):
        cases = expand(CampaignConfig.from_file(data_path("campaign.json")))
        # 2 gammas + 2 random specs + 1 separable pair + 2 sobolev systems
        expect(cases).to.have.length_of(7)
        expect([case[0] for case in cases]).to.equal([0, 0, 1, 1, 2, 3, 3])
        expect([case[1] for case in cases]).to.equal([0, 1, 0, 1, 0, 0, 1])
        expect(cases[-1][2]).to.equal("sobolev")

    def test_random_specs_are_seeded(self):
        config = CampaignConfig.from_dict({"seed": 4, "jobs": [{"random": {"M": [1, 2], "K": 1, "count": 3}}]})
        first = expand(config)
        second = expand(config)
        expect(json_dumps(first)).to.equal(json_dumps(second))
        expect([case[3]["spec"]["M"] for case in first]).to.equal([1, 2, 1])

    def test_proof_chain_ignores_gammas(self):
        config = CampaignConfig.from_dict({"jobs": [{"check": "proof_chain", "spec": PT2, "gammas": [1, 2]}]})
        cases = expand(config)
        expect(cases).to.have.length_of(1)
        expect(cases[0][2]).to.equal("proof_chain")


class TestRunCampaign(unittest.TestCase):
    def setUp(self):
        cache.clear_memory_cache()

    def tearDown(self):
        logging_context.reset()

    def test_run_from_file(self):
        config = CampaignConfig.from_file(data_path("campaign.json"))
        reports = run_campaign(config)
        expect(reports).to.have.length_of(7)
        expect(all(report.passed for report in reports)).to.be.true
        self.assertAlmostEqual(reports[0].ratio, 0.21658, places=4)
        expect(reports[1].gamma).to.equal(1.5)
        expect(reports[4].d).to.equal(2)
        expect(reports[5].name).to.equal("sobolev")
        expect(reports[5].label).to.match(r"^random\(N=\d,M=\d,seed=\d+\)$")

    def test_deterministic(self):
        config = CampaignConfig.from_file(data_path("campaign.json"))
        first = json_dumps(run_campaign(config))
        cache.clear_memory_cache()
        second = json_dumps(run_campaign(config))
        expect(first).to.equal(second)

    @flaky(max_runs=2)
    def test_worker_count_does_not_change_results(self):
        config = CampaignConfig.from_dict({
            "seed": 2,
            "jobs": [
                {"random": {"M": 1, "K": 2, "count": 3}, "grid": {"L": 10, "h": 0.04}},
                {"check": "sobolev", "count": 2, "N": 3, "M": 2, "grid": {"L": 10, "h": 0.04}},
            ],
        })
        serial = json_dumps(run_campaign(config, workers=1))
        cache.clear_memory_cache()
        parallel = json_dumps(run_campaign(config, workers=2))
        expect(parallel).to.equal(serial)

    def test_failed_case_becomes_a_report(self):
        reports = run_case((0, 3, "lieb_thirring", {"spec": PT2, "d": 1, "gamma": 0.2, "grid": None}))
        expect(reports).to.have.length_of(1)
        expect(reports[0].passed).to.be.false
        expect(reports[0].label).to.equal("job=0 case=3")
        expect(reports[0].meta["error"]).to.contain("InvalidArgument")
        expect(logging_context.get("job")).to.equal("")


class TestResolveWorkers(unittest.TestCase):
    def test_precedence(self):
        with patch.dict(os.environ, {"LTLAB_WORKERS": "3"}):
            expect(resolve_workers(4, 2)).to.equal(4)
            expect(resolve_workers(None, 2)).to.equal(3)
        with patch.dict(os.environ, {"LTLAB_WORKERS": ""}):
            expect(resolve_workers(None, 2)).to.equal(2)
            with patch("ltlab.settings.LTLAB_WORKERS", 5):
                expect(resolve_workers()).to.equal(5)


class TestFullSizeCampaigns(unittest.TestCase):
    def setUp(self):
        cache.clear_memory_cache()

    def test_matrix_and_sobolev_campaigns(self):
        config = CampaignConfig.from_file(data_path("campaign_large.json"))
        reports = run_campaign(config, workers=config.workers)
        lieb_thirring = [r for r in reports if r.kind == "lieb_thirring"]
        sobolev = [r for r in reports if r.kind == "check"]
        expect(lieb_thirring).to.have.length_of(200)
        expect(sobolev).to.have.length_of(100)

        expect(sorted(set(r.spec.channels for r in lieb_thirring))).to.equal([1, 2, 3, 4])
        failed = [r.label for r in reports if not r.passed]
        expect(failed).to.equal([])
        expect(max(r.ratio for r in lieb_thirring)).to.be.lower_than(C_THM1)
        expect(set(r.name for r in sobolev)).to.equal({"sobolev"})
