import json
import unittest

from click.testing import CliRunner
from mock import patch
from sure import expect

from ltlab import __version__, cache
from ltlab.command import cli, parse_range, run
from ltlab.constants import C_THM1
from ltlab.ltcheck import LTReport
from ltlab.potentials import PotentialSpec
from tests.data import data_path


class CommandTestCase(unittest.TestCase):
    def setUp(self):
        cache.clear_memory_cache()
        self.runner = CliRunner()

    def invoke(self, arguments):
        if isinstance(arguments, str):
            arguments = arguments.split(" ")
        return self.runner.invoke(cli, arguments, catch_exceptions=False)


class TestConstantsCommand(CommandTestCase):
    def test_human(self):
        result = self.invoke("constants")
        expect(result.exit_code).to.equal(0)
        expect(result.output).to.contain("0.2122066")
        expect(result.output).to.contain("0.3849002")
        expect(result.output).to.contain("1.8137994")

    def test_json(self):
        result = self.invoke("constants --d 2 --gamma 1 --quadrature --json")
        expect(result.exit_code).to.equal(0)
        data = json.loads(result.output)
        expect(data["d"]).to.equal(2)
        self.assertAlmostEqual(data["Lcl"], 0.0397887, places=7)
        self.assertAlmostEqual(data["Lcl_quadrature"], data["Lcl"], places=10)
        expect(data["ordered"]).to.be.true

    def test_json_and_csv_are_exclusive(self):
        result = self.runner.invoke(cli, ["constants", "--json", "--csv"])
        expect(result.exit_code).to.equal(2)


class TestCheckCommand(CommandTestCase):
    def test_poschl_teller(self):
        result = self.invoke(["check", "--spec", data_path("pt2.json"), "--L", "10", "--h", "0.02", "--json"])
        expect(result.exit_code).to.equal(0)
        reports = json.loads(result.output)
        expect(reports).to.have.length_of(1)
        self.assertAlmostEqual(reports[0]["ratio"], 0.21658, places=4)
        expect(reports[0]["pass"]).to.be.true

    def test_several_gammas_as_csv(self):
        result = self.invoke(["check", "--spec", data_path("pt1.json"), "--gamma", "1", "--gamma", "1.5",
                              "--L", "10", "--h", "0.02", "--csv"])
        expect(result.exit_code).to.equal(0)
        lines = result.output.strip().splitlines()
        expect(lines).to.have.length_of(3)
        expect(lines[2].split(",")[2]).to.equal("1.5")

    def test_separable(self):
        result = self.invoke(["check", "--spec", data_path("pt1.json"), "--d", "2",
                              "--sep", data_path("gaussian.json"), "--L", "10", "--h", "0.04", "--json"])
        expect(result.exit_code).to.equal(0)
        expect(json.loads(result.output)[0]["d"]).to.equal(2)

    def test_separable_needs_a_second_factor(self):
        result = self.runner.invoke(cli, ["check", "--spec", data_path("pt1.json"), "--d", "2"])
        expect(result.exit_code).to.equal(2)

    def test_failing_report_exits_one(self):
        failing = LTReport(PotentialSpec.poschl_teller(2), 1, 1.0, 10.0, 1.0, C_THM1)
        with patch("ltlab.command.check_lieb_thirring", return_value=failing):
            result = self.invoke(["check", "--spec", data_path("pt2.json")])
        expect(result.exit_code).to.equal(1)
        expect(result.output).to.contain("FAIL")

    def test_invalid_spec_exits_one(self):
        result = self.invoke(["check", "--spec", data_path("bad_family.json")])
        expect(result.exit_code).to.equal(1)

    def test_output_file(self):
        with self.runner.isolated_filesystem():
            result = self.invoke(["check", "--spec", data_path("pt1.json"), "--L", "10", "--h", "0.02",
                                  "--csv", "--out", "report.csv"])
            expect(result.exit_code).to.equal(0)
            expect(result.output).to.equal("")
            with open("report.csv") as fd:
                expect(fd.readline()).to.equal("spec,d,gamma,lhs,rhs,constant,ratio,pass\n")


class TestSobolevCommand(CommandTestCase):
    def test_random_system(self):
        result = self.invoke("sobolev --random --N 5 --M 2 --seed 3 --L 10 --h 0.05")
        expect(result.exit_code).to.equal(0)
        expect(result.output).to.contain("random(N=5,M=2,seed=3)")

    def test_gaussian_with_agmon(self):
        result = self.invoke("sobolev --agmon --json")
        expect(result.exit_code).to.equal(0)
        reports = json.loads(result.output)
        expect([r["name"] for r in reports]).to.equal(["sobolev", "agmon"])
        self.assertAlmostEqual(reports[0]["lhs"], 0.183776, places=5)


class TestSearchCommands(CommandTestCase):
    def test_sweep(self):
        result = self.invoke("sweep --param s=0.5:1 --points 3 --L 10 --h 0.02 --csv")
        expect(result.exit_code).to.equal(0)
        lines = result.output.strip().splitlines()
        expect(lines[0]).to.equal("s,b,ratio")
        expect(lines).to.have.length_of(4)

    def test_extremal(self):
        result = self.invoke("extremal --param s=0.3:0.7 --start s=0.4 --budget 8 --L 10 --h 0.02 --json")
        expect(result.exit_code).to.equal(0)
        data = json.loads(result.output)
        expect(data["method"]).to.equal("nelder_mead")
        expect(data["evaluations"]).to.be.lower_than(9)
        expect(data["trace"][0][0]).to.equal(0.4)

    def test_bad_range(self):
        result = self.runner.invoke(cli, ["sweep", "--param", "s"])
        expect(result.exit_code).to.equal(2)
        expect(parse_range("s=0.5")).to.equal(("s", (0.5, 0.5)))


class TestCampaignCommand(CommandTestCase):
    def test_campaign_uses_config_format(self):
        result = self.invoke(["campaign", data_path("campaign.json"), "--workers", "1"])
        expect(result.exit_code).to.equal(0)
        expect(json.loads(result.output)).to.have.length_of(7)

    def test_format_flag_wins(self):
        result = self.invoke(["campaign", data_path("campaign.json"), "--csv"])
        expect(result.exit_code).to.equal(0)
        expect(result.output.strip().splitlines()).to.have.length_of(8)


class TestMisc(CommandTestCase):
    def test_info_settings(self):
        result = self.invoke("info settings")
        expect(result.exit_code).to.equal(0)
        expect(result.output).to.contain("LTLAB_SPACING=0.01")
        expect(result.output).to_not.contain("numpy:")

    def test_version(self):
        result = self.invoke("--version")
        expect(result.output).to.contain(__version__)

    def test_run_exit_codes(self):
        expect(run(["constants"])).to.equal(0)
        expect(run(["check", "--bogus"])).to.equal(2)
        expect(run(["check", "--spec", data_path("bad_family.json")])).to.equal(1)

    def test_log_level(self):
        with patch("ltlab.command.log.set_level") as set_level:
            result = self.invoke("--log-level debug constants")
        expect(result.exit_code).to.equal(0)
        expect(set_level.call_count).to.equal(1)
        expect(set_level.call_args[0][0].upper()).to.equal("DEBUG")
        expect(self.runner.invoke(cli, ["--log-level", "loud", "constants"]).exit_code).to.equal(2)
