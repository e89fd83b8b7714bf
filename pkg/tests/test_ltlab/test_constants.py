import math
import unittest

from sure import expect

from ltlab.constants import (
    C_KELLER,
    C_THM1,
    R,
    keller_minimize,
    lt_bound,
    lt_classical,
    lt_classical_quadrature,
    lt_classical_variant,
    named_constants,
    sphere_area,
)
from ltlab.exceptions import InvalidArgument


class TestNamedConstants(unittest.TestCase):
    def test_values(self):
        expect(round(C_THM1, 5)).to.equal(0.3849)
        expect(round(R, 4)).to.equal(1.8138)
        expect(round(C_KELLER, 4)).to.equal(0.2450)
        expect(round(2 * lt_classical(1, 1), 5)).to.equal(0.42441)

    def test_ordering(self):
        table = named_constants()
        expect(table.ordered()).to.be.true
        expect(table.c_keller).to.be.lower_than(table.c_thm1)
        expect(table.c_thm1).to.be.lower_than(table.twice_lcl_1_1)

    def test_bound_at_gamma_one_is_c_thm1(self):
        self.assertAlmostEqual(lt_bound(1, 1), C_THM1, places=14)

    def test_table_dict(self):
        data = named_constants([(1, 1), (2, 1.5)]).to_dict()
        expect(sorted(data)).to.equal(["2Lcl_1_1", "R", "c_keller", "c_thm1", "entries", "ordered"])
        expect([(e["d"], e["gamma"]) for e in data["entries"]]).to.equal([(1, 1), (2, 1.5)])
        self.assertAlmostEqual(data["entries"][0]["bound"], C_THM1, places=14)


class TestSemiclassical(unittest.TestCase):
    def test_closed_forms(self):
        self.assertAlmostEqual(lt_classical(1, 1), 2.0 / (3.0 * math.pi), places=14)
        self.assertAlmostEqual(lt_classical(2, 1), 1.0 / (8.0 * math.pi), places=14)
        self.assertAlmostEqual(lt_classical(1, 1.5), 0.1875, places=14)
        self.assertAlmostEqual(lt_classical(3, 1), 0.0067547, places=7)

    def test_quadrature_agrees(self):
        for d in (1, 2, 3):
            for gamma in (1.0, 1.5, 2.0, 3.0):
                expect(abs(lt_classical_quadrature(d, gamma) - lt_classical(d, gamma))).to.be.lower_than(1e-10)

    def test_quadrature_dimension_limit(self):
        expect(lt_classical_quadrature).when.called_with(4, 1.0).to.throw(InvalidArgument)

    def test_variant_gives_one_over_two_pi(self):
        self.assertAlmostEqual(lt_classical_variant(1, 1), 1.0 / (2.0 * math.pi), places=14)
        expect(lt_classical_variant(1, 1)).to_not.equal(lt_classical(1, 1))

    def test_sphere_area(self):
        self.assertAlmostEqual(sphere_area(1), 2.0, places=14)
        self.assertAlmostEqual(sphere_area(2), 2 * math.pi, places=14)
        self.assertAlmostEqual(sphere_area(3), 4 * math.pi, places=13)

    def test_invalid_arguments(self):
        expect(lt_classical).when.called_with(0, 1.0).to.throw(InvalidArgument)
        expect(lt_classical).when.called_with(1.5, 1.0).to.throw(InvalidArgument)
        expect(lt_classical).when.called_with(1, -0.5).to.throw(InvalidArgument)


class TestKellerMinimize(unittest.TestCase):
    def test_a_equals_three(self):
        x_star, value = keller_minimize(3.0)
        expect(abs(x_star - 1.0)).to.be.lower_than(1e-12)
        expect(abs(value + 2.0)).to.be.lower_than(1e-12)

    def test_min_value_scales(self):
        for a in (0.5, 2.0, 10.0):
            x_star, value = keller_minimize(a)
            self.assertAlmostEqual(value, x_star - a * x_star ** (1.0 / 3.0), places=12)

    def test_a_must_be_positive(self):
        expect(keller_minimize).when.called_with(0.0).to.throw(InvalidArgument)
