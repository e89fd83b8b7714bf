import math
import unittest

import numpy as np
from sure import expect

from ltlab.exceptions import InvalidArgument, RankDeficientError
from ltlab.grid import Grid, GridFunction
from ltlab.potentials import random_unitary
from ltlab.sobolev import (
    OrthonormalSystem,
    agmon_check,
    check_sobolev,
    dilated_gaussian,
    equality_grid,
    gaussian_system,
    gram_schmidt,
    kernel_diagonal,
    kinetic_energy,
    projection_defect,
    random_system,
    sobolev_lhs,
)

GAUSSIAN_LHS = 1.0 / (math.pi * math.sqrt(3.0))  # 0.183776...


class TestGaussianEqualityCases(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.grid = equality_grid()

    def test_sobolev_on_the_gaussian(self):
        report = check_sobolev(gaussian_system(self.grid))
        expect(report.passed).to.be.true
        expect(report.lhs).to.be.within(0.183776 - 1e-6, 0.183776 + 1e-6)
        expect(report.rhs).to.be.within(0.5 - 1e-6, 0.5 + 1e-6)
        self.assertAlmostEqual(report.lhs, GAUSSIAN_LHS, places=6)

    def test_ratio_is_dilation_invariant(self):
        base = check_sobolev(gaussian_system(self.grid, 1.0))
        dilated = check_sobolev(gaussian_system(self.grid, 2.0))
        # both sides scale as b^2
        self.assertAlmostEqual(dilated.lhs, 4.0 * base.lhs, places=5)
        self.assertAlmostEqual(dilated.lhs / dilated.rhs, base.lhs / base.rhs, places=6)

    def test_agmon_equality(self):
        report = agmon_check(dilated_gaussian(self.grid))
        expect(report.passed).to.be.true
        expect(report.meta["sup_sq"]).to.be.within(0.564190 - 1e-6, 0.564190 + 1e-6)
        expect(report.meta["integral"]).to.be.within(0.564190 - 1e-6, 0.564190 + 1e-6)


class TestGramSchmidt(unittest.TestCase):
    def test_orthonormal_output(self):
        grid = Grid(8.0, 799)
        raw = [np.exp(-(grid.nodes - c) ** 2) for c in (-1.0, 0.0, 1.5)]
        system = gram_schmidt(raw, grid=grid)
        expect(system.size).to.equal(3)
        expect(system.gram_defect()).to.be.lower_than(1e-12)

    def test_accepts_grid_functions(self):
        grid = Grid(8.0, 799)
        system = gram_schmidt([GridFunction(grid, np.exp(-grid.nodes ** 2))])
        expect(system.grid).to.equal(grid)
        expect(system.channels).to.equal(1)

    def test_rank_deficiency(self):
        grid = Grid(8.0, 799)
        bump = np.exp(-grid.nodes ** 2)
        with self.assertRaises(RankDeficientError) as context:
            gram_schmidt([bump, np.exp(-(grid.nodes - 1) ** 2), 2.0 * bump], grid=grid)
        expect(context.exception.index).to.equal(2)
        expect(gram_schmidt).when.called_with([np.zeros(799)], grid=grid).to.throw(RankDeficientError)

    def test_raw_arrays_need_a_grid(self):
        expect(gram_schmidt).when.called_with([np.ones(5)]).to.throw(InvalidArgument)

    def test_shape_is_checked(self):
        expect(OrthonormalSystem).when.called_with(Grid(1.0, 3), np.zeros((2, 4, 1))).to.throw(InvalidArgument)


class TestKernel(unittest.TestCase):
    def setUp(self):
        self.system = random_system(4, 3, 17, Grid(12.0, 599))

    def test_trace_integral_counts_functions(self):
        self.assertAlmostEqual(kernel_diagonal(self.system).trace_integral(), 4.0, places=10)

    def test_kernel_eigenvalues_are_nonnegative(self):
        eigenvalues = kernel_diagonal(self.system).eigenvalues()
        expect(eigenvalues.min()).to.be.greater_than(-1e-14)

    def test_projection_defect(self):
        expect(projection_defect(self.system)).to.be.lower_than(1e-8)
        # a non-orthonormal system is not a projection
        expect(projection_defect(self.system.rescaled(0.9))).to.be.greater_than(1e-3)

    def test_constant_unitary_rotation_is_invariant(self):
        rotated = self.system.rotated(random_unitary(3, 8))
        expect(rotated.gram_defect()).to.be.lower_than(1e-10)
        self.assertAlmostEqual(
            sobolev_lhs(kernel_diagonal(rotated)), sobolev_lhs(kernel_diagonal(self.system)), places=10)
        self.assertAlmostEqual(kinetic_energy(rotated), kinetic_energy(self.system), places=8)


class TestSobolevChecks(unittest.TestCase):
    def test_random_systems_pass(self):
        for seed in range(5):
            system = random_system(1 + seed, 1 + seed % 3, seed, Grid(12.0, 599))
            report = check_sobolev(system)
            expect(report.passed).to.be.true
            expect(report.meta["N"]).to.equal(1 + seed)
            expect(report.meta["gram_defect"]).to.be.lower_than(1e-10)

    def test_empty_system(self):
        system = random_system(0, 2, 0, Grid(5.0, 99))
        expect(system.size).to.equal(0)
        report = check_sobolev(system)
        expect(report.lhs).to.equal(0.0)
        expect(report.passed).to.be.true
        expect(projection_defect(system)).to.equal(0.0)

    def test_random_system_arguments(self):
        expect(random_system).when.called_with(-1, 1, 0).to.throw(InvalidArgument)
        expect(random_system).when.called_with(1, 0, 0).to.throw(InvalidArgument)

    def test_agmon_arguments(self):
        grid = Grid(5.0, 99)
        expect(agmon_check).when.called_with(np.ones(99)).to.throw(InvalidArgument)
        expect(agmon_check).when.called_with(np.ones((99, 2)), grid).to.throw(InvalidArgument)

    def test_agmon_is_strict_for_two_bumps(self):
        # ∫|ff'| is the total variation of f²/2: about 2 sup² for two separated bumps
        grid = Grid(8.0, 799)
        f = np.exp(-(grid.nodes - 2.0) ** 2) + np.exp(-(grid.nodes + 2.0) ** 2)
        report = agmon_check(f, grid)
        expect(report.passed).to.be.true
        expect(report.rhs / report.lhs).to.be.within(1.9, 2.0)
