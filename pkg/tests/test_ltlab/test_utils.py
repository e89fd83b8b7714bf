import unittest

from sure import expect

from ltlab import settings
from ltlab.utils import as_list, pool_map


def square(x):
    return x * x


def eps_cut(_):
    return settings.LTLAB_EPS_CUT


class TestAsList(unittest.TestCase):
    def test_as_list(self):
        expect(as_list(2)).to.equal([2])
        expect(as_list([1, 2])).to.equal([1, 2])
        expect(as_list((3,))).to.equal([3])


class TestPoolMap(unittest.TestCase):
    def setUp(self):
        self.saved = settings.LTLAB_EPS_CUT

    def tearDown(self):
        settings.put_setting("LTLAB_EPS_CUT", self.saved)

    def test_serial(self):
        expect(pool_map(square, range(4))).to.equal([0, 1, 4, 9])
        expect(pool_map(square, [])).to.equal([])

    def test_pool_keeps_order(self):
        expect(pool_map(square, range(6), workers=2)).to.equal([0, 1, 4, 9, 16, 25])

    def test_workers_see_current_settings(self):
        settings.put_setting("LTLAB_EPS_CUT", 1e-9)
        expect(pool_map(eps_cut, range(3), workers=2)).to.equal([1e-9] * 3)
