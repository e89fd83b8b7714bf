import shutil
import tempfile
import unittest

from sure import expect

from ltlab import cache, settings
from ltlab.grid import Grid
from ltlab.potentials import PotentialSpec
from ltlab.spectra import converged_spectrum


class TestSpectrumCache(unittest.TestCase):
    def setUp(self):
        cache.clear_memory_cache()
        self.cache_dir = tempfile.mkdtemp()
        self.saved = (settings.LTLAB_ENABLE_DISK_CACHE, settings.LTLAB_CACHE_DIR)
        settings.put_setting("LTLAB_ENABLE_DISK_CACHE", True)
        settings.put_setting("LTLAB_CACHE_DIR", self.cache_dir)

    def tearDown(self):
        settings.put_setting("LTLAB_ENABLE_DISK_CACHE", self.saved[0])
        settings.put_setting("LTLAB_CACHE_DIR", self.saved[1])
        cache.clear_memory_cache()
        shutil.rmtree(self.cache_dir, ignore_errors=True)

    def test_keys_are_stable(self):
        expect(cache.cache_key({"a": 1, "b": 2}, 0.5)).to.equal(cache.cache_key({"b": 2, "a": 1}, 0.5))
        expect(cache.cache_key({"a": 1}, 0.5)).to_not.equal(cache.cache_key({"a": 1}, 0.25))

    def test_memory_then_disk(self):
        key = cache.cache_key("spectrum", 1)
        expect(cache.get_cached(key)).to.be.none
        cache.set_cached(key, {"negatives": [-1.0]})
        cache.clear_memory_cache()
        # only the disk copy is left
        expect(cache.get_cached(key)).to.equal({"negatives": [-1.0]})
        expect(cache.SPECTRUM_MEMORY_CACHE).to.have.key(key)

    def test_disabled_disk_cache(self):
        settings.put_setting("LTLAB_ENABLE_DISK_CACHE", False)
        key = cache.cache_key("spectrum", 2)
        cache.set_cached(key, [1])
        cache.clear_memory_cache()
        expect(cache.get_cached(key)).to.be.none

    def test_spectra_are_reused(self):
        spec, grid = PotentialSpec.poschl_teller(1), Grid(10.0, 499)
        first = converged_spectrum(spec, grid)
        cache.clear_memory_cache()
        second = converged_spectrum(spec, grid)
        expect(second.to_dict()).to.equal(first.to_dict())

    def test_memory_cache_is_bounded(self):
        saved = settings.LTLAB_MEMORY_CACHE_ITEMS
        settings.put_setting("LTLAB_ENABLE_DISK_CACHE", False)
        settings.put_setting("LTLAB_MEMORY_CACHE_ITEMS", 2)
        try:
            for i in range(3):
                cache.set_cached(cache.cache_key("spectrum", i), i)
            expect(cache.SPECTRUM_MEMORY_CACHE).to.have.length_of(2)
            expect(cache.get_cached(cache.cache_key("spectrum", 0))).to.be.none
            expect(cache.get_cached(cache.cache_key("spectrum", 2))).to.equal(2)
        finally:
            settings.put_setting("LTLAB_MEMORY_CACHE_ITEMS", saved)

    def test_remember(self):
        store = {}
        for i in range(5):
            cache.remember(store, i, i * i, limit=3)
        expect(list(store)).to.equal([2, 3, 4])
        cache.remember(store, "x", 0, limit=0)
        expect(list(store)).to.equal(["x"])
