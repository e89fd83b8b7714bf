import hashlib
from sqlite3 import OperationalError

from diskcache import Cache

from ltlab import logger, settings
from ltlab.utils import json_dumps

SPECTRUM_MEMORY_CACHE = {}

HOUR = 3600


def cache_key(*parts):
    """
    Stable key for JSON-serializable parts.

    >>> cache_key({"a": 1}, 0.5) == cache_key({"a": 1}, 0.5)
    True
    """
    return "spectra/" + hashlib.sha1(json_dumps(parts).encode("utf-8")).hexdigest()


def remember(store, key, value, limit=None):
    """
    Put *value* in an in-memory *store*, dropping the oldest entries past *limit*
    (LTLAB_MEMORY_CACHE_ITEMS by default).

    >>> store = {}
    >>> for i in range(3): remember(store, i, i, limit=2)
    >>> sorted(store)
    [1, 2]
    """
    if limit is None:
        limit = settings.LTLAB_MEMORY_CACHE_ITEMS
    store[key] = value
    while len(store) > max(int(limit), 1):
        del store[next(iter(store))]


def get_cached(key):
    # 1/ memory cache
    if key in SPECTRUM_MEMORY_CACHE:
        return SPECTRUM_MEMORY_CACHE[key]

    # 2/ disk cache
    if settings.LTLAB_ENABLE_DISK_CACHE:
        try:
            # NB: Cache objects do not survive forks, so open one per call.
            cache = Cache(settings.LTLAB_CACHE_DIR)
            if key in cache:
                logger.debug("diskcache: getting key={} from cache_dir={}".format(key, settings.LTLAB_CACHE_DIR))
                value = cache[key]
                remember(SPECTRUM_MEMORY_CACHE, key, value)
                return value
        except OperationalError:
            logger.warning("diskcache: got an OperationalError, skipping cache usage")

    return


def set_cached(key, content):
    # 1/ memory cache
    remember(SPECTRUM_MEMORY_CACHE, key, content)

    # 2/ disk cache
    if settings.LTLAB_ENABLE_DISK_CACHE:
        try:
            cache = Cache(settings.LTLAB_CACHE_DIR)
            logger.debug("diskcache: setting key={} on cache_dir={}".format(key, settings.LTLAB_CACHE_DIR))
            cache.set(key, content, expire=24 * HOUR)
        except OperationalError:
            logger.warning("diskcache: got an OperationalError on write, skipping cache write")


def clear_memory_cache():
    SPECTRUM_MEMORY_CACHE.clear()
