import multiprocessing

from ltlab import settings

from .json_tools import complex_array, json_dumps, json_loads_or_raw, serialize_complex_object  # NOQA


def format_exc(exc):
    """
    ``Name: message`` line stored in failed reports and search traces.

    >>> format_exc(ValueError("gamma must be >= 1/2"))
    'ValueError: gamma must be >= 1/2'
    >>> format_exc(KeyError())
    'KeyError'
    """
    name = exc.__class__.__name__
    try:
        message = str(exc)
    except Exception:
        message = '<unprintable {} object>'.format(name)
    return '{}: {}'.format(name, message) if message else name


def as_list(value):
    """
    >>> as_list(1.5), as_list((1, 2))
    ([1.5], [1, 2])
    """
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def pool_map(func, items, workers=1):
    """
    ``map`` through a process pool when *workers* > 1. Results keep the
    order of *items*; workers start with this process's settings.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    pool = multiprocessing.Pool(processes=workers, initializer=settings.configure, initargs=(settings.snapshot(),))
    try:
        return pool.map(func, items)
    finally:
        pool.close()
        pool.join()
