"""
Process-wide settings, read as attributes of this module.

Names declared in :mod:`ltlab.settings.base` are converted with their
declared type when set, so ``put_setting("LTLAB_WORKERS", "4")`` stores 4.
"""
from pprint import pformat
import sys

from . import base


def put_setting(key, value):
    converter = base.converters().get(key)
    if converter is not None and value is not None:
        value = converter(value)
    setattr(sys.modules[__name__], key, value)
    _keys.add(key)


def configure(dct):
    for k, v in dct.items():
        put_setting(k, v)


def snapshot():
    """
    Current values, for handing to worker processes.

    :rtype: dict
    """
    return {key: getattr(sys.modules[__name__], key) for key in sorted(_keys)}


def print_settings():
    for key in sorted(_keys):
        value = getattr(sys.modules[__name__], key)
        print("{}={}".format(key, pformat(value)))


_keys = set()

configure(base.load())
