import os
import sys

from . import default


def is_definition(var):
    if var.startswith('_'):
        return False
    return all(c.isupper() for c in var if c.isalpha())


def get_settings(module):
    return {
        var: getattr(module, var) for var in dir(module) if
        is_definition(var)
    }


def load_settings(module, env, conf, defaults):
    settings = {}
    for name, typ in get_settings(module).items():
        if name in env:
            value = env[name]
        elif conf and hasattr(conf, name):
            value = getattr(conf, name)
        else:
            value = getattr(defaults, name)

        settings[name] = typ(value)

    return settings


def load(conf_module_name=None):
    env = os.environ
    conf_module_name = conf_module_name or env.get('LTLAB_SETTINGS_MODULE')
    if conf_module_name:
        conf = __import__(conf_module_name, fromlist=['*'])
    else:
        conf = None

    return load_settings(
        sys.modules[__name__],
        env,
        conf,
        default,
    )


def converters():
    """
    Declared setting names and their types.

    >>> converters()["LTLAB_WORKERS"]
    <class 'int'>
    """
    return get_settings(sys.modules[__name__])


def boolean(val):
    """
    Environment values are strings, so "0" or "false" must not become True.

    >>> boolean("false"), boolean("1"), boolean(True), boolean(None)
    (False, True, True, False)
    """
    if isinstance(val, str):
        return val.strip().lower() in ("1", "true", "yes", "on")
    return bool(val)


LTLAB_WORKERS = int

LTLAB_HALF_WIDTH = float
LTLAB_SPACING = float
LTLAB_MATRIX_SPACING = float
LTLAB_EPS_CUT = float

LTLAB_ENABLE_DISK_CACHE = boolean
LTLAB_CACHE_DIR = str
LTLAB_MEMORY_CACHE_ITEMS = int

LOGGING = dict
