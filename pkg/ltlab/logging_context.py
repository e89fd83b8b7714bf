"""
Campaign job/case identifiers for log lines.

Values live in environment variables so that pool workers forked from a
campaign process see them too.
"""
from contextlib import contextmanager
import os


ENV_KEYS = {
    "job": "_LTLAB_CONTEXT_JOB",
    "case": "_LTLAB_CONTEXT_CASE",
}

ORDER = ("job", "case")


def set(key, value):
    env_var = ENV_KEYS[key]
    os.environ[env_var] = str(value)


def get(key):
    env_var = ENV_KEYS[key]
    return os.getenv(env_var, "")


def reset():
    for env_var in ENV_KEYS.values():
        os.environ[env_var] = ""


def describe():
    """
    ``job=J case=C`` for the keys currently set, or an empty string.
    """
    return " ".join("{}={}".format(key, get(key)) for key in ORDER if get(key))


@contextmanager
def scope(**values):
    for key, value in values.items():
        set(key, value)
    try:
        yield
    finally:
        reset()
