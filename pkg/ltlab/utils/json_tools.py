import json
import types

import numpy as np


def serialize_complex_object(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": float(obj.real), "imag": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"real": obj.real.tolist(), "imag": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, types.GeneratorType):
        return [i for i in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(
        "Type %s couldn't be serialized. This is a bug in ltlab,"
        " please file a new issue!" % type(obj))


def json_dumps(obj, pretty=False, compact=True, **kwargs):
    """
    JSON dump to string.

    Floats are written by ``repr``, the shortest form that reads back to the
    same double, so identical inputs give byte-identical output.

    >>> json_dumps({"b": 1, "a": np.float64(0.1)})
    '{"a":0.1,"b":1}'

    :param obj:
    :type obj: Any
    :param pretty:
    :type pretty: bool
    :param compact:
    :type compact: bool
    :return:
    :rtype: str
    """
    if "default" not in kwargs:
        kwargs["default"] = serialize_complex_object
    if pretty:
        kwargs["indent"] = 4
        kwargs.setdefault("sort_keys", True)
        kwargs["separators"] = (",", ": ")
    elif compact:
        kwargs["separators"] = (",", ":")
        kwargs.setdefault("sort_keys", True)

    return json.dumps(obj, **kwargs)


def json_loads_or_raw(data):
    """
    Try to get a JSON object from a string.
    If this isn't JSON, return the raw string.
    :param data: string; should be in JSON format
    :return: JSON-decoded object or raw data
    """
    if not data:
        return None
    try:
        return json.loads(data)
    except Exception:
        return data


def complex_array(data):
    """
    Inverse of the ``{"real": ..., "imag": ...}`` encoding (plain lists are real).
    """
    if isinstance(data, dict):
        return np.asarray(data["real"], dtype=float) + 1j * np.asarray(data["imag"], dtype=float)
    return np.asarray(data, dtype=complex)
