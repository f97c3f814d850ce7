"""Canonical JSON encoding and loading of every value type."""

import json
import math

from .errors import FormatError
from .parse import parse_poly
from .poly import Poly
from .symplectic import Endo, TameWord


def dumps(obj):
    """Sorted keys, compact separators, no floats."""
    _reject_floats(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _reject_floats(obj):
    if isinstance(obj, float):
        raise FormatError(f"float {obj!r} in output")
    if isinstance(obj, dict):
        for v in obj.values():
            _reject_floats(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _reject_floats(v)


def height_json(h):
    return "inf" if h == math.inf else int(h)


def loads(text):
    try:
        return json.loads(text, parse_float=_bad_float)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def _bad_float(s):
    raise FormatError(f"floats are not accepted ({s})")


def read_json(path):
    try:
        if path == "-":
            import sys
            return loads(sys.stdin.read())
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


def poly_from_any(obj, nvars=None):
    """PolyJSON object or polynomial text."""
    if isinstance(obj, str):
        return parse_poly(obj, nvars)
    if isinstance(obj, dict):
        return Poly.from_json(obj)
    raise FormatError(f"cannot read a polynomial from {type(obj).__name__}")


def endo_from_any(obj):
    if isinstance(obj, dict) and "word" in obj:
        from .symplectic import tame_evaluate
        return tame_evaluate(TameWord.from_json(obj))
    if isinstance(obj, list):
        obj = {"images": obj}
    if not isinstance(obj, dict) or "images" not in obj:
        raise FormatError("expected an endomorphism or a tame word")
    images = obj["images"]
    if images and all(isinstance(s, str) for s in images):
        nvars = obj.get("n_vars", len(images))
        return Endo([parse_poly(s, nvars) for s in images])
    return Endo.from_json(obj)


def is_weyl_auto(obj):
    if not isinstance(obj, dict) or "images" not in obj or "n_vars" in obj:
        return False
    imgs = obj["images"]
    if not imgs:
        return False
    if isinstance(imgs[0], str):
        return "n" in obj or "K" in obj
    return isinstance(imgs[0], dict) and "terms" in imgs[0] and (
        not imgs[0]["terms"] or "x_exp" in imgs[0]["terms"][0])
