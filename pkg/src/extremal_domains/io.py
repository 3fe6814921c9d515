"""Domain files and deterministic JSON output.

A domain file is JSON. Curves are given by Fourier coefficients::

    {"outer":  {"coeffs": [[0, 0], [0, 0], [1, 0]], "j_min": -1},
     "inners": [{"coeffs": [[0.5, 0], [0, 0]], "j_min": -1}],
     "hole_points": [[0, 0]]}

where ``coeffs[k]`` multiplies exp(i (j_min + k) t), the outer curve runs
counterclockwise and inner curves clockwise. Common shapes can be named
instead: ``{"shape": "disk", "radius": 1}``, ``{"shape": "annulus",
"r_outer": 1, "r_inner": 0.5}`` or ``{"shape": "ellipse", "a": 1, "b": 0.6}``.
"""

import json
import math
import re
from pathlib import Path

import numpy as np

from .geometry import AnalyticCurve, InvalidCurveError, InvalidDomainError, PlanarDomain
from .laurent import Laurent


class DomainFileError(ValueError):
    """Malformed or invalid input file; the message carries file:line."""


def _line_of(text, path):
    """Line of the innermost key of a dotted path that occurs in the text."""
    for key in reversed(str(path).split(".")):
        m = re.search(r'"%s"\s*:' % re.escape(key), text)
        if m:
            return text.count("\n", 0, m.start()) + 1
    return 1


def _pair(p):
    if isinstance(p, (int, float)):
        return complex(p)
    if not (isinstance(p, (list, tuple)) and len(p) == 2 and all(isinstance(x, (int, float)) for x in p)):
        raise TypeError(f"expected a number or a [re, im] pair, got {p!r}")
    return complex(p[0], p[1])


def _curve(data, orientation, where):
    try:
        coeffs = [_pair(c) for c in data["coeffs"]]
        j_min = int(data["j_min"])
    except KeyError as exc:
        raise KeyError(f"{where}.{exc.args[0]}") from None
    return AnalyticCurve(np.array(coeffs), j_min, orientation)


def domain_from_json(data):
    if "shape" in data:
        shape = data["shape"]
        center = _pair(data.get("center", 0))
        if shape == "disk":
            return PlanarDomain.disk(float(data.get("radius", 1.0)), center)
        if shape == "annulus":
            ic = data.get("inner_center")
            return PlanarDomain.annulus(float(data.get("r_outer", 1.0)), float(data.get("r_inner", 0.5)), center,
                                        None if ic is None else _pair(ic))
        if shape == "ellipse":
            return PlanarDomain.ellipse(float(data.get("a", 1.0)), float(data.get("b", 0.6)), center,
                                        float(data.get("rotation", 0.0)))
        raise KeyError("shape")
    outer = _curve(data["outer"], "outer", "outer")
    inners = [_curve(c, "inner", "inners") for c in data.get("inners", [])]
    holes = [_pair(p) for p in data.get("hole_points", [])]
    return PlanarDomain(outer, inners, holes)


def load_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DomainFileError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise DomainFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def load_domain(path):
    data, text = load_json(path)
    if not isinstance(data, dict):
        raise DomainFileError(f"{path}:1: top level must be a JSON object")
    try:
        return domain_from_json(data)
    except KeyError as exc:
        key = exc.args[0]
        raise DomainFileError(f"{path}:{_line_of(text, key)}: missing or unknown value for {key!r}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidCurveError, InvalidDomainError)):
            raise DomainFileError(f"{path}: invalid domain: {exc}") from exc
        raise DomainFileError(f"{path}: malformed domain: {exc}") from exc


def load_laurent(path):
    data, text = load_json(path)
    try:
        return Laurent.from_json(data)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise DomainFileError(f"{path}: malformed Laurent data: {exc!r}") from exc


def curve_to_json(curve):
    return {"coeffs": [[float(c.real), float(c.imag)] for c in curve.coeffs], "j_min": int(curve.j_min)}


def domain_to_json(domain):
    return {
        "outer": curve_to_json(domain.outer),
        "inners": [curve_to_json(c) for c in domain.inners],
        "hole_points": [[p.real, p.imag] for p in domain.hole_points],
    }


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    return obj


def dumps(obj):
    """Canonical JSON: sorted keys, fixed indentation, NaN/inf as null."""
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))
