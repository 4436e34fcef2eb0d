"""JSON documents for configurations and divisors.

Rationals are written as ``"p/q"`` strings or bare integers. Inputs accept
ints and rational strings but never floats.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from .errors import InputError
from .exact_linalg import as_fraction, fraction_to_json
from .surface_model import CurveConfiguration, Divisor


def _vector_field(doc: Mapping, key: str, curves: list[str]):
    value = doc.get(key)
    if value is None:
        return None
    if isinstance(value, Mapping):
        vec = ["0"] * len(curves)
        for name, v in value.items():
            if name not in curves:
                raise InputError(f"{key}: unknown curve {name!r}")
            vec[curves.index(name)] = v
        return tuple(as_fraction(v) for v in vec)
    if isinstance(value, list):
        return tuple(as_fraction(v) for v in value)
    raise InputError(f"{key} must be a list or an object")


def config_from_json(doc: Any) -> CurveConfiguration:
    if not isinstance(doc, Mapping):
        raise InputError("configuration must be a JSON object")
    for key in ("curves", "gram"):
        if key not in doc:
            raise InputError(f"configuration is missing {key!r}")
    curves = doc["curves"]
    if not isinstance(curves, list) or not all(isinstance(c, str) for c in curves):
        raise InputError("curves must be a list of names")
    gram = doc["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise InputError("gram must be a list of rows")
    exceptional = doc.get("exceptional")
    if exceptional is not None:
        if not isinstance(exceptional, list):
            raise InputError("exceptional must be a list")
        for e in exceptional:
            if isinstance(e, str) and e not in curves:
                raise InputError(f"exceptional: unknown curve {e!r}")
    degrees = doc.get("degrees") or ()
    if not isinstance(degrees, (list, tuple)) or not all(isinstance(d, int) and not isinstance(d, bool) for d in degrees):
        raise InputError("degrees must be a list of positive integers")
    return CurveConfiguration.build(
        curves,
        [[as_fraction(v) for v in row] for row in gram],
        exceptional,
        canonical=_vector_field(doc, "canonical", curves),
        fiber_class=_vector_field(doc, "fiber_class", curves),
        degrees=tuple(degrees),
        allow_negative_offdiagonal=bool(doc.get("allow_negative_offdiagonal", False)),
    )


def config_to_json(cfg: CurveConfiguration) -> dict:
    out: dict = {
        "curves": list(cfg.curves),
        "gram": cfg.gram.to_json(),
        "exceptional": [cfg.curves[i] for i in sorted(cfg.exceptional)],
    }
    if cfg.canonical is not None:
        out["canonical"] = [fraction_to_json(v) for v in cfg.canonical]
    if cfg.fiber_class is not None:
        out["fiber_class"] = {n: fraction_to_json(v) for n, v in zip(cfg.curves, cfg.fiber_class) if v}
    if any(d != 1 for d in cfg.degrees):
        out["degrees"] = list(cfg.degrees)
    return out


def divisor_from_json(cfg: CurveConfiguration, doc: Any) -> Divisor:
    if isinstance(doc, Mapping) and "coeffs" in doc:
        doc = doc["coeffs"]
    if isinstance(doc, Mapping):
        return cfg.divisor(doc)
    if isinstance(doc, list):
        return cfg.divisor(doc)
    raise InputError('divisor must be {"coeffs": {...}} or a list of coefficients')


def divisor_to_json(d: Divisor) -> dict:
    return {"coeffs": {n: fraction_to_json(c) for n, c in d.mapping().items()}}


def dumps(obj: Any, pretty: bool = False) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
