"""JSON descriptors for spaces, points, and reports.

Exact rationals serialize as "p/q" strings (plain "p" when integral);
floats serialize as their shortest round-trip decimals.  Space descriptors
follow {"type": ..., "params": {...}, "base": ...}.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import InvalidParameterError, UnsupportedError
from .groups import CayleyGraphSpace, FiniteGroup, FreeGroup, Heisenberg, Zd
from .metric import FiniteMetricSpace, MetricSpace
from .spaces import (
    DistortedLine,
    LpSpace,
    PoincareDisk,
    SpokeRaySpace,
    StarTreeSpace,
    UpperHalfPlane,
    frac,
)

SCHEMA_VERSION = "1"


def scalar_to_json(v) -> Any:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    raise UnsupportedError(f"cannot serialize scalar {v!r}")


def scalar_from_json(v) -> Any:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, float)):
        return v
    raise InvalidParameterError(f"cannot parse scalar {v!r}")


def space_from_descriptor(desc: dict) -> MetricSpace:
    """Build a metric space from a JSON descriptor."""
    if not isinstance(desc, dict) or "type" not in desc:
        raise InvalidParameterError("space descriptor must be a dict with a 'type'")
    kind = desc["type"]
    params = desc.get("params", {})
    if kind == "finite":
        matrix = [[Fraction(str(v)) for v in row] for row in params["matrix"]]
        return FiniteMetricSpace(matrix, base_index=int(desc.get("base", 0)))
    if kind == "zd":
        family = Zd(int(params.get("dim", 1)))
        return CayleyGraphSpace(family)
    if kind == "free":
        family = FreeGroup(int(params.get("rank", 2)))
        return CayleyGraphSpace(family)
    if kind == "heisenberg":
        return CayleyGraphSpace(Heisenberg())
    if kind == "finite_group":
        table = params["table"]
        gens = params.get("generators")
        family = FiniteGroup(table, generators=gens)
        return CayleyGraphSpace(family)
    if kind == "spoke_ray":
        return SpokeRaySpace()
    if kind == "star_tree":
        return StarTreeSpace()
    if kind == "distorted_line":
        return DistortedLine(params.get("distortion", "sqrt"))
    if kind == "poincare_disk":
        return PoincareDisk()
    if kind == "half_plane":
        return UpperHalfPlane()
    if kind == "lp":
        return LpSpace(float(params.get("p", 2)), int(params.get("dim", 2)))
    raise InvalidParameterError(f"unknown space type {kind!r}")


def point_from_json(space: MetricSpace, obj) -> Any:
    """Parse a point of the given space from its JSON form."""
    if isinstance(space, FiniteMetricSpace):
        return int(obj)
    if isinstance(space, CayleyGraphSpace):
        if isinstance(space.family, FiniteGroup):
            return int(obj)
        if isinstance(space.family, FreeGroup):
            return space.family.word(str(obj))
        return tuple(int(v) for v in obj)
    if isinstance(space, SpokeRaySpace):
        kind = obj.get("kind")
        if kind == "hub":
            return space.base_point
        if kind == "ray":
            return space.ray_point(frac(obj["t"]))
        if kind == "head":
            return space.spoke_head(int(obj["n"]))
        if kind == "spoke":
            return space.spoke_interior(int(obj["n"]), frac(obj["s"]))
        raise InvalidParameterError(f"unknown tagged point {obj!r}")
    if isinstance(space, StarTreeSpace):
        if obj.get("kind") == "hub":
            return space.base_point
        return space.interval_point(int(obj["n"]), frac(obj["s"]))
    if isinstance(space, DistortedLine):
        return float(obj)
    if isinstance(space, (PoincareDisk, UpperHalfPlane)):
        return complex(obj[0], obj[1])
    if isinstance(space, LpSpace):
        return np.asarray(obj, dtype=float)
    raise UnsupportedError(f"no point parser for {type(space).__name__}")


def point_to_json(space: MetricSpace, p) -> Any:
    if isinstance(space, (FiniteMetricSpace,)):
        return int(p)
    if isinstance(space, CayleyGraphSpace):
        if isinstance(space.family, FiniteGroup):
            return int(p)
        if isinstance(space.family, FreeGroup):
            return space.family.element_label(p)
        return list(p)
    if isinstance(space, SpokeRaySpace):
        tag = p[0]
        if tag == "hub":
            return {"kind": "hub"}
        if tag == "ray":
            return {"kind": "ray", "t": scalar_to_json(p[1])}
        if tag == "head":
            return {"kind": "head", "n": p[1]}
        return {"kind": "spoke", "n": p[1], "s": scalar_to_json(p[2])}
    if isinstance(space, StarTreeSpace):
        if p == space.base_point:
            return {"kind": "hub"}
        return {"kind": "int", "n": p[1], "s": scalar_to_json(p[2])}
    if isinstance(space, DistortedLine):
        return float(p)
    if isinstance(space, (PoincareDisk, UpperHalfPlane)):
        z = complex(p)
        return [z.real, z.imag]
    if isinstance(space, LpSpace):
        return [float(v) for v in np.asarray(p, dtype=float).ravel()]
    raise UnsupportedError(f"no point serializer for {type(space).__name__}")


def ball_to_json(ball) -> dict:
    """CayleyBall wire format with generator-labeled edges."""
    fam = ball.family
    return {
        "radius": ball.radius,
        "elements": [fam.element_label(g) for g in ball.elements],
        "lengths": list(ball.lengths),
        "edges": [list(e) for e in ball.edges],
    }


def functional_to_json(f) -> dict:
    """Closed-form functionals serialize by kind plus parameters."""
    kind = getattr(f, "kind", None)
    params = getattr(f, "params", None)
    if kind is None or params is None:
        raise UnsupportedError(f"{type(f).__name__} has no closed-form wire format")
    return {"kind": kind, "params": params()}


def functional_from_json(obj: dict):
    from .functionals import (
        DiskBusemann,
        HalfPlaneBusemannInfinity,
        Linear,
        LpMu,
        LpZC,
        ZdLinear,
        Zero,
    )

    kind = obj.get("kind")
    params = obj.get("params", {})
    if kind == "lp_zc":
        return LpZC(params["z"], params["c"], params["p"])
    if kind == "lp_mu":
        return LpMu(params["mu"], params["p"])
    if kind == "linear":
        return Linear(params["v"])
    if kind == "zero":
        return Zero()
    if kind == "disk_busemann":
        re, im = params["zeta"]
        return DiskBusemann(complex(re, im))
    if kind == "half_plane_busemann_infinity":
        return HalfPlaneBusemannInfinity()
    if kind == "zd_linear":
        return ZdLinear([Fraction(v) for v in params["u"]])
    raise InvalidParameterError(f"unknown functional kind {kind!r}")


def partial_functional_to_json(pf) -> dict:
    space = pf.space
    return {
        "domain": [point_to_json(space, p) for p in pf.points],
        "values": [scalar_to_json(v) for v in pf.values],
    }


def partial_functional_from_json(space: MetricSpace, obj: dict):
    from .extension import PartialFunctional

    points = [point_from_json(space, p) for p in obj["domain"]]
    values = [scalar_from_json(v) for v in obj["values"]]
    return PartialFunctional(space, points, values)


class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            return scalar_to_json(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, complex):
            return [o.real, o.imag]
        if hasattr(o, "as_dict"):
            return o.as_dict()
        return super().default(o)


def emit_json(obj) -> str:
    """Deterministic JSON: sorted keys, no whitespace surprises."""
    return json.dumps(obj, cls=_Encoder, sort_keys=True, indent=2)
