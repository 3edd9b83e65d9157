"""Model spaces: ray-with-spokes, star of intervals, distorted lines,
hyperbolic plane models, and finite l^p truncations.

The two tree-like spaces use exact rational scalars throughout; the
hyperbolic and l^p models are float-valued.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidDistortionError, InvalidPointError, InvalidParameterError
from .metric import MetricSpace


def frac(x) -> Fraction:
    """Coerce ints, strings like "7/2", and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise InvalidParameterError(f"cannot coerce {x!r} to an exact rational")


# ---------------------------------------------------------------------------
# Ray with spokes
# ---------------------------------------------------------------------------

HUB = ("hub",)


class SpokeRaySpace(MetricSpace):
    """A geodesic ray with unit-distance satellites around its origin.

    Points: the hub (base point, ray parameter 0), ray points at parameter
    t >= 0, spoke heads (one per integer n >= 1, at distance 1 from the hub
    and 2 from each other), and interior points of the length-(n - 1/2)
    spoke joining head n to ray point n.

    Distances come from a four-way route analysis (same locale direct,
    through the hub, down the own spoke, or via another spoke head); each
    point contributes its exit costs onto the hub/ray skeleton and the
    minimum route wins.
    """

    exact = True
    discrete = False

    @property
    def base_point(self):
        return HUB

    @staticmethod
    def ray_point(t) -> tuple:
        t = frac(t)
        if t < 0:
            raise InvalidPointError(f"ray parameter {t} must be >= 0")
        return HUB if t == 0 else ("ray", t)

    @staticmethod
    def spoke_head(n: int) -> tuple:
        if not isinstance(n, int) or n < 1:
            raise InvalidPointError(f"spoke index {n!r} must be an integer >= 1")
        return ("head", n)

    @staticmethod
    def spoke_interior(n: int, s) -> tuple:
        if not isinstance(n, int) or n < 1:
            raise InvalidPointError(f"spoke index {n!r} must be an integer >= 1")
        s = frac(s)
        length = Fraction(2 * n - 1, 2)
        if s < 0 or s > length:
            raise InvalidPointError(f"spoke position {s} outside [0, {length}]")
        if s == 0:
            return ("head", n)
        if s == length:
            return ("ray", Fraction(n))
        return ("spoke", n, s)

    gamma = ray_point  # the distinguished geodesic ray

    def check_point(self, p) -> None:
        if not isinstance(p, tuple) or not p:
            raise InvalidPointError(f"{p!r} is not a tagged point")
        tag = p[0]
        if tag == "hub":
            if p != HUB:
                raise InvalidPointError(f"malformed hub point {p!r}")
        elif tag == "ray":
            if len(p) != 2 or not isinstance(p[1], Fraction) or p[1] <= 0:
                raise InvalidPointError(f"malformed ray point {p!r}")
        elif tag == "head":
            if len(p) != 2 or not isinstance(p[1], int) or p[1] < 1:
                raise InvalidPointError(f"malformed spoke head {p!r}")
        elif tag == "spoke":
            if len(p) != 3 or not isinstance(p[1], int) or p[1] < 1:
                raise InvalidPointError(f"malformed spoke point {p!r}")
            if not isinstance(p[2], Fraction) or not 0 < p[2] < Fraction(2 * p[1] - 1, 2):
                raise InvalidPointError(f"spoke position out of range in {p!r}")
        else:
            raise InvalidPointError(f"unknown point tag {tag!r}")

    @staticmethod
    def _exits(p) -> list[tuple[tuple, Fraction]]:
        # (anchor, cost) pairs; anchors live on the hub/ray skeleton.
        tag = p[0]
        if tag == "hub":
            return [(HUB, Fraction(0))]
        if tag == "ray":
            return [(("ray", p[1]), Fraction(0))]
        if tag == "head":
            n = p[1]
            return [(HUB, Fraction(1)), (("ray", Fraction(n)), Fraction(2 * n - 1, 2))]
        n, s = p[1], p[2]
        return [(HUB, 1 + s), (("ray", Fraction(n)), Fraction(2 * n - 1, 2) - s)]

    @staticmethod
    def _skeleton(a, b) -> Fraction:
        if a[0] == "hub":
            return Fraction(0) if b[0] == "hub" else b[1]
        if b[0] == "hub":
            return a[1]
        return abs(a[1] - b[1])

    def distance(self, p, q) -> Fraction:
        self.check_point(p)
        self.check_point(q)
        if p == q:
            return Fraction(0)
        # Same spoke: direct travel along it (head sits at position 0).
        if p[0] in ("head", "spoke") and q[0] in ("head", "spoke") and p[1] == q[1]:
            pos_p = p[2] if p[0] == "spoke" else Fraction(0)
            pos_q = q[2] if q[0] == "spoke" else Fraction(0)
            return abs(pos_p - pos_q)
        best = None
        for anchor_p, cost_p in self._exits(p):
            for anchor_q, cost_q in self._exits(q):
                total = cost_p + self._skeleton(anchor_p, anchor_q) + cost_q
                if best is None or total < best:
                    best = total
        return best

    def point_label(self, p) -> str:
        tag = p[0]
        if tag == "hub":
            return "hub"
        if tag == "ray":
            return f"ray({p[1]})"
        if tag == "head":
            return f"head({p[1]})"
        return f"spoke({p[1]},{p[2]})"

    def point_key(self, p):
        order = {"hub": 0, "ray": 1, "head": 2, "spoke": 3}
        tag = p[0]
        if tag == "hub":
            return (0, Fraction(0), Fraction(0))
        if tag == "ray":
            return (1, p[1], Fraction(0))
        if tag == "head":
            return (2, Fraction(p[1]), Fraction(0))
        return (3, Fraction(p[1]), p[2])

    def sample_points(self, rng: random.Random, count: int) -> list:
        out = []
        for _ in range(count):
            kind = rng.randrange(4)
            if kind == 0:
                out.append(HUB)
            elif kind == 1:
                out.append(self.ray_point(Fraction(rng.randrange(0, 120), rng.randrange(1, 5))))
            elif kind == 2:
                out.append(self.spoke_head(rng.randrange(1, 13)))
            else:
                n = rng.randrange(1, 13)
                length = Fraction(2 * n - 1, 2)
                s = length * Fraction(rng.randrange(1, 16), 16)
                out.append(self.spoke_interior(n, s))
        return out


def spoke_ray_distance(u, v) -> Fraction:
    """Exact distance in the ray-with-spokes space."""
    return SpokeRaySpace().distance(u, v)


# ---------------------------------------------------------------------------
# Star of intervals
# ---------------------------------------------------------------------------


class StarTreeSpace(MetricSpace):
    """Intervals [0, n] for n = 1, 2, ... all glued at 0 to a hub.

    Unbounded, but contains no infinite geodesic ray: every branch is a
    dead end of finite length n with endpoint x_n.
    """

    exact = True
    discrete = False

    @property
    def base_point(self):
        return HUB

    @staticmethod
    def interval_point(n: int, s) -> tuple:
        if not isinstance(n, int) or n < 1:
            raise InvalidPointError(f"interval index {n!r} must be an integer >= 1")
        s = frac(s)
        if s < 0 or s > n:
            raise InvalidPointError(f"position {s} outside [0, {n}]")
        return HUB if s == 0 else ("int", n, s)

    @classmethod
    def endpoint(cls, n: int) -> tuple:
        return cls.interval_point(n, n)

    def check_point(self, p) -> None:
        if p == HUB:
            return
        if (
            not isinstance(p, tuple)
            or len(p) != 3
            or p[0] != "int"
            or not isinstance(p[1], int)
            or p[1] < 1
            or not isinstance(p[2], Fraction)
            or not 0 < p[2] <= p[1]
        ):
            raise InvalidPointError(f"{p!r} is not a point of the interval star")

    def distance(self, p, q) -> Fraction:
        self.check_point(p)
        self.check_point(q)
        if p == HUB and q == HUB:
            return Fraction(0)
        if p == HUB:
            return q[2]
        if q == HUB:
            return p[2]
        if p[1] == q[1]:
            return abs(p[2] - q[2])
        return p[2] + q[2]

    def point_label(self, p) -> str:
        return "hub" if p == HUB else f"int({p[1]},{p[2]})"

    def point_key(self, p):
        return (0, 0, Fraction(0)) if p == HUB else (1, p[1], p[2])

    def sample_points(self, rng: random.Random, count: int) -> list:
        out = []
        for _ in range(count):
            if rng.randrange(8) == 0:
                out.append(HUB)
            else:
                n = rng.randrange(1, 13)
                out.append(self.interval_point(n, Fraction(rng.randrange(0, 16 * n + 1), 16)))
        return out


def star_tree_distance(u, v) -> Fraction:
    return StarTreeSpace().distance(u, v)


# ---------------------------------------------------------------------------
# Distorted line
# ---------------------------------------------------------------------------

DISTORTIONS: dict[str, Callable[[float], float]] = {
    "sqrt": math.sqrt,
    "log1p": math.log1p,
}


@dataclass
class DistortionReport:
    passed: bool
    grid_size: int
    failure: Optional[tuple] = None  # (kind, values...)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "grid": self.grid_size,
            "failure": None if self.failure is None else [str(v) for v in self.failure],
        }


def distorted_line_validate(
    dfun: Callable[[float], float],
    grid: Sequence[float],
    *,
    pair_checks: int = 2000,
    seed: int = 0,
) -> DistortionReport:
    """Grid-check a distortion profile: D(0)=0, D nondecreasing, D(t)/t
    nonincreasing, plus a subadditivity spot check on grid pairs."""
    if dfun(0.0) != 0.0:
        raise InvalidDistortionError("D(0) must be 0")
    pts = sorted(float(t) for t in grid)
    if not pts or pts[0] <= 0:
        raise InvalidDistortionError("grid must be sorted and positive")
    vals = [dfun(t) for t in pts]
    for i in range(1, len(pts)):
        if vals[i] < vals[i - 1]:
            return DistortionReport(False, len(pts), ("not_nondecreasing", pts[i - 1], pts[i]))
        if vals[i] / pts[i] > vals[i - 1] / pts[i - 1] + 1e-12:
            return DistortionReport(False, len(pts), ("ratio_increasing", pts[i - 1], pts[i]))
    rng = random.Random(seed)
    for _ in range(pair_checks):
        t = pts[rng.randrange(len(pts))]
        s = pts[rng.randrange(len(pts))]
        if dfun(t + s) > dfun(t) + dfun(s) + 1e-12:
            return DistortionReport(False, len(pts), ("not_subadditive", t, s))
    return DistortionReport(True, len(pts))


class DistortedLine(MetricSpace):
    """The real line with distance D(|x - y|) for a sublinear distortion D."""

    exact = False
    discrete = False

    def __init__(self, dfun: Callable[[float], float] | str, name: str | None = None):
        if isinstance(dfun, str):
            if dfun not in DISTORTIONS:
                raise InvalidParameterError(f"unknown distortion {dfun!r}")
            name = dfun
            dfun = DISTORTIONS[dfun]
        self.dfun = dfun
        self.name = name or getattr(dfun, "__name__", "custom")

    def distance(self, p, q) -> float:
        return self.dfun(abs(float(p) - float(q)))

    @property
    def base_point(self):
        return 0.0

    def point_label(self, p) -> str:
        return repr(float(p))

    def point_key(self, p):
        return float(p)

    def sample_points(self, rng: random.Random, count: int) -> list:
        return [rng.uniform(-1000.0, 1000.0) for _ in range(count)]


def table_distortion(knots: Sequence[float], values: Sequence[float]) -> Callable[[float], float]:
    """Piecewise-linear distortion through (0,0) and the given knots."""
    ts = [0.0] + [float(t) for t in knots]
    vs = [0.0] + [float(v) for v in values]
    if len(ts) != len(vs):
        raise InvalidParameterError("knots and values differ in length")

    def dfun(t: float) -> float:
        if t <= 0:
            return 0.0
        return float(np.interp(t, ts, vs))

    return dfun


# ---------------------------------------------------------------------------
# Hyperbolic plane models
# ---------------------------------------------------------------------------


def cayley_to_disk(z: complex) -> complex:
    """Isometry from the upper half-plane model to the disk model (i -> 0)."""
    return (z - 1j) / (z + 1j)


def cayley_to_half_plane(w: complex) -> complex:
    return 1j * (1 + w) / (1 - w)


class PoincareDisk(MetricSpace):
    """Open unit disk with the conformal metric of curvature -1; base 0."""

    exact = False
    discrete = False

    @property
    def base_point(self) -> complex:
        return 0j

    def check_point(self, p) -> None:
        if abs(complex(p)) >= 1:
            raise InvalidPointError(f"{p!r} is not inside the unit disk")

    def distance(self, p, q) -> float:
        self.check_point(p)
        self.check_point(q)
        z, w = complex(p), complex(q)
        num = abs(z - w)
        den = abs(1 - z.conjugate() * w)
        return 2.0 * math.atanh(num / den)

    def point_label(self, p) -> str:
        return repr(complex(p))

    def point_key(self, p):
        z = complex(p)
        return (z.real, z.imag)

    def sample_points(self, rng: random.Random, count: int) -> list[complex]:
        out = []
        while len(out) < count:
            z = complex(rng.uniform(-0.95, 0.95), rng.uniform(-0.95, 0.95))
            if abs(z) < 0.95:
                out.append(z)
        return out

    def sphere_points(self, radius: float, count: int) -> list[complex]:
        r = math.tanh(radius / 2.0)
        return [r * cmath.exp(2j * math.pi * k / count) for k in range(count)]


class UpperHalfPlane(MetricSpace):
    """Upper half-plane model; base point i.

    Distance uses 2*asinh(|z-w| / (2*sqrt(Im z Im w))), which is stable for
    nearby points.
    """

    exact = False
    discrete = False

    @property
    def base_point(self) -> complex:
        return 1j

    def check_point(self, p) -> None:
        if complex(p).imag <= 0:
            raise InvalidPointError(f"{p!r} is not in the upper half-plane")

    def distance(self, p, q) -> float:
        self.check_point(p)
        self.check_point(q)
        z, w = complex(p), complex(q)
        return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))

    def point_key(self, p):
        z = complex(p)
        return (z.real, z.imag)

    def point_label(self, p) -> str:
        return repr(complex(p))

    def sample_points(self, rng: random.Random, count: int) -> list[complex]:
        return [
            complex(rng.uniform(-5.0, 5.0), math.exp(rng.uniform(-2.5, 2.5)))
            for _ in range(count)
        ]


def hyperbolic_distance(model: MetricSpace, z: complex, w: complex) -> float:
    """Distance in either hyperbolic model (domain-checked)."""
    if not isinstance(model, (PoincareDisk, UpperHalfPlane)):
        raise InvalidParameterError("model must be a hyperbolic plane model")
    return model.distance(z, w)


# ---------------------------------------------------------------------------
# l^p truncations
# ---------------------------------------------------------------------------


class LpSpace(MetricSpace):
    """R^m with the l^p norm distance and base point 0."""

    exact = False
    discrete = False

    def __init__(self, p: float, dim: int):
        if p < 1:
            raise InvalidParameterError("p must be >= 1")
        if dim < 1:
            raise InvalidParameterError("dimension must be >= 1")
        self.p = float(p)
        self.dim = dim

    def norm(self, x) -> float:
        v = np.asarray(x, dtype=float).ravel()
        if self.p == 2.0:
            return float(np.linalg.norm(v))
        if math.isinf(self.p):
            return float(np.max(np.abs(v)))
        return float(np.sum(np.abs(v) ** self.p) ** (1.0 / self.p))

    def distance(self, p, q) -> float:
        a = np.asarray(p, dtype=float).ravel()
        b = np.asarray(q, dtype=float).ravel()
        n = max(a.size, b.size)
        a = np.pad(a, (0, n - a.size))
        b = np.pad(b, (0, n - b.size))
        return self.norm(a - b)

    @property
    def base_point(self):
        return np.zeros(self.dim)

    def point_label(self, p) -> str:
        return "(" + ",".join(repr(float(v)) for v in np.asarray(p, dtype=float).ravel()) + ")"

    def point_key(self, p):
        return tuple(float(v) for v in np.asarray(p, dtype=float).ravel())

    def sample_points(self, rng: random.Random, count: int) -> list[np.ndarray]:
        return [
            np.array([rng.gauss(0.0, 3.0) for _ in range(self.dim)]) for _ in range(count)
        ]

    def sphere_points(self, radius: float, count: int, rng: random.Random) -> list[np.ndarray]:
        out = []
        for _ in range(count):
            v = np.array([rng.gauss(0.0, 1.0) for _ in range(self.dim)])
            n = self.norm(v)
            if n == 0:
                continue
            out.append(v * (radius / n))
        return out


def euclidean(dim: int) -> LpSpace:
    return LpSpace(2.0, dim)
