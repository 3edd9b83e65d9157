"""Metric spaces as distance oracles with a distinguished base point.

A space is either *exact* (all distances are :class:`fractions.Fraction`
and every assertion about it can be checked with zero tolerance) or
float-valued with explicit tolerances.  Discrete spaces additionally
expose a locally finite neighbor enumeration with unit-length edges, which
is what ball construction relies on.
"""

from __future__ import annotations

import itertools
import os
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

from .errors import (
    InvalidSpaceError,
    PreconditionError,
    ResourceLimitError,
    UnsupportedError,
)

Scalar = Union[Fraction, float]
Point = Any

DEFAULT_BALL_LIMIT = 10**6


def ball_limit(override: int | None = None) -> int:
    """Effective ball-size limit: explicit override, else HOROKIT_MAX_BALL, else default."""
    if override is not None:
        return override
    env = os.environ.get("HOROKIT_MAX_BALL")
    if env:
        return int(env)
    return DEFAULT_BALL_LIMIT


class MetricSpace(ABC):
    """A point universe with a distance oracle and a base point.

    Subclasses are immutable after construction and their distance
    oracles must be safe for concurrent evaluation.
    """

    exact: bool = True
    discrete: bool = False

    @abstractmethod
    def distance(self, p: Point, q: Point) -> Scalar:
        ...

    @property
    @abstractmethod
    def base_point(self) -> Point:
        ...

    def check_point(self, p: Point) -> None:
        """Raise InvalidPointError if ``p`` is not a point of this space."""

    def point_label(self, p: Point) -> str:
        return str(p)

    def point_key(self, p: Point):
        """Sort key inducing the space's canonical total order on points."""
        return self.point_label(p)

    def sample_points(self, rng: random.Random, count: int) -> list:
        raise UnsupportedError(f"{type(self).__name__} has no point sampler")

    def neighbors(self, p: Point) -> list:
        raise UnsupportedError(f"{type(self).__name__} is not a unit-edge graph space")

    @property
    def tolerance(self) -> Scalar:
        return Fraction(0) if self.exact else 1e-9


class FiniteMetricSpace(MetricSpace):
    """An explicit n-point space with exact rational distances.

    The matrix is validated exhaustively at construction: symmetry, zero
    diagonal, nonnegativity, and the triangle inequality over all n^3
    triples.
    """

    exact = True
    discrete = False

    def __init__(self, matrix: Sequence[Sequence[Scalar]], base_index: int = 0):
        n = len(matrix)
        rows = []
        for row in matrix:
            if len(row) != n:
                raise InvalidSpaceError("distance matrix is not square")
            rows.append(tuple(Fraction(v) for v in row))
        self.matrix = tuple(rows)
        self.n = n
        if not 0 <= base_index < n:
            raise InvalidSpaceError(f"base index {base_index} outside [0, {n})")
        self.base_index = base_index
        self._validate()

    def _validate(self) -> None:
        m = self.matrix
        for i in range(self.n):
            if m[i][i] != 0:
                raise InvalidSpaceError(f"nonzero diagonal at point {i}")
            for j in range(self.n):
                if m[i][j] < 0:
                    raise InvalidSpaceError(f"negative distance at pair ({i}, {j})")
                if m[i][j] != m[j][i]:
                    raise InvalidSpaceError(f"asymmetric distance at pair ({i}, {j})")
        for i in range(self.n):
            for j in range(self.n):
                dij = m[i][j]
                for k in range(self.n):
                    if dij > m[i][k] + m[k][j]:
                        raise InvalidSpaceError(
                            f"triangle inequality fails at triple ({i}, {j}, {k})"
                        )

    def distance(self, p: int, q: int) -> Fraction:
        return self.matrix[p][q]

    @property
    def base_point(self) -> int:
        return self.base_index

    def points(self) -> list[int]:
        return list(range(self.n))

    def check_point(self, p) -> None:
        if not isinstance(p, int) or not 0 <= p < self.n:
            from .errors import InvalidPointError

            raise InvalidPointError(f"{p!r} is not a point index in [0, {self.n})")

    def point_key(self, p: int):
        return p

    def sample_points(self, rng: random.Random, count: int) -> list[int]:
        return [rng.randrange(self.n) for _ in range(count)]


@dataclass(frozen=True)
class PointFunctional:
    """The function d(., x) - d(x0, x) anchored at a point x.

    Vanishes at the base point and equals -d(x0, x) at the anchor.
    """

    space: MetricSpace
    anchor: Point
    base_offset: Scalar

    @classmethod
    def at(cls, space: MetricSpace, x: Point) -> "PointFunctional":
        space.check_point(x)
        return cls(space, x, space.distance(space.base_point, x))

    def evaluate(self, y: Point) -> Scalar:
        return self.space.distance(y, self.anchor) - self.base_offset

    kind = "point"


def point_functional_eval(space: MetricSpace, x: Point, y: Point) -> Scalar:
    """Evaluate d(y, x) - d(x0, x); always within [-d(x0,y), d(x0,y)]."""
    return space.distance(y, x) - space.distance(space.base_point, x)


@dataclass
class MetricReport:
    """Outcome of a metric-axiom validation run."""

    passed: bool
    points_checked: int
    pairs_checked: int
    triples_checked: int
    tolerance: Scalar
    failure: Optional[tuple] = None  # (kind, points...) for the first violation

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "points": self.points_checked,
            "pairs": self.pairs_checked,
            "triples": self.triples_checked,
            "failure": None
            if self.failure is None
            else [self.failure[0]] + [str(p) for p in self.failure[1:]],
        }


def _checked_distance(space: MetricSpace, p: Point, q: Point) -> Scalar:
    d = space.distance(p, q)
    if d != d or d in (float("inf"), float("-inf")):  # NaN / infinite
        raise InvalidSpaceError(f"non-finite distance for pair ({p!r}, {q!r})")
    if d < 0:
        raise InvalidSpaceError(f"negative distance for pair ({p!r}, {q!r})")
    return d


def validate_metric(
    space: MetricSpace,
    sample: Sequence[Point] | None = None,
    *,
    max_triples: int = 10_000,
    seed: int = 0,
    tol: Scalar | None = None,
) -> MetricReport:
    """Check symmetry, zero self-distance, and the triangle inequality.

    Finite spaces are checked exhaustively over all triples; otherwise the
    triangle inequality is checked on ``max_triples`` seeded random triples
    drawn from ``sample`` (or from the space's own sampler).  The first
    violation is reported in canonical order for exhaustive checks and in
    draw order for sampled ones.
    """
    if tol is None:
        tol = Fraction(0) if space.exact else 1e-10

    exhaustive = isinstance(space, FiniteMetricSpace) and sample is None
    if sample is None:
        if exhaustive:
            pts = space.points()
        else:
            pts = space.sample_points(random.Random(seed), 48)
    else:
        pts = list(sample)
    if not pts:
        raise PreconditionError("validation sample is empty")

    pairs = 0
    for p in pts:
        d = _checked_distance(space, p, p)
        if d > tol:
            return MetricReport(False, len(pts), pairs, 0, tol, ("self_distance", p))
    for p, q in itertools.combinations(pts, 2):
        pairs += 1
        dpq = _checked_distance(space, p, q)
        dqp = _checked_distance(space, q, p)
        if abs(dpq - dqp) > tol:
            return MetricReport(False, len(pts), pairs, 0, tol, ("symmetry", p, q))

    triples = 0
    if exhaustive:
        for p in pts:
            for q in pts:
                for r in pts:
                    triples += 1
                    if space.distance(p, r) > space.distance(p, q) + space.distance(q, r) + tol:
                        return MetricReport(
                            False, len(pts), pairs, triples, tol, ("triangle", p, q, r)
                        )
    else:
        rng = random.Random(seed)
        for _ in range(max_triples):
            p, q, r = (pts[rng.randrange(len(pts))] for _ in range(3))
            triples += 1
            if space.distance(p, r) > space.distance(p, q) + space.distance(q, r) + tol:
                return MetricReport(False, len(pts), pairs, triples, tol, ("triangle", p, q, r))
    return MetricReport(True, len(pts), pairs, triples, tol)


def discrete_ball(
    space: MetricSpace,
    r: Scalar,
    *,
    limit: int | None = None,
) -> list[tuple[Point, Scalar]]:
    """All points at distance <= r from the base point, with exact distances.

    For unit-edge graph spaces this runs a BFS using the space's neighbor
    enumerator; finite spaces are scanned directly.  Output is in canonical
    order (distance first, then the space's point order).
    """
    if r < 0:
        raise PreconditionError("ball radius must be nonnegative")
    cap = ball_limit(limit)
    if isinstance(space, FiniteMetricSpace):
        x0 = space.base_point
        out = [(p, space.distance(x0, p)) for p in space.points() if space.distance(x0, p) <= r]
        out.sort(key=lambda t: (t[1], space.point_key(t[0])))
        return out
    if not space.discrete:
        raise UnsupportedError("discrete_ball requires a discrete space")
    x0 = space.base_point
    depth_max = int(r)
    dist = {space.point_key(x0): (x0, 0)}
    frontier = [x0]
    depth = 0
    while frontier and depth < depth_max:
        depth += 1
        nxt = []
        for p in frontier:
            for q in space.neighbors(p):
                k = space.point_key(q)
                if k not in dist:
                    dist[k] = (q, depth)
                    nxt.append(q)
                    if len(dist) > cap:
                        raise ResourceLimitError(
                            f"ball exceeded limit {cap}", radius_reached=depth - 1
                        )
        frontier = nxt
    out = [(p, d) for (p, d) in dist.values()]
    out.sort(key=lambda t: (t[1], space.point_key(t[0])))
    return out
