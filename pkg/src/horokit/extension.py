"""1-Lipschitz extension machinery and the counterexamples separating
pointwise limits from uniform-on-balls limits.

The sup/inf extension formulas extend any 1-Lipschitz real function from a
subset exactly; the subset-to-space extension of limit functionals is
realized along a deterministic witness subsequence chosen by pigeonhole on
evaluation tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    BudgetError,
    InvalidParameterError,
    PreconditionError,
    UnsupportedError,
)
from .functionals import EvalOutcome
from .metric import MetricSpace, Point, Scalar
from .spaces import HUB, SpokeRaySpace, StarTreeSpace, frac


# ---------------------------------------------------------------------------
# Partial functionals and the sup/inf extensions
# ---------------------------------------------------------------------------


class PartialFunctional:
    """A 1-Lipschitz real function on a finite subset of a space.

    The Lipschitz certificate is checked over all domain pairs at
    construction; a violating pair is reported in the error.
    """

    def __init__(
        self,
        space: MetricSpace,
        points: Sequence[Point],
        values: Sequence[Scalar],
        *,
        mesh: Scalar | None = None,
    ):
        if len(points) != len(values):
            raise InvalidParameterError("domain and value lists differ in length")
        if not points:
            raise InvalidParameterError("domain must be nonempty")
        self.space = space
        self.points = list(points)
        self.values = list(values)
        self.mesh = mesh  # spacing bound when the domain samples a larger set
        n = len(points)
        for i in range(n):
            for j in range(i + 1, n):
                d = space.distance(points[i], points[j])
                if abs(values[i] - values[j]) > d + (0 if space.exact else 1e-12):
                    raise InvalidParameterError(
                        f"not 1-Lipschitz on pair ({points[i]!r}, {points[j]!r}): "
                        f"|{values[i]} - {values[j]}| > {d}"
                    )

    def value_at(self, p: Point) -> Scalar:
        for q, v in zip(self.points, self.values):
            if q == p:
                return v
        raise InvalidParameterError(f"{p!r} is not in the domain")

    def contains_base(self) -> bool:
        x0 = self.space.base_point
        return any(q == x0 for q in self.points)


@dataclass
class McShaneExtension:
    """Exact sup- or inf-extension of a partial functional.

    sup mode: F(b) = max_a (f(a) - d(a, b)) is the least 1-Lipschitz
    extension; inf mode: F(b) = min_a (f(a) + d(a, b)) is the greatest.
    When the domain is a mesh-sample of a larger set, ``error_bound`` is
    the sup-norm gap to the true extension (2 * mesh).
    """

    partial: PartialFunctional
    mode: str

    def __post_init__(self):
        if self.mode not in ("sup", "inf"):
            raise InvalidParameterError(f"mode must be 'sup' or 'inf', got {self.mode!r}")

    def evaluate(self, b: Point) -> Scalar:
        space = self.partial.space
        if self.mode == "sup":
            return max(
                v - space.distance(a, b) for a, v in zip(self.partial.points, self.partial.values)
            )
        return min(
            v + space.distance(a, b) for a, v in zip(self.partial.points, self.partial.values)
        )

    @property
    def error_bound(self) -> Scalar:
        return 0 if self.partial.mesh is None else 2 * self.partial.mesh

    kind = "mcshane"


def mcshane_extend(f: PartialFunctional, mode: str) -> McShaneExtension:
    return McShaneExtension(f, mode)


# ---------------------------------------------------------------------------
# Pigeonhole limits along witness sequences
# ---------------------------------------------------------------------------


class PigeonholeLimit:
    """Limit of h_{y_k} along a deterministic subsequence.

    At each newly requested point the active witness indices are grouped by
    their value there (exactly for exact spaces, by tol/10 clustering for
    float ones); among values recurring at least ``recur_min`` times the
    smallest is chosen and the subsequence restricted to it.  Restricting a
    convergent subsequence never changes already-chosen values, so earlier
    evaluations stay valid.  Failure to find a recurring value is reported,
    not hidden.
    """

    def __init__(
        self,
        space: MetricSpace,
        witnesses: Iterable[Point],
        *,
        budget: int = 4096,
        tol: float = 1e-9,
        recur_min: int = 2,
        name: str = "extension",
    ):
        self.space = space
        self.name = name
        self.tol = tol
        self.recur_min = max(2, recur_min)
        self.points: list[Point] = []
        for w in witnesses:
            self.points.append(w)
            if len(self.points) >= budget:
                break
        if not self.points:
            raise PreconditionError("witness sequence is empty")
        x0 = space.base_point
        self.offsets = [space.distance(x0, w) for w in self.points]
        self.active: list[int] = list(range(len(self.points)))
        self._cache: dict = {}

    def evaluate(self, y: Point) -> EvalOutcome:
        key = self.space.point_key(y)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        vals = [
            (self.space.distance(y, self.points[i]) - self.offsets[i], i) for i in self.active
        ]
        outcome = self._choose(vals)
        if outcome.stabilized:
            chosen = outcome.value
            if self.space.exact:
                keep = [i for v, i in vals if v == chosen]
            else:
                keep = [i for v, i in vals if abs(v - chosen) <= self.tol]
            self.active = keep
        self._cache[key] = outcome
        return outcome

    def _choose(self, vals: list[tuple[Scalar, int]]) -> EvalOutcome:
        used = len(vals)
        if self.space.exact:
            counts: dict = {}
            for v, _ in vals:
                counts[v] = counts.get(v, 0) + 1
            recurring = sorted(v for v, c in counts.items() if c >= self.recur_min)
            if not recurring:
                return EvalOutcome(vals[-1][0], False, vals[-1][1], None, used)
            chosen = recurring[0]
            first = next(i for v, i in vals if v == chosen)
            return EvalOutcome(chosen, True, first, None, used)
        # Float: cluster sorted values, breaking at gaps larger than tol/10.
        ordered = sorted(vals)
        clusters: list[list[tuple[float, int]]] = [[ordered[0]]]
        for v, i in ordered[1:]:
            if v - clusters[-1][-1][0] <= self.tol / 10.0:
                clusters[-1].append((v, i))
            else:
                clusters.append([(v, i)])
        recurring = [c for c in clusters if len(c) >= self.recur_min]
        if not recurring:
            return EvalOutcome(vals[-1][0], False, vals[-1][1], None, used)
        cluster = recurring[0]
        # Report the member computed from the deepest witness.
        v, i = max(cluster, key=lambda t: t[1])
        width = cluster[-1][0] - cluster[0][0]
        return EvalOutcome(v, True, i, width, used)

    def value(self, y: Point) -> Scalar:
        out = self.evaluate(y)
        if not out.stabilized:
            raise BudgetError(
                f"{self.name}: no recurring value at {y!r} within {out.used} witnesses"
            )
        return out.value

    kind = "pigeonhole"


@dataclass
class RestrictionAudit:
    passed: bool
    checked: int
    worst: Scalar
    failure: Optional[tuple] = None

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "worst": float(self.worst),
            "failure": None if self.failure is None else [str(v) for v in self.failure],
        }


@dataclass
class HahnBanachResult:
    functional: PigeonholeLimit
    table: dict
    audit: RestrictionAudit


def hahn_banach_extend(
    space: MetricSpace,
    h_on_subset: Callable[[Point], Scalar],
    witnesses: Iterable[Point],
    *,
    eval_points: Sequence[Point] = (),
    audit_points: Sequence[Point] = (),
    budget: int = 4096,
    tol: float = 1e-9,
) -> HahnBanachResult:
    """Extend a limit functional of a subset to the whole space.

    ``witnesses`` is a sequence of subset points realizing h pointwise on
    the subset; the extension is the pigeonhole limit of their point
    functionals computed in the ambient space.  The audit re-evaluates the
    extension on subset points and compares with h (exactly on exact
    spaces, within tol otherwise).
    """
    H = PigeonholeLimit(space, witnesses, budget=budget, tol=tol)
    table: dict = {}
    order = sorted(eval_points, key=space.point_key)
    for p in order:
        table[space.point_label(p)] = H.evaluate(p)
    worst: Scalar = 0
    checked = 0
    failure = None
    slack = 0 if space.exact else tol
    for y in sorted(audit_points, key=space.point_key):
        out = H.evaluate(y)
        if not out.stabilized:
            failure = ("no_stabilization", y)
            break
        gap = abs(out.value - h_on_subset(y))
        worst = max(worst, gap)
        checked += 1
        if gap > slack:
            failure = ("restriction_mismatch", y, out.value, h_on_subset(y))
            break
    return HahnBanachResult(H, table, RestrictionAudit(failure is None, checked, worst, failure))


# ---------------------------------------------------------------------------
# Horofunction failure witnesses
# ---------------------------------------------------------------------------


@dataclass
class FailureWitness:
    """One witness of non-uniform convergence: at stage ``stage`` the point
    functional still differs from the limit by ``gap`` at ``point`` inside
    the ball of radius r."""

    stage: Scalar
    point: str
    value_at_stage: Scalar
    limit_value: Scalar
    gap: Scalar

    def as_dict(self) -> dict:
        from .serialize import scalar_to_json

        return {
            "stage": scalar_to_json(self.stage),
            "point": self.point,
            "value_at_stage": scalar_to_json(self.value_at_stage),
            "limit_value": scalar_to_json(self.limit_value),
            "gap": scalar_to_json(self.gap),
        }


@dataclass
class FailureReport:
    space: str
    r: Scalar
    witnesses: list[FailureWitness]
    pointwise_stabilization: list[tuple[str, int]]  # (point, stage index where exact)

    def as_dict(self) -> dict:
        from .serialize import scalar_to_json

        return {
            "space": self.space,
            "r": scalar_to_json(self.r),
            "witnesses": [w.as_dict() for w in self.witnesses],
            "pointwise_stabilization": [
                {"point": p, "stage": s} for p, s in self.pointwise_stabilization
            ],
        }


def spoke_ray_failure_witness(r, stages: Sequence) -> FailureReport:
    """For each ray stage t, exhibit a satellite head past t where the ray's
    point functional is still 3/2 away from its pointwise limit.

    The head sits at distance 1 <= r from the base point, so convergence is
    not uniform on B(r) no matter how large t is; at any FIXED head the
    values stabilize exactly once t passes its index.
    """
    if r < 1:
        raise PreconditionError("need r >= 1 so that the heads are inside the ball")
    space = SpokeRaySpace()
    witnesses = []
    for t in stages:
        t = frac(t)
        if t < 1:
            raise PreconditionError("stages must be >= 1")
        n = int(t) + 1
        head = space.spoke_head(n)
        at_stage = space.distance(head, space.gamma(t)) - t
        limit = Fraction(-1, 2)  # own-spoke route: (n - 1/2) + (t - n) - t
        witnesses.append(
            FailureWitness(t, space.point_label(head), at_stage, limit, abs(at_stage - limit))
        )
    stab = []
    for n in (1, 2, 3, 5, 8):
        head = space.spoke_head(n)
        # d(head, gamma(t)) - t equals -1/2 for every t >= n.
        stab.append((space.point_label(head), n))
    return FailureReport("spoke_ray", frac(r), witnesses, stab)


def star_tree_failure_witness(r, branch_indices: Sequence[int]) -> FailureReport:
    """On the interval star, h_{x_n} converges pointwise to d(x0, .) while
    missing it by exactly 2s at the depth-s point of branch n."""
    if r < 1:
        raise PreconditionError("need r >= 1")
    space = StarTreeSpace()
    r = frac(r)
    witnesses = []
    for n in branch_indices:
        s = min(r, Fraction(n))
        y = space.interval_point(n, s)
        xn = space.endpoint(n)
        at_stage = space.distance(y, xn) - space.distance(HUB, xn)  # = -s
        limit = space.distance(HUB, y)  # pointwise limit is h at the hub
        witnesses.append(
            FailureWitness(n, space.point_label(y), at_stage, limit, abs(at_stage - limit))
        )
    stab = []
    for m in (1, 2, 3, 5):
        y = space.interval_point(m, min(r, Fraction(m)))
        # h_{x_n}(y) equals d(x0, y) for every n != m: stabilizes past m.
        stab.append((space.point_label(y), m + 1))
    return FailureReport("star_tree", r, witnesses, stab)


def horofunction_failure_witness(space_kind: str, r, stages: Sequence) -> FailureReport:
    if space_kind == "spoke_ray":
        return spoke_ray_failure_witness(r, stages)
    if space_kind == "star_tree":
        return star_tree_failure_witness(r, [int(s) for s in stages])
    raise UnsupportedError(f"no failure witness for space kind {space_kind!r}")


# ---------------------------------------------------------------------------
# The zero functional is not a limit on the two-point set {-1, +1} of R
# ---------------------------------------------------------------------------


@dataclass
class ZeroObstructionReport:
    """Closed-form obstruction: max(|h_z(1)|, |h_z(-1)|) = 1 for every real
    anchor z, so no anchor sequence can take both values to 0."""

    passed: bool
    grid_size: int
    min_of_max: Scalar
    outside_identity_ok: bool  # |h_z(1)| = 1 exactly for all |z| >= 1
    inside_identity_ok: bool  # h_z(1) + h_z(-1) = 2(1 - |z|) for |z| <= 1

    def as_dict(self) -> dict:
        from .serialize import scalar_to_json

        return {
            "passed": self.passed,
            "grid": self.grid_size,
            "min_of_max": scalar_to_json(self.min_of_max),
            "outside_identity": self.outside_identity_ok,
            "inside_identity": self.inside_identity_ok,
        }


def euclidean_zero_nonmembership_check(grid: Sequence) -> ZeroObstructionReport:
    """Check the obstruction over a grid of rational anchors z on the line.

    h_z(y) = |y - z| - |z|.  For |z| >= 1, |h_z(1)| = 1 exactly; for
    |z| <= 1, h_z(1) + h_z(-1) = 2(1 - |z|) and still max(|h_z(+-1)|) = 1.
    """
    anchors = [frac(z) for z in grid]
    if not anchors:
        raise PreconditionError("anchor grid must be nonempty")
    min_of_max: Optional[Fraction] = None
    outside_ok = True
    inside_ok = True
    for z in anchors:
        h1 = abs(1 - z) - abs(z)
        hm1 = abs(-1 - z) - abs(z)
        m = max(abs(h1), abs(hm1))
        if min_of_max is None or m < min_of_max:
            min_of_max = m
        if abs(z) >= 1 and abs(h1) != 1:
            outside_ok = False
        if abs(z) <= 1 and h1 + hm1 != 2 * (1 - abs(z)):
            inside_ok = False
    passed = min_of_max >= 1 and outside_ok and inside_ok
    return ZeroObstructionReport(passed, len(anchors), min_of_max, outside_ok, inside_ok)
