"""Semi-contraction and isometry dynamics: translation numbers with
certified subadditive bounds, minimal displacement, the trace-style
commutation of translation numbers, orbit functionals for distorted
isometries, and the one-point compactification of distorted lines.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    InvalidParameterError,
    NotMonotoneError,
    PreconditionError,
    UnsupportedError,
)
from .functionals import RealizedFunctional, eval_functional
from .metric import MetricSpace, Point, Scalar
from .spaces import (
    DistortedLine,
    PoincareDisk,
    UpperHalfPlane,
    cayley_to_disk,
    cayley_to_half_plane,
)

ExactOrFloat = Union[Fraction, float]


# ---------------------------------------------------------------------------
# Self-maps
# ---------------------------------------------------------------------------


class SelfMap:
    """A distance-nonincreasing self-map given as a mapping oracle."""

    def __init__(
        self,
        space: MetricSpace,
        func: Callable[[Point], Point],
        *,
        kind: str = "semi-contraction",
        inverse: Callable[[Point], Point] | None = None,
        label: str = "map",
        group_element=None,
        matrix: "MoebiusMap | None" = None,
    ):
        if kind not in ("semi-contraction", "isometry"):
            raise InvalidParameterError(f"unknown map kind {kind!r}")
        self.space = space
        self.func = func
        self.kind = kind
        self.inverse_func = inverse
        self.label = label
        self.group_element = group_element
        self.matrix = matrix

    def apply(self, x: Point) -> Point:
        return self.func(x)

    def apply_inverse(self, x: Point) -> Point:
        if self.inverse_func is None:
            raise UnsupportedError(f"{self.label} has no inverse oracle")
        return self.inverse_func(x)

    def orbit(self, n: int, x0: Point | None = None) -> list[Point]:
        """[x0, f(x0), ..., f^n(x0)]."""
        x = self.space.base_point if x0 is None else x0
        out = [x]
        for _ in range(n):
            x = self.func(x)
            out.append(x)
        return out

    def audit_nonexpansive(self, *, pairs: int = 512, tol: Scalar | None = None, seed: int = 0):
        """Sampled check of d(f(x), f(y)) <= d(x, y); equality for isometries."""
        from .functionals import CheckOutcome

        rng = random.Random(seed)
        pts = self.space.sample_points(rng, 2 * pairs)
        if tol is None:
            tol = 0 if self.space.exact else 1e-12
        worst = 0
        for i in range(pairs):
            x, y = pts[2 * i], pts[2 * i + 1]
            before = self.space.distance(x, y)
            after = self.space.distance(self.func(x), self.func(y))
            gap = after - before if self.kind == "semi-contraction" else abs(after - before)
            worst = max(worst, gap)
            if gap > tol:
                return CheckOutcome(False, i + 1, float(gap), (x, y))
        return CheckOutcome(True, pairs, float(worst))


def group_translation(space, g) -> SelfMap:
    """Left translation x -> g x on a Cayley graph space (an isometry)."""
    fam = space.family
    fam.check_element(g)
    ginv = fam.inverse(g)
    return SelfMap(
        space,
        lambda x: fam._mul(g, x),
        kind="isometry",
        inverse=lambda x: fam._mul(ginv, x),
        label=f"translation by {fam.element_label(g)}",
        group_element=g,
    )


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------


def _coerce_entry(v) -> ExactOrFloat:
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return float(v)


class MoebiusMap:
    """A real 2x2 determinant-one matrix acting on the half-plane, with the
    disk action obtained by conjugating with the Cayley transform.

    Entries given as ints, Fractions, or strings stay exact, which makes
    traces of products exactly comparable; float entries are renormalized
    to determinant one when the drift exceeds 1e-13.
    """

    def __init__(self, a, b, c, d):
        entries = [_coerce_entry(v) for v in (a, b, c, d)]
        self.exact = all(isinstance(v, Fraction) for v in entries)
        if self.exact:
            det = entries[0] * entries[3] - entries[1] * entries[2]
            if det != 1:
                raise InvalidParameterError(f"determinant must be 1, got {det}")
        else:
            entries = [float(v) for v in entries]
            det = entries[0] * entries[3] - entries[1] * entries[2]
            if det <= 0:
                raise InvalidParameterError(f"determinant must be 1, got {det}")
            if abs(det - 1.0) > 1e-13:
                s = math.sqrt(det)
                entries = [v / s for v in entries]
            if abs(entries[0] * entries[3] - entries[1] * entries[2] - 1.0) > 1e-9:
                raise InvalidParameterError("determinant too far from 1")
        self.a, self.b, self.c, self.d = entries

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def trace(self) -> ExactOrFloat:
        return self.a + self.d

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def classify(self) -> str:
        t = abs(float(self.trace()))
        if self.exact:
            t2 = abs(self.trace())
            if t2 < 2:
                return "elliptic"
            if t2 == 2:
                return "parabolic"
            return "hyperbolic"
        if t < 2 - 1e-12:
            return "elliptic"
        if t <= 2 + 1e-12:
            return "parabolic"
        return "hyperbolic"

    def translation_length(self) -> float:
        """Closed-form translation number: 2*arccosh(|tr|/2) when
        hyperbolic, 0 for parabolic and elliptic maps."""
        t = abs(float(self.trace()))
        return 2.0 * math.acosh(t / 2.0) if t > 2.0 else 0.0

    def apply_half_plane(self, z: complex) -> complex:
        a, b, c, d = (float(v) for v in self.entries())
        return (a * z + b) / (c * z + d)

    def apply_disk(self, w: complex) -> complex:
        return cayley_to_disk(self.apply_half_plane(cayley_to_half_plane(w)))

    def as_selfmap(self, space: MetricSpace, *, kind: str = "isometry") -> SelfMap:
        inv = self.inverse()
        if isinstance(space, UpperHalfPlane):
            return SelfMap(
                space,
                self.apply_half_plane,
                kind=kind,
                inverse=inv.apply_half_plane,
                label="moebius",
                matrix=self,
            )
        if isinstance(space, PoincareDisk):
            return SelfMap(
                space,
                self.apply_disk,
                kind=kind,
                inverse=inv.apply_disk,
                label="moebius(disk)",
                matrix=self,
            )
        raise UnsupportedError("Moebius maps act on the hyperbolic models only")

    def orbit_distances(self, n_max: int) -> list[float]:
        """d(i, M^n i) for n = 0..n_max via scale-tracked matrix powers.

        With determinant one, d(i, M i) = arccosh(||M||_F^2 / 2); powers are
        kept as a max-normalized matrix plus a log scale so hyperbolic
        growth never overflows.
        """
        m0 = np.array(
            [[float(self.a), float(self.b)], [float(self.c), float(self.d)]], dtype=float
        )
        u = np.eye(2)
        logscale = 0.0
        out = [0.0]
        for _ in range(n_max):
            u = u @ m0
            m = float(np.abs(u).max())
            u /= m
            logscale += math.log(m)
            # log of ||M^n||_F^2 = 2*logscale + log(||u||_F^2)
            log_t = 2.0 * logscale + math.log(float((u * u).sum()))
            if log_t > 50.0:
                out.append(log_t)  # arccosh(T/2) = log T + O(1/T^2)
            else:
                t = math.exp(log_t)
                out.append(math.acosh(max(1.0, t / 2.0)))
        return out


def random_hyperbolic_pair(rng: random.Random, *, max_trace: int = 12) -> tuple[MoebiusMap, MoebiusMap]:
    """Seeded pair of exact hyperbolic maps built from elementary shears."""

    def one() -> MoebiusMap:
        while True:
            m = MoebiusMap(1, 0, 0, 1)
            for _ in range(rng.randrange(2, 5)):
                p = Fraction(rng.randrange(-2, 3))
                if rng.randrange(2):
                    m = m.compose(MoebiusMap(1, p, 0, 1))
                else:
                    m = m.compose(MoebiusMap(1, 0, p, 1))
            t = abs(m.trace())
            if 2 < t <= max_trace:
                return m

    return one(), one()


# ---------------------------------------------------------------------------
# Translation number and minimal displacement
# ---------------------------------------------------------------------------


@dataclass
class TauReport:
    """Subadditive estimate a_N/N and the certified upper bound
    min_{n<=N} a_n/n for the translation number."""

    n: int
    displacements: list
    estimate: float
    bound: float
    bound_trace: list
    closed_form: Optional[float] = None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "estimate": float(self.estimate),
            "bound": float(self.bound),
            "bound_trace": [float(v) for v in self.bound_trace],
            "closed_form": None if self.closed_form is None else float(self.closed_form),
        }


def _orbit_displacements(f: SelfMap, n: int, x0: Point | None) -> list:
    """a_k = d(x0, f^k(x0)) for k = 0..n, exact where the space is."""
    space = f.space
    base = space.base_point if x0 is None else x0
    if f.matrix is not None and x0 is None and isinstance(space, UpperHalfPlane):
        return f.matrix.orbit_distances(n)
    if f.group_element is not None and x0 is None:
        fam = space.family
        out = [0]
        power = fam.identity()
        g = f.group_element
        step = space.distance(fam.identity(), g)
        for k in range(1, n + 1):
            power = fam._mul(power, g)
            length = space.word_length_of(power, bound=k * step + 1)
            out.append(length)
        return out
    out = [0]
    x = base
    for _ in range(n):
        x = f.apply(x)
        out.append(space.distance(base, x))
    return out


def translation_number(f: SelfMap, n: int, *, x0: Point | None = None) -> TauReport:
    """Estimate and certify the translation number from n orbit steps.

    Subadditivity of a_k = d(x0, f^k x0) makes min a_k/k a true upper
    bound for the limit a_k/k; the estimate is a_n/n.
    """
    if n < 1:
        raise PreconditionError("need n >= 1")
    a = _orbit_displacements(f, n, x0)
    bound_trace = []
    bound = None
    for k in range(1, n + 1):
        v = a[k] / k
        bound = v if bound is None else min(bound, v)
        bound_trace.append(bound)
    closed = f.matrix.translation_length() if f.matrix is not None else None
    return TauReport(n, a, float(a[n] / n), float(bound), bound_trace, closed)


@dataclass
class DisplacementReport:
    bound: Scalar
    argmin: Point
    trace: list

    def as_dict(self) -> dict:
        return {
            "bound": float(self.bound),
            "argmin": str(self.argmin),
            "trace": [float(v) for v in self.trace],
        }


def minimal_displacement(f: SelfMap, points: Iterable[Point], *, budget: int = 10_000) -> DisplacementReport:
    """Certified upper bound inf_x d(x, f(x)) over the visited points."""
    best = None
    arg = None
    trace = []
    for k, x in enumerate(points):
        if k >= budget:
            break
        d = f.space.distance(x, f.apply(x))
        if best is None or d < best:
            best, arg = d, x
        trace.append(best)
    if best is None:
        raise PreconditionError("point generator yielded nothing")
    return DisplacementReport(best, arg, trace)


@dataclass(frozen=True)
class DisplacementSublevel:
    """Points moved at most eps by the map; sublevels nest as eps shrinks."""

    eps: Scalar
    witnesses: tuple

    def __len__(self) -> int:
        return len(self.witnesses)


def displacement_sublevels(
    f: SelfMap, points: Sequence[Point], eps_schedule: Sequence
) -> list[DisplacementSublevel]:
    """Sublevel sets N_eps over the searched points, one per epsilon.

    Nesting (smaller eps, smaller set) holds by construction and is
    asserted; an empty sublevel is a precondition failure since callers
    need a witness inside every scheduled level.
    """
    disp = [(x, f.space.distance(x, f.apply(x))) for x in points]
    out = []
    prev_size = None
    for eps in sorted(eps_schedule, reverse=True):
        members = tuple(x for x, d in disp if d <= eps)
        if not members:
            raise PreconditionError(f"no witness with displacement <= {eps}")
        assert prev_size is None or len(members) <= prev_size
        prev_size = len(members)
        out.append(DisplacementSublevel(eps, members))
    return out


def displacement_sublevel_witnesses(
    f: SelfMap, points: Sequence[Point], eps_schedule: Sequence
) -> list[Point]:
    """First point with displacement <= eps, for each eps in the schedule."""
    disp = [(x, f.space.distance(x, f.apply(x))) for x in points]
    out = []
    for eps in eps_schedule:
        w = next((x for x, d in disp if d <= eps), None)
        if w is None:
            raise PreconditionError(f"no witness with displacement <= {eps}")
        out.append(w)
    return out


@dataclass
class TracialReport:
    """Difference of translation-number estimates for fg vs gf, with the
    additive bound 2(d(x0,f x0) + d(x0,g x0))/N from the triangle chain."""

    estimate_fg: float
    estimate_gf: float
    estimate_gap: float
    proof_bound: float
    passed: bool
    closed_form_gap: Optional[ExactOrFloat] = None

    def as_dict(self) -> dict:
        return {
            "estimate_fg": self.estimate_fg,
            "estimate_gf": self.estimate_gf,
            "estimate_gap": self.estimate_gap,
            "proof_bound": self.proof_bound,
            "passed": self.passed,
            "closed_form_gap": None
            if self.closed_form_gap is None
            else float(self.closed_form_gap),
        }


def tracial_check(f: SelfMap, g: SelfMap, n: int, *, tol: float = 1e-9) -> TracialReport:
    """Compare translation numbers of fg and gf.

    For Moebius pairs with exact entries the closed forms agree exactly
    because tr(AB) = tr(BA); the subadditive estimates agree within the
    additive bound regardless of the map kind.
    """
    if f.space is not g.space:
        raise PreconditionError("maps must act on the same space")
    space = f.space
    if f.matrix is not None and g.matrix is not None:
        fg_m = f.matrix.compose(g.matrix)
        gf_m = g.matrix.compose(f.matrix)
        fg = fg_m.as_selfmap(space, kind=f.kind)
        gf = gf_m.as_selfmap(space, kind=f.kind)
        closed_gap = abs(fg_m.trace() - gf_m.trace())  # exact 0 for exact entries
        if closed_gap == 0:
            closed_gap = abs(fg_m.translation_length() - gf_m.translation_length())
    else:
        fg = SelfMap(space, lambda x: f.apply(g.apply(x)), kind="semi-contraction")
        gf = SelfMap(space, lambda x: g.apply(f.apply(x)), kind="semi-contraction")
        closed_gap = None
    x0 = space.base_point
    t_fg = translation_number(fg, n)
    t_gf = translation_number(gf, n)
    bound = (
        2.0
        * (float(space.distance(x0, f.apply(x0))) + float(space.distance(x0, g.apply(x0))))
        / n
    )
    gap = abs(t_fg.estimate - t_gf.estimate)
    return TracialReport(
        t_fg.estimate, t_gf.estimate, gap, bound, gap <= bound + tol, closed_gap
    )


@dataclass
class PrincipleReport:
    """Best candidate for a functional decaying at rate tau along the orbit:
    h(f^n x0) <= -tau n up to the reported violation."""

    best_index: int
    violations: list
    tau_bound: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "best_index": self.best_index,
            "violations": [float(v) for v in self.violations],
            "tau_bound": self.tau_bound,
            "passed": self.passed,
        }


def spectral_principle_witness(
    f: SelfMap,
    candidates: Sequence,
    n: int,
    *,
    tol: float = 1e-9,
    x0: Point | None = None,
) -> PrincipleReport:
    """Among the candidate functionals, find the one minimizing the maximal
    violation of h(f^k x0) <= -tau_hat k over k = 1..n."""
    if not candidates:
        raise InvalidParameterError("candidate list is empty")
    tau = translation_number(f, n, x0=x0).bound
    orbit = f.orbit(n, x0)
    worst = []
    for h in candidates:
        v = max(float(eval_functional(h, orbit[k])) + tau * k for k in range(1, n + 1))
        worst.append(v)
    best = min(range(len(candidates)), key=lambda i: worst[i])
    return PrincipleReport(best, worst, float(tau), worst[best] <= tol)


# ---------------------------------------------------------------------------
# Invariant functionals from almost-fixed points
# ---------------------------------------------------------------------------


@dataclass
class AlmostFixedReport:
    functional: RealizedFunctional
    displacement_bound: Scalar
    audit_passed: bool
    audit_worst: float
    audit_checked: int
    equality_mode: bool

    def as_dict(self) -> dict:
        return {
            "displacement_bound": float(self.displacement_bound),
            "audit_passed": self.audit_passed,
            "audit_worst": self.audit_worst,
            "audit_checked": self.audit_checked,
            "equality_mode": self.equality_mode,
        }


def almost_fixed_invariant_functional(
    f: SelfMap,
    witness_points: Sequence[Point],
    eps_schedule: Sequence,
    eval_grid: Sequence[Point],
    *,
    tol: float = 1e-9,
    budget: int = 100_000,
) -> AlmostFixedReport:
    """Build the limit functional along points moved less and less by f and
    audit h(f(x)) <= h(x) on the grid (equality when f is an isometry).

    Precondition: the certified displacement bound over the witnesses must
    reach below the smallest epsilon in the schedule.
    """
    eps_schedule = sorted((e for e in eps_schedule), reverse=True)
    if not eps_schedule:
        raise PreconditionError("epsilon schedule is empty")
    disp = minimal_displacement(f, witness_points)
    if disp.bound > min(eps_schedule):
        raise PreconditionError(
            f"displacement bound {disp.bound} does not reach min epsilon {min(eps_schedule)}"
        )
    chosen = displacement_sublevel_witnesses(f, witness_points, eps_schedule)
    if not f.space.exact:
        # a repeated witness would satisfy the successive-difference
        # criterion vacuously; exact spaces keep repeats (constant runs are
        # their stabilization evidence)
        key = f.space.point_key
        chosen = [
            w for i, w in enumerate(chosen) if i == 0 or key(w) != key(chosen[i - 1])
        ]
    h = RealizedFunctional(f.space, chosen, budget=budget, tol=tol, name="almost-fixed limit")
    equality = f.kind == "isometry"
    worst = 0.0
    checked = 0
    passed = True
    for x in eval_grid:
        hx = h.evaluate(x)
        hfx = h.evaluate(f.apply(x))
        if not (hx.stabilized and hfx.stabilized):
            passed = False
            break
        gap = hfx.value - hx.value
        gap = abs(gap) if equality else max(0, gap)
        worst = max(worst, float(gap))
        checked += 1
        if gap > tol:
            passed = False
            break
    return AlmostFixedReport(h, disp.bound, passed, worst, checked, equality)


# ---------------------------------------------------------------------------
# Orbit functionals for monotone distorted isometries
# ---------------------------------------------------------------------------


class OrbitSpace:
    """Distances D(k) = d(x0, g^k x0) for k = 0..N and the induced metric
    d(m, n) = D(|m - n|) on orbit indices.

    ``n0`` marks the least index from which D is nondecreasing.
    """

    def __init__(self, displacements: Sequence):
        self.D = list(displacements)
        if not self.D or self.D[0] != 0:
            raise InvalidParameterError("displacement table must start with D(0) = 0")
        self.N = len(self.D) - 1
        n0 = self.N
        for k in range(self.N - 1, -1, -1):
            if self.D[k] <= self.D[k + 1]:
                n0 = k
            else:
                break
        self.n0 = n0
        self.exact = all(isinstance(v, (int, Fraction)) for v in self.D)

    @classmethod
    def from_selfmap(cls, f: SelfMap, n: int, *, x0: Point | None = None) -> "OrbitSpace":
        return cls(_orbit_displacements(f, n, x0))

    def index_distance(self, m: int, n: int):
        return self.D[abs(m - n)]

    def tau_bound(self) -> float:
        return min(self.D[k] / k for k in range(1, self.N + 1))


@dataclass
class OrbitFunctionalReport:
    """Candidate boundary functional on orbit indices and its audits."""

    indices: list
    values: list
    certificate: str  # "stabilized" | "tail"
    recurrences: int
    monotone_ok: bool
    vanishing_sup: float
    cesaro_indices: list
    cesaro_values: list
    cesaro_sup: float
    tau_bound: float

    def as_dict(self) -> dict:
        from .serialize import scalar_to_json

        return {
            "indices": self.indices,
            "values": [scalar_to_json(v) for v in self.values],
            "certificate": self.certificate,
            "recurrences": self.recurrences,
            "monotone_ok": self.monotone_ok,
            "vanishing_sup": self.vanishing_sup,
            "cesaro_indices": self.cesaro_indices,
            "cesaro_values": [float(v) for v in self.cesaro_values],
            "cesaro_sup": self.cesaro_sup,
            "tau_bound": self.tau_bound,
        }


def parabolic_orbit_functional(
    orbit: OrbitSpace,
    *,
    eval_hi: int,
    averaging: int = 64,
    delta: float = 1.0,
    tol: float = 1e-9,
) -> OrbitFunctionalReport:
    """Candidate functional h(m) = lim_n D(n - m) - D(n) on orbit indices.

    Requires the orbit to be eventually monotone early (n0 <= N/4) and the
    certified translation-number bound to sit below ``delta``.  The limit
    is taken along the recurring difference vector when one recurs
    (exactly for integer D, within tol/10 for floats); otherwise the last
    window is reported with a "tail" certificate.  The candidate always
    lies in the monotone set {h : h(n) <= h(m) for n >= m}, which is
    audited exactly, and a Cesaro average over ``averaging`` shifts
    approximates the invariant-measure integral, which would vanish on the
    whole orbit in the limit.
    """
    N = orbit.N
    if orbit.n0 > N / 4:
        raise NotMonotoneError(
            f"orbit distances not monotone early enough (n0 = {orbit.n0} > N/4)",
            witness_index=orbit.n0 - 1,
        )
    tau = orbit.tau_bound()
    if tau >= delta:
        raise PreconditionError(f"certified tau bound {tau} is not below delta = {delta}")
    M = max(1, averaging)
    lo = -(M - 1)
    idx = list(range(lo, eval_hi + 1))
    n_lo = orbit.n0 + max(0, eval_hi)
    n_hi = N + min(0, lo)
    if n_lo > n_hi:
        raise PreconditionError(
            f"window empty: need D up to {eval_hi - lo + orbit.n0}, have N = {N}"
        )
    vectors = []
    for n in range(n_lo, n_hi + 1):
        vectors.append(tuple(orbit.D[n - m] - orbit.D[n] for m in idx))
    counts: dict[tuple, int] = {}
    if orbit.exact:
        for v in vectors:
            counts[v] = counts.get(v, 0) + 1
    else:
        quantum = tol / 10.0
        for v in vectors:
            key = tuple(round(float(x) / quantum) for x in v)
            counts[key] = counts.get(key, 0) + 1
        # map quantized keys back to the latest representative
        reps: dict[tuple, tuple] = {}
        for v in vectors:
            reps[tuple(round(float(x) / quantum) for x in v)] = v
    recurring = {k: c for k, c in counts.items() if c >= 2}
    if recurring:
        chosen_key = min(recurring)
        certificate = "stabilized"
        recurrences = recurring[chosen_key]
        values = list(chosen_key if orbit.exact else reps[chosen_key])
    else:
        certificate = "tail"
        recurrences = 1
        values = list(vectors[-1])
    monotone_ok = all(values[i + 1] <= values[i] for i in range(len(values) - 1))
    # audit range 0..eval_hi for the vanishing trend
    base = idx.index(0)
    vanish = max(abs(float(values[base + k])) for k in range(0, eval_hi + 1))
    # Cesaro average of the shifted candidates approximates the invariant
    # integral: (1/M) sum_j [h(m - j) - h(-j)].
    ces_idx = list(range(0, eval_hi + 1))
    ces_vals = []
    for m in ces_idx:
        total = 0.0
        for j in range(M):
            total += float(values[idx.index(m - j)]) - float(values[idx.index(-j)])
        ces_vals.append(total / M)
    ces_sup = max(abs(v) for v in ces_vals) if ces_vals else 0.0
    return OrbitFunctionalReport(
        idx,
        values,
        certificate,
        recurrences,
        monotone_ok,
        vanish,
        ces_idx,
        ces_vals,
        ces_sup,
        float(tau),
    )


# ---------------------------------------------------------------------------
# Fixtures: parabolic maps with closed-form invariant functionals
# ---------------------------------------------------------------------------


def half_plane_translation(t: float = 1.0) -> MoebiusMap:
    """The parabolic z -> z + t fixing infinity."""
    if isinstance(t, (int, Fraction, str)):
        return MoebiusMap(1, t, 0, 1)
    return MoebiusMap(1.0, float(t), 0.0, 1.0)


def disk_parabolic_orbit(n_lo: int, n_hi: int) -> list[complex]:
    """Orbit of 0 under the disk conjugate of z -> z + 1 (fixes zeta = 1).

    Computed through float matrix powers with determinant renormalization
    at every step, as the entries are exact in floats anyway.
    """
    step = half_plane_translation(1.0)
    out = []
    for n in range(n_lo, n_hi + 1):
        m = MoebiusMap(1.0, 0.0, 0.0, 1.0)
        factor = step if n >= 0 else step.inverse()
        for _ in range(abs(n)):
            m = m.compose(factor)  # renormalizes determinant drift each step
        out.append(cayley_to_disk(m.apply_half_plane(1j)))
    return out


def disk_parabolic_horocycle_audit(n_lo: int, n_hi: int) -> tuple[float, list[float]]:
    """Values of the boundary functional at 1 along the parabolic orbit of
    0; exactly zero in exact arithmetic, tiny float drift in practice."""
    from .functionals import DiskBusemann

    h = DiskBusemann(1)
    vals = [h.evaluate(w) for w in disk_parabolic_orbit(n_lo, n_hi)]
    return max(abs(v) for v in vals), vals


# ---------------------------------------------------------------------------
# Distorted line compactification
# ---------------------------------------------------------------------------


@dataclass
class CompactificationReport:
    """sup_{|y| <= r} |h_x(y)| per anchor; tends to zero for sublinear
    distortions, witnessing the one-point compactification."""

    r: float
    anchors: list
    sups: list
    crude_bounds: list  # D(|x| + r) - D(|x| - r)
    decreasing: bool

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "anchors": [float(a) for a in self.anchors],
            "sups": [float(s) for s in self.sups],
            "crude_bounds": [float(b) for b in self.crude_bounds],
            "decreasing": self.decreasing,
        }


def distorted_compactification_check(
    line: DistortedLine, r: float, anchors: Sequence[float]
) -> CompactificationReport:
    """Evaluate sup_{|y| <= r} |D(|y - x|) - D(|x|)| at each anchor.

    For nondecreasing D and |x| > r the supremum is attained at the
    endpoints y = +-r, so it equals max(D(|x|+r) - D(|x|), D(|x|) -
    D(|x|-r)).
    """
    if r < 0:
        raise PreconditionError("r must be >= 0")
    anchors = [abs(float(a)) for a in anchors]
    if any(a <= r for a in anchors):
        raise PreconditionError("anchors must exceed r")
    if any(b <= a for a, b in zip(anchors, anchors[1:])):
        raise PreconditionError("anchor schedule must be increasing")
    D = line.dfun
    sups = []
    crude = []
    for x in anchors:
        up = D(x + r) - D(x)
        down = D(x) - D(x - r)
        sups.append(max(up, down))
        crude.append(D(x + r) - D(x - r))
    decreasing = all(b < a for a, b in zip(sups, sups[1:]))
    return CompactificationReport(float(r), anchors, sups, crude, decreasing)
