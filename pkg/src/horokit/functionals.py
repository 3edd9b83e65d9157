"""Metric functionals: exact ball restrictions, closed-form models, and
limits realized along witness sequences, together with the property checks
used throughout (1-Lipschitz, midpoint convexity, functional norm, distance
recovery, l^p limit witnesses).
"""

from __future__ import annotations

import cmath
import math
import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    BudgetError,
    InvalidParameterError,
    InvalidPointError,
    PreconditionError,
    UnsupportedError,
)
from .metric import MetricSpace, Point, Scalar
from .spaces import LpSpace, PoincareDisk


# ---------------------------------------------------------------------------
# Ball restrictions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BallFunctional:
    """Exact restriction of a metric functional to a finite ball.

    The domain is the canonical-ordered point list of B(x0, r) with the
    base point first; identity of a restriction is its value tuple over
    that fixed order.
    """

    radius: Any
    labels: tuple[str, ...]
    values: tuple[Any, ...]
    points: tuple = field(compare=False, repr=False, default=())

    @classmethod
    def build(
        cls,
        radius,
        points: Sequence[Point],
        values: Sequence[Scalar],
        dist: Callable[[Point, Point], Scalar],
        labels: Sequence[str] | None = None,
        *,
        tol: Scalar = 0,
        check: bool = True,
    ) -> "BallFunctional":
        pts = tuple(points)
        vals = tuple(values)
        if labels is None:
            labels = tuple(str(p) for p in pts)
        bf = cls(radius, tuple(labels), vals, pts)
        if check:
            bf.check(dist, tol=tol)
        return bf

    def check(self, dist: Callable[[Point, Point], Scalar], *, tol: Scalar = 0) -> None:
        if len(self.points) != len(self.values):
            raise InvalidParameterError("domain and value lists differ in length")
        if self.values[0] != 0:
            raise InvalidParameterError("value at the base point must be 0")
        n = len(self.points)
        for i in range(n):
            for j in range(i + 1, n):
                gap = abs(self.values[i] - self.values[j])
                if gap > dist(self.points[i], self.points[j]) + tol:
                    raise InvalidParameterError(
                        f"restriction is not 1-Lipschitz on pair ({self.labels[i]}, {self.labels[j]})"
                    )
        base = self.points[0]
        for p, v in zip(self.points, self.values):
            if abs(v) > dist(base, p) + tol:
                raise InvalidParameterError(
                    f"|value| exceeds distance to base at {p!r}: {v}"
                )

    def value_at(self, point: Point) -> Scalar:
        for p, v in zip(self.points, self.values):
            if p == point:
                return v
        raise InvalidPointError(f"{point!r} is outside this ball restriction")

    def min_value(self) -> Scalar:
        return min(self.values)

    def evaluate(self, y: Point) -> Scalar:
        return self.value_at(y)

    kind = "ball"

    def as_dict(self) -> dict:
        from .serialize import scalar_to_json

        return {
            "radius": scalar_to_json(self.radius),
            "order": list(self.labels),
            "values": [scalar_to_json(v) for v in self.values],
        }


# ---------------------------------------------------------------------------
# Closed-form models
# ---------------------------------------------------------------------------


def _vec(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float)).ravel()


def _pad_pair(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = max(a.size, b.size)
    return np.pad(a, (0, n - a.size)), np.pad(b, (0, n - b.size))


def lp_norm(x: np.ndarray, p: float) -> float:
    if p == 2.0:
        return float(np.linalg.norm(x))
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


class LpZC:
    """Curved l^p functional with parameters (z, c), c >= ||z||_p.

    h(x) = (||x - z||_p^p + c^p - ||z||_p^p)^(1/p) - c; the limit of point
    functionals anchored at z + (c^p - ||z||_p^p)^(1/p) e_j along fresh
    coordinates j.
    """

    kind = "lp_zc"

    def __init__(self, z, c: float, p: float):
        self.z = _vec(z)
        self.c = float(c)
        self.p = float(p)
        if self.p < 1:
            raise InvalidParameterError("p must be >= 1")
        self.znorm = lp_norm(self.z, self.p)
        if self.c < self.znorm - 1e-12:
            raise InvalidParameterError(
                f"c = {self.c} must be >= ||z||_p = {self.znorm}"
            )
        self.ambient_p = self.p

    def evaluate(self, x) -> float:
        xv, zv = _pad_pair(_vec(x), self.z)
        return (
            lp_norm(xv - zv, self.p) ** self.p + self.c**self.p - self.znorm**self.p
        ) ** (1.0 / self.p) - self.c

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        Z = np.zeros(X.shape[1])
        Z[: self.z.size] = self.z
        diff = np.abs(X - Z) ** self.p
        return (diff.sum(axis=1) + self.c**self.p - self.znorm**self.p) ** (
            1.0 / self.p
        ) - self.c

    def params(self) -> dict:
        return {"z": self.z.tolist(), "c": self.c, "p": self.p}


class LpMu:
    """Linear-type l^p functional h(x) = -sum mu_j x_j with ||mu||_q <= 1."""

    kind = "lp_mu"

    def __init__(self, mu, p: float):
        self.mu = _vec(mu)
        self.p = float(p)
        if self.p <= 1:
            raise InvalidParameterError("p must be > 1 for the conjugate exponent")
        self.q = self.p / (self.p - 1.0)
        if lp_norm(self.mu, self.q) > 1 + 1e-12:
            raise InvalidParameterError("||mu||_q must be <= 1")
        self.ambient_p = self.p

    def evaluate(self, x) -> float:
        xv, mv = _pad_pair(_vec(x), self.mu)
        return float(-(xv * mv).sum())

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        M = np.zeros(X.shape[1])
        M[: self.mu.size] = self.mu
        return -(X * M).sum(axis=1)

    def params(self) -> dict:
        return {"mu": self.mu.tolist(), "p": self.p}


class Linear:
    """Euclidean linear functional h(x) = -<x, v> with ||v||_2 <= 1."""

    kind = "linear"
    ambient_p = 2.0

    def __init__(self, v):
        self.v = _vec(v)
        if np.linalg.norm(self.v) > 1 + 1e-12:
            raise InvalidParameterError("||v|| must be <= 1")

    def evaluate(self, x) -> float:
        xv, vv = _pad_pair(_vec(x), self.v)
        return float(-(xv * vv).sum())

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        V = np.zeros(X.shape[1])
        V[: self.v.size] = self.v
        return -(X * V).sum(axis=1)

    def params(self) -> dict:
        return {"v": self.v.tolist()}


class Zero:
    """The identically-zero functional."""

    kind = "zero"
    ambient_p = 2.0

    def evaluate(self, x) -> float:
        return 0.0

    def evaluate_batch(self, X: np.ndarray) -> np.ndarray:
        return np.zeros(X.shape[0])

    def params(self) -> dict:
        return {}


class DiskBusemann:
    """Boundary functional of the disk model at a unit complex zeta:
    h(z) = log(|zeta - z|^2 / (1 - |z|^2)), vanishing at 0."""

    kind = "disk_busemann"

    def __init__(self, zeta: complex):
        zeta = complex(zeta)
        if abs(abs(zeta) - 1.0) > 1e-9:
            raise InvalidParameterError("zeta must lie on the unit circle")
        self.zeta = zeta / abs(zeta)

    def evaluate(self, z) -> float:
        z = complex(z)
        if abs(z) >= 1:
            raise InvalidPointError(f"{z!r} is not inside the unit disk")
        return math.log(abs(self.zeta - z) ** 2 / (1.0 - abs(z) ** 2))

    def evaluate_batch(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        return np.log(np.abs(self.zeta - Z) ** 2 / (1.0 - np.abs(Z) ** 2))

    def params(self) -> dict:
        return {"zeta": [self.zeta.real, self.zeta.imag]}


class HalfPlaneBusemannInfinity:
    """Boundary functional of the half-plane at infinity: h(z) = -log Im z,
    normalized to vanish at i."""

    kind = "half_plane_busemann_infinity"

    def evaluate(self, z) -> float:
        z = complex(z)
        if z.imag <= 0:
            raise InvalidPointError(f"{z!r} is not in the upper half-plane")
        return -math.log(z.imag)

    def evaluate_batch(self, Z: np.ndarray) -> np.ndarray:
        return -np.log(np.asarray(Z, dtype=complex).imag)

    def params(self) -> dict:
        return {}


class ZdLinear:
    """Lattice functional h(g) = -<g, u> with ||u||_inf <= 1, exact.

    Fixed pointwise by every translation of the lattice, which is what the
    invariance audits of boundary measures rely on.
    """

    kind = "zd_linear"

    def __init__(self, u: Sequence):
        self.u = tuple(Fraction(v) for v in u)
        if any(abs(v) > 1 for v in self.u):
            raise InvalidParameterError("||u||_inf must be <= 1 for a word-metric functional")

    def evaluate(self, g) -> Fraction:
        if len(g) != len(self.u):
            raise InvalidPointError(f"{g!r} has wrong dimension for {self.u}")
        return -sum((Fraction(a) * b for a, b in zip(g, self.u)), Fraction(0))

    def translate(self, g) -> "ZdLinear":
        # (g.h)(x) = h(x - g) - h(-g) = h(x) for linear h.
        return self

    def params(self) -> dict:
        return {"u": [str(v) for v in self.u]}

    def __eq__(self, other):
        return isinstance(other, ZdLinear) and self.u == other.u

    def __hash__(self):
        return hash(("zd_linear", self.u))


def eval_functional(f, y) -> Scalar:
    """Evaluate any functional-like object at a point.

    Accepts model functionals, ball restrictions, realized limits (whose
    stabilized value is returned, raising BudgetError otherwise), and plain
    callables.
    """
    if isinstance(f, RealizedFunctional):
        return f.value(y)
    if hasattr(f, "evaluate"):
        return f.evaluate(y)
    if callable(f):
        return f(y)
    raise UnsupportedError(f"cannot evaluate {type(f).__name__}")


# ---------------------------------------------------------------------------
# Realized limits along witness sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalOutcome:
    """One limit evaluation: value, whether it stabilized, at which witness
    index the final run began, the last successive change, and how many
    witnesses were consumed."""

    value: Scalar
    stabilized: bool
    index: int
    residual: Optional[float]
    used: int


class RealizedFunctional:
    """Pointwise limit of d(., x_k) - d(x0, x_k) along witness points x_k.

    Exact spaces stabilize exactly (a trailing constant run of length
    ``stable_window`` ends the iteration); float spaces stop once two
    successive evaluations differ by less than tol/10.  Running out of
    witnesses yields an explicit non-stabilized outcome, never a silent
    value.  Evaluations are cached; the cache is safe for concurrent use.
    """

    def __init__(
        self,
        space: MetricSpace,
        witnesses: Iterable[Point],
        *,
        budget: int = 100_000,
        tol: float = 1e-9,
        stable_window: int = 8,
        name: str = "realized",
    ):
        self.space = space
        self.budget = budget
        self.tol = tol
        self.stable_window = max(2, stable_window)
        self.name = name
        self._witness_iter = iter(witnesses)
        self._points: list[Point] = []
        self._offsets: list[Scalar] = []
        self._cache: dict[Any, EvalOutcome] = {}
        self._lock = threading.Lock()

    def _witness(self, k: int) -> Optional[Point]:
        while len(self._points) <= k:
            if len(self._points) >= self.budget:
                return None
            try:
                w = next(self._witness_iter)
            except StopIteration:
                return None
            self._points.append(w)
            self._offsets.append(self.space.distance(self.space.base_point, w))
        return self._points[k]

    def evaluate(self, y: Point) -> EvalOutcome:
        key = self.space.point_key(y)
        with self._lock:
            hit = self._cache.get(key)
            if hit is not None:
                return hit
            outcome = self._evaluate(y)
            self._cache[key] = outcome
            return outcome

    def _evaluate(self, y: Point) -> EvalOutcome:
        # Exact spaces consume the whole witness schedule and report the
        # trailing constant run: an early constant run may still drop later
        # (ray witnesses are nonincreasing), so stopping at the first run
        # would report a transient value.  Float spaces stop once two
        # successive evaluations agree within tol/10.
        exact = self.space.exact
        run_value: Optional[Scalar] = None
        run_start = 0
        run_len = 0
        prev: Optional[Scalar] = None
        last_diff: Optional[float] = None
        small_run = 0
        k = 0
        while True:
            w = self._witness(k)
            if w is None:
                if prev is None:
                    raise PreconditionError("witness sequence is empty")
                if exact:
                    stabilized = run_len >= self.stable_window
                    return EvalOutcome(run_value, stabilized, run_start, None, k)
                return EvalOutcome(prev, False, run_start, last_diff, k)
            v = self.space.distance(y, w) - self._offsets[k]
            if exact:
                if v == run_value:
                    run_len += 1
                else:
                    run_value = v
                    run_start = k
                    run_len = 1
            else:
                run_start = k
                if prev is not None:
                    last_diff = abs(v - prev)
                    # two consecutive small steps guard against a single
                    # accidental coincidence of values along the witnesses
                    if last_diff < self.tol / 10.0:
                        small_run += 1
                        if small_run >= 2:
                            return EvalOutcome(v, True, k, last_diff, k + 1)
                    else:
                        small_run = 0
            prev = v
            k += 1

    def value(self, y: Point) -> Scalar:
        """Stabilized value at y; BudgetError if the limit did not stabilize."""
        out = self.evaluate(y)
        if not out.stabilized:
            raise BudgetError(
                f"{self.name}: evaluation at {y!r} did not stabilize within "
                f"{out.used} witnesses (last value {out.value})"
            )
        return out.value

    kind = "realized"


# ---------------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------------


@dataclass
class CheckOutcome:
    passed: bool
    checked: int
    worst: float
    witness: Optional[tuple] = None

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "worst": float(self.worst),
            "witness": None if self.witness is None else [str(w) for w in self.witness],
        }


def _ambient_for(f, dim: int) -> LpSpace:
    p = getattr(f, "ambient_p", None)
    if p is None:
        raise UnsupportedError(f"{type(f).__name__} has no normed ambient space")
    return LpSpace(p, dim)


def lipschitz_check(
    f,
    space: MetricSpace,
    *,
    pairs: int = 10_000,
    tol: Scalar = 0,
    seed: int = 0,
) -> CheckOutcome:
    """Verify |f(y) - f(z)| <= d(y, z) + tol over seeded sample pairs."""
    rng = random.Random(seed)
    if pairs < 1:
        raise PreconditionError("need at least one sample pair")
    if isinstance(space, LpSpace) and hasattr(f, "evaluate_batch"):
        nprng = np.random.default_rng(seed)
        Y = nprng.normal(0.0, 3.0, size=(pairs, space.dim))
        Z = nprng.normal(0.0, 3.0, size=(pairs, space.dim))
        fy = f.evaluate_batch(Y)
        fz = f.evaluate_batch(Z)
        if space.p == 2.0:
            d = np.linalg.norm(Y - Z, axis=1)
        else:
            d = (np.abs(Y - Z) ** space.p).sum(axis=1) ** (1.0 / space.p)
        slack = np.abs(fy - fz) - d
        worst = float(slack.max())
        if worst > tol:
            i = int(slack.argmax())
            return CheckOutcome(False, pairs, worst, (Y[i], Z[i]))
        return CheckOutcome(True, pairs, worst)
    if isinstance(space, PoincareDisk) and hasattr(f, "evaluate_batch"):
        nprng = np.random.default_rng(seed)
        def draw():
            z = nprng.uniform(-0.95, 0.95, size=(pairs, 2))
            z = z[:, 0] + 1j * z[:, 1]
            z[np.abs(z) >= 0.95] *= 0.5
            return z
        Y, Z = draw(), draw()
        fy, fz = f.evaluate_batch(Y), f.evaluate_batch(Z)
        d = 2.0 * np.arctanh(np.abs(Y - Z) / np.abs(1 - np.conj(Y) * Z))
        slack = np.abs(fy - fz) - d
        worst = float(slack.max())
        if worst > tol:
            i = int(slack.argmax())
            return CheckOutcome(False, pairs, worst, (Y[i], Z[i]))
        return CheckOutcome(True, pairs, worst)
    pts = space.sample_points(rng, 2 * pairs)
    worst = -math.inf
    for i in range(pairs):
        y, z = pts[2 * i], pts[2 * i + 1]
        gap = abs(eval_functional(f, y) - eval_functional(f, z)) - space.distance(y, z)
        if gap > worst:
            worst = gap
            if gap > tol:
                return CheckOutcome(False, i + 1, float(gap), (y, z))
    return CheckOutcome(True, pairs, float(worst))


def midpoint_convexity_check(
    f,
    dim: int,
    *,
    pairs: int = 10_000,
    tol: float = 1e-12,
    seed: int = 0,
) -> CheckOutcome:
    """Verify f((x+y)/2) <= (f(x) + f(y))/2 + tol over seeded pairs in the
    functional's normed ambient space."""
    _ambient_for(f, dim)  # raises UnsupportedError for non-normed ambients
    nprng = np.random.default_rng(seed)
    X = nprng.normal(0.0, 3.0, size=(pairs, dim))
    Y = nprng.normal(0.0, 3.0, size=(pairs, dim))
    M = (X + Y) / 2.0
    if hasattr(f, "evaluate_batch"):
        fx, fy, fm = f.evaluate_batch(X), f.evaluate_batch(Y), f.evaluate_batch(M)
    else:
        fx = np.array([eval_functional(f, x) for x in X])
        fy = np.array([eval_functional(f, y) for y in Y])
        fm = np.array([eval_functional(f, m) for m in M])
    slack = fm - (fx + fy) / 2.0
    worst = float(slack.max())
    if worst > tol:
        i = int(slack.argmax())
        return CheckOutcome(False, pairs, worst, (X[i], Y[i], M[i]))
    return CheckOutcome(True, pairs, worst)


@dataclass
class NormEstimate:
    """Certified lower bounds for sup |f(x)| / d(x0, x) over a radius schedule."""

    rows: list[tuple[float, float]]
    estimate: float

    def as_dict(self) -> dict:
        return {
            "rows": [[float(r), float(v)] for r, v in self.rows],
            "estimate": float(self.estimate),
        }


def functional_norm_estimate(
    f,
    space: MetricSpace,
    radius_schedule: Sequence,
    *,
    per_radius: int = 4096,
    seed: int = 0,
) -> NormEstimate:
    """Lower-bound the functional norm by maximizing |f|/d over sampled
    spheres of increasing radius.  The bound sequence is the running max."""
    if not radius_schedule:
        raise PreconditionError("radius schedule must be nonempty")
    if any(b <= a for a, b in zip(radius_schedule, radius_schedule[1:])):
        raise PreconditionError("radius schedule must be increasing")
    rng = random.Random(seed)
    rows: list[tuple[float, float]] = []
    best = 0.0
    for radius in radius_schedule:
        if isinstance(space, PoincareDisk):
            pts = space.sphere_points(float(radius), per_radius)
        elif isinstance(space, LpSpace):
            pts = space.sphere_points(float(radius), per_radius, rng)
        elif hasattr(space, "family"):  # word metric: sample the sphere via BFS order
            from .groups import cayley_ball

            ball = cayley_ball(space.family, space.gens, int(radius))
            pts = list(ball.sphere(int(radius)))
            if len(pts) > per_radius:
                pts = [pts[rng.randrange(len(pts))] for _ in range(per_radius)]
        else:
            raise UnsupportedError(f"no sphere sampler for {type(space).__name__}")
        ratio = 0.0
        for x in pts:
            d = space.distance(space.base_point, x)
            if d == 0:
                continue
            ratio = max(ratio, abs(eval_functional(f, x)) / d)
        best = max(best, float(ratio))
        rows.append((float(radius), best))
    return NormEstimate(rows, best)


@dataclass
class RecoveryReport:
    distance: float
    supremum: float
    gap: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "distance": float(self.distance),
            "supremum": float(self.supremum),
            "gap": float(self.gap),
            "passed": self.passed,
        }


def distance_recovery_check(space, x, *, tol: float = 1e-6, grid: int = 10_000) -> RecoveryReport:
    """Check d(x0, x) = sup over the boundary family of |h(x)|.

    Supported closed-form families: directional linear functionals on
    Euclidean space, the two ends of Z under its word metric, and the
    circle of boundary functionals of the disk model.  The direction grid
    always includes the closed-form optimizer.
    """
    from .groups import CayleyGraphSpace, Zd

    if isinstance(space, LpSpace) and space.p == 2.0:
        xv = _vec(x)
        d = float(np.linalg.norm(xv))
        sup = 0.0
        nprng = np.random.default_rng(0)
        dirs = nprng.normal(size=(grid, xv.size))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        if d > 0:
            dirs = np.vstack([dirs, xv / d])
        sup = float(np.abs(dirs @ xv).max())
        gap = abs(sup - d)
        return RecoveryReport(d, sup, gap, gap <= tol)
    if isinstance(space, CayleyGraphSpace) and isinstance(space.family, Zd) and space.family.dim == 1:
        n = x[0] if isinstance(x, tuple) else int(x)
        d = abs(n)
        sup = max(abs(-n), abs(n))
        gap = abs(sup - d)
        return RecoveryReport(float(d), float(sup), float(gap), gap == 0)
    if isinstance(space, PoincareDisk):
        z = complex(x)
        d = space.distance(0j, z)
        sup = 0.0
        zetas = [cmath.exp(2j * math.pi * k / grid) for k in range(grid)]
        if abs(z) > 0:
            zetas.append(-z / abs(z))
        for zeta in zetas:
            sup = max(sup, abs(DiskBusemann(zeta).evaluate(z)))
        gap = abs(sup - d)
        return RecoveryReport(d, sup, gap, gap <= tol)
    raise UnsupportedError(f"no closed-form boundary family for {type(space).__name__}")


@dataclass
class LimitConvergenceReport:
    """Per-witness deviations from the closed-form target, plus the first
    index from which every later deviation stays within tolerance."""

    deviations: list[float]
    threshold: Optional[int]
    tol: float

    def as_dict(self) -> dict:
        return {
            "deviations": [float(v) for v in self.deviations],
            "threshold": self.threshold,
            "tol": self.tol,
        }


def lp_limit_convergence_check(
    target,
    test_vectors: Sequence,
    *,
    k_range: int = 32,
    tol: float = 1e-6,
    witness_scale: Callable[[int], float] = lambda k: 2.0 * k * k,
) -> LimitConvergenceReport:
    """Evaluate the defining witness sequence of a closed-form l^p
    functional against the functional itself.

    Witnesses anchor at fresh coordinates beyond the support of all test
    vectors: LpZC uses z + (c^p - ||z||_p^p)^(1/p) e_j; Linear(v) uses
    a_k v-hat + b_k e_j with (a_k, b_k) = s(k) (||v||, sqrt(1 - ||v||^2));
    Zero uses s(k) e_j.  Deviations are max over the test vectors.
    """
    xs = [_vec(x) for x in test_vectors]
    if not xs:
        raise PreconditionError("need at least one test vector")
    support = max(x.size for x in xs)
    devs: list[float] = []
    if isinstance(target, LpZC):
        support = max(support, target.z.size)
        t = (target.c**target.p - target.znorm**target.p) ** (1.0 / target.p)
        for k in range(1, k_range + 1):
            j = support + k - 1
            anchor = np.zeros(j + 1)
            anchor[: target.z.size] = target.z
            anchor[j] += t
            dev = 0.0
            for x in xs:
                xv, av = _pad_pair(x, anchor)
                h = lp_norm(xv - av, target.p) - lp_norm(av, target.p)
                dev = max(dev, abs(h - target.evaluate(x)))
            devs.append(dev)
    elif isinstance(target, Linear):
        support = max(support, target.v.size)
        vnorm = float(np.linalg.norm(target.v))
        vhat = target.v / vnorm if vnorm > 0 else target.v
        for k in range(1, k_range + 1):
            j = support + k - 1
            s = witness_scale(k)
            anchor = np.zeros(j + 1)
            anchor[: vhat.size] = s * vnorm * vhat
            anchor[j] = s * math.sqrt(max(0.0, 1.0 - vnorm**2))
            dev = 0.0
            for x in xs:
                xv, av = _pad_pair(x, anchor)
                h = float(np.linalg.norm(xv - av) - np.linalg.norm(av))
                dev = max(dev, abs(h - target.evaluate(x)))
            devs.append(dev)
    elif isinstance(target, Zero):
        for k in range(1, k_range + 1):
            j = support + k - 1
            s = witness_scale(k)
            anchor = np.zeros(j + 1)
            anchor[j] = s
            dev = 0.0
            for x in xs:
                xv, av = _pad_pair(x, anchor)
                h = float(np.linalg.norm(xv - av) - s)
                dev = max(dev, abs(h))
            devs.append(dev)
    else:
        raise UnsupportedError(f"no witness construction for {type(target).__name__}")
    threshold = None
    for k in range(len(devs), 0, -1):
        if devs[k - 1] <= tol:
            threshold = k
        else:
            break
    return LimitConvergenceReport(devs, threshold, tol)
