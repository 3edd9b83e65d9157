"""Boundary restrictions of Cayley graphs and related invariants.

The restriction of h_g = d(., g) - d(e, g) to a finite ball B(r) is an
exact integer table.  As |g| grows, only finitely many such tables exist,
and the ones that recur are the ball restrictions of boundary functionals.
Acceptance over a trailing sphere-radius window, with an explicit
Stabilized/Heuristic certificate, is the computable surrogate for the
limit: no general bound on the stabilization radius exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    InvalidParameterError,
    PreconditionError,
    UnsupportedError,
)
from .functionals import BallFunctional, ZdLinear, eval_functional
from .groups import CayleyBall, GeneratingSet, GroupFamily, cayley_ball
from .metric import Scalar


def _has_closed_form(ball: CayleyBall) -> bool:
    return ball.gens.is_standard and ball.family.closed_form_length(
        ball.family.identity()
    ) is not None


def _ball_distance(ball: CayleyBall, x, g) -> int:
    """d(x, g) inside the ball: closed form if available, else table lookup."""
    fam = ball.family
    rel = fam._mul(fam._inv(x), g)
    if ball.gens.is_standard:
        n = fam.closed_form_length(rel)
        if n is not None:
            return n
    n = ball.length_of(rel)
    if n is None:
        raise PreconditionError(
            f"element {rel!r} falls outside the ball; increase the ball radius"
        )
    return n


def sphere_restrictions(ball: CayleyBall, r: int, R: int) -> list[BallFunctional]:
    """Deduplicated restrictions h_g|B(r) over all g with |g| = R.

    Requires R >= r and ball radius >= R + r so every value d(x, g) with
    x in B(r) is computable inside the ball.  Output is sorted by value
    tuple; every entry is validated exactly (vanishes at the identity,
    1-Lipschitz, values within [-r, r]).
    """
    if R < r:
        raise PreconditionError(f"sphere radius {R} must be >= ball radius {r}")
    # With a closed-form word length the values d(x, g) need no lookups, so
    # the ball only has to contain the sphere S(R) itself.
    needed = R if _has_closed_form(ball) else R + r
    if ball.radius < needed:
        raise PreconditionError(
            f"ball radius {ball.radius} is insufficient; need >= {needed}"
        )
    fam = ball.family
    points = ball.ball(r)
    labels = tuple(fam.element_label(p) for p in points)
    inverses = [fam._inv(x) for x in points]
    if _has_closed_form(ball):
        dist_rel = fam.closed_form_length
    else:
        table = ball.index
        lengths = ball.lengths

        def dist_rel(rel):
            i = table.get(rel)
            if i is None:
                raise PreconditionError("element falls outside the ball")
            return lengths[i]

    def dist(p, q):
        return dist_rel(fam._mul(fam._inv(p), q))

    seen: dict[tuple, None] = {}
    mul = fam._mul
    base = R
    for g in ball.sphere(R):
        values = tuple(dist_rel(mul(xi, g)) - base for xi in inverses)
        seen.setdefault(values, None)
    out = []
    for values in sorted(seen):
        bf = BallFunctional.build(r, points, values, dist, labels)
        if max(abs(v) for v in bf.values) > r:
            raise InvalidParameterError("restriction value outside [-r, r]")
        out.append(bf)
    return out


@dataclass(frozen=True)
class RestrictionTable:
    """Restrictions h_g|B(r) per sphere radius R, deduplicated."""

    r: int
    by_radius: dict

    def radii(self) -> list[int]:
        return sorted(self.by_radius)


def restriction_table(
    family: GroupFamily,
    gens: GeneratingSet,
    r: int,
    radii: Sequence[int],
    *,
    ball: CayleyBall | None = None,
    limit: int | None = None,
) -> RestrictionTable:
    radii = sorted(set(radii))
    if not radii:
        raise PreconditionError("need at least one sphere radius")
    if ball is None:
        probe = cayley_ball(family, gens, 0, limit=limit)
        pad = 0 if _has_closed_form(probe) else r
        ball = cayley_ball(family, gens, max(radii) + pad, limit=limit)
    return RestrictionTable(r, {R: tuple(sphere_restrictions(ball, r, R)) for R in radii})


@dataclass(frozen=True)
class Certificate:
    """Stabilized(window start, length) or Heuristic(max radius scanned)."""

    kind: str  # "stabilized" | "heuristic"
    window_start: int
    window_length: int
    r_max: int

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "window_start": self.window_start,
            "window_length": self.window_length,
            "r_max": self.r_max,
        }


@dataclass(frozen=True)
class LimitRestrictionSet:
    """Ball restrictions accepted as boundary restrictions at radius r."""

    r: int
    functionals: tuple[BallFunctional, ...]
    certificate: Certificate
    table: RestrictionTable

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "count": len(self.functionals),
            "certificate": self.certificate.as_dict(),
            "functionals": [bf.as_dict() for bf in self.functionals],
        }


def limit_restrictions(
    family: GroupFamily,
    gens: GeneratingSet,
    r: int,
    r_max: int,
    window: int,
    *,
    limit: int | None = None,
) -> LimitRestrictionSet:
    """Accept a restriction iff it appears at some sphere radius in the
    trailing window [r_max - window, r_max].

    The certificate is Stabilized when the accepted set is unchanged when
    r_max is replaced by any value in that window, Heuristic otherwise.
    """
    if window < 1:
        raise PreconditionError("window must be >= 1")
    if r_max <= r + window:
        raise PreconditionError("need r_max > r + window")
    probe = cayley_ball(family, gens, 0, limit=limit)
    pad = 0 if _has_closed_form(probe) else r
    ball = cayley_ball(family, gens, r_max + pad, limit=limit)
    lo_needed = max(r, r_max - 2 * window)
    table = restriction_table(
        family, gens, r, range(lo_needed, r_max + 1), ball=ball, limit=limit
    )

    def accepted(at_r_max: int) -> frozenset:
        lo = max(r, at_r_max - window)
        out = set()
        for R in range(lo, at_r_max + 1):
            out.update(table.by_radius[R])
        return frozenset(out)

    final = accepted(r_max)
    stabilized = all(accepted(R) == final for R in range(r_max - window, r_max + 1))
    cert = Certificate(
        "stabilized" if stabilized else "heuristic",
        r_max - window,
        window,
        r_max,
    )
    ordered = tuple(sorted(final, key=lambda bf: bf.values))
    return LimitRestrictionSet(r, ordered, cert, table)


@dataclass
class UnboundednessReport:
    passed: bool
    r: int
    violating: Optional[BallFunctional] = None

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "r": self.r,
            "violating": None if self.violating is None else self.violating.as_dict(),
        }


def unboundedness_check(lrs: LimitRestrictionSet) -> UnboundednessReport:
    """Every accepted restriction must attain -r somewhere on the sphere S(r):
    the testable trace of metric functionals being unbounded."""
    if not lrs.functionals:
        raise PreconditionError("accepted set is empty")
    for bf in lrs.functionals:
        if bf.min_value() != -lrs.r:
            return UnboundednessReport(False, lrs.r, bf)
    return UnboundednessReport(True, lrs.r)


def act_on_restriction(ball: CayleyBall, g, bf: BallFunctional, r: int) -> BallFunctional:
    """Translate a restriction by g: (g.h)(x) = h(g^-1 x) - h(g^-1 e).

    ``bf`` must be a restriction on a ball of radius >= r + |g| so that all
    shifted arguments stay inside its domain.
    """
    fam = ball.family
    ginv = fam.inverse(g)
    glen = _ball_distance(ball, fam.identity(), g)
    if bf.radius < r + glen:
        raise PreconditionError(
            f"restriction radius {bf.radius} too small; need >= r + |g| = {r + glen}"
        )
    offset = bf.value_at(ginv)
    points = ball.ball(r)
    labels = tuple(fam.element_label(p) for p in points)
    values = tuple(bf.value_at(fam.multiply(ginv, x)) - offset for x in points)
    return BallFunctional.build(
        r, points, values, lambda p, q: _ball_distance(ball, p, q), labels
    )


# ---------------------------------------------------------------------------
# Invariant measures on the boundary and the drift homomorphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DriftMeasure:
    """Finitely supported probability measure on closed-form boundary
    functionals, checked to be invariant under the group action."""

    space: "object"  # CayleyGraphSpace
    support: tuple[tuple[ZdLinear, Fraction], ...]

    @classmethod
    def create(cls, space, support: Iterable[tuple[ZdLinear, Scalar]]) -> "DriftMeasure":
        rows = []
        total = Fraction(0)
        for h, w in support:
            if not isinstance(h, ZdLinear):
                raise UnsupportedError(
                    "drift measures support closed-form lattice functionals only"
                )
            w = Fraction(w)
            if w < 0:
                raise InvalidParameterError("weights must be nonnegative")
            rows.append((h, w))
            total += w
        if total != 1:
            raise InvalidParameterError(f"weights sum to {total}, expected 1")
        measure = cls(space, tuple(rows))
        measure._check_invariance()
        return measure

    def _check_invariance(self) -> None:
        weights = {}
        for h, w in self.support:
            weights[h] = weights.get(h, Fraction(0)) + w
        for s in self.space.gens.elements:
            for h, w in weights.items():
                moved = h.translate(s)
                if weights.get(moved) != w:
                    raise InvalidParameterError(
                        f"measure is not invariant: generator {s!r} moves {h!r}"
                    )

    def integrate(self, g) -> Fraction:
        return sum((w * h.evaluate(g) for h, w in self.support), Fraction(0))


def drift_homomorphism(measure: DriftMeasure, g) -> Fraction:
    """T(g) = integral of h(g) over the invariant measure."""
    return measure.integrate(g)


@dataclass
class DriftAuditReport:
    passed: bool
    additive_pairs: int
    lipschitz_points: int
    failure: Optional[tuple] = None

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "additive_pairs": self.additive_pairs,
            "lipschitz_points": self.lipschitz_points,
            "failure": None if self.failure is None else [str(v) for v in self.failure],
        }


def drift_audit(measure: DriftMeasure, elements: Sequence) -> DriftAuditReport:
    """Exact additivity T(gh) = T(g) + T(h) over all pairs, and
    |T(g)| <= |g| for every audited element."""
    space = measure.space
    fam = space.family
    lip = 0
    for g in elements:
        if abs(measure.integrate(g)) > space.distance(space.base_point, g):
            return DriftAuditReport(False, 0, lip, ("lipschitz", g))
        lip += 1
    pairs = 0
    for g in elements:
        tg = measure.integrate(g)
        for h in elements:
            pairs += 1
            if measure.integrate(fam.multiply(g, h)) != tg + measure.integrate(h):
                return DriftAuditReport(False, pairs, lip, ("additivity", g, h))
    return DriftAuditReport(True, pairs, lip)


# ---------------------------------------------------------------------------
# Reduced compactification of Z
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZFunctional:
    """Closed-form functional on Z: a point functional h_n, or one of the
    two ends (h(x) = -x toward +infinity, h(x) = +x toward -infinity)."""

    kind: str  # "point" | "plus_end" | "minus_end"
    anchor: int = 0

    @classmethod
    def point(cls, n: int) -> "ZFunctional":
        return cls("point", int(n))

    @classmethod
    def plus_end(cls) -> "ZFunctional":
        # limit of h_n as n -> +infinity: x |-> -x
        return cls("plus_end")

    @classmethod
    def minus_end(cls) -> "ZFunctional":
        return cls("minus_end")

    def evaluate(self, x: int) -> int:
        if self.kind == "point":
            return abs(x - self.anchor) - abs(self.anchor)
        if self.kind == "plus_end":
            return -x
        return x

    def label(self) -> str:
        if self.kind == "point":
            return f"h_{self.anchor}"
        return "+end" if self.kind == "plus_end" else "-end"


def reduced_classify_z(functionals: Sequence[ZFunctional]) -> list[list[ZFunctional]]:
    """Partition by bounded difference, using the closed forms.

    sup |h_n - h_m| = 2|n - m| is finite, while a point functional differs
    from either end by an unbounded function, and the two ends differ by
    2|x|; so the classes are: all point functionals, the +end, the -end.
    """
    for f in functionals:
        if not isinstance(f, ZFunctional) or f.kind not in ("point", "plus_end", "minus_end"):
            raise UnsupportedError(f"unsupported functional {f!r} for exact classification")
    classes: dict[str, list[ZFunctional]] = {}
    for f in functionals:
        key = "finite" if f.kind == "point" else f.kind
        classes.setdefault(key, []).append(f)
    return [classes[k] for k in sorted(classes)]


@dataclass
class FixedPointAuditReport:
    passed: bool
    bound: Scalar
    worst: Scalar
    checked: int
    violating: Optional[object] = None

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "bound": float(self.bound),
            "worst": float(self.worst),
            "checked": self.checked,
            "violating": None if self.violating is None else str(self.violating),
        }


def reduced_fixed_point_audit(
    isometry,
    h,
    samples: Sequence,
    *,
    tol: Scalar = 0,
) -> FixedPointAuditReport:
    """Check |h(g^-1 x) - h(x)| <= d(g^-1 x0, x0) + tol over the samples.

    This is the two-sided bound showing an orbit-limit functional moves by
    a bounded amount under the isometry, i.e. its reduced class is fixed.
    ``isometry`` must expose ``space``, ``apply`` and ``apply_inverse``.
    """
    space = isometry.space
    x0 = space.base_point
    bound = space.distance(isometry.apply_inverse(x0), x0)
    worst = 0
    for x in samples:
        gap = abs(eval_functional(h, isometry.apply_inverse(x)) - eval_functional(h, x))
        if gap > worst:
            worst = gap
        if gap > bound + tol:
            return FixedPointAuditReport(False, bound, worst, len(samples), x)
    return FixedPointAuditReport(True, bound, worst, len(samples))
