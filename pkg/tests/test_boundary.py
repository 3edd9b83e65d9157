from fractions import Fraction

import pytest

from horokit.boundary import (
    DriftMeasure,
    ZFunctional,
    act_on_restriction,
    drift_audit,
    drift_homomorphism,
    limit_restrictions,
    reduced_classify_z,
    reduced_fixed_point_audit,
    restriction_table,
    sphere_restrictions,
    unboundedness_check,
)
from horokit.dynamics import MoebiusMap, group_translation, half_plane_translation
from horokit.errors import (
    InvalidParameterError,
    PreconditionError,
    UnsupportedError,
)
from horokit.functionals import HalfPlaneBusemannInfinity, ZdLinear
from horokit.groups import (
    CayleyGraphSpace,
    FreeGroup,
    GeneratingSet,
    Heisenberg,
    Zd,
    cayley_ball,
)
from horokit.spaces import PoincareDisk, UpperHalfPlane

from oracles import free_end_restrictions, l1_restrictions

Z1 = Zd(1)
Z1_GENS = GeneratingSet.standard(Z1)


def test_z_sphere_restrictions_two_patterns():
    ball = cayley_ball(Z1, Z1_GENS, 6)
    out = sphere_restrictions(ball, 1, 5)
    assert [bf.values for bf in out] == [(0, -1, 1), (0, 1, -1)]


def test_f2_first_letter_patterns():
    f2 = FreeGroup(2)
    gens = GeneratingSet.standard(f2)
    ball = cayley_ball(f2, gens, 4)
    out = sphere_restrictions(ball, 1, 3)
    assert len(out) == 4  # one pattern per first letter of g


def test_z2_restrictions_match_l1_oracle():
    z2 = Zd(2)
    gens = GeneratingSet.standard(z2)
    ball = cayley_ball(z2, gens, 5)
    out = sphere_restrictions(ball, 1, 4)
    assert sorted(bf.values for bf in out) == l1_restrictions(2, 1, 4)
    assert len(out) == 8


def test_sphere_restriction_values_in_range_and_lipschitz():
    h3 = Heisenberg()
    gens = GeneratingSet.standard(h3)
    ball = cayley_ball(h3, gens, 6)
    for bf in sphere_restrictions(ball, 2, 4):
        assert all(-2 <= v <= 2 for v in bf.values)
        assert bf.values[0] == 0  # identity first in canonical order


def test_sphere_restrictions_preconditions():
    ball = cayley_ball(Z1, Z1_GENS, 4)
    with pytest.raises(PreconditionError):
        sphere_restrictions(ball, 3, 2)  # R < r
    h3 = Heisenberg()
    hball = cayley_ball(h3, GeneratingSet.standard(h3), 4)
    with pytest.raises(PreconditionError):
        sphere_restrictions(hball, 2, 3)  # needs radius >= 5 without closed form


def test_limit_restrictions_z():
    lrs = limit_restrictions(Z1, Z1_GENS, 2, 20, 5)
    assert len(lrs.functionals) == 2
    assert lrs.certificate.kind == "stabilized"
    assert unboundedness_check(lrs).passed


def test_limit_restrictions_f2_matches_tree_end_oracle():
    f2 = FreeGroup(2)
    lrs = limit_restrictions(f2, GeneratingSet.standard(f2), 2, 8, 3)
    assert len(lrs.functionals) == 12
    assert lrs.certificate.kind == "stabilized"
    assert sorted(bf.values for bf in lrs.functionals) == free_end_restrictions(2, 2)
    # each functional attains -2 at exactly one sphere point
    for bf in lrs.functionals:
        assert sum(1 for v in bf.values if v == -2) == 1


def test_limit_restrictions_window_invariance_zd():
    # same accepted set for any window >= 3 at radius 4r + 8
    for family, r in ((Zd(1), 3), (Zd(2), 2), (Zd(3), 1)):
        gens = GeneratingSet.standard(family)
        r_max = 4 * r + 8
        sets = []
        for window in (3, 4, 5):
            lrs = limit_restrictions(family, gens, r, r_max, window)
            assert lrs.certificate.kind == "stabilized"
            sets.append(frozenset(bf.values for bf in lrs.functionals))
        assert sets[0] == sets[1] == sets[2]


def test_limit_restrictions_window_invariance_free():
    # Free-group restriction sets are literally constant in the sphere
    # radius, which forces stabilization at every feasible r_max (the
    # 4r + 8 scaling would need a sphere of ~3^(4r+7) words).
    f2 = FreeGroup(2)
    gens = GeneratingSet.standard(f2)
    for r in (1, 2):
        ball = cayley_ball(f2, gens, r + 6)
        tables = [
            frozenset(bf.values for bf in sphere_restrictions(ball, r, R))
            for R in range(r, r + 7)
        ]
        assert all(t == tables[0] for t in tables)
        sets = []
        for window in (3, 4):
            lrs = limit_restrictions(f2, gens, r, r + window + 2, window)
            assert lrs.certificate.kind == "stabilized"
            sets.append(frozenset(bf.values for bf in lrs.functionals))
        assert sets[0] == sets[1] == tables[0]


@pytest.mark.parametrize(
    "family", [Zd(1), Zd(2), Zd(3), FreeGroup(2), Heisenberg()], ids=lambda f: f.name
)
def test_at_least_two_limit_restrictions(family):
    gens = GeneratingSet.standard(family)
    lrs = limit_restrictions(family, gens, 1, 8, 3)
    assert len(lrs.functionals) >= 2
    assert unboundedness_check(lrs).passed


def test_limit_restrictions_precondition():
    with pytest.raises(PreconditionError):
        limit_restrictions(Z1, Z1_GENS, 3, 5, 3)  # r_max <= r + window


def test_restriction_table_keys():
    table = restriction_table(Z1, Z1_GENS, 1, [2, 3, 4])
    assert table.radii() == [2, 3, 4]
    assert all(len(table.by_radius[r]) == 2 for r in (2, 3, 4))


def test_unboundedness_violation_detected():
    lrs = limit_restrictions(Z1, Z1_GENS, 2, 16, 4)
    from horokit.functionals import BallFunctional

    fake = BallFunctional(2, lrs.functionals[0].labels, (0, 1, -1, 1, 1), lrs.functionals[0].points)
    import dataclasses

    broken = dataclasses.replace(lrs, functionals=(fake,))
    rep = unboundedness_check(broken)
    assert not rep.passed
    assert rep.violating is fake


def test_translation_action_on_restrictions():
    # Translating the +end restriction of Z by a generator leaves it fixed.
    ball = cayley_ball(Z1, Z1_GENS, 8)
    big = sphere_restrictions(ball, 4, 8)
    minus_id = next(bf for bf in big if bf.value_at((1,)) == -1)
    acted = act_on_restriction(ball, (1,), minus_id, 3)
    assert acted.values == tuple(minus_id.value_at(p) for p in acted.points)


def test_action_requires_room():
    ball = cayley_ball(Z1, Z1_GENS, 8)
    small = sphere_restrictions(ball, 2, 6)[0]
    with pytest.raises(PreconditionError):
        act_on_restriction(ball, (1,), small, 2)


# ---------------------------------------------------------------------------
# Drift measures
# ---------------------------------------------------------------------------


def test_drift_uniform_on_ends_is_zero():
    space = CayleyGraphSpace(Z1)
    m = DriftMeasure.create(
        space, [(ZdLinear([1]), Fraction(1, 2)), (ZdLinear([-1]), Fraction(1, 2))]
    )
    assert all(drift_homomorphism(m, (n,)) == 0 for n in range(-10, 11))
    assert drift_audit(m, [(n,) for n in range(-10, 11)]).passed


def test_drift_point_mass_minus_id():
    space = CayleyGraphSpace(Z1)
    m = DriftMeasure.create(space, [(ZdLinear([1]), Fraction(1))])
    assert drift_homomorphism(m, (7,)) == -7
    rep = drift_audit(m, [(n,) for n in range(-10, 11)])
    assert rep.passed
    assert rep.additive_pairs == 21 * 21


def test_drift_z2_coordinate():
    space = CayleyGraphSpace(Zd(2))
    m = DriftMeasure.create(space, [(ZdLinear([1, 0]), Fraction(1))])
    assert drift_homomorphism(m, (3, -4)) == -3
    els = [(a, b) for a in range(-3, 4) for b in range(-3, 4)]
    assert drift_audit(m, els).passed


def test_drift_measure_validation():
    space = CayleyGraphSpace(Z1)
    with pytest.raises(InvalidParameterError):
        DriftMeasure.create(space, [(ZdLinear([1]), Fraction(1, 2))])  # mass 1/2
    with pytest.raises(InvalidParameterError):
        DriftMeasure.create(space, [(ZdLinear([1]), Fraction(-1)), (ZdLinear([-1]), Fraction(2))])
    with pytest.raises(UnsupportedError):
        DriftMeasure.create(space, [(lambda x: 0, Fraction(1))])


# ---------------------------------------------------------------------------
# Reduced compactification
# ---------------------------------------------------------------------------


def test_reduced_classify_three_classes():
    fs = [ZFunctional.point(n) for n in (-10, 0, 5, 10)]
    fs += [ZFunctional.plus_end(), ZFunctional.minus_end()]
    classes = reduced_classify_z(fs)
    assert len(classes) == 3
    sizes = sorted(len(c) for c in classes)
    assert sizes == [1, 1, 4]


def test_reduced_classify_duplicates_one_class():
    assert len(reduced_classify_z([ZFunctional.point(3), ZFunctional.point(3)])) == 1


def test_reduced_classify_two_ends():
    assert len(reduced_classify_z([ZFunctional.plus_end(), ZFunctional.minus_end()])) == 2


def test_reduced_classify_rejects_unknown():
    with pytest.raises(UnsupportedError):
        reduced_classify_z([ZFunctional("bogus")])


def test_z_functional_closed_forms():
    assert ZFunctional.point(5).evaluate(3) == -3
    assert ZFunctional.plus_end().evaluate(4) == -4
    assert ZFunctional.minus_end().evaluate(4) == 4


# ---------------------------------------------------------------------------
# Reduced fixed point audits
# ---------------------------------------------------------------------------


def test_fixed_point_audit_z_shift():
    space = CayleyGraphSpace(Z1)
    g = group_translation(space, (1,))
    rep = reduced_fixed_point_audit(g, ZdLinear([1]), [(k,) for k in range(-20, 21)])
    assert rep.passed
    assert rep.bound == 1
    assert rep.worst == 1  # |h(x-1) - h(x)| = 1 exactly


def test_fixed_point_audit_disk_rotation():
    disk = PoincareDisk()
    rot = MoebiusMap(Fraction(3, 5), Fraction(-4, 5), Fraction(4, 5), Fraction(3, 5))
    g = rot.as_selfmap(disk)
    h = lambda y: disk.distance(y, 0j)  # orbit of 0 is {0}; h is its point functional
    import random

    rep = reduced_fixed_point_audit(g, h, disk.sample_points(random.Random(1), 48), tol=1e-12)
    assert rep.passed
    assert rep.bound < 1e-12  # rotation fixes the base point


def test_fixed_point_audit_parabolic_exact_invariance():
    hp = UpperHalfPlane()
    g = half_plane_translation(1.0).as_selfmap(hp)
    h = HalfPlaneBusemannInfinity()
    import random

    rep = reduced_fixed_point_audit(g, h, hp.sample_points(random.Random(2), 48), tol=1e-12)
    assert rep.passed
    assert rep.worst == 0  # Im is translation-invariant
