import json
from fractions import Fraction

import numpy as np
import pytest

from horokit.errors import InvalidParameterError
from horokit.groups import CayleyGraphSpace, FreeGroup, GeneratingSet, Zd, cayley_ball
from horokit.metric import FiniteMetricSpace
from horokit.serialize import (
    ball_to_json,
    emit_json,
    point_from_json,
    point_to_json,
    scalar_from_json,
    scalar_to_json,
    space_from_descriptor,
)
from horokit.spaces import LpSpace, PoincareDisk, SpokeRaySpace, StarTreeSpace


def test_scalar_round_trip():
    assert scalar_to_json(Fraction(7, 2)) == "7/2"
    assert scalar_to_json(Fraction(3)) == "3"
    assert scalar_from_json("7/2") == Fraction(7, 2)
    assert scalar_from_json("3") == 3
    assert scalar_to_json(0.25) == 0.25


def test_space_descriptors():
    fin = space_from_descriptor(
        {"type": "finite", "params": {"matrix": [["0", "1/2"], ["1/2", "0"]]}, "base": 1}
    )
    assert isinstance(fin, FiniteMetricSpace)
    assert fin.base_point == 1
    assert fin.distance(0, 1) == Fraction(1, 2)
    assert isinstance(space_from_descriptor({"type": "zd", "params": {"dim": 3}}), CayleyGraphSpace)
    assert isinstance(space_from_descriptor({"type": "spoke_ray"}), SpokeRaySpace)
    assert isinstance(space_from_descriptor({"type": "poincare_disk"}), PoincareDisk)
    lp = space_from_descriptor({"type": "lp", "params": {"p": 3, "dim": 4}})
    assert isinstance(lp, LpSpace) and lp.p == 3.0
    with pytest.raises(InvalidParameterError):
        space_from_descriptor({"type": "banach"})
    with pytest.raises(InvalidParameterError):
        space_from_descriptor([1, 2])


def test_point_round_trips():
    sr = SpokeRaySpace()
    for p in (sr.base_point, sr.ray_point(Fraction(7, 2)), sr.spoke_head(3), sr.spoke_interior(4, 1)):
        assert point_from_json(sr, point_to_json(sr, p)) == p
    st = StarTreeSpace()
    for p in (st.base_point, st.interval_point(5, Fraction(9, 2))):
        assert point_from_json(st, point_to_json(st, p)) == p
    z2 = CayleyGraphSpace(Zd(2))
    assert point_from_json(z2, point_to_json(z2, (3, -4))) == (3, -4)
    f2 = CayleyGraphSpace(FreeGroup(2))
    w = f2.family.word("abA")
    assert point_from_json(f2, point_to_json(f2, w)) == w
    disk = PoincareDisk()
    assert point_from_json(disk, point_to_json(disk, 0.3 + 0.2j)) == 0.3 + 0.2j


def test_spoke_ray_tagged_form():
    sr = SpokeRaySpace()
    assert point_to_json(sr, sr.ray_point(Fraction(7, 2))) == {"kind": "ray", "t": "7/2"}


def test_ball_json_schema():
    z1 = Zd(1)
    ball = cayley_ball(z1, GeneratingSet.standard(z1), 2)
    data = ball_to_json(ball)
    assert data["radius"] == 2
    assert data["elements"][0] == "(0)"
    assert len(data["lengths"]) == 5
    assert all(len(e) == 3 for e in data["edges"])


def test_emit_json_deterministic_and_typed():
    payload = {
        "b": Fraction(1, 3),
        "a": np.float64(0.5),
        "c": np.array([1.0, 2.0]),
        "d": 1 + 2j,
    }
    one = emit_json(payload)
    two = emit_json(payload)
    assert one == two
    data = json.loads(one)
    assert data["b"] == "1/3"
    assert data["c"] == [1.0, 2.0]
    assert data["d"] == [1.0, 2.0]
    assert list(data) == sorted(data)


def test_model_functional_round_trip():
    from horokit.functionals import DiskBusemann, Linear, LpZC, ZdLinear, Zero
    from horokit.serialize import functional_from_json, functional_to_json

    for f in (LpZC([1.0, 2.0], 4.0, 2.0), Linear([0.6, 0.8]), Zero(), DiskBusemann(1j), ZdLinear([1, -1])):
        data = functional_to_json(f)
        g = functional_from_json(json.loads(emit_json(data)))
        assert type(g) is type(f)
        assert functional_to_json(g) == data


def test_partial_functional_round_trip():
    from horokit.extension import PartialFunctional
    from horokit.serialize import partial_functional_from_json, partial_functional_to_json

    space = FiniteMetricSpace([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    pf = PartialFunctional(space, [0, 1], [Fraction(0), Fraction(1, 2)])
    data = partial_functional_to_json(pf)
    assert data == {"domain": [0, 1], "values": ["0", "1/2"]}
    back = partial_functional_from_json(space, data)
    assert back.points == pf.points and back.values == pf.values
