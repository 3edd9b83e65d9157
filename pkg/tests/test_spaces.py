import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horokit.dynamics import MoebiusMap
from horokit.errors import InvalidDistortionError, InvalidPointError
from horokit.metric import validate_metric
from horokit.spaces import (
    DISTORTIONS,
    DistortedLine,
    HUB,
    LpSpace,
    PoincareDisk,
    SpokeRaySpace,
    StarTreeSpace,
    UpperHalfPlane,
    cayley_to_disk,
    cayley_to_half_plane,
    distorted_line_validate,
    hyperbolic_distance,
    spoke_ray_distance,
    star_tree_distance,
    table_distortion,
)

from oracles import spoke_ray_graph_distance

SR = SpokeRaySpace()
ST = StarTreeSpace()


class TestSpokeRay:
    def test_head_to_head_is_two(self):
        assert SR.distance(SR.spoke_head(3), SR.spoke_head(7)) == 2

    def test_hub_to_head_is_one(self):
        assert SR.distance(HUB, SR.spoke_head(5)) == 1

    def test_own_spoke_beats_hub_past_attachment(self):
        # own spoke: (n - 1/2) + (t - n); hub route: 1 + t
        for n, t in [(3, 10), (1, 1), (5, Fraction(11, 2))]:
            assert SR.distance(SR.spoke_head(n), SR.ray_point(t)) == Fraction(t) - Fraction(1, 2)

    def test_hub_route_wins_before_attachment(self):
        assert SR.distance(SR.spoke_head(11), SR.ray_point(10)) == 11

    def test_hub_to_ray(self):
        assert SR.distance(HUB, SR.ray_point(Fraction(7, 2))) == Fraction(7, 2)

    def test_head_offset_invariant(self):
        # d(head(n), gamma(t)) - t = -1/2 exactly for every t >= n
        for n in (1, 2, 4, 9):
            for t in (n, n + 1, 3 * n, Fraction(4 * n + 1, 2)):
                assert SR.distance(SR.spoke_head(n), SR.ray_point(t)) - t == Fraction(-1, 2)

    def test_spoke_interior_positions(self):
        p = SR.spoke_interior(5, 2)
        assert SR.distance(p, SR.spoke_head(5)) == 2
        assert SR.distance(p, SR.ray_point(5)) == Fraction(5, 2)

    def test_interior_normalization(self):
        assert SR.spoke_interior(5, 0) == SR.spoke_head(5)
        assert SR.spoke_interior(5, Fraction(9, 2)) == SR.ray_point(5)
        assert SR.ray_point(0) == HUB

    def test_malformed_points_rejected(self):
        with pytest.raises(InvalidPointError):
            SR.ray_point(-1)
        with pytest.raises(InvalidPointError):
            SR.spoke_head(0)
        with pytest.raises(InvalidPointError):
            SR.spoke_interior(3, 10)
        with pytest.raises(InvalidPointError):
            SR.distance(("bogus",), HUB)

    def test_module_level_helper(self):
        assert spoke_ray_distance(SR.spoke_head(1), SR.spoke_head(2)) == 2

    def test_against_dijkstra_oracle(self):
        rng = random.Random(11)
        pts = [
            p
            for p in SR.sample_points(rng, 40)
            if (p[0] != "ray" or p[1] <= 14) and (p[0] not in ("head", "spoke") or p[1] <= 12)
        ][:14]
        for i in range(len(pts)):
            for j in range(i, len(pts)):
                assert SR.distance(pts[i], pts[j]) == spoke_ray_graph_distance(pts[i], pts[j])

    def test_metric_axioms_sampled(self):
        assert validate_metric(SR, max_triples=10_000).passed


class TestStarTree:
    def test_endpoint_distances(self):
        assert ST.distance(ST.endpoint(5), HUB) == 5
        assert ST.distance(ST.endpoint(5), ST.endpoint(3)) == 8
        assert star_tree_distance(ST.interval_point(5, 2), ST.interval_point(5, Fraction(9, 2))) == Fraction(5, 2)

    def test_pointwise_limit_identity(self):
        # d(x_n, y) - n = d(x0, y) exactly for y on a different branch
        for n in (2, 5, 9):
            for m in (1, 3, 7):
                if m == n:
                    continue
                y = ST.interval_point(m, Fraction(m, 2))
                assert ST.distance(ST.endpoint(n), y) - n == ST.distance(HUB, y)

    def test_position_out_of_range(self):
        with pytest.raises(InvalidPointError):
            ST.interval_point(3, 4)

    def test_metric_axioms_sampled(self):
        assert validate_metric(ST, max_triples=10_000).passed


class TestDistortedLine:
    def test_sqrt_profile_passes(self):
        assert distorted_line_validate(DISTORTIONS["sqrt"], range(1, 1001)).passed

    def test_log1p_profile_passes(self):
        assert distorted_line_validate(DISTORTIONS["log1p"], range(1, 1001)).passed

    def test_superadditive_profile_fails(self):
        rep = distorted_line_validate(lambda t: t * t, range(1, 100))
        assert not rep.passed
        assert rep.failure[0] == "ratio_increasing"

    def test_nonzero_at_zero_rejected(self):
        with pytest.raises(InvalidDistortionError):
            distorted_line_validate(lambda t: t + 1, range(1, 10))

    def test_table_distortion(self):
        d = table_distortion([1, 10, 100], [1, 3, 9])
        assert distorted_line_validate(d, [1, 5, 10, 50, 100]).passed

    def test_far_anchor_flattens(self):
        line = DistortedLine("sqrt")
        r, eps = 5.0, 1e-3
        x = 1e8
        assert max(
            line.dfun(x + r) - line.dfun(x), line.dfun(x) - line.dfun(x - r)
        ) <= eps

    def test_metric_axioms_sampled(self):
        assert validate_metric(DistortedLine("sqrt"), max_triples=5_000).passed
        assert validate_metric(DistortedLine("log1p"), max_triples=5_000).passed


class TestHyperbolic:
    def test_disk_radial_closed_form(self):
        disk = PoincareDisk()
        assert abs(disk.distance(0, 0.5) - math.log(3)) < 1e-12
        assert disk.distance(0.3 + 0.2j, 0.3 + 0.2j) == 0

    def test_half_plane_closed_form(self):
        hp = UpperHalfPlane()
        assert abs(hp.distance(1j, 1 + 1j) - math.acosh(1.5)) < 1e-12

    def test_domain_errors(self):
        with pytest.raises(InvalidPointError):
            PoincareDisk().distance(0, 1.0)
        with pytest.raises(InvalidPointError):
            UpperHalfPlane().distance(1j, 1 - 1j)
        with pytest.raises(Exception):
            hyperbolic_distance(LpSpace(2, 2), 0, 1)

    def test_cayley_transform_is_isometry(self):
        hp, disk = UpperHalfPlane(), PoincareDisk()
        rng = random.Random(5)
        pts = hp.sample_points(rng, 24)
        for i in range(0, 24, 2):
            z, w = pts[i], pts[i + 1]
            assert abs(
                hp.distance(z, w) - disk.distance(cayley_to_disk(z), cayley_to_disk(w))
            ) < 1e-10
            assert abs(cayley_to_half_plane(cayley_to_disk(z)) - z) < 1e-12

    def test_moebius_invariance(self):
        hp = UpperHalfPlane()
        maps = [MoebiusMap(1, 2, 0, 1), MoebiusMap(2, 0, 0, Fraction(1, 2)), MoebiusMap(1, 0, 1, 1)]
        rng = random.Random(9)
        pts = hp.sample_points(rng, 16)
        for m in maps:
            for i in range(0, 16, 2):
                z, w = pts[i], pts[i + 1]
                assert abs(
                    hp.distance(z, w)
                    - hp.distance(m.apply_half_plane(z), m.apply_half_plane(w))
                ) < 1e-12

    def test_metric_axioms_sampled(self):
        assert validate_metric(PoincareDisk(), max_triples=10_000, tol=1e-10).passed
        assert validate_metric(UpperHalfPlane(), max_triples=10_000, tol=1e-10).passed


class TestLp:
    @given(st.integers(1, 4), st.integers(0, 2))
    @settings(max_examples=20, deadline=None)
    def test_norm_axioms(self, pi, seed):
        p = [1.0, 1.5, 2.0, 3.0][pi - 1]
        space = LpSpace(p, 5)
        rng = random.Random(seed)
        x, y = space.sample_points(rng, 2)
        assert space.distance(x, y) <= space.norm(x) + space.norm(y) + 1e-9
        assert space.distance(x, y) == pytest.approx(space.distance(y, x))

    def test_coordinate_zeroing_monotone(self):
        space = LpSpace(3, 4)
        x = [1.0, -2.0, 0.5, 3.0]
        for i in range(4):
            y = list(x)
            y[i] = 0.0
            assert space.norm(y) <= space.norm(x)

    def test_padding(self):
        space = LpSpace(2, 3)
        assert space.distance([1.0], [0.0, 0.0, 1.0]) == pytest.approx(math.sqrt(2))
