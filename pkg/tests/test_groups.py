import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from horokit.errors import InvalidParameterError, ResourceLimitError
from horokit.groups import (
    CayleyGraphSpace,
    FiniteGroup,
    FreeGroup,
    GeneratingSet,
    Heisenberg,
    WordLengthOracle,
    Zd,
    cayley_ball,
    cyclic_group,
    word_length,
)

from oracles import (
    bfs_ball,
    free_reduce,
    free_sphere_count,
    heis_matmul,
    heis_matrix,
    heis_triple,
    zd_sphere_count,
)

# Frozen from the independent matrix-BFS oracle (see test below).
HEISENBERG_CENTRAL_LENGTHS = [0, 4, 6, 8, 8, 10, 10, 12, 12, 12, 14, 14, 14, 16, 16, 16, 16]


def test_zd_multiply():
    z2 = Zd(2)
    assert z2.multiply((3, 4), (-1, 2)) == (2, 6)


def test_free_reduction():
    f2 = FreeGroup(2)
    ab = f2.word("ab")
    Ba = f2.word("Ba")
    assert f2.multiply(ab, Ba) == f2.word("aa")


def test_heisenberg_commutator_is_central():
    h = Heisenberg()
    x, y = (1, 0, 0), (0, 1, 0)
    comm = h.multiply(h.multiply(x, y), h.multiply(h.inverse(x), h.inverse(y)))
    assert comm == h.central(1)
    # against the defining representation
    mx, my = heis_matrix(1, 0, 0), heis_matrix(0, 1, 0)
    minv = heis_matrix(-1, 0, 0)
    myinv = heis_matrix(0, -1, 0)
    oracle = heis_triple(heis_matmul(heis_matmul(mx, my), heis_matmul(minv, myinv)))
    assert comm == oracle


@given(
    st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)),
    st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)),
)
def test_heisenberg_matches_matrix_representation(g, h):
    fam = Heisenberg()
    assert fam.multiply(g, h) == heis_triple(heis_matmul(heis_matrix(*g), heis_matrix(*h)))
    assert fam.multiply(g, fam.inverse(g)) == (0, 0, 0)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12),
       st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12))
def test_free_multiplication_is_reduction(wa, wb):
    f2 = FreeGroup(2)
    a = free_reduce(tuple(wa))
    b = free_reduce(tuple(wb))
    assert f2.multiply(a, b) == free_reduce(a + b)
    assert f2.multiply(a, f2.inverse(a)) == ()


def test_family_mismatch_raises_type_error():
    with pytest.raises(TypeError):
        Zd(2).multiply((1, 0), (1,))
    with pytest.raises(TypeError):
        FreeGroup(2).multiply((3,), ())


def test_generating_set_rejects_identity():
    z = Zd(1)
    with pytest.raises(InvalidParameterError):
        GeneratingSet.create(z, [(0,), (1,)])


def test_generating_set_closes_inverses():
    z = Zd(1)
    gens = GeneratingSet.create(z, [(1,)])
    assert gens.elements == ((-1,), (1,))


def test_cayley_ball_sphere_sizes():
    z1 = Zd(1)
    assert cayley_ball(z1, GeneratingSet.standard(z1), 3).sphere_sizes() == [1, 2, 2, 2]
    f2 = FreeGroup(2)
    assert cayley_ball(f2, GeneratingSet.standard(f2), 2).sphere_sizes() == [1, 4, 12]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_zd_sphere_sizes_match_closed_form(d):
    fam = Zd(d)
    ball = cayley_ball(fam, GeneratingSet.standard(fam), 10)
    for r, size in enumerate(ball.sphere_sizes()):
        assert size == zd_sphere_count(d, r)


@pytest.mark.parametrize("rank", [2, 3])
def test_free_sphere_sizes_match_closed_form(rank):
    fam = FreeGroup(rank)
    ball = cayley_ball(fam, GeneratingSet.standard(fam), 8 if rank == 2 else 6)
    for r, size in enumerate(ball.sphere_sizes()):
        assert size == free_sphere_count(rank, r)


def test_heisenberg_sphere_sizes_regression():
    # frozen from the BFS oracle
    fam = Heisenberg()
    ball = cayley_ball(fam, GeneratingSet.standard(fam), 5)
    assert ball.sphere_sizes() == [1, 4, 12, 36, 82, 164]


def test_heisenberg_ball_matches_plain_bfs():
    fam = Heisenberg()
    ball = cayley_ball(fam, GeneratingSet.standard(fam), 5)
    oracle = bfs_ball(fam.identity(), fam.standard_generators(), fam._mul, 5)
    assert len(ball.elements) == len(oracle)
    for g, length in zip(ball.elements, ball.lengths):
        assert oracle[g] == length


def test_ball_edges_shift_length_by_at_most_one():
    fam = Heisenberg()
    ball = cayley_ball(fam, GeneratingSet.standard(fam), 4)
    for i, j, _ in ball.edges:
        assert abs(ball.lengths[i] - ball.lengths[j]) <= 1


def test_ball_resource_limit_reports_radius():
    f2 = FreeGroup(2)
    with pytest.raises(ResourceLimitError) as exc:
        cayley_ball(f2, GeneratingSet.standard(f2), 10, limit=50)
    assert exc.value.radius_reached is not None


def test_ball_deterministic():
    fam = Heisenberg()
    gens = GeneratingSet.standard(fam)
    assert cayley_ball(fam, gens, 4).elements == cayley_ball(fam, gens, 4).elements


def test_word_length_closed_forms():
    z2 = Zd(2)
    assert word_length(z2, GeneratingSet.standard(z2), (3, 4), 100) == 7
    f2 = FreeGroup(2)
    assert word_length(f2, GeneratingSet.standard(f2), f2.word("abA"), 100) == 3
    assert word_length(z2, GeneratingSet.standard(z2), (3, 4), 6) is None


def test_word_length_inverse_symmetric():
    fam = Heisenberg()
    gens = GeneratingSet.standard(fam)
    oracle = WordLengthOracle(fam, gens)
    rng = random.Random(1)
    for _ in range(20):
        g = (rng.randrange(-3, 4), rng.randrange(-3, 4), rng.randrange(-5, 6))
        n = oracle.length(g, 64)
        assert n == oracle.length(fam.inverse(g), 64)


def test_heisenberg_central_lengths_fixture():
    fam = Heisenberg()
    gens = GeneratingSet.standard(fam)
    oracle = WordLengthOracle(fam, gens)
    got = [oracle.length(fam.central(k), 64) for k in range(17)]
    assert got == HEISENBERG_CENTRAL_LENGTHS
    # sublinear: consistent with sqrt-type growth
    assert got[16] / 16 < got[1] / 1
    assert got[16] <= 4 * (16**0.5) + 4


def test_heisenberg_central_lengths_against_plain_bfs():
    fam = Heisenberg()
    # independent BFS in the matrix representation, radius 12
    gens_m = [heis_matrix(*g) for g in fam.standard_generators()]
    dist = bfs_ball(heis_matrix(0, 0, 0), gens_m, heis_matmul, 12)
    by_triple = {heis_triple(m): d for m, d in dist.items()}
    for k in range(7):
        assert by_triple[(0, 0, k)] == HEISENBERG_CENTRAL_LENGTHS[k]


def test_word_length_custom_generators():
    z1 = Zd(1)
    gens = GeneratingSet.create(z1, [(2,), (3,)])
    assert word_length(z1, gens, (1,), 10) == 2  # 3 - 2
    assert word_length(z1, gens, (7,), 10) == 3  # 2 + 2 + 3


def test_finite_group_lengths():
    c12 = cyclic_group(12)
    gens = GeneratingSet.standard(c12)
    assert word_length(c12, gens, 3, 100) == 3
    assert word_length(c12, gens, 11, 100) == 1
    with pytest.raises(InvalidParameterError):
        FiniteGroup([[0, 1], [1, 1]])  # not a permutation row


def test_cayley_graph_space_distance():
    space = CayleyGraphSpace(Zd(2))
    assert space.distance((0, 0), (3, 4)) == 7
    assert space.distance((1, 1), (1, 1)) == 0
    assert space.neighbors((0, 0)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
