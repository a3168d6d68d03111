import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import irregular_graph
from oracles import equivalent, firing_vector, rank_by_distance, winnable
from rrweights import (
    GraphError,
    Multigraph,
    Window,
    bn_rank,
    canonical_divisor,
    check_riemann_roch,
    genus,
    is_equivalent,
    is_winnable,
    laplacian,
    pic_representatives,
    q_reduce,
    rank_function,
    to_a_rep,
)
from rrweights.graphs import is_reduced
from rrweights.riemann import is_periodic, is_slowly_growing

SMALL = [Multigraph.complete(3), Multigraph.complete(4), Multigraph.dipole(3), irregular_graph()]


def divisors(n, lo=-4, hi=4):
    return st.lists(st.integers(lo, hi), min_size=n, max_size=n).map(tuple)


# -- construction ------------------------------------------------------------


def test_laplacian():
    assert laplacian(Multigraph.dipole(3)) == [[3, -3], [-3, 3]]
    assert laplacian(Multigraph.complete(3)) == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    for G in SMALL:
        L = laplacian(G)
        assert all(sum(row) == 0 for row in L)
        assert all(L[i][j] == L[j][i] for i in range(G.n) for j in range(G.n))


def test_dipole_image_is_multiples_of_r_minus_r():
    for r in (1, 2, 5):
        G = Multigraph.dipole(r)
        for d in itertools.product(range(-2 * r, 2 * r + 1), repeat=2):
            if sum(d) == 0:
                assert is_equivalent(G, d, (0, 0)) == (d[0] % r == 0)


def test_canonical_divisor_and_genus():
    assert canonical_divisor(Multigraph.complete(3)) == (0, 0, 0)
    assert canonical_divisor(Multigraph.complete(4)) == (1, 1, 1, 1)
    assert canonical_divisor(Multigraph.dipole(3)) == (1, 1)
    assert genus(Multigraph.complete(3)) == 1
    for n in range(2, 8):
        assert genus(Multigraph.complete(n)) == (n - 1) * (n - 2) // 2
    assert genus(Multigraph.dipole(1)) == 0
    G = irregular_graph()
    assert G.degrees == (4, 3, 5, 4) and G.num_edges == 8 and genus(G) == 5
    assert canonical_divisor(G) == (2, 1, 3, 2)


def test_parse_edge_list():
    text = "# irregular\nn 4\n1 2 2\n2 3 1\n\n3 4 3\n4 1 1\n1 3 1\n"
    assert Multigraph.parse(text).mult == irregular_graph().mult


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("n 3\n1 2 1\n", "disconnected"),
        ("n 2\n1 1 1\n", "self-loop at vertex 1"),
        ("n 2\n1 3 1\n", "edge 1-3"),
        ("1 2 1\n", "expected 'n <count>'"),
        ("n 2\n1 2\n", "expected 'u v m'"),
        ("n 2\n1 2 0\n", "multiplicity 0"),
    ],
)
def test_parse_rejects_bad_graphs(text, fragment):
    with pytest.raises(GraphError, match=fragment):
        Multigraph.parse(text)


def test_matrix_validation():
    with pytest.raises(GraphError, match="asymmetric"):
        Multigraph(((0, 1), (2, 0)))
    with pytest.raises(GraphError, match="self-loop"):
        Multigraph(((1, 1), (1, 0)))


# -- reduction ---------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_q_reduce_is_equivalent_reduced_and_idempotent(G, data):
    d = data.draw(divisors(G.n, -6, 6))
    rho = q_reduce(G, d)
    assert firing_vector(G.mult, d, rho) is not None
    assert is_reduced(G, rho)
    assert q_reduce(G, rho) == rho


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_q_reduce_respects_addition(G, data):
    d1 = data.draw(divisors(G.n))
    d2 = data.draw(divisors(G.n))
    s = tuple(x + y for x, y in zip(d1, d2))
    both = tuple(x + y for x, y in zip(q_reduce(G, d1), q_reduce(G, d2)))
    assert q_reduce(G, s) == q_reduce(G, both)


def test_k3_reduction_agrees_with_a_rep_partition():
    G = Multigraph.complete(3)
    rho = q_reduce(G, (1, -1, 0))
    assert rho[0] in (0, 1) and rho[1] in (0, 1)
    rng = random.Random(7)
    pts = [tuple(rng.randint(-5, 5) for _ in range(3)) for _ in range(100)]
    for d1, d2 in itertools.combinations(pts[:40], 2):
        assert (q_reduce(G, d1) == q_reduce(G, d2)) == (to_a_rep(3, d1) == to_a_rep(3, d2))
    for d in pts:
        assert equivalent(G.mult, d, to_a_rep(3, d))


def test_is_equivalent_examples():
    G = Multigraph.dipole(3)
    assert is_equivalent(G, (3, -3), (0, 0))
    assert not is_equivalent(G, (1, -1), (0, 0))
    assert is_equivalent(G, (2, 5), (2, 5))
    assert not is_equivalent(G, (1, 0), (0, 0))


def test_is_winnable_examples():
    G = Multigraph.complete(4)
    assert not is_winnable(G, (3, 3, 3, -10))
    assert is_winnable(G, (0, 2, 0, 1))
    assert not is_winnable(G, (1, 1, -1, 0))
    assert not winnable(G.mult, (1, 1, -1, 0))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL[:3]), st.data())
def test_winnability_matches_enumeration_oracle(G, data):
    d = data.draw(divisors(G.n, -3, 3))
    assert is_winnable(G, d) == winnable(G.mult, d)


# -- rank ----------------------------------------------------------------------


def test_bn_rank_examples():
    for G in SMALL:
        assert bn_rank(G, (0,) * G.n) == 0
    assert bn_rank(Multigraph.complete(4), (1, 1, 1, 1)) == 2
    # rank 0, so f = 1 + r = 1 = j + 1 with j = 0
    assert bn_rank(Multigraph.dipole(3), (2, 0)) == 0
    assert rank_by_distance(Multigraph.dipole(3).mult, (2, 0)) == 0
    assert bn_rank(Multigraph.complete(3), (0, 0, -1)) == -1


@pytest.mark.parametrize("G", SMALL[:3], ids=lambda G: G.name)
def test_bn_rank_matches_distance_definition(G):
    rng = random.Random(11)
    for _ in range(25):
        d = tuple(rng.randint(-2, 3) for _ in range(G.n))
        assert bn_rank(G, d) == rank_by_distance(G.mult, d), d


def test_rank_is_class_function_and_linear_above_threshold():
    for G in SMALL:
        g = genus(G)
        thr = 2 * G.num_edges - 2 * G.n
        rng = random.Random(G.n)
        for _ in range(30):
            d = [rng.randint(-3, 5) for _ in range(G.n)]
            row = laplacian(G)[rng.randrange(G.n)]
            moved = [x + y for x, y in zip(d, row)]
            assert bn_rank(G, d) == bn_rank(G, moved)
            assert bn_rank(G, d) >= sum(d) - g
            if sum(d) > thr:
                assert bn_rank(G, d) == sum(d) - g
        big = [0] * G.n
        big[0] = 4 * G.num_edges + 3
        slow = bn_rank(G, [4 * G.num_edges] + [0] * (G.n - 1))
        assert bn_rank(G, big) == sum(big) - g and slow == 4 * G.num_edges - g


def test_riemann_roch_examples():
    for G in SMALL + [Multigraph.dipole(5)]:
        assert bn_rank(G, (0,) * G.n) - bn_rank(G, canonical_divisor(G)) == 1 - genus(G)
    rng = random.Random(3)
    K4, D5 = Multigraph.complete(4), Multigraph.dipole(5)
    for _ in range(50):
        assert check_riemann_roch(K4, [rng.randint(-3, 3) for _ in range(4)])
        assert check_riemann_roch(D5, [rng.randint(-5, 8) for _ in range(2)])


def test_rank_slowly_growing_and_periodic():
    for G in SMALL:
        f = rank_function(G)
        assert is_slowly_growing(f, Window.box(G.n, -1, 3, max_degree=2 * G.num_edges))
    assert is_periodic(rank_function(Multigraph.complete(4)), 4, Window.box(4, -1, 2))


def test_maximal_decrease_passes_through_intermediates():
    for G in SMALL[:3]:
        rng = random.Random(5 + G.n)
        for _ in range(40):
            d = tuple(rng.randint(-1, 3) for _ in range(G.n))
            below = tuple(x - rng.randint(0, 2) for x in d)
            drop = sum(d) - sum(below)
            if bn_rank(G, d) - bn_rank(G, below) != drop:
                continue
            for mid in itertools.product(*(range(b, x + 1) for b, x in zip(below, d))):
                assert bn_rank(G, d) - bn_rank(G, mid) == sum(d) - sum(mid)


# -- Picard classes ----------------------------------------------------------


def test_pic_representatives_counts():
    assert len(pic_representatives(Multigraph.complete(3), 0)) == 3
    assert len(pic_representatives(Multigraph.complete(4), 0)) == 16
    assert len(pic_representatives(Multigraph.dipole(4), 0)) == 4
    for G in SMALL:
        sizes = {len(pic_representatives(G, i)) for i in range(-2, 2 * G.num_edges + 1)}
        assert len(sizes) == 1


def test_pic_representatives_are_distinct_classes():
    G = irregular_graph()
    reps = pic_representatives(G, 1)
    assert len(set(reps)) == len(reps)
    assert all(q_reduce(G, d) == d for d in reps)
    rng = random.Random(2)
    for _ in range(30):
        d = [rng.randint(-4, 4) for _ in range(3)]
        d.append(1 - sum(d))
        assert q_reduce(G, d) in reps
