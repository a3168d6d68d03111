import random
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import equivalent
from rrweights import (
    BCoord,
    Multigraph,
    Window,
    bn_rank,
    double_diff_indicator,
    from_b_coord,
    kn_rank,
    kn_rank_loop,
    kn_weight,
    mobius_at,
    pic_add,
    pic_sub,
    q_reduce,
    rank_drop_indicator,
    to_a_rep,
    to_b_coord,
    weight_collapse,
)
from rrweights.complete import _rank_bucketed_py, bucket_terms
from rrweights.lattice import DimensionError
from rrweights.lattice import WeightTable
from rrweights.riemann import find_self_duality


def kn(n):
    return Multigraph.complete(n)


# -- coordinates -------------------------------------------------------------


def test_a_rep_examples():
    assert to_a_rep(4, (5, -2, 3, 0)) == (2, 3, 0, 1)
    assert equivalent(kn(4).mult, (5, -2, 3, 0), (2, 3, 0, 1))
    # a_1 = (1 - (-1)) mod 3 = 2; the class is not that of (1, 0, -1)
    assert to_a_rep(3, (1, -1, 0)) == (2, 0, -2)
    assert equivalent(kn(3).mult, (1, -1, 0), (2, 0, -2))
    assert not equivalent(kn(3).mult, (1, -1, 0), (1, 0, -1))
    assert to_a_rep(5, (4, 0, 2, 0, -7)) == (4, 0, 2, 0, -7)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.data())
def test_a_rep_is_class_invariant(n, data):
    d = tuple(data.draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n)))
    a = to_a_rep(n, d)
    assert all(0 <= x < n for x in a[: n - 2]) and a[n - 2] == 0 and sum(a) == sum(d)
    assert to_a_rep(n, a) == a
    if n <= 5:
        assert equivalent(kn(n).mult, d, a)


def test_b_coord_examples():
    assert from_b_coord(BCoord((0, 0), 4)) == (0, 0, 0, 4)
    for n in (3, 4, 6):
        e_n = tuple(int(k == n - 1) for k in range(n))
        e_n1 = tuple(int(k == n - 2) for k in range(n))
        assert to_b_coord(n, e_n) == BCoord((0,) * (n - 2), 1)
        assert to_b_coord(n, e_n1) == BCoord((n - 1,) * (n - 2), 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.data())
def test_b_coord_roundtrip(n, data):
    b = tuple(data.draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2)))
    c = BCoord(b, data.draw(st.integers(-20, 20)))
    assert to_b_coord(n, from_b_coord(c)) == c
    d = tuple(data.draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n)))
    back = from_b_coord(to_b_coord(n, d))
    assert sum(back) == sum(d) and to_a_rep(n, back) == to_a_rep(n, d)


def test_group_law():
    assert pic_add(BCoord((1, 2), 3), BCoord((3, 3), 2)) == BCoord((0, 1), 5)
    c = BCoord((2, 1, 4), -3)
    assert pic_add(c, BCoord((0, 0, 0), 0)) == c
    assert pic_sub(c, c) == BCoord((0, 0, 0), 0)
    with pytest.raises(DimensionError):
        pic_add(BCoord((1,), 0), BCoord((1, 1), 0))
    with pytest.raises(ValueError):
        BCoord((4, 0), 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.data())
def test_group_law_matches_divisor_addition(n, data):
    d1 = tuple(data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n)))
    d2 = tuple(data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n)))
    s = tuple(x + y for x, y in zip(d1, d2))
    assert pic_add(to_b_coord(n, d1), to_b_coord(n, d2)) == to_b_coord(n, s)


def test_a_rep_and_q_reduce_induce_same_partition():
    rng = random.Random(4)
    for n in (3, 4, 5):
        G = kn(n)
        pts = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(60)]
        for d1 in pts[:20]:
            for d2 in pts:
                assert (q_reduce(G, d1) == q_reduce(G, d2)) == (to_a_rep(n, d1) == to_a_rep(n, d2))


# -- indicators --------------------------------------------------------------


def test_rank_drop_examples():
    assert rank_drop_indicator((0, 0, 0)) == 1
    assert rank_drop_indicator((1, 0, -1)) == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_rank_drop_matches_generic_engine(n):
    G = kn(n)
    rng = random.Random(n)
    for _ in range(60):
        a = to_a_rep(n, [rng.randint(-4, 6) for _ in range(n)])
        lower = list(a)
        lower[n - 2] -= 1
        assert rank_drop_indicator(a) == bn_rank(G, a) - bn_rank(G, lower)


@pytest.mark.parametrize("n", [3, 4])
def test_double_difference_matches_generic_engine(n):
    G = kn(n)
    assert double_diff_indicator(BCoord((0,) * (n - 2), 0)) == 1
    rng = random.Random(10 + n)
    for _ in range(80):
        b = tuple(rng.randrange(n) for _ in range(n - 2))
        i = rng.randint(-2, 2 * n)
        d = list(from_b_coord(BCoord(b, i)))
        r = lambda x: bn_rank(G, x)
        dn = d[:-1] + [d[-1] - 1]
        dn1 = d[: n - 2] + [d[n - 2] - 1, d[-1]]
        dboth = d[: n - 2] + [d[n - 2] - 1, d[-1] - 1]
        assert double_diff_indicator(BCoord(b, i)) == r(d) - r(dn) - r(dn1) + r(dboth)


# -- rank formula --------------------------------------------------------------


def test_kn_rank_examples():
    assert kn_rank(3, (2, 0, 0)) == 1 == kn_rank_loop(3, (2, 0, 0))
    assert kn_rank(4, (1, 1, 0, 0)) == 0
    for n in range(2, 9):
        assert kn_rank(n, (0,) * n) == 0
    assert kn_rank(5, (3, -9, 1, 1, 2)) == -1
    assert kn_rank(3, (2, 0, 0)) - kn_rank(3, (-2, 0, 0)) == 2 + 1 - 1


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_kn_rank_matches_generic_engine(n):
    G = kn(n)
    rng = random.Random(100 + n)
    for _ in range(120):
        d = tuple(rng.randint(-5, 5) for _ in range(n))
        assert kn_rank(n, d) == bn_rank(G, d), d


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 30), st.data())
def test_bucketed_matches_loop(n, data):
    d = tuple(data.draw(st.lists(st.integers(-3 * n, 3 * n), min_size=n, max_size=n)))
    assert kn_rank(n, d) == kn_rank_loop(n, d)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 6), st.data())
def test_kn_rank_class_invariance(n, data):
    d = list(data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n)))
    v = data.draw(st.integers(0, n - 1))
    moved = [x - 1 for x in d]
    moved[v] += n  # add the Laplacian row of v
    assert kn_rank(n, d) == kn_rank(n, moved)


def test_numpy_path_agrees_with_python_paths():
    rng = np.random.default_rng(3)
    for n in (4096, 5000):
        for shift in (40, n, 3 * n):
            d = rng.integers(-1, 2, size=n)
            d[0] += shift - int(d.sum())
            fast = kn_rank(n, d)
            assert fast == kn_rank(n, d.tolist())
            ref = d[n - 2]
            assert fast == _rank_bucketed_py(n, [int(x - ref) % n for x in d[: n - 2]], shift)
            if shift < 100:
                assert fast == kn_rank_loop(n, d.tolist())


def test_bucket_terms_reproduce_loop_counts():
    n, a = 5, (3, 1, 4, 0, 2)
    deg = sum(a)
    terms = bucket_terms(n, a, deg)
    for k, g, count in terms:
        assert g == sum((x + k) % n for x in a[: n - 2])
        assert count == sum(1 for i in range(k, deg + 1, n) if g <= deg - i)


# -- weights -------------------------------------------------------------------


def test_kn_weight_examples():
    assert kn_weight(4, (0, 0, 0, 0)) == 1
    assert kn_weight(4, (0, 0, 0, 4)) == -2
    assert kn_weight(4, (0, 0, 0, 8)) == 1
    assert kn_weight(4, (1, 0, 0, 3)) == 0
    assert kn_weight(3, (1, 1, 1)) == -1
    f = lambda d: 1 + bn_rank(kn(3), d)
    assert mobius_at(f, (1, 1, 1)) == -1
    assert kn_weight(5, (0, 0, 0, 0, 7)) == 0
    assert kn_weight(5, (0, 0, 0, 0, 20)) == 0


@pytest.mark.parametrize("n", [3, 4])
def test_kn_weight_matches_mobius(n):
    f = lambda d: 1 + kn_rank(n, d)
    for d in Window.box(n, -1, n - 1, min_degree=-1, max_degree=n * (n - 2) + 1):
        assert kn_weight(n, d) == mobius_at(f, d)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kn_weight_table_is_self_dual(n):
    lo, hi = -1, n - 1
    win = Window.box(n, lo, hi, min_degree=-1, max_degree=n * (n - 2) + 1)
    W = WeightTable(n, {d: kn_weight(n, d) for d in win}, win, -1)
    L = find_self_duality(W)
    assert L is not None and to_a_rep(n, L) == to_a_rep(n, (n - 2,) * n)


def test_weight_collapse():
    delta = lambda x: int(x == 0)
    for n in (3, 4, 5):
        for ell in range(n - 1):
            c = BCoord((0,) * (n - 2), n * ell)
            assert weight_collapse(delta, c) == (-1) ** ell * comb(n - 2, ell)
        assert weight_collapse(lambda x: 7, BCoord((0,) * (n - 2), 3)) == 0
        assert weight_collapse(lambda x: x * x + 1, BCoord((1,) + (0,) * (n - 3), 2)) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**6), st.data())
def test_weight_collapse_matches_direct_differences(n, seed, data):
    # h(<b, i>) = g(sum(b) - i) evaluated on lattice points via their B-coordinates
    g = lambda x: random.Random(f"{seed}:{x}").randint(-5, 5)
    h = lambda d: (lambda c: g(sum(c.b) - c.i))(to_b_coord(n, d))
    b = tuple(data.draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2)))
    c = BCoord(b, data.draw(st.integers(-3 * n, 3 * n)))
    d = from_b_coord(c)

    def diff(k, p):
        if k == n - 2:
            return h(p)
        lower = p[:k] + (p[k] - 1,) + p[k + 1 :]
        return diff(k + 1, p) - diff(k + 1, lower)

    assert weight_collapse(g, c) == diff(0, d)
