import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ragbench.corpus import RankedList
from ragbench.fusion import ConvexConfig, RrfConfig, convex_fuse, min_max, rrf_fuse


def ranked(*ids, start=10.0):
    return RankedList.from_pairs((d, start - i) for i, d in enumerate(ids))


def test_rrf_rank_one_in_both():
    r = rrf_fuse([ranked("a", "b"), ranked("a", "c")], RrfConfig(60), 5)
    assert r.doc_ids[0] == "a"
    assert r.scores[0] == pytest.approx(2 / 61)


def test_rrf_absent_list_contributes_zero():
    r = rrf_fuse([ranked("a"), ranked("b", "c")], RrfConfig(60), 5)
    assert dict(r)["a"] == pytest.approx(1 / 61)


def test_rrf_errors():
    with pytest.raises(ValueError):
        rrf_fuse([ranked("a")])
    with pytest.raises(ValueError):
        rrf_fuse([ranked("a"), ranked("a")], k=0)
    with pytest.raises(ValueError):
        RrfConfig(0)


def reference_rrf(lists, k_rrf):
    docs = {d for lst in lists for d in lst}
    out = {}
    for d in docs:
        out[d] = sum(1.0 / (k_rrf + lst.index(d) + 1) for lst in lists if d in lst)
    return sorted(out.items(), key=lambda e: (-e[1], e[0]))


def test_rrf_matches_reference_on_random_pairs():
    rng = random.Random(0)
    pool = [f"d{i}" for i in range(30)]
    for _ in range(100):
        a = rng.sample(pool, rng.randint(1, 20))
        b = rng.sample(pool, rng.randint(1, 20))
        got = rrf_fuse([ranked(*a), ranked(*b)], RrfConfig(60), 40)
        want = reference_rrf([a, b], 60)
        assert got.doc_ids == [d for d, _ in want]
        assert got.scores == pytest.approx([s for _, s in want], abs=1e-15)


@given(st.permutations([f"d{i}" for i in range(8)]), st.sampled_from([10, 30, 60, 100]))
def test_rrf_self_fusion_and_monotone_invariance(order, k_rrf):
    base = ranked(*order)
    assert rrf_fuse([base, base], RrfConfig(k_rrf), 8).doc_ids == list(order)
    squashed = RankedList.from_pairs((d, s**3 + 7) for d, s in base)
    assert rrf_fuse([base, ranked("x")], RrfConfig(k_rrf), 9) == rrf_fuse([squashed, ranked("x")], RrfConfig(k_rrf), 9)


def test_min_max_constant_list():
    assert min_max(RankedList.from_pairs([("a", 2.0), ("b", 2.0)])) == {"a": 1.0, "b": 1.0}


def test_convex_hand_arithmetic():
    sparse = RankedList.from_pairs([("a", 9.0), ("b", 5.0), ("c", 1.0)])
    dense = RankedList.from_pairs([("b", 0.9), ("d", 0.6), ("a", 0.3)])
    got = dict(convex_fuse(sparse, dense, ConvexConfig(0.5), 10))
    # sparse norm: a 1, b .5, c 0 ; dense norm: b 1, d .5, a 0
    assert got == pytest.approx({"a": 0.5, "b": 0.75, "c": 0.0, "d": 0.25})


@pytest.mark.parametrize("alpha, which", [(0.0, "sparse"), (1.0, "dense")])
def test_convex_extremes_reproduce_single_list(alpha, which):
    rng = random.Random(5)
    pool = [f"d{i}" for i in range(25)]
    for _ in range(50):
        sparse = RankedList.from_pairs((d, rng.random()) for d in rng.sample(pool, 12))
        dense = RankedList.from_pairs((d, rng.random()) for d in rng.sample(pool, 12))
        got = convex_fuse(sparse, dense, ConvexConfig(alpha), 25)
        assert got.doc_ids == (sparse if which == "sparse" else dense).doc_ids


@given(st.floats(0.1, 100), st.floats(-50, 50))
def test_convex_affine_invariance(scale, shift):
    sparse = RankedList.from_pairs([("a", 3.0), ("b", 2.0), ("c", 0.5)])
    dense = RankedList.from_pairs([("c", 0.8), ("a", 0.4), ("d", 0.1)])
    moved = RankedList.from_pairs((d, scale * s + shift) for d, s in sparse)
    assert convex_fuse(moved, dense, k=4).doc_ids == convex_fuse(sparse, dense, k=4).doc_ids


def test_convex_errors():
    with pytest.raises(ValueError):
        ConvexConfig(alpha=1.5)
    with pytest.raises(ValueError):
        convex_fuse(RankedList(), ranked("a"))
    with pytest.raises(ValueError):
        convex_fuse(ranked("a"), ranked("a"), k=0)
