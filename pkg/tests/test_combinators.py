import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shortdesc import (
    FoldSpec,
    LeftDomain,
    ParameterError,
    check_disperser,
    clone_double,
    compose,
    complete_graph,
    disjoint_union,
    fold,
    from_table,
    neighbor_set,
    neighbors,
)
from shortdesc.combinators import fold_class_sizes

from .helpers import cover, random_bigraph, table_of


class TestCloneDouble:
    def test_doubles_right_and_degree(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 2), 5, 2)
        doubled = clone_double(g)
        assert doubled.right_size == 10
        for x in g.domain.strings():
            assert doubled.degree_of(x) == 2 * g.degree_of(x)

    def test_neighbor_sets_double_without_parallel_edges(self):
        g = from_table(LeftDomain(1, 1), 5, {"0": [0, 3], "1": [2]})
        doubled = clone_double(g)
        assert len(neighbor_set(doubled, ["0"])) == 2 * len(neighbor_set(g, ["0"]))
        assert neighbor_set(doubled, ["0"]) == {0, 3, 5, 8}

    def test_preserves_dispersion(self, rng):
        # the clone keeps (K, eps) because each half separately covers.
        for _ in range(10):
            g = random_bigraph(rng, LeftDomain(2, 2), 6, 4)
            base = check_disperser(g, 2, Fraction(1, 3))
            after = check_disperser(clone_double(g), 2, Fraction(1, 3))
            assert after.passed == base.passed


class TestFold:
    def test_class_sizes_balanced(self):
        assert sorted(fold_class_sizes(10, 4), reverse=True) == [3, 3, 2, 2]
        sizes = fold_class_sizes(13, 5)
        assert max(sizes) - min(sizes) <= 1
        assert sum(sizes) == 13

    def test_identity_fold(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 2), 6, 3)
        same = fold(g, g.right_size)
        for x in g.domain.strings():
            assert neighbors(same, x) == neighbors(g, x)

    def test_degenerate_single_class(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 2), 6, 3)
        folded = fold(g, FoldSpec(1))
        for x in g.domain.strings():
            if g.degree_of(x):
                assert neighbor_set(folded, [x]) == {0}

    def test_too_many_classes_rejected(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 1), 4, 2)
        with pytest.raises(ParameterError):
            fold(g, 5)

    def test_degree_unchanged(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 2), 8, 4)
        folded = fold(g, 3)
        for x in g.domain.strings():
            assert folded.degree_of(x) == g.degree_of(x)

    def test_fold_keeps_every_pair_half_covered(self, rng):
        # a (2, 1/3)-disperser with right side twice the class count, folded
        # into 4 classes, leaves every 2-subset with at least 2 class
        # neighbors; exhaustive over all pairs and several dispersers.
        domain = LeftDomain(2, 2)
        strings = list(domain.strings())
        found = 0
        while found < 5:
            g = random_bigraph(rng, domain, 8, 5)
            if not check_disperser(g, 2, Fraction(1, 3)).passed:
                continue
            found += 1
            folded = table_of(fold(g, 4))
            for a in strings:
                for b in strings:
                    if a < b:
                        assert cover(folded, [a, b]) >= 2


class TestDisjointUnion:
    def test_right_sizes_add(self, rng):
        d = LeftDomain(1, 2)
        parts = [random_bigraph(rng, d, 4, 2), random_bigraph(rng, d, 8, 2)]
        u = disjoint_union(parts)
        assert u.right_size == 12

    def test_offsets_shift_second_part(self):
        d = LeftDomain(1, 1)
        a = from_table(d, 2, {"0": [1], "1": [0]})
        b = from_table(d, 3, {"0": [2], "1": []})
        u = disjoint_union([a, b])
        assert neighbors(u, "0") == [1, 4]
        assert neighbors(u, "1") == [0]

    def test_mismatched_domains_rejected(self, rng):
        a = random_bigraph(rng, LeftDomain(1, 1), 2, 1)
        b = random_bigraph(rng, LeftDomain(1, 2), 2, 1)
        with pytest.raises(ParameterError):
            disjoint_union([a, b])

    def test_union_neighbor_set_is_union_of_offset_sets(self, rng):
        d = LeftDomain(1, 2)
        a = random_bigraph(rng, d, 4, 3)
        b = random_bigraph(rng, d, 5, 3)
        u = disjoint_union([a, b])
        s = rng.sample(list(d.strings()), 3)
        expected = neighbor_set(a, s) | {4 + v for v in neighbor_set(b, s)}
        assert neighbor_set(u, s) == expected


class TestCompose:
    def test_simple_path(self):
        left = LeftDomain(1, 1)
        a = from_table(left, 1, {"0": [0], "1": []})
        b = from_table(LeftDomain(0, 0), 3, {"": [1, 2]})
        c = compose(a, b)
        assert neighbors(c, "0") == [1, 2]
        assert neighbors(c, "1") == []

    def test_identity_second_stage(self, rng):
        a = random_bigraph(rng, LeftDomain(1, 2), 3, 2)
        mid = LeftDomain(0, 1)
        assert mid.size() == a.right_size
        identity = from_table(mid, 3, {s: [mid.index_of(s)] for s in mid.strings()})
        c = compose(a, identity)
        for x in a.domain.strings():
            assert neighbors(c, x) == neighbors(a, x)

    def test_size_mismatch_rejected(self, rng):
        a = random_bigraph(rng, LeftDomain(1, 1), 4, 2)
        b = random_bigraph(rng, LeftDomain(0, 1), 2, 1)
        with pytest.raises(ParameterError):
            compose(a, b)

    def test_neighbor_set_equals_image_of_image(self, rng):
        # brute-force both sides: E(S) versus B[A(S)].
        mid = LeftDomain(0, 1)
        for _ in range(20):
            a = random_bigraph(rng, LeftDomain(1, 2), mid.size(), 3)
            b = random_bigraph(rng, mid, 5, 3)
            c = compose(a, b)
            s = rng.sample(list(a.domain.strings()), 3)
            middle = neighbor_set(a, s)
            expected = neighbor_set(b, [mid.string_at(z) for z in middle])
            assert neighbor_set(c, s) == expected

    def test_degree_bound(self, rng):
        mid = LeftDomain(0, 1)
        a = random_bigraph(rng, LeftDomain(1, 2), mid.size(), 3)
        b = random_bigraph(rng, mid, 5, 3)
        c = compose(a, b)
        maxdeg_b = max(b.degree_of(z) for z in mid.strings())
        for x in a.domain.strings():
            assert c.degree_of(x) <= a.degree_of(x) * maxdeg_b

    def test_slotwise_matches_bulk(self, rng):
        mid = LeftDomain(0, 1)
        a = random_bigraph(rng, LeftDomain(1, 1), mid.size(), 3)
        b = random_bigraph(rng, mid, 4, 3)
        c = compose(a, b)
        for x in a.domain.strings():
            bulk = neighbors(c, x)
            assert bulk == [c.neighbor_of(x, i) for i in range(c.degree_of(x))]


@given(seed=st.integers(0, 2**32))
def test_clone_then_fold_back_restores_neighbor_sets(seed):
    rng = random.Random(seed)
    g = random_bigraph(rng, LeftDomain(0, 2), 6, 3)
    back = fold(clone_double(g), g.right_size)
    for x in g.domain.strings():
        assert neighbor_set(back, [x]) == neighbor_set(g, [x])


@given(seed=st.integers(0, 2**32), classes=st.integers(1, 6))
def test_fold_miss_counting_bound(seed, classes):
    # classes with no neighbor of S stay below 1.5x the per-class share of
    # the original non-neighbors (the balanced-partition counting step).
    rng = random.Random(seed)
    g = random_bigraph(rng, LeftDomain(0, 2), 12, 4)
    m = min(classes, g.right_size)
    folded = fold(g, m)
    t = g.right_size // m
    strings = list(g.domain.strings())
    s = rng.sample(strings, rng.randint(1, len(strings)))
    non_neighbors = g.right_size - len(neighbor_set(g, s))
    missing = m - len(neighbor_set(folded, s))
    if non_neighbors == 0:
        assert missing == 0
    else:
        assert missing <= non_neighbors / t
        assert missing < 1.5 * non_neighbors / t


@given(seed=st.integers(0, 2**32))
def test_union_covers_at_least_each_part(seed):
    rng = random.Random(seed)
    d = LeftDomain(0, 2)
    parts = [random_bigraph(rng, d, rng.randint(2, 5), 3) for _ in range(3)]
    u = disjoint_union(parts)
    strings = list(d.strings())
    s = rng.sample(strings, rng.randint(1, 4))
    assert len(neighbor_set(u, s)) >= max(len(neighbor_set(p, s)) for p in parts)


@given(seed=st.integers(0, 2**32))
def test_compose_associates_on_neighbor_sets(seed):
    rng = random.Random(seed)
    d1 = LeftDomain(1, 1)
    d2 = LeftDomain(0, 1)
    d3 = LeftDomain(0, 1)
    a = random_bigraph(rng, d1, d2.size(), 2)
    b = random_bigraph(rng, d2, d3.size(), 2)
    c = random_bigraph(rng, d3, 4, 2)
    left_assoc = compose(compose(a, b), c)
    right_assoc = compose(a, compose(b, c))
    for x in d1.strings():
        assert neighbor_set(left_assoc, [x]) == neighbor_set(right_assoc, [x])
