from fractions import Fraction
from itertools import combinations

import pytest

from shortdesc import (
    LeftDomain,
    ParameterError,
    build_composed_disperser,
    build_disperser,
    build_expander,
    build_matching_graph,
    check_disperser,
    check_expander,
    load_graph_text,
    neighbor_set,
    neighbors,
    parse_layered,
    serialize_layered,
)

from .helpers import cover, table_of


class TestBuildDisperser:
    def test_right_size_is_two_to_k_plus_one(self):
        for k in range(4):
            g = build_disperser(LeftDomain(k, k + 2), k, seed=1)
            assert g.right_size == 2 ** (k + 1)

    def test_every_four_subset_reaches_four(self):
        g = build_disperser(LeftDomain(2, 4), 2, seed=1)
        table = table_of(g)
        for subset in combinations(table, 4):
            assert cover(table, subset) >= 4

    def test_k_zero_gives_degree_one_coverage(self):
        g = build_disperser(LeftDomain(0, 2), 0, seed=1)
        assert g.right_size == 2
        for x in g.domain.strings():
            assert len(neighbor_set(g, [x])) >= 1

    def test_neighbors_stay_in_range_k1(self):
        g = build_disperser(LeftDomain(1, 3), 1, seed=1)
        for x in g.domain.strings():
            assert all(0 <= v < 4 for v in neighbors(g, x))

    def test_delta_one_reproduces_default_size(self):
        g = build_disperser(LeftDomain(2, 3), 2, seed=1, delta=1)
        assert g.right_size == 8

    def test_fractional_delta_shrinks_right_side(self):
        g = build_disperser(LeftDomain(2, 4), 2, seed=1, delta=Fraction(1, 2))
        assert g.right_size == round(2**2.5) == 6
        table = table_of(g)
        for subset in combinations(table, 4):
            assert cover(table, subset) >= 4

    def test_domain_too_small_rejected(self):
        with pytest.raises(ParameterError):
            build_disperser(LeftDomain(1, 1), 3, seed=1)

    def test_deterministic_rebuild(self):
        a = table_of(build_disperser(LeftDomain(2, 3), 2, seed=9))
        b = table_of(build_disperser(LeftDomain(2, 3), 2, seed=9))
        assert a == b


class TestBuildExpander:
    def test_right_size_formula(self):
        for k in range(4):
            g = build_expander(LeftDomain(k, k + 2), k, seed=1)
            assert g.right_size == 2 ** (k + 3) - 4

    def test_k1_block_sizes(self):
        g = build_expander(LeftDomain(1, 2), 1, seed=1)
        parts = g.meta["parts"]
        assert [p.right_size for p in parts] == [4, 8]
        assert g.right_size == 12

    def test_k0_every_singleton_covered(self):
        g = build_expander(LeftDomain(0, 2), 0, seed=1)
        assert g.right_size == 4
        for x in g.domain.strings():
            assert len(neighbor_set(g, [x])) >= 1

    def test_k2_expands_exhaustively(self):
        g = build_expander(LeftDomain(2, 3), 2, seed=1)
        report = check_expander(g, 4, 1)
        assert report.passed and report.mode == "exhaustive"


class TestBuildComposed:
    def test_right_size_and_subset_coverage(self):
        g = build_composed_disperser(LeftDomain(2, 4), 2, seed=1)
        assert g.right_size == 8
        report = check_disperser(g, 4, Fraction(1, 2))
        assert report.passed and report.mode == "exhaustive"

    def test_long_strings_take_fixed_shortcut(self):
        g = build_composed_disperser(LeftDomain(2, 6), 2, seed=1)
        assert neighbors(g, "10110") == [0, 1, 2, 3]
        assert neighbors(g, "110110") == [0, 1, 2, 3]

    def test_middle_size_window(self):
        g = build_composed_disperser(LeftDomain(2, 4), 2, seed=1)
        middle = g.meta["middle_size"]
        assert 2**2 < middle < 2**2 * 2**5

    def test_two_stage_neighbor_identity(self, rng):
        # E(S) == second-stage image of the first-stage image, on short strings.
        g = build_composed_disperser(LeftDomain(2, 4), 2, seed=1)
        spread_parts = g.meta["expanders"]
        offsets = g.meta["middle_offsets"]
        squeeze = g.meta["middle_disperser"]
        short = [x for x in g.domain.strings() if len(x) <= 4]
        for _ in range(25):
            s = rng.sample(short, 4)
            middle = set()
            for x in s:
                exp = spread_parts[len(x)]
                middle.update(offsets[len(x)] + v for v in neighbor_set(exp, [x]))
            image = neighbor_set(squeeze, [squeeze.domain.string_at(z) for z in middle])
            assert neighbor_set(g, s) == image
            assert len(image) >= 4

    def test_domain_below_k_rejected(self):
        with pytest.raises(ParameterError):
            build_composed_disperser(LeftDomain(1, 4), 2, seed=1)

    def test_all_lengths_long_still_valid(self):
        # lo > 2^k leaves no middle slices; the shortcut alone must serve.
        g = build_composed_disperser(LeftDomain(3, 4), 1, seed=1)
        assert g.meta["middle_size"] == 0
        assert g.right_size == 4
        table = table_of(g)
        for subset in combinations(list(table)[:6], 2):
            assert cover(table, subset) >= 2


class TestBuildMatching:
    def test_right_size_formula(self):
        for k in range(5):
            lg = build_matching_graph(k, k + 2, seed=1)
            assert lg.right_size == 2 ** (k + 1) - 1

    def test_k0_single_universal_layer(self):
        lg = build_matching_graph(0, 2, seed=1)
        assert lg.right_size == 1
        assert [layer_id for layer_id, _ in lg.layers] == [-1]
        for x in lg.domain.strings():
            assert neighbors(lg.as_bigraph(), x) == [0]

    def test_k3_right_size_15(self):
        lg = build_matching_graph(3, 5, seed=1)
        assert lg.right_size == 15

    def test_layer_offsets(self):
        lg = build_matching_graph(3, 5, seed=1)
        assert [lg.layer_offset(i) for i, _ in lg.layers] == [0, 1, 3, 7]

    def test_flat_degree_is_sum_of_layer_degrees(self):
        lg = build_matching_graph(2, 4, seed=1)
        flat = lg.as_bigraph()
        for x in lg.domain.strings():
            assert flat.degree_of(x) == sum(g.degree_of(x) for _, g in lg.layers)

    def test_each_layer_meets_its_subset_quota(self):
        lg = build_matching_graph(2, 4, seed=1)
        for layer_id, g in lg.layers:
            if layer_id < 0:
                continue
            table = table_of(g)
            quota = 2**layer_id
            for subset in combinations(table, quota):
                assert cover(table, subset) >= quota

    def test_rows_count_matches_domain(self):
        lg = build_matching_graph(2, 4, seed=1)
        text = serialize_layered(lg)
        assert len(text.splitlines()) == 2 + 3 + 2 + (4 + 8 + 16)

    def test_domain_cap_below_k_rejected(self):
        with pytest.raises(ParameterError):
            build_matching_graph(3, 2)


class TestLayeredFile:
    def test_round_trip_bit_exact(self):
        lg = build_matching_graph(2, 3, seed=4)
        text = serialize_layered(lg)
        again = serialize_layered(parse_layered(text))
        assert again == text

    def test_parse_recovers_structure(self):
        lg = build_matching_graph(2, 3, seed=4)
        parsed = parse_layered(serialize_layered(lg))
        assert parsed.k == 2
        assert parsed.right_size == 7
        assert [i for i, _ in parsed.layers] == [-1, 0, 1]
        flat_a = lg.as_bigraph()
        flat_b = parsed.as_bigraph()
        for x in lg.domain.strings():
            assert neighbors(flat_a, x) == neighbors(flat_b, x)

    def test_load_dispatches_both_flavors(self):
        from shortdesc import serialize_graph

        flat = build_disperser(LeftDomain(1, 2), 1, seed=2)
        layered = build_matching_graph(1, 2, seed=2)
        assert load_graph_text(serialize_graph(flat)).right_size == 4
        assert load_graph_text(serialize_layered(layered)).right_size == 3


def test_same_seed_same_graph_different_seed_differs():
    a = serialize_layered(build_matching_graph(2, 3, seed=5))
    b = serialize_layered(build_matching_graph(2, 3, seed=5))
    c = serialize_layered(build_matching_graph(2, 3, seed=985_321))
    assert a == b
    assert a != c
