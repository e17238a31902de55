import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shortdesc import (
    BiGraph,
    CapacityError,
    DomainError,
    LeftDomain,
    ParameterError,
    complete_graph,
    from_table,
    materialize,
    neighbor_set,
    neighbors,
    parse_graph,
    serialize_graph,
    star_graph,
)

from .helpers import random_bigraph


class TestLeftDomain:
    def test_size_counts_all_lengths(self):
        assert LeftDomain(0, 0).size() == 1
        assert LeftDomain(2, 4).size() == 4 + 8 + 16
        assert LeftDomain(1, 1).size() == 2

    def test_membership(self):
        d = LeftDomain(1, 3)
        assert "0" in d and "101" in d
        assert "" not in d and "0110" not in d
        assert "2" not in d and 5 not in d

    def test_empty_string_is_a_vertex(self):
        assert "" in LeftDomain(0, 2)

    def test_canonical_order(self):
        got = list(LeftDomain(0, 2).strings())
        assert got == ["", "0", "1", "00", "01", "10", "11"]

    def test_string_at_round_trips_index_of(self):
        d = LeftDomain(1, 4)
        for idx, s in enumerate(d.strings()):
            assert d.string_at(idx) == s
            assert d.index_of(s) == idx

    def test_bad_window_rejected(self):
        with pytest.raises(ParameterError):
            LeftDomain(3, 2)

    def test_sample_set_distinct(self, rng):
        d = LeftDomain(2, 6)
        picked = d.sample_set(rng, 10)
        assert len(set(picked)) == 10
        assert all(p in d for p in picked)


class TestNeighbors:
    def test_complete_graph_row(self):
        g = complete_graph(LeftDomain(1, 1), 2)
        assert neighbors(g, "0") == [0, 1]

    def test_zero_degree_vertex(self):
        g = from_table(LeftDomain(1, 1), 4, {"0": [], "1": [2]})
        assert neighbors(g, "0") == []

    def test_outside_domain_raises(self):
        g = complete_graph(LeftDomain(1, 1), 2)
        with pytest.raises(DomainError):
            neighbors(g, "00")

    def test_neighbor_set_empty_union(self):
        g = complete_graph(LeftDomain(1, 2), 3)
        assert neighbor_set(g, []) == set()

    def test_neighbor_set_complete_covers_everything(self):
        g = complete_graph(LeftDomain(1, 2), 3)
        assert neighbor_set(g, ["0"]) == {0, 1, 2}

    def test_neighbor_set_star_is_singleton(self):
        g = star_graph(LeftDomain(1, 3), 4)
        some = list(g.domain.strings())[:5]
        assert neighbor_set(g, some) == {0}

    def test_duplicates_preserved_in_sequence(self):
        g = from_table(LeftDomain(0, 0), 2, {"": [1, 1, 0]})
        assert neighbors(g, "") == [1, 1, 0]
        assert neighbor_set(g, [""]) == {0, 1}


class TestDeterminismAndBounds:
    def test_repeated_probes_agree(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 4), 9, 5)
        strings = list(g.domain.strings())
        for _ in range(1000):
            x = rng.choice(strings)
            d = g.degree_of(x)
            if d == 0:
                continue
            i = rng.randrange(d)
            assert g.neighbor_of(x, i) == g.neighbor_of(x, i)

    def test_all_indices_in_range(self, rng):
        g = random_bigraph(rng, LeftDomain(0, 4), 7, 6)
        for x, row in materialize(g):
            assert all(0 <= v < g.right_size for v in row)


@given(data=st.data())
def test_neighbor_set_monotone(data):
    rng = random.Random(data.draw(st.integers(0, 2**32)))
    g = random_bigraph(rng, LeftDomain(0, 3), 6, 4)
    strings = list(g.domain.strings())
    t = data.draw(st.sets(st.sampled_from(strings), max_size=8))
    s = data.draw(st.sets(st.sampled_from(sorted(t)), max_size=8)) if t else set()
    assert neighbor_set(g, s) <= neighbor_set(g, t)


class TestFileFormat:
    def test_single_row_empty_string(self):
        g = from_table(LeftDomain(0, 0), 1, {"": [0]})
        text = serialize_graph(g)
        assert text.splitlines()[3] == "-: 0"

    def test_round_trip_is_identity(self, rng):
        g = random_bigraph(rng, LeftDomain(0, 3), 5, 4)
        text = serialize_graph(g)
        again = serialize_graph(parse_graph(text))
        assert again == text

    def test_parse_rejects_garbage(self):
        with pytest.raises(ParameterError):
            parse_graph("not a graph\n")

    def test_parse_rejects_out_of_order_rows(self):
        g = from_table(LeftDomain(1, 1), 2, {"0": [0], "1": [1]})
        lines = serialize_graph(g).splitlines()
        lines[3], lines[4] = lines[4], lines[3]
        with pytest.raises(ParameterError):
            parse_graph("\n".join(lines) + "\n")

    def test_materialize_capacity_guard(self):
        g = complete_graph(LeftDomain(0, 30), 2)
        with pytest.raises(CapacityError):
            materialize(g)

    def test_table_round_trip_values(self, rng):
        g = random_bigraph(rng, LeftDomain(1, 3), 6, 3)
        parsed = parse_graph(serialize_graph(g))
        for x in g.domain.strings():
            assert neighbors(parsed, x) == neighbors(g, x)


def test_from_table_validates_indices():
    with pytest.raises(ParameterError):
        from_table(LeftDomain(1, 1), 2, {"0": [2], "1": []})
