"""Independent brute-force oracles used to cross-check library results.

Everything here is written against adjacency tables (plain dicts) rather
than the library's graph machinery, so a check and the code it checks
never share a code path.
"""

from __future__ import annotations

import random

from shortdesc import LeftDomain, from_table


def table_of(g):
    """Adjacency dict via direct slot-by-slot evaluation."""
    return {x: [g.neighbor_of(x, i) for i in range(g.degree_of(x))] for x in g.domain.strings()}


def cover(table: dict, subset) -> int:
    """Distinct right vertices touched by a subset, straight from the table."""
    seen = set()
    for x in subset:
        seen.update(table[x])
    return len(seen)


def random_table(rng: random.Random, domain: LeftDomain, right_size: int, max_degree: int) -> dict:
    return {
        x: [rng.randrange(right_size) for _ in range(rng.randint(0, max_degree))]
        for x in domain.strings()
    }


def random_bigraph(rng: random.Random, domain: LeftDomain, right_size: int, max_degree: int):
    return from_table(domain, right_size, random_table(rng, domain, right_size, max_degree))


def reference_greedy_match(layer_tables, offsets, order, sequence):
    """A plain-dict re-implementation of the level-descent rule.

    ``layer_tables`` maps layer id -> adjacency dict, ``offsets`` maps layer
    id -> global offset, ``order`` lists layer ids from the top level down.
    Returns the assignment dict, or None when some arrival gets stuck.
    """
    used = set()
    assignment = {}
    for x in sequence:
        placed = None
        for layer_id in order:
            candidates = sorted(
                offsets[layer_id] + v for v in set(layer_tables[layer_id][x])
            )
            free = [z for z in candidates if z not in used]
            if free:
                placed = free[0]
                break
        if placed is None:
            return None
        used.add(placed)
        assignment[x] = placed
    return assignment
