"""Graph transformations: clone-doubling, folding, disjoint union, composition.

All four are pure functions on immutable graphs and return immutable
graphs, so they compose and thread freely.  They may introduce parallel
edges; coverage properties downstream always look at neighbor sets.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ParameterError
from .graphs import BiGraph, neighbors


@dataclass(frozen=True)
class FoldSpec:
    """Fold into ``classes`` balanced equivalence classes (sizes differ by <= 1)."""

    classes: int


def clone_double(g: BiGraph) -> BiGraph:
    """Duplicate the right side: doubles right_size and every degree.

    Slot ``i < d`` keeps the original neighbor, slot ``d + i`` points at the
    cloned copy (original index shifted by the old right size).
    """
    base_right = g.right_size
    base_deg = g.degree_of
    base_nb = g.neighbor_of

    def degree_of(x: str) -> int:
        return 2 * base_deg(x)

    def neighbor_of(x: str, i: int) -> int:
        d = base_deg(x)
        return base_nb(x, i) if i < d else base_right + base_nb(x, i - d)

    def neighbors_of(x: str) -> Sequence[int]:
        row = neighbors(g, x)
        return row + [base_right + v for v in row]

    return BiGraph(
        g.domain,
        2 * base_right,
        degree_of,
        neighbor_of,
        neighbors_of,
        meta={"kind": "clone_double", "inner": g},
    )


def fold_class_of(index: int, classes: int) -> int:
    """Class of an original right vertex: ``index mod classes``."""
    return index % classes


def fold_class_sizes(right_size: int, classes: int) -> list[int]:
    """Sizes of the mod-``classes`` partition of ``[0, right_size)``."""
    q, r = divmod(right_size, classes)
    return [q + 1 if j < r else q for j in range(classes)]


def fold(g: BiGraph, spec: FoldSpec | int) -> BiGraph:
    """Quotient the right side into balanced classes; degree is unchanged.

    ``x`` is adjacent to a class exactly when some original neighbor of
    ``x`` lies in it, so folding never increases the left degree.
    """
    m = spec.classes if isinstance(spec, FoldSpec) else int(spec)
    if not 1 <= m <= g.right_size:
        raise ParameterError(f"cannot fold right size {g.right_size} into {m} classes")
    base_nb = g.neighbor_of

    def neighbor_of(x: str, i: int) -> int:
        return base_nb(x, i) % m

    def neighbors_of(x: str) -> Sequence[int]:
        return [v % m for v in neighbors(g, x)]

    return BiGraph(
        g.domain,
        m,
        g.degree_of,
        neighbor_of,
        neighbors_of,
        meta={"kind": "fold", "classes": m, "inner": g},
    )


def disjoint_union(parts: Sequence[BiGraph]) -> BiGraph:
    """Union of graphs over one shared domain with right sides laid side by side."""
    if not parts:
        raise ParameterError("disjoint_union needs at least one part")
    domain = parts[0].domain
    if any(p.domain != domain for p in parts):
        raise ParameterError("disjoint_union parts must share a domain")
    offsets = [0]
    for p in parts:
        offsets.append(offsets[-1] + p.right_size)
    total_right = offsets[-1]

    def degree_of(x: str) -> int:
        return sum(p.degree_of(x) for p in parts)

    def neighbor_of(x: str, i: int) -> int:
        rest = i
        for off, p in zip(offsets, parts):
            d = p.degree_of(x)
            if rest < d:
                return off + p.neighbor_of(x, rest)
            rest -= d
        raise IndexError(f"slot {i} out of range for {x!r}")

    def neighbors_of(x: str) -> Sequence[int]:
        out: list[int] = []
        for off, p in zip(offsets, parts):
            out.extend(off + v for v in neighbors(p, x))
        return out

    return BiGraph(
        domain,
        total_right,
        degree_of,
        neighbor_of,
        neighbors_of,
        meta={"kind": "disjoint_union", "parts": tuple(parts), "offsets": tuple(offsets[:-1])},
    )


def compose(a: BiGraph, b: BiGraph, middle: Callable[[int], str] | None = None) -> BiGraph:
    """Two-stage adjacency: ``x`` reaches ``r`` through any shared middle vertex.

    ``a``'s right indices are identified with ``b``'s domain strings through
    ``middle`` (canonical-order bijection by default); the two sides must
    have equal cardinality.  Slots are enumerated lexicographically in
    (a-slot, b-slot), so duplicates appear whenever two routes meet.
    """
    if a.right_size != b.domain.size():
        raise ParameterError(
            f"compose needs |a.right| == |b.domain| ({a.right_size} != {b.domain.size()})"
        )
    mid = middle if middle is not None else b.domain.string_at

    def degree_of(x: str) -> int:
        return sum(b.degree_of(mid(z)) for z in neighbors(a, x))

    def neighbor_of(x: str, i: int) -> int:
        rest = i
        for z in neighbors(a, x):
            mstr = mid(z)
            d = b.degree_of(mstr)
            if rest < d:
                return b.neighbor_of(mstr, rest)
            rest -= d
        raise IndexError(f"slot {i} out of range for {x!r}")

    def neighbors_of(x: str) -> Sequence[int]:
        out: list[int] = []
        for z in neighbors(a, x):
            out.extend(neighbors(b, mid(z)))
        return out

    return BiGraph(
        a.domain,
        b.right_size,
        degree_of,
        neighbor_of,
        neighbors_of,
        meta={"kind": "compose", "first": a, "second": b},
    )
