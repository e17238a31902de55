"""Bipartite graphs over bit-string left vertices.

Left vertices are binary strings (the empty string is a valid vertex),
ordered canonically by (length, lexicographic).  Right vertices are the
integers ``[0, right_size)``.  A graph is held as a pair of neighbor
functions rather than an edge list, so graphs over very large string
domains stay cheap to create; walking the whole domain only happens in
:func:`materialize`, which is explicitly bounded.

Neighbor sequences may contain duplicates (parallel edges); every
coverage-style property in this package is evaluated on neighbor *sets*.
Graphs are immutable after construction and neighbor evaluation is pure,
so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import CapacityError, DomainError, ParameterError

MATERIALIZE_BOUND = 1_000_000
FORMAT_HEADER = "BIGRAPH 1"
EMPTY_MARK = "-"


def bit_strings(length: int) -> Iterator[str]:
    """All bit strings of one length, in lexicographic order."""
    if length == 0:
        yield ""
        return
    for bits in product("01", repeat=length):
        yield "".join(bits)


@dataclass(frozen=True)
class LeftDomain:
    """All binary strings with length in the window ``[lo, hi]``.

    ``hi`` is the desk-scale cap standing in for an unbounded set of string
    lengths: operations must treat a string of covered length identically
    no matter where ``hi`` sits.
    """

    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ParameterError(f"bad length window [{self.lo}, {self.hi}]")

    def size(self) -> int:
        return 2 ** (self.hi + 1) - 2**self.lo

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, str):
            return False
        return self.lo <= len(s) <= self.hi and all(c in "01" for c in s)

    def strings(self) -> Iterator[str]:
        """Every domain string in canonical (length, lexicographic) order."""
        for n in range(self.lo, self.hi + 1):
            yield from bit_strings(n)

    def string_at(self, index: int) -> str:
        """The ``index``-th string in canonical order."""
        if index < 0:
            raise ParameterError(f"negative domain index {index}")
        rest = index
        for n in range(self.lo, self.hi + 1):
            block = 2**n
            if rest < block:
                return format(rest, f"0{n}b") if n else ""
            rest -= block
        raise ParameterError(f"domain index {index} out of range")

    def index_of(self, s: str) -> int:
        if s not in self:
            raise DomainError(f"{s!r} not in domain [{self.lo}, {self.hi}]")
        offset = 2 ** len(s) - 2**self.lo
        return offset + (int(s, 2) if s else 0)

    def sample(self, rng) -> str:
        return self.string_at(rng.randrange(self.size()))

    def sample_set(self, rng, count: int) -> list[str]:
        """``count`` distinct domain strings, drawn uniformly."""
        if count > self.size():
            raise ParameterError("sample larger than domain")
        picked: set[str] = set()
        while len(picked) < count:
            picked.add(self.sample(rng))
        return sorted(picked, key=lambda s: (len(s), s))


@dataclass(frozen=True)
class BiGraph:
    """An explicit bipartite graph: string left side, integer right side.

    ``neighbor_of(x, i)`` is defined exactly for ``0 <= i < degree_of(x)``
    and must be deterministic.  ``neighbors_of``, when present, returns the
    whole slot sequence in one call and must agree with ``neighbor_of``;
    it exists because some compositions can enumerate all slots much
    faster than they can answer a single slot.
    """

    domain: LeftDomain
    right_size: int
    degree_of: Callable[[str], int]
    neighbor_of: Callable[[str, int], int]
    neighbors_of: Callable[[str], Sequence[int]] | None = None
    meta: dict = field(default_factory=dict, compare=False, repr=False)


def neighbors(g: BiGraph, x: str) -> list[int]:
    """The neighbor slot sequence of ``x`` (duplicates preserved)."""
    if x not in g.domain:
        raise DomainError(f"{x!r} not in domain [{g.domain.lo}, {g.domain.hi}]")
    if g.neighbors_of is not None:
        return list(g.neighbors_of(x))
    return [g.neighbor_of(x, i) for i in range(g.degree_of(x))]


def neighbor_set(g: BiGraph, xs: Iterable[str]) -> set[int]:
    """Union of neighbor sets over a collection of left vertices."""
    out: set[int] = set()
    for x in xs:
        out.update(neighbors(g, x))
    return out


def from_table(domain: LeftDomain, right_size: int, table: dict[str, Sequence[int]]) -> BiGraph:
    """A materialized graph backed by an explicit adjacency table."""
    frozen = {}
    for x, nbrs in table.items():
        if x not in domain:
            raise DomainError(f"table row {x!r} outside domain")
        row = tuple(int(v) for v in nbrs)
        for v in row:
            if not 0 <= v < right_size:
                raise ParameterError(f"neighbor {v} of {x!r} outside [0, {right_size})")
        frozen[x] = row

    def degree_of(x: str) -> int:
        return len(frozen.get(x, ()))

    def neighbor_of(x: str, i: int) -> int:
        return frozen.get(x, ())[i]

    def neighbors_of(x: str) -> Sequence[int]:
        return frozen.get(x, ())

    return BiGraph(domain, right_size, degree_of, neighbor_of, neighbors_of, meta={"table": frozen})


def complete_graph(domain: LeftDomain, right_size: int) -> BiGraph:
    """Every left vertex adjacent to every right vertex."""
    if right_size < 1:
        raise ParameterError("right_size must be positive")
    slots = tuple(range(right_size))
    return BiGraph(
        domain,
        right_size,
        degree_of=lambda x: right_size,
        neighbor_of=lambda x, i: i,
        neighbors_of=lambda x: slots,
        meta={"kind": "complete"},
    )


def star_graph(domain: LeftDomain, right_size: int = 1) -> BiGraph:
    """Every left vertex adjacent only to right vertex 0."""
    if right_size < 1:
        raise ParameterError("right_size must be positive")
    return BiGraph(
        domain,
        right_size,
        degree_of=lambda x: 1,
        neighbor_of=lambda x, i: 0,
        neighbors_of=lambda x: (0,),
        meta={"kind": "star"},
    )


def materialize(g: BiGraph, max_vertices: int = MATERIALIZE_BOUND) -> list[tuple[str, tuple[int, ...]]]:
    """The full adjacency table, one row per domain string in canonical order."""
    total = g.domain.size()
    if total > max_vertices:
        raise CapacityError(f"domain has {total} strings, materialization bound is {max_vertices}")
    return [(x, tuple(neighbors(g, x))) for x in g.domain.strings()]


def _format_row(x: str, nbrs: Sequence[int]) -> str:
    label = x if x else EMPTY_MARK
    body = " ".join(str(v) for v in nbrs)
    return f"{label}: {body}" if body else f"{label}:"


def _parse_row(line: str) -> tuple[str, tuple[int, ...]]:
    if ":" not in line:
        raise ParameterError(f"malformed graph row {line!r}")
    label, _, body = line.partition(":")
    x = "" if label == EMPTY_MARK else label
    if x and not all(c in "01" for c in x):
        raise ParameterError(f"malformed vertex label {label!r}")
    return x, tuple(int(tok) for tok in body.split())


def serialize_graph(g: BiGraph, max_vertices: int = MATERIALIZE_BOUND) -> str:
    """Render the graph file format (bit-exact round-trip with :func:`parse_graph`)."""
    rows = materialize(g, max_vertices)
    lines = [FORMAT_HEADER, f"left {g.domain.lo} {g.domain.hi}", f"right {g.right_size}"]
    lines.extend(_format_row(x, nbrs) for x, nbrs in rows)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> BiGraph:
    """Parse the graph file format back into a materialized graph."""
    lines = text.splitlines()
    if len(lines) < 3 or lines[0] != FORMAT_HEADER:
        raise ParameterError("not a graph file (missing header)")
    try:
        _, lo_s, hi_s = lines[1].split()
        assert _ == "left"
        _, right_s = lines[2].split()
        assert _ == "right"
    except (ValueError, AssertionError):
        raise ParameterError("malformed graph file header") from None
    domain = LeftDomain(int(lo_s), int(hi_s))
    right_size = int(right_s)
    rows = [_parse_row(line) for line in lines[3:] if line]
    expected = list(domain.strings())
    if [x for x, _ in rows] != expected:
        raise ParameterError("graph rows must cover the domain in canonical order")
    return from_table(domain, right_size, dict(rows))
