"""Candidate-description lists from dovetailed program enumeration.

Programs run in canonical order; each halting output of a length-``k``
program is greedily matched into the level-``k`` layered graph (once per
level), defining an injective map from right vertices to outputs.  The
list for a string ``x`` is then a pure neighbor enumeration -- one entry
per adjacency slot of ``x`` in every level graph up to ``len(x)``, plus
an identity escape entry carrying ``x`` itself -- and is computable
without ever running the dovetail.

A level-``k`` right index fits in ``k + 1`` bits (the level has
``2^(k+1) - 1`` right vertices), which is what makes a matched entry a
near-optimal description: its core is one bit longer than the program
that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .construct import BaseOptions, DEFAULT_BASE, LayeredGraph, build_matching_graph
from .errors import ConstructionError, ParameterError
from .machines import ToyMachine, complexity, complexity_cond, programs
from .matcher import Matcher
from .graphs import neighbors

LEVEL_TAG = "EOMT"
IDENTITY_TAG = "ID"
ADVICE_MAX_BITS = 4
_PAD_FIELD_BITS = 3


@dataclass(frozen=True)
class LevelEntry:
    """A candidate description: right vertex ``index`` of one level graph."""

    level: int
    index: int

    @property
    def core_length(self) -> int:
        return self.level + 1


@dataclass(frozen=True)
class IdentityEntry:
    """The escape entry: the string carried verbatim."""

    bits: str

    @property
    def core_length(self) -> int:
        return len(self.bits)


ListEntry = Union[LevelEntry, IdentityEntry]


@dataclass
class DovetailMap:
    """Frozen outcome of one dovetail run (one machine, one condition)."""

    machine: ToyMachine
    k_max: int
    domain_hi: int
    seed: int
    condition: str | None
    graphs: dict[int, LayeredGraph]
    levels: dict[int, dict[int, str]] = field(default_factory=dict)
    matched_at: dict[int, dict[str, int]] = field(default_factory=dict)

    @property
    def built_levels(self) -> list[int]:
        return sorted(self.graphs)


def level_graphs(
    k_max: int, domain_hi: int, *, seed: int = 0, base: BaseOptions = DEFAULT_BASE
) -> dict[int, LayeredGraph]:
    """Level graphs for every program length that can own matches.

    Levels above ``domain_hi`` would only receive outputs longer than the
    domain cap, so they are never built.  One root seed serves all levels,
    which keeps shared sub-constructions identical across them.
    """
    return {
        k: build_matching_graph(k, domain_hi, seed=seed, base=base)
        for k in range(0, min(k_max, domain_hi) + 1)
    }


def build_dovetail(
    machine: ToyMachine,
    k_max: int,
    domain_hi: int,
    *,
    seed: int = 0,
    condition: str | None = None,
    base: BaseOptions = DEFAULT_BASE,
    graphs: dict[int, LayeredGraph] | None = None,
) -> DovetailMap:
    """Enumerate programs up to length ``k_max`` and match their outputs.

    An output is skipped when it is shorter than its program (outside the
    level domain), longer than the domain cap, or already matched at that
    level.  Level ``k`` sees at most ``2^k`` distinct outputs -- one per
    program of length ``k`` -- so greedy matching cannot fail; a matching
    failure here is an invariant violation, not a recoverable error.
    """
    if graphs is None:
        graphs = level_graphs(k_max, domain_hi, seed=seed, base=base)
    matchers = {k: Matcher(g) for k, g in graphs.items()}
    levels: dict[int, dict[int, str]] = {k: {} for k in graphs}
    matched: dict[int, dict[str, int]] = {k: {} for k in graphs}
    for p in programs(k_max):
        x = machine.decode(p) if condition is None else machine.decode_cond(p, condition)
        if x is None:
            continue
        k = len(p)
        if k not in graphs:
            continue
        if not k <= len(x) <= domain_hi:
            continue
        if x in matched[k]:
            continue
        z = matchers[k].match_vertex(x)
        levels[k][z] = x
        matched[k][x] = z
    return DovetailMap(
        machine=machine,
        k_max=k_max,
        domain_hi=domain_hi,
        seed=seed,
        condition=condition,
        graphs=graphs,
        levels=levels,
        matched_at=matched,
    )


class ConditionalDovetail:
    """Shared level graphs with one dovetail run per condition string.

    Graphs depend only on (levels, domain cap, seed), so a single build
    serves every condition; each condition gets fresh matcher state, which
    keeps every level within its arrival budget.
    """

    def __init__(self, machine: ToyMachine, k_max: int, domain_hi: int, *, seed: int = 0, base: BaseOptions = DEFAULT_BASE):
        self.machine = machine
        self.k_max = k_max
        self.domain_hi = domain_hi
        self.seed = seed
        self.graphs = level_graphs(k_max, domain_hi, seed=seed, base=base)
        self._cache: dict[str, DovetailMap] = {}

    def for_condition(self, y: str) -> DovetailMap:
        dm = self._cache.get(y)
        if dm is None:
            dm = build_dovetail(
                self.machine, self.k_max, self.domain_hi, seed=self.seed, condition=y, graphs=self.graphs
            )
            self._cache[y] = dm
        return dm


def list_size(x: str, dm: DovetailMap) -> int:
    """Exactly one entry per adjacency slot per level up to len(x), plus one."""
    return 1 + sum(dm.graphs[k].degree_of(x) for k in dm.built_levels if k <= len(x))


def list_for(x: str, dm: DovetailMap) -> list[ListEntry]:
    """The candidate list for ``x``: pure neighbor enumeration, no dovetail
    lookups; slot duplicates are kept so the list size is exactly
    ``1 + sum of degrees``."""
    if len(x) > dm.domain_hi:
        raise ParameterError(f"{x!r} longer than the domain cap {dm.domain_hi}")
    entries: list[ListEntry] = []
    for k in dm.built_levels:
        if k > len(x):
            break
        flat = dm.graphs[k].as_bigraph()
        entries.extend(LevelEntry(k, z) for z in neighbors(flat, x))
    entries.append(IdentityEntry(x))
    return entries


def decode_entry(entry: ListEntry, dm: DovetailMap) -> str | None:
    if isinstance(entry, IdentityEntry):
        return entry.bits
    return dm.levels.get(entry.level, {}).get(entry.index)


def _complexity_for(dm: DovetailMap, x: str, p_max: int | None) -> int:
    cap = dm.k_max if p_max is None else p_max
    if dm.condition is None:
        c = complexity(dm.machine, x, cap)
    else:
        c = complexity_cond(dm.machine, x, dm.condition, cap)
    if c is None:
        raise ParameterError(f"complexity of {x!r} undefined within cap {cap}")
    return c


@dataclass(frozen=True)
class ShortlistReport:
    x: str
    complexity: int
    list_size: int
    best_core: int
    passed: bool
    via_identity: bool


def verify_shortlist(
    x: str, dm: DovetailMap, *, p_max: int | None = None, known_complexity: int | None = None
) -> ShortlistReport:
    """Does the list for ``x`` contain a near-optimal description?

    Compressible strings (minimum program length at most ``len(x)``) must
    have an entry decoding to ``x`` whose core is at most one bit longer
    than optimal; all other strings are covered by the identity entry.
    ``known_complexity`` skips the brute-force enumeration when the caller
    already swept it.
    """
    c = known_complexity if known_complexity is not None else _complexity_for(dm, x, p_max)
    matches = [
        (k, dm.matched_at[k][x])
        for k in dm.built_levels
        if k <= len(x) and x in dm.matched_at[k]
    ]
    best_core = min([k + 1 for k, _ in matches] + [len(x)])
    if c <= len(x):
        passed = any(k + 1 <= c + 1 for k, _ in matches) or len(x) <= c + 1
        via_identity = not matches
    else:
        passed = True
        via_identity = True
    return ShortlistReport(
        x=x,
        complexity=c,
        list_size=list_size(x, dm),
        best_core=best_core,
        passed=passed,
        via_identity=via_identity,
    )


def locate_description(x: str, dm: DovetailMap, *, p_max: int | None = None) -> int:
    """Position of the first qualifying entry in ``list_for(x)``.

    The position index always fits in ``ceil(log2(list size))`` bits, the
    realized advice cost of pointing into the list.
    """
    c = _complexity_for(dm, x, p_max)
    for idx, entry in enumerate(list_for(x, dm)):
        if decode_entry(entry, dm) == x and entry.core_length <= c + 1:
            return idx
    raise ConstructionError(f"no qualifying entry for {x!r}")


def conditional_description(
    x: str, y: str, dm_y: DovetailMap, *, p_max: int | None = None
) -> tuple[str, str]:
    """An exactly-optimal-length conditional description plus fixed advice.

    When ``x`` was matched at its optimal level ``c``, the description is
    the matched index written in ``c + 1`` bits with the last bit moved
    into the advice.  Otherwise (optimal program longer than ``x``), the
    description is ``x`` zero-padded to length ``c`` and the advice records
    the pad width.  Advice never exceeds ``ADVICE_MAX_BITS`` bits.
    """
    if dm_y.condition != y:
        raise ParameterError("dovetail map was built for a different condition")
    c = _complexity_for(dm_y, x, p_max)
    if c <= len(x):
        zmap = dm_y.matched_at.get(c, {})
        if x not in zmap:
            raise ConstructionError(f"no qualifying entry for {x!r} at level {c}")
        bits = format(zmap[x], f"0{c + 1}b")
        return bits[:c], "0" + bits[c]
    pad = c - len(x)
    if pad >= 2**_PAD_FIELD_BITS:
        raise ConstructionError(f"pad width {pad} exceeds the advice format")
    return x + "0" * pad, "1" + format(pad, f"0{_PAD_FIELD_BITS}b")


def reconstruct(p: str, advice: str, y: str, dm_y: DovetailMap) -> str:
    """Invert :func:`conditional_description` using the condition's map."""
    if dm_y.condition != y:
        raise ParameterError("dovetail map was built for a different condition")
    if not advice:
        raise ParameterError("empty advice")
    if advice[0] == "0":
        z = int(p + advice[1], 2)
        return dm_y.levels[len(p)][z]
    pad = int(advice[1 : 1 + _PAD_FIELD_BITS], 2)
    return p[: len(p) - pad] if pad else p


def serialize_dovetail(dm: DovetailMap) -> str:
    """LEVEL sections with one "<index> <output>" line per matched vertex."""
    lines = []
    for k in dm.built_levels:
        lines.append(f"LEVEL {k}")
        for z in sorted(dm.levels[k]):
            out = dm.levels[k][z]
            lines.append(f"{z} {out if out else '-'}")
    return "\n".join(lines) + "\n"


def parse_dovetail(text: str) -> dict[int, dict[int, str]]:
    levels: dict[int, dict[int, str]] = {}
    current: dict[int, str] | None = None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("LEVEL "):
            current = {}
            levels[int(line.split()[1])] = current
            continue
        if current is None:
            raise ParameterError("entry before any LEVEL section")
        z_s, out = line.split()
        current[int(z_s)] = "" if out == "-" else out
    return levels


def format_entry(entry: ListEntry) -> str:
    """One list line: level entries as tag/level/index, identity as tag/bits."""
    if isinstance(entry, IdentityEntry):
        return f"{IDENTITY_TAG} {entry.bits if entry.bits else '-'} corelen={entry.core_length}"
    return f"{LEVEL_TAG} {entry.level} {entry.index} corelen={entry.core_length}"


def parse_entry(line: str) -> ListEntry:
    parts = line.split()
    if parts[0] == IDENTITY_TAG:
        bits = "" if parts[1] == "-" else parts[1]
        return IdentityEntry(bits)
    if parts[0] == LEVEL_TAG:
        return LevelEntry(int(parts[1]), int(parts[2]))
    raise ParameterError(f"malformed list entry {line!r}")
