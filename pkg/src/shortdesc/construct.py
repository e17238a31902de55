"""The named constructions.

* :func:`build_disperser` -- a window-domain graph in which every left
  subset of size ``2^k`` reaches at least ``2^k`` of its ``2^(k+1)`` right
  vertices, made by cloning a verified base until its right side is at
  least twice the target and folding into balanced classes.
* :func:`build_expander` -- a disjoint union of dyadic blocks giving every
  subset of size at most ``2^k`` at least ``|S|`` neighbors.
* :func:`build_composed_disperser` -- the tail-domain graph: each string
  length gets its own expander into a private middle block, the union of
  middle blocks is dispersed into the final right side, and strings longer
  than ``2^k`` shortcut to a fixed set of right vertices.
* :func:`build_matching_graph` -- the layered graph the greedy online
  matcher runs on: one universal vertex plus one composed level per
  ``i < k``, numbered globally by layer offset.

All builders are deterministic in (parameters, seed): per-layer and
per-length seeds hash off the root seed, so rebuilds are stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .bases import BUILD_EXHAUSTIVE_BOUND, BUILD_TRIALS, DEGREE_CAP, auto_base, derive_seed
from .combinators import clone_double, compose, disjoint_union, fold
from .errors import ConstructionError, ParameterError
from .graphs import (
    FORMAT_HEADER,
    BiGraph,
    LeftDomain,
    from_table,
    materialize,
    neighbors,
    parse_graph,
)
from .verify import as_fraction, check_disperser, check_expander

LAYERED_HEADER = "LAYERED"


@dataclass(frozen=True)
class BaseOptions:
    """How builders should obtain their base graphs."""

    strategy: str = "auto"
    degree: int | None = None
    trials: int = BUILD_TRIALS
    exhaustive_bound: int = BUILD_EXHAUSTIVE_BOUND
    degree_cap: int = DEGREE_CAP
    verify_outputs: bool = True
    build_retries: int = 4


DEFAULT_BASE = BaseOptions()

# Builders are pure functions of (parameters, seed), so results are memoized;
# levels sharing a root seed then share their per-length sub-constructions.
_BUILD_CACHE: dict[tuple, BiGraph] = {}


def _make_base(domain: LeftDomain, K: int, eps, right_size: int, seed: int, opts: BaseOptions) -> BiGraph:
    return auto_base(
        domain,
        K,
        eps,
        right_size,
        seed,
        degree=opts.degree,
        strategy=opts.strategy,
        trials=opts.trials,
        exhaustive_bound=opts.exhaustive_bound,
        degree_cap=opts.degree_cap,
    )


def _cheap_to_verify(domain: LeftDomain, K: int) -> bool:
    return K <= 16 and domain.size() <= 4096


def _folded_disperser(
    domain: LeftDomain, K: int, eps, target: int, seed: int, opts: BaseOptions, floor: int
) -> BiGraph:
    """Clone a verified base until its right side is at least twice the
    target, fold into ``target`` balanced classes, and confirm that every
    size-``K`` subset still reaches at least ``floor`` classes."""
    final_eps = Fraction(target - floor, target)
    for attempt in range(opts.build_retries):
        g = _make_base(domain, K, eps, target, derive_seed(seed, "base", attempt), opts)
        while g.right_size < 2 * target:
            g = clone_double(g)
        folded = fold(g, target)
        if opts.verify_outputs and _cheap_to_verify(domain, K):
            report = check_disperser(
                folded,
                K,
                final_eps,
                exhaustive_bound=opts.exhaustive_bound,
                trials=opts.trials,
                seed=derive_seed(seed, "final-check", attempt),
            )
            if not report.passed:
                continue
        meta = dict(folded.meta)
        meta.update({"target": target, "floor": floor, "attempt": attempt})
        return BiGraph(
            folded.domain,
            folded.right_size,
            folded.degree_of,
            folded.neighbor_of,
            folded.neighbors_of,
            meta=meta,
        )
    raise ConstructionError(f"folded disperser failed after {opts.build_retries} rebuilds")


def build_disperser(
    domain: LeftDomain,
    k: int,
    *,
    seed: int = 0,
    delta=None,
    base: BaseOptions = DEFAULT_BASE,
) -> BiGraph:
    """Right side ``2^(k+1)``; every subset of ``2^k`` strings reaches ``2^k``
    of it.

    With ``delta`` the right side shrinks to ``round(2^(k+delta))`` and the
    base miss fraction widens to ``(2/3) * (1 - 2^-delta)``; ``delta=1``
    reproduces the default.
    """
    if k < 0:
        raise ParameterError("k must be nonnegative")
    if domain.size() < 2**k:
        raise ParameterError(f"domain smaller than 2^{k}")
    cache_key = ("disperser", domain, k, seed, None if delta is None else as_fraction(delta), base)
    cached = _BUILD_CACHE.get(cache_key)
    if cached is not None:
        return cached
    if delta is None:
        target = 2 ** (k + 1)
        eps = Fraction(1, 3)
    else:
        delta = as_fraction(delta)
        if delta <= 0:
            raise ParameterError("delta must be positive")
        if delta.denominator == 1:
            target = 2 ** (k + delta.numerator)
            shrink = Fraction(1, 2**delta.numerator)
        else:
            target = round(2**k * 2 ** float(delta))
            shrink = Fraction(2 ** -float(delta)).limit_denominator(10**6)
        eps = Fraction(2, 3) * (1 - shrink)
        if target <= 2**k:
            raise ParameterError(f"delta={delta} leaves no room above 2^{k}")
    g = _folded_disperser(domain, 2**k, eps, target, derive_seed(seed, "disperser", k), base, 2**k)
    meta = dict(g.meta)
    meta.update({"kind": "disperser", "k": k, "delta": delta, "seed": seed})
    out = BiGraph(g.domain, g.right_size, g.degree_of, g.neighbor_of, g.neighbors_of, meta=meta)
    _BUILD_CACHE[cache_key] = out
    return out


def build_expander(
    domain: LeftDomain, k: int, *, seed: int = 0, base: BaseOptions = DEFAULT_BASE
) -> BiGraph:
    """Right side ``2^(k+3) - 4``; every subset of at most ``2^k`` strings
    reaches at least as many right vertices as it has members.

    Block ``i`` (sized ``2^(i+2)``) gives any ``2^i`` strings at least
    ``2^(i+1)`` neighbors; a subset with ``2^i <= |S| < 2^(i+1)`` wins
    inside its own block.
    """
    if k < 0:
        raise ParameterError("k must be nonnegative")
    if domain.size() < 2**k:
        raise ParameterError(f"domain smaller than 2^{k}")
    cache_key = ("expander", domain, k, seed, base)
    cached = _BUILD_CACHE.get(cache_key)
    if cached is not None:
        return cached
    root = derive_seed(seed, "expander", k)
    parts = []
    for i in range(k + 1):
        part = _folded_disperser(
            domain,
            2**i,
            Fraction(1, 3),
            2 ** (i + 2),
            derive_seed(root, "block", i),
            base,
            2 ** (i + 1),
        )
        parts.append(part)
    g = disjoint_union(parts)
    if base.verify_outputs and _cheap_to_verify(domain, 2**k):
        report = check_expander(
            g,
            2**k,
            1,
            exhaustive_bound=base.exhaustive_bound,
            trials=base.trials,
            seed=derive_seed(root, "final-check"),
        )
        if not report.passed:
            raise ConstructionError("expander output failed its check", witness=report.counterexample)
    meta = dict(g.meta)
    meta.update({"kind": "expander", "k": k, "seed": seed})
    out = BiGraph(g.domain, g.right_size, g.degree_of, g.neighbor_of, g.neighbors_of, meta=meta)
    _BUILD_CACHE[cache_key] = out
    return out


def build_composed_disperser(
    domain: LeftDomain, k: int, *, seed: int = 0, base: BaseOptions = DEFAULT_BASE
) -> BiGraph:
    """Right side ``2^(k+1)`` over a tail domain (every length from
    ``domain.lo`` up to the cap); every subset of ``2^k`` strings reaches
    ``2^k`` right vertices.

    Short strings route through per-length expanders into a shared middle
    set which one disperser then compresses; strings longer than ``2^k``
    take the first ``2^k`` right vertices directly, so any one of them
    already meets the subset quota.
    """
    if k < 0:
        raise ParameterError("k must be nonnegative")
    if domain.lo < k:
        raise ParameterError(f"domain must start at length {k} or above")
    cache_key = ("composed", domain, k, seed, base)
    cached = _BUILD_CACHE.get(cache_key)
    if cached is not None:
        return cached
    root = derive_seed(seed, "composed", k)
    right_size = 2 ** (k + 1)
    long_cut = 2**k
    shortcut = tuple(range(2**k))
    mid_hi = min(long_cut, domain.hi)
    lengths = list(range(domain.lo, mid_hi + 1))

    if not lengths:
        # Every covered length exceeds 2^k: the shortcut serves everyone.
        out = BiGraph(
            domain,
            right_size,
            degree_of=lambda x: 2**k,
            neighbor_of=lambda x, i: i,
            neighbors_of=lambda x: shortcut,
            meta={"kind": "composed", "k": k, "middle_size": 0, "seed": seed},
        )
        _BUILD_CACHE[cache_key] = out
        return out

    expanders = {
        n: build_expander(LeftDomain(n, n), k, seed=derive_seed(root, "slice", n), base=base)
        for n in lengths
    }
    offsets = {}
    middle_size = 0
    for n in lengths:
        offsets[n] = middle_size
        middle_size += expanders[n].right_size

    h = 0
    while 2 ** (h + 1) - 1 < middle_size:
        h += 1
    middle_domain = LeftDomain(0, h)
    padded = middle_domain.size()

    def a_degree(x: str) -> int:
        exp = expanders.get(len(x))
        return exp.degree_of(x) if exp is not None else 0

    def a_neighbor(x: str, i: int) -> int:
        exp = expanders[len(x)]
        return offsets[len(x)] + exp.neighbor_of(x, i)

    def a_neighbors(x: str) -> Sequence[int]:
        exp = expanders.get(len(x))
        if exp is None:
            return ()
        off = offsets[len(x)]
        return [off + v for v in neighbors(exp, x)]

    spread = BiGraph(domain, padded, a_degree, a_neighbor, a_neighbors, meta={"kind": "spread"})
    squeeze = build_disperser(middle_domain, k, seed=derive_seed(root, "middle"), base=base)
    two_stage = compose(spread, squeeze)

    def degree_of(x: str) -> int:
        return 2**k if len(x) > long_cut else two_stage.degree_of(x)

    def neighbor_of(x: str, i: int) -> int:
        return i if len(x) > long_cut else two_stage.neighbor_of(x, i)

    def neighbors_of(x: str) -> Sequence[int]:
        return shortcut if len(x) > long_cut else two_stage.neighbors_of(x)

    meta = {
        "kind": "composed",
        "k": k,
        "seed": seed,
        "middle_size": middle_size,
        "middle_padded": padded,
        "expanders": expanders,
        "middle_offsets": offsets,
        "middle_disperser": squeeze,
        "two_stage": two_stage,
        "long_cut": long_cut,
    }
    out = BiGraph(domain, right_size, degree_of, neighbor_of, neighbors_of, meta=meta)
    if base.verify_outputs and _cheap_to_verify(domain, 2**k) and comb(domain.size(), 2**k) <= base.exhaustive_bound:
        report = check_disperser(
            out,
            2**k,
            Fraction(right_size - 2**k, right_size),
            exhaustive_bound=base.exhaustive_bound,
            trials=base.trials,
            seed=derive_seed(root, "final-check"),
        )
        if not report.passed:
            raise ConstructionError("composed output failed its check", witness=report.counterexample)
    _BUILD_CACHE[cache_key] = out
    return out


def universal_layer(domain: LeftDomain) -> BiGraph:
    """A single right vertex adjacent to every domain string."""
    return BiGraph(
        domain,
        1,
        degree_of=lambda x: 1,
        neighbor_of=lambda x, i: 0,
        neighbors_of=lambda x: (0,),
        meta={"kind": "universal"},
    )


@dataclass
class LayeredGraph:
    """Levels ``-1, 0, ..., k-1`` laid out over one global right numbering.

    Layer ``-1`` is the universal single vertex at global index 0; layer
    ``i`` has right size ``2^(i+1)`` at offset ``2^(i+1) - 1``, for a total
    right side of ``2^(k+1) - 1``.  Treat instances as immutable; the only
    mutable field is an internal per-vertex neighbor cache.
    """

    k: int
    domain: LeftDomain
    layers: tuple[tuple[int, BiGraph], ...]
    seed: int = 0
    _info: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        offsets = {}
        pos = 0
        for layer_id, g in self.layers:
            offsets[layer_id] = pos
            pos += g.right_size
        self._offsets = offsets
        self._total = pos

    @property
    def right_size(self) -> int:
        return self._total

    def layer_offset(self, layer_id: int) -> int:
        return self._offsets[layer_id]

    def layer_info(self, x: str, layer_id: int) -> tuple[int, int]:
        """(bitmask of distinct global neighbors, slot degree) for one layer."""
        key = (x, layer_id)
        cached = self._info.get(key)
        if cached is None:
            g = dict(self.layers)[layer_id]
            off = self._offsets[layer_id]
            row = neighbors(g, x)
            mask = 0
            for v in row:
                mask |= 1 << (off + v)
            cached = (mask, len(row))
            self._info[key] = cached
        return cached

    def degree_of(self, x: str) -> int:
        return sum(g.degree_of(x) for _, g in self.layers)

    def as_bigraph(self) -> BiGraph:
        """The flat view: slots concatenated in layer order (-1 first)."""
        layers = self.layers
        offsets = self._offsets

        def degree_of(x: str) -> int:
            return sum(g.degree_of(x) for _, g in layers)

        def neighbor_of(x: str, i: int) -> int:
            rest = i
            for layer_id, g in layers:
                d = g.degree_of(x)
                if rest < d:
                    return offsets[layer_id] + g.neighbor_of(x, rest)
                rest -= d
            raise IndexError(f"slot {i} out of range for {x!r}")

        def neighbors_of(x: str) -> Sequence[int]:
            out: list[int] = []
            for layer_id, g in layers:
                off = offsets[layer_id]
                out.extend(off + v for v in neighbors(g, x))
            return out

        return BiGraph(
            self.domain,
            self._total,
            degree_of,
            neighbor_of,
            neighbors_of,
            meta={"kind": "layered-flat", "layered": self},
        )


def build_matching_graph(
    k: int, domain_hi: int, *, seed: int = 0, base: BaseOptions = DEFAULT_BASE
) -> LayeredGraph:
    """The layered graph admitting greedy online matching up to ``2^k``
    arrivals: one universal vertex plus composed levels ``0 .. k-1`` over
    the shared domain of strings with length in ``[k, domain_hi]``."""
    if k < 0:
        raise ParameterError("k must be nonnegative")
    if domain_hi < k:
        raise ParameterError(f"domain cap {domain_hi} below k={k}")
    domain = LeftDomain(k, domain_hi)
    layers: list[tuple[int, BiGraph]] = [(-1, universal_layer(domain))]
    for i in range(k):
        layers.append(
            (i, build_composed_disperser(domain, i, seed=derive_seed(seed, "layer", i), base=base))
        )
    return LayeredGraph(k=k, domain=domain, layers=tuple(layers), seed=seed)


def serialize_layered(lg: LayeredGraph, max_vertices: int | None = None) -> str:
    """Graph file format plus a LAYERED header section listing layer offsets."""
    flat = lg.as_bigraph()
    rows = materialize(flat) if max_vertices is None else materialize(flat, max_vertices)
    lines = [FORMAT_HEADER, f"{LAYERED_HEADER} {lg.k}"]
    for layer_id, g in lg.layers:
        lines.append(f"layer {layer_id} {lg.layer_offset(layer_id)} {g.right_size}")
    lines.append(f"left {lg.domain.lo} {lg.domain.hi}")
    lines.append(f"right {flat.right_size}")
    from .graphs import _format_row

    lines.extend(_format_row(x, nbrs) for x, nbrs in rows)
    return "\n".join(lines) + "\n"


def parse_layered(text: str) -> LayeredGraph:
    """Rebuild a LayeredGraph from its file form (bit-exact round-trip)."""
    from .graphs import _parse_row

    lines = text.splitlines()
    if len(lines) < 2 or lines[0] != FORMAT_HEADER:
        raise ParameterError("not a graph file (missing header)")
    head = lines[1].split()
    if len(head) != 2 or head[0] != LAYERED_HEADER:
        raise ParameterError("not a layered graph file")
    k = int(head[1])
    idx = 2
    layer_rows = []
    while idx < len(lines) and lines[idx].startswith("layer "):
        _, lid, off, size = lines[idx].split()
        layer_rows.append((int(lid), int(off), int(size)))
        idx += 1
    try:
        _, lo_s, hi_s = lines[idx].split()
        _, right_s = lines[idx + 1].split()
    except (ValueError, IndexError):
        raise ParameterError("malformed layered file header") from None
    domain = LeftDomain(int(lo_s), int(hi_s))
    total = int(right_s)
    if layer_rows and layer_rows[-1][1] + layer_rows[-1][2] != total:
        raise ParameterError("layer offsets do not tile the right side")
    rows = [_parse_row(line) for line in lines[idx + 2 :] if line]
    expected = list(domain.strings())
    if [x for x, _ in rows] != expected:
        raise ParameterError("graph rows must cover the domain in canonical order")

    layers = []
    for lid, off, size in layer_rows:
        table = {}
        for x, nbrs in rows:
            table[x] = [v - off for v in nbrs if off <= v < off + size]
        layers.append((lid, from_table(domain, size, table)))
    return LayeredGraph(k=k, domain=domain, layers=tuple(layers))


def load_graph_text(text: str) -> BiGraph | LayeredGraph:
    """Parse either graph file flavor, dispatching on the second line."""
    lines = text.splitlines()
    if len(lines) >= 2 and lines[1].startswith(LAYERED_HEADER):
        return parse_layered(text)
    return parse_graph(text)
