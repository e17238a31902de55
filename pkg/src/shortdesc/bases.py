"""Property-verified base dispersers.

The layered constructions only ever consume the *coverage property* of
their base graphs, so the bases are pluggable: a complete bipartite graph
(always valid), a seed-keyed random graph that is verified and re-drawn
on failure, or a canonical-order exhaustive search over all assignments.

Random neighbors come from a keyed hash of (seed, vertex, slot), which
makes every graph a pure function of its spec: identical specs always
materialize identically, across processes and platforms.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import CapacityError, ConstructionError, ParameterError
from .graphs import BiGraph, LeftDomain
from .verify import as_fraction, check_disperser

STRATEGIES = ("random-verified", "exhaustive-search", "complete")
RESEED_RETRIES = 64
BUILD_TRIALS = 200
BUILD_EXHAUSTIVE_BOUND = 50_000
SEARCH_BOUND = 2_000_000
DEGREE_CAP = 128

_MASK64 = (1 << 64) - 1


def derive_seed(root: int, *parts) -> int:
    """A stable 64-bit child seed for a named sub-construction."""
    data = "/".join(str(p) for p in parts).encode()
    digest = hashlib.blake2b(data, digest_size=8, key=(root & _MASK64).to_bytes(8, "big"))
    return int.from_bytes(digest.digest(), "big")


@dataclass(frozen=True)
class BaseSpec:
    """Parameters of one base disperser.

    ``K`` is the dispersion threshold, ``eps`` the allowed miss fraction.
    The ``complete`` strategy forces ``degree == right_size``.
    """

    domain: LeftDomain
    K: int
    eps: Fraction
    degree: int
    right_size: int
    seed: int
    strategy: str = "random-verified"

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ParameterError(f"unknown strategy {self.strategy!r}")
        if self.K < 1 or self.degree < 1 or self.right_size < 1:
            raise ParameterError("K, degree and right_size must be positive")
        if self.strategy == "complete" and self.degree != self.right_size:
            raise ParameterError("complete strategy forces degree == right_size")

    def to_config(self) -> str:
        lines = [
            f"lo={self.domain.lo}",
            f"hi={self.domain.hi}",
            f"K={self.K}",
            f"eps={self.eps}",
            f"degree={self.degree}",
            f"right={self.right_size}",
            f"seed={self.seed}",
            f"strategy={self.strategy}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_config(cls, text: str) -> "BaseSpec":
        values = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
        return cls(
            domain=LeftDomain(int(values["lo"]), int(values["hi"])),
            K=int(values["K"]),
            eps=as_fraction(values["eps"]),
            degree=int(values["degree"]),
            right_size=int(values["right"]),
            seed=int(values["seed"]),
            strategy=values.get("strategy", "random-verified"),
        )


def _hash_slot(seed: int, x: str, i: int, right_size: int) -> int:
    digest = hashlib.blake2b(
        f"{x}:{i}".encode(), digest_size=8, key=(seed & _MASK64).to_bytes(8, "big")
    )
    return int.from_bytes(digest.digest(), "big") % right_size


def _random_graph(spec: BaseSpec, seed: int) -> BiGraph:
    degree, right = spec.degree, spec.right_size

    def degree_of(x: str) -> int:
        return degree

    def neighbor_of(x: str, i: int) -> int:
        return _hash_slot(seed, x, i, right)

    def neighbors_of(x: str) -> Sequence[int]:
        return [_hash_slot(seed, x, i, right) for i in range(degree)]

    return BiGraph(
        spec.domain,
        right,
        degree_of,
        neighbor_of,
        neighbors_of,
        meta={"kind": "random-base", "spec": spec, "draw_seed": seed},
    )


def _complete_graph(spec: BaseSpec) -> BiGraph:
    slots = tuple(range(spec.right_size))
    return BiGraph(
        spec.domain,
        spec.right_size,
        degree_of=lambda x: spec.right_size,
        neighbor_of=lambda x, i: i,
        neighbors_of=lambda x: slots,
        meta={"kind": "complete-base", "spec": spec},
    )


def build_base(
    spec: BaseSpec,
    *,
    trials: int = BUILD_TRIALS,
    exhaustive_bound: int = BUILD_EXHAUSTIVE_BOUND,
    retries: int = RESEED_RETRIES,
) -> BiGraph:
    """Construct a graph passing ``check_disperser(spec.K, spec.eps)``.

    ``random-verified`` re-draws with seed+1 on a failed check, at most
    ``retries`` times.  ``exhaustive-search`` walks all neighbor
    assignments in canonical order and returns the first that passes.
    A complete graph needs no check: every vertex alone covers the whole
    right side.
    """
    if spec.K > spec.domain.size():
        raise ParameterError(f"K={spec.K} exceeds domain size {spec.domain.size()}")

    if spec.strategy == "complete":
        return _complete_graph(spec)

    if spec.strategy == "random-verified":
        witness = None
        for attempt in range(retries):
            g = _random_graph(spec, spec.seed + attempt)
            report = check_disperser(
                g,
                spec.K,
                spec.eps,
                exhaustive_bound=exhaustive_bound,
                trials=trials,
                seed=derive_seed(spec.seed + attempt, "check"),
            )
            if report.passed:
                meta = dict(g.meta)
                meta["attempts"] = attempt + 1
                meta["check"] = report
                return BiGraph(
                    g.domain, g.right_size, g.degree_of, g.neighbor_of, g.neighbors_of, meta=meta
                )
            witness = report.counterexample
        raise ConstructionError(
            f"no random graph passed after {retries} reseeds for {spec}", witness=witness
        )

    # exhaustive-search
    strings = list(spec.domain.strings())
    count = (spec.right_size**spec.degree) ** len(strings)
    if count > SEARCH_BOUND:
        raise CapacityError(f"{count} candidate graphs exceed search bound {SEARCH_BOUND}")
    witness = None
    per_vertex = list(product(range(spec.right_size), repeat=spec.degree))
    for assignment in product(per_vertex, repeat=len(strings)):
        table = dict(zip(strings, assignment))

        def degree_of(x: str, _t=table) -> int:
            return len(_t[x])

        def neighbor_of(x: str, i: int, _t=table) -> int:
            return _t[x][i]

        g = BiGraph(
            spec.domain,
            spec.right_size,
            degree_of,
            neighbor_of,
            lambda x, _t=table: _t[x],
            meta={"kind": "searched-base", "spec": spec, "table": table},
        )
        report = check_disperser(
            g, spec.K, spec.eps, exhaustive_bound=exhaustive_bound, trials=trials
        )
        if report.passed:
            return g
        witness = report.counterexample
    raise ConstructionError(f"no graph exists for {spec}", witness=witness)


_AUTO_CACHE: dict[tuple, BiGraph] = {}


def auto_base(
    domain: LeftDomain,
    K: int,
    eps,
    right_size: int,
    seed: int,
    *,
    degree: int | None = None,
    strategy: str = "auto",
    trials: int = BUILD_TRIALS,
    exhaustive_bound: int = BUILD_EXHAUSTIVE_BOUND,
    degree_cap: int = DEGREE_CAP,
) -> BiGraph:
    """Base-graph entry point used by the builders.

    With no fixed degree, tries random-verified graphs of degree 1, 2, 4, ...
    until one verifies, and falls back to the complete graph when the cap
    is hit (small slices rarely support sparse dispersion).  Results are
    memoized: the construction is a pure function of its arguments.
    """
    eps = as_fraction(eps)
    key = (domain.lo, domain.hi, K, eps, right_size, degree, seed, strategy, trials, exhaustive_bound, degree_cap)
    cached = _AUTO_CACHE.get(key)
    if cached is not None:
        return cached

    if strategy == "complete":
        graph = build_base(BaseSpec(domain, K, eps, right_size, right_size, seed, "complete"))
    elif strategy != "auto":
        spec = BaseSpec(domain, K, eps, degree or right_size, right_size, seed, strategy)
        graph = build_base(spec, trials=trials, exhaustive_bound=exhaustive_bound)
    else:
        graph = None
        if degree is not None:
            candidates = [degree]
        else:
            candidates = []
            d = 1
            while d <= min(degree_cap, right_size):
                candidates.append(d)
                d *= 2
        # A few reseeds per rung; hopeless degrees fail their first subsets fast.
        rung_retries = 8 if len(candidates) > 1 else RESEED_RETRIES
        for d in candidates:
            try:
                graph = build_base(
                    BaseSpec(domain, K, eps, d, right_size, seed, "random-verified"),
                    trials=trials,
                    exhaustive_bound=exhaustive_bound,
                    retries=rung_retries,
                )
                break
            except ConstructionError:
                continue
        if graph is None:
            graph = build_base(BaseSpec(domain, K, eps, right_size, right_size, seed, "complete"))

    _AUTO_CACHE[key] = graph
    return graph
