"""Ground-truth checks: coverage properties, an exact matching game, and
the minimal-right-side experiment.

The coverage checks are exhaustive whenever the number of relevant
subsets fits under a bound, and seeded-sampled otherwise.  A sampled
check never reports a false failure: every counterexample is re-checked
directly against the neighbor function before it is returned.

The matching game solver is exact minimax with memoization on the raw
(used-right-vertices, presented-left-vertices) state; no symmetry
reduction is attempted.  Checks are pure; a solver instance must not be
shared between threads, but independent solves may run concurrently.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Sequence

from .errors import CapacityError, ParameterError
from .graphs import BiGraph, LeftDomain, bit_strings, from_table, neighbor_set, neighbors

EXHAUSTIVE_BOUND = 1_000_000
SAMPLE_TRIALS = 10_000
MASK_DOMAIN_BOUND = 8192
GAME_STATE_BOUND = 10_000_000


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    return Fraction(str(value))


def _ceil_frac(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    counterexample: tuple[str, ...] | None
    mode: str
    checked_count: int
    note: str = ""


def _mask_table(g: BiGraph, strings: Sequence[str]) -> dict[str, int] | None:
    if len(strings) > MASK_DOMAIN_BOUND:
        return None
    table = {}
    for x in strings:
        m = 0
        for v in neighbors(g, x):
            m |= 1 << v
        table[x] = m
    return table


def _cover_count(g: BiGraph, subset: Sequence[str], masks: dict[str, int] | None) -> int:
    if masks is not None:
        m = 0
        for x in subset:
            m |= masks[x]
        return m.bit_count()
    return len(neighbor_set(g, subset))


def _canonical(subset: Sequence[str]) -> tuple[str, ...]:
    return tuple(sorted(subset, key=lambda s: (len(s), s)))


def _confirmed_failure(g: BiGraph, subset: Sequence[str], need: int) -> bool:
    # Independent re-check so sampled mode never reports a false failure.
    return len(neighbor_set(g, subset)) < need


def check_disperser(
    g: BiGraph,
    K: int,
    eps,
    *,
    exhaustive_bound: int = EXHAUSTIVE_BOUND,
    trials: int = SAMPLE_TRIALS,
    seed: int = 0,
) -> CheckReport:
    """Does every size-``K`` left subset reach at least ``(1-eps) * right_size``
    distinct right vertices?

    Checking size exactly ``K`` suffices: neighbor sets only grow with the
    subset.  ``K`` larger than the domain passes vacuously with a note.
    """
    if K < 1:
        raise ParameterError("K must be at least 1")
    eps = as_fraction(eps)
    total = g.domain.size()
    if K > total:
        return CheckReport(True, None, "exhaustive", 0, note="vacuous: K exceeds domain size")
    need = _ceil_frac((1 - eps) * g.right_size)
    n_subsets = comb(total, K)

    if n_subsets <= exhaustive_bound and total <= exhaustive_bound:
        strings = list(g.domain.strings())
        masks = _mask_table(g, strings)
        checked = 0
        for subset in combinations(strings, K):
            checked += 1
            if _cover_count(g, subset, masks) < need:
                return CheckReport(False, _canonical(subset), "exhaustive", checked)
        return CheckReport(True, None, "exhaustive", n_subsets)

    rng = random.Random(seed)
    mode = f"sampled{trials}"
    strings = list(g.domain.strings()) if total <= MASK_DOMAIN_BOUND else None
    masks = _mask_table(g, strings) if strings is not None else None
    for t in range(trials):
        subset = rng.sample(strings, K) if strings is not None else g.domain.sample_set(rng, K)
        if _cover_count(g, subset, masks) < need and _confirmed_failure(g, subset, need):
            return CheckReport(False, _canonical(subset), mode, t + 1)
    return CheckReport(True, None, mode, trials)


def check_expander(
    g: BiGraph,
    K: int,
    c,
    *,
    exhaustive_bound: int = EXHAUSTIVE_BOUND,
    trials: int = SAMPLE_TRIALS,
    seed: int = 0,
) -> CheckReport:
    """Does every left subset of size ``s <= K`` reach at least ``c * s``
    distinct right vertices?"""
    if K < 1:
        raise ParameterError("K must be at least 1")
    c = as_fraction(c)
    total = g.domain.size()
    sizes = range(1, min(K, total) + 1)
    n_subsets = sum(comb(total, s) for s in sizes)

    if n_subsets <= exhaustive_bound and total <= exhaustive_bound:
        strings = list(g.domain.strings())
        masks = _mask_table(g, strings)
        checked = 0
        for s in sizes:
            need = _ceil_frac(c * s)
            for subset in combinations(strings, s):
                checked += 1
                if _cover_count(g, subset, masks) < need:
                    return CheckReport(False, _canonical(subset), "exhaustive", checked)
        return CheckReport(True, None, "exhaustive", n_subsets)

    rng = random.Random(seed)
    mode = f"sampled{trials}"
    strings = list(g.domain.strings()) if total <= MASK_DOMAIN_BOUND else None
    masks = _mask_table(g, strings) if strings is not None else None
    checked = 0
    for s in sizes:
        need = _ceil_frac(c * s)
        for _ in range(trials):
            subset = rng.sample(strings, s) if strings is not None else g.domain.sample_set(rng, s)
            checked += 1
            if _cover_count(g, subset, masks) < need and _confirmed_failure(g, subset, need):
                return CheckReport(False, _canonical(subset), mode, checked)
    return CheckReport(True, None, mode, checked)


class _GameSolver:
    """Exact minimax for the online matching game.

    The adversary presents any not-yet-presented left vertex; the algorithm
    must irrevocably assign it to an unused neighbor.  The algorithm wins a
    state when, for every possible next arrival, some reply keeps winning.
    States are memoized on the raw pair of bitmasks.
    """

    def __init__(self, g: BiGraph, s: int, max_states: int):
        self.left = list(g.domain.strings())
        self.s = s
        self.max_states = max_states
        self.nbrs = [sorted(set(neighbors(g, x))) for x in self.left]
        self.memo: dict[tuple[int, int], bool] = {}
        self.choice: dict[tuple[int, int], int] = {}

    def wins(self, used: int, seen: int, t: int) -> bool:
        if t == self.s:
            return True
        key = (used, seen)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        if len(self.memo) >= self.max_states:
            raise CapacityError(f"game state space exceeds {self.max_states} memo entries")
        ok = True
        for xi in range(len(self.left)):
            if seen >> xi & 1:
                continue
            found = False
            for r in self.nbrs[xi]:
                if used >> r & 1:
                    continue
                if self.wins(used | 1 << r, seen | 1 << xi, t + 1):
                    self.choice[(used, xi)] = r
                    found = True
                    break
            if not found:
                ok = False
                break
        self.memo[key] = ok
        return ok

    def winning_replies(self, used: int, seen: int, t: int, xi: int, cap: int | None = None) -> list[int]:
        out = []
        for r in self.nbrs[xi]:
            if used >> r & 1:
                continue
            if self.wins(used | 1 << r, seen | 1 << xi, t + 1):
                out.append(r)
                if cap is not None and len(out) >= cap:
                    break
        return out

    def refutation_line(self) -> list[str]:
        """Presented vertices along a losing line, assuming best algorithm play."""
        used, seen, t = 0, 0, 0
        line: list[str] = []
        while t < self.s:
            bad = None
            for xi in range(len(self.left)):
                if seen >> xi & 1:
                    continue
                if not self.winning_replies(used, seen, t, xi):
                    bad = xi
                    break
            if bad is None:
                break
            line.append(self.left[bad])
            free = [r for r in self.nbrs[bad] if not used >> r & 1]
            if not free:
                break
            used |= 1 << free[0]
            seen |= 1 << bad
            t += 1
        return line

    def hardest_line(self) -> list[str]:
        """A most-constraining adversary line through a winning game.

        At each step the adversary presents the vertex leaving the algorithm
        the fewest winning replies (counted up to a small saturation cap,
        ties broken canonically); the algorithm answers with its lowest
        winning reply.
        """
        used, seen, t = 0, 0, 0
        line: list[str] = []
        cap = 3
        while t < self.s:
            best_xi, best_replies = None, None
            for xi in range(len(self.left)):
                if seen >> xi & 1:
                    continue
                replies = self.winning_replies(used, seen, t, xi, cap=cap)
                if best_replies is None or len(replies) < len(best_replies):
                    best_xi, best_replies = xi, replies
                    if not best_replies:
                        break
            if best_xi is None or not best_replies:
                break
            line.append(self.left[best_xi])
            used |= 1 << best_replies[0]
            seen |= 1 << best_xi
            t += 1
        return line


@dataclass
class GameResult:
    matchable: bool
    strategy: dict[tuple[int, int], int] | None
    adversary: list[str] | None
    explored: int
    solver: _GameSolver = field(repr=False, compare=False, default=None)

    def hardest_line(self) -> list[str]:
        if not self.matchable:
            raise ParameterError("hardest line is defined for matchable instances")
        return self.solver.hardest_line()


def online_matchable(g: BiGraph, s: int, *, max_states: int = GAME_STATE_BOUND) -> GameResult:
    """Exact decision: can some online strategy survive every adversarial
    sequence of ``s`` distinct arrivals?

    Returns a (partial) strategy table on success and the presented-vertex
    line of a refutation otherwise.  Raises :class:`CapacityError` when the
    memo table would exceed ``max_states``; shrink the instance instead.
    """
    total = g.domain.size()
    if s > g.right_size:
        raise ParameterError(f"s={s} exceeds right side {g.right_size}")
    if s > total:
        raise ParameterError(f"s={s} exceeds domain size {total}")
    if total > MASK_DOMAIN_BOUND:
        raise CapacityError(f"domain too large to materialize ({total} strings)")
    solver = _GameSolver(g, s, max_states)
    value = solver.wins(0, 0, 0)
    if value:
        return GameResult(True, dict(solver.choice), None, len(solver.memo), solver)
    return GameResult(False, None, solver.refutation_line(), len(solver.memo), solver)


@dataclass(frozen=True)
class LowerBoundReport:
    """Outcome of enumerating every graph on a (length-n strings) x 2^k board."""

    n: int
    k: int
    total_graphs: int
    matchable_count: int
    min_degree_over_matchable: int | None
    required_degree: int
    exceptions: tuple
    rows: tuple

    @property
    def passed(self) -> bool:
        return not self.exceptions


def right_size_lower_bound(n: int, k: int, *, max_graphs: int = 1_048_576) -> LowerBoundReport:
    """Enumerate all bipartite graphs on 2^n length-n strings x 2^k right
    vertices and record, for each one matchable up to 2^k arrivals, its
    minimum right-vertex degree.

    With only ``2^k`` right vertices, matchability should force every right
    vertex to have strictly more than ``2^n - 2^k`` left neighbors; any
    matchable graph violating that lands in ``exceptions``.
    """
    if k > n:
        raise ParameterError("need k <= n so that 2^k arrivals exist")
    left = list(bit_strings(n))
    right = 2**k
    total = (2**right) ** len(left)
    if total > max_graphs:
        raise CapacityError(f"{total} graphs exceed enumeration bound {max_graphs}")
    domain = LeftDomain(n, n)
    required = 2**n - 2**k
    rows = []
    exceptions = []
    matchable_count = 0
    min_deg = None
    for masks in product(range(2**right), repeat=len(left)):
        table = {x: [r for r in range(right) if m >> r & 1] for x, m in zip(left, masks)}
        g = from_table(domain, right, table)
        result = online_matchable(g, 2**k)
        if not result.matchable:
            continue
        matchable_count += 1
        degrees = [0] * right
        for nbrs in table.values():
            for r in nbrs:
                degrees[r] += 1
        worst = min(degrees)
        rows.append((masks, worst))
        if min_deg is None or worst < min_deg:
            min_deg = worst
        if worst <= required:
            exceptions.append((masks, worst))
    return LowerBoundReport(
        n, k, total, matchable_count, min_deg, required, tuple(exceptions), tuple(rows)
    )
