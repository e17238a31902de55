"""Greedy level-descent online matching over a layered graph.

Arrivals are handled one at a time: scan layers from the top level down
to the universal vertex, and inside a layer take the lowest-index unused
neighbor.  An assignment, once made, never changes.  A matcher is
strictly sequential; fork one per concurrent experiment instead of
sharing it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .construct import LayeredGraph
from .errors import CapacityError, DomainError, DuplicateArrivalError, MatchingFailureError


class Matcher:
    """Mutable matching state over one layered graph."""

    def __init__(self, graph: LayeredGraph, record_transcript: bool = False):
        self.graph = graph
        self.capacity = 2**graph.k
        self.used = 0
        self.assignment: dict[str, int] = {}
        self.census = {layer_id: 0 for layer_id, _ in graph.layers}
        self.probes = 0
        self.transcript: list[tuple[str, int, int, int]] | None = (
            [] if record_transcript else None
        )

    @property
    def arrivals(self) -> int:
        return len(self.assignment)

    def match_vertex(self, x: str) -> int:
        """Assign ``x`` to an unused neighbor, scanning layers top-down.

        The probe count charged to the arrival is the slot degree of every
        layer scanned, which is what a naive lowest-unused scan would cost.
        """
        if x in self.assignment:
            raise DuplicateArrivalError(f"{x!r} already matched")
        if self.arrivals >= self.capacity:
            raise CapacityError(f"matcher already holds {self.capacity} arrivals")
        if x not in self.graph.domain:
            raise DomainError(f"{x!r} outside the graph domain")
        probes = 0
        for layer_id, _ in reversed(self.graph.layers):
            mask, degree = self.graph.layer_info(x, layer_id)
            probes += degree
            free = mask & ~self.used
            if free:
                z = (free & -free).bit_length() - 1
                self.used |= 1 << z
                self.assignment[x] = z
                self.probes += probes
                if self.transcript is not None:
                    self.transcript.append((x, z, layer_id, probes))
                return z
            self.census[layer_id] += 1
        raise MatchingFailureError(f"no unused neighbor on any layer for {x!r}")

    def failure_census(self) -> dict[int, int]:
        """Per-layer counts of arrivals that found the whole layer used."""
        return dict(self.census)

    def fork(self) -> "Matcher":
        """An independent copy (used by exhaustive adversary enumeration)."""
        twin = Matcher.__new__(Matcher)
        twin.graph = self.graph
        twin.capacity = self.capacity
        twin.used = self.used
        twin.assignment = dict(self.assignment)
        twin.census = dict(self.census)
        twin.probes = self.probes
        twin.transcript = list(self.transcript) if self.transcript is not None else None
        return twin

    def transcript_lines(self) -> list[str]:
        if self.transcript is None:
            raise ValueError("matcher was created without transcript recording")
        return [
            f"{x if x else '-'} -> {z} layer={layer_id} probes={probes}"
            for x, z, layer_id, probes in self.transcript
        ]


def new_matcher(graph: LayeredGraph, record_transcript: bool = False) -> Matcher:
    """Fresh state: empty assignment, every right vertex unused."""
    return Matcher(graph, record_transcript=record_transcript)


def census_violations(census: dict[int, int]) -> list[int]:
    """Layers whose failure count exceeds the 2^i descent bound."""
    return [i for i, count in census.items() if i >= 0 and count > 2**i]


@dataclass
class SimReport:
    """Outcome of running many adversarial arrival sequences."""

    sequences: int = 0
    matched: int = 0
    failures: list = field(default_factory=list)
    census_breaches: list = field(default_factory=list)
    worst_census: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.census_breaches

    def absorb_census(self, census: dict[int, int]) -> None:
        for layer_id, count in census.items():
            if count > self.worst_census.get(layer_id, -1):
                self.worst_census[layer_id] = count


def replay(graph: LayeredGraph, sequence, record_transcript: bool = False) -> Matcher:
    """Run one arrival sequence through a fresh matcher."""
    m = Matcher(graph, record_transcript=record_transcript)
    for x in sequence:
        m.match_vertex(x)
    return m


def run_adversaries_exhaustive(graph: LayeredGraph, s: int, *, failure_cap: int = 5) -> SimReport:
    """Every sequence of ``s`` distinct domain strings, sharing prefixes.

    The failure-census bound is checked after every single arrival, i.e.
    on every prefix of every sequence.
    """
    strings = list(graph.domain.strings())
    report = SimReport()

    def visit(m: Matcher, path: list[str]) -> None:
        for x in strings:
            if x in m.assignment:
                continue
            child = m.fork()
            try:
                child.match_vertex(x)
            except MatchingFailureError:
                if len(report.failures) < failure_cap:
                    report.failures.append((path + [x], x))
                continue
            breached = census_violations(child.census)
            if breached:
                report.census_breaches.append((path + [x], breached))
            report.absorb_census(child.census)
            if len(path) + 1 < s:
                visit(child, path + [x])
            else:
                report.sequences += 1
                report.matched += 1

    visit(Matcher(graph), [])
    return report


def run_adversaries_random(graph: LayeredGraph, s: int, trials: int, seed: int = 0) -> SimReport:
    """``trials`` uniformly drawn sequences of ``s`` distinct strings."""
    strings = list(graph.domain.strings())
    rng = random.Random(seed)
    report = SimReport()
    for _ in range(trials):
        sequence = rng.sample(strings, s)
        m = Matcher(graph)
        failed = False
        for step, x in enumerate(sequence):
            try:
                m.match_vertex(x)
            except MatchingFailureError:
                report.failures.append((sequence[: step + 1], x))
                failed = True
                break
            breached = census_violations(m.census)
            if breached:
                report.census_breaches.append((sequence[: step + 1], breached))
        report.absorb_census(m.census)
        report.sequences += 1
        if not failed:
            report.matched += 1
    return report
