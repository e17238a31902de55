"""Command-line driver.

Subcommands: ``build``, ``check``, ``matchsim``, ``shortlist``, ``report``.
Parameters are free ``key=value`` tokens, optionally seeded from a config
file (``--config``); the ``--seed``, ``--out``, ``--trials`` and
``--exhaustive-bound`` flags are shorthands for the keys of the same
names.  Commands are deterministic given their config: reruns produce
byte-identical artifacts.

Exit codes: 0 success, 1 property failure, 2 config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

from .config import ExperimentConfig
from .construct import (
    BaseOptions,
    LayeredGraph,
    build_composed_disperser,
    build_disperser,
    build_expander,
    build_matching_graph,
    load_graph_text,
    serialize_layered,
)
from .errors import (
    CapacityError,
    ConfigError,
    ConstructionError,
    DomainError,
    MatchingFailureError,
    ParameterError,
)
from .graphs import BiGraph, LeftDomain, serialize_graph
from .machines import MACHINES, complexity_table
from .matcher import replay, run_adversaries_exhaustive, run_adversaries_random
from .shortlist import (
    build_dovetail,
    decode_entry,
    format_entry,
    level_graphs,
    list_for,
    list_size,
    serialize_dovetail,
    verify_shortlist,
)
from .verify import CheckReport, check_disperser, check_expander, online_matchable

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_CONFIG = 2
EXIT_IO = 3

CHECK_CSV_HEADER = "kind,K,eps_or_c,passed,mode,checked,counterexample"
SHORTLIST_CSV_HEADER = "x,len,C,listsize,bestcore,pass"
REPORT_CSV_HEADER = "table,k,n,count,max,mean"

BUILD_KEYS = {"kind", "k", "lo", "hi", "seed", "eps", "delta", "strategy", "degree", "trials", "bound", "out"}
CHECK_KEYS = {"file", "kind", "K", "eps", "c", "s", "trials", "bound", "seed", "out"}
MATCHSIM_KEYS = {"file", "s", "trials", "bound", "seed", "out"}
SHORTLIST_KEYS = {"machine", "pmax", "xmax", "hi", "kmax", "seed", "trials", "bound", "out", "x", "listout"}
REPORT_KEYS = {"kmax", "hi", "seed", "trials", "bound", "out"}


def _bits_label(x: str) -> str:
    return x if x else "-"


def _base_options(cfg: ExperimentConfig) -> BaseOptions:
    kwargs = {}
    strategy = cfg.get("strategy")
    if strategy is not None:
        kwargs["strategy"] = strategy
    degree = cfg.get_int("degree")
    if degree is not None:
        kwargs["degree"] = degree
    trials = cfg.get_int("trials")
    if trials is not None:
        kwargs["trials"] = trials
    bound = cfg.get_int("bound")
    if bound is not None:
        kwargs["exhaustive_bound"] = bound
    return BaseOptions(**kwargs)


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="ascii")


def cmd_build(cfg: ExperimentConfig) -> int:
    cfg.require_known(BUILD_KEYS)
    kind = cfg.get("kind")
    if kind not in ("disperser", "expander", "composed", "matching"):
        raise ConfigError(f"unknown kind: {kind}")
    k = cfg.get_int("k")
    if k is None:
        raise ConfigError("missing key: k")
    seed = cfg.get_int("seed", 0)
    hi = cfg.get_int("hi", k + 2)
    base = _base_options(cfg)
    out = cfg.get("out", f"{kind}-k{k}.graph")

    if kind == "matching":
        if "lo" in cfg:
            raise ConfigError("key lo is not accepted for kind=matching")
        if "eps" in cfg or "delta" in cfg:
            raise ConfigError("eps/delta only apply to kind=disperser")
        layered = build_matching_graph(k, hi, seed=seed, base=base)
        text = serialize_layered(layered)
        flat = layered.as_bigraph()
        maxdeg = max(flat.degree_of(x) for x in layered.domain.strings())
        right = layered.right_size
    else:
        lo = cfg.get_int("lo", k)
        domain = LeftDomain(lo, hi)
        if kind == "disperser":
            delta = cfg.get_fraction("delta")
            g = build_disperser(domain, k, seed=seed, delta=delta, base=base)
        elif kind == "expander":
            if "eps" in cfg or "delta" in cfg:
                raise ConfigError("eps/delta only apply to kind=disperser")
            g = build_expander(domain, k, seed=seed, base=base)
        else:
            if "eps" in cfg or "delta" in cfg:
                raise ConfigError("eps/delta only apply to kind=disperser")
            g = build_composed_disperser(domain, k, seed=seed, base=base)
        text = serialize_graph(g)
        maxdeg = max(g.degree_of(x) for x in domain.strings())
        right = g.right_size

    _write_text(out, text)
    print(f"right={right} maxdeg={maxdeg} seed={seed}")
    return EXIT_OK


def _report_row(kind: str, k_label, eps_label, report: CheckReport) -> str:
    witness = ";".join(_bits_label(x) for x in report.counterexample) if report.counterexample else ""
    passed = "true" if report.passed else "false"
    return f"{kind},{k_label},{eps_label},{passed},{report.mode},{report.checked_count},{witness}"


def cmd_check(cfg: ExperimentConfig) -> int:
    cfg.require_known(CHECK_KEYS)
    path = cfg.get("file")
    if path is None:
        raise ConfigError("missing key: file")
    kind = cfg.get("kind")
    if kind not in ("disperser", "expander", "matchable"):
        raise ConfigError(f"unknown kind: {kind}")
    trials = cfg.get_int("trials", 10_000)
    bound = cfg.get_int("bound", 1_000_000)
    seed = cfg.get_int("seed", 0)

    loaded = load_graph_text(Path(path).read_text(encoding="ascii"))
    flat = loaded.as_bigraph() if isinstance(loaded, LayeredGraph) else loaded

    if kind == "matchable":
        s = cfg.get_int("s")
        if s is None:
            raise ConfigError("missing key: s")
        result = online_matchable(flat, s)
        witness = ";".join(_bits_label(x) for x in result.adversary) if result.adversary else ""
        passed = "true" if result.matchable else "false"
        row = f"matchable,{s},-,{passed},exact,{result.explored},{witness}"
        ok = result.matchable
    else:
        K = cfg.get_int("K")
        if K is None:
            raise ConfigError("missing key: K")
        if kind == "disperser":
            eps = cfg.get_fraction("eps", Fraction(0))
            report = check_disperser(flat, K, eps, exhaustive_bound=bound, trials=trials, seed=seed)
            row = _report_row("disperser", K, eps, report)
        else:
            c = cfg.get_fraction("c", Fraction(1))
            report = check_expander(flat, K, c, exhaustive_bound=bound, trials=trials, seed=seed)
            row = _report_row("expander", K, c, report)
        ok = report.passed

    text = CHECK_CSV_HEADER + "\n" + row + "\n"
    out = cfg.get("out")
    if out:
        _write_text(out, text)
    print(text, end="")
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_matchsim(cfg: ExperimentConfig) -> int:
    cfg.require_known(MATCHSIM_KEYS)
    path = cfg.get("file")
    if path is None:
        raise ConfigError("missing key: file")
    loaded = load_graph_text(Path(path).read_text(encoding="ascii"))
    if not isinstance(loaded, LayeredGraph):
        raise ConfigError("matchsim needs a layered graph file")
    s = cfg.get_int("s", 2**loaded.k)
    trials = cfg.get_int("trials", 100_000)
    bound = cfg.get_int("bound", 1_000_000)
    seed = cfg.get_int("seed", 0)

    total = loaded.domain.size()
    n_sequences = math.perm(total, s) if s <= total else 0
    if n_sequences == 0:
        raise ConfigError(f"cannot draw {s} distinct strings from {total}")
    if n_sequences <= bound:
        report = run_adversaries_exhaustive(loaded, s)
        mode = "exhaustive"
    else:
        report = run_adversaries_random(loaded, s, trials, seed=seed)
        mode = f"random{trials}"

    print(f"mode={mode} s={s} sequences={report.sequences} matched={report.matched}")
    for layer_id in sorted(report.worst_census):
        bound_label = "-" if layer_id < 0 else str(2**layer_id)
        print(f"layer {layer_id} worst_failures={report.worst_census[layer_id]} bound={bound_label}")

    out = cfg.get("out")
    if out:
        demo = list(loaded.domain.strings())[:s]
        m = replay(loaded, demo, record_transcript=True)
        _write_text(out, "\n".join(m.transcript_lines()) + "\n")

    if report.failures:
        seq, x = report.failures[0]
        print(f"FAIL sequence={' '.join(_bits_label(v) for v in seq)} stuck={_bits_label(x)}")
        return EXIT_PROPERTY
    if report.census_breaches:
        seq, layers_hit = report.census_breaches[0]
        print(f"FAIL census sequence={' '.join(_bits_label(v) for v in seq)} layers={layers_hit}")
        return EXIT_PROPERTY
    print("PASS")
    return EXIT_OK


def cmd_shortlist(cfg: ExperimentConfig) -> int:
    cfg.require_known(SHORTLIST_KEYS)
    machine_name = cfg.get("machine", "rle1")
    if machine_name not in MACHINES:
        raise ConfigError(f"unknown machine: {machine_name}")
    machine = MACHINES[machine_name]()
    p_max = cfg.get_int("pmax", 10)
    x_max = cfg.get_int("xmax", 8)
    hi = cfg.get_int("hi", x_max)
    k_max = cfg.get_int("kmax", p_max)
    seed = cfg.get_int("seed", 0)
    base = _base_options(cfg)

    dm = build_dovetail(machine, k_max, hi, seed=seed, base=base)

    single = cfg.get("x")
    if single is not None:
        x = "" if single == "-" else single
        entries = list_for(x, dm)
        lines = [format_entry(e) for e in entries]
        listing = "\n".join(lines) + "\n"
        listout = cfg.get("listout")
        if listout:
            _write_text(listout, listing)
        else:
            print(listing, end="")
        return EXIT_OK

    table = complexity_table(machine, p_max)
    rows = []
    failed = 0
    for n in range(0, x_max + 1):
        for x in LeftDomain(n, n).strings():
            if x not in table:
                raise ConfigError(f"complexity of {_bits_label(x)} undefined within pmax={p_max}")
            report = verify_shortlist(x, dm, p_max=p_max, known_complexity=table[x])
            ok = "true" if report.passed else "false"
            rows.append(
                f"{_bits_label(x)},{len(x)},{report.complexity},{report.list_size},{report.best_core},{ok}"
            )
            if not report.passed:
                failed += 1

    text = SHORTLIST_CSV_HEADER + "\n" + "\n".join(rows) + "\n"
    out = cfg.get("out")
    if out:
        _write_text(out, text)
        mapout = out + ".map"
        _write_text(mapout, serialize_dovetail(dm))
    else:
        print(text, end="")
    swept = len(rows)
    print(f"swept={swept} passed={swept - failed} failed={failed}")
    return EXIT_OK if failed == 0 else EXIT_PROPERTY


def _fit_slope(points: list[tuple[float, float]]) -> float:
    n = len(points)
    mean_x = sum(p[0] for p in points) / n
    mean_y = sum(p[1] for p in points) / n
    num = sum((px - mean_x) * (py - mean_y) for px, py in points)
    den = sum((px - mean_x) ** 2 for px, py in points)
    return num / den if den else 0.0


def cmd_report(cfg: ExperimentConfig) -> int:
    cfg.require_known(REPORT_KEYS)
    k_max = cfg.get_int("kmax", 4)
    hi = cfg.get_int("hi", 8)
    seed = cfg.get_int("seed", 0)
    base = _base_options(cfg)

    graphs = level_graphs(k_max, hi, seed=seed, base=base)
    rows = []
    for k in sorted(graphs):
        layered = graphs[k]
        for n in range(k, hi + 1):
            degrees = [layered.degree_of(x) for x in LeftDomain(n, n).strings()]
            rows.append(
                f"degree,{k},{n},{len(degrees)},{max(degrees)},{sum(degrees) / len(degrees):.4f}"
            )

    points = []
    for n in range(0, hi + 1):
        sizes = [
            1 + sum(graphs[k].degree_of(x) for k in graphs if k <= n)
            for x in LeftDomain(n, n).strings()
        ]
        mean_size = sum(sizes) / len(sizes)
        rows.append(f"listsize,-,{n},{len(sizes)},{max(sizes)},{mean_size:.4f}")
        if n >= 1:
            points.append((math.log(n), math.log(mean_size)))

    text = REPORT_CSV_HEADER + "\n" + "\n".join(rows) + "\n"
    out = cfg.get("out")
    if out:
        _write_text(out, text)
    else:
        print(text, end="")
    print(f"loglog-slope={_fit_slope(points):.2f}")
    return EXIT_OK


HANDLERS = {
    "build": cmd_build,
    "check": cmd_check,
    "matchsim": cmd_matchsim,
    "shortlist": cmd_shortlist,
    "report": cmd_report,
}


def _assemble(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config:
        cfg.update(ExperimentConfig.from_text(Path(args.config).read_text(encoding="ascii")))
    cfg.update(ExperimentConfig.from_tokens(args.params))
    if args.seed is not None:
        cfg.set("seed", args.seed)
    if args.trials is not None:
        cfg.set("trials", args.trials)
    if args.bound is not None:
        cfg.set("bound", args.bound)
    if args.out is not None:
        cfg.set("out", args.out)
    return cfg


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="shortdesc",
        description="Build, check, match and list over explicit bipartite graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        p = sub.add_parser(name)
        p.add_argument("params", nargs="*", help="key=value parameters")
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--exhaustive-bound", type=int, dest="bound", default=None)

    args = parser.parse_args(argv)
    try:
        cfg = _assemble(args)
        return HANDLERS[args.command](cfg)
    except (ConfigError, ParameterError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConstructionError, MatchingFailureError, CapacityError) as exc:
        witness = getattr(exc, "witness", None)
        suffix = f" witness={witness}" if witness else ""
        print(f"failure: {exc}{suffix}", file=sys.stderr)
        return EXIT_PROPERTY


def main() -> None:
    raise SystemExit(run())
