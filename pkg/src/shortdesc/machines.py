"""Toy description machines with exactly computable minimum program length.

A machine maps bit-string programs to bit-string outputs, totally and
deterministically; programs of the wrong shape simply produce nothing.
Because the default formats below are fixed bit-exactly, the minimum
description length of any string is computable by brute-force program
enumeration in canonical (length, lexicographic) order.

Unconditional format (machine "rle1"):

    "0" + w                     ->  w  (literal; w may be empty)
    "1" + LLL + w + CCCC        ->  w repeated count times, where LLL is
                                    3 bits encoding block length
                                    len(w) = value + 1 in [1, 8] and CCCC
                                    is 4 bits encoding count = value + 1
                                    in [1, 16]; the program length must be
                                    exactly 8 + len(w)
    anything else               ->  no output

Conditional format (machine "cond1"), given a condition string y:

    "00" + w                    ->  w
    "01"                        ->  y
    "10" + w  (len(w) == len(y)) -> bitwise XOR of y and w
    "11" + body                 ->  body decoded by the rle1 rules
    anything else               ->  no output
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .errors import ParameterError
from .graphs import bit_strings

P_MAX_CAP = 22
DEFAULT_STEP_BUDGET = 10_000


def rle_decode(p: str) -> str | None:
    if p.startswith("0"):
        return p[1:]
    if not p.startswith("1") or len(p) < 4:
        return None
    block_len = int(p[1:4], 2) + 1
    if len(p) != 8 + block_len:
        return None
    block = p[4 : 4 + block_len]
    count = int(p[4 + block_len :], 2) + 1
    return block * count


def _xor(a: str, b: str) -> str:
    return "".join("1" if x != y else "0" for x, y in zip(a, b))


def cond_decode(p: str, y: str) -> str | None:
    if p.startswith("00"):
        return p[2:]
    if p == "01":
        return y
    if p.startswith("10"):
        w = p[2:]
        return _xor(y, w) if len(w) == len(y) else None
    if p.startswith("11"):
        return rle_decode(p[2:])
    return None


@dataclass(frozen=True)
class ToyMachine:
    """A total, deterministic description machine.

    ``step_budget`` only guards pluggable machines; the built-in decoders
    are total by construction.
    """

    decode: Callable[[str], str | None]
    decode_cond: Callable[[str, str], str | None]
    step_budget: int = DEFAULT_STEP_BUDGET
    name: str = "custom"


def default_machine() -> ToyMachine:
    return ToyMachine(decode=rle_decode, decode_cond=cond_decode, name="rle1")


def run(machine: ToyMachine, p: str) -> str | None:
    return machine.decode(p)


def run_cond(machine: ToyMachine, p: str, y: str) -> str | None:
    return machine.decode_cond(p, y)


def programs(max_len: int) -> Iterator[str]:
    """All programs of length at most ``max_len``, canonical order."""
    for n in range(max_len + 1):
        yield from bit_strings(n)


def _check_cap(p_max: int) -> None:
    if p_max > P_MAX_CAP:
        raise ParameterError(f"p_max={p_max} exceeds enumeration cap {P_MAX_CAP}")
    if p_max < 0:
        raise ParameterError("p_max must be nonnegative")


def complexity(machine: ToyMachine, x: str, p_max: int) -> int | None:
    """Exact minimum program length producing ``x``, or None below the cap."""
    _check_cap(p_max)
    for p in programs(p_max):
        if machine.decode(p) == x:
            return len(p)
    return None


def complexity_cond(machine: ToyMachine, x: str, y: str, p_max: int) -> int | None:
    """Exact minimum program length producing ``x`` given ``y``."""
    _check_cap(p_max)
    for p in programs(p_max):
        if machine.decode_cond(p, y) == x:
            return len(p)
    return None


def complexity_table(machine: ToyMachine, p_max: int) -> dict[str, int]:
    """Minimum program length for every output reachable below the cap."""
    _check_cap(p_max)
    table: dict[str, int] = {}
    for p in programs(p_max):
        x = machine.decode(p)
        if x is not None and x not in table:
            table[x] = len(p)
    return table


def complexity_cond_table(machine: ToyMachine, y: str, p_max: int) -> dict[str, int]:
    _check_cap(p_max)
    table: dict[str, int] = {}
    for p in programs(p_max):
        x = machine.decode_cond(p, y)
        if x is not None and x not in table:
            table[x] = len(p)
    return table


MACHINES = {"rle1": default_machine}
