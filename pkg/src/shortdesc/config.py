"""key=value experiment configs.

One key per line, no comments, no blank-key lines; duplicate and unknown
keys are rejected.  A parsed config re-serializes to the exact text it
came from, which is what makes config-driven runs diffable.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ConfigError
from .verify import as_fraction


class ExperimentConfig:
    def __init__(self, pairs: list[tuple[str, str]] | None = None):
        self.pairs: list[tuple[str, str]] = []
        self._map: dict[str, str] = {}
        for key, value in pairs or []:
            self.set(key, value)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        cfg = cls()
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            if not key:
                raise ConfigError(f"line {lineno}: empty key")
            if key in cfg._map:
                raise ConfigError(f"duplicate key: {key}")
            cfg.set(key, value)
        return cfg

    @classmethod
    def from_tokens(cls, tokens: list[str]) -> "ExperimentConfig":
        cfg = cls()
        for token in tokens:
            if "=" not in token:
                raise ConfigError(f"expected key=value, got {token!r}")
            key, _, value = token.partition("=")
            if not key:
                raise ConfigError(f"empty key in {token!r}")
            cfg.set(key, value)
        return cfg

    def set(self, key: str, value) -> None:
        value = str(value)
        if key in self._map:
            self.pairs = [(k, value if k == key else v) for k, v in self.pairs]
        else:
            self.pairs.append((key, value))
        self._map[key] = value

    def update(self, other: "ExperimentConfig") -> None:
        for key, value in other.pairs:
            self.set(key, value)

    def serialize(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.pairs)

    def require_known(self, allowed) -> None:
        for key, _ in self.pairs:
            if key not in allowed:
                raise ConfigError(f"unknown key: {key}")

    def __contains__(self, key: str) -> bool:
        return key in self._map

    def get(self, key: str, default: str | None = None) -> str | None:
        return self._map.get(key, default)

    def get_int(self, key: str, default: int | None = None) -> int | None:
        raw = self._map.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"key {key} expects an integer, got {raw!r}") from None

    def get_fraction(self, key: str, default: Fraction | None = None) -> Fraction | None:
        raw = self._map.get(key)
        if raw is None:
            return default
        try:
            return as_fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"key {key} expects a rational, got {raw!r}") from None
