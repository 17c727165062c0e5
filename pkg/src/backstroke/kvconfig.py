"""Line-oriented ``key = value`` files.

Used for scene descriptions, transform definitions, and evaluation reports.
Blank lines and lines whose first non-space character is ``#`` are ignored.
Keys are case-sensitive. Values are written with ``repr`` so floats round
trip exactly.
"""

from __future__ import annotations

from .errors import ConfigError


def read_kv(path) -> dict[str, str]:
    """Parse a key = value file into an ordered dict of raw value strings."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not key:
                raise ConfigError(f"{path}:{lineno}: empty key")
            if key in out:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            out[key] = value
    return out


def write_kv(path, entries: dict[str, object], header: str | None = None) -> None:
    """Write entries as one ``key = value`` line each.

    Floats are written with repr() so they survive a read/parse round trip
    bit for bit. An optional header becomes leading comment lines.
    """
    with open(path, "w", encoding="ascii") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n" if line else "#\n")
        for key, value in entries.items():
            if isinstance(value, float):
                text = repr(float(value))
            else:
                text = str(value)
            fh.write(f"{key} = {text}\n")


def kv_float(entries: dict[str, str], key: str, source: str = "config") -> float:
    try:
        raw = entries[key]
    except KeyError:
        raise ConfigError(f"{source}: missing key {key!r}") from None
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{source}: key {key!r} is not a number: {raw!r}") from None


def kv_int(entries: dict[str, str], key: str, source: str = "config") -> int:
    try:
        raw = entries[key]
    except KeyError:
        raise ConfigError(f"{source}: missing key {key!r}") from None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{source}: key {key!r} is not an integer: {raw!r}") from None


def kv_str(entries: dict[str, str], key: str, source: str = "config") -> str:
    try:
        return entries[key]
    except KeyError:
        raise ConfigError(f"{source}: missing key {key!r}") from None
