"""Key-value config files: one ``KEY = value`` pair per line, ``#`` comments.

Values are parsed as bool/int/float when they look like one, else kept as
strings.  Flags given on the command line override file values.
"""

from __future__ import annotations


def parse_value(text: str):
    text = text.strip()
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def load_config(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected KEY=value, got {raw!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = parse_value(val)
    return values


def merge_overrides(base: dict, overrides: dict) -> dict:
    merged = dict(base)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return merged
