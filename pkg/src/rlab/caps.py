"""Size caps, overridable through the RLAB_CAPS environment variable.

RLAB_CAPS is a comma-separated list of ``name=value`` pairs, e.g.
``RLAB_CAPS="dense=5000,tree_ball=1000000"``.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

from .errors import InputError


@dataclass(frozen=True)
class Caps:
    exact_apart: int = 40
    tree_ball: int = 5_000_000
    xdg_ball: int = 200_000
    dense: int = 3000
    jacobi: int = 400
    walk_length: int = 4096
    backtrack_budget: int = 10_000_000
    multiplier: int = 4096


def parse_caps(text: str, base: Caps | None = None) -> Caps:
    base = base or Caps()
    names = {f.name for f in dataclasses.fields(Caps)}
    updates = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise InputError(f"bad RLAB_CAPS entry {item!r}")
        try:
            updates[key] = int(value)
        except ValueError:
            raise InputError(f"bad RLAB_CAPS value {item!r}") from None
    return dataclasses.replace(base, **updates)


def get_caps() -> Caps:
    return parse_caps(os.environ.get("RLAB_CAPS", ""))
