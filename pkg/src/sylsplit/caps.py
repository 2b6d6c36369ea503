"""Size caps that keep every exhaustive search at desk scale.

All caps can be overridden with the ``SYLSPLIT_CAPS`` environment variable,
a comma-separated list of integers in the order

    brute_order,quotient_index,subgroup_enum,degree

A shorter list overrides only a prefix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

ENV_VAR = "SYLSPLIT_CAPS"


@dataclass(frozen=True)
class Caps:
    # Largest group order for which searches may fall back to element
    # filtration / full enumeration.
    brute_order: int = 10_000
    # Largest index |G:N| that quotient() will realise as a coset action.
    quotient_index: int = 20_000
    # Largest |S| for which all subgroups (or all abelian subgroups) of S
    # are enumerated (Thompson subgroup, complement search, fusion scans).
    subgroup_enum: int = 4_096
    # Largest permutation degree accepted from catalog files.
    degree: int = 128


_FIELDS = ("brute_order", "quotient_index", "subgroup_enum", "degree")


@lru_cache(maxsize=8)
def _parse(spec: str) -> Caps:
    values = {}
    parts = [p for p in spec.split(",") if p.strip()]
    if len(parts) > len(_FIELDS):
        raise ValueError(f"{ENV_VAR} accepts at most {len(_FIELDS)} integers")
    for name, part in zip(_FIELDS, parts):
        values[name] = int(part)
    return Caps(**values)


def current_caps() -> Caps:
    """Return the active caps, honouring ``SYLSPLIT_CAPS`` if set."""
    spec = os.environ.get(ENV_VAR, "")
    if not spec:
        return Caps()
    return _parse(spec)
