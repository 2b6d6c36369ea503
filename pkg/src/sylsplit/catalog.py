"""Catalog files: JSON descriptions of permutation groups.

Schema: {"name": str, "degree": int, "generators": [cycle strings],
"tags": [str], "expected_order": int} with tags and expected_order
optional.  The expected order, when present, is verified at load time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .caps import current_caps
from .errors import CatalogError, CycleParseError
from .group import PermGroup
from .perm import parse_cycles


@dataclass
class GroupFile:
    """A named group given by generators in cycle notation."""

    name: str
    degree: int
    generators: tuple[str, ...]
    tags: tuple[str, ...] = ()
    expected_order: int | None = None
    _group: PermGroup | None = field(
        default=None, repr=False, compare=False
    )

    def group(self) -> PermGroup:
        if self._group is None:
            gens = [parse_cycles(s, self.degree) for s in self.generators]
            self._group = PermGroup(self.degree, gens)
            if (
                self.expected_order is not None
                and self._group.order != self.expected_order
            ):
                raise CatalogError(
                    f"{self.name}: order {self._group.order} differs from "
                    f"expected {self.expected_order}"
                )
        return self._group

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "degree": self.degree,
            "generators": list(self.generators),
        }
        if self.tags:
            d["tags"] = list(self.tags)
        if self.expected_order is not None:
            d["expected_order"] = self.expected_order
        return d


def _validate(raw: dict, where: str) -> GroupFile:
    for key in ("name", "degree", "generators"):
        if key not in raw:
            raise CatalogError(f"{where}: missing field {key!r}")
    name = raw["name"]
    degree = raw["degree"]
    if not isinstance(name, str) or not name:
        raise CatalogError(f"{where}: name must be a nonempty string")
    if not isinstance(degree, int) or degree < 1:
        raise CatalogError(f"{where}: degree must be a positive integer")
    cap = current_caps().degree
    if degree > cap:
        raise CatalogError(f"{where}: degree {degree} exceeds cap {cap}")
    gens = raw["generators"]
    if not isinstance(gens, list) or not all(isinstance(s, str) for s in gens):
        raise CatalogError(f"{where}: generators must be a list of strings")
    for i, s in enumerate(gens):
        try:
            parse_cycles(s, degree)
        except CycleParseError as e:
            raise CatalogError(
                f"{where}: generator {i} ({s!r}): {e} "
                f"[token {e.token!r} at position {e.position}]"
            ) from e
    tags = tuple(raw.get("tags", ()))
    expected = raw.get("expected_order")
    if expected is not None and (not isinstance(expected, int) or expected < 1):
        raise CatalogError(f"{where}: expected_order must be a positive integer")
    return GroupFile(
        name=name,
        degree=degree,
        generators=tuple(gens),
        tags=tags,
        expected_order=expected,
    )


def load_group_file(path: Path) -> GroupFile:
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise CatalogError(f"{path}: line {e.lineno}: {e.msg}") from e
    return _validate(raw, str(path))


def load_catalog(path) -> list[GroupFile]:
    """Load one file or every *.json in a directory, sorted by name."""
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise CatalogError(f"{path}: no *.json group files found")
        entries = [load_group_file(f) for f in files]
    elif path.is_file():
        entries = [load_group_file(path)]
    else:
        raise CatalogError(f"{path}: not a file or directory")
    names = [e.name for e in entries]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise CatalogError(f"duplicate group names: {sorted(dupes)}")
    return sorted(entries, key=lambda e: e.name)


def shipped_catalog_path() -> Path:
    """Directory of the catalog distributed with the package."""
    return Path(resources.files("sylsplit").joinpath("data", "catalog"))


def load_shipped_catalog() -> list[GroupFile]:
    return load_catalog(shipped_catalog_path())
