"""Permutations of {1..degree} and the cycle-notation grammar.

Conventions used throughout the package:

* points are 1-based;
* ``p * q`` applies ``p`` first, then ``q`` (right-action reading), so the
  conjugate ``x.conj(g)`` is ``g⁻¹ x g`` and satisfies
  ``(x.conj(g)).conj(h) == x.conj(g * h)``;
* permutations compare lexicographically by their image tuples, which makes
  the identity the minimum of every subgroup.

Grammar (bit-exact):  permutation := "()" | cycle+ ;
cycle := "(" int ("," int)+ ")" ; ints are decimal, 1-based, no whitespace.
"""

from __future__ import annotations

import re
from math import lcm

from .errors import CycleParseError, DegreeMismatchError

_CYCLE_RE = re.compile(r"\((\d+(?:,\d+)+)\)")


class Permutation:
    """A bijection of {1..degree}, stored as the tuple of images."""

    __slots__ = ("images", "_hash")

    def __init__(self, images):
        images = tuple(images)
        n = len(images)
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection of 1..{n}: {images!r}")
        self.images = images
        self._hash = None

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(1, degree + 1))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, pt: int) -> int:
        """Image of a point."""
        return self.images[pt - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise DegreeMismatchError(
                f"degree {len(self.images)} vs {len(other.images)}"
            )
        oi = other.images
        p = Permutation.__new__(Permutation)
        p.images = tuple(oi[i - 1] for i in self.images)
        p._hash = None
        return p

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j - 1] = i + 1
        p = Permutation.__new__(Permutation)
        p.images = tuple(inv)
        p._hash = None
        return p

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self, g: "Permutation") -> "Permutation":
        """The conjugate g⁻¹ * self * g."""
        return g.inverse() * self * g

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its least point, sorted."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self.images[start - 1] == start:
                continue
            cyc = [start]
            seen.add(start)
            pt = self.images[start - 1]
            while pt != start:
                cyc.append(pt)
                seen.add(pt)
                pt = self.images[pt - 1]
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        """Sorted lengths of the nontrivial cycles (conjugacy invariant)."""
        return tuple(sorted(len(c) for c in self.cycles()))

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def moved_points(self) -> tuple[int, ...]:
        return tuple(
            pt for pt, im in enumerate(self.images, start=1) if pt != im
        )

    def min_moved(self) -> int | None:
        for pt, im in enumerate(self.images, start=1):
            if pt != im:
                return pt
        return None

    def commutes_with(self, other: "Permutation") -> bool:
        return (self * other).images == (other * self).images

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __le__(self, other: "Permutation") -> bool:
        return self.images <= other.images

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = self._hash = hash(self.images)
        return h

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r}, degree={self.degree})"


def format_cycles(p: Permutation) -> str:
    """Canonical cycle string: cycles by least moved point, least first."""
    cycs = p.cycles()
    if not cycs:
        return "()"
    return "".join("(" + ",".join(str(pt) for pt in c) + ")" for c in cycs)


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse strict cycle notation into a permutation of {1..degree}.

    Raises :class:`CycleParseError` naming the offending token and position
    for malformed text, repeated points, or points outside 1..degree.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if text == "()":
        return Permutation.identity(degree)
    if not text:
        raise CycleParseError("empty permutation text", token="", position=0)

    images = list(range(1, degree + 1))
    seen: set[int] = set()
    pos = 0
    while pos < len(text):
        m = _CYCLE_RE.match(text, pos)
        if m is None:
            bad = text[pos : pos + 16]
            raise CycleParseError(
                f"malformed cycle at position {pos}: {bad!r}",
                token=bad,
                position=pos,
            )
        body = m.group(1)
        points = []
        token_pos = pos + 1
        for token in body.split(","):
            pt = int(token)
            if not 1 <= pt <= degree:
                raise CycleParseError(
                    f"point {token} out of range 1..{degree} "
                    f"at position {token_pos}",
                    token=token,
                    position=token_pos,
                )
            if pt in seen:
                raise CycleParseError(
                    f"repeated point {token} at position {token_pos}",
                    token=token,
                    position=token_pos,
                )
            seen.add(pt)
            points.append(pt)
            token_pos += len(token) + 1
        for a, b in zip(points, points[1:]):
            images[a - 1] = b
        images[points[-1] - 1] = points[0]
        pos = m.end()
    return Permutation(images)
