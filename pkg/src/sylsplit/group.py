"""Permutation groups backed by a deterministic stabilizer chain.

The chain (base and strong generating set) is built eagerly by a
deterministic incremental Schreier-Sims: base points are chosen as the least
moved point whenever a new level is needed, orbits are explored
breadth-first in sorted order, and no randomisation is used anywhere, so
every derived object (orders, transversals, element streams, search
results) is reproducible from the generator list alone.

Groups are immutable after construction and safe to share; the private
memo dict only caches values that are pure functions of the group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .caps import current_caps
from .errors import (
    DegreeMismatchError,
    InternalInconsistency,
    NotASubgroupError,
    NotNormalError,
    ResourceCapError,
)
from .perm import Permutation


class _Level:
    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {
            point: Permutation.identity(degree)
        }

    def rebuild(self, degree: int) -> None:
        T = {self.point: Permutation.identity(degree)}
        queue = [self.point]
        qi = 0
        while qi < len(queue):
            a = queue[qi]
            qi += 1
            u = T[a]
            for s in self.gens:
                b = s(a)
                if b not in T:
                    T[b] = u * s
                    queue.append(b)
        self.transversal = T


class PermGroup:
    """Group generated by permutations of a common degree."""

    def __init__(self, degree: int, generators=(), *, base_hint=()):
        gens = []
        seen = set()
        for g in generators:
            if not isinstance(g, Permutation):
                raise TypeError(f"expected Permutation, got {type(g)!r}")
            if g.degree != degree:
                raise DegreeMismatchError(
                    f"generator degree {g.degree} != group degree {degree}"
                )
            if g.is_identity() or g.images in seen:
                continue
            seen.add(g.images)
            gens.append(g)
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self._levels: list[_Level] = []
        self._memo: dict = {}
        self._build_chain(base_hint)

    # -- chain construction -------------------------------------------------

    def _build_chain(self, base_hint) -> None:
        degree = self.degree
        levels = self._levels
        for pt in dict.fromkeys(base_hint):
            levels.append(_Level(pt, degree))
        strong = list(self.generators)
        for g in strong:
            if all(g(L.point) == L.point for L in levels):
                levels.append(_Level(g.min_moved(), degree))
        for g in strong:
            for L in levels:
                L.gens.append(g)
                if g(L.point) != L.point:
                    break
        for L in levels:
            L.rebuild(degree)

        # Bottom-up verification: re-examine a level until all its Schreier
        # generators sift to the identity through the deeper chain.
        i = len(levels) - 1
        while i >= 0:
            failure = self._verify_level(i)
            if failure is None:
                i -= 1
                continue
            residue, j = failure
            if j == len(levels):
                levels.append(_Level(residue.min_moved(), degree))
            for k in range(i + 1, j + 1):
                levels[k].gens.append(residue)
                levels[k].rebuild(degree)
            i = j

    def _verify_level(self, i: int):
        L = self._levels[i]
        T = L.transversal
        for pt in sorted(T):
            u = T[pt]
            for s in L.gens:
                u2 = T[s(pt)]
                sg = u * s * u2.inverse()
                if sg.is_identity():
                    continue
                residue, j = self._sift(sg, start=i + 1)
                if not residue.is_identity():
                    return residue, j
        return None

    def _sift(self, p: Permutation, start: int = 0):
        """Strip p through the chain; returns (residue, stuck level)."""
        for idx in range(start, len(self._levels)):
            L = self._levels[idx]
            pt = p(L.point)
            if pt == L.point:
                continue
            u = L.transversal.get(pt)
            if u is None:
                return p, idx
            p = p * u.inverse()
        return p, len(self._levels)

    # -- basic queries ------------------------------------------------------

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(L.point for L in self._levels)

    @property
    def order(self) -> int:
        n = self._memo.get("order")
        if n is None:
            n = 1
            for L in self._levels:
                n *= len(L.transversal)
            self._memo["order"] = n
        return n

    def __contains__(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise DegreeMismatchError(
                f"element degree {p.degree} != group degree {self.degree}"
            )
        residue, _ = self._sift(p)
        return residue.is_identity()

    def is_trivial(self) -> bool:
        return self.order == 1

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def iter_elements(self):
        """Stream all elements in a deterministic order."""
        levels = self._levels

        def rec(idx):
            if idx == len(levels):
                yield Permutation.identity(self.degree)
                return
            T = levels[idx].transversal
            pts = sorted(T)
            for h in rec(idx + 1):
                for pt in pts:
                    yield h * T[pt]

        return rec(0)

    def elements(self) -> tuple[Permutation, ...]:
        """All elements; cached when the group is small."""
        cached = self._memo.get("elements")
        if cached is not None:
            return cached
        elems = tuple(self.iter_elements())
        if self.order <= current_caps().brute_order:
            self._memo["elements"] = elems
        return elems

    def element_set(self) -> frozenset[Permutation]:
        cached = self._memo.get("element_set")
        if cached is not None:
            return cached
        es = frozenset(self.elements())
        if self.order <= current_caps().brute_order:
            self._memo["element_set"] = es
        return es

    def sorted_elements(self) -> tuple[Permutation, ...]:
        cached = self._memo.get("sorted_elements")
        if cached is not None:
            return cached
        se = tuple(sorted(self.elements()))
        if self.order <= current_caps().brute_order:
            self._memo["sorted_elements"] = se
        return se

    def is_abelian(self) -> bool:
        ab = self._memo.get("abelian")
        if ab is None:
            ab = all(
                a.commutes_with(b)
                for a, b in itertools.combinations(self.generators, 2)
            )
            self._memo["abelian"] = ab
        return ab

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        if self.degree != other.degree:
            raise DegreeMismatchError("degree mismatch")
        return all(g in other for g in self.generators)

    def is_normal_in(self, other: "PermGroup") -> bool:
        """Generator-wise conjugation containment (exact for finite gens)."""
        return self.is_subgroup_of(other) and all(
            h.conj(g) in self
            for h in self.generators
            for g in other.generators
        )

    def normalizes(self, other: "PermGroup") -> bool:
        return all(
            h.conj(g) in other
            for h in other.generators
            for g in self.generators
        )

    def conjugated_by(self, g: Permutation) -> "PermGroup":
        return PermGroup(self.degree, tuple(h.conj(g) for h in self.generators))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.order == other.order
            and self.is_subgroup_of(other)
        )

    def __le__(self, other: "PermGroup") -> bool:
        return self.is_subgroup_of(other)

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, order={self.order}, <{gens}>)"


def group_from_elements(degree: int, elems) -> PermGroup:
    """Group generated by a set of elements, with a small generating set."""
    H = PermGroup(degree, ())
    gens: list[Permutation] = []
    for e in sorted(elems):
        if e not in H:
            gens.append(e)
            H = PermGroup(degree, tuple(gens))
    return H


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """[a, b] = a⁻¹ b⁻¹ a b."""
    return a.inverse() * b.inverse() * a * b


def _grow(degree: int, seeds, candidates) -> PermGroup:
    """Generate a subgroup from seeds, adding candidates not yet contained."""
    gens = list(seeds)
    H = PermGroup(degree, tuple(gens))
    for c in candidates:
        if not c.is_identity() and c not in H:
            gens.append(c)
            H = PermGroup(degree, tuple(gens))
    return H


# -- orbit-stabilizer searches ----------------------------------------------


def conj_orbit(G: PermGroup, x: Permutation, stop_at: Permutation | None = None):
    """Conjugation orbit of x under G with witnesses.

    Returns a dict mapping each orbit element y to some u in G with
    x.conj(u) == y.  If ``stop_at`` is given, stops early once it is found.
    """
    orbit = {x: Permutation.identity(G.degree)}
    queue = [x]
    qi = 0
    while qi < len(queue):
        y = queue[qi]
        qi += 1
        u = orbit[y]
        for s in G.generators:
            z = y.conj(s)
            if z not in orbit:
                orbit[z] = u * s
                queue.append(z)
                if stop_at is not None and z == stop_at:
                    return orbit
    return orbit


def centralizer(G: PermGroup, x: Permutation) -> PermGroup:
    """C_G(x), exact, via orbit-stabilizer and Schreier generators."""
    if x.degree != G.degree:
        raise DegreeMismatchError("degree mismatch")
    orbit = conj_orbit(G, x)
    order = list(orbit)
    seeds = (x,) if x in G else ()
    candidates = (
        orbit[y] * s * orbit[y.conj(s)].inverse()
        for y in order
        for s in G.generators
    )
    C = _grow(G.degree, seeds, candidates)
    if G.order % C.order or G.order // C.order != len(orbit):
        raise InternalInconsistency("orbit-stabilizer count mismatch")
    return C


def subgroup_centralizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """C_G(H), the elements of G commuting with every element of H."""
    C = G
    for h in H.generators:
        C = centralizer(C, h)
    return C


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """N_G(H), via the orbit of H's element set under conjugation."""
    if H.degree != G.degree:
        raise DegreeMismatchError("degree mismatch")
    if H.is_trivial():
        return G
    cap = current_caps().brute_order
    if H.order > cap:
        raise ResourceCapError("brute_order", cap, H.order)
    start = H.element_set()
    orbit = {start: Permutation.identity(G.degree)}
    queue = [start]
    edges = []
    qi = 0
    inverses = [s.inverse() for s in G.generators]
    while qi < len(queue):
        fs = queue[qi]
        qi += 1
        u = orbit[fs]
        for s, s_inv in zip(G.generators, inverses):
            img = frozenset(s_inv * h * s for h in fs)
            known = orbit.get(img)
            if known is None:
                orbit[img] = u * s
                queue.append(img)
                edges.append((u, s, orbit[img]))
            else:
                edges.append((u, s, known))
    seeds = H.generators if H.is_subgroup_of(G) else ()
    candidates = (u * s * v.inverse() for u, s, v in edges)
    N = _grow(G.degree, seeds, candidates)
    if G.order % N.order or G.order // N.order != len(orbit):
        raise InternalInconsistency("orbit-stabilizer count mismatch")
    return N


def find_conjugator(
    G: PermGroup, x: Permutation, y: Permutation
) -> Permutation | None:
    """Some g in G with x.conj(g) == y, or None when x, y are not conjugate."""
    if x.degree != G.degree or y.degree != G.degree:
        raise DegreeMismatchError("degree mismatch")
    if x.cycle_type() != y.cycle_type():
        return None
    orbit = conj_orbit(G, x, stop_at=y)
    return orbit.get(y)


# -- cosets and quotients -----------------------------------------------------


def left_transversal(G: PermGroup, K: PermGroup) -> tuple[Permutation, ...]:
    """Canonical representatives for the left cosets tK of K in G.

    Contains the identity (representing K itself) and is sorted, hence
    deterministic.  Each coset is represented by its lexicographically
    least element.
    """
    if not K.is_subgroup_of(G):
        raise NotASubgroupError("K is not a subgroup of G")
    if K.order > current_caps().brute_order:
        return _transversal_pairwise(G, K)
    kelems = K.elements()

    def canon(g: Permutation) -> Permutation:
        return min(g * k for k in kelems)

    e = Permutation.identity(G.degree)
    reps = {e.images: e}
    queue = [e]
    qi = 0
    while qi < len(queue):
        t = queue[qi]
        qi += 1
        for s in G.generators:
            c = canon(s * t)
            if c.images not in reps:
                reps[c.images] = c
                queue.append(c)
    out = tuple(sorted(reps.values()))
    if len(out) * K.order != G.order:
        raise InternalInconsistency("coset count mismatch")
    return out


def _transversal_pairwise(G: PermGroup, K: PermGroup) -> tuple[Permutation, ...]:
    reps = [Permutation.identity(G.degree)]
    queue = list(reps)
    qi = 0
    while qi < len(queue):
        t = queue[qi]
        qi += 1
        for s in G.generators:
            c = s * t
            if all(r.inverse() * c not in K for r in reps):
                reps.append(c)
                queue.append(c)
    if len(reps) * K.order != G.order:
        raise InternalInconsistency("coset count mismatch")
    return tuple(reps)


def _coset_canon(N: PermGroup, g: Permutation) -> Permutation:
    """Canonical representative of the coset N*g via N's chain."""
    for L in N._levels:
        T = L.transversal
        if len(T) > 1:
            best = min(T, key=g)
            if best != L.point:
                g = T[best] * g
    return g


class QuotientMap:
    """The epimorphism G -> G/N realised on the cosets of a normal N."""

    def __init__(self, domain: PermGroup, kernel: PermGroup):
        if not kernel.is_normal_in(domain):
            raise NotNormalError("kernel is not normal in the domain")
        cap = current_caps().quotient_index
        index = domain.order // kernel.order
        if index > cap:
            raise ResourceCapError("quotient_index", cap, index)
        self.domain = domain
        self.kernel = kernel
        reps = [_coset_canon(kernel, Permutation.identity(domain.degree))]
        key_to_idx = {reps[0].images: 0}
        qi = 0
        while qi < len(reps):
            t = reps[qi]
            qi += 1
            for s in domain.generators:
                c = _coset_canon(kernel, t * s)
                if c.images not in key_to_idx:
                    key_to_idx[c.images] = len(reps)
                    reps.append(c)
        self.reps = tuple(reps)
        self._index = key_to_idx
        self._trivial = key_to_idx[reps[0].images]
        self.image = PermGroup(
            len(reps), tuple(self.apply(s) for s in domain.generators)
        )
        if self.image.order * kernel.order != domain.order:
            raise InternalInconsistency("quotient order mismatch")
        if any(not self.apply(n).is_identity() for n in kernel.generators):
            raise InternalInconsistency("kernel does not map to the identity")

    def apply(self, g: Permutation) -> Permutation:
        """Image of g as a permutation of the cosets."""
        idx = self._index
        kern = self.kernel
        return Permutation(
            tuple(idx[_coset_canon(kern, t * g).images] + 1 for t in self.reps)
        )

    def preimage(self, q: Permutation) -> Permutation:
        """The canonical coset representative mapping to q."""
        return self.reps[q(self._trivial + 1) - 1]


def quotient(G: PermGroup, N: PermGroup) -> tuple[PermGroup, QuotientMap]:
    """The coset action of G on G/N together with the epimorphism."""
    hom = QuotientMap(G, N)
    return hom.image, hom


# -- intersections, closures, series ------------------------------------------


def intersection(A: PermGroup, B: PermGroup) -> PermGroup:
    """Exact A ∩ B.

    Filters the smaller group's elements when it is below the brute-force
    cap; otherwise backtracks through the smaller chain, pruning branches
    whose partial base images cannot extend to an element of the other
    group (the other chain is rebuilt on the same base to allow this).
    """
    if A.degree != B.degree:
        raise DegreeMismatchError("degree mismatch")
    if A.order > B.order:
        A, B = B, A
    if A.order <= current_caps().brute_order:
        return group_from_elements(
            A.degree, (g for g in A.iter_elements() if g in B)
        )
    return _intersection_backtrack(A, B)


def _intersection_backtrack(A: PermGroup, B: PermGroup) -> PermGroup:
    degree = A.degree
    B2 = PermGroup(degree, B.generators, base_hint=A.base)
    levels_a = A._levels
    levels_b = B2._levels
    found: list[Permutation] = []
    H = PermGroup(degree, ())

    def rec(i: int, partial: Permutation, w: Permutation):
        nonlocal H
        if i == len(levels_a):
            residue, _ = B2._sift(partial * w)
            if residue.is_identity() and not partial.is_identity():
                if partial not in H:
                    found.append(partial)
                    H = PermGroup(degree, tuple(found))
            return
        La = levels_a[i]
        Tb = levels_b[i].transversal
        for pt in sorted(La.transversal):
            p2 = La.transversal[pt] * partial
            v = w(p2(La.point))
            u = Tb.get(v)
            if u is None:
                continue
            rec(i + 1, p2, w * u.inverse())
        return

    rec(0, Permutation.identity(degree), Permutation.identity(degree))
    return H


def normal_closure(G: PermGroup, seeds) -> PermGroup:
    """Smallest subgroup containing the seeds and closed under G-conjugation."""
    K = PermGroup(G.degree, tuple(seeds))
    while True:
        new = []
        for k in K.generators:
            for s in G.generators:
                c = k.conj(s)
                if c not in K:
                    new.append(c)
        if not new:
            return K
        K = PermGroup(G.degree, K.generators + tuple(new))


def derived_subgroup(G: PermGroup) -> PermGroup:
    seeds = [
        commutator(a, b) for a, b in itertools.combinations(G.generators, 2)
    ]
    return normal_closure(G, seeds)


@dataclass(frozen=True)
class DerivedSeries:
    groups: tuple[PermGroup, ...]
    is_solvable: bool


def derived_series(G: PermGroup) -> DerivedSeries:
    """G ⊇ G' ⊇ G'' ... until stabilization; solvable iff it hits 1."""
    cached = G._memo.get("derived_series")
    if cached is not None:
        return cached
    series = [G]
    while series[-1].order > 1:
        D = derived_subgroup(series[-1])
        if D.order == series[-1].order:
            break
        series.append(D)
    result = DerivedSeries(tuple(series), series[-1].order == 1)
    G._memo["derived_series"] = result
    return result


def conjugacy_classes(G: PermGroup):
    """List of (least representative, frozenset of class elements)."""
    cached = G._memo.get("classes")
    if cached is not None:
        return cached
    seen: set[Permutation] = set()
    classes = []
    for e in G.sorted_elements():
        if e in seen:
            continue
        orbit = {e}
        queue = [e]
        qi = 0
        while qi < len(queue):
            y = queue[qi]
            qi += 1
            for s in G.generators:
                z = y.conj(s)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        seen |= orbit
        classes.append((e, frozenset(orbit)))
    G._memo["classes"] = classes
    return classes
