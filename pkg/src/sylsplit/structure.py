"""Characteristic and structural subgroups: center, Sylow subgroups, the
radical series O_p / O_{p'} / O_{p',p} / Z_p^*, the Thompson subgroup,
invariant-factor decompositions, commutators and complement search.

Everything here is exact and deterministic; exhaustive scans are guarded by
the caps in :mod:`sylsplit.caps`.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .caps import current_caps
from .errors import (
    DegreeMismatchError,
    InternalInconsistency,
    NotASubgroupError,
    ResourceCapError,
)
from .group import (
    PermGroup,
    QuotientMap,
    centralizer,
    conjugacy_classes,
    group_from_elements,
    intersection,
    normal_closure,
    quotient,
)
from .perm import Permutation


def p_part(n: int, p: int) -> int:
    """The largest power of p dividing n."""
    pp = 1
    while n % p == 0:
        pp *= p
        n //= p
    return pp


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def center(G: PermGroup) -> PermGroup:
    """Z(G), exact."""
    cached = G._memo.get("center")
    if cached is not None:
        return cached
    if G.is_abelian():
        Z = G
    else:
        Z = G
        for g in G.generators:
            Z = centralizer(Z, g)
    G._memo["center"] = Z
    return Z


def _p_element_power(g: Permutation, p: int) -> Permutation | None:
    """The p-part of g as a power of g, or None when g has no p-part."""
    n = g.order()
    pp = p_part(n, p)
    if pp == 1:
        return None
    return g ** (n // pp)


def sylow(G: PermGroup, p: int) -> PermGroup:
    """A Sylow p-subgroup, deterministic via normalizer ascent.

    Starts from the least p-element of G in canonical order; while the
    subgroup P is smaller than the full p-part, adjoins the least p-element
    of N_G(P) outside P.  Returns the trivial group when p does not divide
    |G|.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    memo = G._memo.setdefault("sylow", {})
    if p in memo:
        return memo[p]
    from .group import normalizer  # local import keeps module load acyclic

    pp = p_part(G.order, p)
    if pp == 1:
        P = PermGroup(G.degree, ())
    elif pp == G.order:
        P = G
    else:
        seed = min(
            y
            for y in (_p_element_power(g, p) for g in G.iter_elements())
            if y is not None
        )
        P = PermGroup(G.degree, (seed,))
        while P.order < pp:
            N = normalizer(G, P)
            best = None
            for g in N.iter_elements():
                y = _p_element_power(g, p)
                if y is not None and y not in P and (best is None or y < best):
                    best = y
            if best is None:
                raise InternalInconsistency(
                    "normalizer ascent stalled below the full p-part"
                )
            P = PermGroup(G.degree, P.generators + (best,))
    memo[p] = P
    return P


def p_core(G: PermGroup, p: int) -> PermGroup:
    """O_p(G): the largest normal p-subgroup, as the core of a Sylow."""
    K = sylow(G, p)
    while True:
        for s in G.generators:
            Ks = K.conjugated_by(s)
            if not all(g in K for g in Ks.generators):
                K = intersection(K, Ks)
                break
        else:
            return K


def p_prime_core(G: PermGroup, p: int) -> PermGroup:
    """O_{p'}(G): the largest normal subgroup of order coprime to p.

    Fixpoint over conjugacy classes: adjoin the normal closure of every
    p'-element class whose closure is itself a p'-group.
    """
    degree = G.degree
    acc = PermGroup(degree, ())
    for rep, _cls in conjugacy_classes(G):
        if rep.is_identity() or rep.order() % p == 0:
            continue
        if rep in acc:
            continue
        closure = normal_closure(G, (rep,))
        if gcd(closure.order, p) == 1:
            acc = PermGroup(degree, acc.generators + closure.generators)
    if gcd(acc.order, p) != 1:
        raise InternalInconsistency("p'-core has order divisible by p")
    return acc


@dataclass(frozen=True)
class RadicalSeries:
    """O_p(G), O_{p'}(G), O_{p',p}(G) and Z_p^*(G) for one prime."""

    p: int
    o_p: PermGroup
    o_p_prime: PermGroup
    o_p_prime_p: PermGroup
    z_p_star: PermGroup


def radical_series(G: PermGroup, p: int) -> RadicalSeries:
    """All four radical subgroups at p (preimages through G/O_{p'})."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    memo = G._memo.setdefault("radical", {})
    if p in memo:
        return memo[p]
    o_p = p_core(G, p)
    o_pp = p_prime_core(G, p)
    if o_pp.is_trivial():
        o_p_prime_p = o_p
        z_p_star = center(G)
    else:
        Q, hom = quotient(G, o_pp)
        o_p_prime_p = _preimage(hom, p_core(Q, p))
        z_p_star = _preimage(hom, center(Q))
    rs = RadicalSeries(p, o_p, o_pp, o_p_prime_p, z_p_star)
    if not o_p.is_subgroup_of(o_p_prime_p):
        raise InternalInconsistency("O_p not contained in O_{p',p}")
    memo[p] = rs
    return rs


def _preimage(hom: QuotientMap, X: PermGroup) -> PermGroup:
    gens = hom.kernel.generators + tuple(hom.preimage(x) for x in X.generators)
    return PermGroup(hom.domain.degree, gens)


# -- subgroup enumeration ------------------------------------------------------


def _closure(degree: int, elems) -> frozenset[Permutation]:
    """Multiplicative closure of a finite set of permutations."""
    closed = {Permutation.identity(degree)}
    closed.update(elems)
    frontier = list(closed)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                for c in (a * b, b * a):
                    if c not in closed:
                        closed.add(c)
                        new.append(c)
        frontier = new
    return frozenset(closed)


def all_subgroups(G: PermGroup) -> list[frozenset[Permutation]]:
    """Element sets of all subgroups of G (exhaustive, cap-guarded)."""
    cap = current_caps().subgroup_enum
    if G.order > cap:
        raise ResourceCapError("subgroup_enum", cap, G.order)
    degree = G.degree
    elems = sorted(G.elements())
    trivial = frozenset({Permutation.identity(degree)})
    seen = {trivial}
    queue = [trivial]
    qi = 0
    while qi < len(queue):
        K = queue[qi]
        qi += 1
        for x in elems:
            if x in K:
                continue
            ext = _closure(degree, K | {x})
            if ext not in seen:
                seen.add(ext)
                queue.append(ext)
    return sorted(seen, key=lambda fs: (len(fs), sorted(p.images for p in fs)))


@dataclass(frozen=True)
class ThompsonData:
    """d(S), the witnesses A(S), and J(S) = <A(S)>."""

    d: int
    witnesses: tuple[PermGroup, ...]
    j: PermGroup


def thompson(S: PermGroup) -> ThompsonData:
    """Thompson subgroup data by exhaustive abelian-subgroup enumeration."""
    cached = S._memo.get("thompson")
    if cached is not None:
        return cached
    if len(prime_divisors(S.order)) > 1:
        raise ValueError("Thompson subgroup is defined for p-groups only")
    cap = current_caps().subgroup_enum
    if S.order > cap:
        raise ResourceCapError("subgroup_enum", cap, S.order)
    if S.is_abelian():
        data = ThompsonData(S.order, (S,), S)
        S._memo["thompson"] = data
        return data

    degree = S.degree
    elems = sorted(S.elements())
    identity = Permutation.identity(degree)
    trivial = frozenset({identity})
    seen: dict[frozenset, tuple] = {trivial: ()}
    queue = [trivial]
    qi = 0
    while qi < len(queue):
        A = queue[qi]
        qi += 1
        gens = seen[A]
        # x must centralize A for <A, x> to stay abelian
        for x in elems:
            if x in A or x.is_identity():
                continue
            if not all(x.commutes_with(a) for a in gens) or not all(
                x.commutes_with(a) for a in A
            ):
                continue
            ext = _closure(degree, A | {x})
            if ext not in seen:
                seen[ext] = gens + (x,)
                queue.append(ext)
    d = max(len(A) for A in seen)
    witness_sets = sorted(
        (A for A in seen if len(A) == d),
        key=lambda fs: sorted(p.images for p in fs),
    )
    witnesses = tuple(group_from_elements(degree, A) for A in witness_sets)
    j_gens = tuple(g for W in witnesses for g in W.generators)
    data = ThompsonData(d, witnesses, PermGroup(degree, j_gens))
    S._memo["thompson"] = data
    return data


# -- abelian decompositions and complements ------------------------------------


@dataclass(frozen=True)
class AbelianDecomp:
    """Invariant factors d1 | d2 | ... with an independent basis."""

    invariant_factors: tuple[int, ...]
    basis: tuple[Permutation, ...]


def abelian_decomp(A: PermGroup) -> AbelianDecomp:
    """Invariant-factor decomposition of a finite abelian group.

    Repeatedly splits off a cyclic factor of maximal order; the complement
    at each step is found by the exhaustive search, so the result doubles
    as a certificate.
    """
    if not A.is_abelian():
        raise ValueError("abelian_decomp requires an abelian group")
    factors: list[int] = []
    basis: list[Permutation] = []
    B = A
    while B.order > 1:
        x = min(B.elements(), key=lambda g: (-g.order(), g.images))
        out = complement_search(B, PermGroup(B.degree, (x,)))
        if out.complement is None:
            raise InternalInconsistency(
                "cyclic factor of maximal order admits no complement"
            )
        factors.append(x.order())
        basis.append(x)
        B = out.complement
    factors.reverse()
    basis.reverse()
    for a, b in zip(factors, factors[1:]):
        if b % a:
            raise InternalInconsistency("invariant factors fail divisibility")
    total = 1
    for f in factors:
        total *= f
    if total != A.order:
        raise InternalInconsistency("invariant factors do not multiply to |A|")
    return AbelianDecomp(tuple(factors), tuple(basis))


@dataclass(frozen=True)
class ComplementOutcome:
    """Result of the exhaustive complement scan inside an abelian group."""

    complement: PermGroup | None
    target_order: int
    candidates_checked: int


def complement_search(A: PermGroup, W: PermGroup) -> ComplementOutcome:
    """Find B ≤ A with B ∩ W = 1 and BW = A, or refute exhaustively.

    A must be abelian, so any complement is a direct complement.  The scan
    enumerates every subgroup of A of the complement's forced order
    |A|/|W|; when none works this is a refutation certificate.
    """
    if not A.is_abelian():
        raise ValueError("complement_search requires an abelian group")
    if not W.is_subgroup_of(A):
        raise NotASubgroupError("W is not a subgroup of A")
    cap = current_caps().subgroup_enum
    if A.order > cap:
        raise ResourceCapError("subgroup_enum", cap, A.order)
    target = A.order // W.order
    if W.is_trivial():
        return ComplementOutcome(A, target, 1)
    if target == 1:
        return ComplementOutcome(PermGroup(A.degree, ()), 1, 1)

    degree = A.degree
    wset = W.element_set()
    elems = sorted(A.elements())
    trivial = frozenset({Permutation.identity(degree)})
    seen = {trivial}
    queue = [trivial]
    qi = 0
    checked = 0
    hits: list[frozenset] = []
    while qi < len(queue):
        K = queue[qi]
        qi += 1
        if len(K) == target:
            checked += 1
            if len(K & wset) == 1:
                hits.append(K)
            continue
        for x in elems:
            if x in K:
                continue
            ext = _closure(degree, K | {x})
            if len(ext) > target or ext in seen:
                continue
            seen.add(ext)
            queue.append(ext)
    checked += sum(1 for K in seen if len(K) < target)
    if hits:
        best = min(hits, key=lambda fs: sorted(p.images for p in fs))
        return ComplementOutcome(
            group_from_elements(degree, best), target, checked
        )
    return ComplementOutcome(None, target, checked)


def commutator_with(A: PermGroup, G: PermGroup) -> PermGroup:
    """[A, G]: generated by a⁻¹aᵍ, closed under G-conjugation.

    Requires G to normalize A so the closure stays inside A.
    """
    if A.degree != G.degree:
        raise DegreeMismatchError("degree mismatch")
    if not G.normalizes(A):
        raise ValueError("G must normalize A")
    seeds = [
        a.inverse() * a.conj(g) for a in A.generators for g in G.generators
    ]
    K = normal_closure(G, seeds)
    if not K.is_subgroup_of(A):
        raise InternalInconsistency("[A, G] escaped A despite normalization")
    return K
