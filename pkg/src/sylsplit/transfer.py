"""Weakly closed elements and the transfer map on fixed points.

The two central computations: the subgroup W_G(S) of elements of Z(S)
whose only G-conjugate inside S is themselves, and the transfer
tr_K^H : C_M(K) -> C_M(H) on an abelian group M acted on by H, written
multiplicatively as the product of ^t m over left-coset representatives.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

from .errors import HypothesisNotSatisfied, InternalInconsistency
from .group import (
    PermGroup,
    conj_orbit,
    group_from_elements,
    intersection,
    left_transversal,
    quotient,
    subgroup_centralizer,
)
from .perm import Permutation
from .structure import center, p_part, radical_series

logger = logging.getLogger(__name__)


def is_weakly_closed(G: PermGroup, S: PermGroup, x: Permutation) -> bool:
    """True iff the conjugation orbit of x under G meets S exactly in {x}."""
    if x not in S:
        raise ValueError("x must lie in S")
    orbit = {x}
    queue = [x]
    qi = 0
    while qi < len(queue):
        y = queue[qi]
        qi += 1
        for s in G.generators:
            z = y.conj(s)
            if z not in orbit:
                if z in S:
                    return False
                orbit.add(z)
                queue.append(z)
    return True


def _check_sylow(G: PermGroup, S: PermGroup, p: int | None = None) -> int:
    if not S.is_subgroup_of(G):
        raise ValueError("S must be a subgroup of G")
    if S.is_trivial():
        return p or 2
    from .structure import prime_divisors

    primes = prime_divisors(S.order)
    if len(primes) != 1:
        raise ValueError("S is not a p-group")
    q = primes[0]
    if p is not None and p != q:
        raise ValueError(f"S is a {q}-group, not a {p}-group")
    if S.order != p_part(G.order, q):
        raise ValueError("S is not a Sylow subgroup of G")
    return q


def weakly_closed_subgroup(G: PermGroup, S: PermGroup) -> PermGroup:
    """W_G(S): all weakly closed elements; a subgroup of Z(S).

    The subgroup property is a consequence of Sylow's theorem, not of the
    computation, so it is re-asserted and a failure is an internal error.
    """
    _check_sylow(G, S)
    zs = center(S)
    wset = frozenset(
        z for z in zs.sorted_elements() if is_weakly_closed(G, S, z)
    )
    W = group_from_elements(G.degree, wset)
    if W.order != len(wset) or not all(w in wset for w in W.elements()):
        raise InternalInconsistency(
            "weakly closed elements failed to form a subgroup"
        )
    if logger.isEnabledFor(logging.DEBUG):
        # redundant by centrality of weakly closed elements; debug-only
        outside = [
            x
            for x in S.sorted_elements()
            if x not in zs and is_weakly_closed(G, S, x)
        ]
        if outside:
            raise InternalInconsistency(
                f"weakly closed element outside Z(S): {outside[0]}"
            )
    return W


@dataclass(frozen=True)
class ConjugationModule:
    """An abelian group M acted on by H, with action (h, m) -> ^h m."""

    module: PermGroup
    actor: PermGroup
    action: Callable[[Permutation, Permutation], Permutation]

    def __post_init__(self):
        if not self.module.is_abelian():
            raise ValueError("module must be abelian")
        for h in self.actor.generators:
            for m in self.module.generators:
                if self.action(h, m) not in self.module:
                    raise ValueError("action does not preserve the module")

    def fixed_subgroup(self, K: PermGroup) -> PermGroup:
        """C_M(K): the K-fixed points of the module."""
        fixed = [
            m
            for m in self.module.sorted_elements()
            if all(self.action(k, m) == m for k in K.generators)
        ]
        return group_from_elements(self.module.degree, fixed)


def conjugation_module(M: PermGroup, H: PermGroup) -> ConjugationModule:
    """M as an H-set under ^h m = h m h⁻¹ (H must normalize abelian M)."""
    if not H.normalizes(M):
        raise ValueError("H must normalize M")
    return ConjugationModule(M, H, lambda h, m: h * m * h.inverse())


def transfer_fixed_points(
    mod: ConjugationModule, K: PermGroup, m: Permutation
) -> Permutation:
    """tr_K^H(m): the product of ^t m over left-coset representatives of K.

    Well defined (independent of the transversal) because m is K-fixed and
    the module is abelian; the result lies in C_M(H).
    """
    if m not in mod.module:
        raise ValueError("m is not in the module")
    if any(mod.action(k, m) != m for k in K.generators):
        raise ValueError("m is not fixed by K")
    reps = left_transversal(mod.actor, K)
    result = Permutation.identity(mod.module.degree)
    for t in reps:
        result = result * mod.action(t, m)
    if any(mod.action(h, result) != result for h in mod.actor.generators):
        raise InternalInconsistency("transfer value is not H-fixed")
    return result


@dataclass(frozen=True)
class SplitWitness:
    """Certificate data for Z(S) = w × kernel."""

    w: PermGroup
    kernel: PermGroup
    product_ok: bool
    intersection_trivial: bool

    @property
    def certified(self) -> bool:
        return self.product_ok and self.intersection_trivial


def _direct_witness(zs: PermGroup, w: PermGroup, kernel: PermGroup) -> SplitWitness:
    meet = intersection(w, kernel)
    product_order = w.order * kernel.order // meet.order
    return SplitWitness(
        w=w,
        kernel=kernel,
        product_ok=product_order == zs.order,
        intersection_trivial=meet.is_trivial(),
    )


def split_via_transfer(H: PermGroup, S: PermGroup, p: int) -> SplitWitness:
    """Split Z(S) over W_H(S) via the transfer, given Z(S) ≤ O_{p',p}(H).

    Reduces mod N = O_{p'}(H), computes the kernel and image of
    tr_S^H on C_M(S) for M = Z(O_p) in the quotient, pulls both back
    through the bijection z -> zN on Z(S), and certifies
    Z(S) = W_H(S) × ker(tr) with im(tr) = W_H(S).
    """
    _check_sylow(H, S, p)
    rs = radical_series(H, p)
    zs = center(S)
    if not zs.is_subgroup_of(rs.o_p_prime_p):
        raise HypothesisNotSatisfied(
            f"Z(S) is not contained in O_{{{p}',{p}}}(H)"
        )
    W = weakly_closed_subgroup(H, S)
    N = rs.o_p_prime

    if N.is_trivial():
        Hq, Sq = H, S
        pull = {z: z for z in zs.elements()}
        Qp = rs.o_p
    else:
        Hq, hom = quotient(H, N)
        Sq = PermGroup(Hq.degree, tuple(hom.apply(g) for g in S.generators))
        pull = {z: hom.apply(z) for z in zs.elements()}
        if len(set(x.images for x in pull.values())) != zs.order:
            raise InternalInconsistency(
                "quotient map is not injective on Z(S)"
            )
        from .structure import p_core

        Qp = p_core(Hq, p)

    M = center(Qp)
    mod = conjugation_module(M, Hq)
    cms = mod.fixed_subgroup(Sq)
    zsq = center(Sq)
    if cms != zsq:
        raise InternalInconsistency("C_M(S) differs from Z(S) after reduction")
    if zsq.order != zs.order:
        raise InternalInconsistency("Z(S) -> Z(SN/N) is not a bijection")
    cmh = mod.fixed_subgroup(Hq)

    identity = Permutation.identity(Hq.degree)
    reps = left_transversal(Hq, Sq)
    tr_of = {}
    for m in cms.sorted_elements():
        value = identity
        for t in reps:
            value = value * mod.action(t, m)
        tr_of[m] = value
    kernel_q = frozenset(m for m, v in tr_of.items() if v == identity)
    image_q = frozenset(tr_of.values())
    if not image_q <= cmh.element_set():
        raise InternalInconsistency("transfer image escaped C_M(H)")

    kernel = group_from_elements(
        H.degree, (z for z, zq in pull.items() if zq in kernel_q)
    )
    im_back = frozenset(z for z, zq in pull.items() if zq in image_q)
    if im_back != W.element_set():
        raise InternalInconsistency("im(tr) differs from the weakly closed subgroup")
    witness = _direct_witness(zs, W, kernel)
    if not witness.certified:
        raise InternalInconsistency(
            "transfer kernel and W_H(S) do not decompose Z(S)"
        )
    return witness
