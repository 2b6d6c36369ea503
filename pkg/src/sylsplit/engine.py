"""End-to-end pipeline: hypothesis classification, choice of H, splitting
verification, cross-identities, the A6-based counterexample, and catalog
scans."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum

from .catalog import GroupFile
from .errors import (
    ConstructionError,
    InternalInconsistency,
    NotNormalError,
    SylsplitError,
)
from .group import PermGroup, derived_series, intersection, normalizer, quotient
from .perm import Permutation, parse_cycles
from .report import CheckResult, ReportRecord, sort_records
from .structure import (
    ComplementOutcome,
    abelian_decomp,
    center,
    commutator_with,
    complement_search,
    prime_divisors,
    radical_series,
    sylow,
    thompson,
)
from .transfer import (
    SplitWitness,
    split_via_transfer,
    weakly_closed_subgroup,
)


class CaseTag(Enum):
    SYLOW_NORMAL = "sylow_normal"
    SOLVABLE = "solvable"
    Z_IN_O22 = "z_in_o22"
    ODD_P = "odd_p"
    NONE = "none"
    # fusion-side analogue of Z_IN_O22: Z(S) <= O_p(F)
    Z_IN_OPF = "z_in_opf"


class Verdict(Enum):
    VERIFIED = "verified"
    COUNTEREXAMPLE = "counterexample"
    HYPOTHESIS_NOT_SATISFIED = "hypothesis_not_satisfied"


@dataclass(frozen=True)
class SplitReport:
    group: str
    p: int
    case: CaseTag
    chosen_h: str
    verdict: Verdict
    witness: SplitWitness | None
    complement: ComplementOutcome | None
    zs_type: tuple[int, ...]
    w_type: tuple[int, ...]

    @property
    def kernel_type(self) -> tuple[int, ...] | None:
        if self.witness is None:
            return None
        return abelian_decomp(self.witness.kernel).invariant_factors


def classify_case(G: PermGroup, p: int) -> CaseTag:
    """Strongest applicable hypothesis of the splitting theorem.

    Priority: sylow_normal > solvable > z_in_o22 > odd_p > none.  The
    containment Z(S) <= O_{p',p}(G) is asserted whenever G is solvable
    or S is normal, since both imply it.
    """
    if G.order % p:
        return CaseTag.SYLOW_NORMAL  # S = 1 is normal
    S = sylow(G, p)
    s_normal = S.is_normal_in(G)
    solvable = derived_series(G).is_solvable
    z_in = center(S).is_subgroup_of(radical_series(G, p).o_p_prime_p)
    if (s_normal or solvable) and not z_in:
        raise InternalInconsistency(
            "Z(S) <= O_{p',p}(G) must hold for solvable G or normal S"
        )
    if s_normal:
        return CaseTag.SYLOW_NORMAL
    if solvable:
        return CaseTag.SOLVABLE
    if z_in:
        return CaseTag.Z_IN_O22
    if p > 2:
        return CaseTag.ODD_P
    return CaseTag.NONE


def verify_wgs(G: PermGroup, p: int, name: str = "G") -> SplitReport:
    """Verify that W_G(S) is a direct factor of Z(S), or diagnose why not.

    Under a hypothesis case the splitting runs through the transfer (with
    H = G, or H = N_G(J(S)) for odd p).  Outside the hypotheses a
    diagnostic complement search still runs, which is how counterexamples
    are surfaced.
    """
    S = sylow(G, p)
    if S.is_trivial():
        trivial = PermGroup(G.degree, ())
        witness = SplitWitness(trivial, trivial, True, True)
        return SplitReport(
            group=name,
            p=p,
            case=CaseTag.SYLOW_NORMAL,
            chosen_h="G",
            verdict=Verdict.VERIFIED,
            witness=witness,
            complement=None,
            zs_type=(),
            w_type=(),
        )
    case = classify_case(G, p)
    zs = center(S)
    W = weakly_closed_subgroup(G, S)
    zs_type = abelian_decomp(zs).invariant_factors
    w_type = abelian_decomp(W).invariant_factors

    if case is CaseTag.NONE:
        out = complement_search(zs, W)
        verdict = (
            Verdict.HYPOTHESIS_NOT_SATISFIED
            if out.complement is not None
            else Verdict.COUNTEREXAMPLE
        )
        return SplitReport(
            group=name,
            p=p,
            case=case,
            chosen_h="G",
            verdict=verdict,
            witness=None,
            complement=out,
            zs_type=zs_type,
            w_type=w_type,
        )

    if case is CaseTag.ODD_P:
        td = thompson(S)
        H = normalizer(G, td.j)
        zj = center(td.j)
        if not (
            zs.is_subgroup_of(zj)
            and zj.is_subgroup_of(td.j)
            and td.j.is_subgroup_of(radical_series(H, p).o_p_prime_p)
        ):
            raise InternalInconsistency(
                "containment chain Z(S) <= Z(J(S)) <= J(S) <= O_{p',p}(H) failed"
            )
        witness = split_via_transfer(H, S, p)
        if witness.w != W:
            raise InternalInconsistency(
                "W_G(S) != W_H(S) for H = N_G(J(S)) with p odd"
            )
        witness = replace(witness, w=W)
        chosen_h = "N_G(J(S))"
    else:
        witness = split_via_transfer(G, S, p)
        chosen_h = "G"

    if not witness.certified:
        raise InternalInconsistency("split witness failed certification")
    return SplitReport(
        group=name,
        p=p,
        case=case,
        chosen_h=chosen_h,
        verdict=Verdict.VERIFIED,
        witness=witness,
        complement=None,
        zs_type=zs_type,
        w_type=w_type,
    )


@dataclass(frozen=True)
class NormalSylowReport:
    central_part: PermGroup  # Z(S) ∩ Z(G)
    commutator_part: PermGroup  # [Z(S), G]
    product_ok: bool
    intersection_trivial: bool
    w_is_central_part: bool

    @property
    def ok(self) -> bool:
        return self.product_ok and self.intersection_trivial and self.w_is_central_part


def verify_normal_sylow(G: PermGroup, p: int) -> NormalSylowReport:
    """Certify Z(S) = (Z(S) ∩ Z(G)) × [Z(S), G] for a normal Sylow S."""
    S = sylow(G, p)
    if not S.is_normal_in(G):
        raise NotNormalError("S is not normal in G")
    zs = center(S)
    A = intersection(zs, center(G))
    B = commutator_with(zs, G)
    meet = intersection(A, B)
    product_ok = A.order * B.order // meet.order == zs.order
    W = weakly_closed_subgroup(G, S)
    return NormalSylowReport(
        central_part=A,
        commutator_part=B,
        product_ok=product_ok,
        intersection_trivial=meet.is_trivial(),
        w_is_central_part=(W == A),
    )


@dataclass(frozen=True)
class CrossCheckReport:
    zp_star: CheckResult
    thompson_control: CheckResult | None  # p odd only
    quotient_naturality: CheckResult | None  # O_{p'}(G) != 1 only

    def as_dict(self) -> dict[str, CheckResult]:
        d = {"zp_star": self.zp_star}
        if self.thompson_control is not None:
            d["thompson_control"] = self.thompson_control
        if self.quotient_naturality is not None:
            d["quotient_naturality"] = self.quotient_naturality
        return d

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.as_dict().values())


def cross_checks(G: PermGroup, p: int) -> CrossCheckReport:
    """Three independent identities for W_G(S), reported with witnesses."""
    S = sylow(G, p)
    W = weakly_closed_subgroup(G, S)
    rs = radical_series(G, p)

    rhs = intersection(center(S), rs.z_p_star)
    zp = CheckResult(
        passed=(W == rhs),
        detail=f"|W|={W.order}, |Z(S) ∩ Z_{p}^*(G)|={rhs.order}",
    )

    tc = None
    if p > 2 and not S.is_trivial():
        td = thompson(S)
        H = normalizer(G, td.j)
        wh = weakly_closed_subgroup(H, S)
        opzh = sylow(center(H), p)
        tc = CheckResult(
            passed=(W == wh and W == opzh),
            detail=(
                f"|W_G(S)|={W.order}, |W_H(S)|={wh.order}, "
                f"|O_{p}(Z(H))|={opzh.order}"
            ),
        )

    qn = None
    if not rs.o_p_prime.is_trivial():
        Q, hom = quotient(G, rs.o_p_prime)
        Sq = PermGroup(Q.degree, tuple(hom.apply(g) for g in S.generators))
        zs = center(S)
        zimage = {hom.apply(z).images for z in zs.elements()}
        bijective = len(zimage) == zs.order == center(Sq).order
        wq = weakly_closed_subgroup(Q, Sq)
        w_onto = {hom.apply(w).images for w in W.elements()} == {
            x.images for x in wq.elements()
        }
        qn = CheckResult(
            passed=bijective and w_onto,
            detail=(
                f"|Z(S)|={zs.order}, |Z(SN/N)|={center(Sq).order}, "
                f"|W|={W.order}, |W_quot|={wq.order}"
            ),
        )

    return CrossCheckReport(zp_star=zp, thompson_control=tc, quotient_naturality=qn)


# -- the golden counterexample -------------------------------------------------

_A6_GENS = ("(1,2,3,4,5)", "(4,5,6)")
_A_GEN = "(5,6)(7,8,9,10)"
_S_GENS = ("(1,3)(2,4)", "(1,2)(5,6)", _A_GEN)


@dataclass(frozen=True)
class A6ExampleReport:
    order: int
    sylow_order: int
    zs_factors: tuple[int, ...]
    w_order: int
    w_generator: str
    splits: bool


def build_a6_example() -> tuple[PermGroup, PermGroup, A6ExampleReport]:
    """The order-1440 group A6⟨a⟩ on 10 points with its Sylow 2-subgroup.

    The element a = (5,6)(7,8,9,10) has order 4, squares into the center,
    and conjugates the A6 factor exactly as the transposition (5,6) does;
    all of this is re-verified on construction.
    """
    degree = 10
    gens = [parse_cycles(s, degree) for s in _A6_GENS + (_A_GEN,)]
    G = PermGroup(degree, gens)
    a = gens[2]
    if G.order != 1440:
        raise ConstructionError(f"|G| = {G.order}, expected 1440")
    if a.order() != 4:
        raise ConstructionError("a does not have order 4")
    a2 = a * a
    if any(not a2.commutes_with(g) for g in G.generators):
        raise ConstructionError("a^2 is not central in G")
    t56 = parse_cycles("(5,6)", degree)
    for s in _A6_GENS:
        x = parse_cycles(s, degree)
        if x.conj(a) != x.conj(t56):
            raise ConstructionError(
                "a does not act on A6 as conjugation by (5,6)"
            )
    S = PermGroup(degree, [parse_cycles(s, degree) for s in _S_GENS])
    if S.order != 32:
        raise ConstructionError(f"|S| = {S.order}, expected 32")
    if not S.is_subgroup_of(G):
        raise ConstructionError("S is not a subgroup of G")

    zs = center(S)
    zfac = abelian_decomp(zs).invariant_factors
    W = weakly_closed_subgroup(G, S)
    if W.order != 2 or a2 not in W:
        raise ConstructionError("W_G(S) is not <a^2>")
    out = complement_search(zs, W)
    report = A6ExampleReport(
        order=G.order,
        sylow_order=S.order,
        zs_factors=zfac,
        w_order=W.order,
        w_generator=str(a2),
        splits=out.complement is not None,
    )
    return G, S, report


# -- catalog scanning ----------------------------------------------------------


def _wgs_record(G: PermGroup, p: int, name: str) -> ReportRecord:
    t0 = time.perf_counter()
    try:
        rep = verify_wgs(G, p, name)
        cc = cross_checks(G, p)
        kernel = rep.kernel_type
        return ReportRecord(
            group=name,
            prime=p,
            mode="wgs",
            case=rep.case.value,
            verdict=rep.verdict.value,
            zs_factors=rep.zs_type,
            w_factors=rep.w_type,
            kernel_factors=kernel,
            cross_checks=cc.as_dict(),
            detail="" if cc.all_passed else "cross-check failure",
            seconds=time.perf_counter() - t0,
        )
    except SylsplitError as e:
        return ReportRecord(
            group=name,
            prime=p,
            mode="wgs",
            case="none",
            verdict="error",
            detail=f"{type(e).__name__}: {e}",
            seconds=time.perf_counter() - t0,
        )


def _zf_record(G: PermGroup, S: PermGroup, p: int, name: str) -> ReportRecord:
    from .fusion import FusionContext, verify_zf

    t0 = time.perf_counter()
    try:
        rep = verify_zf(FusionContext(G, S, p))
        return ReportRecord(
            group=name,
            prime=p,
            mode="zf",
            case=rep.case.value,
            verdict=rep.verdict.value,
            zs_factors=rep.zs_type,
            w_factors=rep.w_type,
            kernel_factors=rep.kernel_type,
            seconds=time.perf_counter() - t0,
        )
    except SylsplitError as e:
        return ReportRecord(
            group=name,
            prime=p,
            mode="zf",
            case="none",
            verdict="error",
            detail=f"{type(e).__name__}: {e}",
            seconds=time.perf_counter() - t0,
        )


def entry_records(gf: GroupFile, p: int, mode: str) -> list[ReportRecord]:
    """All records for one catalog entry at one prime."""
    G = gf.group()
    out = []
    if mode in ("wgs", "all"):
        out.append(_wgs_record(G, p, gf.name))
    if mode in ("zf", "all"):
        out.append(_zf_record(G, sylow(G, p), p, gf.name))
    return out


def _scan_task(args) -> list[dict]:
    name, degree, gens, p, mode = args
    gf = GroupFile(name=name, degree=degree, generators=gens)
    return [r.to_dict() for r in entry_records(gf, p, mode)]


def scan_catalog(
    entries,
    primes="all",
    mode: str = "all",
    jobs: int = 1,
) -> list[ReportRecord]:
    """Run the verification over every (group, prime) pair of a catalog.

    Per-entry errors are captured as records with verdict "error" and never
    abort the scan.  Records come back in canonical (group, prime, mode)
    order regardless of execution order.
    """
    if mode not in ("wgs", "zf", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    tasks = []
    for gf in sorted(entries, key=lambda e: e.name):
        order = gf.group().order
        if primes == "all" or primes is None:
            ps = prime_divisors(order)
        else:
            ps = [p for p in primes if order % p == 0]
        for p in ps:
            tasks.append((gf, p))
    records: list[ReportRecord] = []
    if jobs > 1 and len(tasks) > 1:
        args = [
            (gf.name, gf.degree, gf.generators, p, mode) for gf, p in tasks
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for dicts in pool.map(_scan_task, args):
                records.extend(ReportRecord.from_dict(d) for d in dicts)
    else:
        for gf, p in tasks:
            records.extend(entry_records(gf, p, mode))
    return sort_records(records)
