"""Report records and their JSON / markdown emission."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

VERDICTS = ("verified", "counterexample", "hypothesis_not_satisfied", "error")


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ReportRecord:
    """One (group, prime, mode) row of a scan."""

    group: str
    prime: int
    mode: str  # "wgs" or "zf"
    case: str
    verdict: str
    zs_factors: tuple[int, ...] = ()
    w_factors: tuple[int, ...] = ()
    kernel_factors: tuple[int, ...] | None = None
    cross_checks: dict[str, CheckResult] | None = None
    detail: str = ""
    seconds: float = 0.0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_dict(self, include_timing: bool = True) -> dict:
        d = asdict(self)
        d["zs_factors"] = list(self.zs_factors)
        d["w_factors"] = list(self.w_factors)
        d["kernel_factors"] = (
            None if self.kernel_factors is None else list(self.kernel_factors)
        )
        if not include_timing:
            del d["seconds"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ReportRecord":
        cc = d.get("cross_checks")
        if cc is not None:
            cc = {k: CheckResult(**v) for k, v in cc.items()}
        return cls(
            group=d["group"],
            prime=d["prime"],
            mode=d["mode"],
            case=d["case"],
            verdict=d["verdict"],
            zs_factors=tuple(d.get("zs_factors", ())),
            w_factors=tuple(d.get("w_factors", ())),
            kernel_factors=(
                None
                if d.get("kernel_factors") is None
                else tuple(d["kernel_factors"])
            ),
            cross_checks=cc,
            detail=d.get("detail", ""),
            seconds=d.get("seconds", 0.0),
        )


@dataclass(frozen=True)
class ScanSummary:
    verified: int = 0
    counterexample: int = 0
    hypothesis_not_satisfied: int = 0
    error: int = 0

    @classmethod
    def of(cls, records) -> "ScanSummary":
        counts = {v: 0 for v in VERDICTS}
        for r in records:
            counts[r.verdict] += 1
        return cls(
            verified=counts["verified"],
            counterexample=counts["counterexample"],
            hypothesis_not_satisfied=counts["hypothesis_not_satisfied"],
            error=counts["error"],
        )


def sort_records(records) -> list[ReportRecord]:
    mode_rank = {"wgs": 0, "zf": 1}
    return sorted(
        records, key=lambda r: (r.group, r.prime, mode_rank.get(r.mode, 2))
    )


def _factors_str(factors) -> str:
    if factors is None:
        return "-"
    return "[" + ",".join(str(f) for f in factors) + "]"


def emit_report(records, fmt: str = "json", include_timing: bool = False) -> str:
    """Render records deterministically as JSON or a markdown table.

    Timing is excluded by default so identical inputs give byte-identical
    output.
    """
    records = sort_records(records)
    if fmt == "json":
        payload = {
            "records": [r.to_dict(include_timing=include_timing) for r in records],
            "summary": asdict(ScanSummary.of(records)),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt in ("md", "markdown"):
        lines = [
            "| group | p | mode | case | verdict | Z(S) | W |",
            "|---|---|---|---|---|---|---|",
        ]
        for r in records:
            lines.append(
                f"| {r.group} | {r.prime} | {r.mode} | {r.case} | {r.verdict}"
                f" | {_factors_str(r.zs_factors)} | {_factors_str(r.w_factors)} |"
            )
        s = ScanSummary.of(records)
        lines.append("")
        lines.append(
            f"verified: {s.verified}, counterexample: {s.counterexample}, "
            f"hypothesis_not_satisfied: {s.hypothesis_not_satisfied}, "
            f"error: {s.error}"
        )
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> list[ReportRecord]:
    """Inverse of emit_report for the machine format."""
    payload = json.loads(text)
    return [ReportRecord.from_dict(d) for d in payload["records"]]
