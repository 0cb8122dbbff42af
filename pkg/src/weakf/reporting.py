"""Check reports and their JSON serialization.

A report is the unit of output: one named identity or theorem clause,
its hypotheses, residual statistics and a verdict.  Verdicts:

    pass / fail                  residual vs tolerance, hypotheses met
    skipped-hypothesis-unmet     a precondition failed; never counted as pass
    vacuous                      no admissible sample existed (e.g. an
                                 inequality needing more dimensions)
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Hypothesis:
    name: str
    met: bool
    residual: float


@dataclass(frozen=True)
class CheckReport:
    name: str
    paper_ref: str
    hypotheses: tuple
    samples: int
    max_residual: float
    mean_residual: float
    tolerance: float
    verdict: str


@dataclass(frozen=True)
class NullityFit:
    kappa: float
    mu: float
    residual: float
    mu_identifiable: bool


def make_report(name, paper_ref, hypotheses, residuals, tolerance) -> CheckReport:
    """Aggregate a list of absolute residuals into a report.

    An empty residual list yields verdict 'vacuous'; an unmet hypothesis
    yields 'skipped-hypothesis-unmet' regardless of residuals.
    """
    hyps = tuple(hypotheses)
    if any(not h.met for h in hyps):
        mx = max((abs(r) for r in residuals), default=0.0)
        mn = (sum(abs(r) for r in residuals) / len(residuals)) if residuals else 0.0
        return CheckReport(name, paper_ref, hyps, len(residuals), float(mx),
                           float(mn), tolerance, "skipped-hypothesis-unmet")
    if not residuals:
        return CheckReport(name, paper_ref, hyps, 0, 0.0, 0.0, tolerance, "vacuous")
    mx = max(abs(r) for r in residuals)
    mn = sum(abs(r) for r in residuals) / len(residuals)
    verdict = "pass" if mx <= tolerance else "fail"
    return CheckReport(name, paper_ref, hyps, len(residuals), float(mx),
                       float(mn), tolerance, verdict)


@dataclass
class ReportDocument:
    version: str
    config: dict
    checks: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    @property
    def overall(self):
        return "fail" if any(c.verdict == "fail" for c in self.checks) else "pass"

    def to_dict(self):
        return {
            "version": self.version,
            "config": self.config,
            "checks": [asdict(c) for c in self.checks],
            "flags": list(self.flags),
            "overall": self.overall,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")


def summary_lines(doc: ReportDocument):
    """One line per check, CLI-friendly."""
    out = []
    for c in doc.checks:
        out.append(
            f"{c.verdict.upper():<26} {c.name:<28} "
            f"max={c.max_residual:.3e} tol={c.tolerance:.1e} n={c.samples}"
        )
    out.append(f"overall: {doc.overall}")
    return out
