"""Structured suite reports and their serialization.

Reports round-trip through JSON exactly (floats written with repr, which is
shortest-round-trip); CSV and markdown renderings print 17 significant
digits. Field order is fixed by the dataclass declarations.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

SCHEMA = "omspace-report/1"


@dataclass(frozen=True)
class CaseRecord:
    case_id: str
    inputs_hash: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    config: dict
    constants: dict = field(default_factory=dict)
    cases: tuple[CaseRecord, ...] = ()
    drift: tuple[dict, ...] = ()
    verdict: bool = True
    schema: str = SCHEMA

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.cases if not c.passed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["cases"] = [asdict(c) for c in self.cases]
        return d

    @staticmethod
    def from_dict(d: dict) -> "SuiteReport":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unexpected report schema {d.get('schema')!r}")
        cases = tuple(CaseRecord(**c) for c in d["cases"])
        drift = tuple(dict(x) for x in d.get("drift", ()))
        return SuiteReport(d["suite"], d["seed"], dict(d["config"]),
                           dict(d.get("constants", {})), cases, drift,
                           bool(d["verdict"]))


def report_from_cases(suite: str, seed: int, config: dict, cases, constants=None,
                      drift=()) -> SuiteReport:
    cases = tuple(sorted(cases, key=lambda c: c.case_id))
    verdict = all(c.passed for c in cases) and len(cases) > 0
    return SuiteReport(suite, seed, dict(config), dict(constants or {}),
                       cases, tuple(drift), verdict)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def render_json(report: SuiteReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def ingest_json(text: str) -> SuiteReport:
    return SuiteReport.from_dict(json.loads(text))


def render_csv(report: SuiteReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["schema", report.schema])
    w.writerow(["suite", report.suite])
    w.writerow(["seed", report.seed])
    w.writerow(["verdict", report.verdict])
    w.writerow(["case_id", "inputs_hash", "lhs", "rhs", "ratio", "passed", "note"])
    for c in report.cases:
        w.writerow([c.case_id, c.inputs_hash, _fmt(c.lhs), _fmt(c.rhs),
                    _fmt(c.ratio), c.passed, c.note])
    return buf.getvalue()


def render_markdown(report: SuiteReport) -> str:
    lines = [f"# suite `{report.suite}`", "",
             f"- schema: {report.schema}",
             f"- seed: {report.seed}",
             f"- verdict: {'PASS' if report.verdict else 'FAIL'}",
             f"- cases: {len(report.cases)} ({report.n_failed} failed)", ""]
    if report.config:
        lines.append("## config")
        lines.append("")
        for k, v in report.config.items():
            lines.append(f"- {k} = {v}")
        lines.append("")
    if report.constants:
        lines.append("## frozen constants")
        lines.append("")
        for k, v in report.constants.items():
            lines.append(f"- {k} = {_fmt(v) if isinstance(v, float) else v}")
        lines.append("")
    lines.append("| case | hash | lhs | rhs | ratio | pass | note |")
    lines.append("|---|---|---|---|---|---|---|")
    for c in report.cases:
        lines.append(f"| {c.case_id} | {c.inputs_hash} | {_fmt(c.lhs)} | "
                     f"{_fmt(c.rhs)} | {_fmt(c.ratio)} | {c.passed} | {c.note} |")
    if report.drift:
        lines.append("")
        lines.append("## refinement drift")
        lines.append("")
        for row in report.drift:
            lines.append("- " + ", ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}"
                                          for k, v in row.items()))
    return "\n".join(lines) + "\n"


def emit(report: SuiteReport, fmt: str, path: str | Path | None = None) -> str:
    renderers = {"json": render_json, "csv": render_csv, "markdown": render_markdown}
    if fmt not in renderers:
        raise ValueError(f"unknown format {fmt!r}; choose from {sorted(renderers)}")
    text = renderers[fmt](report)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise OSError(f"failed writing report to {path}: {exc}") from exc
    return text
