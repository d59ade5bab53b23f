"""
Human-readable and record renderings of scenario reports, benchmark reports and traces.
"""

import json
from typing import Dict, Iterable, List, Optional

from ..models.parameter import ParameterCatalog
from ..models.scenario import BenchmarkReport, ReportColumn, ScenarioReport, VariantSelection
from ..utils import format_number, format_quantity


def format_selection(selection: VariantSelection, catalog: ParameterCatalog) -> str:
    """V1{3.6s,6ct,9}"""
    values = ",".join(format_quantity(selection.qos[p.id], p.canonical_unit) for p in catalog)
    return f"{selection.variant_id}{{{values}}}"


def _align(rows: List[List[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines)


def _column_header(column: ReportColumn) -> str:
    changes = ", ".join(column.changes) if column.changes else "initial"
    return f"#{column.request_index} [{changes}]"


def render_table(report: ScenarioReport, catalog: ParameterCatalog) -> str:
    columns: List[ReportColumn] = ([report.baseline] if report.baseline else []) + report.columns
    lines = [f"Scenario: {report.scenario}"]
    if not columns:
        lines.append("(no requests issued)")
    else:
        rows = [["Goal"] + [_column_header(c) for c in columns]]
        for user in report.users:
            rows.append([user] + [format_selection(c.selections[user], catalog) if user in c.selections else "-"
                                  for c in columns])
        lines.append(_align(rows))
    lines.append(f"Requests: {report.requests}  Triggers: {report.triggers}  Re-estimations: {report.reestimations}")
    return "\n".join(lines)


def report_records(report: ScenarioReport) -> List[Dict]:
    records = []
    columns = ([("baseline", report.baseline)] if report.baseline else []) + [("change", c) for c in report.columns]
    for kind, column in columns:
        records.append({
            "type": kind,
            "request": column.request_index,
            "modelVersion": column.model_version,
            "changes": list(column.changes),
            "selections": {
                user: {"variant": s.variant_id, "qos": {k: format_number(v) for k, v in s.qos.items()}}
                for user, s in column.selections.items()
            },
        })
    records.append({"type": "summary", "scenario": report.scenario, "requests": report.requests,
                    "triggers": report.triggers, "reestimations": report.reestimations})
    return records


def render_records(records: Iterable[Dict]) -> str:
    return "\n".join(json.dumps(record, sort_keys=True) for record in records)


def render_benchmark(report: BenchmarkReport) -> str:
    return "\n".join([
        f"Variants: {report.n_variants}  Parameters: {report.n_params}  "
        f"Requests: {report.n_requests}  Issuers: {report.issuers}",
        f"  Mean selection latency: {report.mean_ms:.3f} ms",
        f"  p99 selection latency:  {report.p99_ms:.3f} ms",
        f"  Max selection latency:  {report.max_ms:.3f} ms",
        f"  Total wall time:        {report.total_ms:.1f} ms",
        f"  Summed selection time:  {report.busy_ms:.1f} ms",
    ])


def benchmark_record(report: BenchmarkReport) -> Dict:
    return {
        "type": "benchmark",
        "variants": report.n_variants,
        "parameters": report.n_params,
        "requests": report.n_requests,
        "issuers": report.issuers,
        "meanMs": round(report.mean_ms, 6),
        "p99Ms": round(report.p99_ms, 6),
        "maxMs": round(report.max_ms, 6),
        "totalMs": round(report.total_ms, 6),
        "busyMs": round(report.busy_ms, 6),
    }


def render_trace_table(records: Iterable[Dict], user: Optional[str] = None) -> str:
    rows = [["Request", "User", "Version", "Selected", "Score", "Excluded", "Tie-break"]]
    detector_rows = [["Seq", "Stream", "Value", "Mean before", "Mean after", "Triggered"]]
    for record in records:
        if record.get("type") == "detector":
            detector_rows.append([
                str(record["seq"]), f"{record['serviceId']}.{record['parameterId']}", record["value"],
                record["meanBefore"] or "-", record["meanAfter"], "yes" if record["triggered"] else "",
            ])
            continue
        if user is not None and record.get("userId") != user:
            continue
        excluded = sorted({variant for variant, _ in record.get("excluded", [])})
        rows.append([
            str(record["requestId"]), record["userId"], str(record["modelVersion"]), record["selected"],
            record["scores"].get(record["selected"], ""), ",".join(excluded) or "-",
            "yes" if record.get("tieBreakApplied") else "",
        ])
    parts = [_align(rows) if len(rows) > 1 else "(no selections)"]
    if len(detector_rows) > 1:
        parts.append(_align(detector_rows))
    return "\n\n".join(parts)
