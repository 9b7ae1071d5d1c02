"""Ingestion, end-to-end analysis and report / plot-data emission.

Input is a delimited UTF-8 table with a header naming the columns
``student_id``, ``cohort``, ``initial`` and ``final`` (any order; extra
columns are ignored with a warning). Scores are percentages by default and
are converted to the unit scale on the way in.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import descriptive as desc
from .cohort import (
    GainGroup,
    GainRecord,
    QuadrantCounts,
    build_gain_records,
    classify_gain_groups,
    extreme_gain_counts,
    group_by_cohort,
    hake_vs_individual,
    quadrant_counts,
)
from .errors import (
    DuplicateId,
    EmptySample,
    GainStatsError,
    IoError,
    ParseError,
    RangeError,
)
from .gain_core import ScoreRecord
from .inference import CohortComparison, RegressionFit, compare_cohorts, polyfit_r2

__all__ = [
    "REQUIRED_COLUMNS",
    "SCHEMA_VERSION",
    "Dataset",
    "AnalysisOptions",
    "CohortBlock",
    "AnalysisReport",
    "ingest",
    "ingest_text",
    "run_analysis",
    "report_to_dict",
    "emit_report",
    "gain_table",
    "emit_plot_data",
    "PLOT_FILES",
    "report_schema",
]

REQUIRED_COLUMNS = ("student_id", "cohort", "initial", "final")
SCHEMA_VERSION = 1
SUMMARY_VARIABLES = ("gain", "increase", "initial", "final")

# (name, response, degree): each fit is response ~ polynomial(initial) unless noted.
REGRESSIONS = (
    ("gain_vs_initial", "gain", "initial", 1),
    ("log_diff_vs_initial", "log_diff", "initial", 1),
    ("increase_vs_initial", "increase", "initial", 2),
    ("gain_vs_increase", "gain", "increase", 1),
)

PLOT_FILES = (
    "gain_histogram",
    "gain_kde",
    "gain_qq",
    "cohort_kde_overlay",
    "gain_vs_initial_scatter",
    "increase_vs_initial_scatter",
)


@dataclass(frozen=True)
class Dataset:
    records: Tuple[ScoreRecord, ...]
    scale: str = "unit"
    source: str = "<memory>"

    @property
    def cohorts(self) -> List[str]:
        return sorted({r.cohort for r in self.records})


def _parse_score(text: str, scale: str, column: str, line: int) -> float:
    try:
        value = Decimal(text.strip())
    except InvalidOperation:
        raise ParseError(f"{column} is not a number: {text!r}", line) from None
    if not value.is_finite():
        raise ParseError(f"{column} is not finite: {text!r}", line)
    upper = Decimal(100) if scale == "percent" else Decimal(1)
    if value < 0 or value > upper:
        raise RangeError(f"{column} = {text.strip()} is outside [0, {upper}] for {scale} scale", line)
    # Decimal division keeps 73 (percent) and 0.73 (unit) bit-identical.
    return float(value / 100) if scale == "percent" else float(value)


def ingest_text(text: str, scale: str = "percent", delimiter: str = ",", source: str = "<string>") -> Dataset:
    """Parse a delimited table held in memory. See :func:`ingest`."""
    if scale not in ("percent", "unit"):
        raise ValueError(f"scale must be 'percent' or 'unit', got {scale!r}")
    if text.startswith("\ufeff"):
        text = text[1:]
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    header = None
    for header in reader:
        if any(cell.strip() for cell in header):
            break
    else:
        raise ParseError("input has no header row", 1)
    header_line = reader.line_num
    names = [h.strip().lower() for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in names]
    if missing:
        raise ParseError(f"header lacks required column(s): {', '.join(missing)}", header_line)
    dupes = sorted({c for c in names if c and names.count(c) > 1})
    if dupes:
        raise ParseError(f"header repeats column(s): {', '.join(dupes)}", header_line)
    unknown = [h for h in names if h not in REQUIRED_COLUMNS]
    if unknown:
        warnings.warn(f"{source}: ignoring unknown column(s): {', '.join(unknown)}", stacklevel=2)
    pos = {c: names.index(c) for c in REQUIRED_COLUMNS}

    records: List[ScoreRecord] = []
    seen: Dict[Tuple[str, str], int] = {}
    for row in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(names):
            raise ParseError(f"expected {len(names)} fields, found {len(row)}", line)
        sid = row[pos["student_id"]].strip()
        cohort = row[pos["cohort"]].strip()
        if not sid:
            raise ParseError("empty student_id", line)
        if not cohort:
            raise ParseError("empty cohort", line)
        initial = _parse_score(row[pos["initial"]], scale, "initial", line)
        final = _parse_score(row[pos["final"]], scale, "final", line)
        key = (cohort, sid)
        if key in seen:
            raise DuplicateId(f"student {sid!r} already listed in cohort {cohort!r} on line {seen[key]}", line)
        seen[key] = line
        records.append(ScoreRecord(student_id=sid, cohort=cohort, initial=initial, final=final))
    return Dataset(records=tuple(records), scale=scale, source=source)


def ingest(path, scale: str = "percent", delimiter: str = ",") -> Dataset:
    """Read a score table from ``path``.

    Raises
    ------
    ParseError
        Malformed header or row; the message and ``.line`` give the 1-based
        line number.
    RangeError
        Score outside [0, 100] (percent) or [0, 1] (unit).
    DuplicateId
        Same student id twice in one cohort.
    IoError
        The file cannot be read.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read input: {exc}", path=str(path)) from exc
    return ingest_text(text, scale=scale, delimiter=delimiter, source=str(path))


@dataclass(frozen=True)
class AnalysisOptions:
    bins: Optional[int] = None
    bandwidth: Optional[float] = None
    z_threshold: float = 1.0
    compare: Optional[Tuple[str, str]] = None
    level: float = 0.95
    pooled_z: bool = False
    equal_var: bool = False


@dataclass(frozen=True)
class CohortBlock:
    """Statistics for one cohort (or for all records combined)."""

    label: str
    n: int
    n_gain_defined: int
    summaries: Dict[str, Optional[desc.DistributionSummary]]
    hake_gain: float
    mean_individual_gain: float
    z_threshold: float
    extreme_high: int
    extreme_low: int
    quadrants: QuadrantCounts
    group_counts: Dict[str, int]
    regressions: Dict[str, Optional[RegressionFit]]


@dataclass(frozen=True)
class AnalysisReport:
    options: AnalysisOptions
    records: Tuple[GainRecord, ...]
    pooled_records: Tuple[GainRecord, ...]
    labels: Tuple[GainGroup, ...]
    cohorts: Tuple[CohortBlock, ...]
    combined: CohortBlock
    comparison: Optional[CohortComparison]
    exclusions: Tuple[Tuple[str, str, str], ...]
    notes: Tuple[str, ...] = field(default=())


def _column(records: Sequence[GainRecord], name: str) -> List[Optional[float]]:
    return [getattr(r, name) for r in records]


def _summary(values, notes, where):
    vals = [v for v in values if v is not None]
    if not vals:
        notes.append(f"{where}: no defined values")
        return None
    try:
        return desc.summarize(vals)
    except GainStatsError as exc:
        notes.append(f"{where}: moments above the second omitted ({exc})")
        return desc.summarize(vals, moments=2)


def _regression(records, response, predictor, degree, notes, where):
    pairs = [
        (getattr(r, predictor), getattr(r, response))
        for r in records
        if getattr(r, predictor) is not None and getattr(r, response) is not None
    ]
    if not pairs:
        notes.append(f"{where}: no usable pairs")
        return None
    x, y = zip(*pairs)
    try:
        return polyfit_r2(x, y, degree)
    except GainStatsError as exc:
        notes.append(f"{where}: fit undefined ({exc})")
        return None


def _block(label: str, records: Sequence[GainRecord], options: AnalysisOptions, notes: List[str]) -> CohortBlock:
    defined = [r for r in records if r.gain is not None]
    summaries = {
        "gain": _summary(_column(defined, "gain"), notes, f"{label}/gain"),
        "increase": _summary(_column(defined, "increase"), notes, f"{label}/increase"),
        "initial": _summary(_column(defined, "initial"), notes, f"{label}/initial"),
        "final": _summary(_column(defined, "final"), notes, f"{label}/final"),
    }
    hake, mean_ind = hake_vs_individual(defined)
    high, low = extreme_gain_counts(defined, options.z_threshold)
    labels = classify_gain_groups(defined)
    counts = {g.value: 0 for g in GainGroup}
    for lab in labels:
        counts[lab.value] += 1
    regressions = {
        name: _regression(defined, resp, pred, deg, notes, f"{label}/{name}")
        for name, resp, pred, deg in REGRESSIONS
    }
    return CohortBlock(
        label=label,
        n=len(records),
        n_gain_defined=len(defined),
        summaries=summaries,
        hake_gain=hake,
        mean_individual_gain=mean_ind,
        z_threshold=options.z_threshold,
        extreme_high=high,
        extreme_low=low,
        quadrants=quadrant_counts(defined),
        group_counts=counts,
        regressions=regressions,
    )


def _add_context(exc: GainStatsError, context: str) -> None:
    exc.args = (f"{context}: {exc}",)


def run_analysis(dataset: Dataset, options: Optional[AnalysisOptions] = None) -> AnalysisReport:
    """Compute every statistic in the report. Pure in ``(dataset, options)``.

    Records with an initial score of 1 stay in the per-student table but are
    listed under ``exclusions`` and left out of all gain statistics.
    """
    options = options or AnalysisOptions()
    if not dataset.records:
        raise EmptySample("dataset has no records")
    notes: List[str] = []
    exclusions = tuple(
        (r.student_id, r.cohort, "initial score of 1 leaves no headroom; gain undefined")
        for r in dataset.records
        if r.initial >= 1.0
    )

    try:
        pooled = build_gain_records(dataset.records, pooled_z=True)
    except GainStatsError as exc:
        _add_context(exc, "combined cohort")
        raise
    groups = group_by_cohort(dataset.records)
    pooled_groups = group_by_cohort(pooled)
    by_label: Dict[str, List[GainRecord]] = {}
    blocks: List[CohortBlock] = []
    for label in sorted(groups):
        try:
            by_label[label] = pooled_groups[label] if options.pooled_z else build_gain_records(groups[label])
            blocks.append(_block(label, by_label[label], options, notes))
        except GainStatsError as exc:
            _add_context(exc, f"cohort {label!r}")
            raise
    try:
        combined = _block("combined", pooled, options, notes)
    except GainStatsError as exc:
        _add_context(exc, "combined cohort")
        raise
    # Per-student table in input order.
    index = {(r.cohort, r.student_id): r for recs in by_label.values() for r in recs}
    records = [index[(r.cohort, r.student_id)] for r in dataset.records]
    labels = tuple(classify_gain_groups(records))

    comparison = None
    pair = options.compare
    if pair is None and len(by_label) >= 2:
        pair = tuple(sorted(by_label)[:2])
    if pair is not None:
        a_label, b_label = pair
        samples = []
        for lab in (a_label, b_label):
            gains = [r.gain for r in by_label.get(lab, []) if r.gain is not None]
            if not gains:
                raise EmptySample(f"cohort {lab!r} has no records with a defined gain")
            samples.append(gains)
        try:
            comparison = compare_cohorts(
                samples[0], samples[1], level=options.level, equal_var=options.equal_var,
                labels=(a_label, b_label),
            )
        except GainStatsError as exc:
            _add_context(exc, f"comparison {a_label!r} vs {b_label!r}")
            raise

    return AnalysisReport(
        options=options,
        records=tuple(records),
        pooled_records=tuple(pooled),
        labels=labels,
        cohorts=tuple(blocks),
        combined=combined,
        comparison=comparison,
        exclusions=exclusions,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------- emission

def _summary_dict(s: Optional[desc.DistributionSummary]):
    if s is None:
        return None
    return {
        "n": s.n,
        "mean": s.mean,
        "sd": s.sd,
        "skewness": s.skewness,
        "kurtosis_pearson": s.kurtosis,
        "kurtosis_excess": s.excess_kurtosis,
    }


def _fit_dict(f: Optional[RegressionFit]):
    if f is None:
        return None
    return {"degree": f.degree, "coefficients": list(f.coefficients), "r_squared": f.r_squared}


def _block_dict(b: CohortBlock):
    q = b.quadrants
    return {
        "label": b.label,
        "n": b.n,
        "n_gain_defined": b.n_gain_defined,
        "summaries": {k: _summary_dict(b.summaries[k]) for k in SUMMARY_VARIABLES},
        "hake_gain": b.hake_gain,
        "mean_individual_gain": b.mean_individual_gain,
        "extreme_counts": {
            "z_threshold": b.z_threshold,
            "high": b.extreme_high,
            "low": b.extreme_low,
            "denominator": b.n_gain_defined,
        },
        "quadrants": {
            "below_below": q.below_below,
            "below_above": q.below_above,
            "above_below": q.above_below,
            "above_above": q.above_above,
            "denominator": q.total,
        },
        "groups": dict(b.group_counts, denominator=b.n_gain_defined),
        "regressions": {name: _fit_dict(b.regressions[name]) for name, *_ in REGRESSIONS},
    }


def report_to_dict(report: AnalysisReport) -> dict:
    """Nested plain-Python view of a report with a fixed key order."""
    o = report.options
    c = report.comparison
    return {
        "schema_version": SCHEMA_VERSION,
        "options": {
            "bins": o.bins,
            "bandwidth": o.bandwidth,
            "z_threshold": o.z_threshold,
            "compare": list(o.compare) if o.compare else None,
            "level": o.level,
            "z_scope": "pooled" if o.pooled_z else "cohort",
            "t_test": "pooled" if o.equal_var else "welch",
        },
        "conventions": {
            "scale": "unit (scores divided by 100 when ingested as percent)",
            "sd": "sample, divisor n-1",
            "skewness": "biased, m3 / m2**1.5",
            "kurtosis_pearson": "biased, m4 / m2**2 (normal = 3)",
            "kurtosis_excess": "kurtosis_pearson - 3",
            "quadrant_ties": "values equal to the mean count as above",
            "prob_superiority": "Phi(d / sqrt(2))",
        },
        "n_records": len(report.records),
        "exclusions": [
            {"student_id": sid, "cohort": coh, "reason": why} for sid, coh, why in report.exclusions
        ],
        "cohorts": [_block_dict(b) for b in report.cohorts],
        "combined": _block_dict(report.combined),
        "comparison": None if c is None else {
            "cohort_a": c.label_a,
            "cohort_b": c.label_b,
            "n_a": c.n_a,
            "n_b": c.n_b,
            "mean_a": c.mean_a,
            "mean_b": c.mean_b,
            "diff": c.diff,
            "level": c.level,
            "ci_low": c.ci_low,
            "ci_high": c.ci_high,
            "t_stat": c.t_stat,
            "df": c.df,
            "p_value": c.p_value,
            "cohens_d": c.cohens_d,
            "prob_superiority": c.prob_superiority,
        },
        "students": [
            {
                "student_id": r.student_id,
                "cohort": r.cohort,
                "initial": r.initial,
                "final": r.final,
                "gain": r.gain,
                "increase": r.increase,
                "log_diff": r.log_diff,
                "initial_z": r.initial_z,
                "gain_z": r.gain_z,
                "group": lab.value,
            }
            for r, lab in zip(report.records, report.labels)
        ],
        "notes": list(report.notes),
    }


def _round6(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: _round6(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_round6(v) for v in obj]
    return obj


def _fmt(v, width=0):
    if v is None:
        s = "-"
    elif isinstance(v, float):
        s = f"{v:.6g}"
    else:
        s = str(v)
    return s.rjust(width) if width else s


def _table(headers, rows):
    cells = [[_fmt(h) for h in headers]] + [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    out = []
    for j, row in enumerate(cells):
        out.append("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))))
        if j == 0:
            out.append("  ".join("-" * w for w in widths))
    return out


def _text_report(d: dict) -> str:
    lines = ["Individual gain analysis", "=" * 24, f"records: {d['n_records']}", ""]
    opts = d["options"]
    lines.append(
        f"z-scores: {opts['z_scope']}   z threshold: {_fmt(opts['z_threshold'])}   "
        f"t-test: {opts['t_test']}   level: {_fmt(opts['level'])}"
    )
    lines.append("")
    for block in d["cohorts"] + [d["combined"]]:
        title = f"Cohort {block['label']}" if block is not d["combined"] else "All cohorts combined"
        lines += [title, "-" * len(title)]
        lines.append(f"n = {block['n']} ({block['n_gain_defined']} with defined gain)")
        lines.append(
            f"Hake gain = {_fmt(block['hake_gain'])}   "
            f"mean individual gain = {_fmt(block['mean_individual_gain'])}"
        )
        rows = []
        for var in SUMMARY_VARIABLES:
            s = block["summaries"][var]
            if s is None:
                rows.append([var, None, None, None, None, None, None])
            else:
                rows.append([var, s["n"], s["mean"], s["sd"], s["skewness"],
                             s["kurtosis_pearson"], s["kurtosis_excess"]])
        lines += _table(["variable", "n", "mean", "sd", "skewness", "kurtosis", "excess kurt"], rows)
        ex = block["extreme_counts"]
        lines.append(
            f"gain z >= {_fmt(ex['z_threshold'])}: {ex['high']}/{ex['denominator']}   "
            f"gain z <= -{_fmt(ex['z_threshold'])}: {ex['low']}/{ex['denominator']}"
        )
        q = block["quadrants"]
        lines.append(f"quadrants (initial x gain vs mean, n = {q['denominator']}):")
        lines += _table(
            ["", "gain below", "gain above"],
            [["initial below", q["below_below"], q["below_above"]],
             ["initial above", q["above_below"], q["above_above"]]],
        )
        g = block["groups"]
        lines.append(
            "groups: " + "  ".join(f"{k}={g[k]}" for k in ("VERY_HIGH", "LOW_A", "LOW_B", "LOW_C", "NONE"))
            + f"  (of {g['denominator']})"
        )
        rows = []
        for name, fit in block["regressions"].items():
            if fit is None:
                rows.append([name, None, None, None])
            else:
                coef = ", ".join(_fmt(c) for c in fit["coefficients"])
                rows.append([name, fit["degree"], coef, fit["r_squared"]])
        lines += _table(["fit", "degree", "coefficients (ascending)", "r^2"], rows)
        lines.append("")
    c = d["comparison"]
    if c is not None:
        title = f"Comparison of mean gains: {c['cohort_a']} vs {c['cohort_b']}"
        lines += [title, "-" * len(title)]
        lines.append(f"means: {_fmt(c['mean_a'])} (n={c['n_a']}) vs {_fmt(c['mean_b'])} (n={c['n_b']})")
        lines.append(
            f"difference (a - b) = {_fmt(c['diff'])}   {_fmt(100 * c['level'])}% CI "
            f"[{_fmt(c['ci_low'])}, {_fmt(c['ci_high'])}]"
        )
        lines.append(f"t = {_fmt(c['t_stat'])}   df = {_fmt(c['df'])}   p = {_fmt(c['p_value'])}")
        lines.append(
            f"Cohen's d (b - a) = {_fmt(c['cohens_d'])}   "
            f"probability of superiority = {_fmt(c['prob_superiority'])}"
        )
        lines.append("")
    if d["exclusions"]:
        lines += ["Exclusions", "----------"]
        lines += [f"{e['cohort']}/{e['student_id']}: {e['reason']}" for e in d["exclusions"]]
        lines.append("")
    if d["notes"]:
        lines += ["Notes", "-----"]
        lines += d["notes"]
        lines.append("")
    lines.append("Kurtosis is Pearson (normal = 3); excess kurtosis = kurtosis - 3. "
                 "Skewness and kurtosis use divisor n, sd uses n - 1.")
    return "\n".join(lines) + "\n"


def emit_report(report: AnalysisReport, format: str = "text") -> bytes:
    """Serialize a report as JSON or as plain-text tables.

    Floats are written with 6 significant digits. The same report always
    yields the same bytes.
    """
    d = _round6(report_to_dict(report))
    if format == "json":
        return (json.dumps(d, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if format == "text":
        return _text_report(d).encode("utf-8")
    raise ValueError(f"unknown report format {format!r}; expected 'json' or 'text'")


GAIN_TABLE_COLUMNS = (
    "student_id", "cohort", "initial", "final", "gain", "increase",
    "log_diff", "initial_z", "gain_z", "group",
)


def gain_table(report: AnalysisReport, format: str = "text", delimiter: str = ",") -> bytes:
    """Per-student table: delimited text, or a JSON list of rows."""
    rows = report_to_dict(report)["students"]
    if format == "json":
        return (json.dumps(_round6(rows), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if format != "text":
        raise ValueError(f"unknown table format {format!r}")
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(GAIN_TABLE_COLUMNS)
    for row in rows:
        w.writerow(["" if row[c] is None else _fmt(row[c]) for c in GAIN_TABLE_COLUMNS])
    return buf.getvalue().encode("utf-8")


def report_schema() -> dict:
    """JSON schema describing :func:`emit_report` JSON output."""
    from importlib import resources

    return json.loads(resources.files("gainstats").joinpath("report_schema.json").read_text("utf-8"))


# ---------------------------------------------------------------- plot data

def _num(v) -> str:
    return "" if v is None or (isinstance(v, float) and not math.isfinite(v)) else f"{v:.12g}"


def _write_table(path: Path, comment: str, header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# {comment}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else _num(v) for v in row])
    try:
        path.write_text(buf.getvalue(), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write plot data: {exc}", path=str(path)) from exc


def _fit_caption(fit: Optional[RegressionFit]) -> str:
    if fit is None:
        return "fit undefined"
    coef = " ".join(f"{c:.6g}" for c in fit.coefficients)
    return f"r^2 = {fit.r_squared:.6g}; coefficients (ascending powers) = {coef}"


def emit_plot_data(report: AnalysisReport, out_dir, svg: bool = False) -> List[Path]:
    """Write the plot-data files (and optionally SVG renderings) to ``out_dir``.

    Every file is comma-delimited with one ``#`` comment line followed by a
    column header. Gains are taken from all cohorts combined.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create output directory: {exc}", path=str(out)) from exc
    opts = report.options
    recs = [r for r in report.records if r.gain is not None]
    gains = np.array([r.gain for r in recs])
    paths: Dict[str, Path] = {name: out / f"{name}.csv" for name in PLOT_FILES}
    written: List[Path] = []

    hist = desc.histogram(gains, opts.bins)
    dens = hist.density
    _write_table(
        paths["gain_histogram"],
        f"individual gain histogram; N = {gains.size}; bins = {hist.counts.size}",
        ["bin_left", "bin_right", "count", "density"],
        [(hist.bin_edges[i], hist.bin_edges[i + 1], int(hist.counts[i]), dens[i]) for i in range(hist.counts.size)],
    )
    curve = desc.kde(gains, opts.bandwidth)
    _write_table(
        paths["gain_kde"],
        f"Gaussian KDE of individual gain; N = {gains.size}; bandwidth = {curve.bandwidth:.6g}",
        ["grid", "density"],
        zip(curve.grid, curve.density),
    )
    qq = desc.qq_normal(gains)
    _write_table(
        paths["gain_qq"],
        f"normal quantile plot of individual gain; N = {gains.size}; positions (i - 0.5)/n",
        ["theoretical", "sample"],
        zip(qq.theoretical_quantiles, qq.sample_quantiles),
    )

    by_cohort = group_by_cohort(recs)
    labels = sorted(by_cohort)
    curves = {}
    for lab in labels:
        g = [r.gain for r in by_cohort[lab]]
        curves[lab] = desc.kde(g, opts.bandwidth) if len(g) >= 2 else None
    hs = [c.bandwidth for c in curves.values() if c is not None]
    h = max(hs) if hs else 1.0
    grid = np.linspace(gains.min() - 3 * h, gains.max() + 3 * h, desc.KDE_GRID_POINTS)
    cols = []
    for lab in labels:
        if curves[lab] is None:
            cols.append([None] * grid.size)
        else:
            cols.append(desc.kde([r.gain for r in by_cohort[lab]], curves[lab].bandwidth, grid=grid).density)
    _write_table(
        paths["cohort_kde_overlay"],
        "per-cohort Gaussian KDE of individual gain on a shared grid; bandwidths = "
        + ", ".join(f"{lab}: {'-' if curves[lab] is None else format(curves[lab].bandwidth, '.6g')}" for lab in labels),
        ["grid"] + [f"density_{lab}" for lab in labels],
        ([x] + [col[i] for col in cols] for i, x in enumerate(grid)),
    )

    fit = report.combined.regressions["gain_vs_initial"]
    _write_table(
        paths["gain_vs_initial_scatter"],
        f"individual gain vs initial score, linear fit; N = {len(recs)}; {_fit_caption(fit)}",
        ["student_id", "cohort", "initial", "gain", "fitted"],
        ((r.student_id, r.cohort, r.initial, r.gain, None if fit is None else float(fit.predict(r.initial)))
         for r in recs),
    )
    inc = [r for r in recs if r.increase is not None]
    fit2 = report.combined.regressions["increase_vs_initial"]
    _write_table(
        paths["increase_vs_initial_scatter"],
        f"fractional increase vs initial score, quadratic fit; N = {len(inc)}; {_fit_caption(fit2)}",
        ["student_id", "cohort", "initial", "increase", "fitted"],
        ((r.student_id, r.cohort, r.initial, r.increase, None if fit2 is None else float(fit2.predict(r.initial)))
         for r in inc),
    )
    written.extend(paths[name] for name in PLOT_FILES)
    if svg:
        from .render import render_svgs

        written.extend(render_svgs(paths, out))
    return written
