"""Text, Markdown, LaTeX and JSON outputs for sweep results."""
import enum
import json
import shlex
import sys
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from tqdm.auto import tqdm

from csqca.data_util import OutcomeSpec
from csqca.expression import NO_SOLUTION, parse_expression, render_expression
from csqca.metrics import FitStats, NecessityRow, SweepStats, TermFit
from csqca.minimize import Implicant, Literal, Model, SolutionSet, SolutionType
from csqca.script_util import DataError, format_dir_exp, format_fit, format_number, format_table
from csqca.sweep import PointDetail, SummaryRow, SweepKind, SweepResult, SweepSettings, hierarchy_profile
from csqca.truth_table import OutputCode, TruthTable, TruthTableRow, format_truth_table


class CellMark(enum.Enum):
    PRESENT = "present"
    ABSENT = "absent"
    BLANK = "blank"
    MIXED = "mixed"


class ChartLevel(enum.Enum):
    TERM = "term"
    THRESHOLD = "threshold"


@dataclass(frozen=True)
class SymbolSet:
    name: str
    present: str
    absent: str
    blank: str
    mixed: str

    def __post_init__(self):
        glyphs = [self.present, self.absent, self.mixed]
        if len(set(glyphs)) != len(glyphs) or self.blank in glyphs:
            raise ValueError(f"symbol set {self.name!r} reuses a glyph")

    def glyph(self, mark: CellMark) -> str:
        return getattr(self, mark.value)

    def footnote(self, with_mixed: bool) -> str:
        if self.name == "latex":
            text = (f"{self.present} = condition present; {self.absent} = condition absent; "
                    "blank = ``don't care''")
        else:
            text = f"{self.present} = condition present; {self.absent} = condition absent; blank = don't care"
        if with_mixed:
            text += f"; {self.mixed} = polarity differs across terms"
        return text + "."


SYMBOL_SETS: Dict[str, SymbolSet] = {
    "unicode": SymbolSet("unicode", "●", "⊗", "", "±"),
    "ascii": SymbolSet("ascii", "*", "x", "", "~"),
    "latex": SymbolSet("latex", r"$\bullet$", r"$\otimes$", "", r"$\pm$"),
}


@dataclass(frozen=True)
class ConfigChart:
    conditions: Tuple[str, ...]
    columns: Tuple[str, ...]
    cells: Tuple[Tuple[CellMark, ...], ...]  # [condition][column]
    level: ChartLevel
    symbols: str = "unicode"

    @property
    def has_mixed(self) -> bool:
        return any(mark is CellMark.MIXED for row in self.cells for mark in row)


def _term_marks(term: Implicant) -> List[CellMark]:
    lookup = {Literal.PRESENT: CellMark.PRESENT, Literal.ABSENT: CellMark.ABSENT, Literal.FREE: CellMark.BLANK}
    return [lookup[lit] for lit in term.literals]


def _threshold_marks(model: Model) -> List[CellMark]:
    marks = []
    for j in range(model.terms[0].k):
        seen = {t.literals[j] for t in model.terms}
        if seen == {Literal.PRESENT}:
            marks.append(CellMark.PRESENT)
        elif seen == {Literal.ABSENT}:
            marks.append(CellMark.ABSENT)
        elif seen == {Literal.FREE}:
            marks.append(CellMark.BLANK)
        else:
            marks.append(CellMark.MIXED)
    return marks


def row_models(result: SweepResult, row: SummaryRow) -> Tuple[Model, ...]:
    """All models of a row when details were kept, otherwise the model behind its expression."""
    if result.details is not None and row.key in result.details:
        return result.details[row.key].solutions.models
    model = parse_expression(row.expression, result.settings.conditions)
    return () if model is None else (model,)


def config_chart(result: SweepResult, level: Union[str, ChartLevel] = ChartLevel.TERM,
                 symbols: str = "unicode") -> ConfigChart:
    level = ChartLevel(level)
    if symbols not in SYMBOL_SETS:
        raise ValueError(f"unknown symbol set {symbols!r}")
    columns, column_marks = [], []
    for row in result.summary:
        models = row_models(result, row)
        if not models:
            continue
        label = result.row_label(row)
        if level is ChartLevel.THRESHOLD:
            columns.append(label)
            column_marks.append(_threshold_marks(models[0]))
            continue
        for m, model in enumerate(models, start=1):
            for t, term in enumerate(model.terms, start=1):
                # terms are numbered per model once a point has several models
                columns.append(f"{label} (M{m}.{t})" if len(models) > 1 else f"{label} (M{t})")
                column_marks.append(_term_marks(term))
    if not columns:
        raise ValueError("nothing to chart: every threshold point is 'No solution'")
    conditions = result.settings.conditions
    cells = tuple(tuple(marks[i] for marks in column_marks) for i in range(len(conditions)))
    return ConfigChart(conditions=conditions, columns=tuple(columns), cells=cells, level=level, symbols=symbols)


def render_chart(chart: ConfigChart, fmt: Optional[str] = None) -> str:
    fmt = fmt or chart.symbols
    if fmt not in SYMBOL_SETS:
        raise ValueError(f"unknown chart format {fmt!r}, use one of {', '.join(SYMBOL_SETS)}")
    symbols = SYMBOL_SETS[fmt]
    if fmt == "latex":
        lines = [r"\begin{tabular}{l" + "c" * len(chart.columns) + "}", r"\toprule",
                 " & ".join(["", *chart.columns]) + r" \\", r"\midrule"]
        for name, marks in zip(chart.conditions, chart.cells):
            lines.append(" & ".join([name, *(symbols.glyph(m) for m in marks)]) + r" \\")
        lines += [r"\bottomrule",
                  rf"\multicolumn{{{len(chart.columns) + 1}}}{{l}}{{\footnotesize {symbols.footnote(chart.has_mixed)}}}",
                  r"\end{tabular}"]
        return "\n".join(lines)

    name_width = max(len(name) for name in chart.conditions)
    lines = [" | ".join([" " * name_width, *chart.columns]).rstrip()]
    for name, marks in zip(chart.conditions, chart.cells):
        cells = [symbols.glyph(m).center(len(header)) for m, header in zip(marks, chart.columns)]
        lines.append(" | ".join([name.ljust(name_width), *cells]).rstrip())
    lines += ["", symbols.footnote(chart.has_mixed)]
    return "\n".join(lines)


def _coordinate_text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return format_number(value)


def format_summary_table(result: SweepResult) -> str:
    headers = [*result.settings.kind.coordinates, "expression", "inclS", "covS", "n_solutions"]
    rows = []
    for row in result.summary:
        rows.append([*(_coordinate_text(v) for v in row.key), row.expression,
                     format_fit(row.inclS), format_fit(row.covS), str(row.n_solutions)])
    return format_table(headers, rows, min_widths={"expression": len(NO_SOLUTION)})


def _values(values: Sequence[float]) -> str:
    return ", ".join(format_number(v) for v in values)


def _axes(axes) -> str:
    return "; ".join(f"{name} in {{{_values(values)}}}" for name, values in axes)


def parameter_lines(settings: SweepSettings) -> List[str]:
    lines = [f"Outcome: {settings.outcome}", f"Conditions: {', '.join(settings.conditions)}"]
    kind = settings.kind
    if kind is SweepKind.OT:
        lines.append(f"Outcome thresholds: {_values(settings.sweep_range)}")
        lines.append("Condition thresholds: " + ", ".join(f"{c}={format_number(v)}" for c, v in settings.thrX.items()))
    elif kind is SweepKind.CTS:
        lines.append(f"Outcome threshold: {format_number(settings.thrY)}")
        lines.append(f"Swept condition: {settings.sweep_var}")
        lines.append(f"Sweep range: {_values(settings.sweep_range)}")
        lines.append(f"Other conditions fixed at: {format_number(settings.thrX_default)}")
    elif kind is SweepKind.CTM:
        lines.append(f"Outcome threshold: {format_number(settings.thrY)}")
        lines.append(f"Condition grid: {_axes(settings.sweep_list)}")
    else:
        lines.append(f"Outcome thresholds: {_values(settings.sweep_range_Y)}")
        lines.append(f"Condition grid: {_axes(settings.sweep_list_X)}")
    lines.append(f"Consistency cutoff: {format_number(settings.incl_cut)}")
    lines.append(f"Frequency cutoff: {settings.n_cut}")
    lines.append(f"Solution type: {settings.solution_type.value}")
    if settings.dir_exp is not None:
        lines.append(f"Directional expectations: {format_dir_exp(settings.dir_exp)}")
    return lines


def format_print(result: SweepResult) -> str:
    header = f"{result.settings.kind.title} Results"
    lines = [header, "=" * len(header), "", "Analysis Parameters:"]
    lines += [f"  {line}" for line in parameter_lines(result.settings)]
    lines += ["", "Results by Threshold:", "", format_summary_table(result)]
    return "\n".join(lines)


def _range_text(value_range: Optional[Tuple[float, float]]) -> str:
    if value_range is None:
        return "NA"
    return f"{format_fit(value_range[0])} - {format_fit(value_range[1])}"


def format_stats(stats: SweepStats) -> str:
    return "\n".join([
        f"Number of thresholds analyzed: {stats.n_thresholds}",
        f"Number of unique solutions: {stats.unique_solutions}",
        f"Solution stability: {format_fit(stats.stability)}",
        f"Consistency range: {_range_text(stats.incl_range)}",
        f"Coverage range: {_range_text(stats.cov_range)}",
    ])


def format_profile(result: SweepResult) -> str:
    rows = [[label, str(n_terms), format_fit(mean)] for label, n_terms, mean in hierarchy_profile(result)]
    return format_table(["point", "terms", "literals_per_term"], rows)


def format_necessity(rows: Sequence[NecessityRow]) -> str:
    return format_table(["condition", "inclN", "covN"],
                        [[r.condition, format_fit(r.inclN), format_fit(r.covN)] for r in rows])


def format_fit_table(fit: FitStats, conditions: Sequence[str]) -> str:
    rows = [[render_expression(Model((t.term,)), conditions), format_fit(t.incl), format_fit(t.cov),
             format_fit(t.cov_unique)] for t in fit.per_term]
    rows.append(["solution", format_fit(fit.inclS), format_fit(fit.covS), ""])
    return format_table(["term", "incl", "cov", "covU"], rows)


def rerun_command(settings: SweepSettings, input_path: str = "DATA.csv") -> str:
    """CLI invocation that recomputes the summary from the dataset with the recorded digest."""
    def axes(list_):
        return ",".join(f"{name}={'|'.join(format_number(v) for v in values)}" for name, values in list_)

    args = ["csqca", settings.kind.value, "--input", input_path, "--outcome", settings.outcome,
            "--conditions", ",".join(settings.conditions)]
    kind = settings.kind
    if kind is SweepKind.OT:
        args += ["--sweep-range", "|".join(map(format_number, settings.sweep_range)),
                 "--thrx", ",".join(f"{c}={format_number(v)}" for c, v in settings.thrX.items())]
    elif kind is SweepKind.CTS:
        args += ["--sweep-var", settings.sweep_var, "--sweep-range", "|".join(map(format_number, settings.sweep_range)),
                 "--thry", format_number(settings.thrY), "--thrx-default", format_number(settings.thrX_default)]
    elif kind is SweepKind.CTM:
        args += ["--sweep-list", axes(settings.sweep_list), "--thry", format_number(settings.thrY)]
    else:
        args += ["--sweep-list-x", axes(settings.sweep_list_X),
                 "--sweep-range-y", "|".join(map(format_number, settings.sweep_range_Y))]
    args += ["--incl-cut", format_number(settings.incl_cut), "--n-cut", str(settings.n_cut),
             "--include", "remainders" if settings.include_remainders else "none"]
    if settings.dir_exp is not None:
        args += ["--dir-exp", format_dir_exp(settings.dir_exp)]
    if settings.return_details:
        args.append("--details")
    return " ".join(shlex.quote(a) for a in args)


def _fence(text: str, lang: str = "text") -> List[str]:
    return [f"```{lang}", text, "```"]


def _point_section(result: SweepResult, row: SummaryRow, detail: PointDetail) -> List[str]:
    conditions = result.settings.conditions
    solutions = detail.solutions
    lines = [f"### {result.row_label(row)}", "", "Truth table (observed configurations):", ""]
    lines += _fence(format_truth_table(detail.truth_table, observed_only=True))
    lines += ["", f"Solutions ({solutions.solution_type.value}): {solutions.n_solutions}", ""]
    if not solutions.models:
        lines.append(f"- {NO_SOLUTION}")
    for j, model in enumerate(solutions.models, start=1):
        lines.append(f"- M{j}: {render_expression(model, conditions)}")
    if solutions.conservative is not None:
        lines.append(f"- conservative bound: {render_expression(solutions.conservative, conditions)}")
        lines.append(f"- parsimonious bound: {render_expression(solutions.parsimonious, conditions)}")
        if not solutions.bounded:
            lines.append("- note: no parsimonious model contains every conservative term, "
                         "unmatched conservative terms are kept as is")
    if solutions.models:
        epi = sorted(solutions.epi, key=Implicant.sort_key)
        spi = sorted(solutions.spi, key=Implicant.sort_key)
        lines.append("- EPI: " + (", ".join(render_expression(Model((t,)), conditions) for t in epi) or "none"))
        lines.append("- SPI: " + (", ".join(render_expression(Model((t,)), conditions) for t in spi) or "none"))
    for j, fit in enumerate(detail.fits, start=1):
        lines += ["", f"Fit of M{j}:", ""]
        lines += _fence(format_fit_table(fit, conditions))
    lines += ["", "Necessity:", ""]
    lines += _fence(format_necessity(detail.necessity))
    return lines


def generate_report(
    result: SweepResult,
    output_path,
    title: str = "Threshold Sweep Report",
    fmt: str = "full",
    include_chart: bool = True,
    chart_symbol_set: str = "unicode",
    chart_level: Union[str, ChartLevel] = ChartLevel.TERM,
    timestamp: Union[None, str, datetime] = None,
) -> str:
    """Write a Markdown report for `result` and return its text."""
    if fmt not in ("full", "summary"):
        raise ValueError(f"unknown report format {fmt!r}, use full or summary")
    if chart_symbol_set not in SYMBOL_SETS:
        raise ValueError(f"unknown symbol set {chart_symbol_set!r}")
    if timestamp is None:
        timestamp = datetime.now()
    if isinstance(timestamp, datetime):
        timestamp = timestamp.isoformat(timespec="seconds")
    settings = result.settings

    lines = [f"# {title}", "", f"Generated: {timestamp}", "", "## Reproducibility", ""]
    lines += [
        f"- Sweep: {settings.kind.value} ({settings.kind.title.lower()})",
        f"- Cases: {settings.n_cases}",
        f"- Dataset digest (SHA-256): {settings.dataset_digest}",
        f"- Include: {'remainders' if settings.include_remainders else 'none'}",
        f"- Directional expectations: {format_dir_exp(settings.dir_exp)}",
        f"- Details kept: {'yes' if settings.return_details else 'no'}",
        f"- csqca version: {settings.version}",
        "",
        "Analysis Parameters:",
        "",
    ]
    lines += _fence("\n".join(parameter_lines(settings)))
    lines += ["", "Re-run with:", ""]
    lines += _fence(rerun_command(settings), "sh")
    lines += ["", "## Summary", ""]
    lines += _fence(format_summary_table(result))
    lines += ["", "## Sweep statistics", ""]
    lines += _fence(format_stats(result.stats))
    lines += ["", "## Solution structure", ""]
    lines += _fence(format_profile(result))

    if include_chart:
        level = ChartLevel(chart_level)
        lines += ["", f"## Configuration chart ({level.value} level)", ""]
        try:
            chart = config_chart(result, level, chart_symbol_set)
        except ValueError:
            lines.append(f"No configuration chart: every threshold point is '{NO_SOLUTION}'.")
        else:
            lines += _fence(render_chart(chart), "latex" if chart_symbol_set == "latex" else "text")

    if fmt == "full" and result.details:
        lines += ["", "## Threshold points"]
        for row in result.summary:
            if row.key in result.details:
                lines.append("")
                lines += _point_section(result, row, result.details[row.key])

    text = "\n".join(lines) + "\n"
    Path(output_path).write_text(text, encoding="utf-8")
    tqdm.write(f"Report generated: {output_path}", file=sys.stderr)
    return text


# result file

def _implicant_code(term: Implicant) -> str:
    return "".join({Literal.PRESENT: "1", Literal.ABSENT: "0", Literal.FREE: "-"}[lit] for lit in term.literals)


def _implicant_from_code(code: str) -> Implicant:
    lookup = {"1": Literal.PRESENT, "0": Literal.ABSENT, "-": Literal.FREE}
    if not code or any(ch not in lookup for ch in code):
        raise DataError(f"malformed term code {code!r}")
    return Implicant(tuple(lookup[ch] for ch in code))


def _model_codes(model: Optional[Model]):
    return None if model is None else [_implicant_code(t) for t in model.terms]


def _model_from_codes(codes) -> Optional[Model]:
    return None if codes is None else Model(tuple(_implicant_from_code(c) for c in codes))


def _axes_to_json(axes):
    return None if axes is None else [[name, list(values)] for name, values in axes]


def _axes_from_json(axes):
    return None if axes is None else tuple((name, tuple(float(v) for v in values)) for name, values in axes)


def _tuple_or_none(values, cast=float):
    return None if values is None else tuple(cast(v) for v in values)


def settings_to_dict(s: SweepSettings) -> dict:
    return {
        "kind": s.kind.value,
        "outcome": s.outcome,
        "conditions": list(s.conditions),
        "incl_cut": s.incl_cut,
        "n_cut": s.n_cut,
        "include_remainders": s.include_remainders,
        "dir_exp": None if s.dir_exp is None else list(s.dir_exp),
        "return_details": s.return_details,
        "thrY": s.thrY,
        "thrX": s.thrX,
        "sweep_var": s.sweep_var,
        "sweep_range": None if s.sweep_range is None else list(s.sweep_range),
        "thrX_default": s.thrX_default,
        "sweep_list": _axes_to_json(s.sweep_list),
        "sweep_list_X": _axes_to_json(s.sweep_list_X),
        "sweep_range_Y": None if s.sweep_range_Y is None else list(s.sweep_range_Y),
        "dataset_digest": s.dataset_digest,
        "n_cases": s.n_cases,
        "version": s.version,
    }


def settings_from_dict(d: dict) -> SweepSettings:
    return SweepSettings(
        kind=SweepKind(d["kind"]),
        outcome=d["outcome"],
        conditions=tuple(d["conditions"]),
        incl_cut=float(d["incl_cut"]),
        n_cut=int(d["n_cut"]),
        include_remainders=bool(d["include_remainders"]),
        dir_exp=_tuple_or_none(d["dir_exp"], lambda v: None if v is None else int(v)),
        return_details=bool(d["return_details"]),
        thrY=None if d["thrY"] is None else float(d["thrY"]),
        thrX=None if d["thrX"] is None else {k: float(v) for k, v in d["thrX"].items()},
        sweep_var=d["sweep_var"],
        sweep_range=_tuple_or_none(d["sweep_range"]),
        thrX_default=None if d["thrX_default"] is None else float(d["thrX_default"]),
        sweep_list=_axes_from_json(d["sweep_list"]),
        sweep_list_X=_axes_from_json(d["sweep_list_X"]),
        sweep_range_Y=_tuple_or_none(d["sweep_range_Y"]),
        dataset_digest=d["dataset_digest"],
        n_cases=int(d["n_cases"]),
        version=d["version"],
    )


def _detail_to_dict(key, detail: PointDetail) -> dict:
    tt, sol = detail.truth_table, detail.solutions
    return {
        "coordinates": list(key),
        "outcome_threshold": detail.outcome_threshold,
        "condition_thresholds": detail.condition_thresholds,
        "truth_table": {
            "conditions": list(tt.conditions),
            "outcome": str(tt.outcome),
            "incl_cut": tt.incl_cut,
            "n_cut": tt.n_cut,
            "rows": [{"config": list(r.config), "n": r.n, "n_positive": r.n_positive,
                      "out": r.out.value, "cases": list(r.cases)} for r in tt.rows],
        },
        "solutions": {
            "solution_type": sol.solution_type.value,
            "models": [_model_codes(m) for m in sol.models],
            "epi": sorted(_implicant_code(t) for t in sol.epi),
            "spi": sorted(_implicant_code(t) for t in sol.spi),
            "dir_exp": None if sol.dir_exp is None else list(sol.dir_exp),
            "conservative": _model_codes(sol.conservative),
            "parsimonious": _model_codes(sol.parsimonious),
            "bounded": sol.bounded,
        },
        "fits": [{"inclS": f.inclS, "covS": f.covS,
                  "per_term": [{"term": _implicant_code(t.term), "incl": t.incl, "cov": t.cov,
                                "cov_unique": t.cov_unique} for t in f.per_term]} for f in detail.fits],
        "necessity": [{"condition": r.condition, "inclN": r.inclN, "covN": r.covN} for r in detail.necessity],
    }


def _detail_from_dict(d: dict) -> PointDetail:
    tt, sol = d["truth_table"], d["solutions"]
    truth_table = TruthTable(
        conditions=tuple(tt["conditions"]),
        rows=tuple(TruthTableRow(config=tuple(r["config"]), n=int(r["n"]), n_positive=int(r["n_positive"]),
                                 out=OutputCode(r["out"]), cases=tuple(r["cases"])) for r in tt["rows"]),
        incl_cut=float(tt["incl_cut"]),
        n_cut=int(tt["n_cut"]),
        outcome=OutcomeSpec.parse(tt["outcome"]),
    )
    solutions = SolutionSet(
        models=tuple(_model_from_codes(m) for m in sol["models"]),
        epi=frozenset(_implicant_from_code(c) for c in sol["epi"]),
        spi=frozenset(_implicant_from_code(c) for c in sol["spi"]),
        solution_type=SolutionType(sol["solution_type"]),
        dir_exp=_tuple_or_none(sol["dir_exp"], lambda v: None if v is None else int(v)),
        conservative=_model_from_codes(sol["conservative"]),
        parsimonious=_model_from_codes(sol["parsimonious"]),
        bounded=bool(sol.get("bounded", True)),
    )
    fits = tuple(FitStats(
        inclS=f["inclS"], covS=f["covS"],
        per_term=tuple(TermFit(term=_implicant_from_code(t["term"]), incl=t["incl"], cov=t["cov"],
                               cov_unique=t["cov_unique"]) for t in f["per_term"]),
    ) for f in d["fits"])
    return PointDetail(
        outcome_threshold=float(d["outcome_threshold"]),
        condition_thresholds={k: float(v) for k, v in d["condition_thresholds"].items()},
        truth_table=truth_table,
        solutions=solutions,
        fits=fits,
        necessity=tuple(NecessityRow(r["condition"], r["inclN"], r["covN"]) for r in d["necessity"]),
    )


def result_to_dict(result: SweepResult) -> dict:
    coordinates = result.settings.kind.coordinates
    summary = []
    for row in result.summary:
        record = dict(zip(coordinates, row.key))
        record.update(expression=row.expression, inclS=row.inclS, covS=row.covS, n_solutions=row.n_solutions)
        summary.append(record)
    stats = result.stats
    document = {
        "settings": settings_to_dict(result.settings),
        "summary": summary,
        "stats": {
            "n_thresholds": stats.n_thresholds,
            "unique_solutions": stats.unique_solutions,
            "stability": stats.stability,
            "incl_range": None if stats.incl_range is None else list(stats.incl_range),
            "cov_range": None if stats.cov_range is None else list(stats.cov_range),
        },
    }
    if result.details is not None:
        document["details"] = [_detail_to_dict(key, detail) for key, detail in result.details.items()]
    return document


def _coordinate_from_json(name: str, value):
    if name == "combo_id":
        return int(value)
    if name in ("thrY",) or (name == "threshold" and not isinstance(value, str)):
        return float(value)
    return value


def result_from_dict(document: dict) -> SweepResult:
    try:
        settings = settings_from_dict(document["settings"])
        coordinates = settings.kind.coordinates
        summary = tuple(SummaryRow(
            coordinates=tuple((name, _coordinate_from_json(name, record[name])) for name in coordinates),
            expression=record["expression"],
            inclS=record["inclS"],
            covS=record["covS"],
            n_solutions=int(record["n_solutions"]),
        ) for record in document["summary"])
        s = document["stats"]
        stats = SweepStats(
            n_thresholds=int(s["n_thresholds"]),
            unique_solutions=int(s["unique_solutions"]),
            stability=float(s["stability"]),
            incl_range=_tuple_or_none(s["incl_range"]),
            cov_range=_tuple_or_none(s["cov_range"]),
        )
        details = None
        if document.get("details") is not None:
            details = {}
            for d in document["details"]:
                key = tuple(_coordinate_from_json(name, v) for name, v in zip(coordinates, d["coordinates"]))
                details[key] = _detail_from_dict(d)
    except (KeyError, TypeError, AttributeError) as e:
        raise DataError(f"not a sweep result document: {e!r}")
    return SweepResult(summary=summary, settings=settings, stats=stats, details=details)


def export_result(result: SweepResult, output_path) -> str:
    text = json.dumps(result_to_dict(result), indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    Path(output_path).write_text(text, encoding="utf-8")
    return text


def import_result(path) -> SweepResult:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise DataError(f"{path} is not valid JSON: {e}")
    return result_from_dict(document)
