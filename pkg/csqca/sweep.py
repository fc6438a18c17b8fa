import enum
import sys
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import wandb
from tqdm.auto import tqdm

from csqca import __version__
from csqca.data_util import OutcomeSpec, RawDataset, dataset_digest, dichotomize, expand_grid
from csqca.expression import solution_expression
from csqca.metrics import FitStats, NecessityRow, SweepStats, necessity, solution_fit, sweep_stats
from csqca.minimize import SolutionSet, SolutionType, check_dir_exp, minimize
from csqca.script_util import DEFAULT_INCL_CUT, DEFAULT_N_CUT, MAX_CONDITIONS, DataError, format_number
from csqca.truth_table import TruthTable, build_truth_table, check_cutoffs

Coordinate = Union[float, int, str]
Axes = Union[Mapping[str, Sequence[float]], Sequence[Tuple[str, Sequence[float]]]]


class SweepKind(enum.Enum):
    OT = "otsweep"
    CTS = "ctsweeps"
    CTM = "ctsweepm"
    DT = "dtsweep"

    @property
    def title(self) -> str:
        return {
            SweepKind.OT: "Outcome Threshold Sweep",
            SweepKind.CTS: "Single Condition Threshold Sweep",
            SweepKind.CTM: "Multiple Condition Threshold Sweep",
            SweepKind.DT: "Dual Threshold Sweep",
        }[self]

    @property
    def coordinates(self) -> Tuple[str, ...]:
        """Summary columns in front of `expression`."""
        return {
            SweepKind.OT: ("thrY",),
            SweepKind.CTS: ("threshold",),
            SweepKind.CTM: ("threshold", "combo_id"),
            SweepKind.DT: ("thrY", "combo_id", "thrX"),
        }[self]


@dataclass(frozen=True)
class SweepSettings:
    """Everything needed to recompute every summary row from the raw dataset."""
    kind: SweepKind
    outcome: str
    conditions: Tuple[str, ...]
    incl_cut: float
    n_cut: int
    include_remainders: bool
    dir_exp: Optional[Tuple[Optional[int], ...]]
    return_details: bool
    thrY: Optional[float] = None
    thrX: Optional[Dict[str, float]] = None
    sweep_var: Optional[str] = None
    sweep_range: Optional[Tuple[float, ...]] = None
    thrX_default: Optional[float] = None
    sweep_list: Optional[Tuple[Tuple[str, Tuple[float, ...]], ...]] = None
    sweep_list_X: Optional[Tuple[Tuple[str, Tuple[float, ...]], ...]] = None
    sweep_range_Y: Optional[Tuple[float, ...]] = None
    dataset_digest: str = ""
    n_cases: int = 0
    version: str = __version__

    @property
    def solution_type(self) -> SolutionType:
        if not self.include_remainders:
            return SolutionType.CONSERVATIVE
        if self.dir_exp is None:
            return SolutionType.PARSIMONIOUS
        return SolutionType.INTERMEDIATE


@dataclass(frozen=True)
class SummaryRow:
    coordinates: Tuple[Tuple[str, Coordinate], ...]
    expression: str
    inclS: Optional[float]
    covS: Optional[float]
    n_solutions: int

    @property
    def key(self) -> Tuple[Coordinate, ...]:
        return tuple(value for _, value in self.coordinates)

    def coordinate(self, name: str) -> Coordinate:
        return dict(self.coordinates)[name]


@dataclass(frozen=True)
class PointDetail:
    outcome_threshold: float
    condition_thresholds: Dict[str, float]
    truth_table: TruthTable
    solutions: SolutionSet
    fits: Tuple[FitStats, ...]
    necessity: Tuple[NecessityRow, ...]


@dataclass(frozen=True)
class SweepResult:
    summary: Tuple[SummaryRow, ...]
    settings: SweepSettings
    stats: SweepStats
    details: Optional[Dict[Tuple[Coordinate, ...], PointDetail]] = None

    def row_label(self, row: SummaryRow) -> str:
        parts = []
        for name, value in row.coordinates:
            if name == "combo_id":
                continue
            if isinstance(value, str):
                parts.append(value)
            else:
                if name == "threshold" and self.settings.sweep_var is not None:
                    name = self.settings.sweep_var
                parts.append(f"{name} = {format_number(value)}")
        return ", ".join(parts)


def run_pipeline(
    raw: RawDataset,
    outcome: OutcomeSpec,
    conditions: Sequence[str],
    condition_thresholds: Mapping[str, float],
    outcome_threshold: float,
    incl_cut: float = DEFAULT_INCL_CUT,
    n_cut: int = DEFAULT_N_CUT,
    include_remainders: bool = False,
    dir_exp: Optional[Sequence[Optional[int]]] = None,
) -> PointDetail:
    """dichotomize -> truth table -> minimize -> fit, at one threshold point."""
    binary = dichotomize(raw, conditions, condition_thresholds, outcome, outcome_threshold)
    tt = build_truth_table(binary, incl_cut=incl_cut, n_cut=n_cut)
    solutions = minimize(tt, include_remainders=include_remainders, dir_exp=dir_exp)
    return PointDetail(
        outcome_threshold=float(outcome_threshold),
        condition_thresholds=dict(binary.condition_thresholds),
        truth_table=tt,
        solutions=solutions,
        fits=tuple(solution_fit(m, binary) for m in solutions.models),
        necessity=necessity(binary),
    )


def summarize_point(coordinates, detail: PointDetail, conditions: Sequence[str]) -> SummaryRow:
    first_fit = detail.fits[0] if detail.fits else None
    return SummaryRow(
        coordinates=tuple(coordinates),
        expression=solution_expression(detail.solutions, conditions),
        inclS=first_fit.inclS if first_fit else None,
        covS=first_fit.covS if first_fit else None,
        n_solutions=detail.solutions.n_solutions,
    )


def check_parameters(
    raw: RawDataset,
    outcome: Union[str, OutcomeSpec],
    conditions: Sequence[str],
    incl_cut: float,
    n_cut: int,
    include_remainders: bool,
    dir_exp: Optional[Sequence[Optional[int]]],
):
    outcome = OutcomeSpec.parse(outcome)
    conditions = tuple(conditions)
    if not conditions:
        raise DataError("at least one condition is required")
    if len(set(conditions)) != len(conditions):
        raise DataError(f"duplicate conditions in {', '.join(conditions)}")
    if len(conditions) > MAX_CONDITIONS:
        raise DataError(f"at most {MAX_CONDITIONS} conditions are supported, got {len(conditions)}")
    for name in (*conditions, outcome.name):
        if name not in raw.columns:
            raise DataError(f"unknown variable {name!r}")
    if outcome.name in conditions:
        raise DataError(f"outcome {outcome.name!r} is listed among the conditions")
    check_cutoffs(incl_cut, n_cut)
    dir_exp = check_dir_exp(dir_exp, len(conditions), include_remainders)
    return outcome, conditions, dir_exp


def _ascending(values: Sequence[float], what: str) -> Tuple[float, ...]:
    values = tuple(sorted({float(v) for v in values}))
    if not values:
        raise DataError(f"{what} must contain at least one threshold")
    return values


def _condition_axes(sweep_list: Axes, conditions: Sequence[str], what: str):
    axes = list(sweep_list.items()) if isinstance(sweep_list, Mapping) else list(sweep_list)
    names = [name for name, _ in axes]
    unknown = [n for n in names if n not in conditions]
    if unknown:
        raise DataError(f"{what} names non-condition(s) {', '.join(unknown)}")
    missing = [c for c in conditions if c not in names]
    if missing:
        raise DataError(f"{what} has no axis for condition(s) {', '.join(missing)}; use a single value to fix one")
    return tuple((name, _ascending(values, f"{what} axis {name}")) for name, values in axes)


def _run_sweep(
    raw: RawDataset,
    settings: SweepSettings,
    outcome: OutcomeSpec,
    tasks: List[Tuple[Tuple, Dict[str, float], float]],
    progress: bool,
    wandb_project: Optional[str],
    wandb_entity: Optional[str],
) -> SweepResult:
    wandb_run = None
    if wandb_project is not None:
        wandb_run = wandb.init(project=wandb_project, entity=wandb_entity, config=settings_config(settings))
    elif progress:
        tqdm.write("--wandb_project not specified. Skipping W&B integration.", file=sys.stderr)

    rows, details = [], {}
    for coordinates, condition_thresholds, outcome_threshold in tqdm(
            tasks, desc=settings.kind.title, disable=not progress, file=sys.stderr):
        detail = run_pipeline(raw, outcome, settings.conditions, condition_thresholds, outcome_threshold,
                              incl_cut=settings.incl_cut, n_cut=settings.n_cut,
                              include_remainders=settings.include_remainders, dir_exp=settings.dir_exp)
        row = summarize_point(coordinates, detail, settings.conditions)
        rows.append(row)
        if settings.return_details:
            details[row.key] = detail
        if wandb_run is not None:
            log = {name: value for name, value in row.coordinates}
            log.update(inclS=row.inclS, covS=row.covS, n_solutions=row.n_solutions,
                       n_terms=len(detail.solutions.models[0].terms) if detail.solutions.models else 0)
            wandb_run.log(log)

    if wandb_run is not None:
        wandb_run.finish()
    return SweepResult(
        summary=tuple(rows),
        settings=settings,
        stats=sweep_stats(rows),
        details=details if settings.return_details else None,
    )


def settings_config(settings: SweepSettings) -> dict:
    config = {k: v for k, v in vars(settings).items() if v is not None}
    config['kind'] = settings.kind.value
    config['solution_type'] = settings.solution_type.value
    return config


def ot_sweep(
    raw: RawDataset,
    outcome: Union[str, OutcomeSpec],
    conditions: Sequence[str],
    sweep_range: Sequence[float],
    thrX: Mapping[str, float],
    incl_cut: float = DEFAULT_INCL_CUT,
    n_cut: int = DEFAULT_N_CUT,
    include_remainders: bool = False,
    dir_exp: Optional[Sequence[Optional[int]]] = None,
    return_details: bool = False,
    progress: bool = False,
    wandb_project: Optional[str] = None,
    wandb_entity: Optional[str] = None,
) -> SweepResult:
    """Vary the outcome threshold with condition thresholds held at `thrX`."""
    outcome, conditions, dir_exp = check_parameters(raw, outcome, conditions, incl_cut, n_cut, include_remainders, dir_exp)
    sweep_range = _ascending(sweep_range, "sweep_range")
    if set(thrX) != set(conditions):
        raise DataError(f"thrX must give exactly one threshold per condition ({', '.join(conditions)})")
    thrX = {c: float(thrX[c]) for c in conditions}
    settings = SweepSettings(
        kind=SweepKind.OT, outcome=str(outcome), conditions=conditions, incl_cut=float(incl_cut),
        n_cut=int(n_cut), include_remainders=include_remainders, dir_exp=dir_exp,
        return_details=return_details, thrX=thrX, sweep_range=sweep_range,
        dataset_digest=dataset_digest(raw), n_cases=raw.n_cases,
    )
    tasks = [((("thrY", y),), thrX, y) for y in sweep_range]
    return _run_sweep(raw, settings, outcome, tasks, progress, wandb_project, wandb_entity)


def ct_sweep_s(
    raw: RawDataset,
    outcome: Union[str, OutcomeSpec],
    conditions: Sequence[str],
    thrY: float,
    sweep_var: str,
    sweep_range: Sequence[float],
    thrX_default: float,
    incl_cut: float = DEFAULT_INCL_CUT,
    n_cut: int = DEFAULT_N_CUT,
    include_remainders: bool = False,
    dir_exp: Optional[Sequence[Optional[int]]] = None,
    return_details: bool = False,
    progress: bool = False,
    wandb_project: Optional[str] = None,
    wandb_entity: Optional[str] = None,
) -> SweepResult:
    """Vary one condition's threshold; the others sit at `thrX_default`, the outcome at `thrY`."""
    outcome, conditions, dir_exp = check_parameters(raw, outcome, conditions, incl_cut, n_cut, include_remainders, dir_exp)
    if sweep_var not in conditions:
        raise DataError(f"sweep_var {sweep_var!r} is not a condition")
    sweep_range = _ascending(sweep_range, "sweep_range")
    settings = SweepSettings(
        kind=SweepKind.CTS, outcome=str(outcome), conditions=conditions, incl_cut=float(incl_cut),
        n_cut=int(n_cut), include_remainders=include_remainders, dir_exp=dir_exp,
        return_details=return_details, thrY=float(thrY), sweep_var=sweep_var, sweep_range=sweep_range,
        thrX_default=float(thrX_default), dataset_digest=dataset_digest(raw), n_cases=raw.n_cases,
    )
    tasks = []
    for t in sweep_range:
        thresholds = {c: (t if c == sweep_var else float(thrX_default)) for c in conditions}
        tasks.append(((("threshold", t),), thresholds, float(thrY)))
    return _run_sweep(raw, settings, outcome, tasks, progress, wandb_project, wandb_entity)


def ct_sweep_m(
    raw: RawDataset,
    outcome: Union[str, OutcomeSpec],
    conditions: Sequence[str],
    thrY: float,
    sweep_list: Axes,
    incl_cut: float = DEFAULT_INCL_CUT,
    n_cut: int = DEFAULT_N_CUT,
    include_remainders: bool = False,
    dir_exp: Optional[Sequence[Optional[int]]] = None,
    return_details: bool = False,
    progress: bool = False,
    wandb_project: Optional[str] = None,
    wandb_entity: Optional[str] = None,
) -> SweepResult:
    """Vary every condition threshold jointly over the grid spanned by `sweep_list`."""
    outcome, conditions, dir_exp = check_parameters(raw, outcome, conditions, incl_cut, n_cut, include_remainders, dir_exp)
    axes = _condition_axes(sweep_list, conditions, "sweep_list")
    settings = SweepSettings(
        kind=SweepKind.CTM, outcome=str(outcome), conditions=conditions, incl_cut=float(incl_cut),
        n_cut=int(n_cut), include_remainders=include_remainders, dir_exp=dir_exp,
        return_details=return_details, thrY=float(thrY), sweep_list=axes,
        dataset_digest=dataset_digest(raw), n_cases=raw.n_cases,
    )
    tasks = [((("threshold", p.label), ("combo_id", p.combo_id)), p.thresholds, float(thrY))
             for p in expand_grid(axes).points]
    return _run_sweep(raw, settings, outcome, tasks, progress, wandb_project, wandb_entity)


def dt_sweep(
    raw: RawDataset,
    outcome: Union[str, OutcomeSpec],
    conditions: Sequence[str],
    sweep_list_X: Axes,
    sweep_range_Y: Sequence[float],
    incl_cut: float = DEFAULT_INCL_CUT,
    n_cut: int = DEFAULT_N_CUT,
    include_remainders: bool = False,
    dir_exp: Optional[Sequence[Optional[int]]] = None,
    return_details: bool = False,
    progress: bool = False,
    wandb_project: Optional[str] = None,
    wandb_entity: Optional[str] = None,
) -> SweepResult:
    """Vary the outcome threshold and the condition grid together; rows go by combo, then thrY."""
    outcome, conditions, dir_exp = check_parameters(raw, outcome, conditions, incl_cut, n_cut, include_remainders, dir_exp)
    axes = _condition_axes(sweep_list_X, conditions, "sweep_list_X")
    sweep_range_Y = _ascending(sweep_range_Y, "sweep_range_Y")
    settings = SweepSettings(
        kind=SweepKind.DT, outcome=str(outcome), conditions=conditions, incl_cut=float(incl_cut),
        n_cut=int(n_cut), include_remainders=include_remainders, dir_exp=dir_exp,
        return_details=return_details, sweep_list_X=axes, sweep_range_Y=sweep_range_Y,
        dataset_digest=dataset_digest(raw), n_cases=raw.n_cases,
    )
    tasks = []
    for point in expand_grid(axes).points:
        for y in sweep_range_Y:
            coordinates = (("thrY", y), ("combo_id", point.combo_id), ("thrX", point.label))
            tasks.append((coordinates, point.thresholds, y))
    return _run_sweep(raw, settings, outcome, tasks, progress, wandb_project, wandb_entity)


def hierarchy_profile(result: SweepResult) -> List[Tuple[str, int, Optional[float]]]:
    """Per row: number of terms and mean literals per term of the summary expression."""
    profile = []
    for row in result.summary:
        if row.n_solutions == 0:
            profile.append((result.row_label(row), 0, None))
            continue
        terms = row.expression.split(" + ")
        literals = [0 if t == "1" else len(t.split("*")) for t in terms]
        profile.append((result.row_label(row), len(terms), sum(literals) / len(terms)))
    return profile
