import csv
import hashlib
import io
import itertools
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from csqca.script_util import DataError, fetch_text, format_number


@dataclass(frozen=True)
class RawDataset:
    """Case-identified numeric table, before dichotomization."""
    case_ids: Tuple[str, ...]
    columns: Dict[str, Tuple[float, ...]]
    source_text: Optional[str] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'case_ids', tuple(str(c) for c in self.case_ids))
        object.__setattr__(self, 'columns', {str(k): tuple(float(v) for v in vals) for k, vals in self.columns.items()})
        if len(self.case_ids) == 0:
            raise DataError("dataset has no cases")
        if len(set(self.case_ids)) != len(self.case_ids):
            raise DataError("case identifiers must be unique")
        if not self.columns:
            raise DataError("dataset has no variables")
        for name, values in self.columns.items():
            if not name:
                raise DataError("variable names must be non-empty")
            if len(values) != len(self.case_ids):
                raise DataError(f"column {name!r} has {len(values)} values for {len(self.case_ids)} cases")
            if not np.all(np.isfinite(values)):
                raise DataError(f"column {name!r} contains non-finite values")

    @property
    def n_cases(self) -> int:
        return len(self.case_ids)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self.columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise DataError(f"unknown variable {name!r}")
        return np.asarray(self.columns[name], dtype=float)


@dataclass(frozen=True)
class OutcomeSpec:
    name: str
    negated: bool = False

    @classmethod
    def parse(cls, text: Union[str, "OutcomeSpec"]) -> "OutcomeSpec":
        if isinstance(text, OutcomeSpec):
            return text
        text = text.strip()
        negated = text.startswith('~')
        name = text[1:].strip() if negated else text
        if not name:
            raise DataError(f"invalid outcome {text!r}")
        return cls(name=name, negated=negated)

    def __str__(self) -> str:
        return f"~{self.name}" if self.negated else self.name


@dataclass(frozen=True, eq=False)
class BinaryDataset:
    """Crisp memberships after dichotomization; rows follow the source case order."""
    case_ids: Tuple[str, ...]
    conditions: Tuple[str, ...]
    condition_memberships: np.ndarray  # (n_cases, k) of {0, 1}
    outcome_membership: np.ndarray  # (n_cases,) of {0, 1}
    outcome: OutcomeSpec
    condition_thresholds: Dict[str, float]
    outcome_threshold: float

    @property
    def n_cases(self) -> int:
        return len(self.case_ids)

    def membership(self, name: str) -> np.ndarray:
        return self.condition_memberships[:, self.conditions.index(name)]


@dataclass(frozen=True)
class GridPoint:
    combo_id: int
    thresholds: Dict[str, float]

    @property
    def label(self) -> str:
        return format_assignment(self.thresholds)


@dataclass(frozen=True)
class SweepGrid:
    axes: Tuple[Tuple[str, Tuple[float, ...]], ...]
    points: Tuple[GridPoint, ...]

    def __len__(self) -> int:
        return len(self.points)


def canonicalize_csv(text: str) -> str:
    lines = [line.rstrip() for line in text.replace('\r\n', '\n').replace('\r', '\n').split('\n')]
    return "\n".join(lines).rstrip('\n') + "\n"


def dataset_digest(raw: RawDataset) -> str:
    """SHA-256 of the canonicalized CSV the dataset was read from (or would be written as)."""
    text = raw.source_text if raw.source_text is not None else to_csv_text(raw)
    return hashlib.sha256(canonicalize_csv(text).encode('utf-8')).hexdigest()


def load_csv(path, id_column: Optional[str] = None, variables: Optional[Sequence[str]] = None) -> RawDataset:
    """Read a header-first CSV. Only `variables` (default: every non-id column) must be numeric."""
    text = fetch_text(path)
    records = [r for r in csv.reader(io.StringIO(text)) if r]
    width = len(records[0]) if records else 0
    for row, fields in enumerate(records[1:], start=1):
        if len(fields) != width:
            raise DataError(f"{path}: ragged rows, row {row} has {len(fields)} fields, the header has {width}")
    try:
        frame = pd.read_csv(io.StringIO(text), header=None, dtype=str, keep_default_na=False,
                            skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty, a header row is required")
    except pd.errors.ParserError as ex:
        raise DataError(f"{path}: ragged rows ({ex})")

    header = [str(h).strip() for h in frame.iloc[0]]
    if any(not h for h in header):
        raise DataError(f"{path}: empty column name in header")
    duplicates = sorted({h for h in header if header.count(h) > 1})
    if duplicates:
        raise DataError(f"{path}: duplicate header names {', '.join(duplicates)}")
    body = frame.iloc[1:].reset_index(drop=True)
    body.columns = header
    if len(body) == 0:
        raise DataError(f"{path}: no data rows")

    if id_column is not None:
        if id_column not in header:
            raise DataError(f"{path}: id column {id_column!r} not found")
        case_ids = [c.strip() for c in body[id_column]]
        seen = set()
        for row, case_id in enumerate(case_ids, start=1):
            if case_id in seen:
                raise DataError(f"{path}: duplicate case id {case_id!r} at row {row}")
            seen.add(case_id)
    else:
        case_ids = [str(i) for i in range(1, len(body) + 1)]

    if variables is None:
        variables = [h for h in header if h != id_column]
    else:
        variables = list(dict.fromkeys(variables))
        missing = [v for v in variables if v not in header]
        if missing:
            raise DataError(f"{path}: unknown variable(s) {', '.join(missing)}")
    if not variables:
        raise DataError(f"{path}: no numeric variables")
    numeric = body[variables].apply(lambda col: pd.to_numeric(col.str.strip(), errors='coerce'))
    bad = ~np.isfinite(numeric.to_numpy(dtype=float))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise DataError(f"{path}: row {row + 1}, column {variables[col]}: "
                        f"{body[variables[col]].iloc[row]!r} is not a finite number")
    columns = {name: tuple(numeric[name].astype(float)) for name in variables}
    return RawDataset(case_ids=tuple(case_ids), columns=columns, source_text=text)


def to_csv_text(raw: RawDataset, id_column: str = "id") -> str:
    if id_column in raw.columns:
        raise DataError(f"id column name {id_column!r} collides with a variable")
    lines = [",".join([id_column, *raw.variables])]
    for i, case_id in enumerate(raw.case_ids):
        lines.append(",".join([case_id, *(repr(raw.columns[v][i]) for v in raw.variables)]))
    return "\n".join(lines) + "\n"


def dichotomize(
    raw: RawDataset,
    conditions: Sequence[str],
    condition_thresholds: Mapping[str, float],
    outcome: Union[str, OutcomeSpec],
    outcome_threshold: float,
) -> BinaryDataset:
    outcome = OutcomeSpec.parse(outcome)
    conditions = tuple(conditions)
    for name in (*conditions, outcome.name):
        if name not in raw.columns:
            raise DataError(f"unknown variable {name!r}")
    if outcome.name in conditions:
        raise DataError(f"outcome {outcome.name!r} is listed among the conditions")
    missing = [c for c in conditions if c not in condition_thresholds]
    if missing:
        raise DataError(f"threshold missing for condition(s) {', '.join(missing)}")
    extra = [c for c in condition_thresholds if c not in conditions]
    if extra:
        raise DataError(f"threshold given for non-condition(s) {', '.join(extra)}")

    if conditions:
        memberships = np.column_stack(
            [raw.column(c) >= float(condition_thresholds[c]) for c in conditions]).astype(np.int8)
    else:
        memberships = np.zeros((raw.n_cases, 0), dtype=np.int8)
    y = (raw.column(outcome.name) >= float(outcome_threshold)).astype(np.int8)
    if outcome.negated:
        y = 1 - y
    return BinaryDataset(
        case_ids=raw.case_ids,
        conditions=conditions,
        condition_memberships=memberships,
        outcome_membership=y,
        outcome=outcome,
        condition_thresholds={c: float(condition_thresholds[c]) for c in conditions},
        outcome_threshold=float(outcome_threshold),
    )


def expand_grid(axes: Union[Mapping[str, Sequence[float]], Sequence[Tuple[str, Sequence[float]]]]) -> SweepGrid:
    """All threshold combinations; the first axis varies fastest, combo ids count from 1."""
    axes = list(axes.items()) if isinstance(axes, Mapping) else list(axes)
    if not axes:
        raise DataError("sweep grid needs at least one axis")
    names = [name for name, _ in axes]
    if len(set(names)) != len(names):
        raise DataError(f"duplicate axis name in {', '.join(names)}")
    frozen_axes = []
    for name, values in axes:
        values = tuple(float(v) for v in values)
        if not values:
            raise DataError(f"axis {name!r} has no thresholds")
        frozen_axes.append((name, values))

    points = []
    for combo_id, combo in enumerate(itertools.product(*[v for _, v in reversed(frozen_axes)]), start=1):
        thresholds = dict(zip(names, reversed(combo)))
        points.append(GridPoint(combo_id=combo_id, thresholds=thresholds))
    return SweepGrid(axes=tuple(frozen_axes), points=tuple(points))


def format_assignment(thresholds: Mapping[str, float]) -> str:
    return ", ".join(f"{name}={format_number(value)}" for name, value in thresholds.items())


def parse_assignment(label: str) -> Dict[str, float]:
    thresholds = {}
    for part in label.split(', '):
        name, sep, value = part.partition('=')
        if not sep:
            raise DataError(f"malformed threshold label {label!r}")
        thresholds[name] = float(value)
    return thresholds
