from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from csqca.data_util import BinaryDataset
from csqca.minimize import Implicant, Literal, Model


def ratio(numerator, denominator) -> Optional[float]:
    """Exact count ratio; None when the denominator is empty."""
    numerator, denominator = int(numerator), int(denominator)
    if denominator == 0:
        return None
    return numerator / denominator


@dataclass(frozen=True)
class TermFit:
    term: Implicant
    incl: Optional[float]
    cov: Optional[float]
    cov_unique: Optional[float]


@dataclass(frozen=True)
class FitStats:
    inclS: Optional[float]
    covS: Optional[float]
    per_term: Tuple[TermFit, ...]


@dataclass(frozen=True)
class NecessityRow:
    condition: str
    inclN: Optional[float]
    covN: Optional[float]


@dataclass(frozen=True)
class SweepStats:
    n_thresholds: int
    unique_solutions: int
    stability: float
    incl_range: Optional[Tuple[float, float]]
    cov_range: Optional[Tuple[float, float]]


def term_membership(term: Implicant, binary: BinaryDataset) -> np.ndarray:
    members = np.ones(binary.n_cases, dtype=bool)
    for j, lit in enumerate(term.literals):
        if lit is not Literal.FREE:
            members &= binary.condition_memberships[:, j] == int(lit)
    return members


def solution_fit(model: Model, binary: BinaryDataset) -> FitStats:
    y = binary.outcome_membership.astype(bool)
    covered = np.array([term_membership(t, binary) for t in model.terms])
    solution = covered.any(axis=0)
    only_once = covered.sum(axis=0) == 1

    per_term = []
    for t, members in zip(model.terms, covered):
        per_term.append(TermFit(
            term=t,
            incl=ratio((members & y).sum(), members.sum()),
            cov=ratio((members & y).sum(), y.sum()),
            cov_unique=ratio((members & only_once & y).sum(), y.sum()),
        ))
    return FitStats(
        inclS=ratio((solution & y).sum(), solution.sum()),
        covS=ratio((solution & y).sum(), y.sum()),
        per_term=tuple(per_term),
    )


def necessity(binary: BinaryDataset) -> Tuple[NecessityRow, ...]:
    """inclN = |X & Y| / |Y| and covN = |X & Y| / |X| for each condition and its negation."""
    y = binary.outcome_membership.astype(bool)
    rows = []
    for name in binary.conditions:
        x = binary.membership(name).astype(bool)
        for label, members in ((name, x), (f"~{name}", ~x)):
            rows.append(NecessityRow(
                condition=label,
                inclN=ratio((members & y).sum(), y.sum()),
                covN=ratio((members & y).sum(), members.sum()),
            ))
    return tuple(rows)


def _value_range(values: Sequence[Optional[float]]) -> Optional[Tuple[float, float]]:
    defined = [v for v in values if v is not None]
    if not defined:
        return None
    return (min(defined), max(defined))


def sweep_stats(summary_rows: Sequence) -> SweepStats:
    if not summary_rows:
        raise ValueError("sweep statistics need at least one summary row")
    n_thresholds = len(summary_rows)
    unique_solutions = len({row.expression for row in summary_rows})
    if n_thresholds == 1:
        stability = 1.0
    else:
        stability = 1 - (unique_solutions - 1) / (n_thresholds - 1)
    return SweepStats(
        n_thresholds=n_thresholds,
        unique_solutions=unique_solutions,
        stability=stability,
        incl_range=_value_range([row.inclS for row in summary_rows]),
        cov_range=_value_range([row.covS for row in summary_rows]),
    )
