import enum
from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

import numpy as np

from csqca.data_util import BinaryDataset, OutcomeSpec
from csqca.script_util import DEFAULT_INCL_CUT, DEFAULT_N_CUT, MAX_CONDITIONS, DataError, format_fit, format_table


class OutputCode(enum.Enum):
    POSITIVE = "1"
    NEGATIVE = "0"
    REMAINDER = "?"


@dataclass(frozen=True)
class TruthTableRow:
    config: Tuple[int, ...]
    n: int
    n_positive: int
    out: OutputCode
    cases: Tuple[str, ...] = ()

    @property
    def index(self) -> int:
        return config_index(self.config)

    @property
    def incl(self) -> Optional[float]:
        if self.n == 0:
            return None
        return self.n_positive / self.n


@dataclass(frozen=True)
class TruthTable:
    conditions: Tuple[str, ...]
    rows: Tuple[TruthTableRow, ...]  # all 2^k configurations, ascending, first condition most significant
    incl_cut: float
    n_cut: int
    outcome: OutcomeSpec

    @property
    def k(self) -> int:
        return len(self.conditions)

    def configs(self, code: OutputCode) -> FrozenSet[int]:
        return frozenset(row.index for row in self.rows if row.out is code)

    @property
    def positive(self) -> FrozenSet[int]:
        return self.configs(OutputCode.POSITIVE)

    @property
    def negative(self) -> FrozenSet[int]:
        return self.configs(OutputCode.NEGATIVE)

    @property
    def remainders(self) -> FrozenSet[int]:
        return self.configs(OutputCode.REMAINDER)

    @property
    def n_cases(self) -> int:
        return sum(row.n for row in self.rows)


def config_index(config) -> int:
    index = 0
    for bit in config:
        index = (index << 1) | int(bit)
    return index


def index_config(index: int, k: int) -> Tuple[int, ...]:
    return tuple((index >> (k - 1 - j)) & 1 for j in range(k))


def classify(n: int, n_positive: int, incl_cut: float, n_cut: int) -> OutputCode:
    if n < n_cut:
        return OutputCode.REMAINDER
    if n_positive / n >= incl_cut:
        return OutputCode.POSITIVE
    return OutputCode.NEGATIVE


def check_cutoffs(incl_cut: float, n_cut: int):
    if not (0 < incl_cut <= 1):
        raise DataError(f"incl_cut must lie in (0, 1], got {incl_cut}")
    if int(n_cut) != n_cut or n_cut < 1:
        raise DataError(f"n_cut must be a positive integer, got {n_cut}")


def build_truth_table(binary: BinaryDataset, incl_cut: float = DEFAULT_INCL_CUT, n_cut: int = DEFAULT_N_CUT) -> TruthTable:
    k = len(binary.conditions)
    if k == 0:
        raise DataError("a truth table needs at least one condition")
    if k > MAX_CONDITIONS:
        raise DataError(f"at most {MAX_CONDITIONS} conditions are supported, got {k}")
    if binary.n_cases == 0:
        raise DataError("a truth table needs at least one case")
    check_cutoffs(incl_cut, n_cut)
    n_cut = int(n_cut)

    weights = 1 << np.arange(k - 1, -1, -1)
    indices = binary.condition_memberships.astype(np.int64) @ weights
    counts = np.bincount(indices, minlength=2 ** k)
    positives = np.bincount(indices, weights=binary.outcome_membership, minlength=2 ** k)
    cases = [[] for _ in range(2 ** k)]
    for case_id, index in zip(binary.case_ids, indices):
        cases[int(index)].append(case_id)

    rows = []
    for index in range(2 ** k):
        n, n_positive = int(counts[index]), int(round(positives[index]))
        rows.append(TruthTableRow(
            config=index_config(index, k),
            n=n,
            n_positive=n_positive,
            out=classify(n, n_positive, incl_cut, n_cut),
            cases=tuple(cases[index]),
        ))
    return TruthTable(conditions=binary.conditions, rows=tuple(rows), incl_cut=float(incl_cut),
                      n_cut=n_cut, outcome=binary.outcome)


def format_truth_table(tt: TruthTable, observed_only: bool = False) -> str:
    """One line per row: config bits, n, incl with 3 decimals ("-" when n = 0), OUT (1/0/?), cases."""
    headers = [*tt.conditions, "n", "incl", "OUT", "cases"]
    rows = []
    for row in tt.rows:
        if observed_only and row.n == 0:
            continue
        incl = "-" if row.incl is None else format_fit(row.incl)
        rows.append([*map(str, row.config), str(row.n), incl, row.out.value, ",".join(row.cases)])
    return format_table(headers, rows)
