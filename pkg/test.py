import contextlib
import io
import itertools
import json
import random
import tempfile
import time
import unittest
from pathlib import Path

import numpy as np
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from csqca import render, script_util
from csqca.csqca import run
from csqca.data_util import (BinaryDataset, OutcomeSpec, RawDataset, dataset_digest, dichotomize, expand_grid,
                             load_csv, parse_assignment, to_csv_text)
from csqca.metrics import necessity, solution_fit, sweep_stats
from csqca.minimize import (Implicant, Literal, Model, SolutionType, derive_intermediate, enumerate_minimal_covers,
                            find_prime_implicants, identify_epi_spi, minimize, nests_in)
from csqca.script_util import DataError, UsageError
from csqca.sweep import (SummaryRow, SweepKind, SweepResult, SweepSettings, ct_sweep_m, ct_sweep_s, dt_sweep,
                         hierarchy_profile, ot_sweep, run_pipeline)
from csqca.truth_table import (OutputCode, TruthTable, TruthTableRow, build_truth_table, format_truth_table,
                               index_config)
from data.sample_data import D0, D1, SAMPLE_DATA

DATA_DIR = Path(__file__).parent / "data"
X123 = ("X1", "X2", "X3")
GOLDEN_TIMESTAMP = "2026-01-01T00:00:00"


def raw_from(sample) -> RawDataset:
    return RawDataset(case_ids=tuple(sample['id']), columns={k: v for k, v in sample.items() if k != 'id'})


def make_table(codes, k) -> TruthTable:
    """Truth table with one case per POSITIVE/NEGATIVE row, from a string over 1/0/?."""
    rows = []
    for index, code in enumerate(codes):
        observed = code != "?"
        rows.append(TruthTableRow(config=index_config(index, k), n=int(observed),
                                  n_positive=int(code == "1"), out=OutputCode(code)))
    conditions = tuple(f"X{j + 1}" for j in range(k))
    return TruthTable(conditions=conditions, rows=tuple(rows), incl_cut=0.8, n_cut=1, outcome=OutcomeSpec("Y"))


@st.composite
def crisp_datasets(draw, max_k=4, max_n=40):
    k = draw(st.integers(1, max_k))
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=k, max_size=k), min_size=n, max_size=n))
    y = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    conditions = tuple(f"X{j + 1}" for j in range(k))
    return BinaryDataset(
        case_ids=tuple(str(i) for i in range(n)),
        conditions=conditions,
        condition_memberships=np.array(rows, dtype=np.int8).reshape(n, k),
        outcome_membership=np.array(y, dtype=np.int8),
        outcome=OutcomeSpec("Y"),
        condition_thresholds={c: 1.0 for c in conditions},
        outcome_threshold=1.0,
    )


_CUBES = {}


def subcubes(k):
    """Every implicant over k conditions with the bitmask of configurations it covers."""
    if k not in _CUBES:
        cubes = []
        for literals in itertools.product(list(Literal), repeat=k):
            term = Implicant(literals)
            cubes.append((term, sum(1 << c for c in term.configs())))
        _CUBES[k] = cubes
    return _CUBES[k]


def oracle_primes(on, dc, k):
    on_mask = sum(1 << c for c in on)
    allowed = on_mask | sum(1 << c for c in dc)
    inside = [(t, m) for t, m in subcubes(k) if m & ~allowed == 0 and m & on_mask]
    return {t for t, m in inside if not any(m2 != m and m & m2 == m for _, m2 in inside)}


def oracle_covers(primes, on):
    if not on:
        return set()
    primes = list(primes)
    on_mask = sum(1 << c for c in on)
    masks = [sum(1 << c for c in on if p.covers(c)) for p in primes]
    for r in range(1, len(primes) + 1):
        covers = []
        for combo in itertools.combinations(range(len(primes)), r):
            covered = 0
            for i in combo:
                covered |= masks[i]
            if covered == on_mask:
                covers.append(combo)
        if covers:
            cost = {combo: sum(primes[i].n_literals for i in combo) for combo in covers}
            best = min(cost.values())
            return {frozenset(primes[i] for i in combo) for combo in covers if cost[combo] == best}
    return set()


def term(text, names=X123) -> Implicant:
    return render.parse_expression(text, names).terms[0]


class TestScriptUtil(unittest.TestCase):
    def test_parse_values_range_is_inclusive(self):
        self.assertEqual(script_util.parse_values("2:3"), (2.0, 3.0))
        self.assertEqual(script_util.parse_values("6:8:0.5"), (6.0, 6.5, 7.0, 7.5, 8.0))
        self.assertEqual(script_util.parse_values("2|4"), (2.0, 4.0))
        self.assertEqual(script_util.parse_values("7"), (7.0,))

    def test_parse_values_rejects_malformed(self):
        for text in ["3:2", "1:2:0", "a:b", "", "1:2:3:4", "nan"]:
            with self.assertRaises(UsageError, msg=text):
                script_util.parse_values(text)

    def test_parse_axes_keeps_declared_order(self):
        axes = script_util.parse_axes("B=2:3,A=2|4")
        self.assertEqual(axes, [("B", (2.0, 3.0)), ("A", (2.0, 4.0))])
        with self.assertRaises(UsageError):
            script_util.parse_axes("A=2,A=3")
        with self.assertRaises(UsageError):
            script_util.parse_thresholds("A=2:3")

    def test_parse_dir_exp(self):
        self.assertEqual(script_util.parse_dir_exp("1,0,-"), (1, 0, None))
        self.assertEqual(script_util.format_dir_exp((1, 0, None)), "1,0,-")
        with self.assertRaises(UsageError):
            script_util.parse_dir_exp("1,2")

    def test_format_fit_rounds_half_up(self):
        self.assertEqual(script_util.format_fit(0.8125), "0.813")
        self.assertEqual(script_util.format_fit(1.0), "1.000")
        self.assertEqual(script_util.format_fit(2 / 3), "0.667")
        self.assertEqual(script_util.format_fit(None), "NA")

    def test_format_number_drops_integral_fraction(self):
        self.assertEqual(script_util.format_number(7.0), "7")
        self.assertEqual(script_util.format_number(6.5), "6.5")
        self.assertEqual(script_util.format_number(0.8), "0.8")

    def test_format_table_right_aligns(self):
        text = script_util.format_table(["a", "bb"], [["xyz", "1"]], min_widths={"bb": 4})
        self.assertEqual(text, "  a   bb\nxyz    1")


class TestDataUtil(unittest.TestCase):
    def setUp(self) -> None:
        self.test_dir = tempfile.TemporaryDirectory()
        self.test_dir_path = Path(self.test_dir.name)

    def tearDown(self) -> None:
        self.test_dir.cleanup()

    def write(self, text, name="data.csv") -> Path:
        path = self.test_dir_path / name
        path.write_text(text, encoding="utf-8")
        return path

    def test_load_csv_reads_ids_and_columns(self):
        raw = load_csv(DATA_DIR / "d1.csv", id_column="id")
        self.assertEqual(raw.case_ids, ("c1", "c2", "c3", "c4", "c5", "c6"))
        self.assertEqual(raw.variables, ("A", "B", "Y"))
        self.assertEqual(raw.columns["B"], (3.0, 1.0, 2.0, 1.0, 3.0, 1.0))

    def test_load_csv_numbers_cases_without_id_column(self):
        raw = load_csv(DATA_DIR / "d1.csv", variables=["Y", "A"])
        self.assertEqual(raw.case_ids, ("1", "2", "3", "4", "5", "6"))
        self.assertEqual(raw.variables, ("Y", "A"))

    def test_load_csv_reports_non_numeric_cell(self):
        path = self.write("id,A,B\nc1,1,2\nc2,1,high\n")
        with self.assertRaises(DataError) as cm:
            load_csv(path, id_column="id")
        self.assertIn("row 2, column B", str(cm.exception))

    def test_load_csv_errors(self):
        cases = {
            "empty": "",
            "ragged": "id,A,B\nc1,1,2,3\n",
            "short row": "id,A,B\nc1,1,2\nc2,1\n",
            "duplicate header": "id,A,A\nc1,1,2\n",
            "duplicate ids": "id,A\nc1,1\nc1,2\n",
            "no rows": "id,A\n",
            "infinite": "id,A\nc1,inf\n",
        }
        for name, text in cases.items():
            with self.subTest(name):
                with self.assertRaises(DataError):
                    load_csv(self.write(text), id_column="id")

    def test_load_csv_missing_file_is_os_error(self):
        with self.assertRaises(OSError):
            load_csv(self.test_dir_path / "missing.csv")

    def test_digest_ignores_line_endings_and_trailing_space(self):
        lf = load_csv(self.write("id,A\nc1,1\nc2,2\n", "lf.csv"), id_column="id")
        crlf = load_csv(self.write("id,A  \r\nc1,1\r\nc2,2\r\n\r\n", "crlf.csv"), id_column="id")
        self.assertEqual(dataset_digest(lf), dataset_digest(crlf))
        self.assertEqual(len(dataset_digest(lf)), 64)

    def test_dichotomize_uses_greater_or_equal(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 2}, "Y", 3)
        self.assertEqual(binary.membership("A").tolist(), [1, 1, 0, 0, 1, 1])
        self.assertEqual(binary.membership("B").tolist(), [1, 0, 1, 0, 1, 0])
        self.assertEqual(binary.outcome_membership.tolist(), [1, 0, 0, 0, 1, 0])

    def test_dichotomize_negated_outcome(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 2}, "~Y", 3)
        self.assertEqual(binary.outcome_membership.tolist(), [0, 1, 1, 1, 0, 1])
        self.assertEqual(str(binary.outcome), "~Y")

    def test_load_csv_rejects_short_rows(self):
        for text in ["A,Y,id\n1,2,c1\n3,4\n", "id,A,Y\nc1,1,2\nc2,3\n"]:
            with self.subTest(text):
                with self.assertRaises(DataError) as cm:
                    load_csv(self.write(text), id_column="id")
                self.assertIn("ragged rows, row 2", str(cm.exception))

    def test_sample_csv_files_match_sample_data(self):
        for name, sample in SAMPLE_DATA.items():
            with self.subTest(name):
                raw = load_csv(DATA_DIR / f"{name}.csv", id_column="id")
                self.assertEqual(raw, raw_from(sample))

    @settings(max_examples=200, deadline=None)
    @given(values=st.lists(st.tuples(st.integers(-400, 400), st.integers(-400, 400), st.integers(0, 8)),
                           min_size=1, max_size=20))
    def test_csv_write_back_round_trips(self, values):
        raw = RawDataset(case_ids=tuple(f"c{i}" for i in range(len(values))),
                         columns={"A": [a / 4 for a, _, _ in values], "B": [b / 4 for _, b, _ in values],
                                  "Y": [y for _, _, y in values]})
        loaded = load_csv(self.write(to_csv_text(raw)), id_column="id")
        self.assertEqual(loaded, raw)
        self.assertEqual(dataset_digest(loaded), dataset_digest(raw))

    @settings(max_examples=300, deadline=None)
    @given(values=st.lists(st.integers(-20, 20), min_size=1, max_size=30),
           low=st.integers(-25, 25), step=st.integers(0, 10))
    def test_raising_a_threshold_never_adds_members(self, values, low, step):
        raw = RawDataset(case_ids=tuple(str(i) for i in range(len(values))),
                         columns={"X": values, "Y": values})
        lower = dichotomize(raw, ["X"], {"X": low}, "Y", low)
        higher = dichotomize(raw, ["X"], {"X": low + step}, "Y", low + step)
        self.assertTrue(np.all(higher.membership("X") <= lower.membership("X")))
        self.assertTrue(np.all(higher.outcome_membership <= lower.outcome_membership))

    @settings(max_examples=300, deadline=None)
    @given(values=st.lists(st.integers(-20, 20), min_size=1, max_size=30), threshold=st.integers(-25, 25))
    def test_negated_outcome_is_the_complement(self, values, threshold):
        raw = RawDataset(case_ids=tuple(str(i) for i in range(len(values))),
                         columns={"X": values, "Y": values[::-1]})
        plain = dichotomize(raw, ["X"], {"X": 0}, "Y", threshold)
        negated = dichotomize(raw, ["X"], {"X": 0}, "~Y", threshold)
        self.assertEqual(negated.outcome_membership.tolist(), (1 - plain.outcome_membership).tolist())
        self.assertEqual(negated.membership("X").tolist(), plain.membership("X").tolist())

    def test_dichotomize_rejects_bad_thresholds(self):
        raw = raw_from(D1)
        with self.assertRaises(DataError):
            dichotomize(raw, ["A", "B"], {"A": 2}, "Y", 2)
        with self.assertRaises(DataError):
            dichotomize(raw, ["A"], {"A": 2, "B": 2}, "Y", 2)
        with self.assertRaises(DataError):
            dichotomize(raw, ["A", "Z"], {"A": 2, "Z": 2}, "Y", 2)
        with self.assertRaises(DataError):
            dichotomize(raw, ["A", "Y"], {"A": 2, "Y": 2}, "Y", 2)

    def test_expand_grid_first_axis_fastest(self):
        grid = expand_grid([("X1", [6, 7]), ("X2", [6, 7]), ("X3", [6, 7])])
        labels = [p.label for p in grid.points]
        self.assertEqual(labels, [
            "X1=6, X2=6, X3=6", "X1=7, X2=6, X3=6", "X1=6, X2=7, X3=6", "X1=7, X2=7, X3=6",
            "X1=6, X2=6, X3=7", "X1=7, X2=6, X3=7", "X1=6, X2=7, X3=7", "X1=7, X2=7, X3=7",
        ])
        self.assertEqual([p.combo_id for p in grid.points], list(range(1, 9)))
        self.assertEqual(parse_assignment(labels[5]), {"X1": 7.0, "X2": 6.0, "X3": 7.0})

    def test_expand_grid_rejects_empty_axes(self):
        with self.assertRaises(DataError):
            expand_grid([])
        with self.assertRaises(DataError):
            expand_grid([("A", [])])


class TestTruthTable(unittest.TestCase):
    def test_rows_cover_every_configuration(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 3}, "Y", 2)
        tt = build_truth_table(binary)
        self.assertEqual([r.config for r in tt.rows], [(0, 0), (0, 1), (1, 0), (1, 1)])
        self.assertEqual([r.out for r in tt.rows],
                         [OutputCode.NEGATIVE, OutputCode.REMAINDER, OutputCode.POSITIVE, OutputCode.POSITIVE])
        self.assertEqual(tt.rows[0].cases, ("c3", "c4"))
        self.assertEqual(tt.rows[0].incl, 0.5)
        self.assertIsNone(tt.rows[1].incl)
        self.assertEqual(tt.n_cases, 6)

    def test_frequency_cutoff_makes_remainders(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 2}, "Y", 2)
        tt = build_truth_table(binary, n_cut=2)
        self.assertEqual(tt.positive, frozenset({2, 3}))
        self.assertEqual(tt.remainders, frozenset({0, 1}))

    def test_consistency_cutoff_is_inclusive(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 3}, "Y", 2)
        self.assertIn(0, build_truth_table(binary, incl_cut=0.5).positive)
        self.assertNotIn(0, build_truth_table(binary, incl_cut=0.51).positive)

    def test_invalid_cutoffs(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 2}, "Y", 2)
        for incl_cut, n_cut in [(0, 1), (1.1, 1), (0.8, 0), (0.8, 1.5)]:
            with self.assertRaises(DataError):
                build_truth_table(binary, incl_cut=incl_cut, n_cut=n_cut)

    def test_format_truth_table(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 3}, "Y", 2)
        lines = format_truth_table(build_truth_table(binary)).splitlines()
        self.assertEqual(lines[0].split(), ["A", "B", "n", "incl", "OUT", "cases"])
        self.assertEqual(lines[1].split(), ["0", "0", "2", "0.500", "0", "c3,c4"])
        self.assertEqual(lines[2].split(), ["0", "1", "0", "-", "?"])
        self.assertEqual(len(format_truth_table(build_truth_table(binary), observed_only=True).splitlines()), 4)

    @settings(max_examples=300, deadline=None)
    @given(binary=crisp_datasets(), cuts=st.lists(st.integers(1, 20), min_size=2, max_size=2))
    def test_consistency_cutoff_only_splits_observed_rows(self, binary, cuts):
        a, b = (build_truth_table(binary, incl_cut=c / 20) for c in cuts)
        for row_a, row_b in zip(a.rows, b.rows):
            self.assertEqual((row_a.n, row_a.incl), (row_b.n, row_b.incl))
            self.assertEqual(row_a.out is OutputCode.REMAINDER, row_b.out is OutputCode.REMAINDER)

    @settings(max_examples=300, deadline=None)
    @given(binary=crisp_datasets(), n_cut=st.integers(1, 6), extra=st.integers(0, 6))
    def test_raising_frequency_cutoff_only_adds_remainders(self, binary, n_cut, extra):
        low = build_truth_table(binary, n_cut=n_cut)
        high = build_truth_table(binary, n_cut=n_cut + extra)
        self.assertTrue(low.remainders <= high.remainders)
        for row_low, row_high in zip(low.rows, high.rows):
            self.assertEqual(row_low.n, sum(1 for row in binary.condition_memberships if tuple(row) == row_low.config))
            if row_high.out is not OutputCode.REMAINDER:
                self.assertIs(row_high.out, row_low.out)


class TestMinimize(unittest.TestCase):
    def test_all_three_condition_tables_match_oracle(self):
        k = 3
        for codes in itertools.product("10?", repeat=2 ** k):
            on = {i for i, c in enumerate(codes) if c == "1"}
            dc = {i for i, c in enumerate(codes) if c == "?"}
            pis = find_prime_implicants(on, dc, k)
            self.assertEqual(set(pis), oracle_primes(on, dc, k), msg="".join(codes))
            models = enumerate_minimal_covers(pis, on)
            self.assertEqual(len(models), len({frozenset(m.terms) for m in models}))
            self.assertEqual({frozenset(m.terms) for m in models}, oracle_covers(pis, on), msg="".join(codes))
            negative = set(range(2 ** k)) - on - dc
            for m in models:
                self.assertTrue(all(m.covers(c) for c in on))
                self.assertFalse(any(m.covers(c) for c in negative))

    def test_random_four_condition_tables_match_oracle(self):
        k = 4
        rng = random.Random(2024)
        for _ in range(500):
            codes = [rng.choice("10?") for _ in range(2 ** k)]
            on = {i for i, c in enumerate(codes) if c == "1"}
            dc = {i for i, c in enumerate(codes) if c == "?"}
            pis = find_prime_implicants(on, dc, k)
            self.assertEqual(set(pis), oracle_primes(on, dc, k), msg="".join(codes))
            models = enumerate_minimal_covers(pis, on)
            self.assertEqual({frozenset(m.terms) for m in models}, oracle_covers(pis, on), msg="".join(codes))

    def test_prime_implicants_are_maximal(self):
        on = {0b110, 0b011}
        dc = {0b001, 0b010, 0b100, 0b111}
        pis = {render.render_expression(Model((p,)), X123) for p in find_prime_implicants(on, dc, 3)}
        self.assertEqual(pis, {"X2", "X1*~X3", "~X1*X3"})

    def test_find_prime_implicants_validation(self):
        with self.assertRaises(DataError):
            find_prime_implicants({1}, {1}, 2)
        with self.assertRaises(DataError):
            find_prime_implicants({4}, set(), 2)
        self.assertEqual(find_prime_implicants(set(), {0, 1}, 1), frozenset())

    def test_cyclic_cover_has_two_models(self):
        on = {0b000, 0b001, 0b010, 0b101, 0b110, 0b111}
        models = enumerate_minimal_covers(find_prime_implicants(on, set(), 3), on)
        self.assertEqual(len(models), 2)
        epi, spi = identify_epi_spi(models)
        self.assertEqual(epi, frozenset())
        self.assertEqual(len(spi), 6)
        self.assertEqual(render.render_expression(models[0], X123), "~X1*~X2 + X2*~X3 + X1*X3")
        self.assertEqual(render.render_expression(models[1], X123), "~X1*~X3 + ~X2*X3 + X1*X2")

    def test_epi_is_shared_term(self):
        p, q, r = term("X1"), term("X2"), term("X3")
        epi, spi = identify_epi_spi([Model((p, q)), Model((p, r))])
        self.assertEqual(epi, frozenset({p}))
        self.assertEqual(spi, frozenset({q, r}))
        with self.assertRaises(ValueError):
            identify_epi_spi([])

    def test_d0_solution_types(self):
        binary = dichotomize(raw_from(D0), X123, {c: 1 for c in X123}, "Y", 1)
        tt = build_truth_table(binary)
        conservative = minimize(tt)
        parsimonious = minimize(tt, include_remainders=True)
        intermediate = minimize(tt, include_remainders=True, dir_exp=(1, 1, 1))
        self.assertEqual(render.render_expression(conservative.models[0], X123), "X1*X2*~X3 + ~X1*X2*X3")
        self.assertEqual(render.render_expression(parsimonious.models[0], X123), "X2")
        self.assertEqual(render.render_expression(intermediate.models[0], X123), "X1*X2 + X2*X3")
        self.assertIs(intermediate.solution_type, SolutionType.INTERMEDIATE)
        self.assertEqual(intermediate.conservative, conservative.models[0])
        self.assertEqual(intermediate.parsimonious, parsimonious.models[0])
        for config in range(8):
            if conservative.models[0].covers(config):
                self.assertTrue(intermediate.models[0].covers(config))
            if intermediate.models[0].covers(config):
                self.assertTrue(parsimonious.models[0].covers(config))

    def test_derive_intermediate_filters_counterfactuals(self):
        def model(text):
            return render.parse_expression(text, X123)

        conservative, parsimonious = model("X1*X2*~X3 + ~X1*X2*X3"), model("X2")
        derived = derive_intermediate(conservative, parsimonious, (1, 1, 1))
        self.assertEqual(render.render_expression(derived, X123), "X1*X2 + X2*X3")
        self.assertEqual(derive_intermediate(conservative, parsimonious, (None, None, None)), parsimonious)
        self.assertEqual(derive_intermediate(model("X1*X2"), model("X1*X2"), (0, 0, 0)), model("X1*X2"))

    def test_no_positive_rows_gives_no_models(self):
        solutions = minimize(make_table("0?0?", 2), include_remainders=True)
        self.assertEqual(solutions.n_solutions, 0)
        self.assertEqual(solutions.epi, frozenset())

    def test_dir_exp_needs_remainders(self):
        with self.assertRaises(DataError) as cm:
            minimize(make_table("1000", 2), dir_exp=(1, 1))
        self.assertIn("directional expectations require remainder inclusion", str(cm.exception))
        with self.assertRaises(DataError):
            minimize(make_table("1000", 2), include_remainders=True, dir_exp=(1,))

    def test_all_free_term(self):
        self.assertEqual(render.render_expression(minimize(make_table("1111", 2)).models[0], ("A", "B")), "1")

    @settings(max_examples=300, deadline=None)
    @given(codes=st.lists(st.sampled_from("10?"), min_size=8, max_size=8),
           dir_exp=st.lists(st.sampled_from([None, 0, 1]), min_size=3, max_size=3))
    def test_intermediate_sits_between_bounds(self, codes, dir_exp):
        assume("1" in codes)
        solutions = minimize(make_table(codes, 3), include_remainders=True, dir_exp=dir_exp)
        model = solutions.models[0]
        for config in range(8):
            if solutions.conservative.covers(config):
                self.assertTrue(model.covers(config))
            if model.covers(config):
                self.assertTrue(solutions.parsimonious.covers(config))
            if codes[config] == "0":
                self.assertFalse(model.covers(config))

    def test_intermediate_pairs_with_a_containing_parsimonious_model(self):
        tt = make_table("1101?011", 3)
        first_parsimonious = minimize(tt, include_remainders=True).models[0]
        self.assertEqual(render.render_expression(first_parsimonious, X123), "~X1*~X2 + X1*~X3 + X2*X3")
        solutions = minimize(tt, include_remainders=True, dir_exp=(None, None, None))
        self.assertTrue(solutions.bounded)
        self.assertEqual(render.render_expression(solutions.models[0], X123), "~X1*~X2 + ~X1*X3 + X1*X2")
        self.assertEqual(solutions.models[0], solutions.parsimonious)

    def test_intermediate_terms_nest_between_bounds_on_every_table(self):
        k = 3
        for codes in itertools.product("10?", repeat=2 ** k):
            if "1" not in codes:
                continue
            tt = make_table(codes, k)
            conservatives = minimize(tt).models
            parsimonies = minimize(tt, include_remainders=True).models
            nested = any(nests_in(c, p) for c in conservatives for p in parsimonies)
            for dir_exp in [(None, None, None), (1, 1, 1), (0, 0, 0), (1, 0, None)]:
                solutions = minimize(tt, include_remainders=True, dir_exp=dir_exp)
                msg = f"{''.join(codes)} {dir_exp}"
                self.assertEqual(solutions.bounded, nested, msg=msg)
                self.assertIn(solutions.conservative, conservatives, msg=msg)
                self.assertIn(solutions.parsimonious, parsimonies, msg=msg)
                if not solutions.bounded:
                    continue
                for t in solutions.models[0].terms:
                    self.assertTrue(any(t.subsumes(c) for c in solutions.conservative.terms), msg=msg)
                    self.assertTrue(any(p.subsumes(t) for p in solutions.parsimonious.terms), msg=msg)
                if dir_exp == (None, None, None):
                    self.assertEqual(solutions.models[0], solutions.parsimonious, msg=msg)


@st.composite
def fit_cases(draw):
    k = draw(st.integers(1, 6))
    n = draw(st.integers(1, 64))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=k, max_size=k), min_size=n, max_size=n))
    y = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    terms = draw(st.lists(st.lists(st.sampled_from(list(Literal)), min_size=k, max_size=k), min_size=1, max_size=4))
    unique = {Implicant(tuple(t)) for t in terms}
    kept = [t for t in unique if not any(o != t and o.subsumes(t) for o in unique)]
    conditions = tuple(f"X{j + 1}" for j in range(k))
    binary = BinaryDataset(
        case_ids=tuple(str(i) for i in range(n)),
        conditions=conditions,
        condition_memberships=np.array(rows, dtype=np.int8).reshape(n, k),
        outcome_membership=np.array(y, dtype=np.int8),
        outcome=OutcomeSpec("Y"),
        condition_thresholds={c: 1.0 for c in conditions},
        outcome_threshold=1.0,
    )
    return binary, Model(tuple(kept)), rows, y


def _counted(numerator, denominator):
    return None if denominator == 0 else numerator / denominator


class TestMetrics(unittest.TestCase):
    def assertFit(self, actual, expected):
        if expected is None:
            self.assertIsNone(actual)
        else:
            self.assertAlmostEqual(actual, expected, delta=1e-12)

    @settings(max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(case=fit_cases())
    def test_fit_matches_case_counting(self, case):
        binary, model, rows, y = case

        def member(t, row):
            return all(lit is Literal.FREE or row[j] == int(lit) for j, lit in enumerate(t.literals))

        fit = solution_fit(model, binary)
        in_s = [any(member(t, row) for t in model.terms) for row in rows]
        n_y = sum(y)
        both = sum(1 for s, yy in zip(in_s, y) if s and yy)
        self.assertFit(fit.inclS, _counted(both, sum(in_s)))
        self.assertFit(fit.covS, _counted(both, n_y))
        for t, tf in zip(model.terms, fit.per_term):
            self.assertEqual(tf.term, t)
            in_t = [member(t, row) for row in rows]
            hit = sum(1 for m, yy in zip(in_t, y) if m and yy)
            unique = sum(1 for row, m, yy in zip(rows, in_t, y)
                         if m and yy and sum(member(o, row) for o in model.terms) == 1)
            self.assertFit(tf.incl, _counted(hit, sum(in_t)))
            self.assertFit(tf.cov, _counted(hit, n_y))
            self.assertFit(tf.cov_unique, _counted(unique, n_y))

        nec = necessity(binary)
        self.assertEqual(len(nec), 2 * len(binary.conditions))
        for j, name in enumerate(binary.conditions):
            for row_fit, polarity in zip(nec[2 * j: 2 * j + 2], (1, 0)):
                self.assertEqual(row_fit.condition, name if polarity else f"~{name}")
                x = [row[j] == polarity for row in rows]
                hit = sum(1 for xx, yy in zip(x, y) if xx and yy)
                self.assertFit(row_fit.inclN, _counted(hit, n_y))
                self.assertFit(row_fit.covN, _counted(hit, sum(x)))

    @settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(case=fit_cases())
    def test_coverage_bounds(self, case):
        binary, model, _, y = case
        assume(sum(y) > 0)
        fit = solution_fit(model, binary)
        for tf in fit.per_term:
            self.assertLessEqual(0, tf.cov_unique)
            self.assertLessEqual(tf.cov_unique, tf.cov + 1e-12)
        self.assertLessEqual(sum(tf.cov_unique for tf in fit.per_term), fit.covS + 1e-12)
        self.assertLessEqual(fit.covS, sum(tf.cov for tf in fit.per_term) + 1e-12)
        if len(model.terms) > 1:
            smaller = solution_fit(Model(model.terms[:-1]), binary)
            self.assertLessEqual(smaller.covS, fit.covS + 1e-12)

    @given(expressions=st.lists(st.sampled_from(["X1", "X2 + X3", "~X1*X2", "No solution"]), min_size=1, max_size=12))
    def test_stability_range(self, expressions):
        rows = [SummaryRow((("thrY", float(i)),), e, None, None, 0) for i, e in enumerate(expressions)]
        stability = sweep_stats(rows).stability
        self.assertTrue(0 <= stability <= 1)
        self.assertEqual(stability == 1, len(set(expressions)) == 1)

    def test_d1_necessity(self):
        binary = dichotomize(raw_from(D1), ["A", "B"], {"A": 2, "B": 2}, "Y", 2)
        rows = {r.condition: (r.inclN, r.covN) for r in necessity(binary)}
        self.assertEqual(rows["A"], (0.8, 1.0))
        self.assertEqual(rows["B"], (0.6, 1.0))
        self.assertEqual(rows["~B"], (0.4, 2 / 3))

    def test_stability(self):
        def row(thr, expression, incl, cov, n):
            return SummaryRow((("thrY", thr),), expression, incl, cov, n)

        stats = sweep_stats([row(6.0, "X3 + X1*X2", 0.906, 0.853, 1), row(7.0, "X3 + X1*X2", 0.906, 0.879, 1),
                             row(8.0, "No solution", None, None, 0)])
        self.assertEqual(stats.stability, 0.5)
        self.assertEqual(stats.unique_solutions, 2)
        self.assertEqual(stats.incl_range, (0.906, 0.906))
        self.assertEqual(stats.cov_range, (0.853, 0.879))
        self.assertEqual(sweep_stats([row(6.0, "X3", 1.0, 1.0, 1)]).stability, 1.0)
        self.assertIsNone(sweep_stats([row(8.0, "No solution", None, None, 0)]).incl_range)


class TestSweep(unittest.TestCase):
    def setUp(self) -> None:
        self.d1 = raw_from(D1)
        self.xs = RawDataset(case_ids=tuple("abcdefghij"), columns={
            "X1": [5, 6, 7, 8, 9, 6, 7, 8, 5, 9],
            "X2": [6, 7, 8, 9, 5, 7, 6, 9, 8, 5],
            "X3": [7, 8, 9, 5, 6, 8, 9, 6, 7, 5],
            "Y": [6, 7, 8, 9, 5, 6, 7, 8, 9, 6],
        })

    def rows(self, result):
        return [(*row.key, row.expression, row.inclS, row.covS, row.n_solutions) for row in result.summary]

    def test_ot_sweep_d1(self):
        result = ot_sweep(self.d1, "Y", ["A", "B"], [3, 2], {"A": 2, "B": 2})
        self.assertEqual(self.rows(result), [(2.0, "A + B", 1.0, 1.0, 1), (3.0, "A*B", 1.0, 1.0, 1)])
        self.assertEqual(result.stats.stability, 0.0)
        self.assertIsNone(result.details)
        self.assertIs(result.settings.solution_type, SolutionType.CONSERVATIVE)

    def test_ot_sweep_no_solution_row(self):
        result = ot_sweep(self.d1, "Y", ["A", "B"], [2, 4], {"A": 2, "B": 2})
        self.assertEqual(self.rows(result)[1], (4.0, "No solution", None, None, 0))

    def test_single_threshold_is_fully_stable(self):
        result = ot_sweep(self.d1, "Y", ["A", "B"], [2], {"A": 2, "B": 2})
        self.assertEqual(len(result.summary), 1)
        self.assertEqual(result.stats.stability, 1.0)

    def test_ot_sweep_requires_every_condition_threshold(self):
        with self.assertRaises(DataError):
            ot_sweep(self.d1, "Y", ["A", "B"], [2], {"A": 2})

    def test_ct_sweep_s_d1(self):
        result = ct_sweep_s(self.d1, "Y", ["A", "B"], thrY=2, sweep_var="B", sweep_range=[2, 3], thrX_default=2)
        self.assertEqual(self.rows(result), [(2.0, "A + B", 1.0, 1.0, 1), (3.0, "A", 1.0, 0.8, 1)])
        self.assertEqual(result.row_label(result.summary[1]), "B = 3")
        with self.assertRaises(DataError):
            ct_sweep_s(self.d1, "Y", ["A", "B"], thrY=2, sweep_var="Z", sweep_range=[2], thrX_default=2)

    def test_ct_sweep_m_d1(self):
        result = ct_sweep_m(self.d1, "Y", ["A", "B"], thrY=2, sweep_list={"A": [2, 3], "B": [2, 3]})
        self.assertEqual([row.key[:2] for row in result.summary],
                         [("A=2, B=2", 1), ("A=3, B=2", 2), ("A=2, B=3", 3), ("A=3, B=3", 4)])
        single = ct_sweep_s(self.d1, "Y", ["A", "B"], thrY=2, sweep_var="B", sweep_range=[2], thrX_default=2)
        self.assertEqual(self.rows(result)[0][2:], self.rows(single)[0][1:])

    def test_ct_sweep_m_needs_every_axis(self):
        with self.assertRaises(DataError):
            ct_sweep_m(self.d1, "Y", ["A", "B"], thrY=2, sweep_list={"A": [2, 3]})
        with self.assertRaises(DataError):
            ct_sweep_m(self.d1, "Y", ["A", "B"], thrY=2, sweep_list={"A": [2], "B": [2], "Z": [2]})

    def test_ct_sweep_m_label_order(self):
        axes = [("X1", [7, 6]), ("X2", [6, 7]), ("X3", [6, 7, 7])]
        result = ct_sweep_m(self.xs, "Y", X123, thrY=7, sweep_list=axes)
        self.assertEqual([row.coordinate("threshold") for row in result.summary],
                         [p.label for p in expand_grid([(n, [6, 7]) for n in X123]).points])
        self.assertEqual([row.coordinate("combo_id") for row in result.summary], list(range(1, 9)))

    def test_dt_sweep_orders_thr_y_within_combo(self):
        result = dt_sweep(self.xs, "Y", X123, sweep_list_X=[(n, [6, 7]) for n in X123], sweep_range_Y=[7, 6])
        keys = [row.key for row in result.summary]
        self.assertEqual(len(keys), 16)
        self.assertEqual(keys[:3], [(6.0, 1, "X1=6, X2=6, X3=6"), (7.0, 1, "X1=6, X2=6, X3=6"),
                                    (6.0, 2, "X1=7, X2=6, X3=6")])
        self.assertEqual(result.summary[0].coordinates[0][0], "thrY")

    def test_dt_sweep_d1(self):
        result = dt_sweep(self.d1, "Y", ["A", "B"], sweep_list_X={"A": [2], "B": [2]}, sweep_range_Y=[2, 3])
        self.assertEqual(self.rows(result), [(2.0, 1, "A=2, B=2", "A + B", 1.0, 1.0, 1),
                                             (3.0, 1, "A=2, B=2", "A*B", 1.0, 1.0, 1)])

    def test_sweeps_agree_at_a_shared_point(self):
        ot = ot_sweep(self.xs, "Y", X123, [7], {"X1": 6, "X2": 7, "X3": 6})
        ctm = ct_sweep_m(self.xs, "Y", X123, thrY=7, sweep_list=[("X1", [6]), ("X2", [7]), ("X3", [6])])
        dt = dt_sweep(self.xs, "Y", X123, sweep_list_X=[("X1", [6]), ("X2", [7]), ("X3", [6])], sweep_range_Y=[7])
        expected = self.rows(ot)[0][1:]
        self.assertEqual(self.rows(ctm)[0][2:], expected)
        self.assertEqual(self.rows(dt)[0][3:], expected)

    def test_details_keep_bounds_and_fits(self):
        raw = raw_from(D0)
        result = ot_sweep(raw, "Y", X123, [1], {c: 1 for c in X123}, include_remainders=True,
                          dir_exp=(1, 1, 1), return_details=True)
        self.assertEqual(result.summary[0].expression, "X1*X2 + X2*X3")
        detail = result.details[(1.0,)]
        self.assertEqual(render.render_expression(detail.solutions.conservative, X123), "X1*X2*~X3 + ~X1*X2*X3")
        self.assertEqual(render.render_expression(detail.solutions.parsimonious, X123), "X2")
        self.assertEqual(detail.fits[0].inclS, 1.0)
        self.assertEqual(len(detail.necessity), 6)
        self.assertIs(result.settings.solution_type, SolutionType.INTERMEDIATE)

    def test_dir_exp_without_remainders_is_rejected(self):
        with self.assertRaises(DataError):
            ot_sweep(self.d1, "Y", ["A", "B"], [2], {"A": 2, "B": 2}, dir_exp=(1, 1))

    def test_run_pipeline_matches_summary(self):
        detail = run_pipeline(self.d1, OutcomeSpec("Y"), ["A", "B"], {"A": 2, "B": 3}, 2)
        self.assertEqual(render.render_expression(detail.solutions.models[0], ["A", "B"]), "A")
        self.assertEqual(detail.fits[0].covS, 0.8)

    def test_hierarchy_profile(self):
        result = ot_sweep(self.d1, "Y", ["A", "B"], [2, 3, 4], {"A": 2, "B": 2})
        self.assertEqual(hierarchy_profile(result),
                         [("thrY = 2", 2, 1.0), ("thrY = 3", 1, 2.0), ("thrY = 4", 0, None)])

    def test_sweep_is_deterministic(self):
        first = dt_sweep(self.xs, "Y", X123, [(n, [6, 7]) for n in X123], [6, 7], return_details=True)
        second = dt_sweep(self.xs, "Y", X123, [(n, [6, 7]) for n in X123], [6, 7], return_details=True)
        self.assertEqual(first, second)

    def test_scale_smoke(self):
        rng = np.random.default_rng(7)
        raw = RawDataset(case_ids=tuple(f"k{i}" for i in range(50)),
                         columns={name: rng.integers(1, 10, size=50).tolist() for name in (*X123, "Y")})
        start = time.perf_counter()
        result = dt_sweep(raw, "Y", X123, [(n, [4, 5, 6]) for n in X123], [3, 4, 5, 6, 7])
        self.assertEqual(len(result.summary), 135)
        self.assertLess(time.perf_counter() - start, 10)


class TestRender(unittest.TestCase):
    def setUp(self) -> None:
        self.test_dir = tempfile.TemporaryDirectory()
        self.test_dir_path = Path(self.test_dir.name)

    def tearDown(self) -> None:
        self.test_dir.cleanup()

    def ot_result(self, expressions):
        rows = [SummaryRow((("thrY", float(thr)),), expr, 1.0 if expr != "No solution" else None,
                           1.0 if expr != "No solution" else None, int(expr != "No solution"))
                for thr, expr in expressions]
        settings_ = SweepSettings(kind=SweepKind.OT, outcome="Y", conditions=X123, incl_cut=0.8, n_cut=1,
                                  include_remainders=False, dir_exp=None, return_details=False,
                                  thrX={c: 7.0 for c in X123},
                                  sweep_range=tuple(float(thr) for thr, _ in expressions))
        return SweepResult(summary=tuple(rows), settings=settings_, stats=sweep_stats(rows))

    def test_render_expression(self):
        self.assertEqual(render.render_expression(Model((term("X1*X2"), term("X3"))), X123), "X3 + X1*X2")
        self.assertEqual(render.render_expression(Model((term("X1*X2"), term("~X1*X3"))), X123), "~X1*X3 + X1*X2")
        self.assertEqual(render.render_expression(None, X123), "No solution")

    def test_parse_expression_round_trip(self):
        for text in ["X3 + X1*X2", "~X1*X3 + X1*X2", "X1*X2*~X3 + ~X1*X2*X3", "1"]:
            self.assertEqual(render.render_expression(render.parse_expression(text, X123), X123), text)
        self.assertIsNone(render.parse_expression("No solution", X123))
        with self.assertRaises(DataError):
            render.parse_expression("X4", X123)

    def test_term_level_chart(self):
        chart = render.config_chart(self.ot_result([(6, "X3 + X1*X2"), (7, "X3 + X1*X2"), (8, "No solution")]))
        self.assertEqual(chart.columns, ("thrY = 6 (M1)", "thrY = 6 (M2)", "thrY = 7 (M1)", "thrY = 7 (M2)"))
        P, B = render.CellMark.PRESENT, render.CellMark.BLANK
        self.assertEqual(chart.cells, ((B, P, B, P), (B, P, B, P), (P, B, P, B)))
        self.assertFalse(chart.has_mixed)

        latex = render.render_chart(chart, "latex").splitlines()
        self.assertIn(r" & thrY = 6 (M1) & thrY = 6 (M2) & thrY = 7 (M1) & thrY = 7 (M2) \\", latex)
        self.assertIn(r"X3 & $\bullet$ &  & $\bullet$ &  \\", latex)
        self.assertEqual(latex[0], r"\begin{tabular}{lcccc}")

        ascii_rows = render.render_chart(chart, "ascii").splitlines()
        self.assertTrue(ascii_rows[3].startswith("X3 |"))
        self.assertEqual(ascii_rows[3].count("*"), 2)
        self.assertIn("* = condition present", ascii_rows[-1])

    def test_term_level_cells_match_literal_counts(self):
        result = self.ot_result([(6, "X1*X2*~X3 + ~X1*X2*X3"), (7, "~X1*X3 + X1*X2")])
        chart = render.config_chart(result)
        terms = [t for expr in ("X1*X2*~X3 + ~X1*X2*X3", "~X1*X3 + X1*X2")
                 for t in render.parse_expression(expr, X123).terms]
        for j, t in enumerate(terms):
            marks = [chart.cells[i][j] for i in range(3)]
            self.assertNotIn(render.CellMark.MIXED, marks)
            self.assertEqual(sum(m is not render.CellMark.BLANK for m in marks), t.n_literals)
        self.assertIn("⊗", render.render_chart(chart, "unicode"))

    def test_term_level_labels_name_the_model(self):
        configs = ["000", "001", "011", "110", "111", "010", "101"]
        raw = RawDataset(case_ids=tuple(f"c{i}" for i in range(len(configs))),
                         columns={**{c: [int(bits[j]) for bits in configs] for j, c in enumerate(X123)},
                                  "Y": [1, 1, 1, 1, 1, 0, 0]})
        result = ot_sweep(raw, "Y", X123, [1], {c: 1 for c in X123}, return_details=True)
        self.assertEqual(result.summary[0].n_solutions, 2)
        chart = render.config_chart(result)
        self.assertEqual(chart.columns, tuple(f"thrY = 1 (M{m}.{t})" for m in (1, 2) for t in (1, 2, 3)))

    def test_threshold_level_chart(self):
        chart = render.config_chart(self.ot_result([(1, "X1*X2 + X2*X3")]), "threshold")
        M, P = render.CellMark.MIXED, render.CellMark.PRESENT
        self.assertEqual(chart.columns, ("thrY = 1",))
        self.assertEqual(chart.cells, ((M,), (P,), (M,)))
        text = render.render_chart(chart, "unicode")
        self.assertIn("±", text)
        self.assertIn("± = polarity differs across terms", text)

    def test_chart_errors(self):
        with self.assertRaises(ValueError) as cm:
            render.config_chart(self.ot_result([(8, "No solution")]))
        self.assertIn("nothing to chart", str(cm.exception))
        chart = render.config_chart(self.ot_result([(6, "X1")]))
        with self.assertRaises(ValueError):
            render.render_chart(chart, "html")

    def test_summary_table_layout(self):
        result = ot_sweep(raw_from(D1), "Y", ["A", "B"], [2, 3], {"A": 2, "B": 2})
        lines = render.format_summary_table(result).splitlines()
        self.assertEqual(lines[0], "thrY  expression inclS  covS n_solutions")
        self.assertEqual(lines[1], "   2       A + B 1.000 1.000           1")

    def test_format_print_and_stats(self):
        result = ct_sweep_s(raw_from(D1), "Y", ["A", "B"], thrY=2, sweep_var="B", sweep_range=[2, 3],
                            thrX_default=2)
        text = render.format_print(result)
        self.assertTrue(text.startswith("Single Condition Threshold Sweep Results\n" + "=" * 40 + "\n"))
        self.assertIn("  Consistency cutoff: 0.8\n", text)
        self.assertIn("  Frequency cutoff: 1\n", text)
        self.assertIn("threshold  expression inclS  covS n_solutions", text)
        stats = render.format_stats(result.stats)
        self.assertIn("Solution stability: 0.000", stats)
        self.assertIn("Coverage range: 0.800 - 1.000", stats)

    def test_golden_report(self):
        raw = load_csv(DATA_DIR / "d1.csv", id_column="id")
        result = ot_sweep(raw, "Y", ["A", "B"], [2, 3], {"A": 2, "B": 2})
        path = self.test_dir_path / "report.md"
        text = render.generate_report(result, path, title="D1 Outcome Threshold Sweep", fmt="summary",
                                      timestamp=GOLDEN_TIMESTAMP)
        golden = (DATA_DIR / "golden_d1_otsweep_report.md").read_text(encoding="utf-8")
        self.assertEqual(text, golden)
        self.assertEqual(path.read_text(encoding="utf-8"), text)
        again = render.generate_report(result, self.test_dir_path / "again.md", title="D1 Outcome Threshold Sweep",
                                       fmt="summary", timestamp=GOLDEN_TIMESTAMP)
        self.assertEqual(again, text)

    def test_full_report_has_point_sections(self):
        result = ot_sweep(raw_from(D0), "Y", X123, [1], {c: 1 for c in X123}, include_remainders=True,
                          dir_exp=(1, 1, 1), return_details=True)
        text = render.generate_report(result, self.test_dir_path / "full.md", title="D0", timestamp=GOLDEN_TIMESTAMP,
                                      chart_symbol_set="latex", chart_level="threshold")
        self.assertIn("### thrY = 1", text)
        self.assertIn("- M1: X1*X2 + X2*X3", text)
        self.assertIn("- conservative bound: X1*X2*~X3 + ~X1*X2*X3", text)
        self.assertIn("Necessity:", text)
        self.assertIn("--dir-exp 1,1,1", text)
        self.assertIn(r"$\pm$", text)
        summary = render.generate_report(result, self.test_dir_path / "short.md", title="D0", fmt="summary",
                                         timestamp=GOLDEN_TIMESTAMP)
        self.assertNotIn("### thrY = 1", summary)

    def test_report_without_solutions_notes_missing_chart(self):
        result = ot_sweep(raw_from(D1), "Y", ["A", "B"], [4], {"A": 2, "B": 2})
        text = render.generate_report(result, self.test_dir_path / "none.md", title="None",
                                      timestamp=GOLDEN_TIMESTAMP)
        self.assertIn("No configuration chart", text)

    def test_export_round_trip(self):
        result = dt_sweep(raw_from(D0), "Y", X123, [(c, [1]) for c in X123], [1, 2], include_remainders=True,
                          dir_exp=(1, 1, None), return_details=True)
        path = self.test_dir_path / "result.json"
        text = render.export_result(result, path)
        self.assertEqual(render.import_result(path), result)
        self.assertEqual(render.export_result(result, self.test_dir_path / "again.json"), text)

    def test_export_uses_null_for_undefined_fit(self):
        result = ot_sweep(raw_from(D1), "Y", ["A", "B"], [2, 4], {"A": 2, "B": 2})
        document = json.loads(render.export_result(result, self.test_dir_path / "r.json"))
        self.assertEqual(list(document), ["settings", "summary", "stats"])
        self.assertEqual(document["summary"][0]["expression"], "A + B")
        self.assertIsNone(document["summary"][1]["inclS"])
        self.assertEqual(render.import_result(self.test_dir_path / "r.json"), result)

    def test_import_rejects_foreign_json(self):
        path = self.test_dir_path / "other.json"
        path.write_text('{"hello": 1}', encoding="utf-8")
        with self.assertRaises(DataError):
            render.import_result(path)


class TestCli(unittest.TestCase):
    def setUp(self) -> None:
        self.test_dir = tempfile.TemporaryDirectory()
        self.test_dir_path = Path(self.test_dir.name)
        self.d1 = str(DATA_DIR / "d1.csv")

    def tearDown(self) -> None:
        self.test_dir.cleanup()

    def run_cli(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = run(list(argv))
        return code, out.getvalue()

    def test_otsweep_writes_result(self):
        out = self.test_dir_path / "r.json"
        code, stdout = self.run_cli("otsweep", "--input", self.d1, "--outcome", "Y", "--conditions", "A,B",
                                    "--sweep-range", "2:3", "--thrx", "A=2,B=2", "--out", str(out), "-q")
        self.assertEqual(code, 0)
        document = json.loads(out.read_text(encoding="utf-8"))
        self.assertEqual([r["expression"] for r in document["summary"]], ["A + B", "A*B"])
        self.assertIn("Outcome Threshold Sweep Results", stdout)
        self.assertIn("thrY  expression inclS  covS n_solutions", stdout)

    def test_cli_matches_library(self):
        out = self.test_dir_path / "cli.json"
        code, _ = self.run_cli("ctsweepm", "-i", self.d1, "--id-col", "id", "--outcome", "Y", "--conditions", "A,B",
                               "--sweep-list", "A=2:3,B=2|3", "--thry", "2", "--details", "-o", str(out), "-q")
        self.assertEqual(code, 0)
        raw = load_csv(self.d1, id_column="id")
        result = ct_sweep_m(raw, "Y", ["A", "B"], 2, [("A", [2, 3]), ("B", [2, 3])], return_details=True)
        expected = render.export_result(result, self.test_dir_path / "lib.json")
        self.assertEqual(out.read_text(encoding="utf-8"), expected)

    def test_ctsweeps_and_dtsweep(self):
        code, stdout = self.run_cli("ctsweeps", "-i", self.d1, "--outcome", "Y", "--conditions", "A,B",
                                    "--sweep-var", "B", "--sweep-range", "2:3", "--thry", "2", "--thrx-default", "2",
                                    "-q")
        self.assertEqual(code, 0)
        self.assertIn("0.800", stdout)
        code, stdout = self.run_cli("dtsweep", "-i", self.d1, "--outcome", "Y", "--conditions", "A,B",
                                    "--sweep-list-x", "A=2,B=2", "--sweep-range-y", "2:3", "-q")
        self.assertEqual(code, 0)
        self.assertIn("thrY combo_id     thrX  expression inclS  covS n_solutions", stdout)

    def test_report_subcommand_regenerates_report(self):
        out = self.test_dir_path / "r.json"
        report = self.test_dir_path / "r.md"
        self.run_cli("otsweep", "-i", self.d1, "--id-col", "id", "--outcome", "Y", "--conditions", "A,B",
                     "--sweep-range", "2|3", "--thrx", "A=2,B=2", "-o", str(out), "-q")
        code, _ = self.run_cli("report", "--result", str(out), "--report", str(report), "--format", "summary",
                               "--title", "D1 Outcome Threshold Sweep", "--timestamp", GOLDEN_TIMESTAMP)
        self.assertEqual(code, 0)
        golden = (DATA_DIR / "golden_d1_otsweep_report.md").read_text(encoding="utf-8")
        self.assertEqual(report.read_text(encoding="utf-8"), golden)

    def test_exit_codes(self):
        base = ["otsweep", "-i", self.d1, "--outcome", "Y", "--conditions", "A,B", "--sweep-range", "2:3",
                "--thrx", "A=2,B=2", "-q"]
        code, _ = self.run_cli(*base, "--dir-exp", "1,1", "--include", "none")
        self.assertEqual(code, 1)
        code, _ = self.run_cli(*base, "--include", "remainders", "--dir-exp", "1")
        self.assertEqual(code, 1)
        code, _ = self.run_cli(*base, "--bogus")
        self.assertEqual(code, 1)
        code, _ = self.run_cli("otsweep", "-i", self.d1, "--outcome", "Y", "--conditions", "A,B",
                               "--sweep-range", "3:2", "--thrx", "A=2,B=2", "-q")
        self.assertEqual(code, 1)
        code, _ = self.run_cli()
        self.assertEqual(code, 1)
        code, _ = self.run_cli("otsweep", "-i", self.d1, "--outcome", "Y", "--conditions", "A,Z",
                               "--sweep-range", "2", "--thrx", "A=2,Z=2", "-q")
        self.assertEqual(code, 2)
        code, _ = self.run_cli("otsweep", "-i", str(self.test_dir_path / "missing.csv"), "--outcome", "Y",
                               "--conditions", "A,B", "--sweep-range", "2", "--thrx", "A=2,B=2", "-q")
        self.assertEqual(code, 3)

    def test_help_lists_flags(self):
        code, stdout = self.run_cli("dtsweep", "--help")
        self.assertEqual(code, 0)
        for flag in ["--input", "--id-col", "--outcome", "--conditions", "--incl-cut", "--n-cut", "--include",
                     "--dir-exp", "--details", "--out", "--report", "--title", "--format", "--chart", "--symbols",
                     "--sweep-list-x", "--sweep-range-y"]:
            self.assertIn(flag, stdout)


if __name__ == "__main__":
    unittest.main()
