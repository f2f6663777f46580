"""Tests for convergence tables and their writers."""

import json
import math

import pandas as pd
import pytest
from pydantic import ValidationError

from pfbounds.utils import (
    CSV_COLUMNS,
    ConvergenceRow,
    ConvergenceTable,
    ReferenceValues,
    print_convergence_table,
    write_csv,
    write_json,
    write_report,
)


def make_row(level, bound_abs=None):
    h = 2.0**-level
    return ConvergenceRow(
        level=level,
        h=h,
        p_fh=1e-4 * (1.0 + h),
        p_form_h=2e-4 * (1.0 + h),
        rel_err=h,
        rel_err_form=h,
        bound_abs=10.0 * h**2 if bound_abs is None else bound_abs,
        beta_h=3.5,
        mlfp_distance=0.5 * h,
        c3=1.0,
        bound_rel_form=2.0 * h,
        form_converged=True,
    )


@pytest.fixture
def table():
    return ConvergenceTable(
        experiment="demo",
        rows=[make_row(level) for level in range(2, 8)],
        reference=ReferenceValues(p_f=1e-4, p_form=2e-4, beta=3.54),
        config={"experiment": "demo", "levels": [2, 7]},
    )


class TestConvergenceTable:
    def test_rows_must_refine(self):
        with pytest.raises(ValidationError):
            ConvergenceTable(
                experiment="demo",
                rows=[make_row(3), make_row(2)],
                reference=ReferenceValues(p_f=1e-4, p_form=2e-4, beta=3.54),
            )

    def test_fit_orders(self, table):
        orders = table.fit_orders(tail=4)
        assert orders.s_est == pytest.approx(1.0)
        assert orders.s_est_form == pytest.approx(1.0)
        assert orders.s_est_bound == pytest.approx(2.0)
        assert orders.s_est_mlfp == pytest.approx(1.0)
        assert table.orders is orders

    def test_mlfp_floor(self, table):
        for row in table.rows[-2:]:
            row.mlfp_distance = 3e-7
        assert table.fit_orders(tail=4).s_est_mlfp > 2.0
        orders = table.fit_orders(tail=4, mlfp_floor=1e-6)
        assert orders.s_est_mlfp == pytest.approx(1.0)
        assert orders.mlfp_floor == 1e-6

    def test_failed_fit_is_nan(self):
        table = ConvergenceTable(
            experiment="demo",
            rows=[make_row(2, math.nan), make_row(3, math.nan), make_row(4)],
            reference=ReferenceValues(p_f=1e-4, p_form=2e-4, beta=3.54),
        )
        assert math.isnan(table.fit_orders(tail=3).s_est_bound)

    def test_frame_columns(self, table):
        assert list(table.to_frame().columns) == CSV_COLUMNS


class TestWriters:
    def test_csv(self, table, tmp_path):
        path = write_csv(table, tmp_path / "out" / "table.csv")
        frame = pd.read_csv(path)
        assert list(frame.columns) == CSV_COLUMNS
        assert frame["level"].tolist() == list(range(2, 8))
        assert frame["h"].iloc[0] == pytest.approx(0.25)

    def test_csv_is_deterministic(self, table, tmp_path):
        first = write_csv(table, tmp_path / "a.csv").read_bytes()
        second = write_csv(table, tmp_path / "b.csv").read_bytes()
        assert first == second
        assert b"\r\n" not in first

    def test_csv_nan_bound(self, tmp_path):
        table = ConvergenceTable(
            experiment="demo",
            rows=[make_row(1, math.nan), make_row(2)],
            reference=ReferenceValues(p_f=1e-4, p_form=2e-4, beta=3.54),
        )
        text = write_csv(table, tmp_path / "t.csv").read_text()
        assert ",nan," in text

    def test_json(self, table, tmp_path):
        table.fit_orders(tail=4)
        with open(write_json(table, tmp_path / "table.json")) as f:
            data = json.load(f)
        assert data["experiment"] == "demo"
        assert len(data["rows"]) == 6
        assert data["orders"]["tail"] == 4
        assert data["config"]["levels"] == [2, 7]
        assert "beta_h" in data["rows"][0]

    def test_unknown_format(self, table, tmp_path):
        with pytest.raises(ValueError):
            write_report(table, tmp_path / "t.txt", fmt="txt")


def test_console_table(table, capsys):
    table.fit_orders(tail=4)
    print_convergence_table(table)
    out = capsys.readouterr().out
    assert "CONVERGENCE: demo" in out
    assert "Fitted orders (finest 4 levels)" in out
