import sys
import contextlib
import csv
import io
import math
import os
import tempfile
import unittest

import tests.setup_test_env  # noqa
import better_exchook
import pytest

from dispersia.errors import DomainError
from dispersia.report import (
    ReportTable,
    emit_report,
    format_csv_cell,
    format_text_cell,
    key_value_table,
    render_csv,
    render_text,
)


def _table():
    table = ReportTable(title="Mean and variance of D", column_names=("family", "n", "mean_D", "flag"))
    table.add_row("exponential", 100, 98.01980198019803, True)
    table.add_row("gamma", 200, 1e-7, False)
    return table


def test_report_table_rectangular():
    table = _table()
    assert table.column("n") == [100, 200]
    with pytest.raises(DomainError):
        table.add_row("x", 1)
    with pytest.raises(DomainError):
        ReportTable(title="t", column_names=("a",), rows=[(1, 2)])


def test_format_cells():
    assert format_text_cell(98.01980198019803) == "98.02"
    assert format_text_cell(0.93443) == "0.9344"
    assert format_text_cell(369.5005) == "369.5"
    assert format_text_cell(61234.5) == "6.123e+04"
    assert format_text_cell(1e-7) == "1e-07"
    assert format_text_cell(0.0) == "0"
    assert format_text_cell(math.nan) == "nan"
    assert format_text_cell(True) == "yes"
    assert format_text_cell(3) == "3"
    assert format_csv_cell(0.1) == "0.1"
    assert format_csv_cell(98.01980198019803) == "98.01980198019803"


def test_render_text():
    text = render_text(_table())
    lines = text.splitlines()
    assert lines[0] == "Mean and variance of D"
    assert lines[1].split() == ["family", "n", "mean_D", "flag"]
    assert lines[3].split() == ["exponential", "100", "98.02", "yes"]
    assert lines[4].split() == ["gamma", "200", "1e-07", "no"]


def test_render_csv_round_trip():
    content = render_csv(_table())
    rows = list(csv.reader(io.StringIO(content)))
    assert rows[0] == ["family", "n", "mean_D", "flag"]
    assert float(rows[1][2]) == 98.01980198019803
    assert float(rows[2][2]) == 1e-7
    assert content.endswith("\n") and "\r" not in content


def test_emit_report_destinations():
    table = key_value_table("Fit", [("family", "gamma"), ("shape", 9.8663)])
    out = io.StringIO()
    emit_report(table, "csv", out)
    assert out.getvalue() == "name,value\nfamily,gamma\nshape,9.8663\n"
    with tempfile.TemporaryDirectory(prefix="test_dispersia_report") as tmp_dir:
        filename = os.path.join(tmp_dir, "fit.csv")
        emit_report(table, "csv", filename)
        with open(filename) as f:
            assert f.read() == out.getvalue()
    with pytest.raises(DomainError):
        emit_report(table, "xml", out)


def test_emit_report_stdout():
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        emit_report(key_value_table("Fit", [("n", 109)]), "text")
    assert out.getvalue().startswith("Fit\n")
    assert "109" in out.getvalue()


if __name__ == "__main__":
    better_exchook.install()
    if len(sys.argv) <= 1:
        for k, v in sorted(globals().items()):
            if k.startswith("test_"):
                print("-" * 40)
                print("Executing: %s" % k)
                try:
                    v()
                except unittest.SkipTest as exc:
                    print("SkipTest:", exc)
                print("-" * 40)
        print("Finished all tests.")
    else:
        assert len(sys.argv) >= 2
        for arg in sys.argv[1:]:
            print("Executing: %s" % arg)
            if arg in globals():
                globals()[arg]()  # assume function and execute
            else:
                eval(arg)  # assume Python code and execute
