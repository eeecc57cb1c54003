"""Delimited output, JSON output, and figure rendering."""

import json

import numpy as np
import pytest

from gbv import ExperimentReport, read_csv_report, write_report
from gbv.figures import render_report
from gbv.report import to_csv, to_json


def sample_report():
    rep = ExperimentReport("density", ["subcommand", "Q", "raw_sum", "sta_sum",
                                      "normalized", "condition_holds", "wall_ms"])
    rep.add_row(subcommand="density", Q=2.0, raw_sum=0.0, sta_sum=3.25,
                normalized=0.5, condition_holds=True, wall_ms=1.5)
    rep.add_row(subcommand="density", Q=3.0, raw_sum=1.25, sta_sum=None,
                normalized=0.75, condition_holds=False, wall_ms=2.5)
    return rep


def test_add_row_rejects_unknown_columns():
    rep = ExperimentReport("density", ["subcommand", "Q"])
    with pytest.raises(KeyError):
        rep.add_row(subcommand="density", Q=1.0, bogus=2)


def test_csv_shape_and_cells():
    text = to_csv(sample_report())
    lines = text.strip().split("\n")
    assert lines[0] == "subcommand,Q,raw_sum,sta_sum,normalized,condition_holds,wall_ms"
    assert lines[1] == "density,2.0,0.0,3.25,0.5,true,1.5"
    # None from a missing measurement serializes as the empty cell
    assert lines[2] == "density,3.0,1.25,,0.75,false,2.5"


def test_numpy_scalars_normalized():
    rep = ExperimentReport("x", ["a", "b", "c"])
    rep.add_row(a=np.float64(0.1), b=np.int64(7), c=np.bool_(True))
    text = to_csv(rep)
    assert text.strip().split("\n")[1] == "0.1,7,true"
    payload = json.loads(to_json(rep))
    assert payload["rows"][0] == {"a": 0.1, "b": 7, "c": True}


def test_float_repr_round_trip():
    value = 0.1 + 0.2  # classic shortest-repr case: 0.30000000000000004
    rep = ExperimentReport("x", ["v"])
    rep.add_row(v=value)
    cell = to_csv(rep).strip().split("\n")[1]
    assert float(cell) == value


def test_json_payload():
    payload = json.loads(to_json(sample_report()))
    assert payload["subcommand"] == "density"
    assert payload["columns"][0] == "subcommand"
    assert payload["rows"][0]["condition_holds"] is True
    assert payload["rows"][1]["sta_sum"] is None


def test_write_and_read_back(tmp_path):
    rep = sample_report()
    path = tmp_path / "out.csv"
    text = write_report(rep, str(path), "csv")
    assert path.read_text() == text
    back = read_csv_report(str(path))
    assert back.subcommand == "density"
    assert back.columns == rep.columns
    assert back.rows[0]["Q"] == "2.0"
    assert back.rows[1]["sta_sum"] == ""


def test_write_json(tmp_path):
    path = tmp_path / "out.json"
    text = write_report(sample_report(), str(path), "json")
    assert json.loads(path.read_text()) == json.loads(text)


def test_read_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ValueError):
        read_csv_report(str(path))


def test_render_figure(tmp_path):
    out = tmp_path / "fig.png"
    render_report(sample_report(), str(out))
    assert out.exists() and out.stat().st_size > 1000


def test_render_figure_from_csv_strings(tmp_path):
    path = tmp_path / "rep.csv"
    write_report(sample_report(), str(path), "csv")
    back = read_csv_report(str(path))
    out = tmp_path / "fig2.png"
    render_report(back, str(out))
    assert out.exists() and out.stat().st_size > 1000


def test_render_unknown_subcommand_still_writes(tmp_path):
    rep = ExperimentReport("mystery", ["a"])
    out = tmp_path / "fig3.png"
    render_report(rep, str(out))
    assert out.exists()
