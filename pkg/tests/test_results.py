import json
import math

import numpy as np
import pytest

from itmflow.results import (
    ResultDocument,
    iteration_table,
    read_csv_table,
    read_results,
    solution_table,
    write_results,
)


@pytest.fixture
def doc(sakiadis_secant):
    run = sakiadis_secant
    return ResultDocument.create(
        "solve",
        {"problem": "sakiadis", "h0": 2.5},
        final={"h_star": run.final_h_star, "lambda": run.final_lambda, "skin_friction": run.skin_friction},
        tables={"iterations": iteration_table(run.records), "solution": solution_table(run.physical_solution)},
    )


def test_json_round_trip(doc, tmp_path):
    (path,) = write_results(doc, "json", tmp_path / "run")
    assert path.suffix == ".json"
    back = read_results(path)
    assert back == doc
    assert back.final["h_star"] == doc.final["h_star"]  # bit-exact
    assert back.tables["iterations"]["h_star"] == doc.tables["iterations"]["h_star"]


def test_json_keeps_nan(tmp_path):
    d = ResultDocument("solve", final={"gamma": math.nan})
    back = read_results(write_results(d, "json", tmp_path / "x.json")[0])
    assert math.isnan(back.final["gamma"]) and back == d


def test_csv_one_file_per_table(doc, tmp_path):
    paths = write_results(doc, "csv", tmp_path / "run")
    names = sorted(p.name for p in paths)
    assert names == ["run_iterations.csv", "run_solution.csv"]
    header, cols = read_csv_table(tmp_path / "run_iterations.csv")
    assert list(cols) == ["j", "h_star", "lambda", "gamma", "skin_friction", "status"]
    assert header["command"] == "solve" and header["metadata"]["config"]["h0"] == 2.5
    assert cols["h_star"] == doc.tables["iterations"]["h_star"]  # 17 digits round-trip
    _, sol = read_csv_table(tmp_path / "run_solution.csv")
    assert list(sol) == ["eta", "f", "fprime", "fsecond"]


def test_csv_header_is_a_comment(doc, tmp_path):
    write_results(doc, "csv", tmp_path / "run")
    first = (tmp_path / "run_iterations.csv").read_text().splitlines()[0]
    assert first.startswith("# ")
    json.loads(first[2:])


def test_csv_without_tables(tmp_path):
    d = ResultDocument("oracle", final={"skin_friction": 0.1})
    (path,) = write_results(d, "csv", tmp_path / "o")
    assert path.name == "o_final.csv"


def test_metadata_block(doc):
    assert set(doc.metadata) == {"config", "timestamp", "version"}


def test_numpy_values_become_plain():
    d = ResultDocument("x", final={"a": np.float64(1.5), "b": np.int64(2), "c": np.bool_(True)})
    assert json.loads(d.to_json())["final"] == {"a": 1.5, "b": 2, "c": True}


def test_unequal_columns_rejected():
    with pytest.raises(ValueError):
        ResultDocument("x", tables={"t": {"a": [1, 2], "b": [1]}})


def test_io_errors_name_the_path(doc, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        write_results(doc, "json", blocker / "sub" / "run")
    with pytest.raises(OSError, match="missing"):
        read_results(tmp_path / "missing.json")


def test_unknown_format(doc, tmp_path):
    with pytest.raises(ValueError):
        write_results(doc, "xml", tmp_path / "run")
