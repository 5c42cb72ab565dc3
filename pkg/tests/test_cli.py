import pytest

from itmflow.cli import (
    EXIT_DIAGNOSIS,
    EXIT_OK,
    EXIT_USAGE,
    ConfigError,
    RunConfig,
    UsageError,
    load_config,
    main,
    resolve_config,
    run_command,
)
from itmflow.results import read_csv_table, read_results


def test_solve_newton_matches_table2():
    code, doc, _ = run_command(["solve", "sakiadis", "--finder", "newton", "--h0", "2.5"])
    assert code == EXIT_OK
    assert doc.final["skin_friction"] == pytest.approx(-0.443761, abs=1e-5)
    assert doc.final["h_star"] == pytest.approx(2.954391, abs=1e-4)
    assert len(doc.tables["iterations"]["j"]) == 7


def test_gamma_scan_nonexistence_exit_code():
    code, doc, _ = run_command(["gamma-scan", "moving", "--b", "-0.4", "--range", "1:150", "--samples", "32"])
    assert code == EXIT_DIAGNOSIS
    assert doc.final["zero_count_evidence"] == 0


def test_topfer_checkpoint_report():
    code, doc, _ = run_command(["topfer", "--checkpoints", "4,6", "--fixed-step", "0.1"])
    # the two estimates differ by 8.5e-4, so the agreement check reports a diagnosis
    assert code == EXIT_DIAGNOSIS
    assert doc.final["agreement"] == pytest.approx(8.5485e-4, rel=1e-3)
    assert doc.tables["checkpoints"]["eta_star"] == [4.0, 6.0]


def test_sweep_table():
    code, doc, _ = run_command(["solve", "slip", "--c", "5,10"])
    assert code == EXIT_OK
    assert doc.tables["sweep"]["param"] == [5.0, 10.0]


def test_negative_lists_are_accepted():
    _, cfg, _ = resolve_config(["solve", "falkner-skan", "--beta", "-0.1,-0.15", "--p", "-1"])
    assert cfg.beta == (-0.1, -0.15) and cfg.p == -1


def test_usage_error_names_flag_and_default(capsys):
    assert main(["solve", "sakiadis", "--eta-inf", "-3"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "--eta-inf" in err and "default" in err


def test_unknown_subcommand_and_empty_argv(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_newton_only_for_sakiadis():
    with pytest.raises(UsageError, match="--finder"):
        run_command(["solve", "slip", "--finder", "newton"])


def test_main_exit_codes(capsys):
    assert main(["solve", "sakiadis", "-q"]) == EXIT_OK
    assert main(["gamma-scan", "moving", "--b", "-0.4", "-q"]) == EXIT_DIAGNOSIS
    assert "no solution" in capsys.readouterr().err


def test_empty_config_gives_defaults(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# nothing set\n")
    cfg = load_config(path)
    assert cfg == RunConfig()
    assert cfg.problem_spec().eta_inf == 10.0


def test_flag_overrides_config(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("eta_inf = 20\nfinder = secant\n")
    _, cfg, _ = resolve_config(["solve", "sakiadis", "--config", str(path), "--eta-inf", "15"])
    assert cfg.eta_inf == 15.0
    assert cfg.finder == "secant"


def test_config_beta_matches_flag(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("problem = falkner-skan\nbeta = -0.15\n")
    _, from_file, _ = resolve_config(["solve", "--config", str(path)])
    _, from_flag, _ = resolve_config(["solve", "falkner-skan", "--beta", "-0.15"])
    assert from_file.problem_spec() == from_flag.problem_spec()


def test_unknown_config_key_suggests_nearest(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("eta_infinity = 12\n")
    with pytest.raises(ConfigError, match="nearest valid key is 'eta-inf'"):
        load_config(path)


def test_bad_config_value(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("samples = many\n")
    with pytest.raises(ConfigError, match="--samples"):
        load_config(path)


def test_output_env_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("ITMFLOW_OUTPUT_DIR", str(tmp_path))
    code, _, written = run_command(["solve", "sakiadis", "--format", "csv"])
    assert code == EXIT_OK
    names = sorted(p.name for p in written)
    assert names == ["solve-sakiadis_iterations.csv", "solve-sakiadis_solution.csv"]
    _, cols = read_csv_table(written[0])
    assert "h_star" in cols


def test_explicit_output_json(tmp_path):
    _, doc, written = run_command(["oracle", "blasius", "--output", str(tmp_path / "o")])
    assert read_results(written[0]) == doc
    assert doc.final["skin_friction"] == pytest.approx(0.332057, abs=1e-6)


def test_oracle_invalid_bracket_is_a_diagnosis():
    code, _, _ = run_command(["oracle", "blasius", "--s-bracket", "0.4:0.5"])
    assert code == EXIT_DIAGNOSIS


def test_series_and_rubel_commands():
    code, doc, _ = run_command(["series-check"])
    assert code == EXIT_OK and doc.final["max_abs_diff"] <= 1e-6
    code, doc, _ = run_command(["rubel-bound", "--M", "4"])
    assert code == EXIT_OK and doc.final["all_dominate"] is True


def test_branches_command():
    code, doc, _ = run_command(["branches", "moving", "--b", "-0.25"])
    assert code == EXIT_OK
    assert doc.final["branches"] == 2
