#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/14 11:30
# @file:test_cli.py
import pytest

import main as cli
from main import FALSIFIED, OK, USAGE, main
from utils import NotDivisible, ProbeInconclusive


def _body(out):
    return [ln for ln in out.splitlines() if not ln.startswith("#")]


def test_gen_unit_somos6(capsys):
    assert main(["gen", "--order", "6", "--unit", "--range", "0..11"]) == OK
    lines = _body(capsys.readouterr().out)
    assert lines[0] == "order=6 domain=rational base=0"
    assert lines[-1] == "421"
    assert len(lines) == 13


def test_gen_gale_robinson(capsys):
    assert main(["gen", "--gr", "1,3,4", "--unit", "--range", "0..10"]) == OK
    assert _body(capsys.readouterr().out)[-3:] == ["3", "5", "7"]


def test_gen_reports_division_failure(capsys):
    code = main(["gen", "--order", "4", "--unit", "--p", "2", "--range", "0..40"])
    assert code == FALSIFIED


def test_header_lists_configuration(capsys):
    main(["gen", "--order", "4", "--unit", "--range", "0..3"])
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "# somos-lab gen"
    assert "# seed = 20240522" in out


def test_rank_of_unit_somos4(capsys):
    code = main(["rank", "--order", "4", "--unit", "--probe", "6", "--no-certificate", "--expect", "2"])
    assert code == OK
    assert "rank = 2" in capsys.readouterr().out


def test_rank_expectation_mismatch(capsys):
    code = main(["rank", "--order", "4", "--unit", "--probe", "6", "--no-certificate", "--expect", "3"])
    assert code == FALSIFIED


def test_invariant_dimensions(capsys):
    assert main(["invariants", "--order", "4", "--dims"]) == OK
    assert _body(capsys.readouterr().out)[-1] == "5 / 2"


def test_modular_dimension_is_labelled_as_bound(capsys):
    assert main(["invariants", "--order", "4", "--dims", "--mod-p"]) == OK
    assert _body(capsys.readouterr().out)[-1] == "5 / <= 2 (mod p)"


def test_certify_low_orders(capsys):
    assert main(["certify", "--order", "4"]) == OK
    assert "verdict = passed" in capsys.readouterr().out


def test_experiment_prediction(capsys):
    assert main(["experiment", "--predict", "1,5,10"]) == OK
    assert _body(capsys.readouterr().out) == ["predicted = 96 (exceptional)"]


@pytest.mark.parametrize(
    "argv",
    [
        ["gen", "--order", "4", "--range", "0..3"],
        ["gen", "--order", "4", "--unit", "--p", "12", "--range", "0..3"],
        ["gen", "--order", "4", "--coeffs", "1", "--seed", "1,1,1,1", "--range", "0..3"],
        ["certify", "--order", "9"],
        ["experiment"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == USAGE


def test_argparse_errors_exit_with_usage_code(capsys):
    with pytest.raises(SystemExit) as e:
        main(["gen", "--order", "4", "--unit", "--range", "5..1"])
    assert e.value.code == USAGE


def test_config_file_overrides(tmp_path, capsys):
    path = tmp_path / "lab.conf"
    path.write_text("# desk settings\nprobe_size = 12\n", encoding="utf-8")
    assert main(["--config", str(path), "gen", "--order", "4", "--unit", "--range", "0..3"]) == OK
    assert "# probe_size = 12" in capsys.readouterr().out


def test_config_file_unknown_key(tmp_path, capsys):
    path = tmp_path / "lab.conf"
    path.write_text("no_such_key = 1\n", encoding="utf-8")
    assert main(["--config", str(path), "gen", "--order", "4", "--unit", "--range", "0..3"]) == USAGE


@pytest.mark.parametrize("error", [ProbeInconclusive("all 5 trials aborted"), NotDivisible("x0 does not divide x1")])
def test_mathematical_failures_exit_with_falsified(monkeypatch, error):
    def fail(cfg):
        raise error

    monkeypatch.setattr(cli, "run_gr_experiment", fail)
    assert main(["experiment", "--gr", "1,2,3", "--trials", "1"]) == FALSIFIED
