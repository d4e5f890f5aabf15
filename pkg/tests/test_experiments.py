#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/14 10:12
# @file:test_experiments.py
from fractions import Fraction

import pytest
from pydantic import ValidationError

from experiments import (
    DEFAULT,
    EXCEPTIONAL,
    ExperimentConfig,
    decimation_scan,
    default_rank,
    eta,
    nonprimitive_probe,
    nonstrict_fit,
    predicted_rank,
    probe_radius,
    run_gr_experiment,
    window_rows,
)
from sequences import proper_types, somos
from utils import DomainMismatch, SpecError


@pytest.mark.parametrize("n, rank", [(4, 2), (5, 2), (6, 4), (7, 4), (8, 8), (16, 128)])
def test_default_rank(n, rank):
    assert default_rank(n) == rank


def test_eta():
    assert eta(5) == Fraction(3, 4)
    assert eta(6) == Fraction(3, 4)
    assert eta(7) == Fraction(1, 2)
    with pytest.raises(SpecError):
        eta(4)


def test_predictions():
    assert predicted_rank((1, 2, 3)).rank == 4
    assert predicted_rank((1, 2, 3)).kind == DEFAULT
    exceptional = predicted_rank((1, 5, 10))
    assert (exceptional.rank, exceptional.kind, exceptional.g) == (96, EXCEPTIONAL, 5)
    with pytest.raises(SpecError):
        predicted_rank((2, 4, 6))


@pytest.mark.parametrize("gr_type", [(1, 2, 5), (1, 3, 4)] + proper_types(9))
def test_order_8_and_9_predictions(gr_type):
    prediction = predicted_rank(gr_type)
    assert (prediction.rank, prediction.kind) == (8, DEFAULT)


def test_probe_radius():
    assert probe_radius(10, "diamond") == 12
    assert probe_radius(10, "half") == 17


def test_config_fills_defaults():
    cfg = ExperimentConfig(gr_type=(1, 2, 3))
    assert cfg.mode == "diamond"
    assert cfg.trials >= 1
    assert cfg.probe_size >= 8
    assert ExperimentConfig(gr_type=(1, 2, 4)).mode == "half"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"gr_type": (1, 2, 3), "prime_interval": (100, 10)},
        {"gr_type": (1, 2, 3), "probe_size": 6},
        {"gr_type": (1, 2, 3), "trials": 0},
        {"gr_type": (1, 2, 3), "mode": "square"},
        {"gr_type": (0, 2, 3)},
    ],
)
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValidationError):
        ExperimentConfig(**kwargs)


def test_experiment_is_deterministic():
    cfg = ExperimentConfig(gr_type=(1, 2, 3), trials=2, probe_size=10)
    first = run_gr_experiment(cfg)
    second = run_gr_experiment(cfg)
    assert first.modal_rank == 4
    assert first.agreement == first.completed == 2
    assert [r.line() for r in first.trials] == [r.line() for r in second.trials]
    assert first.lines()[-1] == "modal_rank=4 agreement=2/2 predicted=4 (default)"


def test_window_rows_need_exact_terms():
    seq = somos((1, 1), (1, 2, 2, 1), 11).extend(0, 10)
    with pytest.raises(DomainMismatch):
        window_rows(seq, 4)


def test_nonstrict_fit_recovers_somos6(unit6):
    report = nonstrict_fit(unit6, 6)
    assert report.dim == 1
    assert report.basis == [[1, -1, -1, -1]]
    assert report.validated


def test_nonstrict_fit_needs_enough_windows():
    with pytest.raises(SpecError):
        nonstrict_fit([1, 1, 1, 1, 1, 1, 3], 6)


def test_decimated_somos6_has_order_8(unit6):
    rows = {row.n: row for row in decimation_scan(unit6, [2], [6, 7, 8, 9])}
    assert rows[6].shared == 0
    assert rows[7].shared == 0
    assert rows[8].shared > 0
    assert rows[9].shared > 0


def test_decimated_somos7(unit7):
    by_d = {(row.d, row.n): row for row in decimation_scan(unit7, [2, 3], [8, 9])}
    assert by_d[(2, 8)].shared > 0
    assert by_d[(2, 9)].shared > 0
    assert by_d[(3, 8)].shared == 0
    assert by_d[(3, 9)].shared > 0


def test_trisected_somos7_has_order_16(unit7):
    (row,) = decimation_scan(unit7, [3], [16])
    assert row.shared > 0
    assert row.vector is not None


@pytest.mark.slow
def test_nonprimitive_type_exceeds_default_rank():
    report = nonprimitive_probe((2, 4, 6), probe_size=24)
    assert report.default_rank == 16
    assert report.rank > report.default_rank


@pytest.mark.slow
@pytest.mark.parametrize("gr_type", [(1, 2, 5), (1, 3, 4)] + proper_types(9))
def test_order_8_and_9_experiments_match_prediction(gr_type):
    report = run_gr_experiment(ExperimentConfig(gr_type=gr_type, trials=5))
    assert report.modal_rank == 8
    assert report.completed > 0
