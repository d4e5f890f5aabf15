#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/13 16:05
# @file:test_integrality.py
import pytest

from arith import lab_ring, x_gens
from integrality import (
    coprime_probe,
    denominator_containment,
    lambda_set,
    laurent_audit,
    recentred,
    theta_chain,
    theta_set,
    xi_coprimality_probe,
)
from utils import SpecError, Verdict


def test_laurent_audit_somos4():
    report = laurent_audit(4, 0, 12)
    assert report.verdict == Verdict.passed
    assert [r.index for r in report.rows] == list(range(13))
    assert report.rows[0].denominator == "1"
    assert report.rows[4].denominator == "x0"
    assert report.rows[4].terms == 2
    assert report.table().splitlines()[0] == "index | denominator monomial | numerator term count"


def test_laurent_audit_gale_robinson():
    report = laurent_audit((1, 2, 3), 0, 9)
    assert report.order == "gr-1,2,3"
    assert report.rows[6].denominator == "x0"


def test_recentring_shifts_master_sequence():
    u = recentred(4, -1, 3)
    assert all(u[i].is_polynomial() for i in range(-1, 3))
    # u_3 = S_4
    assert not u[3].is_polynomial()


def test_theta_sets_grow_inside_initial_variables():
    chain = theta_chain(4, 5)
    assert len(chain) == 6
    for small, big in zip(chain, chain[1:]):
        assert set(small) <= set(big)
    assert set(chain[-1]) <= {"x0", "x1", "x2", "x3"}
    assert theta_set(4, 5) == chain[-1]


def test_denominator_containment_somos4():
    report = denominator_containment(4, K=6)
    assert report.contained
    assert set(report.theta_k) <= set(report.lam) | set(report.theta_base)


def test_lambda_needs_recentring():
    with pytest.raises(SpecError):
        lambda_set(8)


def test_coprime_check_on_small_polynomials():
    x0, x1 = x_gens(lab_ring(2, 0))
    ok, failures = coprime_probe(x0 * x1 + 1, x0 + x1, rounds=2)
    assert ok and not failures
    # 公因子 x0 + x1
    ok, failures = coprime_probe((x0 + x1) * (x0 + 2), (x0 + x1) * (x1 + 3), rounds=2)
    assert not ok
    assert {name for _, name, _ in failures} == {"x0", "x1"}


def test_xi_probe_somos4():
    report = xi_coprimality_probe(4, rounds=2)
    assert report.verdict == Verdict.certified
    assert len(report.minors) == 2


@pytest.mark.slow
def test_order6_denominator_sets():
    assert lambda_set(6) == ["x2"]
    assert theta_set(6, 8) == [f"x{i}" for i in range(6)]


@pytest.mark.slow
def test_order7_denominator_sets():
    assert lambda_set(7) == ["x2", "x3", "x4"]
    assert theta_set(7, 10) == [f"x{i}" for i in range(7)]


@pytest.mark.slow
@pytest.mark.parametrize("n, summands", [(6, 197), (7, 191)])
def test_xi_minors_are_coprime(n, summands):
    report = xi_coprimality_probe(n)
    assert report.verdict == Verdict.certified
    assert [m.summands for m in report.minors] == [summands, summands]
    assert [m.degree for m in report.minors] == [17, 17]
