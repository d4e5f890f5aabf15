#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/13 15:22
# @file:test_certificates.py
import pytest

from arith import is_prime
from certificates import (
    build_twin_polys,
    degenerate_coefficients,
    skew,
    twin_rank_check,
    twin_uv,
    verify_certificates,
    verify_ff_witness,
    verify_low_order_identities,
)
from conf import Config
from utils import SpecError, Verdict


def test_low_order_identities_hold():
    report = verify_low_order_identities()
    assert report.verdict == Verdict.passed
    assert report.residual_terms == {4: 0, 5: 0}


def test_twin_polys_are_skew():
    U, V = twin_uv(4)
    assert V is None
    assert skew(U, 4) == 2 * U


def test_twin_uv_rejects_unknown_order():
    with pytest.raises(SpecError):
        twin_uv(8)


@pytest.mark.parametrize("n, root, period", [(4, 4, 5), (5, 3, 20)])
def test_low_order_witnesses(n, root, period):
    report = verify_ff_witness(n)
    assert report.p == 11
    assert report.roots == [root]
    assert report.verdict == Verdict.passed
    option = report.options[0]
    assert option.twins and option.nonzero_terms
    assert period in (option.period_s, option.period_t)
    assert option.minors_checked == option.minors_nonzero > 0
    assert option.mu_zero is None


def test_witness_needs_bundled_order():
    with pytest.raises(SpecError):
        verify_ff_witness(8)


def test_certificates_need_order_6_or_7():
    with pytest.raises(SpecError):
        verify_certificates(5)


@pytest.mark.slow
@pytest.mark.parametrize("n, summands, degree", [(6, 687, 24), (7, 3989, 28)])
def test_minor_polynomial_sizes(n, summands, degree):
    stats = build_twin_polys(n).stats()
    assert stats["D"] == summands
    assert stats["D_degree"] == degree


@pytest.mark.slow
@pytest.mark.parametrize("n", [6, 7])
def test_certificates_verify(n):
    twins = build_twin_polys(n)
    report = verify_certificates(n, twins)
    assert report.primary_residual_terms == 0
    assert report.derived_exact
    assert report.verdict == Verdict.passed
    degenerate = degenerate_coefficients(twins)
    assert not degenerate["U"] and not degenerate["V"]
    assert degenerate["D"]


@pytest.mark.slow
@pytest.mark.parametrize("n, p, minors", [(6, 19, 612), (7, 29, 7680)])
def test_high_order_witnesses(n, p, minors):
    report = verify_ff_witness(n)
    assert report.p == p
    assert report.verdict == Verdict.passed
    assert report.total_minors == minors
    assert report.roots
    # 每个重建出的种子都让 μ(U) 在根处为零
    assert all(option.mu_zero is True for option in report.options)


@pytest.mark.slow
def test_order6_witness_root():
    report = verify_ff_witness(6)
    assert 15 in report.roots
    assert report.options[0].seed[0] in report.roots


@pytest.mark.slow
def test_random_twins_have_rank_at_most_four():
    report = twin_rank_check(6, trials=3)
    assert report.pairs == report.vanishing
    lo, hi = Config.twin_prime_interval
    assert lo <= report.p <= hi
    assert is_prime(report.p)
