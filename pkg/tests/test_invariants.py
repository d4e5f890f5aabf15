#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/13 14:40
# @file:test_invariants.py
import math

import pytest

from invariants import (
    builtin_invariant,
    in_kernel_span,
    is_invariant,
    kernel_dimension_mod_p,
    omega_box_kernel,
    phi_apply,
    symmetry_report,
    twin_check,
    upsilon_basis,
    upsilon_box_basis,
    window_values,
)
from utils import SpecError, Verdict


@pytest.mark.parametrize("n, size", [(4, 5), (5, 6), (6, 32), (7, 40)])
def test_upsilon_box_sizes(n, size):
    basis = upsilon_box_basis(n)
    assert len(basis) == size
    assert all(sum(d) == n for d in basis)


@pytest.mark.parametrize("n, size", [(4, 35), (5, 126), (6, 462), (7, 1716)])
def test_upsilon_basis_is_all_degree_n_monomials(n, size):
    basis = upsilon_basis(n)
    assert len(basis) == size == math.comb(2 * n - 1, n)
    assert len(set(basis)) == size
    assert basis == sorted(basis, reverse=True)
    assert set(upsilon_box_basis(n)) <= set(basis)


@pytest.mark.parametrize("n", [4, 5])
def test_low_order_kernels_are_two_dimensional(n):
    kernel = omega_box_kernel(n)
    assert len(kernel) == 2
    for f in kernel:
        assert phi_apply(f.phi, n) == 0


@pytest.mark.parametrize("n, dim", [(4, 2), (5, 2), (6, 3), (7, 3)])
def test_kernel_dimension_mod_p(n, dim):
    assert kernel_dimension_mod_p(n) == dim


@pytest.mark.parametrize("name", ["F4", "F5"])
def test_builtin_low_order_invariants(name):
    f = builtin_invariant(name)
    assert is_invariant(f).verdict == Verdict.passed
    assert phi_apply(f.phi, f.n) == 0
    assert in_kernel_span(f)


def test_unknown_builtin_is_rejected():
    with pytest.raises(SpecError):
        builtin_invariant("F9")


def test_invariant_is_constant_along_somos4(unit4):
    values = window_values(builtin_invariant("F4"), unit4, (1, 1), count=15)
    assert len(values) == 15
    assert set(values) == {4}


def test_twin_check_low_orders():
    assert twin_check((1,), (1, 2), (3, 5))
    assert twin_check((1, 1), (1, 2, 3), (4, 5, 6))


def test_twin_check_order4(unit4):
    window = unit4.values(0, 4)
    assert twin_check((1, 1), window[:4], window[1:])
    assert not twin_check((1, 1), (1, 1, 1, 1), (1, 1, 2, 1))


def test_twin_check_rejects_bad_input():
    with pytest.raises(SpecError):
        twin_check((1, 1), (1, 1, 1, 1), (1, 1, 1))
    with pytest.raises(SpecError):
        twin_check((1, 1), (1, 0, 1, 1), (1, 1, 1, 1))
    with pytest.raises(SpecError):
        twin_check((1, 1, 1, 1), (1,) * 8, (1,) * 8)


def test_symmetry_report_order4():
    report = symmetry_report(4)
    assert report.dim == 2
    assert len(report.positive) == 2


@pytest.mark.slow
@pytest.mark.parametrize("name", ["F6", "G6", "F7", "G7"])
def test_builtin_high_order_invariants_sampled(name):
    f = builtin_invariant(name)
    verdict = is_invariant(f)
    assert verdict.verdict == Verdict.sampled
    assert verdict.trials > 0


@pytest.mark.slow
def test_invariants_constant_along_somos6(unit6):
    for name in ("F6", "G6"):
        values = window_values(builtin_invariant(name), unit6, (1, 1, 1), count=10)
        assert len(set(values)) == 1


@pytest.mark.slow
@pytest.mark.parametrize("n, names", [(6, ("F6", "G6")), (7, ("F7", "G7"))])
def test_high_order_kernels_are_three_dimensional(n, names):
    kernel = omega_box_kernel(n)
    assert len(kernel) == 3
    for name in names:
        assert in_kernel_span(builtin_invariant(name))
