#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/13 09:31
# @file:test_arith.py
import random
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings
from sympy.polys.domains import QQ

from arith import (
    FpElem,
    LaurentPoly,
    RatFunc,
    det_bareiss,
    det_laplace,
    discriminant,
    format_coeff_expr,
    ground_value,
    is_prime,
    lab_ring,
    nullspace_fraction_free,
    parse_coeff_expr,
    parse_poly_text,
    poly_eval,
    poly_exact_divide,
    random_prime,
    rank_over_field,
    resultant,
    summand_count,
    x_gens,
)
from utils import DomainMismatch, NotDivisible, TableError

small_ints = st.integers(min_value=-20, max_value=20)


def square(size):
    return st.lists(st.lists(small_ints, min_size=size, max_size=size), min_size=size, max_size=size)


def test_is_prime_small_and_large():
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    # Carmichael
    assert not is_prime(561)


def test_random_prime_lies_in_interval():
    rng = random.Random(7)
    for _ in range(20):
        q = random_prime(rng, 10**5, 10**6)
        assert 10**5 <= q <= 10**6 and is_prime(q)
    with pytest.raises(ValueError):
        random_prime(rng, 10, 5)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_fp_division_inverts_multiplication(a, b):
    p = 1000003
    x, y = FpElem(a, p), FpElem(b, p)
    if y:
        assert (x * y) / y == x


def test_fp_rejects_mixed_moduli():
    with pytest.raises(DomainMismatch):
        FpElem(1, 5) + FpElem(1, 7)
    with pytest.raises(ZeroDivisionError):
        FpElem(3, 5) / FpElem(0, 5)


@given(square(3))
def test_bareiss_matches_laplace(m):
    assert det_bareiss(m) == det_laplace(m)


@given(square(4), square(4))
@settings(max_examples=30)
def test_determinant_is_multiplicative(a, b):
    ab = [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    assert det_bareiss(ab) == det_bareiss(a) * det_bareiss(b)


def test_empty_determinant_is_one():
    assert det_bareiss([]) == 1
    assert det_laplace([]) == 1


def test_exact_division_recovers_factor():
    ring = lab_ring(4)
    a1, a2, x0, x1, x2, x3 = ring.gens
    p = a1 * x0 * x2 + a2 * x1**2 + 3
    q = x0 + x3 * a2 - 1
    assert poly_exact_divide(p * q, q) == p
    with pytest.raises(NotDivisible):
        poly_exact_divide(p * q + x1, q)


def test_laurent_arithmetic_tracks_denominators():
    ring = lab_ring(4)
    x0, x1 = x_gens(ring)[:2]
    one = LaurentPoly(ring.one)
    inv = one.exact_div(LaurentPoly(x0))
    assert inv.denominator_exponents()[ring.index(x0)] == 1
    assert not inv.is_polynomial()
    assert inv * LaurentPoly(x0) == 1
    with pytest.raises(NotDivisible):
        LaurentPoly(x1 + 1).exact_div(LaurentPoly(x0 + 1))


def test_ratfunc_equality_cross_multiplies():
    ring = lab_ring(4)
    x0, x1 = x_gens(ring)[:2]
    assert RatFunc(x0 * x1, x1**2) == RatFunc(x0, x1)
    assert RatFunc(x0, x1) + RatFunc(x1, x1) == RatFunc(x0 + x1, x1)
    with pytest.raises(ZeroDivisionError):
        RatFunc(x0, ring.zero)


def test_poly_eval_partial_and_full():
    ring = lab_ring(4)
    a1, a2, x0, x1, x2, x3 = ring.gens
    p = a1 * x0 * x2 + a2 * x1**2
    assert poly_eval(p, {a1: 1, a2: 1, x0: 2, x1: 3, x2: 5, x3: 7}) == 19
    partial = poly_eval(p, {a1: 2, a2: 0})
    assert partial == 2 * x0 * x2
    assert poly_eval(p, {a1: FpElem(1, 11), a2: 1, x0: 2, x1: 3, x2: 5, x3: 7}) == FpElem(8, 11)


def test_resultant_sign_convention():
    a, b = 3, 10
    assert resultant([-a, 1], [-b, 1]) == b - a


def test_resultant_of_polynomials_vanishes_on_common_root():
    ring = lab_ring(4)
    x0, x1 = x_gens(ring)[:2]
    p = (x0 - 2) * (x0 - x1)
    q = (x0 - 2) * (x0 + 5)
    assert resultant(p, q, x0) == 0
    assert resultant(x0 - x1, x0 + 5, x0) == -x1 - 5


@given(small_ints, small_ints)
def test_quadratic_discriminant(b, c):
    assert discriminant([c, b, 1]) == 4 * c - b * b


def test_nullspace_vectors_annihilate_rows():
    rows = [[1, 2, 3, 4], [2, 4, 7, 9], [Fraction(1, 2), 1, 1, 2]]
    basis = nullspace_fraction_free(rows)
    assert len(basis) == 4 - rank_over_field(rows)
    for vec in basis:
        for row in rows:
            assert sum(Fraction(c) * v for c, v in zip(row, vec)) == 0


def test_nullspace_of_empty_system_is_identity():
    assert nullspace_fraction_free([], 2) == [[1, 0], [0, 1]]


@given(square(5))
@settings(max_examples=40)
def test_rank_mod_large_prime_matches_rational(m):
    assert rank_over_field(m, 2**61 - 1) == rank_over_field(m)


def test_rank_detects_field_characteristic():
    m = [[1, 2], [3, 6 + 7]]
    assert rank_over_field(m) == 2
    assert rank_over_field(m, 7) == 1
    assert rank_over_field([[FpElem(2, 5), FpElem(4, 5)], [FpElem(1, 5), FpElem(2, 5)]]) == 1


def test_coefficient_expressions():
    ring = lab_ring(6)
    a1, a2, a3 = ring.gens[:3]
    poly = parse_coeff_expr("2*a1*a3^2 - a2 + 7", ring)
    assert poly == 2 * a1 * a3**2 - a2 + 7
    assert parse_coeff_expr(format_coeff_expr(poly), ring) == poly
    with pytest.raises(TableError):
        parse_coeff_expr("a9", ring)


def test_table_text_counts_summands():
    ring = lab_ring(4)
    text = "a1 : 1010\na2 + 1 : 0200\n# comment\n3 : 1001\n"
    poly = parse_poly_text(text, ring, None)
    assert summand_count(poly) == 3
    with pytest.raises(TableError):
        parse_poly_text("a1 : 10", ring)


def test_ground_value_of_constants():
    x0, x1 = x_gens(lab_ring(2, 0, domain=QQ))
    assert ground_value((x0 + 5) - x0) == 5
    assert ground_value(x0 * 0) == 0
    assert ground_value(QQ(3, 4)) == Fraction(3, 4)
    assert ground_value(QQ(3, 4), 7) == 6
    with pytest.raises(ValueError):
        ground_value(x0 + 1)


def test_field_evaluation_keeps_rational_coefficients():
    x0, x1 = x_gens(lab_ring(2, 0, domain=QQ))
    f = x0 * QQ(1, 2) + x1 * QQ(2, 3)
    # 3/2 + 10/3 = 29/6，模 7 为 1 * 6
    assert poly_eval(f, {x0: FpElem(3, 7), x1: FpElem(5, 7)}) == FpElem(6, 7)
