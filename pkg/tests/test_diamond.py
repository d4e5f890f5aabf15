#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/13 11:15
# @file:test_diamond.py
import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from arith import rank_over_field
from diamond import (
    DiamondSpec,
    Grid,
    ProductMatrix,
    contiguous_rank_hull_check,
    contiguous_spec,
    desnanot_jacobi_check,
    diamond_minor,
    diamond_position,
    extract,
    is_contiguous,
    offsets_of,
    parse_spec,
    rank_probe,
    sharp_matrix,
)
from sequences import somos, unit_sequence
from utils import SpecError, UnrealisedPosition, Verdict


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_position_and_offsets_are_inverse(row, col):
    c1, c2 = offsets_of(row, col)
    assert diamond_position(c1, c2) == (row, col)


def test_position_rejects_mixed_parity():
    with pytest.raises(SpecError):
        diamond_position(0, 1)


def test_spec_validation():
    with pytest.raises(SpecError):
        DiamondSpec((0, 2), (1, 3))
    with pytest.raises(SpecError):
        DiamondSpec((2, 0), (0, 2))
    with pytest.raises(SpecError):
        DiamondSpec((0, 2, 4), (0, 2, 4), "right")
    spec = DiamondSpec((-2, 0, 2), (0, 4, 8), "right")
    assert spec.shape == (3, 3)
    assert is_contiguous(spec)
    assert not is_contiguous(DiamondSpec((0, 4), (0, 2)))


def test_spec_text_round_trip():
    spec = DiamondSpec((1, 3, 5, 7), (-3, -1, 1, 3))
    assert str(spec) == "e'=1,3,5,7 e''=-3,-1,1,3 half=none"
    assert parse_spec(str(spec)) == spec
    with pytest.raises(SpecError):
        parse_spec("e'=1,2")


def test_contiguous_spec_steps():
    spec = contiguous_spec(3, -2, 0, "right")
    assert spec.e1 == (-2, 0, 2)
    assert spec.e2 == (0, 4, 8)
    assert contiguous_spec(2, 1, 3).e2 == (3, 5)


def test_extract_uses_both_sequences():
    s = {i: i + 10 for i in range(-5, 6)}
    t = {j: 2 * j + 1 for j in range(-5, 6)}
    m = ProductMatrix(s, t)
    spec = DiamondSpec((0, 2), (2, 4))
    assert spec.positions() == [[(1, 1), (2, 2)], [(2, 0), (3, 1)]]
    assert extract(m, spec) == [[11 * 3, 12 * 5], [12 * 1, 13 * 3]]
    with pytest.raises(UnrealisedPosition):
        extract(m, DiamondSpec((0,), (20,)))


def test_somos4_diamond_minors_of_size_3_vanish(unit4):
    m = ProductMatrix(unit4)
    for c0 in range(-6, 2):
        spec = contiguous_spec(3, c0, c0 + 4)
        assert diamond_minor(m, spec) == 0


GENERIC = {
    4: ((3, 5), (2, 7, 1, 8)),
    5: ((3, 5), (2, 7, 1, 8, 2)),
    6: ((3, 5, 2), (2, 7, 1, 8, 2, 8)),
    7: ((3, 5, 2), (2, 7, 1, 8, 2, 8, 1)),
}


@pytest.mark.parametrize(
    "n, mode, probe, expected",
    [(4, "diamond", 6, 2), (5, "half", 6, 2), (6, "diamond", 8, 4), (7, "half", 8, 4)],
)
def test_generic_sequences_have_low_rank(n, mode, probe, expected):
    radius = probe + 2 if mode == "diamond" else (3 * (probe - 1) + 1) // 2 + 3
    coeffs, seed = GENERIC[n]
    seq = somos(coeffs, seed, 1000003).extend(-radius, radius)
    result = rank_probe(ProductMatrix(seq), mode, probe, window=(-radius, radius))
    assert result.rank == expected
    assert result.size == probe
    assert len(result.class_ranks) == (2 if mode == "diamond" else 8)


def test_unit_somos6_probe():
    seq = unit_sequence(6).extend(-12, 12)
    result = rank_probe(ProductMatrix(seq), "diamond", 10, window=(-12, 12))
    assert result.rank == 4


def test_hull_check_certifies_generic_somos4():
    coeffs, seed = GENERIC[4]
    seq = somos(coeffs, seed, 1000003).extend(-10, 10)
    report = contiguous_rank_hull_check(ProductMatrix(seq), 2, window=(-8, 8))
    assert report.verdict == Verdict.certified
    assert report.classes == 2


def test_hull_check_rejects_too_small_rank(unit4):
    report = contiguous_rank_hull_check(ProductMatrix(unit4), 1, window=(-6, 6))
    assert report.verdict == Verdict.not_certified
    assert not report.vanishing_ok


def test_sharp_matrix_has_one_nonvanishing_minor():
    r = 2
    grid = sharp_matrix(r, -4, 4)
    report = contiguous_rank_hull_check(grid, r)
    assert report.nonvanishing == [("sharp/2", -2, -2)]
    assert rank_over_field(grid.rows) == r + 1


def test_rank_zero_is_never_certified():
    grid = Grid([[0, 0], [0, 0]])
    report = contiguous_rank_hull_check(grid, 0)
    assert report.vanishing_ok
    assert report.verdict == Verdict.not_certified


@given(st.integers(3, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
))
@settings(max_examples=40)
def test_desnanot_jacobi_identity(w):
    assert desnanot_jacobi_check(w)


def test_desnanot_jacobi_needs_square():
    with pytest.raises(SpecError):
        desnanot_jacobi_check([[1, 2]])


def test_unit_somos6_has_singular_main_diagonal_minor():
    seq = unit_sequence(6).extend(-12, 12)
    m = ProductMatrix(seq)
    # 第 2、3 列都是 (1, 1, 1, 3)
    assert diamond_minor(m, DiamondSpec((0, 2, 4, 6), (0, 2, 4, 6))) == 0
    report = contiguous_rank_hull_check(m, 4, window=(-12, 12))
    assert report.vanishing_ok
    assert report.verdict == Verdict.not_certified
    assert any(entry[1:] == (0, 0) for entry in report.zero_diagonal)


def test_unit_somos4_is_not_certified(unit4):
    report = contiguous_rank_hull_check(ProductMatrix(unit4), 2, window=(-10, 10))
    assert report.vanishing_ok
    assert report.zero_diagonal
    assert report.verdict == Verdict.not_certified


@pytest.mark.parametrize(
    "n, r, mode",
    [
        (4, 2, "diamond"),
        (5, 2, "half"),
        pytest.param(6, 4, "diamond", marks=pytest.mark.slow),
        pytest.param(7, 4, "half", marks=pytest.mark.slow),
    ],
)
def test_hull_check_certifies_generic_sequences(n, r, mode):
    coeffs, seed = GENERIC[n]
    seq = somos(coeffs, seed, 1000003).extend(-24, 24)
    report = contiguous_rank_hull_check(ProductMatrix(seq), r, window=(-20, 20), mode=mode)
    assert report.diagonal_checked > 0
    assert not report.zero_diagonal
    assert report.verdict == Verdict.certified


@pytest.mark.slow
@pytest.mark.parametrize("n, mode, expected", [(4, "diamond", 2), (5, "half", 2), (6, "diamond", 4), (7, "half", 4)])
def test_unit_sequences_have_low_rank(n, mode, expected):
    probe = 16
    radius = probe + 2 if mode == "diamond" else (3 * (probe - 1) + 1) // 2 + 3
    seq = unit_sequence(n).extend(-radius, radius)
    result = rank_probe(ProductMatrix(seq), mode, probe, window=(-radius, radius))
    assert result.rank == expected
    assert len(result.class_ranks) == (2 if mode == "diamond" else 8)
    assert all(rank <= expected for rank in result.class_ranks.values())
