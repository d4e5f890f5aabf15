#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/04 14:22
# @file:diamond.py
"""
s × t 矩阵上的 diamond / half-diamond 子矩阵、子式与秩探测。
位置 (row, col) 所在对角线为 c' = row - col，反对角线为 c'' = row + col。
"""
from dataclasses import dataclass, field
from typing import Optional

from pydantic import BaseModel

from arith import FpElem, LaurentPoly, det_bareiss, det_laplace, rank_over_field
from conf import Config
from sequences import RawTerms, SeqView
from utils import SpecError, UnrealisedPosition, Verdict, get_logger

logger = get_logger("diamond")

HALF_SIDES = (None, "left", "right")


def diamond_position(c1, c2):
    if (c1 - c2) % 2:
        raise SpecError(f"offsets {c1} and {c2} differ in parity")
    return (c1 + c2) // 2, (c2 - c1) // 2


def offsets_of(row, col):
    return row - col, row + col


def _strictly_increasing(seq):
    return all(a < b for a, b in zip(seq, seq[1:]))


def _is_progression(seq, step):
    return all(b - a == step for a, b in zip(seq, seq[1:]))


@dataclass(frozen=True)
class DiamondSpec:
    """
    e1 为对角线偏移 e'，e2 为反对角线偏移 e''；half 指明哪一侧满足模 4 条件
    """

    e1: tuple
    e2: tuple
    half: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "e1", tuple(self.e1))
        object.__setattr__(self, "e2", tuple(self.e2))
        if not self.e1 or not self.e2:
            raise SpecError("offset lists must be nonempty")
        if not _strictly_increasing(self.e1) or not _strictly_increasing(self.e2):
            raise SpecError("offset lists must be strictly increasing")
        if len({c % 2 for c in self.e1 + self.e2}) != 1:
            raise SpecError("all offsets must share one parity")
        if self.half not in HALF_SIDES:
            raise SpecError(f"half must be one of {HALF_SIDES}, got {self.half!r}")
        side = self.side_offsets()
        if side is not None and len({c % 4 for c in side}) != 1:
            raise SpecError(f"{self.half} offsets must be pairwise congruent modulo 4")

    def side_offsets(self):
        if self.half == "left":
            return self.e1
        if self.half == "right":
            return self.e2
        return None

    @property
    def shape(self):
        return len(self.e1), len(self.e2)

    def positions(self):
        return [[diamond_position(c1, c2) for c2 in self.e2] for c1 in self.e1]

    def __str__(self):
        return (
            "e'=" + ",".join(map(str, self.e1))
            + " e''=" + ",".join(map(str, self.e2))
            + f" half={self.half or 'none'}"
        )


def parse_spec(text):
    """e'=c0,c1,... e''=d0,d1,... half=<none|left|right>"""
    fields = {}
    for part in text.split():
        if "=" not in part:
            raise SpecError(f"malformed spec token {part!r}")
        key, value = part.split("=", 1)
        fields[key] = value
    try:
        e1 = tuple(int(v) for v in fields["e'"].split(","))
        e2 = tuple(int(v) for v in fields["e''"].split(","))
    except (KeyError, ValueError) as e:
        raise SpecError(f"malformed spec {text!r}: {e}")
    half = fields.get("half", "none")
    return DiamondSpec(e1, e2, None if half == "none" else half)


def contiguous_spec(size, c0, d0, half=None):
    step1 = 4 if half == "left" else 2
    step2 = 4 if half == "right" else 2
    return DiamondSpec(
        tuple(c0 + step1 * k for k in range(size)),
        tuple(d0 + step2 * k for k in range(size)),
        half,
    )


def is_contiguous(spec):
    if spec.half is None:
        return _is_progression(spec.e1, 2) and _is_progression(spec.e2, 2)
    step1 = 4 if spec.half == "left" else 2
    step2 = 4 if spec.half == "right" else 2
    return _is_progression(spec.e1, step1) and _is_progression(spec.e2, step2)


def _interval(seq):
    if isinstance(seq, SeqView):
        return seq.lo, seq.hi
    if isinstance(seq, RawTerms):
        return seq.base, seq.base + len(seq) - 1
    keys = list(seq.keys()) if isinstance(seq, dict) else list(range(len(seq)))
    return min(keys), max(keys)


class ProductMatrix:
    """s × t：位置 (i, j) 的元素为 s_i · t_j"""

    def __init__(self, s, t=None):
        self.s = s
        self.t = s if t is None else t

    def entry(self, i, j):
        try:
            return self.s[i] * self.t[j]
        except (IndexError, KeyError):
            raise UnrealisedPosition(i, j)

    def window(self):
        return _interval(self.s), _interval(self.t)

    def __getitem__(self, pos):
        return self.entry(*pos)


@dataclass
class Grid:
    """有限的普通矩阵，rows[a][b] 对应下标 (row0 + a, col0 + b)"""

    rows: list
    row0: int = 0
    col0: int = 0
    label: str = field(default="")

    @property
    def shape(self):
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def block(self, a, b, size):
        return [r[b : b + size] for r in self.rows[a : a + size]]


def extract(m, spec):
    """
    按偏移取出 diamond 子矩阵
    :raises UnrealisedPosition: 某个交点不在已实现区间
    """
    return [[m.entry(*diamond_position(c1, c2)) for c2 in spec.e2] for c1 in spec.e1]


def determinant(matrix):
    if not matrix:
        return 1
    sample = matrix[0][0]
    if isinstance(sample, LaurentPoly) or hasattr(sample, "ring"):
        return det_laplace(matrix)
    return det_bareiss(matrix)


def diamond_minor(m, spec):
    rows, cols = spec.shape
    if rows != cols:
        raise SpecError(f"minor needs a square spec, got {rows}x{cols}")
    return determinant(extract(m, spec))


def _steps(half):
    return (4 if half == "left" else 2), (4 if half == "right" else 2)


def fit_contiguous(window, size, parity, half=None, residue=None):
    """
    在窗口内找尺寸最大（不超过 size）的连续子矩阵偏移
    :param window: ((rlo, rhi), (clo, chi))
    :param parity: 偏移的奇偶
    :param residue: half 模式下指定侧的模 4 余数
    :return: DiamondSpec 或 None
    """
    (rlo, rhi), (clo, chi) = window
    step1, step2 = _steps(half)
    span = min(rhi - rlo, chi - clo)
    largest = 2 * span // (step1 + step2) + 1
    for n in range(min(size, largest), 0, -1):
        lift = step1 * (n - 1) // 2
        for dr in range(4):
            for dc in range(4):
                row, col_min = rlo + dr, clo + dc
                c0 = row - col_min - lift
                d0 = row + col_min + lift
                if c0 % 2 != parity:
                    continue
                spec = contiguous_spec(n, c0, d0, half)
                side = spec.side_offsets()
                if side is not None and side[0] % 4 != residue:
                    continue
                if _inside(spec, window):
                    return spec
    return None


def _inside(spec, window):
    (rlo, rhi), (clo, chi) = window
    for c1 in (spec.e1[0], spec.e1[-1]):
        for c2 in (spec.e2[0], spec.e2[-1]):
            r, c = diamond_position(c1, c2)
            if not (rlo <= r <= rhi and clo <= c <= chi):
                return False
    return True


def _classes(mode):
    if mode == "diamond":
        return [(None, q, None) for q in (0, 1)]
    if mode == "half":
        return [(side, q, q + 2 * k) for side in ("left", "right") for q in (0, 1) for k in (0, 1)]
    raise SpecError(f"unknown mode {mode!r}")


class ProbeResult(BaseModel):
    rank: int
    spec: str
    size: int
    class_ranks: dict


def _rank(matrix):
    sample = matrix[0][0]
    if isinstance(sample, FpElem):
        return rank_over_field(matrix, sample.p)
    return rank_over_field(matrix)


def rank_probe(m, mode="diamond", probe_size=None, window=None):
    """
    在窗口内取两种奇偶（half 模式再取两侧、两种模 4 余数）的最大连续子矩阵，
    返回观测到的最大秩及对应偏移；这是真实秩的下界
    """
    if probe_size is None:
        probe_size = Config.probe_size
    if window is None:
        window = m.window()
    elif isinstance(window[0], int):
        window = (tuple(window), tuple(window))
    best, best_spec, class_ranks = -1, None, {}
    for half, parity, residue in _classes(mode):
        spec = fit_contiguous(window, probe_size, parity, half, residue)
        if spec is None:
            continue
        r = _rank(extract(m, spec))
        key = f"{half or 'diamond'}/{parity}" + (f"/{residue}" if residue is not None else "")
        class_ranks[key] = r
        logger.debug("probe %s: %dx%d rank %d", key, len(spec.e1), len(spec.e2), r)
        if r > best:
            best, best_spec = r, spec
    if best_spec is None:
        raise SpecError(f"window {window} too small for a {mode} probe")
    return ProbeResult(rank=best, spec=str(best_spec), size=len(best_spec.e1), class_ranks=class_ranks)


def desnanot_jacobi_check(w):
    n = len(w)
    if n < 2 or any(len(r) != n for r in w):
        raise SpecError("Desnanot-Jacobi needs a square matrix of size >= 2")

    def sub(r0, c0, k):
        return [row[c0 : c0 + k] for row in w[r0 : r0 + k]]

    lhs = determinant(sub(0, 0, n - 1)) * determinant(sub(1, 1, n - 1)) - determinant(
        sub(0, 1, n - 1)
    ) * determinant(sub(1, 0, n - 1))
    centre = determinant(sub(1, 1, n - 2)) if n > 2 else 1
    return lhs == centre * determinant(w)


def class_grid(m, spec):
    """
    连续子矩阵作为普通矩阵：行编号 e' // step1，列编号 e'' // step2，
    两侧编号区间重合处即主对角线
    """
    step1, step2 = _steps(spec.half)
    return Grid(extract(m, spec), spec.e1[0] // step1, spec.e2[0] // step2, label=str(spec))


class HullReport(BaseModel):
    verdict: Verdict
    r: int
    vanishing_ok: bool
    diagonal_ok: bool
    nonvanishing: list = []
    zero_diagonal: list = []
    diagonal_checked: int = 0
    classes: int = 0


def _grid_hull(grid, r, report):
    rows, cols = grid.shape
    for a in range(rows - r):
        for b in range(cols - r):
            if determinant(grid.block(a, b, r + 1)):
                report.nonvanishing.append((grid.label, grid.row0 + a, grid.col0 + b))
    if r == 0:
        return
    # 行列编号区间相同的 r 阶块
    for label in range(max(grid.row0, grid.col0), min(grid.row0 + rows, grid.col0 + cols) - r + 1):
        report.diagonal_checked += 1
        if not determinant(grid.block(label - grid.row0, label - grid.col0, r)):
            report.zero_diagonal.append((grid.label, label, label))


def contiguous_rank_hull_check(m, r, window=None, mode="diamond"):
    """
    (a) 窗口内全部 (r+1) 阶连续子式为零；(b) 主对角线上的 r 阶连续子式非零。
    两者都成立时秩 r 在窗口上得到确认
    :param m: ProductMatrix（按 diamond 类拆分）或 Grid（普通矩阵）
    """
    report = HullReport(verdict=Verdict.not_certified, r=r, vanishing_ok=False, diagonal_ok=False)
    if isinstance(m, Grid):
        grids = [m]
    else:
        if window is None:
            window = m.window()
        elif isinstance(window[0], int):
            window = (tuple(window), tuple(window))
        grids = []
        for half, parity, residue in _classes(mode):
            spec = fit_contiguous(window, 10**9, parity, half, residue)
            if spec is not None:
                grids.append(class_grid(m, spec))
    for grid in grids:
        _grid_hull(grid, r, report)
    report.classes = len(grids)
    report.vanishing_ok = not report.nonvanishing
    # r = 0 时没有可作见证的非零子式
    report.diagonal_ok = r > 0 and report.diagonal_checked > 0 and not report.zero_diagonal
    if report.vanishing_ok and report.diagonal_ok:
        report.verdict = Verdict.certified
    logger.info(
        "hull check r=%d over %d grids: %d nonvanishing, %d zero diagonal",
        r,
        len(grids),
        len(report.nonvanishing),
        len(report.zero_diagonal),
    )
    return report


def sharp_matrix(r, lo, hi):
    """
    (i, j) 满足 i ≡ j (mod r) 处为 1，其中 i, j >= 0 且 i ≡ j ≡ 0 (mod r) 处为 2，其余为 0
    """
    if r < 1:
        raise SpecError("r must be positive")

    def value(i, j):
        if (i - j) % r:
            return 0
        if i >= 0 and j >= 0 and i % r == 0:
            return 2
        return 1

    idx = range(lo, hi + 1)
    return Grid([[value(i, j) for j in idx] for i in idx], lo, lo, label=f"sharp/{r}")


# ---------------------------------------------------------------- 周期序列上的子式计数


class MinorCount(BaseModel):
    checked: int
    nonzero: int
    zero_at: list = []

    @property
    def all_nonzero(self):
        return self.checked == self.nonzero


def _period_values(seq, period):
    seq.extend(seq.lo, seq.lo + period - 1)
    if seq.hi < seq.lo + period - 1:
        raise SpecError("sequence does not realise a full period")
    return seq.lo, [seq[seq.lo + k].value for k in range(period)]


def count_periodic_minors(s, t, size, periods, mode="diamond", diagonal=False):
    """
    周期 F_p 序列上全部互不相同的连续 size 阶子式
    :param periods: (s 的周期, t 的周期)
    :param diagonal: 只检验各类主对角线上的子式（diamond 模式）
    :return: MinorCount
    """
    ps, pt = periods
    p = s[s.lo].p
    s0, sv = _period_values(s, ps)
    t0, tv = _period_values(t, pt)

    def entry(row, col):
        return FpElem(sv[(row - s0) % ps] * tv[(col - t0) % pt], p)

    count = MinorCount(checked=0, nonzero=0)
    if mode == "diamond":
        shapes = [(1, 1)]
    elif mode == "half":
        shapes = [(1, 2), (2, 1)]
    else:
        raise SpecError(f"unknown mode {mode!r}")
    for u, v in shapes:
        # row = R + u*a + v*b, col = C + v*b - u*a
        if diagonal:
            if mode != "diamond":
                raise SpecError("the diagonal shortcut applies to diamond minors")
            starts = []
            for q in (0, 1):
                seen = set()
                for k in range(ps):
                    key = (2 * k + q) % ps
                    if key not in seen:
                        seen.add(key)
                        starts.append((2 * k + q, 0))
        else:
            starts = [(R, C) for R in range(ps) for C in range(pt)]
        for R, C in starts:
            matrix = [
                [entry(R + u * a + v * b, C + v * b - u * a) for b in range(size)] for a in range(size)
            ]
            count.checked += 1
            if determinant(matrix):
                count.nonzero += 1
            else:
                count.zero_at.append((u, v, R, C))
    logger.info("checked %d periodic minors, %d nonzero", count.checked, count.nonzero)
    return count
