#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/03 09:41
# @file:sequences.py
"""
Somos / Gale-Robinson 序列：任意系数域上的双向延拓、符号主序列、抽取、对称与周期。
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Optional

from arith import (
    FpElem,
    LaurentPoly,
    format_laurent_text,
    lab_ring,
    named_gens,
)
from conf import Config
from utils import DivisionFailure, LaurentFailure, NotDivisible, SpecError, get_logger

logger = get_logger("sequences")

RATIONAL = "rational"
FIELD = "fp"
LAURENT = "laurent"


@dataclass(frozen=True)
class Recurrence:
    """
    s_i s_{i+n} = sum_k coeff_k * s_{i+p_k} s_{i+q_k}
    Somos: (p, q) = (j, n-j), j = 1..n//2；Gale-Robinson: (n1, n2+n3), (n2, n3+n1), (n3, n1+n2)
    """

    n: int
    coeffs: tuple
    gr_type: Optional[tuple] = None

    def __post_init__(self):
        if self.n < 2:
            raise SpecError(f"order must be >= 2, got {self.n}")
        if self.gr_type is None and len(self.coeffs) != self.n // 2:
            raise SpecError(f"order {self.n} needs {self.n // 2} coefficients, got {len(self.coeffs)}")
        if self.gr_type is not None:
            if len(self.gr_type) != 3 or min(self.gr_type) < 1 or sum(self.gr_type) != self.n:
                raise SpecError(f"invalid Gale-Robinson type {self.gr_type}")
            if len(self.coeffs) != 3:
                raise SpecError("Gale-Robinson recurrences take exactly 3 coefficients")

    @property
    def pairs(self):
        if self.gr_type is None:
            return tuple((self.coeffs[j - 1], j, self.n - j) for j in range(1, self.n // 2 + 1))
        n1, n2, n3 = self.gr_type
        return (
            (self.coeffs[0], n1, n2 + n3),
            (self.coeffs[1], n2, n3 + n1),
            (self.coeffs[2], n3, n1 + n2),
        )

    def rhs(self, get, i):
        total = None
        for c, p, q in self.pairs:
            term = c * get(i + p) * get(i + q)
            total = term if total is None else total + term
        return total

    def describe(self):
        if self.gr_type is None:
            return f"somos-{self.n}"
        return "gr-" + ",".join(str(x) for x in self.gr_type)


class SeqView:
    """
    惰性延拓的序列。realised 区间 [lo, hi] 内每个窗口都满足递推；
    延拓遇到除零（或 Laurent 非整除）时停止并记录原因。
    """

    def __init__(self, recurrence, seed, domain, base=0):
        if len(seed) != recurrence.n:
            raise SpecError(f"seed length {len(seed)} != order {recurrence.n}")
        self.recurrence = recurrence
        self.domain = domain
        self.terms = {base + k: v for k, v in enumerate(seed)}
        self.lo = base
        self.hi = base + recurrence.n - 1
        self.failures = {"forward": None, "backward": None}
        self.frozen = False

    @property
    def n(self):
        return self.recurrence.n

    def __getitem__(self, i):
        try:
            return self.terms[i]
        except KeyError:
            raise IndexError(f"index {i} outside realised interval [{self.lo}, {self.hi}]")

    def __contains__(self, i):
        return self.lo <= i <= self.hi

    def interval(self):
        return self.lo, self.hi

    def values(self, lo, hi):
        return [self[i] for i in range(lo, hi + 1)]

    def freeze(self):
        self.frozen = True
        return self

    def _divide(self, top, bottom, index):
        if not bottom:
            raise DivisionFailure(index)
        if self.domain == LAURENT:
            try:
                return top.exact_div(bottom)
            except NotDivisible:
                raise LaurentFailure(index)
        if self.domain == RATIONAL:
            q = Fraction(top) / Fraction(bottom)
            return int(q) if q.denominator == 1 else q
        return top / bottom

    def extend(self, lo, hi):
        """
        向两侧延拓到 [lo, hi]，失败时截断并在 failures 中记录
        :param lo: 目标左端
        :param hi: 目标右端
        :return: self
        """
        if self.frozen and (lo < self.lo or hi > self.hi):
            raise SpecError("sequence is frozen")
        n = self.n
        get = self.terms.__getitem__
        while self.hi < hi and self.failures["forward"] is None:
            i = self.hi + 1 - n
            try:
                value = self._divide(self.recurrence.rhs(get, i), self.terms[i], i + n)
            except DivisionFailure as e:
                self.failures["forward"] = e
                logger.debug("forward extension stopped: %s", e)
                break
            self.terms[i + n] = value
            self.hi += 1
        while self.lo > lo and self.failures["backward"] is None:
            i = self.lo - 1
            try:
                value = self._divide(self.recurrence.rhs(get, i), self.terms[i + n], i)
            except DivisionFailure as e:
                self.failures["backward"] = e
                logger.debug("backward extension stopped: %s", e)
                break
            self.terms[i] = value
            self.lo -= 1
        return self

    def require(self, lo, hi):
        # 与 extend 相同，但目标区间未达到时抛出记录下的失败
        self.extend(lo, hi)
        if self.hi < hi:
            raise self.failures["forward"]
        if self.lo > lo:
            raise self.failures["backward"]
        return self

    def residual(self, i):
        """a0 s_i s_{i+n} + sum a_j ... ，a0 = -1"""
        get = self.terms.__getitem__
        return self.recurrence.rhs(get, i) - get(i) * get(i + self.n)

    def check_recurrence(self):
        for i in range(self.lo, self.hi - self.n + 1):
            if self.residual(i):
                return False
        return True

    def __repr__(self):
        return f"SeqView({self.recurrence.describe()}, domain={self.domain}, [{self.lo}, {self.hi}])"


def _coerce_values(values, domain, p=None):
    if domain == FIELD:
        return tuple(FpElem(v, p) if not isinstance(v, FpElem) else v for v in values)
    if domain == RATIONAL:
        out = []
        for v in values:
            v = Fraction(v)
            out.append(int(v) if v.denominator == 1 else v)
        return tuple(out)
    return tuple(values)


def somos(coeffs, seed, p=None, base=0):
    """
    具体系数与种子的 Somos 序列；给出 p 时在 F_p 上，否则在 Q 上
    """
    n = len(seed)
    domain = FIELD if p else RATIONAL
    rec = Recurrence(n, _coerce_values(coeffs, domain, p))
    return SeqView(rec, _coerce_values(seed, domain, p), domain, base)


def unit_sequence(n):
    if n < 2:
        raise SpecError(f"order must be >= 2, got {n}")
    return somos([1] * (n // 2), [1] * n)


def gale_robinson(gr_type, coeffs, seed, p=None, base=0):
    gr_type = tuple(gr_type)
    n = sum(gr_type)
    if len(seed) != n:
        raise SpecError(f"seed length {len(seed)} != n1 + n2 + n3 = {n}")
    domain = FIELD if p else RATIONAL
    rec = Recurrence(n, _coerce_values(coeffs, domain, p), gr_type)
    return SeqView(rec, _coerce_values(seed, domain, p), domain, base)


def master_sequence(order, ring=None, letter="x"):
    """
    符号主序列：系数为 a1.., 种子为 letter0..letter{n-1}，各项为 Laurent 多项式
    :param order: 阶数 n，或 Gale-Robinson 类型 (n1, n2, n3)
    :param ring: 可选的外部环（例如同时含 x 和 y 的环）
    :param letter: 种子变量字母
    """
    gr_type = None
    if isinstance(order, (tuple, list)):
        gr_type = tuple(order)
        n = sum(gr_type)
        k = 3
    else:
        n = order
        k = n // 2
    if not 2 <= n:
        raise SpecError(f"order must be >= 2, got {n}")
    if ring is None:
        ring = lab_ring(n, k)
    alphas = named_gens(ring, "a")[:k]
    seeds = named_gens(ring, letter)[:n]
    if len(alphas) != k or len(seeds) != n:
        raise SpecError(f"ring {ring} lacks generators for order {n}")
    rec = Recurrence(n, tuple(LaurentPoly(a) for a in alphas), gr_type)
    return SeqView(rec, tuple(LaurentPoly(x) for x in seeds), LAURENT)


@dataclass
class RawTerms:
    """无递推的原始项：terms[k] 对应下标 base + k"""

    base: int
    terms: list

    def __getitem__(self, i):
        k = i - self.base
        if not 0 <= k < len(self.terms):
            raise IndexError(f"index {i} outside [{self.base}, {self.base + len(self.terms) - 1}]")
        return self.terms[k]

    def __len__(self):
        return len(self.terms)

    def indices(self):
        return range(self.base, self.base + len(self.terms))


def decimate(seq, d, residue=0):
    """
    取子序列 s_{residue + d*k}，k 取遍使下标落在已实现区间内的整数
    """
    if d < 1:
        raise SpecError(f"decimation factor must be positive, got {d}")
    if not 0 <= residue < d:
        raise SpecError(f"residue must lie in [0, {d - 1}]")
    lo, hi = (seq.lo, seq.hi) if isinstance(seq, SeqView) else (seq.base, seq.base + len(seq) - 1)
    k_lo = -((residue - lo) // d)
    k_hi = (hi - residue) // d
    return RawTerms(k_lo, [seq[residue + d * k] for k in range(k_lo, k_hi + 1)])


def interleave(parts, d):
    """decimate 的逆：parts[r] 为余数 r 的抽取"""
    merged = {}
    for r, part in enumerate(parts):
        for k in part.indices():
            merged[r + d * k] = part[k]
    lo, hi = min(merged), max(merged)
    if len(merged) != hi - lo + 1:
        raise SpecError("decimations do not tile a contiguous interval")
    return RawTerms(lo, [merged[i] for i in range(lo, hi + 1)])


@dataclass(frozen=True)
class SymmetryElement:
    name: str
    func: Callable[[int], int] = field(compare=False)

    def __call__(self, i):
        return self.func(i)


@dataclass(frozen=True)
class SymmetryBasis:
    n: int
    elements: tuple

    @property
    def dim(self):
        return len(self.elements)


E_I = SymmetryElement("I", lambda i: 1)
E_II = SymmetryElement("II", lambda i: i)
E_III = SymmetryElement("III", lambda i: i % 2)
E_IV = SymmetryElement("IV", lambda i: (i + 1) % 2)


def symmetry_basis(n):
    if n < 2:
        raise SpecError(f"order must be >= 2, got {n}")
    if n % 2 == 0:
        return SymmetryBasis(n, (E_I, E_II))
    return SymmetryBasis(n, (E_II, E_III, E_IV))


def window_sums_agree(e, n, i, pairs=None):
    # e_i + e_{i+n} 与每个配对 e_{i+p} + e_{i+q} 相等
    if pairs is None:
        pairs = [(j, n - j) for j in range(1, n // 2 + 1)]
    target = e(i) + e(i + n)
    return all(e(i + p) + e(i + q) == target for p, q in pairs)


def apply_symmetry(seq, c, e):
    """
    s_i -> c^{e_i} s_i，e 须属于对称空间
    :param seq: SeqView（有理或 F_p）
    :param c: 非零常数
    :param e: 下标到整数的函数
    """
    if not c:
        raise SpecError("symmetry scale must be nonzero")
    pairs = [(p, q) for _, p, q in seq.recurrence.pairs]
    for i in range(seq.lo - seq.n, seq.hi + 1):
        if not window_sums_agree(e, seq.n, i, pairs):
            raise SpecError(f"exponent sequence violates the window-sum constraint at {i}")
    if seq.domain == FIELD:
        p = seq[seq.lo].p
        c = c if isinstance(c, FpElem) else FpElem(c, p)
    elif seq.domain == RATIONAL:
        c = Fraction(c)
    out = SeqView(seq.recurrence, tuple(seq[i] for i in range(seq.lo, seq.lo + seq.n)), seq.domain, seq.lo)
    for i in range(seq.lo, seq.hi + 1):
        v = seq[i] * c ** e(i)
        if isinstance(v, Fraction) and v.denominator == 1:
            v = int(v)
        out.terms[i] = v
    out.hi = seq.hi
    return out


def detect_period(seq, cap=None):
    """
    以 n 项窗口为状态检测周期；种子出现零或超过上限时返回 None
    :param seq: F_p 上的 SeqView
    :param cap: 最多记录的状态数
    :return: 最小周期或 None
    """
    if seq.domain != FIELD:
        raise SpecError("period detection needs a prime-field sequence")
    if cap is None:
        cap = Config.period_cap
    n = seq.n
    p = seq[seq.lo].p
    pairs = [(int(c), a, b) for c, a, b in seq.recurrence.pairs]
    window = [seq[i].value for i in range(seq.lo, seq.lo + n)]
    seen = {tuple(window): 0}
    for step in range(1, cap + 1):
        head = window[0]
        if head == 0:
            return None
        top = 0
        for c, a, b in pairs:
            top += c * window[a] * window[b]
        nxt = top * pow(head, -1, p) % p
        window = window[1:] + [nxt]
        state = tuple(window)
        if state in seen:
            return step - seen[state]
        seen[state] = step
    logger.info("no period found within %d states", cap)
    return None


def is_primitive(gr_type):
    return gcd(gcd(gr_type[0], gr_type[1]), gr_type[2]) == 1


def is_proper(gr_type):
    return is_primitive(gr_type) and len(set(gr_type)) == 3


def proper_types(n):
    """阶为 n 的全部 proper 类型（升序排列的代表元）"""
    out = []
    for n1 in range(1, n):
        for n2 in range(n1 + 1, n):
            n3 = n - n1 - n2
            if n3 > n2 and is_proper((n1, n2, n3)):
                out.append((n1, n2, n3))
    return out


def reduce_type(gr_type, coeffs=None):
    """
    有重复分量的本原类型换成分量两两不同的等价类型
    :param gr_type: (n1, n2, n3)
    :param coeffs: 可选系数 (a1, a2, a3)，与类型分量一一对应
    :return: (新类型, 新系数或系数映射)
    """
    t = tuple(gr_type)
    if len(set(t)) == 3:
        raise SpecError(f"type {t} already has pairwise distinct entries")
    if sum(t) < 6:
        raise SpecError(f"type reduction applies to orders >= 6, got {sum(t)}")
    if not is_primitive(t):
        raise SpecError(f"type {t} is not primitive")
    # 配对在递推中对称，先把重复分量放到后两位
    for u in range(3):
        rest = [j for j in range(3) if j != u]
        if t[rest[0]] == t[rest[1]]:
            break
    n1, r = t[u], t[rest[0]]
    new = (n1, n1 + r, r - n1) if n1 < r else (2 * r, r, n1 - r)

    def transform(a):
        return (a[u], a[rest[0]] + a[rest[1]], 0 * a[u])

    if coeffs is None:
        return new, transform
    return new, transform(tuple(coeffs))


def format_term(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, LaurentPoly):
        return format_laurent_text(v)
    return str(v)


def write_dump(seq, lo, hi):
    """order=<n> domain=<tag> base=<i0> 头部，其后每行一项；Laurent 项之间用 '--' 分隔"""
    header = f"order={seq.n} domain={seq.domain} base={lo}"
    if seq.domain == FIELD:
        header += f" p={seq[lo].p}"
    lines = [header]
    for i in range(lo, hi + 1):
        if seq.domain == LAURENT:
            lines.append(format_term(seq[i]))
            lines.append("--")
        else:
            lines.append(format_term(seq[i]))
    return "\n".join(lines) + "\n"


def read_dump(text, p=None):
    """读回有理或 F_p 序列转储"""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise SpecError("empty sequence dump")
    header = dict(part.split("=", 1) for part in lines[0].split())
    domain = header.get("domain")
    if domain not in (RATIONAL, FIELD):
        raise SpecError(f"cannot read dumps of domain {domain!r}")
    if domain == FIELD and p is None and "p" in header:
        p = int(header["p"])
    if domain == FIELD and p is None:
        raise SpecError("field dumps need the modulus")
    terms = []
    for ln in lines[1:]:
        v = Fraction(ln)
        v = int(v) if v.denominator == 1 else v
        terms.append(FpElem(v, p) if domain == FIELD else v)
    return int(header["order"]), domain, RawTerms(int(header["base"]), terms)
