#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/02 14:08
# @file:arith.py
"""
精确算术层：素域元素、稀疏多元多项式 (sympy PolyElement)、Laurent 多项式、
有理函数、结式、分式无关消元与域上求秩。
"""
import heapq
import math
import re
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy.ntheory import isprime as _bpsw_isprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from utils import DomainMismatch, NotDivisible, TableError, get_logger

logger = get_logger("arith")

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# 以上基底对 n < 3.3e24 是确定性的
_MR_LIMIT = 3317044064679887385961981


@lru_cache(maxsize=4096)
def is_prime(n):
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        return _bpsw_isprime(n)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, lo, hi):
    # 区间内均匀抽取素数（拒绝采样）
    if hi < lo:
        raise ValueError(f"empty prime interval [{lo}, {hi}]")
    for _ in range(100000):
        q = rng.randint(lo, hi)
        if is_prime(q):
            return q
    raise ValueError(f"no prime found in [{lo}, {hi}]")


def random_prime_bits(rng, bits):
    return random_prime(rng, 1 << (bits - 1), (1 << bits) - 1)


class FpElem:
    """素域 F_p 中的元素，构造时校验 p 为素数"""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.value = int(value) % p
        self.p = p

    @classmethod
    def _raw(cls, value, p):
        obj = object.__new__(cls)
        obj.value = value
        obj.p = p
        return obj

    def _coerce(self, other):
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise DomainMismatch(f"F_{self.p} vs F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem._raw((self.value + v) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem._raw((self.value - v) % self.p, self.p)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem._raw((v - self.value) % self.p, self.p)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem._raw(self.value * v % self.p, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        if v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return FpElem._raw(self.value * pow(v, -1, self.p) % self.p, self.p)

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FpElem._raw(v, self.p) / self

    def __neg__(self):
        return FpElem._raw(-self.value % self.p, self.p)

    def __pow__(self, e):
        if e < 0:
            if self.value == 0:
                raise ZeroDivisionError(f"division by zero in F_{self.p}")
            return FpElem._raw(pow(pow(self.value, -1, self.p), -e, self.p), self.p)
        return FpElem._raw(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------- 多项式环


@lru_cache(maxsize=None)
def gf(p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return GF(p, symmetric=False)


@lru_cache(maxsize=None)
def lab_ring(n, k=None, y=False, domain=ZZ):
    """
    构造 ZZ[a1..ak][x0..x_{n-1}(, y0..y_{n-1})] 的扁平多项式环，graded-lex 序
    :param n: 阶数
    :param k: 系数个数，默认 n // 2
    :param y: 是否附带第二组变量 y
    :param domain: 系数域
    :return: PolyRing
    """
    if k is None:
        k = n // 2
    names = [f"a{j}" for j in range(1, k + 1)] + [f"x{i}" for i in range(n)]
    if y:
        names += [f"y{i}" for i in range(n)]
    return PolyRing(names, domain, grlex)


@lru_cache(maxsize=None)
def _gen_index(ring, letter):
    found = []
    for pos, sym in enumerate(ring.symbols):
        m = re.fullmatch(rf"{letter}(\d+)", sym.name)
        if m:
            found.append((int(m.group(1)), pos))
    return tuple(pos for _, pos in sorted(found))


def gen_positions(ring, letter):
    # 某一字母 (a/x/y) 对应的生成元下标，按编号排序
    return _gen_index(ring, letter)


def named_gens(ring, letter):
    return [ring.gens[i] for i in gen_positions(ring, letter)]


def alpha_gens(ring):
    """系数变量 a1..ak"""
    return named_gens(ring, "a")


def x_gens(ring):
    return named_gens(ring, "x")


def y_gens(ring):
    return named_gens(ring, "y")


def over_field(poly, p):
    # 系数约化到 GF(p)
    target = poly.ring.clone(domain=gf(p))
    if poly.ring.domain == target.domain:
        return poly
    reduced = {m: ground_value(c, p) for m, c in poly.iterterms()}
    return target.from_dict({m: c for m, c in reduced.items() if c})


def poly_arith(a, b, op):
    if not isinstance(a, PolyElement) or not isinstance(b, PolyElement):
        raise DomainMismatch("operands must be polynomials")
    if a.ring != b.ring:
        raise DomainMismatch(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def _grlex_key(monom):
    # heapq 为最小堆，取反后弹出的是 graded-lex 最大的单项式
    return (-sum(monom), tuple(-e for e in monom))


def poly_exact_divide(a, b):
    """
    精确除法 a / b，按 graded-lex 首项逐步约化，余项非零即抛 NotDivisible
    :param a: 被除式
    :param b: 除式（非零）
    :return: 商 q，满足 q * b == a
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if a.ring != b.ring:
        raise DomainMismatch(f"{a.ring} vs {b.ring}")
    ring = a.ring
    dom = ring.domain
    if not a:
        return ring.zero
    if len(b) == 1:
        (mb, cb), = b.iterterms()
        out = {}
        for m, c in a.iterterms():
            qm = ring.monomial_div(m, mb)
            if qm is None:
                raise NotDivisible(f"monomial {m} not divisible by {mb}")
            try:
                out[qm] = dom.exquo(c, cb)
            except ExactQuotientFailed:
                raise NotDivisible(f"coefficient {c} not divisible by {cb}")
        return ring.from_dict(out)

    lm_b = ring.leading_expv(b)
    lc_b = b[lm_b]
    tail = [(m, c) for m, c in b.iterterms() if m != lm_b]
    rem = dict(a)
    heap = [(_grlex_key(m), m) for m in rem]
    heapq.heapify(heap)
    quo = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = rem.pop(m, None)
        if not c:
            continue
        qm = ring.monomial_div(m, lm_b)
        if qm is None:
            raise NotDivisible(f"leading monomial {m} not divisible by {lm_b}")
        try:
            qc = dom.exquo(c, lc_b)
        except ExactQuotientFailed:
            raise NotDivisible(f"coefficient {c} not divisible by {lc_b}")
        quo[qm] = qc
        for mb, cb in tail:
            mm = ring.monomial_mul(qm, mb)
            old = rem.get(mm)
            if old is None:
                rem[mm] = -qc * cb
                heapq.heappush(heap, (_grlex_key(mm), mm))
            else:
                v = old - qc * cb
                if v:
                    rem[mm] = v
                else:
                    del rem[mm]
    return ring.from_dict(quo)


def _value_modulus(values):
    moduli = {v.p for v in values if isinstance(v, FpElem)}
    if len(moduli) > 1:
        raise DomainMismatch(f"mixed moduli {sorted(moduli)}")
    return moduli.pop() if moduli else None


def poly_eval(poly, bindings):
    """
    代入部分变量；全部绑定时返回标量
    :param poly: PolyElement
    :param bindings: {生成元/名字/下标: 值}，值为 int、Fraction、FpElem 或同环多项式
    :return: 同名变量的多项式（GF(p)/QQ/原域）或标量
    """
    ring = poly.ring
    idx = {ring.index(k): v for k, v in bindings.items()}
    values = list(idx.values())
    if any(isinstance(v, PolyElement) for v in values):
        result = ring.zero
        for monom, coeff in poly.iterterms():
            term = ring.ground_new(coeff)
            rest = list(monom)
            for i, v in idx.items():
                if rest[i]:
                    term = term * v ** rest[i]
                    rest[i] = 0
            result += term.mul_monom(tuple(rest))
        return result

    modulus = _value_modulus(values)
    if modulus is None and ring.domain.is_FiniteField:
        modulus = ring.domain.mod
    if modulus is not None:
        ints = {i: _to_residue(v, modulus) for i, v in idx.items()}
        target = ring.clone(domain=gf(modulus))
        out = {}
        for monom, coeff in poly.iterterms():
            c = ground_value(coeff, modulus)
            rest = list(monom)
            for i, v in ints.items():
                if rest[i]:
                    c = c * pow(v, rest[i], modulus) % modulus
                    rest[i] = 0
            if c:
                key = tuple(rest)
                out[key] = (out.get(key, 0) + c) % modulus
        if len(idx) == ring.ngens:
            return FpElem(out.get(ring.zero_monom, 0), modulus)
        return target.from_dict({m: c for m, c in out.items() if c})

    rational = any(isinstance(v, Fraction) for v in values) or ring.domain == QQ
    target = ring.clone(domain=QQ) if rational else ring
    out = {}
    for monom, coeff in poly.iterterms():
        c = Fraction(int(coeff.numerator), int(coeff.denominator)) if ring.domain == QQ else int(coeff)
        rest = list(monom)
        for i, v in idx.items():
            if rest[i]:
                c = c * v ** rest[i]
                rest[i] = 0
        if c:
            key = tuple(rest)
            out[key] = out.get(key, 0) + c
    if len(idx) == ring.ngens:
        val = out.get(ring.zero_monom, 0)
        if isinstance(val, Fraction) and val.denominator == 1:
            return int(val)
        return val
    return target.from_dict({m: (QQ(c.numerator, c.denominator) if isinstance(c, Fraction) else c)
                             for m, c in out.items() if c})


def _to_residue(v, p):
    if isinstance(v, FpElem):
        return v.value
    if isinstance(v, Fraction):
        return v.numerator * pow(v.denominator, -1, p) % p
    return int(v) % p


def monomial_content(poly):
    # 所有项的公共单项式因子（逐分量取最小指数）
    ring = poly.ring
    if not poly:
        return ring.zero_monom
    monoms = list(poly.itermonoms())
    return tuple(min(m[i] for m in monoms) for i in range(ring.ngens))


def strip_monomial(poly, content):
    ring = poly.ring
    if not any(content):
        return poly
    return ring.from_dict({ring.monomial_ldiv(m, content): c for m, c in poly.iterterms()})


def univariate_coeffs(poly, var):
    """按变量 var 的升幂收集系数，结果仍在同一环中"""
    ring = poly.ring
    i = ring.index(var)
    deg = poly.degree(ring.gens[i])
    if deg < 0:
        return []
    return [poly.coeff_wrt(i, d) for d in range(deg + 1)]


def ground_value(c, p=None):
    """
    常数多项式或系数域元素转为 int / Fraction；给出 p 时约化到 [0, p)
    :raises ValueError: c 不是常数
    """
    if isinstance(c, PolyElement):
        if not c.is_ground:
            raise ValueError(f"{c} is not a constant")
        c = c.LC if c else 0
    num = getattr(c, "numerator", None)
    den = getattr(c, "denominator", None)
    if num is None or den is None or callable(num):
        value = Fraction(int(c))
    else:
        value = Fraction(int(num), int(den))
    if p is None:
        return int(value) if value.denominator == 1 else value
    return value.numerator * pow(value.denominator, -1, p) % p


# ---------------------------------------------------------------- Laurent 多项式


class LaurentPoly:
    """
    Laurent 多项式 num * x^shift，其中 num 不含单项式公因子，shift 可为负。
    最简分母为 x^max(0, -shift)。
    """

    __slots__ = ("num", "shift")

    def __init__(self, num, shift=None):
        ring = num.ring
        if shift is None:
            shift = ring.zero_monom
        if not num:
            self.num = ring.zero
            self.shift = ring.zero_monom
            return
        content = monomial_content(num)
        self.num = strip_monomial(num, content)
        self.shift = tuple(s + c for s, c in zip(shift, content))

    @classmethod
    def _raw(cls, num, shift):
        obj = object.__new__(cls)
        obj.num = num
        obj.shift = shift
        return obj

    @property
    def ring(self):
        return self.num.ring

    def __bool__(self):
        return bool(self.num)

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, PolyElement):
            return LaurentPoly(other)
        return LaurentPoly(self.ring.ground_new(other))

    def __mul__(self, other):
        other = self._lift(other)
        if not self or not other:
            return LaurentPoly(self.ring.zero)
        # 无单项式公因子的多项式之积仍无公因子
        return LaurentPoly._raw(self.num * other.num,
                                tuple(a + b for a, b in zip(self.shift, other.shift)))

    __rmul__ = __mul__

    def __add__(self, other):
        other = self._lift(other)
        if not other:
            return self
        if not self:
            return other
        low = tuple(min(a, b) for a, b in zip(self.shift, other.shift))
        left = self.num.mul_monom(tuple(a - m for a, m in zip(self.shift, low)))
        right = other.num.mul_monom(tuple(b - m for b, m in zip(other.shift, low)))
        return LaurentPoly(left + right, low)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(-self.num, self.shift)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative powers are not Laurent in general")
        out = LaurentPoly(self.ring.one)
        for _ in range(e):
            out = out * self
        return out

    def exact_div(self, other):
        """精确除法；非 Laurent 时抛 NotDivisible"""
        other = self._lift(other)
        if not other:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self:
            return self
        q = poly_exact_divide(self.num, other.num)
        return LaurentPoly._raw(q, tuple(a - b for a, b in zip(self.shift, other.shift)))

    def __eq__(self, other):
        if isinstance(other, (int, PolyElement)):
            other = self._lift(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self or not other:
            return not self and not other
        return self.shift == other.shift and self.num == other.num

    def __hash__(self):
        return hash((self.num, self.shift))

    def denominator_exponents(self):
        return tuple(max(0, -s) for s in self.shift)

    def denominator(self):
        return self.ring.one.mul_monom(self.denominator_exponents())

    def numerator(self):
        return self.num.mul_monom(tuple(max(0, s) for s in self.shift))

    def is_polynomial(self):
        return all(s >= 0 for s in self.shift)

    def term_count(self):
        return len(self.num)

    def degree(self):
        if not self:
            return -1
        return max(sum(m) for m in self.num.itermonoms()) + sum(self.shift)

    def specialise(self, bindings):
        """代入变量；负指数按域中逆元处理，部分代入时未绑定变量的指数须非负"""
        ring = self.ring
        idx = {ring.index(k): v for k, v in bindings.items()}
        modulus = _value_modulus(list(idx.values()))
        if modulus is None and ring.domain.is_FiniteField:
            modulus = ring.domain.mod
        if modulus is not None:
            idx = {i: FpElem(_to_residue(v, modulus), modulus) for i, v in idx.items()}
            scale = FpElem(1, modulus)
        else:
            idx = {i: Fraction(v) for i, v in idx.items()}
            scale = Fraction(1)
        for i, v in idx.items():
            e = self.shift[i]
            if e:
                scale = scale * v ** e
        top = poly_eval(self.num, {ring.gens[i]: v for i, v in idx.items()})
        if isinstance(top, PolyElement):
            rest = tuple(0 if i in idx else s for i, s in enumerate(self.shift))
            if any(s < 0 for s in rest):
                raise ValueError("unbound variables carry negative exponents")
            top = top.mul_monom(rest)
            if modulus is not None:
                return top * scale.value
            return top * QQ(scale.numerator, scale.denominator)
        out = top * scale
        if isinstance(out, Fraction) and out.denominator == 1:
            return int(out)
        return out

    def as_ratfunc(self):
        return RatFunc(self.numerator(), self.denominator())

    def __repr__(self):
        return f"LaurentPoly(({self.num}) * x^{self.shift})"


# ---------------------------------------------------------------- 有理函数


class RatFunc:
    """num/den，不要求最简；相等性用交叉相乘判断"""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = num.ring.one
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num.ring != den.ring:
            raise DomainMismatch(f"{num.ring} vs {den.ring}")
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    def _lift(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, LaurentPoly):
            return other.as_ratfunc()
        if isinstance(other, PolyElement):
            return RatFunc(other)
        return RatFunc(self.ring.ground_new(other))

    def __add__(self, other):
        other = self._lift(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, e):
        if e < 0:
            return RatFunc(self.den ** -e, self.num ** -e)
        return RatFunc(self.num ** e, self.den ** e)

    def __eq__(self, other):
        if isinstance(other, (int, PolyElement, LaurentPoly)):
            other = self._lift(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def evaluate(self, bindings):
        top = poly_eval(self.num, bindings)
        bottom = poly_eval(self.den, bindings)
        if not bottom:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        if isinstance(top, FpElem):
            return top / bottom
        return Fraction(top) / Fraction(bottom)

    def __repr__(self):
        return f"RatFunc(({self.num}) / ({self.den}))"


# ---------------------------------------------------------------- 行列式与结式


def _exquo(a, b):
    # 各种系数类型上的精确除法
    if isinstance(a, PolyElement):
        if not isinstance(b, PolyElement):
            b = a.ring.ground_new(b)
        return poly_exact_divide(a, b)
    if isinstance(a, LaurentPoly):
        return a.exact_div(b)
    if isinstance(a, (FpElem, Fraction)) or isinstance(b, (FpElem, Fraction)):
        return a / b
    q, r = divmod(a, b)
    if r:
        raise NotDivisible(f"{a} not divisible by {b}")
    return q


def _zero_like(x):
    return x - x


def _one_like(x):
    if isinstance(x, PolyElement):
        return x.ring.one
    if isinstance(x, LaurentPoly):
        return LaurentPoly(x.ring.one)
    if isinstance(x, FpElem):
        return FpElem._raw(1, x.p)
    if isinstance(x, Fraction):
        return Fraction(1)
    return 1


def det_bareiss(matrix):
    """Bareiss 分式无关行列式，支持行交换并记录符号"""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    sign = 1
    prev = None
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return _zero_like(a[0][0])
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                v = akk * row_i[j] - aik * row_k[j]
                row_i[j] = _exquo(v, prev) if prev is not None else v
        prev = akk
    last = a[n - 1][n - 1]
    return last if sign > 0 else -last


def det_laplace(matrix, zero=None):
    """
    按首行递归展开并按列子集记忆化，不做任何除法，可用于 Laurent 多项式元素
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if zero is None:
        zero = _zero_like(a[0][0])
    memo = {}

    def minor(r, mask):
        if r == n:
            return None
        key = mask
        if key in memo:
            return memo[key]
        total = zero
        pos = 0
        for j in range(n):
            if mask >> j & 1:
                continue
            entry = a[r][j]
            if entry:
                sub = minor(r + 1, mask | (1 << j))
                term = entry if sub is None else (entry * sub if sub else zero)
                if term:
                    total = total - term if pos % 2 else total + term
            pos += 1
        memo[key] = total
        return total

    return minor(0, 0)


def sylvester_matrix(p_coeffs, q_coeffs):
    """
    升幂系数列表构造 Sylvester 矩阵：前 l 行为 y^i P，后 k 行为 y^j Q，列按 y^0..y^{k+l-1}
    """
    k = len(p_coeffs) - 1
    l = len(q_coeffs) - 1
    if k < 0 or l < 0:
        raise ValueError("zero polynomial has no resultant")
    if k + l < 1:
        raise ValueError("both polynomials are constant")
    zero = _zero_like(p_coeffs[0])
    size = k + l
    rows = []
    for i in range(l):
        row = [zero] * size
        for d, c in enumerate(p_coeffs):
            row[i + d] = c
        rows.append(row)
    for j in range(k):
        row = [zero] * size
        for d, c in enumerate(q_coeffs):
            row[j + d] = c
        rows.append(row)
    return rows


def resultant(p, q, var=None):
    """
    res_var(P, Q)，约定 res(y - a, y - b) = b - a
    :param p: PolyElement 或升幂系数列表
    :param q: 同上
    :param var: 消去的变量（多项式输入时必填）
    :return: 与系数同类型的环元素
    """
    if isinstance(p, PolyElement):
        if p.ring != q.ring:
            raise DomainMismatch(f"{p.ring} vs {q.ring}")
        pc, qc = univariate_coeffs(p, var), univariate_coeffs(q, var)
    else:
        pc, qc = list(p), list(q)
    if not pc or not qc:
        raise ValueError("zero polynomial has no resultant")
    return det_bareiss(sylvester_matrix(pc, qc))


def discriminant(p, var=None):
    # 取 res(P, P') 本身，不做首项系数归一
    if isinstance(p, PolyElement):
        if p.degree(var) < 1:
            raise ValueError("constant polynomial has no discriminant")
        return resultant(p, p.diff(var), var)
    pc = list(p)
    if len(pc) < 2:
        raise ValueError("constant polynomial has no discriminant")
    return resultant(pc, [c * d for d, c in enumerate(pc)][1:])


# ---------------------------------------------------------------- 零空间与秩


def _term_count(x):
    if isinstance(x, PolyElement):
        return len(x)
    if isinstance(x, LaurentPoly):
        return len(x.num)
    return 1


def _clear_row_denominators(row):
    lcm = 1
    for v in row:
        if isinstance(v, Fraction):
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    if lcm == 1:
        return [int(v) if isinstance(v, Fraction) else v for v in row]
    return [int(v * lcm) for v in row]


def rref_fraction_free(matrix):
    """
    分式无关的 Gauss-Jordan 消元，主元取当前列中项数最少者（同项数取最小行号）
    :return: (约化矩阵, 公分母, 主元列)
    """
    a = [list(row) for row in matrix]
    m = len(a)
    if not m:
        return a, 1, []
    n = len(a[0])
    d = None
    pivots = []
    no_pivots = []
    i = 0
    for j in range(n):
        cand = [r for r in range(i, m) if a[r][j]]
        if not cand:
            no_pivots.append(j)
            continue
        best = min(cand, key=lambda r: (_term_count(a[r][j]), r))
        if best != i:
            a[i], a[best] = a[best], a[i]
        aij = a[i][j]
        if pivots:
            pivot_val = aij * a[0][pivots[0]]
            if d is not None:
                pivot_val = _exquo(pivot_val, d)
            for ip, jp in enumerate(pivots):
                a[ip][jp] = pivot_val
        for jnp in no_pivots:
            for ip in range(i):
                v = a[ip][jnp]
                if v:
                    v = v * aij
                    a[ip][jnp] = _exquo(v, d) if d is not None else v
        row_i = a[i]
        for jp, row in enumerate(a):
            if jp == i:
                continue
            factor = row[j]
            for kp in range(j + 1, n):
                left = row[kp]
                right = row_i[kp]
                if not left and (not factor or not right):
                    continue
                v = aij * left if left else _zero_like(aij)
                if factor and right:
                    v = v - factor * right
                row[kp] = _exquo(v, d) if d is not None and v else v
            row[j] = _zero_like(aij)
        pivots.append(j)
        i += 1
        if i >= m:
            break
        d = aij
    denom = a[0][pivots[0]] if pivots else 1
    return a, denom, pivots


def _normalise_vector(vec):
    nonzero = [v for v in vec if v]
    if not nonzero:
        return vec
    if isinstance(nonzero[0], PolyElement):
        ring = nonzero[0].ring
        g = 0
        for v in nonzero:
            g = math.gcd(g, int(v.content()))
        content = ring.zero_monom
        first = True
        for v in nonzero:
            c = monomial_content(v)
            content = c if first else tuple(min(x, y) for x, y in zip(content, c))
            first = False
        out = []
        for v in vec:
            if v:
                v = strip_monomial(v, content)
                if g > 1:
                    v = v.quo_ground(g)
            out.append(v)
        lead = next(v for v in out if v)
        if lead.LC < 0:
            out = [-v for v in out]
        return out
    g = 0
    for v in nonzero:
        g = math.gcd(g, int(v))
    out = [int(v) // g for v in vec]
    lead = next(v for v in out if v)
    if lead < 0:
        out = [-v for v in out]
    return out


def nullspace_fraction_free(matrix, ncols=None):
    """
    右零空间的一组基，元素清分母后落在 ZZ[a] (或 ZZ) 中，并去掉整数与单项式公因子
    :param matrix: 行列表，元素为 PolyElement / int / Fraction
    :param ncols: 空矩阵时的列数
    :return: 基向量列表
    """
    rows = [_clear_row_denominators(r) for r in matrix]
    rows = [r for r in rows if any(r)]
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not rows:
        basis = []
        for f in range(ncols):
            vec = [0] * ncols
            vec[f] = 1
            basis.append(vec)
        return basis
    a, denom, pivots = rref_fraction_free(rows)
    one = _one_like(denom)
    zero = _zero_like(one)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        vec = [zero] * ncols
        vec[f] = denom if pivots else one
        for i, pc in enumerate(pivots):
            vec[pc] = -a[i][f]
        basis.append(_normalise_vector(vec))
    logger.debug("kernel: %d columns, rank %d, nullity %d", ncols, len(pivots), len(basis))
    return basis


def _rank_numpy(rows, p):
    a = np.array(rows, dtype=np.int64) % p
    m, n = a.shape
    r = 0
    for c in range(n):
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv], :] = a[[piv, r], :]
        inv = pow(int(a[r, c]), -1, p)
        a[r, :] = (a[r, :] * inv) % p
        if r + 1 < m:
            f = a[r + 1:, c].copy()
            a[r + 1:, :] = (a[r + 1:, :] - np.outer(f, a[r, :])) % p
        r += 1
        if r == m:
            break
    return r


def _rank_python_modp(rows, p):
    a = [[v % p for v in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(r + 1, m):
            f = a[i][c]
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def _rank_rational(rows):
    a = [_clear_row_denominators(list(r)) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        arc = a[r][c]
        for i in range(r + 1, m):
            aic = a[i][c]
            a[i] = [(arc * x - aic * y) // prev for x, y in zip(a[i], a[r])]
        prev = arc
        r += 1
        if r == m:
            break
    return r


def rank_over_field(matrix, p=None):
    """
    域上求秩：p 为空时在 Q 上精确消元，否则在 F_p 上
    :param matrix: 行列表，元素为 int / Fraction / FpElem
    :param p: 素数模
    :return: 秩
    """
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    if p is None:
        moduli = {v.p for r in rows for v in r if isinstance(v, FpElem)}
        if moduli:
            if len(moduli) > 1:
                raise DomainMismatch(f"mixed moduli {sorted(moduli)}")
            p = moduli.pop()
    if p is None:
        return _rank_rational(rows)
    ints = [[_to_residue(v, p) for v in r] for r in rows]
    if p < 2**31:
        return _rank_numpy(ints, p)
    return _rank_python_modp(ints, p)


# ---------------------------------------------------------------- 文本格式

_TERM_RE = re.compile(r"^(?:(\d+)|a(\d+)(?:\^(\d+))?)$")


def parse_coeff_expr(text, ring):
    """
    解析 'intconst | a<i>^<e> 乘积 | 用 + 连接的和' 形式的系数表达式
    """
    alphas = {str(s): ring.gens[i] for i, s in enumerate(ring.symbols) if re.fullmatch(r"a\d+", str(s))}
    expr = text.replace(" ", "")
    if not expr:
        raise TableError("empty coefficient expression")
    expr = expr.replace("-", "+-")
    total = ring.zero
    for chunk in expr.split("+"):
        if not chunk:
            continue
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        term = ring.one * sign
        for factor in chunk.split("*"):
            m = _TERM_RE.match(factor)
            if not m:
                raise TableError(f"bad coefficient factor {factor!r} in {text!r}")
            if m.group(1) is not None:
                term = term * int(m.group(1))
            else:
                name = f"a{m.group(2)}"
                if name not in alphas:
                    raise TableError(f"unknown coefficient {name} in {text!r}")
                term = term * alphas[name] ** int(m.group(3) or 1)
        total += term
    return total


def format_coeff_expr(poly):
    if not poly:
        return "0"
    alpha_pos = gen_positions(poly.ring, "a")
    parts = []
    for monom, coeff in poly.terms():
        factors = []
        for j, pos in enumerate(alpha_pos, 1):
            e = monom[pos]
            if e:
                factors.append(f"a{j}" if e == 1 else f"a{j}^{e}")
        c = int(coeff)
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        elif c == -1:
            parts.append("-" + "*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


def outer_positions(ring):
    return gen_positions(ring, "x") + gen_positions(ring, "y")


def nested_view(poly, positions=None):
    """
    把扁平多项式看成 x,y 单项式到 a-多项式系数的映射
    :return: {x,y 指数元组: 只含 a 的多项式}
    """
    ring = poly.ring
    if positions is None:
        positions = outer_positions(ring)
    groups = {}
    for monom, coeff in poly.iterterms():
        key = tuple(monom[i] for i in positions)
        inner = list(monom)
        for i in positions:
            inner[i] = 0
        groups.setdefault(key, {})[tuple(inner)] = coeff
    return {k: ring.from_dict(v) for k, v in groups.items()}


def summand_count(poly, positions=None):
    # 以 x,y 单项式计的“项数”，与表格行数一致
    return len(nested_view(poly, positions))


def outer_degree(poly, positions=None):
    if not poly:
        return -1
    if positions is None:
        positions = outer_positions(poly.ring)
    return max(sum(m[i] for i in positions) for m in poly.itermonoms())


def parse_poly_text(text, ring, positions=None):
    """
    读取每行 '<coeff-expr> : <exponent-string>' 的多项式文本
    """
    if positions is None:
        positions = outer_positions(ring)
    total = ring.zero
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise TableError(f"line {lineno}: expected '<coeff> : <exponents>'")
        coeff_text, exps = (part.strip() for part in line.rsplit(":", 1))
        if not exps.isdigit() or len(exps) != len(positions):
            raise TableError(f"line {lineno}: exponent string {exps!r} does not match {len(positions)} variables")
        monom = [0] * ring.ngens
        for pos, ch in zip(positions, exps):
            monom[pos] = int(ch)
        total += parse_coeff_expr(coeff_text, ring).mul_monom(tuple(monom))
    return total


def format_poly_text(poly, positions=None):
    if positions is None:
        positions = outer_positions(poly.ring)
    view = nested_view(poly, positions)
    lines = []
    for key in sorted(view, key=lambda k: (-sum(k), tuple(-e for e in k))):
        if any(e > 9 for e in key):
            raise TableError(f"exponent >= 10 in {key} cannot be written as a digit string")
        lines.append(f"{format_coeff_expr(view[key])} : {''.join(str(e) for e in key)}")
    return "\n".join(lines)


def format_laurent_text(lp):
    # 负指数写在单独的 denominator 行里
    num = lp.numerator()
    den = lp.denominator_exponents()
    positions = outer_positions(lp.ring)
    head = "denominator : " + "".join(str(den[i]) for i in positions)
    return head + "\n" + format_poly_text(num, positions)
