#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/05 16:08
# @file:invariants.py
"""
Φ/Π 型不变量：满足对称约束的单项式基、φ 映射与其核、内置表格、σ 替换与孪生判定。
"""
import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from pydantic import BaseModel

from arith import (
    FpElem,
    RatFunc,
    alpha_gens,
    gen_positions,
    gf,
    lab_ring,
    nested_view,
    nullspace_fraction_free,
    parse_poly_text,
    poly_eval,
    random_prime_bits,
    rank_over_field,
    rref_fraction_free,
    x_gens,
)
from conf import Config
from sequences import Recurrence
from utils import SpecError, Verdict, get_logger, substream

logger = get_logger("invariants")

BUILTIN = {
    "F4": (4, "phi4.txt"),
    "F5": (5, "phi5.txt"),
    "F6": (6, "i6a.txt"),
    "G6": (6, "i6b.txt"),
    "F7": (7, "i7a.txt"),
    "G7": (7, "i7b.txt"),
}

# 孪生判定所用的不变量
TWIN_INVARIANTS = {4: ("F4",), 5: ("F5",), 6: ("F6", "G6"), 7: ("F7", "G7")}


def _order(n_or_type):
    if isinstance(n_or_type, (tuple, list)):
        gr_type = tuple(n_or_type)
        return sum(gr_type), gr_type
    return n_or_type, None


def order_ring(n_or_type):
    n, gr_type = _order(n_or_type)
    return lab_ring(n, 3 if gr_type else n // 2)


def recurrence_rhs(ring, n, gr_type=None, coeffs=None):
    """
    L = sum_k a_k x_p x_q，配对取自 Somos 或 Gale-Robinson 递推
    :param coeffs: 默认为环中的 a1..
    """
    xs = x_gens(ring)
    if coeffs is None:
        coeffs = alpha_gens(ring)
        coeffs = coeffs[: 3 if gr_type else n // 2]
    rec = Recurrence(n, tuple(coeffs), gr_type)
    total = ring.zero
    for c, p, q in rec.pairs:
        total += xs[p] * xs[q] * c
    return total


def upsilon_basis(n):
    """
    Υ_n：x0..x_{n-1} 上全部 n 次单项式的指数元组，graded-lex 降序，共 C(2n-1, n) 个
    """
    if n < 1:
        raise SpecError(f"order must be >= 1, got {n}")
    out = []
    # 隔板法：n 个球放进 n 个盒子
    for bars in itertools.combinations(range(2 * n - 1), n - 1):
        edges = (-1,) + bars + (2 * n - 1,)
        out.append(tuple(edges[i + 1] - edges[i] - 1 for i in range(n)))
    return sorted(out, reverse=True)


def upsilon_box_basis(n_or_type):
    """
    Υ_n 中与对称空间相容的指数元组，按 graded-lex 降序
    约束：sum i*d_i = n(n-1)/2；n 为奇数时另有 sum_{i 奇} d_i = (n-1)/2
    """
    n, _ = _order(n_or_type)
    if n < 2:
        raise SpecError(f"order must be >= 2, got {n}")
    target = n * (n - 1) // 2
    odd_target = (n - 1) // 2
    return [
        d
        for d in upsilon_basis(n)
        if sum(i * e for i, e in enumerate(d)) == target
        and (n % 2 == 0 or sum(d[1::2]) == odd_target)
    ]


@dataclass
class PhiMatrix:
    n: int
    gr_type: Optional[tuple]
    basis: list
    rows: list
    entries: list

    @property
    def shape(self):
        return len(self.rows), len(self.basis)


def _phi_images(n, gr_type, ring, basis, coeffs=None):
    xs = x_gens(ring)
    L = recurrence_rhs(ring, n, gr_type, coeffs)
    shifted = [xs[0] * xs[i + 1] for i in range(n - 1)]
    lead = xs[0] ** (n - 2) * L
    l_pow = [ring.one]
    for _ in range(n):
        l_pow.append(l_pow[-1] * L)
    images = []
    for d in basis:
        mono = ring.one
        sub = l_pow[d[n - 1]]
        for i, e in enumerate(d):
            if e:
                mono *= xs[i] ** e
                if i < n - 1:
                    sub *= shifted[i] ** e
        images.append(lead * mono - sub)
    return images


def phi_apply(poly, n_or_type):
    """φ(Φ) = x0^{n-2} L Φ - Φ(x0 x1, ..., x0 x_{n-1}, L)"""
    n, gr_type = _order(n_or_type)
    ring = poly.ring
    xs = x_gens(ring)
    L = recurrence_rhs(ring, n, gr_type)
    shifted = poly_eval(poly, {xs[i]: (xs[0] * xs[i + 1] if i < n - 1 else L) for i in range(n)})
    return xs[0] ** (n - 2) * L * poly - shifted


def phi_matrix(n_or_type):
    """
    φ 在 Υ_⊠ 上的矩阵：列为基单项式，行为像中出现的 2n 次 x 单项式，元素为 a 的多项式
    """
    n, gr_type = _order(n_or_type)
    ring = order_ring(n_or_type)
    basis = upsilon_box_basis(n_or_type)
    images = _phi_images(n, gr_type, ring, basis)
    xpos = gen_positions(ring, "x")
    views = [nested_view(img, xpos) for img in images]
    rows = sorted({k for v in views for k in v}, reverse=True)
    index = {k: i for i, k in enumerate(rows)}
    entries = [[ring.zero] * len(basis) for _ in rows]
    for j, view in enumerate(views):
        for k, coeff in view.items():
            entries[index[k]][j] = coeff
    logger.debug("phi matrix for order %d: %d x %d", n, len(rows), len(basis))
    return PhiMatrix(n, gr_type, basis, rows, entries)


@dataclass
class InvariantPoly:
    """F = Φ/Π，Φ 为 x 的 n 次齐次多项式，系数在 ZZ[a] 中"""

    name: str
    n: int
    phi: object
    gr_type: Optional[tuple] = None

    @property
    def ring(self):
        return self.phi.ring

    @property
    def order(self):
        return self.gr_type or self.n

    @property
    def pi(self):
        out = self.ring.one
        for x in x_gens(self.ring)[: self.n]:
            out *= x
        return out

    def as_ratfunc(self):
        return RatFunc(self.phi, self.pi)

    def support(self):
        xpos = gen_positions(self.ring, "x")
        return nested_view(self.phi, xpos)

    def evaluate(self, coeffs, window):
        """在窗口 (s_i, ..., s_{i+n-1}) 上求 F 的值"""
        ring = self.ring
        bindings = dict(zip(alpha_gens(ring), coeffs))
        bindings.update(zip(x_gens(ring), window))
        top = poly_eval(self.phi, bindings)
        bottom = poly_eval(self.pi, bindings)
        if not bottom:
            raise ZeroDivisionError("window contains a zero term")
        if isinstance(top, FpElem):
            return top / bottom
        q = Fraction(top) / Fraction(bottom)
        return int(q) if q.denominator == 1 else q


def omega_box_kernel(n_or_type):
    """
    φ 在 Υ_⊠ 上的核：分式无关消元，清分母、去整数与单项式公因子
    """
    n, gr_type = _order(n_or_type)
    m = phi_matrix(n_or_type)
    ring = order_ring(n_or_type)
    xs = x_gens(ring)
    logger.info("kernel of phi for order %s: %d x %d", n_or_type, *m.shape)
    vectors = nullspace_fraction_free(m.entries, len(m.basis))
    out = []
    for k, vec in enumerate(vectors):
        phi = ring.zero
        for coeff, d in zip(vec, m.basis):
            if coeff:
                mono = ring.one
                for i, e in enumerate(d):
                    if e:
                        mono *= xs[i] ** e
                phi += coeff * mono
        out.append(InvariantPoly(f"omega{k}", n, phi, gr_type))
    return out


@lru_cache(maxsize=None)
def _load_builtin(name):
    n, fname = BUILTIN[name]
    ring = lab_ring(n)
    path = os.path.join(Config.data_dir, fname)
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    return parse_poly_text(text, ring, gen_positions(ring, "x"))


def builtin_invariant(name):
    if name not in BUILTIN:
        raise SpecError(f"unknown invariant {name!r}; choose from {', '.join(BUILTIN)}")
    n, _ = BUILTIN[name]
    return InvariantPoly(name, n, _load_builtin(name))


def _sigma_poly(poly, n, L):
    """
    返回 (Q, D)，使 σ(P) = Q / x0^D
    """
    ring = poly.ring
    xs = x_gens(ring)
    top = xs[n - 1]
    deg = max(poly.degree(top), 0)
    bindings = {xs[i]: xs[i + 1] for i in range(n - 1)}
    total = ring.zero
    l_pow = ring.one
    for k in range(deg + 1):
        part = poly.coeff_wrt(ring.index(top), k)
        if part:
            total += poly_eval(part, bindings) * l_pow * xs[0] ** (deg - k)
        l_pow *= L
    return total, deg


def sigma_apply(f, n_or_type):
    """
    σ: x_i <- x_{i+1} (i < n-1)，x_{n-1} <- L / x0
    """
    n, gr_type = _order(n_or_type)
    if not isinstance(f, RatFunc):
        f = RatFunc(f)
    ring = f.ring
    L = recurrence_rhs(ring, n, gr_type)
    xs = x_gens(ring)
    num, dn = _sigma_poly(f.num, n, L)
    den, dd = _sigma_poly(f.den, n, L)
    return RatFunc(num * xs[0] ** dd, den * xs[0] ** dn)


class InvarianceVerdict(BaseModel):
    verdict: Verdict
    trials: int = 0
    resamples: int = 0
    witness: Optional[dict] = None


def is_invariant(f, trials=None, symbolic=None, rng=None):
    """
    σ 不变性：symbolic 时交叉相乘检验恒等式，否则在随机大素数域上随机取点比较
    """
    if trials is None:
        trials = Config.sample_trials
    if symbolic is None:
        symbolic = f.n <= 5
    order = f.order
    F = f.as_ratfunc()
    if symbolic:
        ok = sigma_apply(F, order) == F
        return InvarianceVerdict(verdict=Verdict.passed if ok else Verdict.failed)
    if rng is None:
        rng = substream(Config.seed, "invariance", f.name)
    ring = f.ring
    n = f.n
    xs = x_gens(ring)[:n]
    alphas = alpha_gens(ring)
    p = random_prime_bits(rng, Config.sample_prime_bits)
    L = recurrence_rhs(ring, n, f.gr_type)
    done = resamples = 0
    while done < trials:
        point = {a: FpElem(rng.randrange(1, p), p) for a in alphas}
        point.update({x: FpElem(rng.randrange(1, p), p) for x in xs})
        l_val = poly_eval(L, point)
        pi_val = poly_eval(f.pi, point)
        if not l_val or not pi_val:
            resamples += 1
            continue
        x0 = point[xs[0]]
        moved = dict(point)
        for i in range(n - 1):
            moved[xs[i]] = point[xs[i + 1]]
        moved[xs[n - 1]] = l_val / x0
        lhs = poly_eval(f.phi, point) * poly_eval(f.pi, moved)
        rhs = poly_eval(f.phi, moved) * pi_val
        done += 1
        if lhs != rhs:
            witness = {"p": p, **{str(k): v.value for k, v in point.items()}}
            logger.info("invariance fails for %s at %s", f.name, witness)
            return InvarianceVerdict(verdict=Verdict.failed, trials=done, resamples=resamples, witness=witness)
    return InvarianceVerdict(verdict=Verdict.sampled, trials=done, resamples=resamples)


def _coefficient_rows(polys, basis, ring):
    rows = []
    for poly in polys:
        view = nested_view(poly, gen_positions(ring, "x"))
        if any(k not in set(basis) for k in view):
            return None
        rows.append([view.get(d, ring.zero) for d in basis])
    return rows


def _span_rank(rows):
    if not rows:
        return 0
    _, _, pivots = rref_fraction_free(rows)
    return len(pivots)


def in_kernel_span(f, kernel=None):
    """f 的 Φ 是否落在核的线性张成中（按秩判断）"""
    order = f.order
    if kernel is None:
        kernel = omega_box_kernel(order)
    basis = upsilon_box_basis(order)
    ring = order_ring(order)
    phi = f.phi if f.ring == ring else f.phi.set_ring(ring)
    rows = _coefficient_rows([k.phi for k in kernel] + [phi], basis, ring)
    if rows is None:
        return False
    return _span_rank(rows) == _span_rank(rows[:-1])


def twin_check(coeffs, s, t):
    """
    (a, s, t) 是否孪生：对应阶的全部内置不变量在 s 与 t 上取值相同
    """
    n = len(s)
    if len(t) != n:
        raise SpecError("seeds of different orders")
    if any(not v for v in list(s) + list(t)):
        raise SpecError("seeds must have nonzero terms")
    if n in (2, 3):
        return True
    if n not in TWIN_INVARIANTS:
        raise SpecError(f"no bundled invariants for order {n}")
    for name in TWIN_INVARIANTS[n]:
        inv = builtin_invariant(name)
        ring = inv.ring
        bind_s = dict(zip(alpha_gens(ring), coeffs))
        bind_t = dict(bind_s)
        bind_s.update(zip(x_gens(ring), s))
        bind_t.update(zip(x_gens(ring), t))
        # Π_Y Φ_X - Π_X Φ_Y
        u = poly_eval(inv.pi, bind_t) * poly_eval(inv.phi, bind_s) - poly_eval(inv.pi, bind_s) * poly_eval(
            inv.phi, bind_t
        )
        if u:
            return False
    return True


class SymmetryReport(BaseModel):
    order: str
    dim: int
    reversal_closed: bool
    positive: list


def _reverse(poly, n):
    ring = poly.ring
    xs = x_gens(ring)
    return poly_eval(poly, {xs[i]: xs[n - 1 - i] for i in range(n)})


def symmetry_report(n_or_type, kernel=None):
    """核是否在 x_i <-> x_{n-1-i} 下封闭，以及各基多项式系数是否全为正"""
    n, _ = _order(n_or_type)
    if kernel is None:
        kernel = omega_box_kernel(n_or_type)
    ring = order_ring(n_or_type)
    basis = upsilon_box_basis(n_or_type)
    # 反转后的多项式未必在 Υ_⊠ 中，用全部出现的单项式作列
    polys = [k.phi for k in kernel]
    reversed_polys = [_reverse(p, n) for p in polys]
    xpos = gen_positions(ring, "x")
    cols = sorted({m for p in polys + reversed_polys for m in nested_view(p, xpos)} | set(basis), reverse=True)
    rows = [[nested_view(p, xpos).get(c, ring.zero) for c in cols] for p in polys]
    closed = all(
        _span_rank(rows + [[nested_view(q, xpos).get(c, ring.zero) for c in cols]]) == len(rows)
        for q in reversed_polys
    )
    positive = [all(int(c) > 0 for c in p.coeffs()) for p in polys]
    return SymmetryReport(order=str(n_or_type), dim=len(kernel), reversal_closed=closed, positive=positive)


def kernel_dimension_mod_p(n_or_type, rng=None, p=None):
    """
    在随机大素数上特化系数后由秩求 dim Ω_⊠；Frac(ZZ[a]) 上的维数不超过此值
    """
    n, gr_type = _order(n_or_type)
    if rng is None:
        rng = substream(Config.seed, "kernel-dim", str(n_or_type))
    if p is None:
        p = random_prime_bits(rng, Config.sample_prime_bits)
    ring = lab_ring(n, 0, domain=gf(p))
    k = 3 if gr_type else n // 2
    coeffs = [rng.randrange(1, p) for _ in range(k)]
    basis = upsilon_box_basis(n_or_type)
    images = _phi_images(n, gr_type, ring, basis, coeffs)
    rows = sorted({m for img in images for m in img.itermonoms()})
    index = {m: i for i, m in enumerate(rows)}
    matrix = [[0] * len(basis) for _ in rows]
    for j, img in enumerate(images):
        for m, c in img.iterterms():
            matrix[index[m]][j] = int(c) % p
    rank = rank_over_field(matrix, p)
    logger.info("order %s: dim Upsilon_box %d, rank %d mod %d", n_or_type, len(basis), rank, p)
    return len(basis) - rank


def window_values(inv, seq, coeffs, count=20):
    """序列前 count 个窗口上的不变量取值"""
    seq.extend(seq.lo, seq.lo + count + inv.n - 2)
    out = []
    for i in range(seq.lo, min(seq.hi - inv.n + 1, seq.lo + count - 1) + 1):
        out.append(inv.evaluate(coeffs, [seq[j] for j in range(i, i + inv.n)]))
    return out


__all__ = [
    "BUILTIN",
    "InvariantPoly",
    "PhiMatrix",
    "builtin_invariant",
    "in_kernel_span",
    "is_invariant",
    "kernel_dimension_mod_p",
    "omega_box_kernel",
    "phi_apply",
    "phi_matrix",
    "sigma_apply",
    "symmetry_report",
    "twin_check",
    "upsilon_basis",
    "upsilon_box_basis",
    "window_values",
]
