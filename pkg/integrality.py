#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/08 15:47
# @file:integrality.py
"""
主序列的 Laurent 性审计与分母追踪（Λ、Θ、Ξ）。
这里的不可约元只取单个变量 x_i，即单项式分母中可能出现的全部不可约元。
"""
from pydantic import BaseModel
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from arith import (
    FpElem,
    gen_positions,
    gf,
    ground_value,
    outer_degree,
    poly_eval,
    random_prime_bits,
    summand_count,
    univariate_coeffs,
)
from conf import Config
from diamond import DiamondSpec, ProductMatrix, diamond_minor
from sequences import RawTerms, master_sequence
from utils import SpecError, Verdict, get_logger, substream

logger = get_logger("integrality")

# u_i = S_{i + c}
RECENTRE = {4: 1, 5: 2, 6: 2, 7: 3}

# (e, e', e'', half)：Δ' 取 (e, e')，Δ'' 取 (e, e'')
XI_OFFSETS = {
    4: ((0, 2), (-2, 0), (0, 2), None),
    5: ((0, 2), (-4, 0), (0, 4), "right"),
    6: ((1, 3, 5, 7), (-3, -1, 1, 3), (-1, 1, 3, 5), None),
    7: ((0, 2, 4, 6), (-8, -4, 0, 4), (-4, 0, 4, 8), "right"),
}


def _order_label(order):
    return "gr-" + ",".join(map(str, order)) if isinstance(order, tuple) else str(order)


def monomial_text(ring, exps, letter="x"):
    pos = gen_positions(ring, letter)
    parts = []
    for k, i in enumerate(pos):
        e = exps[i]
        if e:
            parts.append(f"{letter}{k}" if e == 1 else f"{letter}{k}^{e}")
    return "*".join(parts) or "1"


class AuditRow(BaseModel):
    index: int
    denominator: str
    terms: int


class AuditReport(BaseModel):
    order: str
    lo: int
    hi: int
    verdict: Verdict
    rows: list

    def table(self):
        lines = ["index | denominator monomial | numerator term count"]
        lines += [f"{r.index} | {r.denominator} | {r.terms}" for r in self.rows]
        return "\n".join(lines)


def laurent_audit(order, lo=None, hi=None):
    """
    逐项精确除法延拓主序列；任何一步不整除即抛 LaurentFailure
    :param order: 阶数或 Gale-Robinson 类型
    """
    n = sum(order) if isinstance(order, tuple) else order
    if hi is None:
        hi = Config.k_max.get(n, n + Config.symbolic_margin)
    if lo is None:
        lo = 0
    S = master_sequence(order)
    S.require(lo, hi)
    ring = S[0].ring
    apos = gen_positions(ring, "a")
    rows = []
    for i in range(lo, hi + 1):
        term = S[i]
        if any(term.shift[j] < 0 for j in apos):
            raise SpecError(f"coefficient variables in the denominator of S_{i}")
        den = term.denominator_exponents()
        rows.append(AuditRow(index=i, denominator=monomial_text(ring, den), terms=summand_count(term.num)))
        logger.debug("S_%d: denominator %s, %d terms", i, rows[-1].denominator, rows[-1].terms)
    return AuditReport(order=_order_label(order), lo=lo, hi=hi, verdict=Verdict.passed, rows=rows)


def recentred(n, lo, hi):
    """u_i = S_{i+c}，已实现 [lo, hi]"""
    c = RECENTRE[n]
    S = master_sequence(n)
    S.require(lo + c, hi + c)
    return RawTerms(lo, S.values(lo + c, hi + c))


def _dividing_vars(lp):
    ring = lp.ring
    return {f"x{k}" for k, i in enumerate(gen_positions(ring, "x")) if lp.shift[i] > 0}


def _denominator_vars(lp):
    ring = lp.ring
    return {f"x{k}" for k, i in enumerate(gen_positions(ring, "x")) if lp.shift[i] < 0}


def lambda_set(n, mode=None):
    """
    diamond：整除 u_0 的分子，或同时整除 u_{-1}、u_1 的分子；
    half：整除 u_{-1}、u_0、u_1 之一的分子，或同时整除 u_{-2}、u_2 的分子
    """
    if n not in RECENTRE:
        raise SpecError(f"no recentring for order {n}")
    if mode is None:
        mode = "diamond" if n % 2 == 0 else "half"
    u = recentred(n, -2, 2)
    if mode == "diamond":
        return sorted(_dividing_vars(u[0]) | (_dividing_vars(u[-1]) & _dividing_vars(u[1])))
    single = _dividing_vars(u[-1]) | _dividing_vars(u[0]) | _dividing_vars(u[1])
    return sorted(single | (_dividing_vars(u[-2]) & _dividing_vars(u[2])))


def theta_set(n, k, u=None):
    """Θ(k)：整除 u_{-k}..u_k 中某项分母的变量"""
    if u is None:
        u = recentred(n, -k, k)
    out = set()
    for i in range(-k, k + 1):
        out |= _denominator_vars(u[i])
    return sorted(out, key=lambda s: int(s[1:]))


def theta_chain(n, k_max=None):
    """Θ(0) ⊆ Θ(1) ⊆ ... ⊆ Θ(k_max)"""
    if k_max is None:
        k_max = Config.k_max[n] - RECENTRE[n]
    u = recentred(n, -k_max, k_max)
    return [theta_set(n, k, u) for k in range(k_max + 1)]


class MinorStats(BaseModel):
    spec: str
    degree: int
    summands: int


class XiReport(BaseModel):
    n: int
    verdict: Verdict
    minors: list
    rounds: int
    failures: list = []


def xi_minors(n):
    e, e1, e2, half = XI_OFFSETS[n]
    specs = [DiamondSpec(e, e1, half), DiamondSpec(e, e2, half)]
    span = 0
    for spec in specs:
        for row in spec.positions():
            for r, c in row:
                span = max(span, abs(r), abs(c))
    m = ProductMatrix(recentred(n, -span, span))
    out = []
    for spec in specs:
        delta = diamond_minor(m, spec)
        out.append((spec, delta.numerator()))
    return out


def _univariate(poly, index, bindings, p, uring):
    spec = poly_eval(poly, bindings)
    # 特化后的环与原环不同，按下标取变量
    coeffs = [ground_value(c, p) for c in univariate_coeffs(spec, index)] if spec else []
    return uring.from_dict({(d,): c for d, c in enumerate(coeffs) if c})


def coprime_probe(P, Q, rounds=None, rng=None):
    """
    依次只保留一个变量，其余代入随机大素数域的值，要求一元 gcd 为 1
    :return: (是否通过, 失败记录)
    """
    if rounds is None:
        rounds = Config.coprime_rounds
    if rng is None:
        rng = substream(Config.seed, "coprime")
    ring = P.ring
    used = sorted({i for m in list(P.itermonoms()) + list(Q.itermonoms()) for i, e in enumerate(m) if e})
    failures = []
    for k in range(rounds):
        p = random_prime_bits(rng, Config.sample_prime_bits)
        uring = PolyRing("z", gf(p), lex)
        values = {i: rng.randrange(1, p) for i in used}
        for i in used:
            fp = {ring.gens[j]: FpElem(values[j], p) for j in used if j != i}
            up = _univariate(P, i, fp, p, uring)
            uq = _univariate(Q, i, fp, p, uring)
            g = up.gcd(uq)
            if g.degree() > 0:
                failures.append((k, str(ring.symbols[i]), p))
    return not failures, failures


def xi_coprimality_probe(n, rounds=None, rng=None):
    minors = xi_minors(n)
    stats = [
        MinorStats(spec=str(spec), degree=outer_degree(num), summands=summand_count(num)) for spec, num in minors
    ]
    ok, failures = coprime_probe(minors[0][1], minors[1][1], rounds, rng)
    report = XiReport(
        n=n,
        verdict=Verdict.certified if ok else Verdict.inconclusive,
        minors=stats,
        rounds=rounds or Config.coprime_rounds,
        failures=failures,
    )
    logger.info("order %d Xi probe: %s", n, report.verdict.value)
    return report


class ContainmentReport(BaseModel):
    n: int
    lam: list
    theta_base: list
    theta_k: list
    contained: bool


def denominator_containment(n, K=None, base=None):
    """Θ(K) ⊆ Λ ∪ Θ(base)，base 取 Ξ 探测所覆盖的偏移之后一层"""
    if base is None:
        base = {4: 3, 5: 6, 6: 8, 7: 10}[n]
    if K is None:
        K = max(base, Config.k_max[n] - RECENTRE[n])
    u = recentred(n, -K, K)
    lam = lambda_set(n)
    theta_base = theta_set(n, base, u)
    theta_k = theta_set(n, K, u)
    contained = set(theta_k) <= set(lam) | set(theta_base)
    return ContainmentReport(n=n, lam=lam, theta_base=theta_base, theta_k=theta_k, contained=contained)
