#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/07 11:30
# @file:certificates.py
"""
孪生序列的多项式 U、V、D，理想成员证书的验证，结式 R 与消元 W、μ，以及有限域见证。
"""
import os
from dataclasses import dataclass
from typing import Optional

from pydantic import BaseModel

from arith import (
    FpElem,
    LaurentPoly,
    alpha_gens,
    format_poly_text,
    ground_value,
    lab_ring,
    outer_positions,
    parse_poly_text,
    poly_eval,
    poly_exact_divide,
    random_prime,
    resultant,
    summand_count,
    univariate_coeffs,
    x_gens,
    y_gens,
)
from conf import Config
from diamond import (
    DiamondSpec,
    ProductMatrix,
    contiguous_rank_hull_check,
    count_periodic_minors,
    diamond_minor,
)
from invariants import TWIN_INVARIANTS, builtin_invariant, twin_check
from sequences import detect_period, master_sequence, somos
from utils import NotDivisible, SomosError, SpecError, Verdict, get_logger, substream

logger = get_logger("certificates")

# 各阶 D 所用的连续子式偏移
D_SPECS = {
    4: DiamondSpec((-2, 0, 2), (2, 4, 6)),
    5: DiamondSpec((-2, 0, 2), (0, 4, 8), "right"),
    6: DiamondSpec((-4, -2, 0, 2, 4), (2, 4, 6, 8, 10)),
    7: DiamondSpec((-4, -2, 0, 2, 4), (-2, 2, 6, 10, 14), "right"),
}

# 证书表：(A 表, B 表, 主系数下标)
CERT_TABLES = {6: ("o6a2.txt", "o6b2.txt", 2), 7: ("o7a1.txt", "o7b1.txt", 1)}

# 有限域见证：p, a, s★ (x1..x_{n-2} 或 x1..x_{n-1}), t
WITNESSES = {
    4: (11, (1, 1), (1, 9, 1), (1, 2, 2, 1)),
    5: (11, (1, 1), (1, 1, 2, 1), (1, 1, 5, 1, 1)),
    6: (19, (1, 1, 1), (1, 1, 1, 1), (1, 1, 4, 4, 1, 1)),
    7: (29, (1, 1, 1), (1, 1, 6, 1, 1), (1, 1, 2, 1, 9, 1, 1)),
}


def xy_ring(n, domain=None):
    if domain is None:
        return lab_ring(n, y=True)
    return lab_ring(n, y=True, domain=domain)


def _swap_xy(poly, n):
    ring = poly.ring
    xs, ys = x_gens(ring), y_gens(ring)
    mapping = {xs[i]: ys[i] for i in range(n)}
    mapping.update({ys[i]: xs[i] for i in range(n)})
    return poly_eval(poly, mapping)


def skew(poly, n):
    """P(x, y) - P(y, x)"""
    return poly - _swap_xy(poly, n)


def _pi(ring, gens):
    out = ring.one
    for g in gens:
        out *= g
    return out


def _denominator_monomial(n, ring):
    xs, ys = x_gens(ring), y_gens(ring)
    if n == 4:
        return xs[0] * ys[0]
    if n == 5:
        return xs[0] * xs[4] * ys[0] * ys[4]
    pi = _pi(ring, xs) * _pi(ring, ys)
    if n == 6:
        return xs[0] * ys[0] * pi
    return xs[0] * xs[6] * ys[0] * ys[6] * pi


def twin_difference(phi, n, ring):
    """Π_Y Φ_X - Π_X Φ_Y"""
    xs, ys = x_gens(ring), y_gens(ring)
    phi_x = phi.set_ring(ring)
    phi_y = poly_eval(phi_x, {xs[i]: ys[i] for i in range(n)})
    return _pi(ring, ys) * phi_x - _pi(ring, xs) * phi_y


@dataclass
class TwinPolySet:
    n: int
    U: object
    V: Optional[object]
    D: Optional[object]
    spec: DiamondSpec

    @property
    def ring(self):
        return self.U.ring

    def stats(self):
        out = {"n": self.n, "U": summand_count(self.U)}
        if self.V is not None:
            out["V"] = summand_count(self.V)
        if self.D is not None:
            out["D"] = summand_count(self.D)
            out["D_degree"] = max(sum(m[i] for i in outer_positions(self.ring)) for m in self.D.itermonoms())
        return out


def twin_uv(n):
    if n not in TWIN_INVARIANTS:
        raise SpecError(f"twin polynomials exist for orders 4..7, got {n}")
    ring = xy_ring(n)
    names = TWIN_INVARIANTS[n]
    U = twin_difference(builtin_invariant(names[0]).phi, n, ring)
    V = twin_difference(builtin_invariant(names[1]).phi, n, ring) if len(names) > 1 else None
    return U, V


def minor_delta(n):
    """S × T 上的指定连续子式，S、T 为 x、y 上的主序列"""
    ring = xy_ring(n)
    spec = D_SPECS[n]
    S = master_sequence(n, ring=ring, letter="x")
    T = master_sequence(n, ring=ring, letter="y")
    rows = [r for row in spec.positions() for r, _ in row]
    cols = [c for row in spec.positions() for _, c in row]
    S.require(min(rows), max(rows))
    T.require(min(cols), max(cols))
    logger.info("expanding %dx%d minor of S x T for order %d", *spec.shape, n)
    return diamond_minor(ProductMatrix(S, T), spec)


def build_twin_polys(n, with_d=True):
    """
    U、V 来自内置不变量；D 为子式乘以固定单项式后的多项式
    :raises SomosError: 改写后仍带分母
    """
    U, V = twin_uv(n)
    D = None
    if with_d:
        delta = minor_delta(n)
        scaled = delta * LaurentPoly(_denominator_monomial(n, U.ring))
        if not scaled.is_polynomial():
            raise SomosError(f"order {n}: minor does not clear over the expected denominator")
        D = scaled.numerator()
        logger.info("order %d: D has %d summands", n, summand_count(D))
    return TwinPolySet(n, U, V, D, D_SPECS[n])


def load_table(name, n):
    ring = xy_ring(n)
    path = os.path.join(Config.data_dir, name)
    with open(path, "r", encoding="utf-8") as f:
        return parse_poly_text(f.read(), ring, outer_positions(ring))


class CertificateReport(BaseModel):
    n: int
    verdict: Verdict
    primary_residual_terms: int = 0
    derived_exact: bool = False
    derived_residual_terms: int = 0
    witness: Optional[str] = None


def _residual_witness(poly):
    if not poly:
        return None
    head = poly.ring.from_dict(dict([poly.terms()[0]]))
    return format_poly_text(head)


def verify_certificates(n, twins=None, tables=None):
    """
    n=6：A2 U + B2 V = a2 D，再由 a3 A2 - a2 A3 = V、a2 B3 - a3 B2 = U 推出 A3、B3；
    n=7：A1 U + B1 V = a1 D，a3 A1 - a1 A3 = a2^2 V，a1 B3 - a3 B1 = a2^2 U
    :param tables: 可选的 (A, B) 未斜对称化多项式，用于替换内置表
    """
    if n not in CERT_TABLES:
        raise SpecError(f"certificates are bundled for orders 6 and 7, got {n}")
    if twins is None:
        twins = build_twin_polys(n)
    a_name, b_name, j = CERT_TABLES[n]
    if tables is None:
        tables = (load_table(a_name, n), load_table(b_name, n))
    A = skew(tables[0], n)
    B = skew(tables[1], n)
    U, V, D = twins.U, twins.V, twins.D
    alphas = alpha_gens(U.ring)
    lead, a2, a3 = alphas[j - 1], alphas[1], alphas[2]
    residual = A * U + B * V - lead * D
    report = CertificateReport(n=n, verdict=Verdict.failed, primary_residual_terms=len(residual))
    if residual:
        report.witness = _residual_witness(residual)
        logger.info("order %d certificate residual has %d terms", n, len(residual))
        return report
    if n == 6:
        top_a, top_b = a3 * A - V, U + a3 * B
    else:
        top_a, top_b = a3 * A - a2**2 * V, a2**2 * U + a3 * B
    try:
        A3 = poly_exact_divide(top_a, lead)
        B3 = poly_exact_divide(top_b, lead)
    except NotDivisible as e:
        report.witness = str(e)
        return report
    report.derived_exact = True
    derived = A3 * U + B3 * V - a3 * D
    report.derived_residual_terms = len(derived)
    if derived:
        report.witness = _residual_witness(derived)
        return report
    report.verdict = Verdict.passed
    return report


class IdentityReport(BaseModel):
    verdict: Verdict
    residual_terms: dict


def verify_low_order_identities(twins4=None, twins5=None):
    """D = -U (阶 4)，D = a2 U (阶 5)"""
    twins4 = twins4 or build_twin_polys(4)
    twins5 = twins5 or build_twin_polys(5)
    a2 = alpha_gens(twins5.ring)[1]
    r4 = twins4.D + twins4.U
    r5 = twins5.D - a2 * twins5.U
    ok = not r4 and not r5
    return IdentityReport(
        verdict=Verdict.passed if ok else Verdict.failed,
        residual_terms={4: len(r4), 5: len(r5)},
    )


def degenerate_coefficients(twins):
    """
    阶 6 令 (a2, a3) = 0，阶 7 令 (a1, a3) = 0：U、V 恒为零而 D 不为零
    """
    alphas = alpha_gens(twins.ring)
    zeroed = (alphas[1], alphas[2]) if twins.n == 6 else (alphas[0], alphas[2])
    sub = {a: twins.ring.zero for a in zeroed}
    return {
        "U": poly_eval(twins.U, sub),
        "V": poly_eval(twins.V, sub),
        "D": poly_eval(twins.D, sub) if twins.D is not None else None,
    }


def hat_factor(n, ring):
    """R 中除 x0 外的二次因子"""
    a = alpha_gens(ring)
    x = x_gens(ring)
    if n == 6:
        return a[0] * x[0] * x[4] + a[1] * x[1] * x[3] + a[2] * x[2] ** 2
    return a[0] * x[0] * x[5] + a[1] * x[1] * x[4] + a[2] * x[2] * x[3]


def specialisation(n, coeffs, s_star, t, p=None):
    """
    绑定系数、s★ = (x1, ..., x_{k})、t = (y0, ..., y_{n-1})，其余 x 保持自由
    """
    ring = xy_ring(n)
    vals = list(coeffs) + list(s_star) + list(t)
    if p is not None:
        vals = [v if isinstance(v, FpElem) else FpElem(v, p) for v in vals]
    it = iter(vals)
    out = {a: next(it) for a in alpha_gens(ring)}
    xs = x_gens(ring)
    for i in range(1, len(s_star) + 1):
        out[xs[i]] = next(it)
    for y in y_gens(ring):
        out[y] = next(it)
    return out


@dataclass
class TwinResultant:
    n: int
    R: object
    R_star: object
    U: object
    V: object


def twin_resultant(n, bindings=None, twins=None):
    """
    R = res_{x_{n-1}}(U, V)，R_⋇ = R / (x0 · L̂)；给出 bindings 时先特化
    """
    if n not in (6, 7):
        raise SpecError(f"twin resultants are defined for orders 6 and 7, got {n}")
    if twins is None:
        U, V = twin_uv(n)
    else:
        U, V = twins.U, twins.V
    factor = x_gens(U.ring)[0] * hat_factor(n, U.ring)
    if bindings:
        U = poly_eval(U, bindings)
        V = poly_eval(V, bindings)
        factor = poly_eval(factor, bindings)
    var = x_gens(U.ring)[n - 1]
    R = resultant(U, V, var)
    try:
        R_star = poly_exact_divide(R, factor)
    except NotDivisible as e:
        raise SomosError(f"order {n}: resultant is not divisible by x0 and the quadratic factor: {e}")
    return TwinResultant(n, R, R_star, U, V)


@dataclass
class WElimination:
    W0: object
    W1: object
    mu: Optional[object] = None


def build_W_and_mu(n, P=None, bindings=None, twins=None, resultant_data=None):
    """
    W = V2 U - U2 V = W0 + W1 x_{n-1}，μ(P) = sum_j (-1)^j P_j W0^j W1^{k-j}
    :raises SpecError: W1 在特化下恒为零
    """
    if resultant_data is not None:
        U, V = resultant_data.U, resultant_data.V
    else:
        U, V = twin_uv(n) if twins is None else (twins.U, twins.V)
        if bindings:
            U, V = poly_eval(U, bindings), poly_eval(V, bindings)
    var = x_gens(U.ring)[n - 1]
    uc = univariate_coeffs(U, var) + [U.ring.zero] * 3
    vc = univariate_coeffs(V, var) + [U.ring.zero] * 3
    W = vc[2] * U - uc[2] * V
    wc = univariate_coeffs(W, var) + [U.ring.zero] * 2
    W0, W1 = wc[0], wc[1]
    if not W1:
        raise SpecError("W1 vanishes under this specialisation")
    out = WElimination(W0, W1)
    if P is not None:
        if bindings:
            P = poly_eval(P, bindings)
        pc = univariate_coeffs(P, var)
        k = len(pc) - 1
        mu = U.ring.zero
        for jj, c in enumerate(pc):
            term = c * W0**jj * W1 ** (k - jj)
            mu = mu - term if jj % 2 else mu + term
        out.mu = mu
    return out


def field_roots(poly, var, p):
    """逐个扫描 F_p 求根，升序"""
    coeffs = dense_coeffs(poly, var, p)
    return [r for r in range(p) if _horner(coeffs, r, p) == 0]


def dense_coeffs(poly, var, p=None):
    # 特化后各系数是常数多项式
    return [ground_value(c, p) for c in univariate_coeffs(poly, var)]


def _horner(coeffs, value, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * value + c) % p
    return acc


def evaluate_at(poly, var, value, p):
    return _horner(dense_coeffs(poly, var, p), value, p)


class WitnessOption(BaseModel):
    seed: list
    period_s: Optional[int]
    period_t: Optional[int]
    nonzero_terms: bool
    twins: bool
    minors_checked: int = 0
    minors_nonzero: int = 0
    # 阶 6、7：μ(U) 在根处为零
    mu_zero: Optional[bool] = None


class WitnessReport(BaseModel):
    n: int
    p: int
    verdict: Verdict
    polynomial: list
    roots: list
    options: list
    total_minors: int = 0


def _all_nonzero(seq, period):
    seq.extend(seq.lo, seq.lo + period - 1)
    return seq.hi >= seq.lo + period - 1 and all(seq[i] for i in range(seq.lo, seq.lo + period))


def verify_ff_witness(n, witness=None):
    """
    由 R̂_⋇（阶 6、7）或 Û（阶 4、5）的根重建种子，检验周期、非零项与全部连续子式
    """
    if n not in WITNESSES:
        raise SpecError(f"no finite-field witness for order {n}")
    p, coeffs, s_star, t = witness or WITNESSES[n]
    bindings = specialisation(n, coeffs, s_star, t, p)
    U, V = twin_uv(n)
    seeds = []
    mu_zero = {}
    if n in (6, 7):
        res = twin_resultant(n, bindings)
        poly = res.R_star
        x0 = x_gens(poly.ring)[0]
        roots = field_roots(poly, x0, p)
        elim = build_W_and_mu(n, P=res.U, resultant_data=res)
        for r in roots:
            w1 = evaluate_at(elim.W1, x0, r, p)
            if not r or not w1:
                continue
            end = -evaluate_at(elim.W0, x0, r, p) * pow(w1, -1, p) % p
            seeds.append([r] + list(s_star) + [end])
            mu_zero[r] = evaluate_at(elim.mu, x0, r, p) == 0
    else:
        poly = poly_eval(U, bindings)
        x0 = x_gens(poly.ring)[0]
        roots = field_roots(poly, x0, p)
        seeds = [[r] + list(s_star) for r in roots if r]
    size, mode = (4, "diamond") if n == 6 else (4, "half") if n == 7 else (2, "diamond" if n == 4 else "half")
    t_seq = somos(coeffs, t, p)
    period_t = detect_period(t_seq)
    report = WitnessReport(
        n=n, p=p, verdict=Verdict.failed, polynomial=dense_coeffs(poly, x0, p), roots=roots, options=[]
    )
    ok = bool(seeds) and period_t is not None and _all_nonzero(t_seq, period_t)
    for seed in seeds:
        s_seq = somos(coeffs, seed, p)
        period_s = detect_period(s_seq)
        option = WitnessOption(
            seed=seed,
            period_s=period_s,
            period_t=period_t,
            nonzero_terms=period_s is not None and _all_nonzero(s_seq, period_s),
            twins=twin_check(coeffs, s_seq.values(0, n - 1), t_seq.values(0, n - 1)),
            mu_zero=mu_zero.get(seed[0]),
        )
        if option.nonzero_terms and period_t is not None:
            count = count_periodic_minors(
                s_seq, t_seq, size, (period_s, period_t), mode=mode, diagonal=(n == 6)
            )
            option.minors_checked = count.checked
            option.minors_nonzero = count.nonzero
            report.total_minors += count.checked
        ok = ok and option.nonzero_terms and option.twins and option.minors_checked == option.minors_nonzero > 0
        ok = ok and option.mu_zero is not False
        report.options.append(option)
    if ok:
        report.verdict = Verdict.passed
    logger.info("order %d witness over F_%d: %s, %d minors", n, p, report.verdict.value, report.total_minors)
    return report


def random_twin(n, p, rng, attempts=50):
    """
    随机 (a, s★, t) 经 R̂_⋇ 的根和 W 消元得到 F_p 上的孪生种子对；找不到时返回 None
    """
    if n not in (6, 7):
        raise SpecError("random twins are built for orders 6 and 7")
    k = n - 2
    for _ in range(attempts):
        coeffs = [rng.randrange(1, p) for _ in range(3)]
        s_star = [rng.randrange(1, p) for _ in range(k)]
        t = [rng.randrange(1, p) for _ in range(n)]
        bindings = specialisation(n, coeffs, s_star, t, p)
        try:
            res = twin_resultant(n, bindings)
            elim = build_W_and_mu(n, resultant_data=res)
        except (SomosError, SpecError):
            continue
        x0 = x_gens(res.R_star.ring)[0]
        for r in field_roots(res.R_star, x0, p):
            w1 = evaluate_at(elim.W1, x0, r, p)
            if r and w1:
                end = -evaluate_at(elim.W0, x0, r, p) * pow(w1, -1, p) % p
                if end:
                    return coeffs, [r] + s_star + [end], t
    return None


class TwinRankReport(BaseModel):
    n: int
    p: int
    pairs: int
    vanishing: int
    verdict: Verdict


def twin_rank_check(n, trials=10, p=None, width=30, rng=None):
    """
    随机孪生对上，窗口内全部 5 阶连续 (half-)diamond 子式为零
    :param p: 素数；缺省时从 Config.twin_prime_interval 随机抽取
    """
    if rng is None:
        rng = substream(Config.seed, "twin-rank", n)
    if p is None:
        p = random_prime(rng, *Config.twin_prime_interval)
    mode = "diamond" if n == 6 else "half"
    pairs = vanishing = 0
    tries = 0
    while pairs < trials and tries < trials * Config.resample_limit:
        tries += 1
        found = random_twin(n, p, rng)
        if found is None:
            continue
        coeffs, s, t = found
        s_seq = somos(coeffs, s, p).extend(0, width - 1)
        t_seq = somos(coeffs, t, p).extend(0, width - 1)
        if s_seq.hi < width - 1 or t_seq.hi < width - 1:
            continue
        pairs += 1
        hull = contiguous_rank_hull_check(ProductMatrix(s_seq, t_seq), 4, (0, width - 1), mode)
        if hull.vanishing_ok:
            vanishing += 1
    verdict = Verdict.passed if pairs and vanishing == pairs else Verdict.failed
    return TwinRankReport(n=n, p=p, pairs=pairs, vanishing=vanishing, verdict=verdict)
