#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/10 16:22
# @file:experiments.py
"""
Gale-Robinson 随机秩实验、抽取后的非严格阶拟合，以及例外类型的秩预测。
"""
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import gcd
from typing import Optional

from pydantic import BaseModel, model_validator

from arith import FpElem, nullspace_fraction_free, random_prime
from conf import Config
from diamond import ProductMatrix, contiguous_rank_hull_check, rank_probe
from sequences import RawTerms, SeqView, decimate, gale_robinson, is_proper
from utils import (
    DivisionFailure,
    DomainMismatch,
    ProbeInconclusive,
    SpecError,
    get_logger,
    substream,
)

logger = get_logger("experiments")

DEFAULT = "default"
EXCEPTIONAL = "exceptional"
UNKNOWN = "unknown"

# 非本原类型的反例种子
NONPRIMITIVE_SEEDS = {
    (2, 4, 6): (1,) * 11 + (2,),
    (3, 6, 12): (1,) * 19 + (2, 3),
}


def default_rank(n):
    """n = 2m + 2（偶）或 n = 2m + 3（奇）时为 2^m"""
    if n < 2:
        raise SpecError(f"order must be >= 2, got {n}")
    m = (n - 2) // 2 if n % 2 == 0 else (n - 3) // 2
    return 2**m


def eta(g):
    if g < 5:
        raise SpecError(f"the ratio is defined for g >= 5, got {g}")
    k = (g - 1) // 2
    return Fraction(k + 1, 2**k)


def probe_mode(n):
    return "diamond" if n % 2 == 0 else "half"


class Prediction(BaseModel):
    gr_type: tuple
    rank: Optional[int]
    kind: str
    g: Optional[int] = None


def predicted_rank(gr_type):
    """
    proper 类型的预测秩：没有 gcd >= 5 的分量对时取默认秩；恰有一对时乘以 eta(g)；
    两对以上无法预测
    """
    t = tuple(gr_type)
    if len(t) != 3 or min(t) < 1:
        raise SpecError(f"invalid Gale-Robinson type {t}")
    if not is_proper(t):
        raise SpecError(f"type {t} is not proper")
    base = default_rank(sum(t))
    shared = [g for g in (gcd(t[0], t[1]), gcd(t[1], t[2]), gcd(t[2], t[0])) if g >= 5]
    if not shared:
        return Prediction(gr_type=t, rank=base, kind=DEFAULT)
    if len(shared) > 1:
        return Prediction(gr_type=t, rank=None, kind=UNKNOWN)
    value = eta(shared[0]) * base
    if value.denominator != 1:
        return Prediction(gr_type=t, rank=None, kind=UNKNOWN, g=shared[0])
    return Prediction(gr_type=t, rank=int(value), kind=EXCEPTIONAL, g=shared[0])


def _expected_rank(gr_type):
    if is_proper(gr_type):
        rank = predicted_rank(gr_type).rank
        if rank is not None:
            return rank
    return default_rank(sum(gr_type))


def probe_radius(size, mode):
    """容纳 size 阶连续子矩阵所需的对称窗口半径"""
    if mode == "diamond":
        return size + 2
    return (3 * (size - 1) + 1) // 2 + 3


class ExperimentConfig(BaseModel):
    gr_type: tuple
    trials: Optional[int] = None
    box: Optional[tuple] = None
    prime_interval: Optional[tuple] = None
    probe_size: Optional[int] = None
    seed: Optional[int] = None
    mode: Optional[str] = None
    centre: int = 0
    certify: bool = False
    workers: int = 1

    @model_validator(mode="after")
    def fill_defaults(self):
        t = tuple(self.gr_type)
        if len(t) != 3 or min(t) < 1:
            raise ValueError(f"invalid Gale-Robinson type {t}")
        self.gr_type = t
        if self.trials is None:
            self.trials = Config.trials
        if self.box is None:
            self.box = tuple(Config.sample_box)
        if self.prime_interval is None:
            self.prime_interval = tuple(Config.prime_interval)
        if self.seed is None:
            self.seed = Config.seed
        if self.mode is None:
            self.mode = probe_mode(sum(t))
        if self.mode not in ("diamond", "half"):
            raise ValueError(f"unknown probe mode {self.mode!r}")
        lo, hi = self.prime_interval
        if hi < lo or hi < 2:
            raise ValueError(f"empty prime interval [{lo}, {hi}]")
        if self.box[0] < 1 or self.box[1] < self.box[0]:
            raise ValueError(f"invalid sampling box {self.box}")
        floor = 2 * _expected_rank(t)
        if self.probe_size is None:
            self.probe_size = max(Config.probe_size, floor)
        if self.probe_size < floor:
            raise ValueError(f"probe size {self.probe_size} below twice the expected rank {floor // 2}")
        if self.trials < 1:
            raise ValueError("at least one trial is needed")
        return self


class TrialRecord(BaseModel):
    index: int
    attempts: int
    aborted: bool = False
    prime: Optional[int] = None
    coeffs: Optional[tuple] = None
    seed: Optional[tuple] = None
    class_ranks: dict = {}
    rank: Optional[int] = None
    certified: Optional[bool] = None

    def line(self):
        if self.aborted:
            return f"trial={self.index} attempts={self.attempts} aborted=yes"
        classes = ",".join(f"{k}:{v}" for k, v in sorted(self.class_ranks.items()))
        certified = "-" if self.certified is None else ("yes" if self.certified else "no")
        return (
            f"trial={self.index} prime={self.prime} coeffs={','.join(map(str, self.coeffs))} "
            f"seed={','.join(map(str, self.seed))} rank={self.rank} classes={classes} certified={certified}"
        )


class ExperimentReport(BaseModel):
    config: ExperimentConfig
    prediction: Optional[Prediction] = None
    trials: list
    modal_rank: int
    agreement: int
    completed: int

    def lines(self):
        t = ",".join(map(str, self.config.gr_type))
        out = [
            f"type={t} n={sum(self.config.gr_type)} mode={self.config.mode} probe={self.config.probe_size} "
            f"seed={self.config.seed}"
        ]
        out += [r.line() for r in self.trials]
        predicted = "-" if self.prediction is None else f"{self.prediction.rank} ({self.prediction.kind})"
        out.append(
            f"modal_rank={self.modal_rank} agreement={self.agreement}/{self.completed} predicted={predicted}"
        )
        return out


def _realise(gr_type, coeffs, seed, p, centre, radius):
    n = sum(gr_type)
    seq = gale_robinson(gr_type, coeffs, seed, p, base=centre - n // 2)
    seq.require(centre - radius, centre + radius)
    if any(not seq[i] for i in range(centre - radius, centre + radius + 1)):
        raise DivisionFailure(centre, "zero term inside the probe window")
    return seq


def certify_rank(seq, rank, centre, mode):
    # 在 2r+1 阶连续网格上检验 (r+1) 阶子式全为零且对角 r 阶子式非零
    w = 2 * rank if mode == "diamond" else 3 * rank + 2
    try:
        seq.require(centre - w, centre + w)
    except DivisionFailure:
        return False
    report = contiguous_rank_hull_check(ProductMatrix(seq), rank, window=(centre - w, centre + w), mode=mode)
    return report.diagonal_ok and report.vanishing_ok


def run_trial(cfg, index):
    """
    单次试验：每次重采样都使用独立子流 (seed, trial, index, attempt)
    """
    n = sum(cfg.gr_type)
    lo, hi = cfg.box
    radius = probe_radius(cfg.probe_size, cfg.mode)
    for attempt in range(Config.resample_limit):
        rng = substream(cfg.seed, "trial", index, attempt)
        coeffs = tuple(rng.randint(lo, hi) for _ in range(3))
        seed = tuple(rng.randint(lo, hi) for _ in range(n))
        p = random_prime(rng, *cfg.prime_interval)
        if any(c % p == 0 for c in coeffs + seed):
            continue
        try:
            seq = _realise(cfg.gr_type, coeffs, seed, p, cfg.centre, radius)
        except DivisionFailure as e:
            logger.debug("trial %d attempt %d resampled: %s", index, attempt, e)
            continue
        m = ProductMatrix(seq)
        probe = rank_probe(m, cfg.mode, cfg.probe_size, window=(cfg.centre - radius, cfg.centre + radius))
        certified = certify_rank(seq, probe.rank, cfg.centre, cfg.mode) if cfg.certify else None
        logger.info("trial %d: p=%d rank %d", index, p, probe.rank)
        return TrialRecord(
            index=index,
            attempts=attempt + 1,
            prime=p,
            coeffs=coeffs,
            seed=seed,
            class_ranks=probe.class_ranks,
            rank=probe.rank,
            certified=certified,
        )
    logger.warning("trial %d aborted after %d attempts", index, Config.resample_limit)
    return TrialRecord(index=index, attempts=Config.resample_limit, aborted=True)


def run_gr_experiment(cfg):
    """
    :param cfg: ExperimentConfig
    :return: ExperimentReport，按试验编号排序，与并行度无关
    """
    indices = range(cfg.trials)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(run_trial, [cfg] * cfg.trials, indices))
    else:
        records = [run_trial(cfg, i) for i in indices]
    records.sort(key=lambda r: r.index)
    ranks = [r.rank for r in records if not r.aborted]
    if not ranks:
        raise ProbeInconclusive(f"all {cfg.trials} trials aborted")
    counts = Counter(ranks)
    modal = max(counts, key=lambda r: (counts[r], -r))
    prediction = predicted_rank(cfg.gr_type) if is_proper(cfg.gr_type) else None
    return ExperimentReport(
        config=cfg,
        prediction=prediction,
        trials=records,
        modal_rank=modal,
        agreement=counts[modal],
        completed=len(ranks),
    )


class NonprimitiveReport(BaseModel):
    gr_type: tuple
    prime: int
    probe_size: int
    rank: int
    full_rank: bool
    default_rank: int
    class_ranks: dict


def nonprimitive_probe(gr_type, seed=None, probe_size=None, rng=None):
    """
    非本原类型在缩小尺寸上满秩，说明其秩远超默认秩 2^m
    """
    t = tuple(gr_type)
    if seed is None:
        seed = NONPRIMITIVE_SEEDS.get(t)
        if seed is None:
            raise SpecError(f"no reference seed for type {t}")
    if probe_size is None:
        probe_size = Config.nonprimitive_probe
    if rng is None:
        rng = substream(Config.seed, "nonprimitive", *t)
    mode = probe_mode(sum(t))
    radius = probe_radius(probe_size, mode)
    for attempt in range(Config.resample_limit):
        p = random_prime(rng, *Config.prime_interval)
        try:
            seq = _realise(t, (1, 1, 1), seed, p, 0, radius)
        except DivisionFailure as e:
            logger.debug("type %s attempt %d resampled: %s", t, attempt, e)
            continue
        probe = rank_probe(ProductMatrix(seq), mode, probe_size, window=(-radius, radius))
        return NonprimitiveReport(
            gr_type=t,
            prime=p,
            probe_size=probe.size,
            rank=probe.rank,
            full_rank=probe.rank == probe.size,
            default_rank=default_rank(sum(t)),
            class_ranks=probe.class_ranks,
        )
    raise ProbeInconclusive(f"type {t}: every sampled prime hit a zero term")


# ---------------------------------------------------------------- 非严格阶拟合


def _terms_of(seq):
    if isinstance(seq, SeqView):
        return RawTerms(seq.lo, seq.values(seq.lo, seq.hi))
    if isinstance(seq, RawTerms):
        return seq
    return RawTerms(0, list(seq))


def window_rows(terms, n):
    """第 i 行为 (s_i s_{i+n}, s_{i+1} s_{i+n-1}, ..., s_{i+n//2} s_{i+n-n//2})"""
    terms = _terms_of(terms)
    if any(isinstance(v, FpElem) for v in terms.terms):
        raise DomainMismatch("nonstrict fits run over the rationals")
    lo = terms.base
    hi = lo + len(terms) - 1
    return [[terms[i + j] * terms[i + n - j] for j in range(n // 2 + 1)] for i in range(lo, hi - n + 1)]


class FitReport(BaseModel):
    n: int
    windows: int
    held_out: int
    basis: list
    validated: bool

    @property
    def dim(self):
        return len(self.basis)


def nonstrict_fit(terms, n, holdout=2):
    """
    把系数 a0..a_{n//2} 当作未知数解齐次方程组；核非零当且仅当序列有非严格阶 n。
    最后 holdout 个窗口不参与求解，只用来交叉验证核向量
    :param terms: SeqView、RawTerms 或有理数列表
    :return: FitReport
    """
    if n < 2:
        raise SpecError(f"order must be >= 2, got {n}")
    rows = window_rows(terms, n)
    need = n // 2 + 2
    if len(rows) < need:
        raise SpecError(f"order {n} needs at least {need} windows, got {len(rows)}")
    if len(rows) - holdout < need:
        holdout = 0
    fit_rows = rows[: len(rows) - holdout]
    basis = nullspace_fraction_free(fit_rows, n // 2 + 1)
    validated = all(
        sum(c * v for c, v in zip(vec, row)) == 0 for vec in basis for row in rows[len(rows) - holdout :]
    )
    return FitReport(n=n, windows=len(rows), held_out=holdout, basis=basis, validated=validated)


class ScanRow(BaseModel):
    d: int
    n: int
    dims: list
    shared: int
    vector: Optional[list] = None


def decimation_scan(seq, ds, ns):
    """
    对每个抽取因子 d 和每个余数分别拟合，再把全部余数的方程叠在一起求公共核
    :return: ScanRow 列表
    """
    out = []
    for d in ds:
        parts = [decimate(seq, d, r) for r in range(d)]
        for n in ns:
            dims, stacked = [], []
            for r, part in enumerate(parts):
                rows = window_rows(part, n)
                if len(rows) < n // 2 + 2:
                    raise SpecError(f"decimation d={d} residue={r} realises only {len(rows)} windows for order {n}")
                dims.append(len(nullspace_fraction_free(rows, n // 2 + 1)))
                stacked.extend(rows)
            shared = nullspace_fraction_free(stacked, n // 2 + 1)
            out.append(ScanRow(d=d, n=n, dims=dims, shared=len(shared), vector=shared[0] if shared else None))
            logger.info("d=%d n=%d: kernel dims %s, shared %d", d, n, dims, len(shared))
    return out
