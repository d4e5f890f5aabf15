#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/02 10:36
# @file:utils.py
import hashlib
import logging
import random
import sys
from enum import Enum


class Verdict(str, Enum):
    passed = "pass"
    sampled = "sampled-pass"
    failed = "fail"
    certified = "certified"
    not_certified = "not-certified"
    inconclusive = "inconclusive"


class SomosError(Exception):
    pass


class DomainMismatch(SomosError):
    pass


class NotDivisible(SomosError):
    pass


class DivisionFailure(SomosError):
    def __init__(self, index, reason="division by zero"):
        super().__init__(f"division failure at index {index}: {reason}")
        self.index = index
        self.reason = reason


class LaurentFailure(DivisionFailure):
    def __init__(self, index):
        super().__init__(index, "numerator not divisible by the trailing term")


class SpecError(SomosError):
    pass


class UnrealisedPosition(SomosError):
    def __init__(self, row, col):
        super().__init__(f"position ({row}, {col}) is not realised")
        self.row = row
        self.col = col


class ProbeInconclusive(SomosError):
    pass


class TableError(SomosError):
    pass


class UsageError(SomosError):
    pass


def get_logger(name):
    return logging.getLogger(f"somos.{name}")


def setup_logging(verbose=False):
    # 诊断信息只写 stderr，stdout 留给数据
    root = logging.getLogger("somos")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.propagate = False
    return root


def derive_seed(root_seed, *labels):
    """
    由根种子和标签派生子种子，同一输入永远得到同一结果
    :param root_seed: 根种子
    :param labels: 试验编号等标签
    :return: 64 位整数
    """
    text = ":".join(str(x) for x in (root_seed,) + labels)
    return int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")


def substream(root_seed, *labels):
    return random.Random(derive_seed(root_seed, *labels))
