#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/02 10:14
# @file:conf.py
import ast
import os

_HERE = os.path.dirname(os.path.abspath(__file__))


class Config:
    # 数据表目录，优先读取环境变量 SOMOS_LAB_ROOT
    data_dir = os.path.join(os.environ.get("SOMOS_LAB_ROOT", _HERE), "data")
    # 默认随机种子
    seed = 20240522
    # rank 探测默认尺寸
    probe_size = 40
    # 周期检测最多记录的状态数
    period_cap = 10**6
    # 符号主序列默认下标范围 |i| <= n + symbolic_margin
    symbolic_margin = 8
    # Laurent 审计上限 K_max
    k_max = {4: 20, 5: 16, 6: 12, 7: 12}
    # 抽样不变量检验的点数
    sample_trials = 20
    # 抽样素数的比特数
    sample_prime_bits = 60
    # 互素探测重复次数
    coprime_rounds = 5
    # 实验系数与种子的取值区间
    sample_box = (1, 100)
    # 实验素数区间
    prime_interval = (10**5, 10**6)
    # 孪生秩检验的素数区间，R̂_⋇ 的求根逐个扫描 F_p
    twin_prime_interval = (1000, 5000)
    # 单次试验出现零项时的最多重采样次数
    resample_limit = 10
    # 实验默认试验次数
    trials = 5
    # 非本原类型的缩小版探测尺寸
    nonprimitive_probe = 400

    @classmethod
    def load(cls, path):
        """
        读取 key=value 格式的覆盖文件
        :param path: 配置文件路径
        :return: 被覆盖的键列表
        """
        changed = []
        with open(path, "r", encoding="utf-8") as f:
            for lineno, raw in enumerate(f, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value")
                key, value = (part.strip() for part in line.split("=", 1))
                if key.startswith("_") or not hasattr(cls, key):
                    raise KeyError(f"{path}:{lineno}: unknown key {key!r}")
                try:
                    value = ast.literal_eval(value)
                except (ValueError, SyntaxError):
                    pass
                setattr(cls, key, value)
                changed.append(key)
        return changed

    @classmethod
    def snapshot(cls):
        # 报告头部打印的默认值
        return {
            k: v
            for k, v in vars(cls).items()
            if not k.startswith("_") and not callable(v) and not isinstance(v, classmethod)
        }
