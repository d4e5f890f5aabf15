#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/13 09:20
# @file:conftest.py
import pytest

from conf import Config
from sequences import somos, unit_sequence


@pytest.fixture(autouse=True)
def restore_config():
    saved = Config.snapshot()
    yield
    for key, value in saved.items():
        setattr(Config, key, value)


@pytest.fixture
def unit4():
    return unit_sequence(4).extend(-12, 20)


@pytest.fixture
def unit6():
    return unit_sequence(6).extend(0, 60)


@pytest.fixture
def unit7():
    return unit_sequence(7).extend(0, 96)


@pytest.fixture
def somos4_mod11():
    return somos((1, 1), (1, 2, 2, 1), 11)
