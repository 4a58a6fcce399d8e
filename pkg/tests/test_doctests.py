import doctest
import importlib

import pytest

MODULES = ["ring", "weylb", "canonicalize", "hecke", "qgroup", "coideal", "linalg", "intertwiner", "schur", "cli"]


@pytest.mark.parametrize("name", MODULES)
def test_doctests(name):
    mod = importlib.import_module(f"icbdual.{name}")
    res = doctest.testmod(mod)
    assert res.failed == 0
