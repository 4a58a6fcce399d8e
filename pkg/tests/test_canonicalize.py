import pytest
from hypothesis import given, strategies as st

from icbdual.canonicalize import (
    BarData, CanonicalizationError, NoIntegralSolution, canonical_basis,
    check_bardata, solve_antisymmetric, topological_order,
)
from icbdual.ring import LaurentPoly

v = LaurentPoly.v()


def chain(r12):
    return BarData([1, 2], {1: {1: 1}, 2: {1: r12, 2: 1}})


def test_check_examples():
    assert check_bardata(BarData([1, 2, 3], {x: {x: 1} for x in [1, 2, 3]})).ok
    assert check_bardata(chain(v - v ** -1)).ok
    d = check_bardata(chain(v))
    assert d.unitriangular and d.integral and not d.involution


def test_solve_examples():
    assert canonical_basis(chain(v - v ** -1)).P[2] == {2: 1, 1: v}
    assert canonical_basis(chain(v ** 3 - v ** -3)).P[2] == {2: 1, 1: v ** 3}
    C = canonical_basis(BarData([1, 2], {1: {1: 1}, 2: {2: 1}}))
    assert C.P == {1: {1: 1}, 2: {2: 1}}


def test_rejects_bad_input():
    with pytest.raises(CanonicalizationError):
        canonical_basis(chain(v))
    with pytest.raises(CanonicalizationError):
        canonical_basis(BarData([1, 2], {1: {1: 1, 2: v - v ** -1}, 2: {2: 1}}))
    with pytest.raises(NoIntegralSolution):
        solve_antisymmetric(v)


def test_topological_order():
    R = {"a": {"a": 1}, "b": {"a": v, "b": 1}, "c": {"b": 1, "c": 1}}
    assert topological_order(["c", "b", "a"], R) == ["a", "b", "c"]
    with pytest.raises(Exception):
        topological_order(["a", "b"], {"a": {"b": 1}, "b": {"a": 1}})


@st.composite
def involutive_bardata(draw):
    # R = bar(P)^-1-free construction: choose a unitriangular P with vZ[v]
    # entries and set R = P bar(P)^-1, so R bar(R) = 1 and P is canonical
    n = draw(st.integers(1, 4))
    P = {}
    for x in range(n):
        col = {x: LaurentPoly.const(1)}
        for y in range(x):
            c = draw(st.dictionaries(st.integers(1, 3), st.integers(-2, 2), max_size=2))
            p = LaurentPoly(c)
            if p:
                col[y] = p
        P[x] = col
    # invert bar(P) (unitriangular) column by column
    Pb = {x: {y: c.bar() for y, c in col.items()} for x, col in P.items()}
    inv = {}
    for x in range(n):
        col = {x: LaurentPoly.const(1)}
        for y in range(x - 1, -1, -1):
            s = LaurentPoly()
            for z, c in col.items():
                if z != y:
                    s = s + Pb[z].get(y, LaurentPoly()) * c
            if s:
                col[y] = -s
        inv[x] = col
    R = {}
    for x in range(n):
        col = {}
        for z, c in inv[x].items():
            for y, a in P[z].items():
                col[y] = col.get(y, LaurentPoly()) + a * c
        R[x] = {y: c for y, c in col.items() if c}
    return BarData(list(range(n)), R), P


@given(involutive_bardata())
def test_recovers_planted_basis(data):
    D, P = data
    assert check_bardata(D).ok
    C = canonical_basis(D)
    assert C.P == P
    for x, col in C.P.items():
        for y, c in col.items():
            assert y == x or c.in_vZv()
