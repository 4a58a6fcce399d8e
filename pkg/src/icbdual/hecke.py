"""
The type-B Hecke algebra specialized by a weight function, and its parabolic
modules ``eta_J H``.

Parameters are ``q_0 = v^L(s0)`` and ``q_i = v^L(s1)`` (i >= 1); the quadratic
relation is ``(H_i - q_i^-1)(H_i + q_i) = 0``. All products are right
multiplications by generators, matching the right action on tensor space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .canonicalize import BarData, CanonicalBasis, canonical_basis, CanonicalizationError
from .ring import RatFunc, LaurentPoly, vpow, ZERO
from .weylb import (
    SignedPerm, WeightFunction, coset_reps, longest_element, parabolic_subgroup,
    word_to_str,
)

__all__ = [
    "HeckeElt", "HeckeAlgebra", "ParabolicElt", "ParabolicModule",
    "h_mul_gen", "h_bar", "eta", "par_act_gen", "par_bar", "lbasis",
    "CanonicalizationFailed", "basis_to_json",
]


class CanonicalizationFailed(CanonicalizationError):
    pass


def _clean(terms: dict) -> dict:
    return {k: c for k, c in terms.items() if c}


def _addto(acc: dict, k, c) -> None:
    s = acc.get(k)
    s = c if s is None else s + c
    if s:
        acc[k] = s
    else:
        acc.pop(k, None)


@dataclass(frozen=True)
class HeckeElt:
    """Sparse element ``sum terms[w] H_w``."""

    m: int
    terms: dict = field(hash=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", {w: RatFunc.coerce(c) for w, c in self.terms.items() if c})

    @classmethod
    def basis(cls, w: SignedPerm) -> "HeckeElt":
        return cls(w.m, {w: 1})

    @classmethod
    def one(cls, m: int) -> "HeckeElt":
        return cls.basis(SignedPerm.identity(m))

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            _addto(acc, w, c)
        return HeckeElt(self.m, acc)

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + other.scale(-1)

    def scale(self, c) -> "HeckeElt":
        c = RatFunc.coerce(c)
        return HeckeElt(self.m, {w: a * c for w, a in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (t[0].length(), t[0].window))
        return " + ".join(f"({c})*H[{w.word_str()}]" for w, c in items)


class HeckeAlgebra:
    """Multiplication and bar involution for a fixed weight function."""

    def __init__(self, L: WeightFunction):
        self.L = L
        self.m = L.m
        self._bar_cache: dict[SignedPerm, HeckeElt] = {}

    def q(self, i: int) -> RatFunc:
        return vpow(self.L.gen(i))

    def mul_gen(self, h: HeckeElt, i: int) -> HeckeElt:
        qi = self.q(i)
        corr = qi ** -1 - qi
        acc: dict = {}
        for w, c in h.terms.items():
            ws = w.apply_gen(i)
            _addto(acc, ws, c)
            if ws.length() < w.length():
                _addto(acc, w, c * corr)
        return HeckeElt(self.m, acc)

    def mul_word(self, h: HeckeElt, word: Iterable[int]) -> HeckeElt:
        for i in word:
            h = self.mul_gen(h, i)
        return h

    def mul(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        out = HeckeElt(self.m, {})
        for w, c in b.terms.items():
            out = out + self.mul_word(a, w.reduced_word()).scale(c)
        return out

    def bar_gen_mul(self, h: HeckeElt, i: int) -> HeckeElt:
        """``h * bar(H_i)`` with ``bar(H_i) = H_i + (q_i - q_i^-1)``."""
        qi = self.q(i)
        return self.mul_gen(h, i) + h.scale(qi - qi ** -1)

    def bar_basis(self, w: SignedPerm) -> HeckeElt:
        got = self._bar_cache.get(w)
        if got is None:
            got = HeckeElt.one(self.m)
            for i in w.reduced_word():
                got = self.bar_gen_mul(got, i)
            self._bar_cache[w] = got
        return got

    def bar(self, h: HeckeElt) -> HeckeElt:
        out = HeckeElt(self.m, {})
        for w, c in h.terms.items():
            out = out + self.bar_basis(w).scale(c.bar())
        return out

    def eta(self, J: Iterable[int]) -> HeckeElt:
        J = sorted(set(J))
        wJ = longest_element(J, self.m)
        top = self.L.value(wJ)
        return HeckeElt(self.m, {x: vpow(top - self.L.value(x)) for x in parabolic_subgroup(J, self.m)})


def h_mul_gen(h: HeckeElt, i: int, L: WeightFunction) -> HeckeElt:
    return HeckeAlgebra(L).mul_gen(h, i)


def h_bar(h: HeckeElt, L: WeightFunction) -> HeckeElt:
    return HeckeAlgebra(L).bar(h)


def eta(J: Iterable[int], L: WeightFunction) -> HeckeElt:
    return HeckeAlgebra(L).eta(J)


@dataclass(frozen=True)
class ParabolicElt:
    """``sum terms[w] eta_J H_w`` with every ``w`` a minimal coset representative."""

    J: frozenset
    m: int
    terms: dict = field(hash=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "J", frozenset(self.J))
        object.__setattr__(self, "terms", {w: RatFunc.coerce(c) for w, c in self.terms.items() if c})
        reps = set(coset_reps(self.J, self.m))
        bad = [w for w in self.terms if w not in reps]
        if bad:
            raise ValueError(f"{bad[0]} is not a minimal coset representative for J={sorted(self.J)}")

    def __add__(self, other: "ParabolicElt") -> "ParabolicElt":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            _addto(acc, w, c)
        return ParabolicElt(self.J, self.m, acc)

    def scale(self, c) -> "ParabolicElt":
        c = RatFunc.coerce(c)
        return ParabolicElt(self.J, self.m, {w: a * c for w, a in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ParabolicElt):
            return NotImplemented
        return (self.J, self.m) == (other.J, other.m) and self.terms == other.terms

    def __hash__(self):
        return hash((self.J, self.m, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (t[0].length(), t[0].window))
        return " + ".join(f"({c})*eta H[{w.word_str()}]" for w, c in items)


class ParabolicModule:
    """The right module ``eta_J H`` with basis ``eta_J H_w``, w in ^J W."""

    def __init__(self, J: Iterable[int], L: WeightFunction):
        self.J = frozenset(J)
        self.L = L
        self.m = L.m
        self.H = HeckeAlgebra(L)
        self.reps = coset_reps(self.J, self.m)
        self._repset = set(self.reps)
        self._bar_cache: dict[SignedPerm, ParabolicElt] = {}

    def basis(self, w: SignedPerm) -> ParabolicElt:
        return ParabolicElt(self.J, self.m, {w: 1})

    def act_gen(self, x: ParabolicElt, j: int) -> ParabolicElt:
        qj = self.H.q(j)
        qinv = qj ** -1
        acc: dict = {}
        for w, c in x.terms.items():
            ws = w.apply_gen(j)
            if ws not in self._repset:
                _addto(acc, w, c * qinv)
            elif ws.length() > w.length():
                _addto(acc, ws, c)
            else:
                _addto(acc, ws, c)
                _addto(acc, w, c * (qinv - qj))
        return ParabolicElt(self.J, self.m, acc)

    def bar_basis(self, w: SignedPerm) -> ParabolicElt:
        got = self._bar_cache.get(w)
        if got is None:
            got = self.basis(SignedPerm.identity(self.m))
            for i in w.reduced_word():
                qi = self.H.q(i)
                got = self.act_gen(got, i) + got.scale(qi - qi ** -1)
            self._bar_cache[w] = got
        return got

    def bar(self, x: ParabolicElt) -> ParabolicElt:
        out = ParabolicElt(self.J, self.m, {})
        for w, c in x.terms.items():
            out = out + self.bar_basis(w).scale(c.bar())
        return out

    def bar_data(self, order: list | None = None) -> BarData:
        order = list(order) if order is not None else list(self.reps)
        R = {}
        for w in order:
            col = {}
            for y, c in self.bar_basis(w).terms.items():
                col[y] = c.to_laurent()
            R[w] = col
        return BarData(order, R)

    def lbasis(self, order: list | None = None) -> dict[SignedPerm, ParabolicElt]:
        D = self.bar_data(order)
        try:
            C: CanonicalBasis = canonical_basis(D)
        except CanonicalizationError as exc:
            raise CanonicalizationFailed(str(exc)) from exc
        return {w: ParabolicElt(self.J, self.m, C.P[w]) for w in D.indices}

    def to_hecke(self, x: ParabolicElt) -> HeckeElt:
        """Expand ``sum c_w eta_J H_w`` in the ``H_w`` basis of the whole algebra."""
        e = self.H.eta(self.J)
        out = HeckeElt(self.m, {})
        for w, c in x.terms.items():
            out = out + self.H.mul_word(e, w.reduced_word()).scale(c)
        return out


def par_act_gen(x: ParabolicElt, j: int, L: WeightFunction) -> ParabolicElt:
    return ParabolicModule(x.J, L).act_gen(x, j)


def par_bar(x: ParabolicElt, L: WeightFunction) -> ParabolicElt:
    return ParabolicModule(x.J, L).bar(x)


def lbasis(J: Iterable[int], L: WeightFunction) -> dict[SignedPerm, ParabolicElt]:
    return ParabolicModule(J, L).lbasis()


def basis_to_json(basis: dict[SignedPerm, ParabolicElt]) -> list[dict]:
    """Records ``{"w": "s0 s1", "expansion": [["e", "v^2"], ...]}``."""
    out = []
    for w in sorted(basis, key=lambda w: (w.length(), w.window)):
        terms = sorted(basis[w].terms.items(), key=lambda t: (t[0].length(), t[0].window))
        out.append({
            "w": w.word_str(),
            "expansion": [[y.word_str(), str(c)] for y, c in terms],
        })
    return out
