"""
The coideal subalgebras acting on V^{(x)m}.

Even parity (k = 2r+2), generators for i = 1..r and t:

    k_i = K_i K_{-i}^-1,  e_i = E_i + F_{-i} K_i^-1,  f_i = E_{-i} + K_{-i}^-1 F_i,
    t = E_0 + q F_0 K_0^-1 + kappa K_0^-1,   kappa = (p - p^-1)/(q - q^-1).

Odd parity (k = 2r+1), generators for i = 1/2, ..., r-1/2, with the same
formulas except

    e_{1/2} = E_{1/2} + p^-1 F_{-1/2} K_{1/2}^-1,
    f_{1/2} = E_{-1/2} + p K_{-1/2}^-1 F_{1/2}.

Throughout ``p = v^L0`` and ``q = v^L1``. The barred embedding of a generator
is obtained by applying the bar map of U (E, F fixed, K inverted, p and q
inverted) to its formula.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .qgroup import (
    EVEN, ODD, HALF, TensorSpace, Operator, op_generator, InvalidNode,
)
from .ring import RatFunc, vpow

__all__ = [
    "CoidealOps", "coideal_ops", "check_presentation", "presentation_failures",
    "zeta_fun", "zeta_table", "op_Tw0_V", "zeta_tilde", "mcT_V", "InvalidRank",
    "UnreachableWeight", "kappa", "coideal_delta_failures",
]


class InvalidRank(ValueError):
    pass


class UnreachableWeight(ValueError):
    pass


def kappa(L0: int, L1: int) -> RatFunc:
    p, q = vpow(L0), vpow(L1)
    return (p - p ** -1) / (q - q ** -1)


@dataclass
class CoidealOps:
    """
    Generator operators on V^{(x)m}. ``gens[name]`` is the operator of a
    generator, ``barred[name]`` the operator of its barred embedding, and
    ``names`` lists the generators in a fixed order. Names are ``"t"``,
    ``"e<i>"``, ``"f<i>"``, ``"k<i>"``, ``"kinv<i>"`` with ``i`` a node.
    """

    space: TensorSpace
    L0: int
    L1: int
    index: list
    gens: dict = field(default_factory=dict)
    barred: dict = field(default_factory=dict)

    @property
    def names(self) -> list[str]:
        return list(self.gens)

    def e(self, i):
        return self.gens[f"e{Fraction(i)}"]

    def f(self, i):
        return self.gens[f"f{Fraction(i)}"]

    def k(self, i):
        return self.gens[f"k{Fraction(i)}"]

    def kinv(self, i):
        return self.gens[f"kinv{Fraction(i)}"]

    @property
    def t(self):
        return self.gens["t"]

    def generating_names(self) -> list[str]:
        """Generators fixed by the coideal bar map (everything except k^{+-1})."""
        return [n for n in self.gens if not n.startswith("k")]

    def iota_bar_name(self, name: str) -> str:
        """Name of the generator that the coideal bar map sends ``name`` to."""
        if name.startswith("kinv"):
            return "k" + name[4:]
        if name.startswith("k"):
            return "kinv" + name[1:]
        return name

    def with_t(self, t: Operator) -> "CoidealOps":
        """A copy with the operator of t replaced (used for falsifiability controls)."""
        out = CoidealOps(self.space, self.L0, self.L1, self.index, dict(self.gens), dict(self.barred))
        out.gens["t"] = t
        return out


def _check_rank(parity: str, r: int) -> None:
    if parity not in (EVEN, ODD):
        raise InvalidRank(f"parity must be 'even' or 'odd', got {parity!r}")
    if r < 0 or (parity == ODD and r < 1):
        raise InvalidRank(f"rank r={r} is not allowed for parity {parity}")


_OPS_CACHE: dict = {}


def coideal_ops(parity: str, r: int, m: int, L0: int, L1: int) -> CoidealOps:
    _check_rank(parity, r)
    key = (parity, r, m, L0, L1)
    if key in _OPS_CACHE:
        return _OPS_CACHE[key]
    S = TensorSpace(parity, r, m)
    p, q = vpow(L0), vpow(L1)
    pi, qi = p ** -1, q ** -1

    def G(kind, i):
        return op_generator(kind, i, S, L1)

    if parity == EVEN:
        index = [Fraction(i) for i in range(1, r + 1)]
    else:
        index = [HALF + i for i in range(r)]
    ops = CoidealOps(S, L0, L1, index)
    if parity == EVEN:
        kap = kappa(L0, L1)
        ops.gens["t"] = G("E", 0) + (G("F", 0) @ G("Kinv", 0)).scale(q) + G("Kinv", 0).scale(kap)
        ops.barred["t"] = G("E", 0) + (G("F", 0) @ G("K", 0)).scale(qi) + G("K", 0).scale(kap.bar())
    for i in index:
        # the extra scalars only occur at i = 1/2 in odd parity
        a, b = (pi, p) if i == HALF and parity == ODD else (1, 1)
        ops.gens[f"e{i}"] = G("E", i) + (G("F", -i) @ G("Kinv", i)).scale(a)
        ops.gens[f"f{i}"] = G("E", -i) + (G("Kinv", -i) @ G("F", i)).scale(b)
        ops.gens[f"k{i}"] = G("K", i) @ G("Kinv", -i)
        ops.gens[f"kinv{i}"] = G("Kinv", i) @ G("K", -i)
        ops.barred[f"e{i}"] = G("E", i) + (G("F", -i) @ G("K", i)).scale(RatFunc.coerce(a).bar())
        ops.barred[f"f{i}"] = G("E", -i) + (G("K", -i) @ G("F", i)).scale(RatFunc.coerce(b).bar())
        ops.barred[f"k{i}"] = G("Kinv", i) @ G("K", -i)
        ops.barred[f"kinv{i}"] = G("K", i) @ G("Kinv", -i)
    _OPS_CACHE[key] = ops
    return ops


# presentation

def _cartan(i: Fraction, j: Fraction) -> int:
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


def presentation_failures(ops: CoidealOps) -> list[str]:
    """Names of the defining relations that fail as operator identities."""
    S = ops.space
    I = S.identity()
    q = vpow(ops.L1)
    p = vpow(ops.L0)
    qq = q + q ** -1
    bad = []

    def need(ok, name):
        if not ok:
            bad.append(name)

    idx = ops.index
    for i in idx:
        k, ki = ops.k(i), ops.kinv(i)
        need(k @ ki == I and ki @ k == I, f"k{i} k{i}^-1 = 1")
        for j in idx:
            need(k @ ops.k(j) == ops.k(j) @ k, f"k{i} k{j} = k{j} k{i}")
            c = _cartan(i, j) - _cartan(-i, j)
            need(k @ ops.e(j) @ ki == ops.e(j).scale(q ** c), f"k{i} e{j} k{i}^-1")
            need(k @ ops.f(j) @ ki == ops.f(j).scale(q ** -c), f"k{i} f{j} k{i}^-1")
            # in odd parity the pair (1/2, 1/2) is governed by the
            # inhomogeneous Serre relations instead
            if not (S.parity == ODD and i == j == HALF):
                lhs = ops.e(i) @ ops.f(j) - ops.f(j) @ ops.e(i)
                rhs = (k - ki).scale((q - q ** -1) ** -1) if i == j else S.zero()
                need(lhs == rhs, f"[e{i}, f{j}]")
            if abs(i - j) > 1:
                need(ops.e(i) @ ops.e(j) == ops.e(j) @ ops.e(i), f"e{i} e{j} = e{j} e{i}")
                need(ops.f(i) @ ops.f(j) == ops.f(j) @ ops.f(i), f"f{i} f{j} = f{j} f{i}")
            if abs(i - j) == 1:
                for x, y, nm in ((ops.e(i), ops.e(j), "e"), (ops.f(i), ops.f(j), "f")):
                    need(x @ x @ y + y @ x @ x == (x @ y @ x).scale(qq), f"Serre {nm}{i} {nm}{j}")
        if S.parity == EVEN:
            t = ops.t
            need(k @ t @ ki == t, f"k{i} t k{i}^-1 = t")
            if i > 1:
                need(ops.e(i) @ t == t @ ops.e(i), f"e{i} t = t e{i}")
                need(ops.f(i) @ t == t @ ops.f(i), f"f{i} t = t f{i}")
    if S.parity == EVEN and idx:
        t = ops.t
        for x, nm in ((ops.e(1), "e1"), (ops.f(1), "f1")):
            need(x @ x @ t + t @ x @ x == (x @ t @ x).scale(qq), f"Serre {nm} {nm} t")
            need(t @ t @ x + x @ t @ t == (t @ x @ t).scale(qq) + x, f"Serre t t {nm}")
    if S.parity == ODD:
        e, f = ops.e(HALF), ops.f(HALF)
        corr = ops.k(HALF).scale(p * q) + ops.kinv(HALF).scale((p * q) ** -1)
        need(e @ e @ f + f @ e @ e == (e @ f @ e - e @ corr).scale(qq), "Serre e1/2 e1/2 f1/2")
        need(f @ f @ e + e @ f @ f == (f @ e @ f - corr @ f).scale(qq), "Serre f1/2 f1/2 e1/2")
    return bad


def check_presentation(ops: CoidealOps) -> bool:
    return not presentation_failures(ops)


def coideal_delta_failures(ops: CoidealOps) -> list[str]:
    """
    Compare each generator on V^{(x)(m+1)} with its coproduct expanded as
    (coideal generator) (x) (element of U) over V^{(x)m} (x) V.
    """
    S, L0, L1 = ops.space, ops.L0, ops.L1
    big = coideal_ops(S.parity, S.r, S.m + 1, L0, L1)
    V = S.with_m(1)
    p, q = vpow(L0), vpow(L1)
    I = S.identity()

    def G(kind, i):
        return op_generator(kind, i, V, L1)

    bad = []
    for i in ops.index:
        a, b = (p ** -1, p) if i == HALF and S.parity == ODD else (1, 1)
        de = ops.e(i).kron(G("Kinv", i)) + I.kron(G("E", i)) + ops.kinv(i).kron(G("F", -i) @ G("Kinv", i)).scale(a)
        df = ops.f(i).kron(G("Kinv", -i)) + I.kron(G("E", -i)) + ops.k(i).kron(G("Kinv", -i) @ G("F", i)).scale(b)
        if de != big.e(i):
            bad.append(f"Delta(e{i})")
        if df != big.f(i):
            bad.append(f"Delta(f{i})")
    if S.parity == EVEN:
        dt = ops.t.kron(G("Kinv", 0)) + I.kron(G("E", 0) + (G("F", 0) @ G("Kinv", 0)).scale(q))
        if dt != big.t:
            bad.append("Delta(t)")
    return bad


# zeta, T_{w0} and the operator T on V

def _pair_root(S: TensorSpace, i: Fraction, lam) -> int:
    """(alpha_i, lam) for lam given by coordinates along S.labels."""
    return lam[S.label_pos[i - HALF]] - lam[S.label_pos[i + HALF]]


def _root_vec(S: TensorSpace, i: Fraction) -> tuple:
    out = [0] * S.k
    out[S.label_pos[i - HALF]] += 1
    out[S.label_pos[i + HALF]] -= 1
    return tuple(out)


def _zeta_step(S: TensorSpace, i: Fraction, mu, p, q) -> RatFunc:
    """The factor c with zeta(mu + alpha_i) = c zeta(mu)."""
    nu = tuple(a + b for a, b in zip(mu, _root_vec(S, i)))
    if S.parity == EVEN and i == 0:
        return -q
    if S.parity == ODD and i == HALF:
        return -p * q ** (_pair_root(S, i, nu) - _pair_root(S, -i, nu) - 1)
    if S.parity == ODD and i == -HALF:
        return -(p ** -1) * q ** (_pair_root(S, i, nu) - _pair_root(S, -i, mu) + 1)
    if i > 0:
        return -q ** (_pair_root(S, i, nu) - _pair_root(S, -i, nu))
    return -q ** (_pair_root(S, i, nu) - _pair_root(S, -i, mu))


@lru_cache(maxsize=None)
def zeta_table(parity: str, r: int, L0: int, L1: int, box: int = 1) -> dict:
    """
    zeta on all degree-one weights with coordinates in [-box, box + 1],
    propagated from the normalization along simple roots. Every edge of the
    region is checked, so the values are path independent.
    """
    _check_rank(parity, r)
    S = TensorSpace(parity, r, 1)
    p, q = vpow(L0), vpow(L1)
    start = S.wt((S.labels[0],))
    vals = {start: RatFunc.coerce(1)}
    lo, hi = -box, box + 1
    ok = lambda lam: sum(lam) == 1 and all(lo <= c <= hi for c in lam)
    roots = {i: _root_vec(S, i) for i in S.nodes}
    todo = deque([start])
    while todo:
        mu = todo.popleft()
        for i, a in roots.items():
            up = tuple(x + y for x, y in zip(mu, a))
            down = tuple(x - y for x, y in zip(mu, a))
            if ok(up):
                val = vals[mu] * _zeta_step(S, i, mu, p, q)
                if up in vals:
                    if vals[up] != val:
                        raise RuntimeError(f"zeta is path dependent at {up}")
                else:
                    vals[up] = val
                    todo.append(up)
            if ok(down):
                val = vals[mu] / _zeta_step(S, i, down, p, q)
                if down in vals:
                    if vals[down] != val:
                        raise RuntimeError(f"zeta is path dependent at {down}")
                else:
                    vals[down] = val
                    todo.append(down)
    return vals


def zeta_fun(parity: str, r: int, lam, L0: int, L1: int) -> RatFunc:
    """
    zeta at a weight ``lam`` (coordinates along the ascending labels, or a
    single label meaning eps_label). Normalized to 1 at the lowest label.

    >>> print(zeta_fun("even", 1, Fraction(1, 2), 0, 1))
    v^-2
    """
    S = TensorSpace(parity, r, 1)
    if not isinstance(lam, (tuple, list)):
        lam = S.wt((Fraction(lam),))
    lam = tuple(lam)
    table = zeta_table(parity, r, L0, L1)
    if lam not in table:
        raise UnreachableWeight(f"weight {lam} is outside the region where zeta is tabulated")
    return table[lam]


def op_Tw0_V(parity: str, r: int, L1: int) -> Operator:
    """The braid group element T_{w0} on V: u_a -> (-q)^(r - j) u_{-a}."""
    S = TensorSpace(parity, r, 1)
    q = vpow(L1)
    cols = {}
    for a in S.labels:
        j = a - HALF if parity == EVEN else a
        cols[(a,)] = {(-a,): (-q) ** int(r - j)}
    return Operator(cols)


def zeta_tilde(S: TensorSpace, L0: int, L1: int) -> Operator:
    if S.m != 1:
        raise ValueError("zeta is normalized on V only")
    return Operator({f: {f: zeta_fun(S.parity, S.r, S.wt(f), L0, L1)} for f in S.basis})


def mcT_V(parity: str, r: int, L0: int, L1: int, upsilonV: Operator) -> Operator:
    """The composite Upsilon o zeta~ o T_{w0} on V."""
    S = TensorSpace(parity, r, 1)
    return upsilonV @ zeta_tilde(S, L0, L1) @ op_Tw0_V(parity, r, L1)
