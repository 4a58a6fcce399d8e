"""
U_q(sl_k) acting on tensor powers of its natural module, for k = 2r+2
("even": half-integer labels, integer nodes) and k = 2r+1 ("odd": integer
labels, half-integer nodes).

On V the Chevalley generators act by

    E_i u_{i+1/2} = u_{i-1/2},   F_i u_{i-1/2} = u_{i+1/2},
    K_i u_{i-1/2} = q u_{i-1/2}, K_i u_{i+1/2} = q^-1 u_{i+1/2},

and on V^{(x)m} through the comultiplication

    Delta(E_i) = 1 (x) E_i + E_i (x) K_i^-1,
    Delta(F_i) = F_i (x) 1 + K_i (x) F_i,
    Delta(K_i) = K_i (x) K_i,

with ``q = v^L(s1)``. Tensor basis vectors ``M_f`` are keyed by the tuple
``f`` of labels (``Fraction`` entries).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Sequence

from .ring import RatFunc, vpow, ZERO as LZERO

__all__ = [
    "TensorSpace", "Operator", "ModuleVector", "AntiLinearOperator",
    "op_generator", "op_word", "wt", "theta", "order_leq", "root_coords",
    "psi_bar", "PsiBar", "op_hecke_A", "validate_psi", "InvalidNode", "ConventionValidationFailed",
    "as_label", "format_index", "EVEN", "ODD",
]

EVEN = "even"
ODD = "odd"
HALF = Fraction(1, 2)


class InvalidNode(ValueError):
    pass


class ConventionValidationFailed(RuntimeError):
    pass


def as_label(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _fmt_label(a: Fraction) -> str:
    return str(a)


def format_index(f: Sequence[Fraction]) -> str:
    return "(" + ", ".join(_fmt_label(a) for a in f) + ")"


class TensorSpace:
    """Labels, nodes and the M_f basis of V^{(x)m}."""

    def __init__(self, parity: str, r: int, m: int):
        if parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
        if r < 0 or (parity == ODD and r < 1):
            raise ValueError(f"invalid rank r={r} for parity {parity}")
        if m < 1:
            raise ValueError("m must be >= 1")
        self.parity, self.r, self.m = parity, r, m
        if parity == EVEN:
            self.labels = sorted([HALF + j for j in range(r + 1)] + [-HALF - j for j in range(r + 1)])
            self.nodes = [Fraction(i) for i in range(-r, r + 1)]
        else:
            self.labels = [Fraction(j) for j in range(-r, r + 1)]
            self.nodes = [Fraction(2 * i - 1, 2) for i in range(-r + 1, r + 1)]
        self.k = len(self.labels)
        self.label_pos = {a: n for n, a in enumerate(self.labels)}
        self.basis = [tuple(f) for f in product(self.labels, repeat=m)]
        self.dim = len(self.basis)

    def key(self):
        return (self.parity, self.r, self.m)

    def __eq__(self, other):
        return isinstance(other, TensorSpace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"TensorSpace({self.parity!r}, r={self.r}, m={self.m})"

    def node(self, i) -> Fraction:
        i = as_label(i)
        if i not in self.nodes:
            raise InvalidNode(f"{i} is not a node for {self.parity} r={self.r}")
        return i

    def index(self, f: Iterable) -> tuple:
        f = tuple(as_label(a) for a in f)
        if len(f) != self.m or any(a not in self.label_pos for a in f):
            raise ValueError(f"{f} is not an index word of {self}")
        return f

    def with_m(self, m: int) -> "TensorSpace":
        return TensorSpace(self.parity, self.r, m)

    def identity(self) -> "Operator":
        one = RatFunc.coerce(1)
        return Operator({f: {f: one} for f in self.basis})

    def zero(self) -> "Operator":
        return Operator({})

    # weights

    def wt(self, f: Sequence[Fraction]) -> tuple[int, ...]:
        out = [0] * self.k
        for a in f:
            out[self.label_pos[a]] += 1
        return tuple(out)

    def theta(self, lam: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.k
        for a, n in zip(self.labels, lam):
            out[self.label_pos[-a]] -= n
        return tuple(out)

    def root_coords(self, delta: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of a zero-sum weight in the simple roots, node by node."""
        if sum(delta) != 0:
            raise ValueError("weight is not in the root lattice")
        out, s = [], 0
        for d in delta[:-1]:
            s += d
            out.append(s)
        return tuple(out)

    def height(self, delta: Sequence[int]) -> int:
        return sum(self.root_coords(delta))

    def order_leq(self, g, f) -> bool:
        d = tuple(a - b for a, b in zip(self.wt(f), self.wt(g)))
        if self.theta(d) != d:
            return False
        return all(c >= 0 for c in self.root_coords(d))


def wt(space: TensorSpace, f) -> tuple[int, ...]:
    return space.wt(f)


def theta(space: TensorSpace, lam) -> tuple[int, ...]:
    return space.theta(lam)


def root_coords(space: TensorSpace, delta) -> tuple[int, ...]:
    return space.root_coords(delta)


def order_leq(space: TensorSpace, g, f) -> bool:
    return space.order_leq(g, f)


class ModuleVector:
    """Sparse vector ``sum terms[f] M_f`` with RatFunc coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {f: RatFunc.coerce(c) for f, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, f) -> "ModuleVector":
        return cls({tuple(f): 1})

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        acc = dict(self.terms)
        for f, c in other.terms.items():
            s = acc.get(f)
            acc[f] = c if s is None else s + c
        return ModuleVector(acc)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ModuleVector":
        c = RatFunc.coerce(c)
        return ModuleVector({f: a * c for f, a in self.terms.items()})

    def bar(self) -> "ModuleVector":
        return ModuleVector({f: c.bar() for f, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*M{format_index(f)}" for f, c in sorted(self.terms.items()))

    __repr__ = __str__


def _acc(col: dict, key, c) -> None:
    s = col.get(key)
    s = c if s is None else s + c
    if s:
        col[key] = s
    else:
        col.pop(key, None)


class Operator:
    """
    A linear map given column-wise: ``cols[f]`` is the image of ``M_f``.

    ``A @ B`` is the composition "first B, then A".
    """

    __slots__ = ("cols",)

    def __init__(self, cols: dict | None = None):
        out = {}
        for f, col in (cols or {}).items():
            c = {g: RatFunc.coerce(a) for g, a in col.items() if a}
            if c:
                out[f] = c
        self.cols = out

    @classmethod
    def _raw(cls, cols: dict) -> "Operator":
        obj = object.__new__(cls)
        obj.cols = cols
        return obj

    def column(self, f) -> dict:
        return self.cols.get(f, {})

    def entry(self, g, f) -> RatFunc:
        return self.cols.get(f, {}).get(g, RatFunc.coerce(0))

    def apply(self, vec: ModuleVector | dict) -> ModuleVector:
        terms = vec.terms if isinstance(vec, ModuleVector) else vec
        out: dict = {}
        for f, c in terms.items():
            for g, a in self.cols.get(f, {}).items():
                _acc(out, g, a * c)
        return ModuleVector(out)

    __call__ = apply

    def __matmul__(self, other: "Operator") -> "Operator":
        out = {}
        for f, col in other.cols.items():
            res: dict = {}
            for g, a in col.items():
                for h, b in self.cols.get(g, {}).items():
                    _acc(res, h, b * a)
            if res:
                out[f] = res
        return Operator._raw(out)

    def __add__(self, other: "Operator") -> "Operator":
        out = {f: dict(col) for f, col in self.cols.items()}
        for f, col in other.cols.items():
            tgt = out.setdefault(f, {})
            for g, a in col.items():
                _acc(tgt, g, a)
            if not tgt:
                del out[f]
        return Operator._raw(out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + other.scale(-1)

    def scale(self, c) -> "Operator":
        c = RatFunc.coerce(c)
        if not c:
            return Operator._raw({})
        return Operator._raw({f: {g: a * c for g, a in col.items()} for f, col in self.cols.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def map_entries(self, fn: Callable) -> "Operator":
        return Operator({f: {g: fn(a) for g, a in col.items()} for f, col in self.cols.items()})

    def bar(self) -> "Operator":
        """Entrywise bar of the matrix."""
        return self.map_entries(lambda a: a.bar())

    def is_zero(self) -> bool:
        return not self.cols

    def __eq__(self, other):
        if not isinstance(other, Operator):
            return NotImplemented
        return self.cols == other.cols

    def entries(self):
        for f, col in self.cols.items():
            for g, a in col.items():
                yield g, f, a

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def all_laurent(self) -> bool:
        return all(a.is_laurent() for _, _, a in self.entries())

    def kron(self, other: "Operator") -> "Operator":
        """``self (x) other`` acting on concatenated index words."""
        out = {}
        for f1, c1 in self.cols.items():
            for f2, c2 in other.cols.items():
                col = {}
                for g1, a in c1.items():
                    for g2, b in c2.items():
                        col[g1 + g2] = a * b
                out[f1 + f2] = col
        return Operator._raw(out)

    def evaluate(self, x) -> dict:
        """Numeric matrix (dict of dicts of Fractions) at ``v = x``."""
        return {f: {g: a.evaluate(x) for g, a in col.items()} for f, col in self.cols.items()}

    def __repr__(self):
        return f"Operator(nnz={self.nnz()})"


def op_word(ops: Sequence[Operator], space: TensorSpace | None = None) -> Operator:
    """Compose ``ops`` as written: ``op_word([A, B]) = A @ B`` (B acts first)."""
    if not ops:
        if space is None:
            raise ValueError("empty word needs a space for the identity")
        return space.identity()
    out = ops[-1]
    for A in reversed(ops[:-1]):
        out = A @ out
    return out


def _pair(space: TensorSpace, i: Fraction, a: Fraction) -> int:
    """(alpha_i, eps_a)."""
    if a == i - HALF:
        return 1
    if a == i + HALF:
        return -1
    return 0


def op_generator(kind: str, i, space: TensorSpace, L1: int) -> Operator:
    """Chevalley generator ``kind`` in {E, F, K, Kinv} at node ``i`` on V^{(x)m}."""
    i = space.node(i)
    lo, hi = i - HALF, i + HALF
    cols = {}
    for f in space.basis:
        pairs = [_pair(space, i, a) for a in f]
        if kind in ("K", "Kinv"):
            e = sum(pairs) * (1 if kind == "K" else -1)
            cols[f] = {f: vpow(L1 * e)}
        elif kind == "E":
            col = {}
            for j, a in enumerate(f):
                if a == hi:
                    g = f[:j] + (lo,) + f[j + 1:]
                    col[g] = vpow(-L1 * sum(pairs[j + 1:]))
            cols[f] = col
        elif kind == "F":
            col = {}
            for j, a in enumerate(f):
                if a == lo:
                    g = f[:j] + (hi,) + f[j + 1:]
                    col[g] = vpow(L1 * sum(pairs[:j]))
            cols[f] = col
        else:
            raise ValueError(f"unknown generator kind {kind!r}")
    return Operator(cols)


class AntiLinearOperator:
    """``u -> A(bar(u))`` for a matrix ``A``."""

    def __init__(self, matrix: Operator):
        self.matrix = matrix

    def apply(self, vec: ModuleVector) -> ModuleVector:
        return self.matrix.apply(vec.bar())

    __call__ = apply

    def compose_linear_left(self, T: Operator) -> "AntiLinearOperator":
        """``T o self``."""
        return AntiLinearOperator(T @ self.matrix)

    def square_matrix(self) -> Operator:
        """Matrix of ``self o self`` (a linear map)."""
        return self.matrix @ self.matrix.bar()

    def conj(self, X: Operator) -> Operator:
        """The linear map ``self o X o self^-1`` assuming ``self`` is an involution."""
        return self.matrix @ X.bar() @ self.matrix.bar()


# type A Hecke action on V^{(x)m} and the bar involution

def op_hecke_A(space: TensorSpace, i: int, L1: int) -> Operator:
    """
    Right action of ``H_i`` (1 <= i < m) on tensor space:

        M_f H_i = q^-1 M_f                    if f(i) = f(i+1)
                  M_{f s_i}                   if f(i) < f(i+1)
                  M_{f s_i} + (q^-1 - q) M_f  if f(i) > f(i+1)
    """
    if not 1 <= i < space.m:
        raise ValueError(f"s_{i} is not a type A generator for m={space.m}")
    q = vpow(L1)
    qinv = q ** -1
    cols = {}
    for f in space.basis:
        a, b = f[i - 1], f[i]
        if a == b:
            cols[f] = {f: qinv}
            continue
        g = f[:i - 1] + (b, a) + f[i + 1:]
        cols[f] = {g: RatFunc.coerce(1)} if a < b else {g: RatFunc.coerce(1), f: qinv - q}
    return Operator(cols)


def _descent(f) -> int | None:
    for i in range(1, len(f)):
        if f[i - 1] > f[i]:
            return i
    return None


@dataclass
class PsiBar:
    """The bar involution ``psi`` on V^{(x)m}, stored as an anti-linear matrix."""

    space: TensorSpace
    L1: int
    op: AntiLinearOperator
    problems: list

    def diagnostics(self) -> dict:
        return {"construction": "hecke", "validated": not self.problems,
                "problems": self.problems}


def validate_psi(space: TensorSpace, L1: int, B: AntiLinearOperator) -> list[str]:
    """Empty list iff B is an involution intertwining E_i, F_i with themselves
    and K_i with K_i^-1."""
    problems = []
    if B.square_matrix() != space.identity():
        problems.append("psi^2 != id")
    for i in space.nodes:
        for kind, image in (("E", "E"), ("F", "F"), ("K", "Kinv")):
            X = op_generator(kind, i, space, L1)
            Y = op_generator(image, i, space, L1)
            # B(X u) = Y B(u), i.e. A bar(X) = Y A
            if B.matrix @ X.bar() != Y @ B.matrix:
                problems.append(f"psi does not intertwine {kind}_{i}")
    return problems


_PSI_CACHE: dict = {}


def psi_bar(space: TensorSpace, L1: int, validate: bool = True) -> PsiBar:
    """
    The anti-linear involution on V^{(x)m} compatible with the quantum group
    bar map. Weakly increasing ``M_f`` are fixed and
    ``psi(M_f H_i) = psi(M_f) bar(H_i)``, so it is computed by sorting ``f``.
    Raises ConventionValidationFailed if the result fails validation.

    >>> S = TensorSpace("even", 0, 2)
    >>> h = Fraction(1, 2)
    >>> print(psi_bar(S, 1).op(ModuleVector.basis((h, -h))))
    (-v^-1 + v)*M(-1/2, 1/2) + (1)*M(1/2, -1/2)
    """
    key = (space.key(), L1)
    if key in _PSI_CACHE:
        return _PSI_CACHE[key]
    q = vpow(L1)
    shift = q - q ** -1
    R = {i: op_hecke_A(space, i, L1) for i in range(1, space.m)}
    cols: dict = {}

    def col(f):
        got = cols.get(f)
        if got is not None:
            return got
        i = _descent(f)
        if i is None:
            got = {f: RatFunc.coerce(1)}
        else:
            g = f[:i - 1] + (f[i], f[i - 1]) + f[i + 1:]
            v = R[i].apply(col(g)) + ModuleVector(col(g)).scale(shift)
            got = v.terms
        cols[f] = got
        return got

    for f in space.basis:
        col(f)
    B = AntiLinearOperator(Operator(cols))
    problems = validate_psi(space, L1, B) if validate else []
    if problems:
        raise ConventionValidationFailed("; ".join(problems[:3]))
    out = PsiBar(space, L1, B, problems)
    _PSI_CACHE[key] = out
    return out
