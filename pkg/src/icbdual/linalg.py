"""
Sparse exact linear algebra over Q and Q(v).

Vectors are dicts from arbitrary hashable keys to coefficients. Rank
questions over Q(v) are answered by evaluating at a rational point: the rank
at a point never exceeds the generic rank, so independence found at a point
is exact, and equalities of the form "point rank = upper bound" are
certificates.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .ring import RatFunc, PoleAtPoint

__all__ = [
    "Echelon", "rank_at_point", "solve_exact", "Inconsistent", "DEFAULT_POINTS",
    "eval_vector",
]

# rational points used for evaluation; far from the roots of unity where
# quantum integers vanish
DEFAULT_POINTS = (Fraction(7, 3), Fraction(-11, 5), Fraction(13, 4))


class Inconsistent(ValueError):
    pass


def eval_vector(vec: dict, x: Fraction) -> dict:
    out = {}
    for k, c in vec.items():
        val = c.evaluate(x) if isinstance(c, RatFunc) else Fraction(c)
        if val:
            out[k] = val
    return out


class Echelon:
    """
    Incremental row echelon form over Q. ``add(vec)`` reduces ``vec`` against
    the stored rows and keeps it when it is independent.
    """

    def __init__(self):
        self.rows: list[tuple[Hashable, dict]] = []  # (pivot, row with row[pivot] = 1)
        self.pivots: dict = {}

    def reduce(self, vec: dict) -> dict:
        vec = {k: c for k, c in vec.items() if c}
        for piv, row in self.rows:
            c = vec.get(piv)
            if c:
                for k, a in row.items():
                    s = vec.get(k, 0) - c * a
                    if s:
                        vec[k] = s
                    else:
                        vec.pop(k, None)
        return vec

    def add(self, vec: dict) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        piv = min(vec, key=_sort_key)
        inv = Fraction(1) / vec[piv]
        row = {k: c * inv for k, c in vec.items()}
        # keep earlier rows reduced at the new pivot so reduce() stays one pass
        for n, (p, r) in enumerate(self.rows):
            c = r.get(piv)
            if c:
                for k, a in row.items():
                    s = r.get(k, 0) - c * a
                    if s:
                        r[k] = s
                    else:
                        r.pop(k, None)
        self.rows.append((piv, row))
        self.pivots[piv] = len(self.rows) - 1
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _sort_key(k):
    return repr(k)


def rank_at_point(vectors: Iterable[dict], x: Fraction) -> int:
    E = Echelon()
    for v in vectors:
        E.add(eval_vector(v, x))
    return E.rank


def _pick(rows: Sequence[dict], rhs: Sequence, ncols: int, x: Fraction):
    """Rows and columns of a maximal nonsingular minor at the point ``x``,
    columns chosen greedily in index order."""
    num = [eval_vector(r, x) for r in rows]
    # column pivots: greedy over columns using the transpose
    colvecs = [{i: row[j] for i, row in enumerate(num) if j in row} for j in range(ncols)]
    E = Echelon()
    cols = [j for j in range(ncols) if E.add(colvecs[j])]
    E = Echelon()
    chosen = []
    for i, row in enumerate(num):
        restricted = {j: row[j] for j in cols if j in row}
        if E.add(restricted):
            chosen.append(i)
            if len(chosen) == len(cols):
                break
    return chosen, cols


def solve_exact(rows: Sequence[dict], rhs: Sequence, ncols: int,
                points: Sequence[Fraction] = DEFAULT_POINTS) -> list:
    """
    One solution of ``rows . x = rhs`` over Q(v), with ``rows[i]`` a dict
    column -> RatFunc. Free columns (later in index order) are set to 0.
    The returned solution is checked against every equation exactly;
    Inconsistent is raised if that fails.
    """
    rhs = [RatFunc.coerce(b) for b in rhs]
    if ncols == 0:
        if any(rhs):
            raise Inconsistent("nonzero right-hand side with no unknowns")
        return []
    last = None
    for x in points:
        try:
            ri, cols = _pick(rows, rhs, ncols, x)
        except PoleAtPoint as exc:
            last = exc
            continue
        sol = _gauss([rows[i] for i in ri], [rhs[i] for i in ri], cols, ncols)
        if _residual_zero(rows, rhs, sol):
            return sol
        last = Inconsistent("solution from a maximal minor does not satisfy the full system")
    raise Inconsistent(str(last))


def _residual_zero(rows, rhs, sol) -> bool:
    for row, b in zip(rows, rhs):
        acc = RatFunc.coerce(0)
        for j, a in row.items():
            if sol[j]:
                acc = acc + a * sol[j]
        if acc != b:
            return False
    return True


def _gauss(rows: list[dict], rhs: list, cols: list[int], ncols: int) -> list:
    """Solve the square system on ``cols`` exactly by Gaussian elimination."""
    n = len(cols)
    A = [[RatFunc.coerce(r.get(j, 0)) for j in cols] + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise Inconsistent("chosen minor is singular over Q(v)")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c] ** -1
        A[c] = [a * inv if a else a for a in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b if b else a for a, b in zip(A[i], A[c])]
    sol = [RatFunc.coerce(0)] * ncols
    for k, j in enumerate(cols):
        sol[j] = A[k][n]
    return sol
