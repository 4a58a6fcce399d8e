"""
Bar-invariant unitriangular bases from a unitriangular bar matrix.

Given a free module with standard basis ``M_x`` (x in a linearly ordered index
list) and an anti-linear involution ``bar(M_x) = sum_y R[y, x] M_y`` with ``R``
unitriangular and Laurent, there is a unique basis ``C_x = sum_y P[y, x] M_y``
with ``bar(C_x) = C_x``, ``P[x, x] = 1`` and ``P[y, x]`` in ``v Z[v]`` for
``y != x``. Column by column, from ``x`` downwards,

    P[y, x] - bar(P[y, x]) = sum_{y < z <= x} R[y, z] bar(P[z, x])

and the left side determines ``P[y, x]`` as the positive-exponent part of the
right side.

Matrices are column dicts: ``R[x]`` maps row labels to entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .ring import LaurentPoly, NotLaurent, RatFunc, ONE, ZERO

__all__ = [
    "BarData", "CanonicalBasis", "Diagnostics", "check_bardata",
    "canonical_basis", "CanonicalizationError", "NoIntegralSolution",
    "solve_antisymmetric", "topological_order",
]


class CanonicalizationError(ValueError):
    pass


class NoIntegralSolution(CanonicalizationError):
    pass


def _laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, RatFunc):
        return x.to_laurent()
    return LaurentPoly.const(x)


@dataclass
class BarData:
    indices: list
    R: dict  # column label -> {row label: LaurentPoly}

    def __post_init__(self):
        self.indices = list(self.indices)
        self.pos = {x: k for k, x in enumerate(self.indices)}
        if len(self.pos) != len(self.indices):
            raise CanonicalizationError("duplicate index labels")
        self.R = {
            x: {y: _laurent(c) for y, c in self.R.get(x, {}).items() if c}
            for x in self.indices
        }

    def entry(self, y, x) -> LaurentPoly:
        return self.R[x].get(y, ZERO)


@dataclass
class Diagnostics:
    unitriangular: bool
    integral: bool
    involution: bool
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.unitriangular and self.integral and self.involution


def check_bardata(D: BarData) -> Diagnostics:
    problems = []
    unitri = True
    for x in D.indices:
        if D.entry(x, x) != ONE:
            unitri = False
            problems.append(f"diagonal entry at {x!r} is {D.entry(x, x)}")
        for y in D.R[x]:
            if y not in D.pos:
                unitri = False
                problems.append(f"row label {y!r} is not an index")
            elif D.pos[y] > D.pos[x]:
                unitri = False
                problems.append(f"entry ({y!r}, {x!r}) lies below the diagonal")
    integral = True
    for x in D.indices:
        for y, c in D.R[x].items():
            if not c.is_integral():
                integral = False
                problems.append(f"entry ({y!r}, {x!r}) = {c} has non-integer coefficients")
    # R * bar(R) == identity
    involution = True
    for x in D.indices:
        acc: dict = {}
        for z, rzx in D.R[x].items():
            b = rzx.bar()
            for y, ryz in D.R.get(z, {}).items():
                acc[y] = acc.get(y, ZERO) + ryz * b
        for y, c in acc.items():
            want = ONE if y == x else ZERO
            if c != want:
                involution = False
                problems.append(f"(R bar(R))[{y!r}, {x!r}] = {c}")
    return Diagnostics(unitri, integral, involution, problems)


def solve_antisymmetric(g: LaurentPoly) -> LaurentPoly:
    """The unique ``p`` in ``v Z[v]`` with ``p - bar(p) = g``."""
    if g + g.bar() != ZERO:
        raise NoIntegralSolution(f"{g} is not bar-antisymmetric")
    p = g.positive_part()
    if not p.in_vZv():
        raise NoIntegralSolution(f"{g} has non-integral coefficients")
    return p


@dataclass
class CanonicalBasis:
    indices: list
    P: dict  # column label -> {row label: LaurentPoly}

    def column(self, x) -> dict:
        return dict(self.P[x])


def canonical_basis(D: BarData, check: bool = True) -> CanonicalBasis:
    if check:
        diag = check_bardata(D)
        if not diag.ok:
            raise CanonicalizationError("; ".join(diag.problems[:5]))
    idx = D.indices
    P: dict = {}
    for kx, x in enumerate(idx):
        col = {x: ONE}
        for ky in range(kx - 1, -1, -1):
            y = idx[ky]
            g = ZERO
            for z, pzx in col.items():
                ryz = D.R[z].get(y)
                if ryz is not None and z != y:
                    g = g + ryz * pzx.bar()
            if g:
                p = solve_antisymmetric(g)
                if p:
                    col[y] = p
        P[x] = col
    out = CanonicalBasis(list(idx), P)
    if check:
        _verify_fixed(D, out)
    return out


def _verify_fixed(D: BarData, C: CanonicalBasis) -> None:
    for x in C.indices:
        acc: dict = {}
        for z, pzx in C.P[x].items():
            b = pzx.bar()
            for y, ryz in D.R[z].items():
                acc[y] = acc.get(y, ZERO) + ryz * b
        acc = {y: c for y, c in acc.items() if c}
        if acc != C.P[x]:
            raise CanonicalizationError(f"solved column {x!r} is not bar-invariant")


def topological_order(labels: Sequence[Hashable], R: dict, key=None) -> list:
    """
    A linear order in which every nonzero off-diagonal ``R[y][x]`` has ``y``
    before ``x``; ties broken by ``key``. Raises if the support has a cycle.
    """
    import heapq

    labels = list(labels)
    key = key or (lambda x: x)
    rank = {x: k for k, x in enumerate(sorted(labels, key=key))}
    succ = {x: [] for x in labels}
    indeg = {x: 0 for x in labels}
    for x in labels:
        for y, c in R.get(x, {}).items():
            if y != x and c:
                succ[y].append(x)
                indeg[x] += 1
    heap = [(rank[x], x) for x in labels if indeg[x] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        _, y = heapq.heappop(heap)
        out.append(y)
        for x in succ[y]:
            indeg[x] -= 1
            if indeg[x] == 0:
                heapq.heappush(heap, (rank[x], x))
    if len(out) != len(labels):
        raise CanonicalizationError("bar matrix support is not acyclic")
    return out
