"""
The duality layer on V^{(x)m}: the right Hecke action, the decomposition of
index words into orbits of dominant words, the two bases (transported
L-basis and canonical basis of psi_iota), and the verification suites.

Every verifier returns a report ``{"check", "params", "status", "details"}``
with status "pass" or "fail".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .canonicalize import BarData, CanonicalizationError, canonical_basis, topological_order
from .coideal import CoidealOps, coideal_ops, check_presentation, mcT_V, presentation_failures
from .hecke import ParabolicModule
from .intertwiner import psi_iota, upsilon
from .linalg import DEFAULT_POINTS, Echelon, eval_vector
from .qgroup import (
    EVEN, ODD, ModuleVector, Operator, TensorSpace, format_index, op_generator,
    op_hecke_A,
)
from .ring import LaurentPoly, RatFunc, vpow
from .weylb import SignedPerm, WeightFunction, act_perm, coset_reps

__all__ = [
    "Params", "DominantIndex", "TensorBasis", "hecke_ops", "hecke_word_op",
    "dominant_indices", "orbit_map", "lbasis_tensor", "icb_tensor",
    "verify_equality", "verify_commutation", "verify_samebar",
    "verify_h0_lemma", "verify_presentation", "centralizer_evidence",
    "hecke_relation_failures", "WordcapInsufficient", "report",
    "DEFAULT_GRID", "order_violations", "psi_iota_matrix",
]

DEFAULT_GRID = [(1, 1), (0, 1), (2, 1), (-1, 1), (3, 2)]


class WordcapInsufficient(RuntimeError):
    pass


@dataclass(frozen=True)
class Params:
    """Job parameters; ``L1`` is forced to 1 when ``m = 1``."""

    parity: str
    r: int
    m: int
    L0: int
    L1: int

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.r < 0 or (self.parity == ODD and self.r < 1):
            raise ValueError(f"rank r={self.r} is not allowed for parity {self.parity}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.m == 1:
            object.__setattr__(self, "L1", 1)

    @property
    def wf(self) -> WeightFunction:
        return WeightFunction(self.L0, self.L1, self.m)

    @property
    def space(self) -> TensorSpace:
        return TensorSpace(self.parity, self.r, self.m)

    def as_dict(self) -> dict:
        return {"parity": self.parity, "r": self.r, "m": self.m, "L0": self.L0, "L1": self.L1}


def report(check: str, params, ok: bool, details) -> dict:
    p = params.as_dict() if isinstance(params, Params) else dict(params)
    return {"check": check, "params": p, "status": "pass" if ok else "fail", "details": details}


# Hecke action

def _op_hecke_0(S: TensorSpace, L0: int) -> Operator:
    p = vpow(L0)
    cols = {}
    for f in S.basis:
        g = (-f[0],) + f[1:]
        if f[0] == 0:
            cols[f] = {f: p ** -1}
        elif f[0] > 0:
            cols[f] = {g: 1}
        else:
            cols[f] = {g: 1, f: p ** -1 - p}
    return Operator(cols)


def hecke_ops(P: Params) -> dict[int, Operator]:
    """``R[j]`` is the operator ``u -> u . H_j`` on V^{(x)m}."""
    S = P.space
    R = {0: _op_hecke_0(S, P.L0)}
    for j in range(1, P.m):
        R[j] = op_hecke_A(S, j, P.L1)
    return R


def hecke_word_op(R: dict, word, S: TensorSpace) -> Operator:
    """Operator of ``u -> u . H_{j1} ... H_{jn}`` (a right action)."""
    out = S.identity()
    for j in word:
        out = R[j] @ out
    return out


def hecke_relation_failures(P: Params) -> list[str]:
    R = hecke_ops(P)
    S = P.space
    I = S.identity()
    bad = []
    for j, X in R.items():
        qj = vpow(P.wf.gen(j))
        if (X - I.scale(qj ** -1)) @ (X + I.scale(qj)) != S.zero():
            bad.append(f"quadratic H{j}")
    for i in R:
        for j in R:
            if i >= j:
                continue
            a, b = R[i], R[j]
            if j - i > 1:
                ok = a @ b == b @ a
            elif i == 0:
                ok = a @ b @ a @ b == b @ a @ b @ a
            else:
                ok = a @ b @ a == b @ a @ b
            if not ok:
                bad.append(f"braid H{i} H{j}")
    return bad


# dominant words and the orbit map

@dataclass(frozen=True)
class DominantIndex:
    f: tuple
    J: frozenset

    def __str__(self):
        return f"{format_index(self.f)} J={sorted(self.J)}"


def dominant_indices(parity: str, r: int, m: int) -> list[DominantIndex]:
    """Words 0 <= f(1) <= ... <= f(m) with their stabilizer generators J(f)."""
    S = TensorSpace(parity, r, m)
    pos = [a for a in S.labels if a >= 0]
    out = []
    for f in product(pos, repeat=m):
        if any(a > b for a, b in zip(f, f[1:])):
            continue
        J = {j for j in range(1, m) if f[j - 1] == f[j]}
        if f[0] == 0:
            J.add(0)
        out.append(DominantIndex(tuple(f), frozenset(J)))
    return out


def orbit_map(parity: str, r: int, m: int) -> dict:
    """``f . w -> (f, w)`` over dominant f and w in ^{J(f)}W."""
    out = {}
    for d in dominant_indices(parity, r, m):
        for w in coset_reps(d.J, m):
            g = act_perm(d.f, w)
            if g in out:
                raise RuntimeError(f"index {g} is reached twice")
            out[g] = (d, w)
    return out


# bases

@dataclass
class TensorBasis:
    kind: str
    params: Params
    vectors: dict  # TensorIndex -> ModuleVector

    def to_json(self) -> list[dict]:
        out = []
        for f in sorted(self.vectors):
            terms = sorted(self.vectors[f].terms.items())
            out.append({
                "index": format_index(f),
                "expansion": [[format_index(g), str(c)] for g, c in terms],
            })
        return out


def lbasis_tensor(P: Params) -> TensorBasis:
    vecs = {}
    for d in dominant_indices(P.parity, P.r, P.m):
        C = ParabolicModule(d.J, P.wf).lbasis()
        for w, elt in C.items():
            vecs[act_perm(d.f, w)] = ModuleVector({act_perm(d.f, y): c for y, c in elt.terms.items()})
    return TensorBasis("lbasis", P, vecs)


def psi_iota_matrix(P: Params) -> Operator:
    U = upsilon(P.parity, P.r, P.m, P.L0, P.L1)
    return psi_iota(U).matrix


def icb_order(P: Params, A: Operator) -> list:
    S = P.space
    top = S.labels[-1]

    def key(f):
        d = tuple(a - b for a, b in zip(S.wt(f), S.wt((top,) * S.m)))
        return (S.height(d), f)

    R = {f: dict(A.column(f)) for f in S.basis}
    return topological_order(S.basis, R, key=key)


def icb_tensor(P: Params) -> TensorBasis:
    S = P.space
    A = psi_iota_matrix(P)
    order = icb_order(P, A)
    D = BarData(order, {f: {g: c.to_laurent() for g, c in A.column(f).items()} for f in S.basis})
    C = canonical_basis(D)
    return TensorBasis("icb", P, {f: ModuleVector(C.P[f]) for f in order})


def order_violations(P: Params, A: Operator | None = None) -> list:
    """Off-diagonal entries of psi_iota not below the partial order."""
    S = P.space
    if A is None:
        A = psi_iota_matrix(P)
    return [(g, f) for g, f, _ in A.entries() if g != f and not S.order_leq(g, f)]


# verifications

def verify_equality(P: Params) -> dict:
    try:
        L = lbasis_tensor(P)
        I = icb_tensor(P)
    except CanonicalizationError as exc:
        return report("equality", P, False, [{"error": str(exc)}])
    mism = []
    for f in sorted(set(L.vectors) | set(I.vectors)):
        a, b = L.vectors.get(f), I.vectors.get(f)
        if a != b:
            mism.append({"index": format_index(f), "lbasis": str(a), "icb": str(b)})
    return report("equality", P, not mism, mism or [{"compared": len(L.vectors)}])


def verify_commutation(P: Params, ops: CoidealOps | None = None) -> dict:
    if ops is None:
        ops = coideal_ops(P.parity, P.r, P.m, P.L0, P.L1)
    R = hecke_ops(P)
    bad = []
    for name, X in ops.gens.items():
        for j, H in R.items():
            if X @ H != H @ X:
                bad.append({"generator": name, "hecke": f"H{j}"})
    return report("commutation", P, not bad, bad or [{"pairs": len(ops.gens) * len(R)}])


def verify_samebar(P: Params) -> dict:
    """psi_iota(x u h) = psi_iota(x) psi_iota(u) bar(h) on all basis vectors."""
    ops = coideal_ops(P.parity, P.r, P.m, P.L0, P.L1)
    A = psi_iota_matrix(P)
    S = P.space
    R = hecke_ops(P)
    hs = {"1": (S.identity(), S.identity())}
    for j, H in R.items():
        qj = vpow(P.wf.gen(j))
        hs[f"H{j}"] = (H, H + S.identity().scale(qj - qj ** -1))
    bad = []
    for name, X in ops.gens.items():
        Y = ops.gens[ops.iota_bar_name(name)]
        for hn, (H, Hbar) in hs.items():
            if A @ H.bar() @ X.bar() != Hbar @ Y @ A:
                bad.append({"generator": name, "hecke": hn})
    return report("samebar", P, not bad, bad or [{"pairs": len(ops.gens) * len(hs)}])


def verify_h0_lemma(parity: str, r: int, L0: int, L1: int) -> dict:
    """The inverse of Upsilon o zeta~ o T_{w0} equals the action of H_0 on V."""
    P = Params(parity, r, 1, L0, L1)
    S = P.space
    U = upsilon(parity, r, 1, P.L0, P.L1)
    T = mcT_V(parity, r, P.L0, P.L1, U.T)
    H0 = hecke_ops(P)[0]
    ok = T @ H0 == S.identity() and H0 @ T == S.identity()
    p = vpow(P.L0)
    # eigenvectors of H_0: p^-1 on u_{-a} + p u_a (and u_0), -p on u_{-a} - p^-1 u_a
    eig = []
    for a in S.labels:
        if a < 0:
            continue
        if a == 0:
            vecs = [(ModuleVector({(a,): 1}), p ** -1)]
        else:
            vecs = [(ModuleVector({(-a,): 1, (a,): p}), p ** -1),
                    (ModuleVector({(-a,): 1, (a,): -(p ** -1)}), -p)]
        for vec, lam in vecs:
            if H0.apply(vec) != vec.scale(lam):
                eig.append(str(vec))
    details = [{"Tinv_equals_H0": ok, "eigenvector_failures": eig,
                "upsilon_weights": list(U.diagnostics["weights_solved"])}]
    return report("h0-lemma", P, ok and not eig, details)


def verify_presentation(P: Params) -> dict:
    ops = coideal_ops(P.parity, P.r, P.m, P.L0, P.L1)
    bad = presentation_failures(ops)
    return report("presentation", P, not bad, [{"failed_relations": bad}])


# double centralizer evidence

def _flat(op: Operator) -> dict:
    return {(g, f): a for g, f, a in op.entries()}


def _commutant_constraints(S: TensorSpace, gens: list[Operator]) -> list[dict]:
    """Rows of the linear system X G = G X in the entries X[(g, f)]."""
    rows = []
    for G in gens:
        # (X G - G X)[g, f] = sum_h X[g, h] G[h, f] - sum_h G[g, h] X[h, f]
        for f in S.basis:
            for g in S.basis:
                row = {}
                for h, a in G.column(f).items():
                    row[(g, h)] = row.get((g, h), 0) + a
                for h in S.basis:
                    b = G.entry(g, h)
                    if b:
                        row[(h, f)] = row.get((h, f), 0) - b
                row = {k: c for k, c in row.items() if c}
                if row:
                    rows.append(row)
    return rows


def _point_rank_of_rows(rows: list[dict], x: Fraction) -> int:
    E = Echelon()
    for row in rows:
        E.add(eval_vector(row, x))
    return E.rank


def centralizer_evidence(P: Params, wordcap: int = 8, certify: bool = False,
                         strict: bool = False) -> dict:
    """
    Finite-rank evidence for the double centralizer property at one weight
    function. (a) is the commutant of the Hecke action in End(V^{(x)m}),
    (b) the span of products of at most ``wordcap`` coideal generators.

    Point ranks bound dimensions from the correct sides: rank of the word
    span at a point <= dim (b), and dim (a) <= N^2 - rank of the commutant
    constraints at a point. With (b) inside (a) exactly, equality of the two
    point bounds proves dim (a) = dim (b). Without ``certify`` the
    containment is only checked at the evaluation point. With ``strict``,
    WordcapInsufficient is raised when the span stopped short of (a) only
    because of the word cap.
    """
    S = P.space
    ops = coideal_ops(P.parity, P.r, P.m, P.L0, P.L1)
    R = hecke_ops(P)
    x = DEFAULT_POINTS[0]
    N = S.dim
    gens = [ops.gens[n] for n in ops.names]

    # (b): span of words, grown breadth first and pruned at the point
    E = Echelon()
    E.add(eval_vector(_flat(S.identity()), x))
    kept = [S.identity()]
    frontier = [S.identity()]
    for _ in range(wordcap):
        nxt = []
        for W in frontier:
            for G in gens:
                op = G @ W
                if E.add(eval_vector(_flat(op), x)):
                    kept.append(op)
                    nxt.append(op)
        frontier = nxt
        if not frontier:
            break
    dim_b = E.rank
    saturated = not frontier

    # containment (b) in (a)
    contained = True
    for W in kept:
        for H in R.values():
            if certify:
                ok = W @ H == H @ W
            else:
                Wx, Hx = W.evaluate(x), H.evaluate(x)
                ok = _num_mul(Wx, Hx) == _num_mul(Hx, Wx)
            if not ok:
                contained = False
                break
        if not contained:
            break

    # (a): upper bound on the commutant dimension
    rank_c = _point_rank_of_rows(_commutant_constraints(S, list(R.values())), x)
    dim_a_upper = N * N - rank_c

    # the coideal commutant and the Hecke span, compared the same way
    hecke_span = Echelon()
    frontier = [S.identity()]
    hecke_span.add(eval_vector(_flat(S.identity()), x))
    while frontier:
        nxt = []
        for W in frontier:
            for H in R.values():
                op = H @ W
                if hecke_span.add(eval_vector(_flat(op), x)):
                    nxt.append(op)
        frontier = nxt
    rank_u = _point_rank_of_rows(_commutant_constraints(S, gens), x)
    dim_u_upper = N * N - rank_u

    equal = dim_b == dim_a_upper
    details = {
        "dim_module": N,
        "wordcap": wordcap,
        "word_span_rank": dim_b,
        "word_span_saturated": saturated,
        "hecke_commutant_dim_upper": dim_a_upper,
        "containment": contained,
        "containment_exact": certify,
        "dimension_equality": equal,
        "dimension_equality_certified": bool(equal and contained and certify),
        "coideal_commutant_dim_upper": dim_u_upper,
        "hecke_span_rank": hecke_span.rank,
        "second_centralizer_equal": dim_u_upper == hecke_span.rank,
        "evaluation_point": str(x),
    }
    # a short span that is still growing is a resource limit, not a counterexample
    details["wordcap_insufficient"] = bool(contained and dim_b < dim_a_upper and not saturated)
    if strict and details["wordcap_insufficient"]:
        raise WordcapInsufficient(f"word span rank {dim_b} < {dim_a_upper} at word cap {wordcap}")
    ok = contained and equal and dim_u_upper == hecke_span.rank
    return report("centralizer", P, ok, [details])


def _num_mul(A: dict, B: dict) -> dict:
    """Product of numeric column dicts (first B, then A)."""
    out = {}
    for f, col in B.items():
        res = {}
        for g, a in col.items():
            for h, b in A.get(g, {}).items():
                res[h] = res.get(h, 0) + b * a
        res = {h: c for h, c in res.items() if c}
        if res:
            out[f] = res
    return out
