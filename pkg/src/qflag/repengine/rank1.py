"""Rank one: the operators pi_q, spin-j corepresentations on l_2(Z_+), the
C_q[SU(2)] relations derived from the product, and the expansion of
phi_i^*(a) in monomials of the generators L_{eps xi}.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from flint import fmpq, fmpq_mat

from ..exact import ONE, ZERO, nullspace, solve_consistent, to_fmpq
from ..funalg import FunElem, decomposition, irrep, multiply, su2_generators
from ..rootsys import build_root_system
from ..uqmod import Module, sl2_strings, tensor
from .fock import FockOp

GENERATORS = ("++", "+-", "-+", "--")
INDEX = {"+": 0, "-": 1}


class InternalError(RuntimeError):
    """A convention inconsistency detected at run time (CLI exit code 3)."""


def pi_q_generator(gen: str, q, N: int) -> np.ndarray:
    """Dense N x N matrix of pi_q(L_gen) in the basis e_0 .. e_{N-1}."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if gen not in GENERATORS:
        raise ValueError(f"unknown generator {gen!r}")
    q = float(to_fmpq(q))
    j = np.arange(N)
    m = np.zeros((N, N))
    if gen == "++":
        m[j[1:] - 1, j[1:]] = np.sqrt(1 - q ** (2 * j[1:]))
    elif gen == "+-":
        m[j, j] = -q ** (j + 1)
    elif gen == "-+":
        m[j, j] = q ** j
    else:
        m[j[:-1] + 1, j[:-1]] = np.sqrt(1 - q ** (2 * (j[:-1] + 1)))
    return m


def pi_q_fock(gen: str, q: float, M: int) -> FockOp:
    """pi_q(L_gen) as a shift-diagonal operator on a box of side M."""
    j = np.arange(M, dtype=float)
    if gen == "++":
        return FockOp.single(M, -1, np.sqrt(1 - q ** (2 * j)))
    if gen == "+-":
        return FockOp.single(M, 0, -q ** (j + 1))
    if gen == "-+":
        return FockOp.single(M, 0, q ** j)
    return FockOp.single(M, 1, np.sqrt(1 - q ** (2 * (j + 1))))


# -- spin-j corepresentations ---------------------------------------------------------

@lru_cache(maxsize=None)
def spin_corep(qkey: str, two_j: int, M: int) -> tuple:
    """Pi_j[a][b] = pi_q(c^{(j)}_{a,b}) on the A_1 module V(2j) at parameter q.

    Built from Pi_{1/2} by Clebsch-Gordan: V(2j) is the top summand of
    V(2j - 1) (x) V(1), and c^{(j)}_{a,b} = sum p[a,t] iota[t',b] c_{u1 v1} c_{u2 v2}.
    """
    q = to_fmpq(qkey)
    qf = float(q)
    if two_j == 0:
        return ((FockOp.identity(M, 1),),)
    if two_j == 1:
        return tuple(tuple(pi_q_fock(e + x, qf, M) for x in "+-") for e in "+-")
    prev = spin_corep(qkey, two_j - 1, M)
    half = spin_corep(qkey, 1, M)
    R = build_root_system("A", 1)
    dec = decomposition(R, q, (two_j - 1,), (1,))
    comp = dec.by_weight((two_j,))[0]
    T, V = dec.T, comp.V
    d2 = 2
    imgs = comp.images
    dim = V.dim
    out = [[FockOp.zero(M, 1) for _ in range(dim)] for _ in range(dim)]
    for a in range(dim):
        # p[a, t] = iota[t, a] n_T[t] / (c n_a)
        pa = {t: x * T.norms[t] / (comp.c * V.norms[a]) for t, x in imgs[a].items()}
        for b in range(dim):
            acc = FockOp.zero(M, 1)
            for t, pv in pa.items():
                u1, u2 = divmod(t, d2)
                for t2, iv in imgs[b].items():
                    v1, v2 = divmod(t2, d2)
                    acc.add_(prev[u1][v1] @ half[u2][v2], float(pv * iv))
            out[a][b] = acc
    return tuple(tuple(r) for r in out)


# -- pi_i(c_{u,v}) tables -------------------------------------------------------------------

class Rank1Table:
    """pi_i(c^lam_{u,k}) for all u, k, as shift-diagonal operators.

    V(lam) splits into phi_i-strings s; with iota_s, p_s the string embedding
    and projection, pi_i(c_{u,k}) = sum_s sum_{a,b} iota_s[u,a] p_s[b,k] Pi_{j_s}[a][b].
    """

    def __init__(self, R, q, lam, i: int, M: int):
        V = irrep(R, q, lam)
        qi = q ** R.d[i - 1]
        self.max_two_j = 0
        entries: dict = {}
        for s in sl2_strings(V, i):
            two_j = int(2 * s.spin)
            self.max_two_j = max(self.max_two_j, two_j)
            Pi = spin_corep(str(qi), two_j, M)
            for a, va in enumerate(s.vectors):
                for b, vb in enumerate(s.vectors):
                    for u, x in va.items():
                        for k, y in vb.items():
                            coeff = float(x * y * V.norms[k] / s.norms[b])
                            key = (u, k)
                            if key in entries:
                                entries[key].add_(Pi[a][b], coeff)
                            else:
                                entries[key] = Pi[a][b].scale(coeff)
        self.entries = {k: v for k, v in entries.items() if v.terms}
        self.dim = V.dim


@lru_cache(maxsize=None)
def rank1_table(R, qkey: str, lam: tuple, i: int, M: int) -> Rank1Table:
    return Rank1Table(R, to_fmpq(qkey), lam, i, M)


# -- derived relations of C_q[SU(2)] ----------------------------------------------------------

def derived_su2_relations(q) -> list:
    """Linear relations among {L_x L_y} (16), {L_x} (4) and 1, from ``multiply``.

    Returns a list of dicts mapping a term label ("xy", "x" or "1") to an
    exact coefficient.
    """
    L = su2_generators(q)
    R = build_root_system("A", 1)
    labels, elems = [], []
    for x in GENERATORS:
        for y in GENERATORS:
            labels.append((x, y))
            elems.append(multiply(L[x], L[y]))
    for x in GENERATORS:
        labels.append((x,))
        elems.append(L[x])
    labels.append(())
    elems.append(FunElem.one(R, q))
    # coordinates of each element in the Peter-Weyl basis
    coords = []
    keys = sorted({(lam, u, v) for e in elems for lam, C in e.comps.items()
                   for u in range(C.nrows()) for v in range(C.ncols())})
    for e in elems:
        row = []
        for lam, u, v in keys:
            C = e.comps.get(lam)
            row.append(C[u, v] if C is not None else ZERO)
        coords.append(row)
    A = fmpq_mat(len(keys), len(elems), [coords[j][i] for i in range(len(keys))
                                            for j in range(len(elems))])
    rels = []
    for vec in nullspace(A):
        rels.append({("".join(lab) if lab else "1"): c for lab, c in zip(labels, vec) if c != 0})
    return rels


def relation_residual(rel: dict, q, N: int, margin: int = 2) -> float:
    """max |entry| of the relation evaluated on pi_q, on the interior block."""
    mats = {g: pi_q_generator(g, q, N) for g in GENERATORS}
    acc = np.zeros((N, N))
    for lab, c in rel.items():
        c = float(c)
        if lab == "1":
            acc += c * np.eye(N)
        elif len(lab) == 2:
            acc += c * mats[lab]
        else:
            acc += c * mats[lab[:2]] @ mats[lab[2:]]
    n = N - margin
    return float(np.max(np.abs(acc[:n, :n])))


# -- phi_i^* expansion in monomials -------------------------------------------------------------

def monomial_basis(D: int) -> list:
    """(a, b, c, top) for L_top^a L_{-+}^b L_{+-}^c, top in {'--','++'} (a >= 1 for '++')."""
    out = []
    for n in range(D + 1):
        for a in range(n + 1):
            for b in range(n - a + 1):
                c = n - a - b
                out.append((a, b, c, "--"))
                if a >= 1:
                    out.append((a, b, c, "++"))
    return out


def monomial_label(m) -> str:
    a, b, c, top = m
    parts = []
    for g, e in ((top, a), ("-+", b), ("+-", c)):
        if e:
            parts.append(f"L{g}^{e}" if e > 1 else f"L{g}")
    return "*".join(parts) or "1"


@lru_cache(maxsize=None)
def _vector_power(qkey: str, k: int) -> Module:
    R = build_root_system("A", 1)
    V = irrep(R, to_fmpq(qkey), (1,))
    M = irrep(R, to_fmpq(qkey), (0,))
    for _ in range(k):
        M = tensor(M, V)
    return M


def _monomial_value(qkey: str, m, word) -> fmpq:
    a, b, c, top = m
    letters = [top] * a + ["-+"] * b + ["+-"] * c
    k = len(letters)
    M = _vector_power(qkey, k)
    # basis index of (x_1..x_k) in the k-fold power (leading trivial factor has dim 1)
    src = 0
    dst = 0
    for g in letters:
        src = src * 2 + INDEX[g[1]]
        dst = dst * 2 + INDEX[g[0]]
    return M.apply_word(word, {src: ONE}).get(dst, ZERO)


def _rank1_words(D: int) -> list:
    return [tuple([("F", 0)] * x + [("K", 0, y)] + [("E", 0)] * z)
            for x in range(D + 1) for y in range(-D, D + 1) for z in range(D + 1)]


def phi_star_expand(a: FunElem, i: int) -> dict:
    """Coefficients of phi_i^*(a) in the monomial basis of C_{q_i}[SU(2)].

    Solves the exact system  sum_m x_m m(F^x K^y E^z) = a(phi_i(F^x K^y E^z)).
    An inconsistent system raises :class:`InternalError`.
    """
    R = a.R
    qi = a.q ** R.d[i - 1]
    qkey = str(qi)
    D = 0
    for lam in a.comps:
        for s in sl2_strings(irrep(R, a.q, lam), i):
            D = max(D, int(2 * s.spin))
    basis = monomial_basis(D)
    words = _rank1_words(D)
    ii = i - 1
    rows, rhs = [], []
    for w in words:
        rows.append([_monomial_value(qkey, m, w) for m in basis])
        gw = tuple((lt[0], ii) + tuple(lt[2:]) for lt in w)
        rhs.append(a(gw))
    A = fmpq_mat(len(rows), len(basis), [x for r in rows for x in r])
    sol = solve_consistent(A, rhs)
    if sol is None:
        raise InternalError("phi_i^* expansion is inconsistent: convention mismatch")
    return {m: c for m, c in zip(basis, sol) if c != 0}


def expansion_operator(expansion: dict, q: float, M: int) -> FockOp:
    """pi_q applied to a monomial expansion (cross-check of the corep route)."""
    gens = {g: pi_q_fock(g, q, M) for g in GENERATORS}
    out = FockOp.zero(M, 1)
    for (a, b, c, top), coeff in expansion.items():
        op = FockOp.identity(M, 1)
        for g, e in ((top, a), ("-+", b), ("+-", c)):
            for _ in range(e):
                op = op @ gens[g]
        out.add_(op, float(coeff))
    return out
