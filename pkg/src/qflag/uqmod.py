"""Finite-dimensional U_q(g)-modules with exact rational actions.

Conventions (kept in this one place):

* K_i acts on a vector of weight mu (fundamental-weight coordinates m) by
  q^{(mu, alpha_i)} = q_i^{m_i}.
* Delta(K) = K (x) K,  Delta(E_i) = E_i (x) 1 + K_i (x) E_i,
  Delta(F_i) = F_i (x) K_i^{-1} + 1 (x) F_i.
* S(E_i) = -K_i^{-1} E_i,  S(F_i) = -F_i K_i,  S(K) = K^{-1}.

This coproduct is the one for which the rank-one matrix coefficients obey
the commutation and star relations realised by the operators pi_q (checked
in the test-suite); the mirror choice E (x) K + 1 (x) E is also compatible
with the star structure but produces the opposite q-commutation.
* E_i^* = q_i^{-1} F_i K_i,  F_i^* = q_i K_i^{-1} E_i.

Here E_i, F_i stand for X_i^+, X_i^-.  Bases are orthogonal for the
contravariant form but not normalised; ``norms[b]`` holds <b, b>, which
keeps every entry rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from flint import fmpq, fmpq_mat

from .exact import ONE, ZERO, nullspace, sp_apply, sp_axpy, sp_dot, to_fmpq
from .rootsys import ConfigurationError, RootSystem

DEFAULT_CAP = 200


class DomainError(ValueError):
    """A mathematically invalid request (e.g. non-dominant highest weight)."""


def parse_q(q) -> fmpq:
    q = to_fmpq(q)
    if not (0 < q < 1):
        raise ConfigurationError(f"q must satisfy 0 < q < 1, got {q}")
    return q


def qpow(q: fmpq, n: int) -> fmpq:
    return q ** n if n >= 0 else (1 / q) ** (-n)


def qint(qi: fmpq, m: int) -> fmpq:
    """[m]_{q_i} = (q_i^m - q_i^{-m}) / (q_i - q_i^{-1})."""
    return (qpow(qi, m) - qpow(qi, -m)) / (qi - 1 / qi)


@dataclass
class Module:
    """Weight module with sparse generator actions ``{col: {row: coeff}}``."""

    R: RootSystem
    q: fmpq
    weights: list
    E: list
    F: list
    norms: list | None = None
    highest_weight: tuple | None = None
    recipes: list | None = field(default=None, repr=False)
    label: str = ""

    @property
    def dim(self) -> int:
        return len(self.weights)

    def qi(self, i: int) -> fmpq:
        return self.q ** self.R.d[i]

    def k_scalar(self, i: int, b: int, power: int = 1) -> fmpq:
        return qpow(self.qi(i), power * self.weights[b][i])

    def weight_blocks(self) -> dict:
        out: dict = {}
        for b, mu in enumerate(self.weights):
            out.setdefault(mu, []).append(b)
        return out

    def character(self) -> dict:
        out: dict = {}
        for mu in self.weights:
            out[mu] = out.get(mu, 0) + 1
        return out

    # -- actions on sparse vectors -------------------------------------------
    def apply_E(self, i: int, vec: dict) -> dict:
        return sp_apply(self.E[i], vec)

    def apply_F(self, i: int, vec: dict) -> dict:
        return sp_apply(self.F[i], vec)

    def apply_K(self, i: int, vec: dict, power: int = 1) -> dict:
        return {b: c * self.k_scalar(i, b, power) for b, c in vec.items()}

    def apply_word(self, word, vec: dict) -> dict:
        """Apply a word of generators, rightmost first.

        Letters are ("E", i), ("F", i) or ("K", i, power) with 0-based i.
        """
        for letter in reversed(word):
            kind, i = letter[0], letter[1]
            if kind == "E":
                vec = self.apply_E(i, vec)
            elif kind == "F":
                vec = self.apply_F(i, vec)
            else:
                vec = self.apply_K(i, vec, letter[2] if len(letter) > 2 else 1)
        return vec

    def inner(self, x: dict, y: dict) -> fmpq:
        if self.norms is None:
            raise ValueError("module carries no contravariant form")
        return sp_dot(x, y, self.norms)

    def dense(self, op: dict) -> fmpq_mat:
        n = self.dim
        m = fmpq_mat(n, n)
        for c, col in op.items():
            for r, v in col.items():
                m[r, c] = v
        return m

    def matrix(self, kind: str, i: int) -> fmpq_mat:
        if kind == "E":
            return self.dense(self.E[i])
        if kind == "F":
            return self.dense(self.F[i])
        m = fmpq_mat(self.dim, self.dim)
        for b in range(self.dim):
            m[b, b] = self.k_scalar(i, b)
        return m


# -- irreducible modules ----------------------------------------------------------

def build_irreducible(R: RootSystem, q, lam, cap: int = DEFAULT_CAP) -> Module:
    """V(lam) by Gram-Schmidt on F-monomials applied to v_lam, level by level.

    Candidates at weight mu are F_j u with u a basis vector of weight
    mu + alpha_j (j ascending, then u ascending).  Their E-images follow
    from [E_i, F_j] = delta_ij [K_i; 0], and the contravariant Gram entries
    from <F_j u, c> = q_j^{1 - m_j(wt u)} <u, E_j c>.
    """
    q = parse_q(q)
    lam = tuple(int(x) for x in lam)
    if len(lam) != R.rank:
        raise ConfigurationError(f"weight {lam} has wrong length for rank {R.rank}")
    if any(x < 0 for x in lam):
        raise DomainError(f"highest weight {lam} is not dominant")
    n = R.rank
    qs = [q ** R.d[i] for i in range(n)]
    weights = [lam]
    norms = [ONE]
    E = [dict() for _ in range(n)]
    F = [dict() for _ in range(n)]
    recipes: list = [[]]
    by_weight = {lam: [0]}
    level = [lam]
    while level:
        cand_weights = sorted({tuple(x - y for x, y in zip(mu, R.simple_roots[j]))
                               for mu in level for j in range(n)}, reverse=True)
        new_level = []
        for mu in cand_weights:
            cands = []  # (j, u)
            for j in range(n):
                src = tuple(x + y for x, y in zip(mu, R.simple_roots[j]))
                for u in by_weight.get(src, ()):
                    cands.append((j, u))
            if not cands:
                continue
            # E-images of every candidate
            eimg = []
            for j, u in cands:
                imgs = []
                for i in range(n):
                    v = {}
                    eu = E[i].get(u)
                    if eu:
                        for b, c in eu.items():
                            fb = F[j].get(b)
                            if fb:
                                sp_axpy(v, c, fb)
                    if i == j:
                        sp_axpy(v, qint(qs[i], weights[u][i]), {u: ONE})
                    imgs.append(v)
                eimg.append(imgs)
            k = len(cands)
            G = [[ZERO] * k for _ in range(k)]
            for a, (j, u) in enumerate(cands):
                scale = qpow(qs[j], 1 - weights[u][j]) * norms[u]
                for b in range(k):
                    G[a][b] = scale * eimg[b][j].get(u, ZERO)
            # Gram-Schmidt in candidate order, exact
            basis = []  # (beta, norm)
            for a in range(k):
                beta = [ZERO] * k
                beta[a] = ONE
                for prev, pn in basis:
                    proj = sum((G[a][c] * prev[c] for c in range(k) if prev[c] != 0), ZERO)
                    if proj != 0:
                        f = proj / pn
                        beta = [x - f * y for x, y in zip(beta, prev)]
                gb = [sum((G[r][c] * beta[c] for c in range(k) if beta[c] != 0), ZERO)
                      for r in range(k)]
                nb = sum((beta[r] * gb[r] for r in range(k)), ZERO)
                if nb != 0:
                    if nb < 0:
                        raise ArithmeticError("contravariant form not positive definite")
                    basis.append((beta, nb))
            if not basis:
                continue
            if len(weights) + len(basis) > cap:
                raise ConfigurationError(
                    f"dim V({lam}) exceeds the cap of {cap}")
            idx = []
            for beta, nb in basis:
                b = len(weights)
                weights.append(mu)
                norms.append(nb)
                recipes.append([(beta[a], cands[a][0], cands[a][1])
                                for a in range(k) if beta[a] != 0])
                for i in range(n):
                    img = {}
                    for a in range(k):
                        if beta[a] != 0:
                            sp_axpy(img, beta[a], eimg[a][i])
                    if img:
                        E[i][b] = img
                idx.append(b)
            # F_j u expressed in the new orthogonal basis: coord = <c, b> / n_b
            for a, (j, u) in enumerate(cands):
                col = {}
                for (beta, nb), b in zip(basis, idx):
                    s = sum((G[a][c] * beta[c] for c in range(k) if beta[c] != 0), ZERO)
                    if s != 0:
                        col[b] = s / nb
                if col:
                    F[j].setdefault(u, {}).update(col)
            by_weight[mu] = idx
            new_level.append(mu)
        level = new_level
    return Module(R, q, weights, E, F, norms, lam, recipes, label=f"V{lam}")


def trivial_module(R: RootSystem, q) -> Module:
    return build_irreducible(R, q, R.zero())


# -- checks -----------------------------------------------------------------------

def star_adjointness_check(M: Module) -> bool:
    """<E_i x, y> = <x, q_i^{-1} F_i K_i y> on all basis pairs."""
    n = M.R.rank
    for i in range(n):
        qi = M.qi(i)
        for x in range(M.dim):
            ex = M.E[i].get(x, {})
            for y in range(M.dim):
                lhs = sp_dot(ex, {y: ONE}, M.norms)
                fy = M.apply_F(i, {y: M.k_scalar(i, y) / qi})
                rhs = sp_dot({x: ONE}, fy, M.norms)
                if lhs != rhs:
                    return False
    return True


def relation_check(M: Module) -> bool:
    """[E_i, F_j] = delta_ij [K_i; 0], K-weights of E/F, quantum Serre."""
    R, n = M.R, M.R.rank
    for b in range(M.dim):
        v = {b: ONE}
        for i in range(n):
            for j in range(n):
                lhs = M.apply_E(i, M.apply_F(j, v))
                sp_axpy(lhs, -ONE, M.apply_F(j, M.apply_E(i, v)))
                if i == j:
                    sp_axpy(lhs, -qint(M.qi(i), M.weights[b][i]), v)
                if lhs:
                    return False
            for kind in "EF":
                op = M.E[i] if kind == "E" else M.F[i]
                sign = 1 if kind == "E" else -1
                for r in op.get(b, {}):
                    exp = tuple(x + sign * y for x, y in zip(M.weights[b], R.simple_roots[i]))
                    if M.weights[r] != exp:
                        return False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if not _serre_holds(M, i, j, v):
                    return False
    return True


def _qbinom(qi, n, k):
    num = ONE
    den = ONE
    for t in range(k):
        num *= qint(qi, n - t)
        den *= qint(qi, t + 1)
    return num / den


def _serre_holds(M: Module, i: int, j: int, v: dict) -> bool:
    # alpha_i-string through alpha_j: <alpha_j, alpha_i^vee> = a_ji here
    a = -M.R.cartan[j][i]
    qi = M.qi(i)
    for kind in "EF":
        op = M.apply_E if kind == "E" else M.apply_F
        acc: dict = {}
        for k in range(a + 2):
            x = v
            for _ in range(a + 1 - k):
                x = op(i, x)
            x = op(j, x)
            for _ in range(k):
                x = op(i, x)
            sp_axpy(acc, (-1) ** k * _qbinom(qi, a + 1, k), x)
        if acc:
            return False
    return True


# -- tensor products and duals ----------------------------------------------------

def tensor(M1: Module, M2: Module) -> Module:
    """Tensor product via Delta; basis index a * dim2 + b."""
    if M1.R != M2.R or M1.q != M2.q:
        raise ConfigurationError("tensor factors must share root system and q")
    n = M1.R.rank
    d2 = M2.dim
    weights = [tuple(x + y for x, y in zip(w1, w2)) for w1 in M1.weights for w2 in M2.weights]
    E = [dict() for _ in range(n)]
    F = [dict() for _ in range(n)]
    for i in range(n):
        for a in range(M1.dim):
            ea = M1.E[i].get(a, {})
            fa = M1.F[i].get(a, {})
            k_a = M1.k_scalar(i, a)
            for b in range(d2):
                col = {}
                kinv_b = M2.k_scalar(i, b, -1)
                for r, c in ea.items():
                    col[r * d2 + b] = c
                for r, c in M2.E[i].get(b, {}).items():
                    col[a * d2 + r] = col.get(a * d2 + r, ZERO) + k_a * c
                if col:
                    E[i][a * d2 + b] = col
                col = {}
                for r, c in fa.items():
                    col[r * d2 + b] = c * kinv_b
                for r, c in M2.F[i].get(b, {}).items():
                    col[a * d2 + r] = col.get(a * d2 + r, ZERO) + c
                if col:
                    F[i][a * d2 + b] = col
    norms = None
    if M1.norms is not None and M2.norms is not None:
        norms = [x * y for x in M1.norms for y in M2.norms]
    return Module(M1.R, M1.q, weights, E, F, norms, None, None,
                  label=f"({M1.label} x {M2.label})")


def dual(M: Module) -> Module:
    """Linear dual with (X.f)(v) = f(S(X).v), in the dual basis.

    rho*(E)[a,b] = -k_i(b)^{-1} rho(E)[b,a],  rho*(F)[a,b] = -rho(F)[b,a] k_i(a).
    The dual carries no contravariant form in this basis.
    """
    n = M.R.rank
    weights = [tuple(-x for x in mu) for mu in M.weights]
    E = [dict() for _ in range(n)]
    F = [dict() for _ in range(n)]
    for i in range(n):
        for b, col in M.E[i].items():
            for a, c in col.items():
                # rho(E)[a, b] = c  ->  rho*(E)[b, a] = -k(a)^{-1} c; acts column a -> row b
                E[i].setdefault(a, {})[b] = -c * M.k_scalar(i, a, -1)
        for b, col in M.F[i].items():
            for a, c in col.items():
                F[i].setdefault(a, {})[b] = -c * M.k_scalar(i, b)
    hw = M.R.dual_weight(M.highest_weight) if M.highest_weight is not None else None
    return Module(M.R, M.q, weights, E, F, None, hw, None, label=f"{M.label}*")


# -- highest weight vectors and invariants ---------------------------------------------

def _kernel_in_block(M: Module, block: list, ops: list) -> list:
    """Basis (sparse dicts) of the common kernel of ``ops`` restricted to ``block``."""
    rows_index: dict = {}
    entries = []
    for op in ops:
        for jcol, b in enumerate(block):
            for r, c in op.get(b, {}).items():
                key = (id(op), r)
                if key not in rows_index:
                    rows_index[key] = len(rows_index)
                entries.append((rows_index[key], jcol, c))
    k = len(block)
    if not rows_index:
        return [{b: ONE} for b in block]
    m = fmpq_mat(len(rows_index), k)
    for r, c, v in entries:
        m[r, c] = m[r, c] + v
    out = []
    for vec in nullspace(m):
        out.append({block[t]: x for t, x in enumerate(vec) if x != 0})
    return out


def _orthogonalise(M: Module, vecs: list) -> list:
    if M.norms is None:
        return vecs
    out: list = []
    for v in vecs:
        v = dict(v)
        for u, nu in out:
            c = M.inner(v, u)
            if c != 0:
                sp_axpy(v, -c / nu, u)
        if v:
            out.append((v, M.inner(v, v)))
    return [v for v, _ in out]


def highest_weight_vectors(M: Module) -> list:
    """[(weight, vector)] spanning the joint kernel of the E_i, orthogonal per weight."""
    out = []
    blocks = M.weight_blocks()
    for mu in sorted(blocks, reverse=True):
        vecs = _kernel_in_block(M, blocks[mu], list(M.E))
        for v in _orthogonalise(M, vecs):
            out.append((mu, v))
    return out


def invariant_vectors(M: Module, S, mode: str = "K_S", weight=None) -> list:
    """Vectors killed by E_j, F_j (j in S) in the allowed weight spaces.

    mode "K_S": weight 0 only.  mode "K_S0": weights with m_j = 0 for j in S.
    S holds 1-based indices.  ``weight`` restricts to a single weight space.
    """
    S = sorted(S)
    if mode not in ("K_S", "K_S0"):
        raise ConfigurationError(f"unknown invariance mode {mode!r}")
    ops = [M.E[j - 1] for j in S] + [M.F[j - 1] for j in S]
    out = []
    for mu, block in sorted(M.weight_blocks().items(), reverse=True):
        if mode == "K_S" and any(mu):
            continue
        if mode == "K_S0" and any(mu[j - 1] for j in S):
            continue
        if weight is not None and mu != tuple(weight):
            continue
        vecs = _kernel_in_block(M, block, ops) if ops else [{b: ONE} for b in block]
        out.extend((mu, v) for v in _orthogonalise(M, vecs))
    return out


def embed(V: Module, target: Module, w: dict) -> list:
    """Images in ``target`` of the basis of irreducible ``V`` under v_lam -> w."""
    images = [w]
    for b in range(1, V.dim):
        img: dict = {}
        for beta, j, u in V.recipes[b]:
            sp_axpy(img, beta, target.apply_F(j, images[u]))
        images.append(img)
    return images


# -- rank-1 strings -------------------------------------------------------------------

@dataclass
class Sl2String:
    spin: Fraction
    top: dict          # highest vector of the string (E_i top = 0)
    vectors: list      # top, F top, F^2 top, ... (not normalised)
    norms: list


def sl2_strings(M: Module, i: int) -> list:
    """Decompose M under the image of phi_i (i 1-based) into irreducible strings."""
    ii = i - 1
    strings = []
    blocks = M.weight_blocks()
    for mu in sorted(blocks, key=lambda m: (-m[ii], m)):
        vecs = _kernel_in_block(M, blocks[mu], [M.E[ii]])
        for v in _orthogonalise(M, vecs):
            m = mu[ii]
            if m < 0:
                raise ArithmeticError("E-kernel vector with negative sl2 weight")
            chain = [v]
            for _ in range(m):
                chain.append(M.apply_F(ii, chain[-1]))
            if M.apply_F(ii, chain[-1]):
                raise ArithmeticError("string does not terminate")
            norms = [M.inner(x, x) for x in chain] if M.norms is not None else None
            strings.append(Sl2String(Fraction(m, 2), v, chain, norms))
    total = sum(len(s.vectors) for s in strings)
    if total != M.dim:
        raise ArithmeticError("sl2 strings do not exhaust the module")
    return strings
