"""The *-representations pi_w and pi_{w,t} of C_q[U] on truncated Fock spaces."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from ..funalg import FunElem, irrep, left_weight_decompose
from ..rootsys import ConfigurationError, RootSystem, WeylElement, element_from_word
from ..uqmod import DomainError
from .fock import FockOp, interior_indices
from .rank1 import InternalError, expansion_operator, phi_star_expand, rank1_table


@dataclass(frozen=True)
class TorusPoint:
    t: tuple
    S: frozenset = frozenset()

    @classmethod
    def make(cls, t, S=()) -> "TorusPoint":
        t = tuple(complex(x) for x in t)
        if any(abs(abs(x) - 1) > 1e-12 for x in t):
            raise ConfigurationError("torus coordinates must have modulus 1")
        S = frozenset(S)
        if any(abs(t[i - 1] - 1) > 1e-12 for i in S):
            raise ConfigurationError("coordinates in S must equal 1")
        return cls(t, S)

    @classmethod
    def unit(cls, r: int) -> "TorusPoint":
        return cls(tuple([1 + 0j] * r))

    @classmethod
    def from_phases(cls, phases, S=()) -> "TorusPoint":
        """t_i = exp(2 pi i * phase_i)."""
        return cls.make([cmath.exp(2j * cmath.pi * p) for p in phases], S)

    def power(self, mu) -> complex:
        out = 1 + 0j
        for x, m in zip(self.t, mu):
            out *= x ** m
        return out


@dataclass
class RepSpec:
    R: RootSystem
    word: tuple
    N: int
    t: TorusPoint | None = None
    pad: int | None = None

    def __post_init__(self):
        w = element_from_word(self.R, self.word)
        if w.length != len(self.word):
            raise DomainError(f"word {self.word} is not reduced")
        if self.N < 1:
            raise ConfigurationError("N must be positive")

    @property
    def w(self) -> WeylElement:
        return element_from_word(self.R, self.word)

    @property
    def l(self) -> int:
        return len(self.word)


@dataclass
class TruncatedOp:
    """pi(a) compressed to the first N levels of each of l tensor factors."""

    op: FockOp
    N: int
    l: int
    margin: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.N ** self.l

    def sparse(self):
        return self.op.to_sparse(self.N)

    def dense(self) -> np.ndarray:
        return self.op.to_dense(self.N)

    def interior(self):
        idx = interior_indices(self.N, self.l, self.margin)
        return self.sparse()[idx][:, idx]

    def norm(self) -> float:
        return operator_norm(self.sparse())

    def singular_values(self, k: int = 10) -> np.ndarray:
        return top_singular_values(self.sparse(), k)

    def to_json(self) -> dict:
        m = self.dense()
        return {"N": self.N, "l": self.l, "margin": self.margin,
                "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m]}

    def to_binary(self) -> bytes:
        import struct
        m = self.dense().astype(np.complex128)
        header = struct.pack("<II", self.N, self.l)
        return header + m.view(np.float64).astype("<f8").tobytes()


def operator_norm(m) -> float:
    n = m.shape[0]
    if m.nnz == 0:
        return 0.0
    if n <= 400:
        return float(np.linalg.norm(m.toarray(), 2))
    return float(top_singular_values(m, 1)[0])


def top_singular_values(m, k: int = 10, block_limit: int = 1500) -> np.ndarray:
    """Largest k singular values.

    m^dag m is split into connected components of its sparsity graph (shift
    operators with few shifts decouple into short chains), and each
    component is diagonalised densely.  ARPACK is only a fallback for a
    component larger than ``block_limit``; its Krylov space is kept wide
    because the top of a truncated spectrum is tightly clustered.
    """
    out = np.zeros(k)
    if m.nnz == 0:
        return out
    g = (m.conj().T @ m).tocsr()
    g.eliminate_zeros()
    ncomp, labels = csgraph.connected_components(abs(g) > 0, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
    sizes = np.diff(bounds)
    gp = g[order][:, order].tocsr()
    diag = gp.diagonal()
    top = np.sort(diag[bounds[:-1][sizes == 1]].real)[::-1][:k]
    # Gershgorin: the largest absolute row sum bounds a block's top eigenvalue,
    # so blocks that cannot enter the top k are skipped
    rows = np.asarray(abs(gp).sum(axis=1)).ravel()
    caps = np.maximum.reduceat(rows, bounds[:-1]) if ncomp else np.zeros(0)
    big = np.nonzero(sizes > 1)[0]
    for c in big[np.argsort(-caps[big], kind="stable")]:
        if len(top) >= k and caps[c] <= top[k - 1]:
            break
        a, b = bounds[c], bounds[c + 1]
        sub = gp[a:b, a:b]
        kk = min(k, b - a - 1)
        if b - a > block_limit and kk < b - a - 2:
            ev = spla.eigsh(sub, k=kk, which="LA", ncv=min(b - a, max(2 * kk + 1, 40)),
                            maxiter=50 * (b - a), v0=np.ones(b - a), return_eigenvectors=False)
        else:
            ev = np.linalg.eigvalsh(sub.toarray())
        top = np.sort(np.concatenate([top, ev.real]))[::-1][:k]
    ev = top
    s = np.sqrt(np.clip(ev.real, 0, None))
    out[:len(s)] = s
    return out


# -- degree bookkeeping --------------------------------------------------------

def element_reach(a: FunElem, word) -> int:
    """Largest spin string length (2j) met along the word: bounds every shift."""
    from ..uqmod import sl2_strings
    reach = 0
    for lam in a.comps:
        V = irrep(a.R, a.q, lam)
        for i in set(word):
            for s in sl2_strings(V, i):
                reach = max(reach, int(2 * s.spin))
    return reach


def _pad_for(a: FunElem, word, extra: int) -> int:
    return element_reach(a, word) + extra + 1


# -- pi_w and pi_{w,t} -------------------------------------------------------------------

def pi_w_fock(a: FunElem, word, M: int, column_weights=None) -> FockOp:
    """(pi_{i_1} (x) ... (x) pi_{i_l}) Delta^{(l)}(a) on a box of side M.

    Delta^{(l)} c_{u,v} = sum c_{u,k_1} (x) c_{k_1,k_2} (x) ... (x) c_{k_{l-1},v};
    the chain sum runs left to right as a dynamic programme over k.
    ``column_weights`` maps lam -> per-column complex factors (used for tau_t).
    """
    l = len(word)
    out = FockOp.zero(M, l)
    qkey = str(a.q)
    for lam, C in a.comps.items():
        Cn = np.array([[complex(float(x)) for x in row] for row in C.tolist()])
        if column_weights is not None:
            Cn = Cn * column_weights[lam][None, :]
        dim = Cn.shape[0]
        if l == 0:
            out.add_(FockOp(M, 0, {(): np.array(complex(np.trace(Cn)))}))
            continue
        tables = [rank1_table(a.R, qkey, lam, i, M) for i in word]
        for u in range(dim):
            row = Cn[u]
            if not np.any(row):
                continue
            # G[k]: operator on the first m factors for the chain u -> ... -> k
            G = {}
            for (uu, k), op in tables[0].entries.items():
                if uu == u:
                    G[k] = op
            for t in tables[1:]:
                nxt: dict = {}
                for (k1, k2), op in t.entries.items():
                    g = G.get(k1)
                    if g is None:
                        continue
                    term = g.tensor(op)
                    if k2 in nxt:
                        nxt[k2].add_(term)
                    else:
                        nxt[k2] = term
                G = nxt
            for v, g in G.items():
                c = row[v]
                if c != 0:
                    out.add_(g, c)
    out.terms = {s: d for s, d in out.terms.items() if np.any(d)}
    return out


def pi_w(a: FunElem, spec: RepSpec, margin: int = 0) -> TruncatedOp:
    """pi_w(a) compressed to the N-box; entries are exact (no cut-off error)."""
    M = spec.N + _pad_for(a, spec.word, 0) if spec.pad is None else spec.N + spec.pad
    op = pi_w_fock(a, spec.word, M)
    return TruncatedOp(op, spec.N, spec.l, margin, {"word": list(spec.word)})


def _tau_weights(a: FunElem, t: TorusPoint) -> dict:
    out = {}
    for lam in a.comps:
        V = irrep(a.R, a.q, lam)
        out[lam] = np.array([t.power(mu) for mu in V.weights])
    return out


def rank_one_cross_check(a: FunElem, i: int, N: int, tol: float = 1e-9) -> float:
    """Compare pi_{s_i}(a) from the corepresentation tables with pi_q applied to
    the monomial expansion of phi_i^*(a); disagreement raises InternalError."""
    M = N + _pad_for(a, (i,), 0)
    qi = float(a.q) ** a.R.d[i - 1]
    direct = pi_w_fock(a, (i,), M)
    dev = direct.crop_diff(expansion_operator(phi_star_expand(a, i), qi, M), N)
    if dev > tol:
        raise InternalError(f"rank one routes disagree for s_{i}: deviation {dev:.3e}")
    return dev


def pi_wt(a: FunElem, spec: RepSpec, margin: int = 0) -> TruncatedOp:
    """(pi_w (x) tau_t) Delta (a): column v of each component picks up t^{wt v}."""
    t = spec.t or TorusPoint.unit(spec.R.rank)
    M = spec.N + _pad_for(a, spec.word, 0) if spec.pad is None else spec.N + spec.pad
    op = pi_w_fock(a, spec.word, M, _tau_weights(a, t))
    return TruncatedOp(op, spec.N, spec.l, margin, {"word": list(spec.word), "t": t.t})


def tau_t(a: FunElem, t: TorusPoint) -> complex:
    """sum_mu a_mu(1) t^mu over the left weight decomposition."""
    total = 0j
    for mu, part in left_weight_decompose(a).items():
        total += complex(float(part(()))) * t.power(mu)
    return total


def product_fock(ops) -> FockOp:
    acc = ops[0]
    for o in ops[1:]:
        acc = acc @ o
    return acc
