"""The quantized function algebra C_q[U] in Peter-Weyl coordinates.

An element is a finite map lam -> C^lam with

    a(X) = sum_lam sum_{u,v} C^lam[u, v] * rho_lam(X)[u, v],

where rho_lam(X)[u, v] is the u-coordinate of X e_v in the orthogonal
basis of V(lam) built by :func:`qflag.uqmod.build_irreducible`.  Column
index v is the vector leg (moved by the left regular action); row index u
is the functional leg (moved by the right regular action).

Coefficients are exact rationals.  Since the bases are orthogonal rather
than orthonormal, star and the Haar inner product pick up ratios of norms
but stay rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from flint import fmpq, fmpq_mat

from .exact import ONE, ZERO, to_fmpq
from .rootsys import ConfigurationError, RootSystem
from .uqmod import (Module, build_irreducible, dual, embed,
                    highest_weight_vectors, parse_q, tensor)


@lru_cache(maxsize=None)
def _irrep(R: RootSystem, qkey: str, lam: tuple) -> Module:
    return build_irreducible(R, to_fmpq(qkey), lam)


def irrep(R: RootSystem, q, lam) -> Module:
    """Cached V(lam)."""
    q = parse_q(q)
    return _irrep(R, str(q), tuple(int(x) for x in lam))


# -- tensor decomposition ---------------------------------------------------------

class Component:
    """One irreducible summand V(nu) -> V(lam1) (x) V(lam2) with lazy embedding."""

    def __init__(self, dec: "Decomposition", nu, w: dict):
        self.dec = dec
        self.nu = nu
        self.hw = w
        self.c = dec.T.inner(w, w)
        self._images = None

    @property
    def V(self) -> Module:
        return irrep(self.dec.R, self.dec.q, self.nu)

    @property
    def images(self) -> list:
        if self._images is None:
            self._images = embed(self.V, self.dec.T, self.hw)
        return self._images

    def project(self, t: dict) -> dict:
        """p_k(t): coordinates in V(nu) of the orthogonal projection of t."""
        T, V = self.dec.T, self.V
        out = {}
        for b, img in enumerate(self.images):
            s = T.inner(t, img)
            if s != 0:
                out[b] = s / (self.c * V.norms[b])
        return out

    def iota_matrix(self) -> list:
        return self.images


class Decomposition:
    def __init__(self, R, q, lam1, lam2):
        self.R, self.q = R, q
        self.lam1, self.lam2 = lam1, lam2
        self.M1, self.M2 = irrep(R, q, lam1), irrep(R, q, lam2)
        self.T = tensor(self.M1, self.M2)
        self.components = [Component(self, nu, w) for nu, w in highest_weight_vectors(self.T)]

    def by_weight(self, nu) -> list:
        return [c for c in self.components if c.nu == tuple(nu)]

    def pair_index(self, a: int, b: int) -> int:
        return a * self.M2.dim + b


@lru_cache(maxsize=None)
def _decomposition(R, qkey, lam1, lam2) -> Decomposition:
    return Decomposition(R, to_fmpq(qkey), lam1, lam2)


def decomposition(R, q, lam1, lam2) -> Decomposition:
    return _decomposition(R, str(parse_q(q)), tuple(lam1), tuple(lam2))


# -- elements ------------------------------------------------------------------------

@dataclass
class FunElem:
    R: RootSystem
    q: fmpq
    comps: dict  # lam -> fmpq_mat

    # -- construction --------------------------------------------------------
    @classmethod
    def zero(cls, R, q) -> "FunElem":
        return cls(R, parse_q(q), {})

    @classmethod
    def one(cls, R, q) -> "FunElem":
        m = fmpq_mat(1, 1)
        m[0, 0] = 1
        return cls(R, parse_q(q), {R.zero(): m})

    def module(self, lam) -> Module:
        return irrep(self.R, self.q, lam)

    def _same(self, other: "FunElem"):
        if self.R != other.R or self.q != other.q:
            raise ConfigurationError("elements live over different root systems or q")

    def _clean(self) -> "FunElem":
        self.comps = {k: v for k, v in self.comps.items() if any(x != 0 for x in v.entries())}
        return self

    # -- linear structure -------------------------------------------------------------
    def __add__(self, other: "FunElem") -> "FunElem":
        self._same(other)
        out = dict(self.comps)
        for k, v in other.comps.items():
            out[k] = out[k] + v if k in out else v
        return FunElem(self.R, self.q, out)._clean()

    def __neg__(self) -> "FunElem":
        return FunElem(self.R, self.q, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other: "FunElem") -> "FunElem":
        return self + (-other)

    def scale(self, c) -> "FunElem":
        c = to_fmpq(c)
        return FunElem(self.R, self.q, {k: v * c for k, v in self.comps.items()})._clean()

    def __mul__(self, other):
        if isinstance(other, FunElem):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunElem):
            return NotImplemented
        return (self - other).comps == {}

    def is_zero(self) -> bool:
        return not self._clean().comps

    @property
    def support(self) -> list:
        return sorted(self.comps)

    # -- evaluation ----------------------------------------------------------------------
    def __call__(self, word=()) -> fmpq:
        """a(X) for X a word of letters ("E", i) / ("F", i) / ("K", i, p), 0-based i."""
        total = ZERO
        for lam, C in self.comps.items():
            M = self.module(lam)
            for v in range(M.dim):
                col = M.apply_word(word, {v: ONE})
                for u, x in col.items():
                    c = C[u, v]
                    if c != 0:
                        total += c * x
        return total

    def to_json(self) -> dict:
        return {",".join(map(str, lam)): [[str(x) for x in row] for row in C.tolist()]
                for lam, C in sorted(self.comps.items())}


def matrix_coefficient(R: RootSystem, q, lam, u: int, v: int) -> FunElem:
    """c_{u,v}: X -> u-coordinate of X e_v."""
    M = irrep(R, q, lam)
    if not (0 <= u < M.dim and 0 <= v < M.dim):
        raise IndexError(f"indices ({u}, {v}) out of range for dim {M.dim}")
    C = fmpq_mat(M.dim, M.dim)
    C[u, v] = 1
    return FunElem(R, parse_q(q), {tuple(lam): C})


def from_legs(R, q, lam, pairs) -> FunElem:
    """sum over (functional_vec, vector_vec, coeff) of coeff * c_{f, x}.

    ``f`` and ``x`` are sparse dicts over the basis of V(lam); c_{f,x}(X) is
    sum_u f_u * (u-coordinate of X x).
    """
    M = irrep(R, q, lam)
    C = fmpq_mat(M.dim, M.dim)
    for f, x, c in pairs:
        c = to_fmpq(c)
        for u, fu in f.items():
            for v, xv in x.items():
                C[u, v] = C[u, v] + c * fu * xv
    return FunElem(R, parse_q(q), {tuple(lam): C})._clean()


# -- product -------------------------------------------------------------------------

def _component_product(Ca: fmpq_mat, Cb: fmpq_mat, comp: Component) -> fmpq_mat:
    # C_nu[b, b'] = sum_{(u1,u2),(v1,v2)} iota[(u1,u2), b] Ca[u1,v1] Cb[u2,v2] p[b', (v1,v2)]
    dec = comp.dec
    d2 = dec.M2.dim
    V = comp.V
    T = dec.T
    imgs = comp.images
    la, lb = Ca.tolist(), Cb.tolist()
    nz_a = {u: [(v, x) for v, x in enumerate(row) if x != 0] for u, row in enumerate(la)}
    nz_b = {u: [(v, x) for v, x in enumerate(row) if x != 0] for u, row in enumerate(lb)}
    # left factor: rows of iota^T (Ca (x) Cb) as sparse dicts over tensor indices
    left = []
    for img in imgs:
        acc: dict = {}
        for t, x in img.items():
            u1, u2 = divmod(t, d2)
            ra, rb = nz_a[u1], nz_b[u2]
            if not ra or not rb:
                continue
            for v1, ca in ra:
                base = v1 * d2
                s = x * ca
                for v2, cb in rb:
                    key = base + v2
                    acc[key] = acc.get(key, ZERO) + s * cb
        left.append(acc)
    out = fmpq_mat(V.dim, V.dim)
    for b2, img in enumerate(imgs):
        scale = 1 / (comp.c * V.norms[b2])
        for b, row in enumerate(left):
            s = ZERO
            for t, x in img.items():
                y = row.get(t)
                if y is not None:
                    s += y * x * T.norms[t]
            if s != 0:
                out[b, b2] = s * scale
    return out


def multiply(a: FunElem, b: FunElem, only=None) -> FunElem:
    """Product dual to Delta; ``only`` restricts the output to a set of lam."""
    a._same(b)
    out: dict = {}
    for la, Ca in a.comps.items():
        for lb, Cb in b.comps.items():
            dec = decomposition(a.R, a.q, la, lb)
            for comp in dec.components:
                if only is not None and comp.nu not in only:
                    continue
                C = _component_product(Ca, Cb, comp)
                out[comp.nu] = out[comp.nu] + C if comp.nu in out else C
    return FunElem(a.R, a.q, out)._clean()


def product(elems, R=None, q=None) -> FunElem:
    it = iter(elems)
    acc = next(it)
    for e in it:
        acc = multiply(acc, e)
    return acc


def evaluate_product(a: FunElem, b: FunElem, word) -> fmpq:
    """sum a(X_(1)) b(X_(2)) for X a word, through the tensor module."""
    total = ZERO
    for la, Ca in a.comps.items():
        for lb, Cb in b.comps.items():
            T = decomposition(a.R, a.q, la, lb).T
            d2 = irrep(a.R, a.q, lb).dim
            for v1 in range(Ca.ncols()):
                for v2 in range(d2):
                    col = T.apply_word(word, {v1 * d2 + v2: ONE})
                    for t, x in col.items():
                        u1, u2 = divmod(t, d2)
                        c = Ca[u1, v1] * Cb[u2, v2]
                        if c != 0:
                            total += c * x
    return total


# -- star ----------------------------------------------------------------------------

class _DualData:
    def __init__(self, R, q, lam):
        M = irrep(R, q, lam)
        D = dual(M)
        lam_star = R.dual_weight(lam)
        V = irrep(R, q, lam_star)
        hws = highest_weight_vectors(D)
        assert len(hws) == 1 and hws[0][0] == lam_star
        imgs = embed(V, D, hws[0][1])
        J = fmpq_mat(M.dim, V.dim)
        for b, img in enumerate(imgs):
            for t, x in img.items():
                J[t, b] = x
        self.lam_star = lam_star
        self.J = J
        self.Jinv_T = J.inv().transpose()
        self.norms = M.norms


@lru_cache(maxsize=None)
def _dual_data(R, qkey, lam) -> _DualData:
    return _DualData(R, to_fmpq(qkey), lam)


def star(a: FunElem) -> FunElem:
    """a*(X) = conj(a(S(X)^*)); maps W(lam) onto W(-w0 lam).

    With rational coefficients the conjugation is trivial.
    """
    out: dict = {}
    for lam, C in a.comps.items():
        dd = _dual_data(a.R, str(a.q), lam)
        n = dd.norms
        D = fmpq_mat(C.nrows(), C.ncols())
        for u in range(C.nrows()):
            for v in range(C.ncols()):
                c = C[u, v]
                if c != 0:
                    D[u, v] = c * n[v] / n[u]
        Cp = dd.J.transpose() * D * dd.Jinv_T
        ls = dd.lam_star
        out[ls] = out[ls] + Cp if ls in out else Cp
    return FunElem(a.R, a.q, out)._clean()


# -- regular actions and weights ----------------------------------------------------------

def _word_matrix(M: Module, word) -> fmpq_mat:
    m = fmpq_mat(M.dim, M.dim)
    for v in range(M.dim):
        for u, x in M.apply_word(word, {v: ONE}).items():
            m[u, v] = x
    return m


def left_action(word, a: FunElem) -> FunElem:
    """(X.a)(Y) = a(YX)."""
    return FunElem(a.R, a.q, {lam: C * _word_matrix(a.module(lam), word).transpose()
                              for lam, C in a.comps.items()})._clean()


def right_action(a: FunElem, word) -> FunElem:
    """(a.X)(Y) = a(XY)."""
    return FunElem(a.R, a.q, {lam: _word_matrix(a.module(lam), word).transpose() * C
                              for lam, C in a.comps.items()})._clean()


def left_weight_decompose(a: FunElem) -> dict:
    """mu -> part of a with left regular weight mu (columns of weight mu)."""
    out: dict = {}
    for lam, C in a.comps.items():
        M = a.module(lam)
        for mu, cols in M.weight_blocks().items():
            P = fmpq_mat(C.nrows(), C.ncols())
            nz = False
            for v in cols:
                for u in range(C.nrows()):
                    x = C[u, v]
                    if x != 0:
                        P[u, v] = x
                        nz = True
            if nz:
                out.setdefault(mu, FunElem(a.R, a.q, {})).comps[lam] = P
    return out


# -- Haar ----------------------------------------------------------------------------

def haar(a: FunElem) -> fmpq:
    C = a.comps.get(a.R.zero())
    return C[0, 0] if C is not None else ZERO


def haar_inner(a: FunElem, b: FunElem) -> fmpq:
    """<a, b>_h = h(b* a), computed on the W(0) part only."""
    bs = star(b)
    zero = a.R.zero()
    return haar(multiply(bs, a, only={zero}))


def haar_norm(a: FunElem) -> float:
    v = haar_inner(a, a)
    if v < 0:
        raise ArithmeticError("Haar inner product not positive")
    return math.sqrt(float(v))


def counit(a: FunElem) -> fmpq:
    return a(())


def random_element(R, q, lams, rng, density: float = 0.5, bound: int = 5) -> FunElem:
    """Random rational element supported on ``lams`` (seeded numpy Generator)."""
    comps = {}
    for lam in lams:
        M = irrep(R, q, lam)
        C = fmpq_mat(M.dim, M.dim)
        for u in range(M.dim):
            for v in range(M.dim):
                if rng.random() < density:
                    C[u, v] = fmpq(int(rng.integers(-bound, bound + 1)),
                                   int(rng.integers(1, bound + 1)))
        comps[tuple(lam)] = C
    return FunElem(R, parse_q(q), comps)._clean()


def su2_generators(q) -> dict:
    """L_{eps xi} = (. e_xi, e_eps) in rank one; '+' is index 0, '-' index 1."""
    from .rootsys import build_root_system
    R = build_root_system("A", 1)
    idx = {"+": 0, "-": 1}
    M = irrep(R, q, (1,))
    assert M.norms[0] == 1 and M.norms[1] == 1
    return {e + x: matrix_coefficient(R, q, (1,), idx[e], idx[x]) for e in "+-" for x in "+-"}
