"""Quantized flag manifolds: Plücker coordinates, A_Lambda, A_S and the
invariant subalgebras C_q[U/K_S], C_q[U/K_S^0].

Every subspace handled here is invariant under the right regular action,
which moves only the functional leg of a matrix coefficient.  Such a
subspace of W(lam) is V(lam)^* (x) L for a subspace L of V(lam) (the
vector leg), so a graded span is stored as one L per (lam, weight).
Products of spans are computed on vector legs:

    c_{f,x} c_{g,y} = sum_k c_{(f (x) g) o iota_k, p_k(x (x) y)},

and because f (x) g runs over all functionals, the span of the product
family in V(nu) is spanned by the vectors p_k(x (x) y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from flint import fmpq_mat

from .characters import tensor_power_highest_weights
from .exact import ONE, rref
from .funalg import decomposition, from_legs, irrep, matrix_coefficient, star
from .rootsys import ConfigurationError, RootSystem, _check_subset
from .uqmod import DomainError, invariant_vectors, parse_q

ALGTHM_TAG = "generation:A_Lambda=C_q[U/K_S]"
SSA_TAG = "generation:C_q[U/K_S0]=<f_k,g_l*>"
A0_TAG = "proper-inclusion:A_Lambda0<C_q[U/K_S0]"


@dataclass(frozen=True)
class FlagWeight:
    R: RootSystem
    S: frozenset
    Lam: tuple

    @classmethod
    def make(cls, R: RootSystem, S, Lam) -> "FlagWeight":
        S = _check_subset(R, S)
        Lam = tuple(int(x) for x in Lam)
        if len(Lam) != R.rank:
            raise ConfigurationError(f"Lambda {Lam} has wrong length for rank {R.rank}")
        for i, m in enumerate(Lam, start=1):
            if i in S and m != 0:
                raise ConfigurationError(f"Lambda must vanish on S (coordinate {i})")
            if i not in S and m <= 0:
                raise ConfigurationError(f"Lambda must be positive off S (coordinate {i})")
        return cls(R, S, Lam)

    @property
    def dual(self) -> tuple:
        return self.R.dual_weight(self.Lam)


# -- graded spans of vector legs ---------------------------------------------------

class LegSpan:
    """Subspaces L_(lam, mu) of V(lam)_mu, kept in reduced echelon form."""

    def __init__(self, R: RootSystem, q, degree: int = 0):
        self.R = R
        self.q = parse_q(q)
        self.degree = degree
        self.pieces: dict = {}  # (lam, mu) -> list of sparse dicts

    def module(self, lam):
        return irrep(self.R, self.q, lam)

    def _block(self, lam, mu) -> list:
        return self.module(lam).weight_blocks().get(mu, [])

    def add(self, lam, vec: dict) -> bool:
        """Insert a weight vector; returns True if the span grew."""
        if not vec:
            return False
        lam = tuple(lam)
        M = self.module(lam)
        mu = M.weights[next(iter(vec))]
        key = (lam, mu)
        old = self.pieces.get(key, [])
        block = self._block(lam, mu)
        if len(old) == len(block):
            return False
        new = _echelon(old + [vec], block)
        if len(new) > len(old):
            self.pieces[key] = new
            return True
        return False

    def update(self, other: "LegSpan") -> "LegSpan":
        for (lam, _), vecs in other.pieces.items():
            for v in vecs:
                self.add(lam, v)
        self.degree = max(self.degree, other.degree)
        return self

    def lams(self) -> list:
        return sorted({lam for lam, _ in self.pieces})

    def vectors(self, lam) -> list:
        lam = tuple(lam)
        out = []
        for (l, mu), vecs in sorted(self.pieces.items()):
            if l == lam:
                out.extend((mu, v) for v in vecs)
        return out

    def leg_dim(self, lam, mu=None) -> int:
        lam = tuple(lam)
        return sum(len(v) for (l, m), v in self.pieces.items()
                   if l == lam and (mu is None or m == tuple(mu)))

    def rank(self, lam, mu=None) -> int:
        """Dimension of the span inside W(lam): dim V(lam) * dim L."""
        return self.module(lam).dim * self.leg_dim(lam, mu)

    def weights(self) -> set:
        return {mu for (_, mu), v in self.pieces.items() if v}

    def contains(self, other: "LegSpan") -> bool:
        for (lam, mu), vecs in other.pieces.items():
            mine = self.pieces.get((lam, mu), [])
            if len(_echelon(mine + vecs, self._block(lam, mu))) != len(mine):
                return False
        return True

    def equals(self, other: "LegSpan") -> bool:
        return self.contains(other) and other.contains(self)

    def elements(self, lam=None) -> list:
        """A basis of the span as FunElems c_{e_u, x}."""
        out = []
        for l in ([tuple(lam)] if lam is not None else self.lams()):
            M = self.module(l)
            for _, x in self.vectors(l):
                for u in range(M.dim):
                    out.append(from_legs(self.R, self.q, l, [({u: ONE}, x, 1)]))
        return out

    def summary(self) -> dict:
        return {lam: self.leg_dim(lam) for lam in self.lams()}


def _echelon(vecs: list, block: list) -> list:
    if not vecs:
        return []
    pos = {b: k for k, b in enumerate(block)}
    m = fmpq_mat(len(vecs), len(block))
    for r, v in enumerate(vecs):
        for b, x in v.items():
            m[r, pos[b]] = x
    red, rk, _ = rref(m)
    rows = red.tolist()[:rk]
    return [{block[k]: x for k, x in enumerate(row) if x != 0} for row in rows]


def legs_of(elems) -> LegSpan:
    """Vector-leg span of the right-invariant span generated by FunElems.

    The smallest right-invariant subspace containing c = sum C[u,v] c_{u,v}
    in W(lam) is V(lam)^* (x) (row space of C); rows are split by weight.
    """
    elems = list(elems)
    if not elems:
        raise ValueError("need at least one element")
    out = LegSpan(elems[0].R, elems[0].q)
    for a in elems:
        for lam, C in a.comps.items():
            M = out.module(lam)
            blocks = M.weight_blocks()
            for row in C.tolist():
                for mu, cols in blocks.items():
                    vec = {v: row[v] for v in cols if row[v] != 0}
                    out.add(lam, vec)
    return out


def family_product(A: LegSpan, B: LegSpan, targets=None) -> LegSpan:
    """Vector legs of span{a b : a in A, b in B}; ``targets`` limits the output lam."""
    out = LegSpan(A.R, A.q, A.degree + B.degree)
    for la in A.lams():
        xs = A.vectors(la)
        for lb in B.lams():
            ys = B.vectors(lb)
            dec = decomposition(A.R, A.q, la, lb)
            d2 = dec.M2.dim
            comps = [c for c in dec.components if targets is None or c.nu in targets]
            for comp in comps:
                for mx, x in xs:
                    for my, y in ys:
                        mu = tuple(s + t for s, t in zip(mx, my))
                        if out.leg_dim(comp.nu, mu) == len(out._block(comp.nu, mu)):
                            continue
                        t = {}
                        for i, xi in x.items():
                            for j, yj in y.items():
                                t[i * d2 + j] = xi * yj
                        out.add(comp.nu, comp.project(t))
    return out


def constants(R, q) -> LegSpan:
    L = LegSpan(R, q, 0)
    L.add(R.zero(), {0: ONE})
    return L


def generated_span(gens: LegSpan, max_degree: int, targets=None) -> LegSpan:
    """Span of all products of at most ``max_degree`` elements of ``gens``.

    Only the last multiplication is restricted to ``targets``; lower degrees
    are computed in full since they feed later products.
    """
    total = constants(gens.R, gens.q)
    power = constants(gens.R, gens.q)
    for n in range(1, max_degree + 1):
        power = family_product(power, gens, targets if n == max_degree else None)
        power.degree = n
        total.update(power)
    total.degree = max_degree
    if targets is not None:
        keep = LegSpan(gens.R, gens.q, max_degree)
        for (lam, _), vecs in total.pieces.items():
            if lam in targets:
                for v in vecs:
                    keep.add(lam, v)
        return keep
    return total


# -- Plücker coordinates --------------------------------------------------------------

def plucker_generators(fw: FlagWeight, q) -> tuple[list, list]:
    """Holomorphic f_Lam = c_{e_u, v_Lam} for every basis functional, and their stars."""
    M = irrep(fw.R, q, fw.Lam)
    hol = [matrix_coefficient(fw.R, q, fw.Lam, u, 0) for u in range(M.dim)]
    return hol, [star(f) for f in hol]


def highest_leg(R, q, lam) -> LegSpan:
    L = LegSpan(R, q, 1)
    L.add(tuple(lam), {0: ONE})
    return L


def lowest_leg(R, q, lam) -> LegSpan:
    """Vector leg of g_lam^*: the lowest weight line of V(-w0 lam)."""
    lam_star = R.dual_weight(lam)
    M = irrep(R, q, lam_star)
    low = tuple(-x for x in lam)
    L = LegSpan(R, q, 1)
    for b, mu in enumerate(M.weights):
        if mu == low:
            L.add(lam_star, {b: ONE})
    return L


def a_lambda_degree1(fw: FlagWeight, q) -> LegSpan:
    """Span of the products f_Lam g_Lam^* (all f, g)."""
    out = family_product(highest_leg(fw.R, q, fw.Lam), lowest_leg(fw.R, q, fw.Lam))
    out.degree = 1
    return out


def factorized_components(R: RootSystem, S, lam, q) -> LegSpan:
    """Span of f_lam g_lam^* for a single lam supported on Sigma minus S."""
    S = _check_subset(R, S)
    lam = tuple(int(x) for x in lam)
    if any(x < 0 for x in lam):
        raise DomainError(f"{lam} is not dominant")
    if any(lam[j - 1] != 0 for j in S):
        raise DomainError(f"{lam} is not supported on the complement of S")
    out = family_product(highest_leg(R, q, lam), lowest_leg(R, q, lam))
    out.degree = 1
    return out


def invariant_component(R: RootSystem, lam, S, mode: str, q) -> LegSpan:
    """Vector legs of C_q[U/K_S] (mode K_S) or C_q[U/K_S^0] (mode K_S0) in W(lam)."""
    S = _check_subset(R, S)
    L = LegSpan(R, q)
    M = irrep(R, q, lam)
    for _, v in invariant_vectors(M, S, mode):
        L.add(tuple(lam), v)
    return L


# -- reachability ------------------------------------------------------------------------

def reachable_algthm(fw: FlagWeight, d: int) -> list:
    """Highest weights in V(Lam)^{(x)k} (x) (V(Lam)^*)^{(x)m}, k + m <= d."""
    out = set()
    for k in range(d + 1):
        for m in range(d + 1 - k):
            out.update(tensor_power_highest_weights(fw.R, [fw.Lam] * k + [fw.dual] * m))
    return sorted(out)


def reachable_ss(R: RootSystem, S, d: int) -> list:
    """(lam, mu) with lam in a tensor product of at most d generator modules
    V(varpi_k) / V(varpi_l)^* (k, l off S) and mu the sum of their left weights."""
    S = _check_subset(R, S)
    free = [k for k in range(1, R.rank + 1) if k not in S]
    gens = []
    for k in free:
        gens.append((R.fundamental(k), R.fundamental(k)))
        gens.append((R.dual_weight(R.fundamental(k)), tuple(-x for x in R.fundamental(k))))
    out = set()
    for n in range(d + 1):
        for combo in combinations_with_replacement(range(len(gens)), n):
            mods = [gens[c][0] for c in combo]
            mu = tuple(sum(gens[c][1][t] for c in combo) for t in range(R.rank))
            for lam in tensor_power_highest_weights(R, mods):
                out.add((lam, mu))
    return sorted(out)


# -- reports ---------------------------------------------------------------------------------

@dataclass
class Report:
    claim: str
    verdict: str
    rows: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_json(self) -> dict:
        return {"claim": self.claim, "verdict": self.verdict, "rows": self.rows,
                "info": self.info}


def _fmt(w) -> list:
    return [int(x) for x in w]


def verify_theorem_algthm(fw: FlagWeight, d: int, q="1/2", as_cutoff: int | None = None) -> Report:
    """Compare A_Lambda (generated to degree d) with C_q[U/K_S] on every reachable lam.

    Also reports the factorized span A_S restricted to lam' supported off S
    with coordinate sum at most ``as_cutoff`` (default d * |Lambda|).
    """
    R = fw.R
    reach = reachable_algthm(fw, d)
    gens = a_lambda_degree1(fw, q)
    span = generated_span(gens, d, targets=set(reach))
    if as_cutoff is None:
        as_cutoff = d * sum(fw.Lam)
    fact = LegSpan(R, q)
    for lam in _dominant_upto(R, as_cutoff, support_off=fw.S):
        fact.update(factorized_components(R, fw.S, lam, q))
    rows = []
    ok = True
    for lam in reach:
        inv = invariant_component(R, lam, fw.S, "K_S", q)
        gen_piece = _restrict(span, lam)
        contained = inv.contains(gen_piece)
        r_gen = span.rank(lam)
        r_inv = inv.rank(lam)
        r_fact = fact.rank(lam)
        good = contained and r_gen == r_inv
        ok &= good
        rows.append({"claim": ALGTHM_TAG, "lambda": _fmt(lam), "rank_generated": r_gen,
                     "dim_invariant": r_inv, "contained": contained,
                     "rank_factorized": r_fact, "factorized_equal": r_fact == r_inv,
                     "verdict": "PASS" if good else "FAIL"})
    # invariant pieces of comparable size that degree d does not reach
    unreached = [lam for lam in _dominant_upto(R, as_cutoff) if lam not in set(reach)
                 and invariant_component(R, lam, fw.S, "K_S", q).leg_dim(lam) > 0]
    info = {"type": R.name, "S": sorted(fw.S), "Lambda": _fmt(fw.Lam), "degree": d,
            "factorized_cutoff": as_cutoff,
            "unreached": [_fmt(l) for l in unreached]}
    return Report(ALGTHM_TAG, "PASS" if ok else "FAIL", rows, info)


def _restrict(span: LegSpan, lam) -> LegSpan:
    out = LegSpan(span.R, span.q, span.degree)
    for mu, v in span.vectors(lam):
        out.add(lam, v)
    return out


def _dominant_upto(R, total: int, support_off=frozenset()):
    def rec(i, left):
        if i == R.rank:
            yield ()
            return
        rng = [0] if (i + 1) in support_off else range(left + 1)
        for m in rng:
            for rest in rec(i + 1, left - m):
                yield (m,) + rest
    return sorted(rec(0, total))


def ss_generators(R: RootSystem, S, q) -> LegSpan:
    """Vector legs of f_k and g_l^* for k, l off S."""
    S = _check_subset(R, S)
    g = LegSpan(R, q, 1)
    for k in range(1, R.rank + 1):
        if k in S:
            continue
        g.update(highest_leg(R, q, R.fundamental(k)))
        g.update(lowest_leg(R, q, R.fundamental(k)))
    g.degree = 1
    return g


def verify_theorem_ss_a(R: RootSystem, S, d: int, q="1/2") -> Report:
    S = _check_subset(R, S)
    reach = reachable_ss(R, S, d)
    lams = {lam for lam, _ in reach}
    gens = ss_generators(R, S, q)
    span = generated_span(gens, d, targets=lams) if gens.pieces else constants(R, q)
    rows = []
    ok = True
    inv_cache = {}
    for lam, mu in reach:
        if lam not in inv_cache:
            inv_cache[lam] = invariant_component(R, lam, S, "K_S0", q)
        inv = inv_cache[lam]
        dim_v = irrep(R, q, lam).dim
        r_gen = dim_v * span.leg_dim(lam, mu)
        r_inv = dim_v * inv.leg_dim(lam, mu)
        good = r_gen == r_inv
        ok &= good
        rows.append({"claim": SSA_TAG, "lambda": _fmt(lam), "left_weight": _fmt(mu),
                     "rank_generated": r_gen, "dim_invariant": r_inv,
                     "verdict": "PASS" if good else "FAIL"})
    contained = all(inv_cache.setdefault(lam, invariant_component(R, lam, S, "K_S0", q))
                    .contains(_restrict(span, lam)) for lam in span.lams())
    ok &= contained
    info = {"type": R.name, "S": sorted(S), "degree": d, "contained": contained}
    return Report(SSA_TAG, "PASS" if ok else "FAIL", rows, info)


def check_a0_proper(fw: FlagWeight, d: int = 2, q="1/2") -> Report:
    """Look for left weights of C_q[U/K_S^0] outside the lattice Z.Lambda.

    A_Lambda^0 is generated by f_Lam (left weight Lam) and g_Lam^* (left
    weight -Lam), so its left weights lie in Z.Lam.  Candidate weights of
    C_q[U/K_S^0] are collected from V(lam), lam of coordinate sum <= d.
    """
    R = fw.R
    if len(fw.S) == R.rank:
        return Report(A0_TAG, "NOT-APPLICABLE", [], {"reason": "S = Sigma"})
    present = {}
    for lam in _dominant_upto(R, d):
        M = irrep(R, q, lam)
        for mu, _ in invariant_vectors(M, fw.S, "K_S0"):
            present.setdefault(mu, lam)
    witnesses = []
    for mu, lam in sorted(present.items()):
        if not _in_line(mu, fw.Lam):
            witnesses.append({"left_weight": _fmt(mu), "lambda": _fmt(lam)})
    verdict = "PROPER" if witnesses else "NO-WEIGHT-WITNESS"
    rows = [dict(w, claim=A0_TAG) for w in witnesses]
    info = {"type": R.name, "S": sorted(fw.S), "Lambda": _fmt(fw.Lam), "degree": d,
            "weights_present": [_fmt(m) for m in sorted(present)]}
    return Report(A0_TAG, verdict, rows, info)


def _in_line(mu, lam) -> bool:
    """mu in Z.lam?"""
    k = None
    for a, b in zip(mu, lam):
        if b == 0:
            if a != 0:
                return False
            continue
        if a % b:
            return False
        if k is None:
            k = a // b
        elif k != a // b:
            return False
    return True
