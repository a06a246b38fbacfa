"""Classical character oracles: Weyl dimension, Freudenthal multiplicities,
Brauer-Klimyk tensor decomposition and parabolic branching counts.

These never touch q; they serve as independent checks of the exact module
constructions in :mod:`qflag.uqmod`.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache

from .rootsys import RootSystem, parabolic_subgroup, weyl_group


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def weyl_dimension(R: RootSystem, lam) -> int:
    rho = R.rho()
    lr = _add(lam, rho)
    num = Fraction(1)
    for beta in R.positive_roots:
        num *= R.form(lr, beta) / R.form(rho, beta)
    assert num.denominator == 1
    return int(num)


@lru_cache(maxsize=None)
def weight_multiplicities(R: RootSystem, lam: tuple) -> dict:
    """Freudenthal's recursion; returns {weight: multiplicity}."""
    lam = tuple(lam)
    rho = R.rho()
    lr = _add(lam, rho)
    top = R.form(lr, lr)
    mult = {lam: 1}
    # walk down by depth in the simple-root grading
    level = {lam}
    while level:
        nxt = set()
        for mu in level:
            for a in R.simple_roots:
                nxt.add(_sub(mu, a))
        cand = sorted(nxt)
        new_level = set()
        for mu in cand:
            if mu in mult:
                continue
            if not R.dominates(lam, mu):
                continue
            s = Fraction(0)
            for beta in R.positive_roots:
                k = 1
                while True:
                    nu = tuple(x + k * y for x, y in zip(mu, beta))
                    if not R.dominates(lam, nu):
                        break
                    m = mult.get(nu, 0)
                    if m:
                        s += m * R.form(nu, beta)
                    k += 1
            mr = _add(mu, rho)
            den = top - R.form(mr, mr)
            if den == 0:
                continue
            val = 2 * s / den
            assert val.denominator == 1
            if val:
                mult[mu] = int(val)
                new_level.add(mu)
        level = new_level
    return mult


def dominant_conjugate(R: RootSystem, mu):
    """(dominant weight, sign of the reflecting element) via simple reflections."""
    mu = tuple(mu)
    sign = 1
    while True:
        i = next((j for j, m in enumerate(mu, start=1) if m < 0), None)
        if i is None:
            return mu, sign
        mu = R.reflect(mu, i)
        sign = -sign


def tensor_decomposition(R: RootSystem, lam, mu) -> Counter:
    """Multiplicities of V(nu) in V(lam) (x) V(mu) by Brauer-Klimyk."""
    rho = R.rho()
    out: Counter = Counter()
    for beta, m in weight_multiplicities(R, tuple(mu)).items():
        x = _add(_add(lam, beta), rho)
        if any(c == 0 for c in x):
            continue
        # dot action: reflect x to the dominant chamber, counting the sign
        y, sign = _reflect_regular(R, x)
        if y is None:
            continue
        out[_sub(y, rho)] += sign * m
    return Counter({k: v for k, v in out.items() if v})


def _reflect_regular(R, x):
    sign = 1
    while True:
        if any(c == 0 for c in x):
            return None, 0
        i = next((j for j, m in enumerate(x, start=1) if m < 0), None)
        if i is None:
            return x, sign
        x = R.reflect(x, i)
        sign = -sign


def tensor_power_highest_weights(R: RootSystem, factors) -> Counter:
    """Highest weights (with multiplicity) of V(f_1) (x) ... (x) V(f_k)."""
    acc = Counter({R.zero(): 1})
    for f in factors:
        nxt: Counter = Counter()
        for nu, m in acc.items():
            for k, v in tensor_decomposition(R, nu, f).items():
                nxt[k] += m * v
        acc = nxt
    return acc


def parabolic_branching_count(R: RootSystem, lam, S, mu) -> int:
    """dim of {v in V(lam)_mu : E_j v = F_j v = 0 for j in S}.

    Counts multiplicity of the trivial sl2^S-module in the mu-weight slice:
    sum over w in W_S of sign(w) * mult_lam(mu + rho_S - w rho_S).
    """
    S = sorted(S)
    mults = weight_multiplicities(R, tuple(lam))
    if not S:
        return mults.get(tuple(mu), 0)
    # rho_S = half sum of positive roots of R_S; as a weight vector
    rs = [b for b in R.positive_roots
          if all(c == 0 for j, c in enumerate(R.simple_coords(b), start=1) if j not in S)]
    two_rho = tuple(sum(b[k] for b in rs) for k in range(R.rank))
    total = 0
    for w in parabolic_subgroup(R, S):
        shift = _sub(two_rho, w.act(two_rho))
        assert all(s % 2 == 0 for s in shift)
        nu = tuple(m + s // 2 for m, s in zip(mu, shift))
        total += (-1) ** w.length * mults.get(nu, 0)
    return total


def character_is_weyl_invariant(R: RootSystem, lam) -> bool:
    m = weight_multiplicities(R, tuple(lam))
    return all(m.get(w.act(mu), 0) == k for w in weyl_group(R) for mu, k in m.items())
