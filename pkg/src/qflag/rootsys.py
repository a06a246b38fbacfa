"""Root systems, Weyl groups, parabolic quotients and Schubert cells.

Weights and roots share one integer lattice: fundamental-weight
coordinates.  The simple root alpha_i is row i of the Cartan matrix, whose
entries follow a_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


class ConfigurationError(ValueError):
    """Unsupported or inconsistent input (CLI exit code 2)."""


# symmetrised Gram matrices (alpha_i, alpha_j), short roots have length^2 = 2
def _gram_A(n):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)]
            for i in range(n)]


_GRAMS = {
    ("A", 1): _gram_A(1),
    ("A", 2): _gram_A(2),
    ("A", 3): _gram_A(3),
    ("A", 4): _gram_A(4),
    ("B", 2): [[4, -2], [-2, 2]],
    ("B", 3): [[4, -2, 0], [-2, 4, -2], [0, -2, 2]],
    ("C", 2): [[2, -2], [-2, 4]],
    ("C", 3): [[2, -1, 0], [-1, 2, -2], [0, -2, 4]],
    ("D", 4): [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]],
    ("G", 2): [[2, -3], [-3, 6]],
}


def supported_types() -> list[tuple[str, int]]:
    return sorted(_GRAMS)


Weight = tuple  # fundamental-weight coordinates


@dataclass(frozen=True)
class RootSystem:
    cartan_type: str
    rank: int
    gram: tuple          # (alpha_i, alpha_j)
    cartan: tuple        # a_ij
    d: tuple             # d_i = (alpha_i, alpha_i) / 2
    simple_roots: tuple  # alpha_i in fundamental-weight coordinates
    positive_roots: tuple = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.cartan_type}{self.rank}"

    def zero(self) -> Weight:
        return (0,) * self.rank

    def fundamental(self, i: int) -> Weight:
        """varpi_i, with i counted from 1."""
        return tuple(1 if j == i - 1 else 0 for j in range(self.rank))

    def alpha(self, i: int) -> Weight:
        return self.simple_roots[i - 1]

    def rho(self) -> Weight:
        return (1,) * self.rank

    # -- the invariant form ---------------------------------------------------
    @property
    def form_matrix(self) -> tuple:
        return _form_matrix(self)

    def form(self, mu, nu) -> Fraction:
        f = self.form_matrix
        return sum((Fraction(mu[i]) * f[i][j] * nu[j]
                    for i in range(self.rank) for j in range(self.rank)),
                   Fraction(0))

    def pair_simple(self, mu, i: int) -> int:
        """(mu, alpha_i) = d_i m_i, i counted from 1."""
        return self.d[i - 1] * mu[i - 1]

    def simple_coords(self, mu) -> tuple:
        """Coordinates of mu in the simple-root basis (exact rationals)."""
        return _solve_transpose(self.cartan, mu)

    def is_dominant(self, mu) -> bool:
        return all(m >= 0 for m in mu)

    def dominates(self, lam, mu) -> bool:
        """mu <= lam in the dominance order."""
        diff = tuple(a - b for a, b in zip(lam, mu))
        c = self.simple_coords(diff)
        return all(x >= 0 and x.denominator == 1 for x in c)

    def is_positive_root(self, mu) -> bool:
        return tuple(mu) in set(self.positive_roots)

    def reflect(self, mu, i: int) -> Weight:
        m = mu[i - 1]
        a = self.simple_roots[i - 1]
        return tuple(x - m * y for x, y in zip(mu, a))

    def dual_weight(self, lam) -> Weight:
        """-w_0 lam: highest weight of the dual module."""
        w0 = weyl_group(self).longest
        return tuple(-x for x in w0.act(lam))


def _solve_transpose(cartan, mu):
    # mu = A^T c
    n = len(mu)
    a = [[Fraction(cartan[j][i]) for j in range(n)] + [Fraction(mu[i])]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


@lru_cache(maxsize=None)
def _form_matrix(R: RootSystem) -> tuple:
    # (varpi_i, varpi_k) = (A^{-1})_{ik} d_k
    n = R.rank
    rows = []
    for k in range(n):
        e = tuple(1 if j == k else 0 for j in range(n))
        # column k of A^{-1}: solve A x = e_k  <=>  x = A^{-1} e_k
        x = _solve_transpose(tuple(zip(*R.cartan)), e)
        rows.append(x)
    inv = [[rows[k][i] for k in range(n)] for i in range(n)]
    return tuple(tuple(inv[i][k] * R.d[k] for k in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def build_root_system(cartan_type: str, rank: int) -> RootSystem:
    key = (cartan_type.upper(), int(rank))
    if key not in _GRAMS:
        raise ConfigurationError(
            f"unsupported root system {cartan_type}{rank}; "
            f"supported: {', '.join(t + str(r) for t, r in supported_types())}")
    g = _GRAMS[key]
    n = key[1]
    d = tuple(g[i][i] // 2 for i in range(n))
    cartan = tuple(tuple(2 * g[i][j] // g[j][j] for j in range(n)) for i in range(n))
    simple = tuple(tuple(row) for row in cartan)
    R = RootSystem(key[0], n, tuple(map(tuple, g)), cartan, d, simple, ())
    roots = _reflection_closure(R)
    object.__setattr__(R, "positive_roots", roots)
    return R


def _reflection_closure(R: RootSystem) -> tuple:
    seen = set(R.simple_roots)
    frontier = list(R.simple_roots)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(1, R.rank + 1):
                gamma = R.reflect(beta, i)
                c = R.simple_coords(gamma)
                if all(x >= 0 for x in c) and gamma not in seen:
                    seen.add(gamma)
                    new.append(gamma)
        frontier = new
    return tuple(sorted(seen, key=lambda b: (sum(R.simple_coords(b)), b)))


# -- Weyl group -----------------------------------------------------------------

def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def reflection_matrix(R: RootSystem, i: int) -> tuple:
    """Matrix of s_i on fundamental-weight coordinates (column vectors)."""
    n = R.rank
    a = R.simple_roots[i - 1]
    return tuple(tuple((1 if r == c else 0) - (a[r] if c == i - 1 else 0)
                       for c in range(n)) for r in range(n))


@dataclass(frozen=True, eq=False)
class WeylElement:
    R: RootSystem = field(repr=False)
    word: tuple
    action: tuple = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.action == other.action

    def __hash__(self):
        return hash(self.action)

    def __len__(self):
        return len(self.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, mu) -> Weight:
        return tuple(sum(self.action[r][c] * mu[c] for c in range(len(mu)))
                     for r in range(len(mu)))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return weyl_group(self.R).lookup(_matmul(self.action, other.action))

    def inverse(self) -> "WeylElement":
        return element_from_word(self.R, tuple(reversed(self.word)))

    def to_json(self) -> dict:
        return {"word": list(self.word), "length": self.length,
                "action": [list(r) for r in self.action]}


class WeylGroup:
    """Finite Weyl group enumerated by breadth-first search on right multiplication.

    Within each length level elements are visited in lexicographic order of
    their words and extended by s_1, s_2, ...; the first word that reaches
    an element is then the lexicographically smallest reduced word.
    """

    def __init__(self, R: RootSystem):
        self.R = R
        n = R.rank
        gens = [reflection_matrix(R, i) for i in range(1, n + 1)]
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        self._by_action = {ident: WeylElement(R, (), ident)}
        level = [self._by_action[ident]]
        while level:
            nxt = []
            for w in sorted(level, key=lambda x: x.word):
                for i, g in enumerate(gens, start=1):
                    m = _matmul(w.action, g)
                    if m not in self._by_action:
                        e = WeylElement(R, w.word + (i,), m)
                        self._by_action[m] = e
                        nxt.append(e)
            level = nxt
        self.elements = sorted(self._by_action.values(), key=lambda w: (w.length, w.word))
        self.identity = self._by_action[ident]
        self.longest = self.elements[-1]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def lookup(self, action) -> WeylElement:
        return self._by_action[action]

    def s(self, i: int) -> WeylElement:
        return self.lookup(reflection_matrix(self.R, i))


@lru_cache(maxsize=None)
def weyl_group(R: RootSystem) -> WeylGroup:
    return WeylGroup(R)


def weyl_enumerate(R: RootSystem) -> list[WeylElement]:
    return list(weyl_group(R).elements)


def element_from_word(R: RootSystem, word) -> WeylElement:
    n = R.rank
    m = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    for i in word:
        if not 1 <= i <= n:
            raise ConfigurationError(f"simple reflection index {i} out of range 1..{n}")
        m = _matmul(m, reflection_matrix(R, i))
    return weyl_group(R).lookup(m)


def length(w: WeylElement) -> int:
    """Number of positive roots sent to negative roots (inversion count)."""
    R = w.R
    return sum(1 for beta in R.positive_roots
               if any(c < 0 for c in R.simple_coords(w.act(beta))))


def is_reduced(R: RootSystem, word) -> bool:
    return element_from_word(R, word).length == len(word)


def reduced_words(w: WeylElement) -> list[tuple]:
    """All reduced words of w (depth-first over right descents)."""
    R = w.R
    if w.length == 0:
        return [()]
    out = []
    for i in range(1, R.rank + 1):
        ws = w * weyl_group(R).s(i)
        if ws.length < w.length:
            out.extend(word + (i,) for word in reduced_words(ws))
    return sorted(out)


def parabolic_subgroup(R: RootSystem, S) -> list[WeylElement]:
    S = _check_subset(R, S)
    return [w for w in weyl_group(R) if set(w.word) <= S]


def _check_subset(R: RootSystem, S) -> frozenset:
    S = frozenset(int(i) for i in S)
    bad = [i for i in S if not 1 <= i <= R.rank]
    if bad:
        raise ConfigurationError(f"S contains indices {bad} outside 1..{R.rank}")
    return S


def minimal_coset_reps(R: RootSystem, S) -> list[WeylElement]:
    """W^S = {w : l(w s_i) > l(w) for all i in S}, ordered by (length, word)."""
    S = _check_subset(R, S)
    G = weyl_group(R)
    return [w for w in G if all((w * G.s(i)).length > w.length for i in S)]


def coset_factorize(w: WeylElement, S) -> tuple[WeylElement, WeylElement]:
    """w = u v with u in W^S, v in W_S and l(w) = l(u) + l(v)."""
    R = w.R
    S = _check_subset(R, S)
    G = weyl_group(R)
    u = w
    tail: list[int] = []
    changed = True
    while changed:
        changed = False
        for i in sorted(S):
            us = u * G.s(i)
            if us.length < u.length:
                u = us
                tail.insert(0, i)
                changed = True
                break
    return u, element_from_word(R, tuple(tail))


@dataclass(frozen=True)
class SchubertCell:
    w: WeylElement
    dim: int


def schubert_cells(R: RootSystem, S) -> list[SchubertCell]:
    return [SchubertCell(w, w.length)
            for w in sorted(minimal_coset_reps(R, S), key=lambda x: (x.length, x.word))]


def poincare_polynomial(ws) -> list[int]:
    """Coefficients of sum_w x^{l(w)}."""
    top = max((w.length for w in ws), default=0)
    coeffs = [0] * (top + 1)
    for w in ws:
        coeffs[w.length] += 1
    return coeffs


@dataclass(frozen=True)
class PoissonDescriptor:
    S: tuple
    R_S: tuple
    k_S_generators: tuple
    k_S0_generators: tuple
    center_dim: int
    statement: str

    def to_json(self) -> dict:
        return {"S": list(self.S), "R_S_positive": [list(b) for b in self.R_S],
                "k_S_generators": list(self.k_S_generators),
                "k_S0_generators": list(self.k_S0_generators),
                "center_dim": self.center_dim, "statement": self.statement}


def poisson_subgroup_descriptor(R: RootSystem, S) -> PoissonDescriptor:
    S = _check_subset(R, S)
    roots = tuple(b for b in R.positive_roots
                  if all(c == 0 for j, c in enumerate(R.simple_coords(b), start=1)
                         if j not in S))
    ks = tuple([f"K_{i}^(+-1)" for i in range(1, R.rank + 1)]
               + [f"X_{j}^(+-)" for j in sorted(S)])
    ks0 = tuple([f"K_{j}^(+-1)" for j in sorted(S)]
                + [f"X_{j}^(+-)" for j in sorted(S)])
    c = R.rank - len(S)
    statement = (f"connected Poisson-Lie subgroups K with K_S^0 <= K <= K_S correspond "
                 f"to subtori of the rank-{c} central torus of K_S")
    return PoissonDescriptor(tuple(sorted(S)), roots, ks, ks0, c, statement)
