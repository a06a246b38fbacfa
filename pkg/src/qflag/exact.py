"""Exact rational linear algebra over python-flint's ``fmpq``.

Vectors that live in big modules are kept sparse as ``{index: fmpq}`` dicts;
dense work (row reduction, kernels, inverses) is handed to ``fmpq_mat``.
"""

from __future__ import annotations

from fractions import Fraction

from flint import fmpq, fmpq_mat

ZERO = fmpq(0)
ONE = fmpq(1)


def to_fmpq(x) -> fmpq:
    """Coerce ints, Fractions, ``"p/r"`` strings and fmpq to fmpq."""
    if isinstance(x, fmpq):
        return x
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, str):
        p, _, r = x.strip().partition("/")
        return fmpq(int(p), int(r or 1))
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def qstr(x: fmpq) -> str:
    return str(x)


# -- sparse vectors ---------------------------------------------------------

def sp_axpy(acc: dict, c, vec: dict) -> dict:
    """acc += c * vec, in place; drops exact zeros."""
    if c == 0:
        return acc
    for k, v in vec.items():
        s = acc.get(k, ZERO) + c * v
        if s == 0:
            acc.pop(k, None)
        else:
            acc[k] = s
    return acc


def sp_scale(c, vec: dict) -> dict:
    if c == 0:
        return {}
    return {k: c * v for k, v in vec.items()}


def sp_dot(x: dict, y: dict, weights=None):
    """Sum_k x_k y_k (w_k); ``weights`` is an indexable diagonal Gram."""
    if len(x) > len(y):
        x, y = y, x
    s = ZERO
    if weights is None:
        for k, v in x.items():
            w = y.get(k)
            if w is not None:
                s += v * w
    else:
        for k, v in x.items():
            w = y.get(k)
            if w is not None:
                s += v * w * weights[k]
    return s


def sp_apply(op: dict, vec: dict) -> dict:
    """Apply a sparse operator ``{col: {row: coeff}}`` to a sparse vector."""
    out: dict = {}
    for k, v in vec.items():
        col = op.get(k)
        if col:
            sp_axpy(out, v, col)
    return out


def sp_to_dense(vec: dict, index: list[int]) -> list:
    return [vec.get(k, ZERO) for k in index]


# -- dense helpers ------------------------------------------------------------

def mat(rows: list[list]) -> fmpq_mat:
    n = len(rows)
    m = len(rows[0]) if n else 0
    return fmpq_mat(n, m, [to_fmpq(x) for row in rows for x in row])


def zeros(n: int, m: int) -> fmpq_mat:
    return fmpq_mat(n, m)


def identity(n: int) -> fmpq_mat:
    out = fmpq_mat(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def rows_of(m: fmpq_mat) -> list[list[fmpq]]:
    return m.tolist()


def kron(a: fmpq_mat, b: fmpq_mat) -> fmpq_mat:
    ar, ac, br, bc = a.nrows(), a.ncols(), b.nrows(), b.ncols()
    al, bl = a.tolist(), b.tolist()
    entries = []
    for i in range(ar):
        arow = al[i]
        for k in range(br):
            brow = bl[k]
            for j in range(ac):
                x = arow[j]
                if x == 0:
                    entries.extend([ZERO] * bc)
                else:
                    entries.extend(x * y for y in brow)
    return fmpq_mat(ar * br, ac * bc, entries)


def is_zero(m: fmpq_mat) -> bool:
    return all(x == 0 for row in m.tolist() for x in row)


def rref(m: fmpq_mat) -> tuple[fmpq_mat, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    if m.nrows() == 0 or m.ncols() == 0:
        return m, 0, []
    r, rank = m.rref()
    pivots = []
    rows = r.tolist()
    for i in range(rank):
        row = rows[i]
        for j, x in enumerate(row):
            if x != 0:
                pivots.append(j)
                break
    return r, rank, pivots


def rank(m: fmpq_mat) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def nullspace(m: fmpq_mat) -> list[list[fmpq]]:
    """Basis of {x : m x = 0}, one list per basis vector (deterministic)."""
    n = m.ncols()
    if m.nrows() == 0:
        return [[ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    r, rk, pivots = rref(m)
    rows = r.tolist()
    free = [j for j in range(n) if j not in set(pivots)]
    basis = []
    for f in free:
        x = [ZERO] * n
        x[f] = ONE
        for i, p in enumerate(pivots):
            x[p] = -rows[i][f]
        basis.append(x)
    return basis


def row_basis(vectors: list[list[fmpq]], n: int) -> list[list[fmpq]]:
    """Reduced basis of the span of ``vectors`` (each of length n)."""
    if not vectors:
        return []
    r, rk, _ = rref(fmpq_mat(len(vectors), n, [x for v in vectors for x in v]))
    return r.tolist()[:rk]


def solve_consistent(a: fmpq_mat, b: list[fmpq]) -> list[fmpq] | None:
    """One solution of a x = b (free variables set to zero), or None."""
    n = a.ncols()
    aug = fmpq_mat(a.nrows(), n + 1,
                   [x for i, row in enumerate(a.tolist()) for x in row + [b[i]]])
    r, rk, pivots = rref(aug)
    if n in pivots:
        return None
    rows = r.tolist()
    x = [ZERO] * n
    for i, p in enumerate(pivots):
        x[p] = rows[i][n]
    return x
