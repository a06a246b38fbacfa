"""Shift-diagonal operators on truncated tensor powers of l_2(Z_+).

An operator is a map ``shift tuple -> ndarray`` with

    (T e_n) = sum_s D_s[n] e_{n + s},

n a multi-index.  Entries are kept on a padded box of side ``M``; a result
is exact on indices < M - (total shift reach), so callers pad by at least
the degree of the element they represent and crop to the requested N.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def _shift_index(n, s, M):
    """Slices mapping source indices n to targets n + s inside [0, M)."""
    if s >= 0:
        return slice(0, M - s), slice(s, M)
    return slice(-s, M), slice(0, M + s)


class FockOp:
    """Sum of weighted shifts on l_2(Z_+)^{(x) l}, truncated to a box of side M."""

    __slots__ = ("M", "l", "terms")

    def __init__(self, M: int, l: int, terms: dict | None = None):
        self.M = M
        self.l = l
        self.terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, M: int, l: int) -> "FockOp":
        return cls(M, l, {(0,) * l: np.ones((M,) * l)})

    @classmethod
    def zero(cls, M: int, l: int) -> "FockOp":
        return cls(M, l, {})

    @classmethod
    def single(cls, M: int, shift: int, diag) -> "FockOp":
        return cls(M, 1, {(shift,): np.asarray(diag, dtype=complex)})

    # -- algebra ----------------------------------------------------------------
    def copy(self) -> "FockOp":
        return FockOp(self.M, self.l, {k: v.copy() for k, v in self.terms.items()})

    def add_(self, other: "FockOp", c=1.0) -> "FockOp":
        for s, d in other.terms.items():
            if s in self.terms:
                self.terms[s] = self.terms[s] + c * d
            else:
                self.terms[s] = c * d
        return self

    def __add__(self, other):
        return self.copy().add_(other)

    def __sub__(self, other):
        return self.copy().add_(other, -1.0)

    def scale(self, c) -> "FockOp":
        return FockOp(self.M, self.l, {k: c * v for k, v in self.terms.items()})

    def __matmul__(self, other: "FockOp") -> "FockOp":
        """Composition self o other on the padded box."""
        M, l = self.M, self.l
        out = FockOp(M, l)
        for s2, d2 in other.terms.items():
            for s1, d1 in self.terms.items():
                # (T1 T2) e_n = d1[n + s2] d2[n] e_{n + s1 + s2}
                d = np.zeros((M,) * l, dtype=complex)
                src, dst = [], []
                ok = True
                for k in range(l):
                    a, b = _shift_index(None, s2[k], M)
                    if a.start >= a.stop:
                        ok = False
                        break
                    src.append(a)
                    dst.append(b)
                if not ok:
                    continue
                d[tuple(src)] = d1[tuple(dst)] * d2[tuple(src)]
                key = tuple(x + y for x, y in zip(s1, s2))
                out.add_(FockOp(M, l, {key: d}))
        return out

    def tensor(self, other: "FockOp") -> "FockOp":
        out = FockOp(self.M, self.l + other.l)
        for s1, d1 in self.terms.items():
            for s2, d2 in other.terms.items():
                out.add_(FockOp(self.M, out.l, {s1 + s2: np.multiply.outer(d1, d2)}))
        return out

    def adjoint(self) -> "FockOp":
        # (T^dag e_m) = sum_s conj(D_s[m - s]) e_{m - s}
        M, l = self.M, self.l
        out = FockOp(M, l)
        for s, d in self.terms.items():
            nd = np.zeros((M,) * l, dtype=complex)
            src, dst = [], []
            for k in range(l):
                a, b = _shift_index(None, s[k], M)
                src.append(a)
                dst.append(b)
            nd[tuple(dst)] = np.conj(d[tuple(src)])
            out.add_(FockOp(M, l, {tuple(-x for x in s): nd}))
        return out

    def max_shift(self) -> int:
        return max((max(abs(x) for x in s) for s in self.terms), default=0)

    # -- dense / sparse views ----------------------------------------------------
    def to_sparse(self, N: int | None = None) -> sp.csr_matrix:
        """Compression to indices < N in every factor (row-major multi-index)."""
        N = self.M if N is None else N
        l = self.l
        size = N ** l
        rows, cols, vals = [], [], []
        grid = np.indices((N,) * l).reshape(l, -1).T if l else np.zeros((1, 0), int)
        flat_src = np.ravel_multi_index(grid.T, (N,) * l) if l else np.zeros(1, int)
        for s, d in self.terms.items():
            tgt = grid + np.array(s, dtype=int)
            ok = np.all((tgt >= 0) & (tgt < N), axis=1)
            if not ok.any():
                continue
            v = d[tuple(grid[ok].T)] if l else d.reshape(1)
            nz = v != 0
            if not nz.any():
                continue
            rows.append(np.ravel_multi_index(tgt[ok][nz].T, (N,) * l) if l else np.zeros(1, int))
            cols.append(flat_src[ok][nz])
            vals.append(v[nz])
        if not rows:
            return sp.csr_matrix((size, size), dtype=complex)
        return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(size, size), dtype=complex)

    def to_dense(self, N: int | None = None) -> np.ndarray:
        return self.to_sparse(N).toarray()

    def crop_diff(self, other: "FockOp", N: int) -> float:
        """max |entry| of (self - other) on the N-box."""
        diff = self - other
        m = diff.to_sparse(N)
        return float(np.max(np.abs(m.data))) if m.nnz else 0.0


def interior_indices(N: int, l: int, margin: int) -> np.ndarray:
    """Flat indices (in the N^l box) whose every coordinate is < N - margin."""
    n = max(N - margin, 0)
    if l == 0:
        return np.zeros(1, dtype=int)
    grid = np.indices((n,) * l).reshape(l, -1)
    return np.ravel_multi_index(grid, (N,) * l)
