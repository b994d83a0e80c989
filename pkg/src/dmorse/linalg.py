"""Exact linear algebra over the rationals.

Matrices are numpy arrays of dtype object holding ``Fraction`` (or plain
``int``) entries. Ranks and kernels are computed by fraction-free (Bareiss)
elimination on an integer copy of the matrix, so no floating point is ever
involved.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np


def zeros(rows: int, cols: int) -> np.ndarray:
    m = np.empty((rows, cols), dtype=object)
    m.fill(Fraction(0))
    return m


def identity(n: int) -> np.ndarray:
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = Fraction(1)
    return m


def as_fraction_matrix(rows, shape=None) -> np.ndarray:
    """Build an object matrix of Fractions from nested sequences."""
    rows = [list(r) for r in rows]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    m = zeros(*shape)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            m[i, j] = Fraction(x)
    return m


def is_zero(m: np.ndarray) -> bool:
    return all(x == 0 for x in m.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def is_integral(m: np.ndarray) -> bool:
    return all(Fraction(x).denominator == 1 for x in m.flat)


def _integer_rows(m: np.ndarray) -> list[list[int]]:
    # Clearing denominators row by row does not change rank or kernel.
    out = []
    for row in m:
        fr = [Fraction(x) for x in row]
        scale = lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * scale) for x in fr])
    return out


def bareiss_echelon(m: np.ndarray) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Returns the reduced integer rows (only the first ``rank`` are nonzero)
    and the pivot column of each of those rows.
    """
    a = _integer_rows(m)
    n_rows = len(a)
    n_cols = m.shape[1]
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, n_rows):
            ai = a[i]
            f = ai[c]
            for j in range(c, n_cols):
                # exact division is the Bareiss invariant
                ai[j] = (piv * ai[j] - f * a[r][j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(bareiss_echelon(m)[1])


def nullspace(m: np.ndarray) -> np.ndarray:
    """Basis of the right kernel, one basis vector per column."""
    n_cols = m.shape[1]
    if m.shape[0] == 0 or n_cols == 0:
        return identity(n_cols)
    a, pivots = bareiss_echelon(m)
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = zeros(n_cols, len(free))
    for k, fc in enumerate(free):
        x = [Fraction(0)] * n_cols
        x[fc] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            s = sum((a[r][j] * x[j] for j in range(pc + 1, n_cols)), Fraction(0))
            x[pc] = -s / a[r][pc]
        for i in range(n_cols):
            basis[i, k] = x[i]
    return basis


def hstack(*blocks: np.ndarray) -> np.ndarray:
    rows = blocks[0].shape[0]
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    c = 0
    for b in blocks:
        out[:, c:c + b.shape[1]] = b
        c += b.shape[1]
    return out


def format_entry(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_jsonable(m: np.ndarray) -> list[list[int | str]]:
    return [[int(x) if Fraction(x).denominator == 1 else format_entry(x) for x in row] for row in m]
