"""Exact Pfaffians of skew-symmetric rational matrices."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .linalg import Matrix


class NotSkew(ValueError):
    pass


def is_skew(a: Matrix) -> bool:
    return a.rows == a.cols and a.T == -a


def _require_skew(a: Matrix) -> None:
    if a.rows != a.cols:
        raise NotSkew(f"pfaffian needs a square matrix, got {a.rows}x{a.cols}")
    if a.rows % 2:
        raise NotSkew(f"pfaffian needs an even side, got {a.rows}")
    if not is_skew(a):
        raise NotSkew("matrix is not skew-symmetric")


def pfaffian(a: Matrix) -> Fraction:
    """Sum over perfect matchings, expanded along the lowest free index.

    Sub-Pfaffians are memoized by the bitmask of remaining indices, so the
    cost is about ``2**side * side`` rather than ``(side - 1)!!``.
    """
    _require_skew(a)
    n = a.rows
    rows = a.to_lists()

    @lru_cache(maxsize=None)
    def pf(mask: int) -> Fraction:
        if not mask:
            return Fraction(1)
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = Fraction(0)
        sign = 1
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            entry = rows[i][j]
            if entry:
                total += sign * entry * pf(rest & ~(1 << j))
            sign = -sign
        return total

    return pf((1 << n) - 1)


def pfaffian_elimination(a: Matrix) -> Fraction:
    """Pfaffian by congruence elimination; a second, independent algorithm."""
    _require_skew(a)
    n = a.rows
    m = a.to_lists()
    result = Fraction(1)
    for k in range(0, n, 2):
        piv = next((j for j in range(k + 1, n) if m[k][j]), None)
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            m[k + 1], m[piv] = m[piv], m[k + 1]
            for row in m:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            result = -result
        top = m[k][k + 1]
        result *= top
        for i in range(k + 2, n):
            for src, coef in ((k + 1, m[k][i] / top), (k, -m[k + 1][i] / top)):
                if not coef:
                    continue
                # row_i -= coef row_src ; col_i -= coef col_src
                m[i] = [x - coef * y for x, y in zip(m[i], m[src])]
                for row in m:
                    row[i] -= coef * row[src]
    return result


def standard_block(m: int) -> Matrix:
    """``[[0, I_m], [-I_m, 0]]``."""
    z = Matrix.zeros(m, m)
    i = Matrix.identity(m)
    return z.hstack(i).vstack((-i).hstack(z))
