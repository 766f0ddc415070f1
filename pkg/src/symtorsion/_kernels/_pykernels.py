"""Pure-Python integer kernels.

All routines take and return lists of lists of Python ints.  Callers clear
denominators before entering and restore them afterwards, so no Fraction
object is created inside a hot loop.  ``_ckernels.pyx`` is a line-for-line
compiled twin; the two must stay in sync.
"""
from math import gcd


def gauss_jordan(rows, ncols):
    """Fraction-free Gauss-Jordan reduction, in place.

    Pivots are searched only among the first ``ncols`` columns (trailing
    columns are an augmented block that rides along).  Pivot rule: leftmost
    column with a nonzero entry at or below the current row, topmost such
    entry.  Rows are kept primitive by dividing out their content.

    Returns ``(rows, pivots)``; pivot row ``i`` has its leading entry in
    column ``pivots[i]`` and every other row is zero in that column.
    """
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            a = row[c]
            if not a:
                continue
            new = [p * x - a * y for x, y in zip(row, prow)]
            g = gcd(*new)
            if g > 1:
                new = [x // g for x in new]
            rows[i] = new
        pivots.append(c)
        r += 1
    return rows, pivots


def bareiss_det(rows):
    """Determinant of a square integer matrix by Bareiss elimination, in place."""
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not rows[k][k]:
            for i in range(k + 1, n):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        rk = rows[k]
        pk = rk[k]
        for i in range(k + 1, n):
            ri = rows[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - a * rk[j]) // prev
        prev = pk
    return sign * rows[n - 1][n - 1]


def matmul(a, bcols):
    """Integer product of ``a`` (rows) with the matrix whose columns are ``bcols``."""
    return [[sum([x * y for x, y in zip(row, col)]) for col in bcols] for row in a]
