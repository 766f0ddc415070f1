# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``.

Same algorithms, same pivot rule, same outputs bit for bit.  Entries stay
Python ints (arbitrary precision); the win comes from typed loop indices
and direct list access instead of interpreted bytecode.
"""
from math import gcd


def gauss_jordan(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t width = len(rows[0]) if nrows else 0
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef list pivots = []
    cdef list prow, row, new
    cdef object p, a, g
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if (<list>rows[i])[c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = <list>rows[r]
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>rows[i]
            a = row[c]
            if not a:
                continue
            new = [None] * width
            for j in range(width):
                new[j] = p * row[j] - a * prow[j]
            g = gcd(*new)
            if g > 1:
                for j in range(width):
                    new[j] = new[j] // g
            rows[i] = new
        pivots.append(c)
        r += 1
    return rows, pivots


def bareiss_det(list rows):
    cdef Py_ssize_t n = len(rows)
    cdef Py_ssize_t k, i, j
    cdef int sign = 1
    cdef object prev = 1, pk, a
    cdef list rk, ri
    cdef bint found
    if n == 0:
        return 1
    for k in range(n - 1):
        if not (<list>rows[k])[k]:
            found = False
            for i in range(k + 1, n):
                if (<list>rows[i])[k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    found = True
                    break
            if not found:
                return 0
        rk = <list>rows[k]
        pk = rk[k]
        for i in range(k + 1, n):
            ri = <list>rows[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - a * rk[j]) // prev
        prev = pk
    return sign * (<list>rows[n - 1])[n - 1]


def matmul(list a, list bcols):
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t k = len(bcols)
    cdef Py_ssize_t i, j, t, inner
    cdef list out = [], row, orow, col
    cdef object acc
    for i in range(m):
        row = <list>a[i]
        inner = len(row)
        orow = [None] * k
        for j in range(k):
            acc = 0
            col = <list>bcols[j]
            for t in range(inner):
                acc += row[t] * col[t]
            orow[j] = acc
        out.append(orow)
    return out
