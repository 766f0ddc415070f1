"""Exact dense linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  :class:`Matrix` is immutable; the
elimination routines clear denominators row by row and hand integer rows to
the kernels in :mod:`symtorsion._kernels`, so every result is exact and
deterministic (pivot rule: leftmost nonzero column, topmost nonzero entry).
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import _kernels

Rational = Fraction

__all__ = [
    "InconsistentSystem",
    "Matrix",
    "Rational",
    "SingularMatrix",
    "change_of_basis_det",
    "column_space_basis",
    "determinant",
    "format_rational",
    "inverse",
    "kernel_basis",
    "parse_rational",
    "rank",
    "rref_decompose",
    "solve_linear",
]


class SingularMatrix(ValueError):
    pass


class InconsistentSystem(ValueError):
    """Raised by :func:`solve_linear` when the right-hand side is not in the image."""


def parse_rational(text: str | int) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``; rejects floats and other spellings."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational string: {text!r}")
    num, sep, den = text.partition("/")
    try:
        n = int(num.strip(), 10)
        d = int(den.strip(), 10) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational string: {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(n, d)


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return parse_rational(x) if isinstance(x, str) else Fraction(x)
    raise TypeError(f"matrix entries must be int, Fraction or rational string, got {type(x).__name__}")


def _int_rows(data) -> tuple[list[list[int]], list[int]]:
    """Scale each row to integers; returns the rows and the per-row scale."""
    out, scales = [], []
    for row in data:
        s = lcm(*(x.denominator for x in row)) if row else 1
        out.append([x.numerator * (s // x.denominator) for x in row])
        scales.append(s)
    return out, scales


class Matrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimension")
        if data is None:
            grid = tuple((Fraction(0),) * cols for _ in range(rows))
        else:
            grid = tuple(tuple(_as_fraction(x) for x in row) for row in data)
            if len(grid) != rows or any(len(r) != cols for r in grid):
                raise ValueError(f"entries do not form a {rows}x{cols} grid")
        _set = object.__setattr__
        _set(self, "rows", rows)
        _set(self, "cols", cols)
        _set(self, "_data", grid)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __delattr__(self, name):
        raise AttributeError("Matrix is immutable")

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        if not rows:
            return cls(0, cols or 0)
        return cls(len(rows), len(rows[0]), rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> Matrix:
        return cls(len(columns), nrows, columns).T if columns else cls(nrows, 0)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        one, zero = Fraction(1), Fraction(0)
        return cls._raw(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def _raw(cls, rows: int, cols: int, grid: tuple) -> Matrix:
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "_data", grid)
        return m

    @classmethod
    def _from_ints(cls, rows: int, cols: int, ints, row_scale=None, col_scale=None) -> Matrix:
        grid = []
        for i, row in enumerate(ints):
            rs = row_scale[i] if row_scale else 1
            if col_scale:
                grid.append(tuple(Fraction(x, rs * cs) for x, cs in zip(row, col_scale)))
            else:
                grid.append(tuple(Fraction(x, rs) for x in row))
        return cls._raw(rows, cols, tuple(grid))

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def select_columns(self, idx: Sequence[int]) -> Matrix:
        return Matrix._raw(self.rows, len(idx), tuple(tuple(r[j] for j in idx) for r in self._data))

    def select_rows(self, idx: Sequence[int]) -> Matrix:
        return Matrix._raw(len(idx), self.cols, tuple(self._data[i] for i in idx))

    def col_slice(self, start: int, stop: int) -> Matrix:
        return self.select_columns(range(start, stop))

    @property
    def T(self) -> Matrix:
        if self.rows == 0:
            return Matrix._raw(self.cols, 0, tuple(() for _ in range(self.cols)))
        return Matrix._raw(self.cols, self.rows, tuple(zip(*self._data)))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._raw(self.rows, self.cols,
                           tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix._raw(self.rows, self.cols,
                           tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> Matrix:
        return Matrix._raw(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self._data))

    def scale(self, c) -> Matrix:
        c = _as_fraction(c)
        return Matrix._raw(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self._data))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0:
            return Matrix(self.rows, other.cols)
        a, ra = _int_rows(self._data)
        bcols, cb = _int_rows(other.T._data)
        prod = _kernels.matmul(a, bcols)
        return Matrix._from_ints(self.rows, other.cols, prod, ra, cb)

    def _check_same(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def hstack(self, *others: Matrix) -> Matrix:
        for o in others:
            if o.rows != self.rows:
                raise ValueError("hstack needs equal row counts")
        grid = tuple(sum((o._data[i] for o in others), self._data[i]) for i in range(self.rows))
        return Matrix._raw(self.rows, self.cols + sum(o.cols for o in others), grid)

    def vstack(self, *others: Matrix) -> Matrix:
        for o in others:
            if o.cols != self.cols:
                raise ValueError("vstack needs equal column counts")
        grid = self._data + sum((o._data for o in others), ())
        return Matrix._raw(len(grid), self.cols, grid)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def block_diag(*blocks: Matrix) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    grid, offset = [], 0
    zero = Fraction(0)
    for b in blocks:
        for r in b._data:
            grid.append((zero,) * offset + r + (zero,) * (cols - offset - b.cols))
        offset += b.cols
    return Matrix._raw(rows, cols, tuple(grid))


# elimination ------------------------------------------------------------

def _reduce(m: Matrix, augment: Matrix | None = None):
    """Integer Gauss-Jordan on ``[m | augment]``; returns reduced rational rows and pivots."""
    data = m._data if augment is None else tuple(r + s for r, s in zip(m._data, augment._data))
    ints, _ = _int_rows(data)
    ints, pivots = _kernels.gauss_jordan(ints, m.cols)
    return ints, pivots


def rref_decompose(m: Matrix) -> tuple[Matrix, list[int], Matrix]:
    """Return ``(rref, pivot_columns, transform)`` with ``transform @ m == rref``."""
    n = m.rows
    if n == 0:
        return Matrix(0, m.cols), [], Matrix(0, 0)
    # Row scaling D is folded into the augmented identity: [D m | D].
    ints, scales = _int_rows(m._data)
    aug = [row + [scales[i] if j == i else 0 for j in range(n)] for i, row in enumerate(ints)]
    aug, pivots = _kernels.gauss_jordan(aug, m.cols)
    grid_r, grid_t = [], []
    for i, row in enumerate(aug):
        lead = row[pivots[i]] if i < len(pivots) else 1
        fr = tuple(Fraction(x, lead) for x in row)
        grid_r.append(fr[: m.cols])
        grid_t.append(fr[m.cols:])
    return Matrix._raw(n, m.cols, tuple(grid_r)), pivots, Matrix._raw(n, n, tuple(grid_t))


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_reduce(m)[1])


def determinant(m: Matrix) -> Fraction:
    if not m.is_square():
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    ints, scales = _int_rows(m._data)
    d = _kernels.bareiss_det(ints)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(d, denom)


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning ``ker m``: one per free column, with a 1 in that slot."""
    if m.rows == 0:
        return Matrix.identity(m.cols)
    ints, pivots = _reduce(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    cols = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -Fraction(ints[i][f], ints[i][c])
        cols.append(v)
    return Matrix.from_columns(cols, m.cols)


def column_space_basis(m: Matrix) -> Matrix:
    """The pivot columns of ``m`` (original entries), spanning ``im m``."""
    if m.rows == 0 or m.cols == 0:
        return Matrix(m.rows, 0)
    return m.select_columns(_reduce(m)[1])


def pivot_columns(m: Matrix) -> list[int]:
    if m.rows == 0 or m.cols == 0:
        return []
    return _reduce(m)[1]


def solve_linear(m: Matrix, b: Matrix) -> Matrix:
    """Solve ``m @ x == b`` column by column; free variables are set to zero.

    Raises :class:`InconsistentSystem` when some column of ``b`` is not in
    the column space of ``m``.
    """
    if b.rows != m.rows:
        raise ValueError(f"right-hand side has {b.rows} rows, expected {m.rows}")
    if b.cols == 0:
        return Matrix(m.cols, 0)
    if m.rows == 0:
        return Matrix(m.cols, b.cols)
    ints, pivots = _reduce(m, b)
    r = len(pivots)
    for row in ints[r:]:
        if any(row[m.cols:]):
            raise InconsistentSystem("right-hand side is not in the image")
    grid = [[Fraction(0)] * b.cols for _ in range(m.cols)]
    for i, c in enumerate(pivots):
        lead = ints[i][c]
        for k in range(b.cols):
            grid[c][k] = Fraction(ints[i][m.cols + k], lead)
    return Matrix(m.cols, b.cols, grid)


def inverse(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("inverse of non-square matrix")
    try:
        return solve_linear(m, Matrix.identity(m.rows))
    except InconsistentSystem:
        raise SingularMatrix("matrix is singular") from None


def change_of_basis_det(new_basis: Matrix, old_basis: Matrix) -> Fraction:
    """``det T`` where ``new_basis == old_basis @ T``.

    Both arguments are column families in ambient coordinates spanning the
    same subspace.  Raises ``ValueError`` when the counts differ, when
    ``old_basis`` is dependent, or when the spans differ.
    """
    if new_basis.cols != old_basis.cols:
        raise ValueError(f"basis sizes differ: {new_basis.cols} vs {old_basis.cols}")
    if new_basis.rows != old_basis.rows:
        raise ValueError("bases live in different ambient spaces")
    if rank(old_basis) != old_basis.cols:
        raise ValueError("old basis is linearly dependent")
    try:
        t = solve_linear(old_basis, new_basis)
    except InconsistentSystem:
        raise ValueError("bases span different subspaces") from None
    return determinant(t)
