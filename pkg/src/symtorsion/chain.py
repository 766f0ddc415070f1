"""Chain complexes of finite-dimensional rational vector spaces.

A complex ``0 -> C_n -> ... -> C_1 -> C_0 -> 0`` is stored as its dimensions
and boundary matrices; ``boundaries[i]`` is the map out of degree ``i + 1``.
Homology comes with explicit bases for cycles and boundaries, cycle
representatives of a homology basis, and lifts of a basis of each image,
which is everything needed to assemble the bases that enter torsion.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .linalg import InconsistentSystem, Matrix, block_diag, column_space_basis, kernel_basis, pivot_columns, rank, solve_linear

BasisFamily = tuple[Matrix, ...]
"""One matrix per degree; its columns are basis vectors in ambient coordinates."""


class InvalidComplex(ValueError):
    def __init__(self, verdict: Verdict):
        super().__init__("; ".join(verdict.violations))
        self.verdict = verdict


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validator.  Truthy when no violation was found."""

    violations: tuple[str, ...] = ()
    first_degree: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def collect(cls, found: list[tuple[int | None, str]]) -> Verdict:
        if not found:
            return cls()
        return cls(tuple(msg for _, msg in found), found[0][0])


@dataclass(frozen=True)
class ChainComplex:
    n: int
    dims: tuple[int, ...]
    boundaries: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if self.n < 0 or len(self.dims) != self.n + 1:
            raise ValueError(f"need n + 1 = {self.n + 1} dimensions, got {len(self.dims)}")
        if len(self.boundaries) != self.n:
            raise ValueError(f"need n = {self.n} boundary maps, got {len(self.boundaries)}")
        if any(d < 0 for d in self.dims):
            raise ValueError("negative dimension")

    def d(self, p: int) -> Matrix:
        """Boundary out of degree ``p``; zero maps at the two ends."""
        if 1 <= p <= self.n:
            return self.boundaries[p - 1]
        if p == 0:
            return Matrix(0, self.dims[0])
        if p == self.n + 1:
            return Matrix(self.dims[self.n], 0)
        raise IndexError(f"degree {p} outside 0..{self.n + 1}")

    def dim(self, p: int) -> int:
        return self.dims[p] if 0 <= p <= self.n else 0

    @classmethod
    def zero(cls, dims: Sequence[int]) -> ChainComplex:
        """The complex with the given dimensions and all boundaries zero."""
        dims = tuple(dims)
        return cls(len(dims) - 1, dims, tuple(Matrix(dims[p - 1], dims[p]) for p in range(1, len(dims))))

    def direct_sum(self, other: ChainComplex) -> ChainComplex:
        if self.n != other.n:
            raise ValueError("direct sum needs equal top degree")
        return ChainComplex(
            self.n,
            tuple(a + b for a, b in zip(self.dims, other.dims)),
            tuple(block_diag(a, b) for a, b in zip(self.boundaries, other.boundaries)),
        )


def validate_complex(c: ChainComplex) -> Verdict:
    found: list[tuple[int | None, str]] = []
    for p in range(1, c.n + 1):
        d = c.boundaries[p - 1]
        if d.shape != (c.dims[p - 1], c.dims[p]):
            found.append((p, f"boundary d_{p} has shape {d.rows}x{d.cols}, expected {c.dims[p - 1]}x{c.dims[p]}"))
    if found:
        return Verdict.collect(found)
    for p in range(1, c.n):
        if not (c.d(p) @ c.d(p + 1)).is_zero():
            found.append((p, f"d_{p} o d_{p + 1} != 0 at degree {p}"))
    return Verdict.collect(found)


def require_valid(c: ChainComplex) -> None:
    verdict = validate_complex(c)
    if not verdict:
        raise InvalidComplex(verdict)


@dataclass(frozen=True)
class HomologyData:
    """Per-degree bases: cycles, boundaries, homology representatives, lifts.

    ``ell_image[p]`` lifts the boundary basis ``B_basis[p - 1]`` through
    ``d_p``; together ``B_basis[p] | H_reps[p] | ell_image[p]`` is a basis
    of ``C_p``.
    """

    Z_basis: tuple[Matrix, ...]
    B_basis: tuple[Matrix, ...]
    H_reps: tuple[Matrix, ...]
    ell_image: tuple[Matrix, ...]
    betti: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "betti", tuple(h.cols for h in self.H_reps))

    def is_acyclic(self) -> bool:
        return not any(self.betti)


def complete_basis(base: Matrix, pool: Matrix) -> list[int]:
    """Indices of the columns of ``pool`` that extend independent ``base`` to a basis of the joint span."""
    if base.rows == 0:
        return []
    piv = pivot_columns(base.hstack(pool))
    return [j - base.cols for j in piv if j >= base.cols]


def compute_homology(c: ChainComplex) -> HomologyData:
    require_valid(c)
    Z, B, H, L = [], [], [], []
    for p in range(c.n + 1):
        Z.append(kernel_basis(c.d(p)))
        B.append(column_space_basis(c.d(p + 1)))
    for p in range(c.n + 1):
        keep = complete_basis(B[p], Z[p])
        H.append(Z[p].select_columns(keep))
        if p == 0:
            L.append(Matrix(c.dims[0], 0))
        else:
            L.append(solve_linear(c.d(p), B[p - 1]))
    return HomologyData(tuple(Z), tuple(B), tuple(H), tuple(L))


def class_reduce(c: ChainComplex, h: HomologyData, p: int, cycle: Matrix, reps: Matrix | None = None) -> Matrix:
    """Coordinates of the classes of the columns of ``cycle`` in the basis ``[reps]``.

    ``reps`` defaults to ``h.H_reps[p]``.  Raises ``ValueError`` when a column
    is not a cycle.
    """
    reps = h.H_reps[p] if reps is None else reps
    if not (c.d(p) @ cycle).is_zero():
        raise ValueError(f"degree-{p} input is not a cycle")
    b = h.B_basis[p]
    try:
        x = solve_linear(b.hstack(reps), cycle)
    except InconsistentSystem:
        raise ValueError(f"degree-{p} representatives do not span homology") from None
    return x.select_rows(range(b.cols, b.cols + reps.cols))


def homology_classes_independent(c: ChainComplex, h: HomologyData, p: int, reps: Matrix) -> bool:
    if reps.rows != c.dims[p] or not (c.d(p) @ reps).is_zero():
        return False
    b = h.B_basis[p]
    return rank(b.hstack(reps)) == b.cols + reps.cols


def standard_bases(c: ChainComplex) -> BasisFamily:
    return tuple(Matrix.identity(d) for d in c.dims)


def check_chain_bases(c: ChainComplex, bases: Sequence[Matrix]) -> None:
    if len(bases) != c.n + 1:
        raise ValueError(f"need {c.n + 1} chain bases, got {len(bases)}")
    for p, m in enumerate(bases):
        if m.shape != (c.dims[p], c.dims[p]):
            raise ValueError(f"chain basis in degree {p} has shape {m.rows}x{m.cols}, expected {c.dims[p]}x{c.dims[p]}")
        if rank(m) != c.dims[p]:
            raise ValueError(f"chain basis in degree {p} is dependent")


def check_homology_bases(c: ChainComplex, h: HomologyData, bases: Sequence[Matrix]) -> None:
    if len(bases) != c.n + 1:
        raise ValueError(f"need {c.n + 1} homology bases, got {len(bases)}")
    for p, m in enumerate(bases):
        if m.rows != c.dims[p] or m.cols != h.betti[p]:
            raise ValueError(f"homology basis in degree {p} must be {c.dims[p]}x{h.betti[p]}, got {m.rows}x{m.cols}")
        if not (c.d(p) @ m).is_zero():
            raise ValueError(f"homology basis in degree {p} contains a non-cycle")
        if not homology_classes_independent(c, h, p, m):
            raise ValueError(f"homology classes in degree {p} are dependent")


@dataclass(frozen=True)
class Summand:
    """A subcomplex together with its embedding; ``embedding[p]`` has a column per basis vector."""

    complex: ChainComplex
    embedding: tuple[Matrix, ...]


def restrict(c: ChainComplex, embedding: Sequence[Matrix]) -> ChainComplex:
    """The subcomplex spanned by ``embedding`` (which must be d-closed) in its own coordinates."""
    dims = tuple(e.cols for e in embedding)
    bounds = []
    for p in range(1, c.n + 1):
        image = c.d(p) @ embedding[p]
        try:
            bounds.append(solve_linear(embedding[p - 1], image))
        except InconsistentSystem:
            raise ValueError(f"span in degree {p} is not closed under the boundary") from None
    return ChainComplex(c.n, dims, tuple(bounds))


def split_general(c: ChainComplex, h: HomologyData | None = None) -> tuple[Summand, Summand]:
    """Split ``c`` as an exact summand plus a d-zero summand.

    The exact part is spanned by boundaries and lifts, the d-zero part by
    the homology representatives.
    """
    h = compute_homology(c) if h is None else h
    exact_emb = tuple(h.B_basis[p].hstack(h.ell_image[p]) for p in range(c.n + 1))
    zero_emb = tuple(h.H_reps)
    return Summand(restrict(c, exact_emb), exact_emb), Summand(restrict(c, zero_emb), zero_emb)
