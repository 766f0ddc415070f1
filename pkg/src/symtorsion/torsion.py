"""Reidemeister torsion of based chain complexes.

Bracket convention: ``bracket(f, e)`` is the determinant of the matrix whose
columns are the coordinates of the vectors of ``e`` in the basis ``f``.  For
square ambient families this is ``det(e) / det(f)``.  Torsion is

    prod_p bracket(b_p | s(h_p) | l(b_{p-1}), c_p) ** (-1) ** (p + 1)

and does not depend on the boundary bases ``b_p`` or on the two sections;
``torsion(..., rng=...)`` re-randomizes both to exercise that.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _random
from .chain import (
    BasisFamily,
    ChainComplex,
    HomologyData,
    Verdict,
    check_chain_bases,
    check_homology_bases,
    class_reduce,
    compute_homology,
    require_valid,
    validate_complex,
)
from .linalg import (
    InconsistentSystem,
    Matrix,
    change_of_basis_det,
    column_space_basis,
    determinant,
    format_rational,
    inverse,
    rank,
    solve_linear,
)


def bracket(f: Matrix, e: Matrix) -> Fraction:
    """``[f, e]``: determinant of the coordinates of ``e`` with respect to ``f``."""
    return change_of_basis_det(e, f)


def _signed_power(x: Fraction, p: int) -> Fraction:
    """``x ** (-1) ** p``."""
    return x if p % 2 == 0 else 1 / x


@dataclass(frozen=True)
class TorsionReport:
    value: Fraction
    factors: tuple[Fraction, ...]
    """Per-degree factor with the exponent ``(-1) ** (p + 1)`` already applied."""
    chain_bases: BasisFamily
    homology_bases: BasisFamily
    assembled: BasisFamily
    """The bases ``b_p | s(h_p) | l(b_{p-1})`` actually used, for audit."""

    def to_json(self) -> dict:
        return {
            "value": format_rational(self.value),
            "factors": [format_rational(f) for f in self.factors],
        }


def assembled_basis(
    c: ChainComplex,
    h: HomologyData,
    homology_bases: Sequence[Matrix],
    rng: random.Random | None = None,
) -> BasisFamily:
    """Per degree, the basis ``b_p | s(h_p) | l(b_{p-1})`` of ``C_p``.

    Canonical choices without ``rng``; with it, the boundary bases are mixed by
    random invertible matrices, representatives are shifted by random
    boundaries and lifts by random cycles.
    """
    bound = 4
    b_bases = []
    for p in range(c.n + 1):
        b = h.B_basis[p]
        if rng is not None and b.cols:
            b = b @ _random.random_invertible(rng, b.cols, bound)[0]
        b_bases.append(b)
    out = []
    for p in range(c.n + 1):
        reps = homology_bases[p]
        if p == 0:
            lift = Matrix(c.dims[0], 0)
        else:
            lift = solve_linear(c.d(p), b_bases[p - 1])
        if rng is not None:
            if h.B_basis[p].cols and reps.cols:
                reps = reps + h.B_basis[p] @ _random.random_matrix(rng, h.B_basis[p].cols, reps.cols, bound)
            if h.Z_basis[p].cols and lift.cols:
                lift = lift + h.Z_basis[p] @ _random.random_matrix(rng, h.Z_basis[p].cols, lift.cols, bound)
        out.append(b_bases[p].hstack(reps, lift))
    return tuple(out)


def torsion(
    c: ChainComplex,
    chain_bases: Sequence[Matrix],
    homology_bases: Sequence[Matrix] | None = None,
    h: HomologyData | None = None,
    rng: random.Random | None = None,
) -> TorsionReport:
    """Torsion of ``c`` based by ``chain_bases`` with homology based by cycle representatives.

    ``homology_bases`` may be omitted for acyclic complexes.  Raises
    ``ValueError`` for mismatched or dependent bases.
    """
    h = compute_homology(c) if h is None else h
    if homology_bases is None:
        homology_bases = tuple(Matrix(d, 0) for d in c.dims)
    chain_bases, homology_bases = tuple(chain_bases), tuple(homology_bases)
    check_chain_bases(c, chain_bases)
    check_homology_bases(c, h, homology_bases)
    assembled = assembled_basis(c, h, homology_bases, rng)
    factors = []
    value = Fraction(1)
    for p in range(c.n + 1):
        f = _signed_power(bracket(assembled[p], chain_bases[p]), p + 1)
        factors.append(f)
        value *= f
    return TorsionReport(value, tuple(factors), chain_bases, homology_bases, assembled)


def homology_bracket(c: ChainComplex, h: HomologyData, p: int, f: Matrix, e: Matrix) -> Fraction:
    """``[f, e]`` for two bases of ``H_p`` given by cycle representatives."""
    if f.cols != e.cols:
        raise ValueError("homology bases of different sizes")
    return determinant(class_reduce(c, h, p, e, reps=f))


def base_change_factor(
    c: ChainComplex,
    old_chain: Sequence[Matrix],
    new_chain: Sequence[Matrix],
    old_homology: Sequence[Matrix],
    new_homology: Sequence[Matrix],
    h: HomologyData | None = None,
) -> Fraction:
    """``prod_p ([c'_p, c_p] / [h'_p, h_p]) ** (-1) ** p``; torsion(new) = factor * torsion(old)."""
    h = compute_homology(c) if h is None else h
    check_chain_bases(c, old_chain)
    check_chain_bases(c, new_chain)
    check_homology_bases(c, h, old_homology)
    check_homology_bases(c, h, new_homology)
    factor = Fraction(1)
    for p in range(c.n + 1):
        ratio = bracket(new_chain[p], old_chain[p]) / homology_bracket(c, h, p, new_homology[p], old_homology[p])
        factor *= _signed_power(ratio, p)
    return factor


class NotAcyclic(ValueError):
    pass


def torsion_acyclic_witten(c: ChainComplex, volumes: Sequence[Matrix]) -> Fraction:
    """Torsion of an acyclic complex as the pairing of ``u`` with the volume forms.

    ``volumes[p]`` is the basis whose dual top form is the volume on ``C_p``.
    Each factor evaluates the dual functionals on the wedge of boundary
    vectors and lifts: ``det[c_i^*(x_j)]``, raised to ``(-1) ** p``.
    """
    require_valid(c)
    check_chain_bases(c, volumes)
    if any(rank(c.d(p + 1)) + rank(c.d(p)) != c.dims[p] for p in range(c.n + 1)):
        raise NotAcyclic("complex has nonzero homology")
    value = Fraction(1)
    for p in range(c.n + 1):
        b = column_space_basis(c.d(p + 1))
        below = column_space_basis(c.d(p)) if p else Matrix(0, 0)
        lift = solve_linear(c.d(p), below) if p else Matrix(c.dims[0], 0)
        wedge = b.hstack(lift)
        duals = inverse(volumes[p])  # row i is the functional c_i^*
        value *= _signed_power(determinant(duals @ wedge), p)
    return value


# short and long exact sequences -------------------------------------------

@dataclass(frozen=True)
class ShortExactSequence:
    """``0 -> A -> B -> D -> 0``; ``inclusion[p]`` maps ``A_p`` into ``B_p``, ``projection[p]`` maps ``B_p`` onto ``D_p``."""

    A: ChainComplex
    B: ChainComplex
    D: ChainComplex
    inclusion: tuple[Matrix, ...]
    projection: tuple[Matrix, ...]


def validate_ses(s: ShortExactSequence) -> Verdict:
    found: list[tuple[int | None, str]] = []
    n = s.B.n
    if s.A.n != n or s.D.n != n:
        return Verdict.collect([(None, "complexes have different top degree")])
    if len(s.inclusion) != n + 1 or len(s.projection) != n + 1:
        return Verdict.collect([(None, "need one inclusion and one projection per degree")])
    for name, cx in (("A", s.A), ("B", s.B), ("D", s.D)):
        v = validate_complex(cx)
        if not v:
            found.extend((v.first_degree, f"{name}: {msg}") for msg in v.violations)
    if found:
        return Verdict.collect(found)
    for p in range(n + 1):
        i, q = s.inclusion[p], s.projection[p]
        if i.shape != (s.B.dims[p], s.A.dims[p]) or q.shape != (s.D.dims[p], s.B.dims[p]):
            found.append((p, f"degree {p}: map shapes do not match the complexes"))
            continue
        if rank(i) != i.cols:
            found.append((p, f"degree {p}: inclusion is not injective"))
        if rank(q) != q.rows:
            found.append((p, f"degree {p}: projection is not surjective"))
        if not (q @ i).is_zero() or s.A.dims[p] + s.D.dims[p] != s.B.dims[p]:
            found.append((p, f"degree {p}: image of inclusion is not the kernel of projection"))
    for p in range(1, n + 1):
        if s.inclusion[p - 1] @ s.A.d(p) != s.B.d(p) @ s.inclusion[p]:
            found.append((p, f"inclusion does not commute with d_{p}"))
        if s.projection[p - 1] @ s.B.d(p) != s.D.d(p) @ s.projection[p]:
            found.append((p, f"projection does not commute with d_{p}"))
    return Verdict.collect(found)


@dataclass(frozen=True)
class LongExactSequence:
    """The homology sequence as an acyclic complex of top degree ``3n + 2``.

    Degree ``3p`` is ``H_p(D)``, ``3p + 1`` is ``H_p(B)``, ``3p + 2`` is
    ``H_p(A)``; the boundaries are ``i_*``, ``pi_*`` and the connecting map,
    written in the given homology bases, so the distinguished chain bases
    are the standard ones.
    """

    complex: ChainComplex
    iota_star: tuple[Matrix, ...]
    pi_star: tuple[Matrix, ...]
    delta: tuple[Matrix, ...]
    """``delta[p]`` maps ``H_p(D)`` to ``H_{p-1}(A)``; ``delta[0]`` is empty."""

    @property
    def chain_bases(self) -> BasisFamily:
        return tuple(Matrix.identity(d) for d in self.complex.dims)


class InvalidSES(ValueError):
    pass


def connecting_map(s: ShortExactSequence, p: int, cycles: Matrix) -> Matrix:
    """Lift D-cycles through the projection, apply the B boundary, pull back through the inclusion."""
    lifted = solve_linear(s.projection[p], cycles)
    image = s.B.d(p) @ lifted
    try:
        return solve_linear(s.inclusion[p - 1], image)
    except InconsistentSystem:
        raise InvalidSES(f"boundary of a lifted degree-{p} cycle is not in the subcomplex") from None


def long_exact_sequence(
    s: ShortExactSequence,
    homology_A: Sequence[Matrix] | None = None,
    homology_B: Sequence[Matrix] | None = None,
    homology_D: Sequence[Matrix] | None = None,
    hA: HomologyData | None = None,
    hB: HomologyData | None = None,
    hD: HomologyData | None = None,
) -> LongExactSequence:
    verdict = validate_ses(s)
    if not verdict:
        raise InvalidSES("; ".join(verdict.violations))
    hA = compute_homology(s.A) if hA is None else hA
    hB = compute_homology(s.B) if hB is None else hB
    hD = compute_homology(s.D) if hD is None else hD
    homology_A = hA.H_reps if homology_A is None else tuple(homology_A)
    homology_B = hB.H_reps if homology_B is None else tuple(homology_B)
    homology_D = hD.H_reps if homology_D is None else tuple(homology_D)
    n = s.B.n
    iota, pi, delta = [], [], []
    for p in range(n + 1):
        iota.append(class_reduce(s.B, hB, p, s.inclusion[p] @ homology_A[p], reps=homology_B[p]))
        pi.append(class_reduce(s.D, hD, p, s.projection[p] @ homology_B[p], reps=homology_D[p]))
        if p == 0:
            delta.append(Matrix(0, homology_D[0].cols))
        else:
            pulled = connecting_map(s, p, homology_D[p])
            delta.append(class_reduce(s.A, hA, p - 1, pulled, reps=homology_A[p - 1]))
    dims = []
    for p in range(n + 1):
        dims += [homology_D[p].cols, homology_B[p].cols, homology_A[p].cols]
    bounds = []
    for deg in range(1, 3 * n + 3):
        p, slot = divmod(deg, 3)
        bounds.append({0: lambda: delta[p], 1: lambda: pi[p], 2: lambda: iota[p]}[slot]())
    return LongExactSequence(ChainComplex(3 * n + 2, tuple(dims), tuple(bounds)), tuple(iota), tuple(pi), tuple(delta))


@dataclass(frozen=True)
class MilnorCheck:
    lhs: Fraction
    rhs: Fraction
    compatible: bool
    compatibility: tuple[Fraction, ...]
    """Per degree ``[c^B_p, c^A_p + lift(c^D_p)]``; compatible when every entry is +-1."""
    tor_A: Fraction
    tor_B: Fraction
    tor_D: Fraction
    tor_H: Fraction

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def equal_up_to_sign(self) -> bool:
        return abs(self.lhs) == abs(self.rhs)

    def to_json(self) -> dict:
        return {
            "lhs": format_rational(self.lhs),
            "rhs": format_rational(self.rhs),
            "equal": self.equal,
            "equal_up_to_sign": self.equal_up_to_sign,
            "compatible": self.compatible,
            "compatibility": [format_rational(x) for x in self.compatibility],
            "torsion": {k: format_rational(v) for k, v in
                        (("A", self.tor_A), ("B", self.tor_B), ("D", self.tor_D), ("H", self.tor_H))},
        }


def compatibility_dets(s: ShortExactSequence, chain_A, chain_B, chain_D) -> tuple[Fraction, ...]:
    out = []
    for p in range(s.B.n + 1):
        lifted = solve_linear(s.projection[p], chain_D[p])
        out.append(bracket(chain_B[p], (s.inclusion[p] @ chain_A[p]).hstack(lifted)))
    return tuple(out)


def milnor_product_check(
    s: ShortExactSequence,
    chain_A: Sequence[Matrix],
    chain_B: Sequence[Matrix],
    chain_D: Sequence[Matrix],
    homology_A: Sequence[Matrix] | None = None,
    homology_B: Sequence[Matrix] | None = None,
    homology_D: Sequence[Matrix] | None = None,
) -> MilnorCheck:
    """Compare ``Tor(B)`` with ``Tor(A) Tor(D) Tor(H)`` for the homology sequence ``H``."""
    hA, hB, hD = compute_homology(s.A), compute_homology(s.B), compute_homology(s.D)
    homology_A = hA.H_reps if homology_A is None else tuple(homology_A)
    homology_B = hB.H_reps if homology_B is None else tuple(homology_B)
    homology_D = hD.H_reps if homology_D is None else tuple(homology_D)
    les = long_exact_sequence(s, homology_A, homology_B, homology_D, hA, hB, hD)
    compat = compatibility_dets(s, chain_A, chain_B, chain_D)
    tA = torsion(s.A, chain_A, homology_A, hA).value
    tB = torsion(s.B, chain_B, homology_B, hB).value
    tD = torsion(s.D, chain_D, homology_D, hD).value
    tH = torsion(les.complex, les.chain_bases).value
    return MilnorCheck(tB, tA * tD * tH, all(abs(x) == 1 for x in compat), compat, tA, tB, tD, tH)
