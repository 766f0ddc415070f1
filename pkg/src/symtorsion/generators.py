"""Seeded random instances: based complexes, symplectic complexes, short exact sequences.

Every generator starts from a normal form whose structure is known
(boundary cells, homology cells, lift cells) and then moves it by random
invertible coordinate changes, so validity holds by construction.  The
validators are run anyway before anything is returned.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _random
from .chain import BasisFamily, ChainComplex, InvalidComplex, validate_complex
from .linalg import Matrix, solve_linear
from .pfaffian import standard_block
from .symplectic import InvalidSymplectic, SymplecticComplex, validate_symplectic
from .torsion import InvalidSES, ShortExactSequence, validate_ses

KINDS = ("dzero", "exact", "mixed")


class Infeasible(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n: int = 2
    max_dim: int = 6
    betti_targets: tuple[int, ...] | None = None
    dims: tuple[int, ...] | None = None
    entry_bound: int = 5

    def __post_init__(self):
        if self.n < 1:
            raise Infeasible("n must be at least 1")
        if self.entry_bound < 1:
            raise Infeasible("entry bound must be positive")
        for name in ("betti_targets", "dims"):
            val = getattr(self, name)
            if val is not None:
                val = tuple(int(x) for x in val)
                object.__setattr__(self, name, val)
                if len(val) != self.n + 1:
                    raise Infeasible(f"{name} needs {self.n + 1} entries")
                if any(x < 0 for x in val):
                    raise Infeasible(f"{name} must be nonnegative")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


@dataclass(frozen=True)
class GeneratedComplex:
    complex: ChainComplex
    chain_bases: BasisFamily
    homology_bases: BasisFamily


# normal forms --------------------------------------------------------------

def _ranks_from(dims: Sequence[int], betti: Sequence[int]) -> list[int]:
    """``r[p]`` = rank of the boundary out of degree ``p`` (``r[0] = r[n+1] = 0``)."""
    n = len(dims) - 1
    r = [0] * (n + 2)
    for p in range(n + 1):
        r[p + 1] = dims[p] - betti[p] - r[p]
        if r[p + 1] < 0:
            raise Infeasible(f"degree {p}: dimension {dims[p]} cannot hold betti {betti[p]}")
    if r[n + 1] != 0:
        raise Infeasible(f"top degree {n}: {r[n + 1]} cells left without a boundary partner")
    return r


def _choose_ranks(cfg: GenConfig, rng: random.Random) -> tuple[list[int], list[int], list[int]]:
    n = cfg.n
    if cfg.dims is not None and cfg.betti_targets is not None:
        dims, betti = list(cfg.dims), list(cfg.betti_targets)
        return dims, betti, _ranks_from(dims, betti)
    r = [0] * (n + 2)
    if cfg.dims is not None:
        dims = list(cfg.dims)
        for p in range(1, n + 1):
            r[p] = rng.randint(0, min(dims[p - 1] - r[p - 1], dims[p]))
        betti = [dims[p] - r[p] - r[p + 1] for p in range(n + 1)]
        return dims, betti, r
    betti = list(cfg.betti_targets) if cfg.betti_targets is not None else None
    if betti is None:
        betti = [0] * (n + 1)
        for p in range(n + 1):
            betti[p] = rng.randint(0, max(0, min(2, cfg.max_dim)))
    for p in range(1, n + 1):
        room = min(cfg.max_dim - betti[p - 1] - r[p - 1], cfg.max_dim - betti[p])
        r[p] = rng.randint(0, max(0, room))
    dims = [r[p] + betti[p] + r[p + 1] for p in range(n + 1)]
    if max(dims) > cfg.max_dim:
        raise Infeasible("betti targets exceed max_dim")
    return dims, betti, r


def _normal_form(dims, r) -> ChainComplex:
    """Cells of ``C_p`` ordered boundaries, homology, lifts; lift ``i`` of ``C_p`` maps to boundary ``i`` of ``C_{p-1}``."""
    n = len(dims) - 1
    bounds = []
    for p in range(1, n + 1):
        rows = [[0] * dims[p] for _ in range(dims[p - 1])]
        start = dims[p] - r[p]
        for i in range(r[p]):
            rows[i][start + i] = 1
        bounds.append(Matrix(dims[p - 1], dims[p], rows))
    return ChainComplex(n, tuple(dims), tuple(bounds))


def _transport(c: ChainComplex, change: Sequence[tuple[Matrix, Matrix]]) -> ChainComplex:
    """New coordinates ``x' = S_p^{-1} x``: boundaries become ``S_{p-1}^{-1} d_p S_p``."""
    return ChainComplex(c.n, c.dims, tuple(change[p - 1][1] @ c.d(p) @ change[p][0] for p in range(1, c.n + 1)))


def gen_chain_complex(cfg: GenConfig) -> GeneratedComplex:
    rng = cfg.rng()
    dims, betti, r = _choose_ranks(cfg, rng)
    nf = _normal_form(dims, r)
    change = [_random.random_invertible(_random.child(rng), d, cfg.entry_bound) for d in dims]
    c = _transport(nf, change)
    verdict = validate_complex(c)
    if not verdict:
        raise InvalidComplex(verdict)
    chain_bases = tuple(_random.random_invertible(_random.child(rng), d, cfg.entry_bound)[0] for d in dims)
    homology = []
    for p, d in enumerate(dims):
        cells = Matrix.identity(d).col_slice(r[p + 1], r[p + 1] + betti[p])
        reps = change[p][1] @ cells
        if r[p + 1] and betti[p]:
            shift = change[p][1] @ Matrix.identity(d).col_slice(0, r[p + 1])
            reps = reps + shift @ _random.random_matrix(_random.child(rng), r[p + 1], betti[p], cfg.entry_bound)
        homology.append(reps)
    return GeneratedComplex(c, chain_bases, tuple(homology))


# symplectic ----------------------------------------------------------------

@dataclass
class _Cells:
    """Mutable builder: cell lists per degree and the sparse pairing and boundary entries."""

    n: int
    count: list[int] = field(default_factory=list)
    pair: dict = field(default_factory=dict)  # (p, i, j) -> value, i in C_p, j in C_{n-p}
    bound: dict = field(default_factory=dict)  # (p, i, j) -> value, j in C_p, i in C_{p-1}

    def __post_init__(self):
        self.count = [0] * (self.n + 1)

    def new(self, p: int) -> int:
        self.count[p] += 1
        return self.count[p] - 1

    def set_pair(self, p: int, i: int, j: int, value) -> None:
        """Record ``omega_p(cell i, cell j)`` and the value forced on the opposite pairing."""
        self.pair[(p, i, j)] = Fraction(value)
        self.pair[(self.n - p, j, i)] = Fraction(value) * (-1 if p % 2 else 1)

    def build(self) -> SymplecticComplex:
        n, dims = self.n, self.count
        bounds = []
        for p in range(1, n + 1):
            rows = [[0] * dims[p] for _ in range(dims[p - 1])]
            for (q, i, j), v in self.bound.items():
                if q == p:
                    rows[i][j] = v
            bounds.append(Matrix(dims[p - 1], dims[p], rows))
        pairings = []
        for p in range(n + 1):
            rows = [[0] * dims[n - p] for _ in range(dims[p])]
            for (q, i, j), v in self.pair.items():
                if q == p:
                    rows[i][j] = v
            pairings.append(Matrix(dims[p], dims[n - p], rows))
        return SymplecticComplex(ChainComplex(n, tuple(dims), tuple(bounds)), tuple(pairings))


def _symplectic_plan(cfg: GenConfig, kind: str, rng: random.Random) -> tuple[list[int], list[int]]:
    """Homology dimensions for ``p <= n/2`` and ladder counts for ``j = 1..n/2``."""
    n, m = cfg.n, cfg.n // 2
    cap = cfg.max_dim
    if cfg.betti_targets is not None:
        t = cfg.betti_targets
        if any(t[p] != t[n - p] for p in range(n + 1)):
            raise Infeasible("betti targets must satisfy b_p = b_{n-p}")
        betti = list(t[: m + 1])
    elif kind == "exact":
        betti = [0] * (m + 1)
    else:
        betti = [rng.randint(1 if kind == "mixed" else 0, max(1, min(2, cap))) for _ in range(m)]
        betti.append(2 * rng.randint(1 if kind == "mixed" else 0, max(1, cap // 2 if cap < 4 else 1)))
    if betti[m] % 2:
        raise Infeasible("middle homology must have even dimension")
    if kind == "dzero":
        ladders = [0] * m
    else:
        ladders = [0] * m
        load = [betti[p] if p <= m else betti[n - p] for p in range(n + 1)]
        load[m] = betti[m]
        order = list(range(1, m + 1))
        rng.shuffle(order)
        for j in order:
            # ladder j adds a cell in degrees j, j - 1, n - j + 1, n - j
            degrees = [j, j - 1, n - j + 1, n - j]
            room = min(cap - load[d] - degrees.count(d) + 1 for d in degrees)
            per = sum(1 for d in degrees if d == m) or 1
            k = rng.randint(1 if kind == "exact" and j == order[0] else 0, max(0, min(2, room // per)))
            ladders[j - 1] = k
            for d in degrees:
                load[d] += k
        if kind in ("exact", "mixed") and not any(ladders):
            j = rng.randint(1, m)
            ladders[j - 1] = 1
    if kind == "mixed" and (not any(betti)):
        raise Infeasible("mixed instances need nonzero homology")
    if kind == "exact" and any(betti):
        raise Infeasible("exact instances have no homology")
    return betti, ladders


def symplectic_normal_form(n: int, betti: Sequence[int], ladders: Sequence[int]) -> SymplecticComplex:
    """Direct sum of a d-zero block with standard pairings and hyperbolic ladders.

    Ladder ``j`` has cells ``x`` in ``C_j`` and ``u`` in ``C_{n-j+1}`` with
    boundaries ``y`` and ``v``; it pairs ``x`` with ``v`` by 1 and ``y`` with
    ``u`` by ``(-1)^j``, which is what boundary compatibility forces.
    """
    m = n // 2
    cells = _Cells(n)
    for p in range(m):
        for _ in range(betti[p]):
            i, j = cells.new(p), cells.new(n - p)
            cells.set_pair(p, i, j, 1)
    half = betti[m] // 2
    es = [cells.new(m) for _ in range(half)]
    fs = [cells.new(m) for _ in range(half)]
    for e, f in zip(es, fs):
        cells.set_pair(m, e, f, 1)
    for j in range(1, m + 1):
        for _ in range(ladders[j - 1]):
            x, y = cells.new(j), cells.new(j - 1)
            u, v = cells.new(n - j + 1), cells.new(n - j)
            cells.bound[(j, y, x)] = 1
            cells.bound[(n - j + 1, v, u)] = 1
            cells.set_pair(j, x, v, 1)
            cells.set_pair(j - 1, y, u, (-1) ** j)
    return cells.build()


def transport_symplectic(s: SymplecticComplex, change: Sequence[tuple[Matrix, Matrix]]) -> SymplecticComplex:
    """Pull back along ``x = S_p x'``: pairings ``S_p^T Omega_p S_{n-p}``, boundaries conjugated."""
    n = s.n
    base = _transport(s.base, change)
    pairings = tuple(change[p][0].T @ s.pairings[p] @ change[n - p][0] for p in range(n + 1))
    return SymplecticComplex(base, pairings)


def gen_symplectic(cfg: GenConfig, kind: str = "mixed") -> SymplecticComplex:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {', '.join(KINDS)}")
    if cfg.n % 4 != 2:
        raise Infeasible(f"symplectic complexes need n = 2 mod 4, got {cfg.n}")
    rng = cfg.rng()
    betti, ladders = _symplectic_plan(cfg, kind, rng)
    nf = symplectic_normal_form(cfg.n, betti, ladders)
    change = [_random.random_invertible(_random.child(rng), d, cfg.entry_bound) for d in nf.base.dims]
    s = transport_symplectic(nf, change)
    verdict = validate_symplectic(s)
    if not verdict:
        raise InvalidSymplectic(verdict)
    return s


# short exact sequences -----------------------------------------------------

@dataclass(frozen=True)
class GeneratedSES:
    ses: ShortExactSequence
    chain_A: BasisFamily
    chain_B: BasisFamily
    chain_D: BasisFamily
    twist: str
    """``"unitriangular"`` or ``"odd"``: how ``c^B`` differs from ``c^A`` plus lifted ``c^D``."""


def gen_ses(cfg: GenConfig, twist: str | None = None) -> GeneratedSES:
    """A subcomplex spanned by a boundary-closed set of normal-form cells, and its quotient.

    Keeping a lift cell in the quotient while its boundary cell sits in the
    subcomplex makes the connecting map nonzero.
    """
    rng = cfg.rng()
    dims, _, r = _choose_ranks(cfg, rng)
    n = cfg.n
    nf = _normal_form(dims, r)
    keep: list[list[int]] = []
    for p in range(n + 1):
        chosen = []
        for i in range(dims[p]):
            lift_slot = i - (dims[p] - r[p])
            if lift_slot >= 0 and lift_slot not in keep[p - 1]:
                continue  # its boundary cell is not in the subcomplex
            if rng.random() < 0.5:
                chosen.append(i)
        keep.append(chosen)
    inc_nf, proj_nf = [], []
    for p in range(n + 1):
        rest = [i for i in range(dims[p]) if i not in keep[p]]
        eye = Matrix.identity(dims[p])
        inc_nf.append(eye.select_columns(keep[p]))
        proj_nf.append(eye.select_rows(rest))
    A = ChainComplex(n, tuple(len(k) for k in keep),
                     tuple(solve_linear(inc_nf[p - 1], nf.d(p) @ inc_nf[p]) for p in range(1, n + 1)))
    D = ChainComplex(n, tuple(dims[p] - len(keep[p]) for p in range(n + 1)),
                     tuple(proj_nf[p - 1] @ nf.d(p) @ proj_nf[p].T for p in range(1, n + 1)))
    chB = [_random.random_invertible(_random.child(rng), d, cfg.entry_bound) for d in nf.dims]
    chA = [_random.random_invertible(_random.child(rng), d, cfg.entry_bound) for d in A.dims]
    chD = [_random.random_invertible(_random.child(rng), d, cfg.entry_bound) for d in D.dims]
    B2, A2, D2 = _transport(nf, chB), _transport(A, chA), _transport(D, chD)
    inclusion = tuple(chB[p][1] @ inc_nf[p] @ chA[p][0] for p in range(n + 1))
    projection = tuple(chD[p][1] @ proj_nf[p] @ chB[p][0] for p in range(n + 1))
    ses = ShortExactSequence(A2, B2, D2, inclusion, projection)
    verdict = validate_ses(ses)
    if not verdict:
        raise InvalidSES("; ".join(verdict.violations))
    twist = twist or rng.choice(("unitriangular", "odd"))
    chain_A = tuple(_random.random_invertible(_random.child(rng), d, cfg.entry_bound)[0] for d in A2.dims)
    chain_D = tuple(_random.random_invertible(_random.child(rng), d, cfg.entry_bound)[0] for d in D2.dims)
    chain_B = []
    for p in range(n + 1):
        joint = (inclusion[p] @ chain_A[p]).hstack(solve_linear(projection[p], chain_D[p]))
        d = joint.cols
        if twist == "odd" and d >= 2:
            perm = list(range(d))
            i, j = rng.sample(range(d), 2)
            perm[i], perm[j] = perm[j], perm[i]
            mix = Matrix.identity(d).select_columns(perm)
        else:
            mix = _random.random_unitriangular(_random.child(rng), d, cfg.entry_bound)
        chain_B.append(joint @ mix)
    return GeneratedSES(ses, chain_A, tuple(chain_B), chain_D, twist)
