"""JSON instance files: parsing with field-level diagnostics and canonical output.

Canonical form is ``json.dumps`` with sorted keys, no insignificant
whitespace and a trailing newline; rationals are ``"a/b"`` or ``"a"``
strings.  Parsing a canonical file and serializing it again reproduces it
byte for byte.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Sequence

from .chain import ChainComplex
from .linalg import Matrix, format_rational, parse_rational
from .symplectic import SymplecticComplex
from .torsion import ShortExactSequence

FORMAT_VERSION = "1"


class ParseError(ValueError):
    """Malformed input; the message names the offending field or position."""


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# matrices and complexes ----------------------------------------------------

def matrix_to_json(m: Matrix) -> list:
    return [[format_rational(x) for x in row] for row in m.to_lists()]


def matrix_from_json(obj: Any, where: str, shape: tuple[int | None, int | None] = (None, None)) -> Matrix:
    """Parse nested rows.  ``[]`` takes its column count from ``shape`` (0 if unknown)."""
    want_r, want_c = shape
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a matrix (list of rows)")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ParseError(f"{where}[{i}]: expected a list of rationals")
        parsed = []
        for j, x in enumerate(row):
            try:
                parsed.append(parse_rational(x))
            except ValueError as exc:
                raise ParseError(f"{where}[{i}][{j}]: {exc}") from None
        rows.append(parsed)
    width = len(rows[0]) if rows else (want_c or 0)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"{where}[{i}]: row has {len(row)} entries, expected {width}")
    m = Matrix(len(rows), width, rows)
    if (want_r is not None and m.rows != want_r) or (want_c is not None and m.cols != want_c):
        raise ParseError(f"{where}: shape {m.rows}x{m.cols}, expected "
                         f"{'?' if want_r is None else want_r}x{'?' if want_c is None else want_c}")
    return m


def _is_count(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def complex_to_json(c: ChainComplex) -> dict:
    return {"n": c.n, "dims": list(c.dims), "boundaries": [matrix_to_json(b) for b in c.boundaries]}


def complex_from_json(obj: Any, where: str = "") -> ChainComplex:
    pre = f"{where}." if where else ""
    if not isinstance(obj, dict):
        raise ParseError(f"{where or 'instance'}: expected an object")
    for key in ("n", "dims", "boundaries"):
        if key not in obj:
            raise ParseError(f"{pre}{key}: missing")
    n, dims, bounds = obj["n"], obj["dims"], obj["boundaries"]
    if not _is_count(n):
        raise ParseError(f"{pre}n: expected a nonnegative integer")
    if not isinstance(dims, list) or not all(_is_count(d) for d in dims):
        raise ParseError(f"{pre}dims: expected a list of nonnegative integers")
    if len(dims) != n + 1:
        raise ParseError(f"{pre}dims: {len(dims)} entries, expected n + 1 = {n + 1}")
    if not isinstance(bounds, list) or len(bounds) != n:
        raise ParseError(f"{pre}boundaries: expected a list of {n} matrices")
    mats = tuple(matrix_from_json(b, f"{pre}boundaries[{i}]", (dims[i], dims[i + 1])) for i, b in enumerate(bounds))
    return ChainComplex(n, tuple(dims), mats)


def bases_to_json(bases: Sequence[Matrix]) -> dict:
    return {str(p): matrix_to_json(m) for p, m in enumerate(bases)}


def bases_from_json(obj: Any, where: str, n: int, rows: Sequence[int], cols: Sequence[int] | None = None) -> tuple[Matrix, ...]:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object keyed by degree")
    want = {str(p) for p in range(n + 1)}
    if set(obj) != want:
        raise ParseError(f"{where}: keys must be the degrees 0..{n}")
    return tuple(matrix_from_json(obj[str(p)], f"{where}.{p}", (rows[p], None if cols is None else cols[p]))
                 for p in range(n + 1))


# instance files --------------------------------------------------------------

@dataclass(frozen=True)
class Instance:
    complex: ChainComplex
    pairings: tuple[Matrix, ...] | None = None
    chain_bases: tuple[Matrix, ...] | None = None
    homology_bases: tuple[Matrix, ...] | None = None

    @property
    def symplectic(self) -> SymplecticComplex | None:
        return None if self.pairings is None else SymplecticComplex(self.complex, self.pairings)

    def to_json(self) -> dict:
        out = {"format_version": FORMAT_VERSION, **complex_to_json(self.complex)}
        if self.pairings is not None:
            out["pairings"] = [matrix_to_json(m) for m in self.pairings]
        if self.chain_bases is not None:
            out["chain_bases"] = bases_to_json(self.chain_bases)
        if self.homology_bases is not None:
            out["homology_bases"] = bases_to_json(self.homology_bases)
        return out


def _check_version(obj: Any) -> None:
    if not isinstance(obj, dict):
        raise ParseError("instance: expected a JSON object")
    if "format_version" not in obj:
        raise ParseError("format_version: missing")
    if obj["format_version"] != FORMAT_VERSION:
        raise ParseError(f"format_version: unsupported {obj['format_version']!r}, expected {FORMAT_VERSION!r}")


def instance_from_json(obj: Any) -> Instance:
    """Parse a chain-complex or symplectic instance.

    ``pairings`` may list all ``n + 1`` matrices or only those with
    ``p <= n/2``; the rest are then derived by antisymmetry.
    """
    _check_version(obj)
    known = {"format_version", "n", "dims", "boundaries", "pairings", "chain_bases", "homology_bases"}
    extra = set(obj) - known
    if extra:
        raise ParseError(f"{sorted(extra)[0]}: unknown field")
    c = complex_from_json(obj)
    n, dims = c.n, c.dims
    pairings = None
    if "pairings" in obj:
        raw = obj["pairings"]
        if not isinstance(raw, list) or len(raw) not in (n + 1, n // 2 + 1):
            raise ParseError(f"pairings: expected {n + 1} matrices, or {n // 2 + 1} for p <= n/2")
        mats = tuple(matrix_from_json(m, f"pairings[{p}]", (dims[p], dims[n - p])) for p, m in enumerate(raw))
        if len(mats) == n + 1:
            pairings = mats
        else:
            if n % 2:
                raise ParseError("pairings: a lower half needs even n")
            pairings = SymplecticComplex.from_lower_half(c, mats).pairings
    chain = homology = None
    if "chain_bases" in obj:
        chain = bases_from_json(obj["chain_bases"], "chain_bases", n, dims, dims)
    if "homology_bases" in obj:
        homology = bases_from_json(obj["homology_bases"], "homology_bases", n, dims)
    return Instance(c, pairings, chain, homology)


@dataclass(frozen=True)
class SESInstance:
    ses: ShortExactSequence
    chain_A: tuple[Matrix, ...] | None = None
    chain_B: tuple[Matrix, ...] | None = None
    chain_D: tuple[Matrix, ...] | None = None

    def to_json(self) -> dict:
        s = self.ses
        out = {
            "format_version": FORMAT_VERSION,
            "ses": {
                "A": complex_to_json(s.A),
                "B": complex_to_json(s.B),
                "D": complex_to_json(s.D),
                "inclusion": [matrix_to_json(m) for m in s.inclusion],
                "projection": [matrix_to_json(m) for m in s.projection],
            },
        }
        if self.chain_A is not None:
            out["chain_bases"] = {"A": bases_to_json(self.chain_A), "B": bases_to_json(self.chain_B),
                                  "D": bases_to_json(self.chain_D)}
        return out


def ses_from_json(obj: Any) -> SESInstance:
    _check_version(obj)
    if "ses" not in obj:
        raise ParseError("ses: missing")
    body = obj["ses"]
    if not isinstance(body, dict):
        raise ParseError("ses: expected an object")
    for key in ("A", "B", "D", "inclusion", "projection"):
        if key not in body:
            raise ParseError(f"ses.{key}: missing")
    A, B, D = (complex_from_json(body[k], f"ses.{k}") for k in "ABD")
    n = B.n
    if A.n != n or D.n != n:
        raise ParseError("ses: A, B and D must have the same top degree")
    for key in ("inclusion", "projection"):
        if not isinstance(body[key], list) or len(body[key]) != n + 1:
            raise ParseError(f"ses.{key}: expected {n + 1} matrices")
    inc = tuple(matrix_from_json(m, f"ses.inclusion[{p}]", (B.dims[p], A.dims[p])) for p, m in enumerate(body["inclusion"]))
    proj = tuple(matrix_from_json(m, f"ses.projection[{p}]", (D.dims[p], B.dims[p])) for p, m in enumerate(body["projection"]))
    ses = ShortExactSequence(A, B, D, inc, proj)
    if "chain_bases" not in obj:
        return SESInstance(ses)
    cb = obj["chain_bases"]
    if not isinstance(cb, dict) or set(cb) != {"A", "B", "D"}:
        raise ParseError("chain_bases: expected an object with keys A, B, D")
    parts = {k: bases_from_json(cb[k], f"chain_bases.{k}", n, cx.dims, cx.dims) for k, cx in zip("ABD", (A, B, D))}
    return SESInstance(ses, parts["A"], parts["B"], parts["D"])


def matrix_file_from_json(obj: Any) -> Matrix:
    _check_version(obj)
    if "matrix" not in obj:
        raise ParseError("matrix: missing")
    return matrix_from_json(obj["matrix"], "matrix")
