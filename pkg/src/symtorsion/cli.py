"""``symtorsion`` command line.

Every command prints one canonical JSON run report (or ``key: value`` lines
with ``--format text``).  Exit status: 0 success or equality, 1 verified
inequality or invariant violation, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

from . import io as sio
from .chain import InvalidComplex, compute_homology, split_general, standard_bases, validate_complex
from .generators import KINDS, GenConfig, Infeasible, gen_chain_complex, gen_ses, gen_symplectic
from .pfaffian import NotSkew, pfaffian
from .symplectic import (
    InvalidSymplectic,
    InvariantViolation,
    make_omega_compatible_bases,
    split_symplectic,
    validate_symplectic,
    verify_main_theorem,
)
from .torsion import InvalidSES, long_exact_sequence, milnor_product_check, torsion, validate_ses

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Failure(Exception):
    """Carries outputs for a report that ends with exit status 1."""

    def __init__(self, outputs: dict):
        super().__init__("failure")
        self.outputs = outputs


def _verdict_json(v) -> dict:
    return {"ok": v.ok, "violations": list(v.violations), "first_degree": v.first_degree}


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _decode(data: bytes) -> Any:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise sio.ParseError("input is not UTF-8") from None
    return sio.loads(text)


def _is_ses(obj: Any) -> bool:
    return isinstance(obj, dict) and "ses" in obj


# commands ------------------------------------------------------------------

def cmd_check(args, obj) -> dict:
    if _is_ses(obj):
        inst = sio.ses_from_json(obj)
        v = validate_ses(inst.ses)
        out = {"ses": _verdict_json(v)}
        if not v:
            raise Failure(out)
        return out
    inst = sio.instance_from_json(obj)
    chain = validate_complex(inst.complex)
    out = {"chain": _verdict_json(chain)}
    ok = chain.ok
    if inst.pairings is not None:
        sym = validate_symplectic(inst.symplectic)
        out["symplectic"] = _verdict_json(sym)
        ok = ok and sym.ok
    if not ok:
        raise Failure(out)
    return out


def cmd_homology(args, obj) -> dict:
    inst = sio.instance_from_json(obj)
    h = compute_homology(inst.complex)
    return {
        "betti": list(h.betti),
        "cycles": sio.bases_to_json(h.Z_basis),
        "boundaries": sio.bases_to_json(h.B_basis),
        "representatives": sio.bases_to_json(h.H_reps),
        "lifts": sio.bases_to_json(h.ell_image),
    }


def cmd_torsion(args, obj) -> dict:
    inst = sio.instance_from_json(obj)
    if inst.chain_bases is None or inst.homology_bases is None:
        missing = [k for k, v in (("chain_bases", inst.chain_bases), ("homology_bases", inst.homology_bases)) if v is None]
        raise UsageError("torsion needs the attachments: " + ", ".join(missing))
    return torsion(inst.complex, inst.chain_bases, inst.homology_bases).to_json()


def _summand_json(cx, emb) -> dict:
    return {"complex": sio.complex_to_json(cx), "embedding": sio.bases_to_json(emb)}


def cmd_split(args, obj) -> dict:
    inst = sio.instance_from_json(obj)
    if inst.pairings is None:
        ex, dz = split_general(inst.complex)
        return {"exact": _summand_json(ex.complex, ex.embedding), "dzero": _summand_json(dz.complex, dz.embedding)}
    s = inst.symplectic
    sp = split_symplectic(s, make_omega_compatible_bases(s))
    out = {}
    for name, part, emb in (("exact", sp.exact, sp.exact_embedding), ("dzero", sp.dzero, sp.dzero_embedding)):
        out[name] = _summand_json(part.base, emb)
        out[name]["pairings"] = [sio.matrix_to_json(m) for m in part.pairings]
    out["cross_orthogonal"] = all(m.is_zero() for m in sp.cross)
    return out


def cmd_pfaffian(args, obj) -> dict:
    m = sio.matrix_file_from_json(obj)
    try:
        return {"pfaffian": sio.format_rational(pfaffian(m))}
    except NotSkew as exc:
        raise sio.ParseError(f"matrix: {exc}") from None


def cmd_snake(args, obj) -> dict:
    inst = sio.ses_from_json(obj)
    les = long_exact_sequence(inst.ses)
    betti = compute_homology(les.complex).betti
    out = {
        "dims": list(les.complex.dims),
        "boundaries": [sio.matrix_to_json(b) for b in les.complex.boundaries],
        "exact": not any(betti),
    }
    if inst.chain_A is not None:
        out["milnor"] = milnor_product_check(inst.ses, inst.chain_A, inst.chain_B, inst.chain_D).to_json()
    if not out["exact"]:
        raise Failure(out)
    return out


def _config(args, seed: int | None = None) -> GenConfig:
    try:
        return GenConfig(
            seed=args.seed if seed is None else seed,
            n=args.n,
            max_dim=args.max_dim,
            betti_targets=args.betti,
            dims=args.dims,
            entry_bound=args.entry_bound,
        )
    except Infeasible as exc:
        raise UsageError(str(exc)) from None


def generate(args) -> dict:
    cfg = _config(args)
    try:
        if args.kind == "chain":
            g = gen_chain_complex(cfg)
            return sio.Instance(g.complex, None, g.chain_bases, g.homology_bases).to_json()
        if args.kind == "ses":
            g = gen_ses(cfg)
            return sio.SESInstance(g.ses, g.chain_A, g.chain_B, g.chain_D).to_json()
        s = gen_symplectic(cfg, args.kind)
        h = compute_homology(s.base)
        return sio.Instance(s.base, s.pairings, None, h.H_reps).to_json()
    except Infeasible as exc:
        raise UsageError(str(exc)) from None


def _verify_one(obj: Any, probe: bool) -> dict:
    inst = sio.instance_from_json(obj)
    if inst.pairings is None:
        raise UsageError("verify needs a symplectic instance (pairings missing)")
    probe_bases = None
    if probe:
        probe_bases = inst.chain_bases if inst.chain_bases is not None else standard_bases(inst.complex)
    return verify_main_theorem(inst.symplectic, inst.homology_bases, probe_bases).to_json()


def _verify_task(task: tuple[str, Any, bool]) -> dict:
    """Worker entry point: returns the report or an error record."""
    label, payload, probe = task
    try:
        if isinstance(payload, tuple):  # generation request
            cfg, kind = payload
            s = gen_symplectic(cfg, kind)
            obj = sio.Instance(s.base, s.pairings).to_json()
        else:
            obj = payload
        return {"instance": label, **_verify_one(obj, probe)}
    except (sio.ParseError, UsageError, Infeasible) as exc:
        return {"instance": label, "error": str(exc), "status": EXIT_USAGE}
    except (InvalidComplex, InvalidSymplectic, InvariantViolation, ValueError) as exc:
        return {"instance": label, "error": str(exc), "status": EXIT_FAIL}


def _passed(rep: dict, probe: bool) -> bool:
    if "error" in rep:
        return False
    return rep["equal"] and (not probe or rep["probe"]["equal"])


def cmd_verify(args, obj) -> dict:
    if args.batch is None:
        if obj is None:
            cfg = _config(args)
            kind = "mixed" if args.kind == "chain" else args.kind
            if kind == "ses":
                raise UsageError("verify generates symplectic kinds only")
            try:
                s = gen_symplectic(cfg, kind)
            except Infeasible as exc:
                raise UsageError(str(exc)) from None
            obj = sio.Instance(s.base, s.pairings).to_json()
        out = _verify_one(obj, args.probe)
        if not out["equal"] or (args.probe and not out["probe"]["equal"]):
            raise Failure(out)
        return out
    tasks = []
    if args.paths:
        for path in args.paths:
            tasks.append((path, _decode(_read(path)), args.probe))
    else:
        kind = "mixed" if args.kind == "chain" else args.kind
        if kind == "ses":
            raise UsageError("verify generates symplectic kinds only")
        for i in range(args.batch):
            tasks.append((f"seed={args.seed + i}", (_config(args, args.seed + i), kind), args.probe))
    workers = args.jobs or min(len(tasks), os.cpu_count() or 1) or 1
    if workers == 1:
        reports = [_verify_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_verify_task, tasks))
    out = {"instances": reports, "all_equal": all(_passed(r, args.probe) for r in reports)}
    if any(r.get("status") == EXIT_USAGE for r in reports):
        raise UsageError("; ".join(f"{r['instance']}: {r['error']}" for r in reports if "error" in r))
    if not out["all_equal"]:
        raise Failure(out)
    return out


COMMANDS: dict[str, Callable] = {
    "check": cmd_check,
    "homology": cmd_homology,
    "torsion": cmd_torsion,
    "split": cmd_split,
    "pfaffian": cmd_pfaffian,
    "snake": cmd_snake,
    "verify": cmd_verify,
}


# argument parsing ----------------------------------------------------------

def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("values must be nonnegative")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json", help="report format")
    common.add_argument("--seed", type=int, default=0, help="generator seed")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    gen_flags = argparse.ArgumentParser(add_help=False)
    gen_flags.add_argument("--n", type=int, default=2, help="top degree")
    gen_flags.add_argument("--dims", type=_int_list, help="comma-separated dimensions")
    gen_flags.add_argument("--betti", type=_int_list, help="comma-separated homology dimensions")
    gen_flags.add_argument("--max-dim", type=int, default=6, dest="max_dim")
    gen_flags.add_argument("--entry-bound", type=int, default=5, dest="entry_bound")
    gen_flags.add_argument("--kind", choices=("chain", "ses") + KINDS, default="mixed")

    parser = argparse.ArgumentParser(prog="symtorsion", description="Exact torsion of based and symplectic chain complexes.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("check", "validate a complex, symplectic complex or short exact sequence"),
        ("homology", "homology bases and sections"),
        ("torsion", "torsion from attached chain and homology bases"),
        ("split", "exact plus d-zero splitting"),
        ("pfaffian", "Pfaffian of a skew-symmetric matrix file"),
        ("snake", "long exact homology sequence of a short exact sequence"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("path", help="instance file, or - for stdin")
    g = sub.add_parser("gen", parents=[common, gen_flags], help="emit a seeded random instance")
    g.set_defaults(path=None)
    v = sub.add_parser("verify", parents=[common, gen_flags], help="compare torsion with the pairing formula")
    v.add_argument("paths", nargs="*", help="symplectic instance files; generate one when absent")
    v.add_argument("--probe", action="store_true", help="also report torsion in the file's (or standard) chain bases")
    v.add_argument("--batch", type=int, metavar="N", help="verify N generated instances (seeds seed..seed+N-1) or all given files")
    v.add_argument("--jobs", type=int, help="worker processes for --batch")
    return parser


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return sio.dumps(report)
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else k, value[k])
        else:
            lines.append(f"{prefix}: {sio.dumps(value).strip() if isinstance(value, list) else value}")

    walk("", report)
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run a command; returns ``(status, stdout, stderr)`` without touching the process streams."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), "", ""
    start = time.perf_counter()
    raw = b""
    status, outputs, err = EXIT_OK, None, ""
    try:
        if args.command == "gen":
            outputs = generate(args)
            text = sio.dumps(outputs)
            if args.output:
                with open(args.output, "w", encoding="ascii") as fh:
                    fh.write(text)
                return EXIT_OK, "", ""
            return EXIT_OK, text, ""
        obj = None
        if args.command == "verify":
            if args.batch is not None and args.paths:
                raw = "\n".join(args.paths).encode()
            elif len(args.paths) > 1:
                raise UsageError("several files need --batch")
            elif args.paths:
                raw = _read(args.paths[0])
                obj = _decode(raw)
            else:
                raw = sio.dumps(_config(args).__dict__ | {"kind": args.kind}).encode()
        else:
            raw = _read(args.path)
            obj = _decode(raw)
        outputs = COMMANDS[args.command](args, obj)
    except Failure as exc:
        status, outputs = EXIT_FAIL, exc.outputs
    except (UsageError, sio.ParseError) as exc:
        return EXIT_USAGE, "", f"symtorsion: error: {exc}\n"
    except (InvalidComplex, InvalidSymplectic, InvalidSES, InvariantViolation, ValueError) as exc:
        status, outputs, err = EXIT_FAIL, {"error": str(exc)}, f"symtorsion: {exc}\n"
    report = {
        "command": args.command,
        "input_digest": sio.digest(raw),
        "outputs": outputs,
        "duration_ms": int((time.perf_counter() - start) * 1000),
    }
    text = _render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
        text = ""
    return status, text, err


def main(argv: list[str] | None = None) -> int:
    status, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
