"""Command-line front end: ``icubes <command> ...``."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional

from . import explore
from .errors import IcubeError
from .hermitian import HermForm2, build_orthoregular
from .icube import (
    extend3,
    extend4,
    extend6_real,
    necessary_conditions,
    snf_pairing_check,
    verify,
)
from .lattice import snf
from .quat import lipschitz_left_divisor
from .ring import Ring, format_gauss, two_squares
from .textio import (
    dumps,
    elem_to_json,
    format_matrix_pretty,
    icube_to_json,
    load_matrix,
    matrix_to_json,
    parse_elem,
    parse_quat,
    quat_to_json,
)

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_ORACLE = 0, 1, 2, 3
DEFAULT_SEED = 20240229

REASON_LABELS = {"one-plus-i-indivisible": "1+i-indivisible"}


class UsageError(Exception):
    pass


class Output:
    """Collects text lines and a JSON payload; nothing is written until the
    command has finished, so failing runs leave stdout empty in json mode."""

    def __init__(self, fmt: str, command: str):
        self.fmt = fmt
        self.command = command
        self.lines: list = []
        self.payload: dict = {}
        self.status = EXIT_OK

    def text(self, line: str = ""):
        self.lines.append(line)

    def flush(self, stream):
        if self.fmt == "json":
            stream.write(dumps({"schema": 1, "command": self.command, **self.payload}) + "\n")
        elif self.lines:
            stream.write("\n".join(self.lines) + "\n")


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    value = os.environ.get(name)
    return int(value) if value else default


def _read_matrix(args, ring: Ring) -> list:
    if args.input == "-":
        text = sys.stdin.read()
    elif args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from exc
    elif args.matrix is not None:
        text = args.matrix
    else:
        raise UsageError("give a matrix inline or with --input")
    try:
        return load_matrix(text, ring)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"cannot parse matrix: {exc}") from exc


def _as_columns_input(A: list) -> list:
    """A single row is read as a column vector."""
    if len(A) == 1:
        return [[x] for x in A[0]]
    return A


def _emit_icube(out: Output, ic):
    out.text(format_matrix_pretty(ic.entries))
    out.text(f"lambda = {ic.lam}")
    out.payload["icube"] = icube_to_json(ic)


# ---------------------------------------------------------------------------
# commands


def cmd_extend(args, out: Output):
    ring = Ring.parse(args.ring)
    A = _as_columns_input(_read_matrix(args, ring))
    n = len(A)
    dim = args.dim or n
    if dim != n:
        raise UsageError(f"--dim {dim} does not match the input dimension {n}")
    if dim == 3:
        ic = extend3(A, ring)
    elif dim == 4:
        ic = extend4(A, ring)
    elif dim == 6 and ring is Ring.Z and len(A[0]) == 1:
        ic = extend6_real([r[0] for r in A])
    else:
        raise UsageError("supported: dimension 3 or 4 (Z, Zi) and dimension 6 vectors over Z")
    _emit_icube(out, ic)


def cmd_verify(args, out: Output):
    ring = Ring.parse(args.ring)
    A = _read_matrix(args, ring)
    try:
        ic = verify(A, ring)
    except IcubeError as exc:
        out.text(f"not an icube: {exc}")
        out.payload.update(icube=False, error=str(exc), pair=[getattr(exc, "i", None), getattr(exc, "j", None)])
        out.status = EXIT_COMPUTE
        return
    out.text(f"icube: n={ic.n} k={ic.k} lambda={ic.lam}")
    out.payload.update(icube=True, **{"lambda": str(ic.lam), "n": ic.n, "k": ic.k})


def cmd_obstruct(args, out: Output):
    ring = Ring.parse(args.ring)
    A = _read_matrix(args, ring)
    v = A[0] if len(A) == 1 else [r[0] for r in A]
    rep = necessary_conditions(v, ring)
    if rep.obstructed:
        out.text(f"Obstructed: {REASON_LABELS.get(rep.reason, rep.reason)}")
    else:
        out.text("Extendable-unknown")
    out.payload.update(verdict=rep.verdict, reason=rep.reason,
                       witness={k: str(x) for k, x in rep.witness.items()})
    if args.oracle:
        ext = explore.search_extension([[x] for x in v], None, ring, args.max_nodes)
        out.text(f"oracle: {'extension found' if ext is not None else 'no extension'}")
        out.payload["oracle_extension"] = None if ext is None else matrix_to_json(ext)
        if rep.obstructed and ext is not None:
            out.text("oracle disagreement: an obstructed vector was extended")
            out.status = EXIT_ORACLE


def cmd_snf(args, out: Output):
    ring = Ring.parse(args.ring)
    A = _read_matrix(args, ring)
    res = snf(A, ring)
    out.text("diag: " + ", ".join(format_gauss(d) for d in res.diag))
    out.payload["diag"] = [elem_to_json(d) for d in res.diag]
    if len(A) == len(A[0]):
        try:
            ic = verify(A, ring)
        except IcubeError:
            return
        ok, _ = snf_pairing_check(ic)
        out.text(f"pairing conj(d_j) d_(n+1-j) = {ic.lam}: {'ok' if ok else 'FAILED'}")
        out.payload["pairing"] = ok
        if not ok:
            out.status = EXIT_ORACLE


def cmd_factor_quat(args, out: Output):
    try:
        t = parse_quat(args.t)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    u, v = lipschitz_left_divisor(t, args.norm)
    out.text(f"u = {u}")
    out.text(f"v = {v}")
    out.payload.update(t=quat_to_json(t), u=quat_to_json(u), v=quat_to_json(v))


def cmd_two_squares(args, out: Output):
    z = two_squares(args.n)
    if z is None:
        out.text(f"{args.n} is not a sum of two squares")
        out.payload["result"] = None
        out.status = EXIT_COMPUTE
        return
    out.text(f"{args.n} = {z.re}^2 + {z.im}^2")
    out.payload["result"] = elem_to_json(z)


def _parse_delta(text: Optional[str], ring: Ring):
    if text is None:
        return None
    if "/" in text:
        return Fraction(text)
    return parse_elem(text, ring)


def cmd_orthoreg(args, out: Output):
    ring = Ring.parse(args.ring)
    try:
        M = HermForm2.from_matrix(load_matrix(args.form, ring), ring)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad form: {exc}") from exc
    basis = build_orthoregular(M, args.lam, delta=_parse_delta(args.delta, ring))
    if basis is None:
        out.text("no orthoregular basis from the constructive path")
        out.payload["basis"] = None
        out.status = EXIT_COMPUTE
        return
    A = basis.matrix()
    out.text(format_matrix_pretty(A))
    out.text(f"lambda = {basis.lam}, nu = {basis.nu}, nu*delta = {format_gauss(basis.nu_delta)}")
    out.payload["basis"] = matrix_to_json(A)
    out.payload["nu"] = str(basis.nu)
    out.payload["nu_delta"] = elem_to_json(basis.nu_delta)


def cmd_hecke_count(args, out: Output):
    rep = explore.hecke_count(args.n, args.norm1, args.norm2, args.max_matrices, args.max_nodes)
    kind = "exact" if rep.exact else "lower bound"
    out.text(f"#S_{rep.n} for |l1 l2|^2 = {rep.norm1 * rep.norm2}: {rep.count} ({kind})")
    for key, value in sorted(rep.extra.items()):
        out.text(f"  {key}: {value}")
    out.payload.update(rep.to_json())


def cmd_sweep_c8(args, out: Output):
    ranks = tuple(int(r) for r in args.ranks.split(",")) if args.ranks else ()
    rep = explore.conjecture8_sweep(args.norm_bound, args.samples, args.seed, ranks,
                                    args.workers, args.max_nodes, args.report)
    out.text(rep.summary())
    for r in rep.records:
        if r["status"] != "extendable":
            out.text(f"  {r['status']}: {r['instance']}")
    out.payload.update(counts=rep.counts, records=rep.records)


def cmd_verify_paper_examples(args, out: Output):
    records = explore.verify_paper_counterexamples()
    for r in records:
        out.text(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']}")
    out.payload["fixtures"] = [{k: (v if isinstance(v, (bool, int, str)) else str(v))
                                for k, v in r.items()} for r in records]
    if not all(r["passed"] for r in records):
        out.status = EXIT_ORACLE


COMMANDS = {
    "extend": cmd_extend,
    "verify": cmd_verify,
    "obstruct": cmd_obstruct,
    "snf": cmd_snf,
    "factor-quat": cmd_factor_quat,
    "two-squares": cmd_two_squares,
    "orthoreg": cmd_orthoreg,
    "hecke-count": cmd_hecke_count,
    "sweep-c8": cmd_sweep_c8,
    "verify-paper-examples": cmd_verify_paper_examples,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=_env_int("ICUBES_SEED", DEFAULT_SEED))
    common.add_argument("--workers", type=int, default=_env_int("ICUBES_WORKERS", 1))
    common.add_argument("--max-nodes", type=int, default=_env_int("ICUBES_MAX_NODES", None),
                        help="node budget for brute-force searches")

    def with_matrix(p):
        p.add_argument("--ring", default="Z", help="Z or Zi")
        p.add_argument("matrix", nargs="?", help="inline matrix: entries ',', rows ';'")
        p.add_argument("--input", help="file with a text or JSON matrix")

    parser = argparse.ArgumentParser(prog="icubes", description="Integral matrices with orthogonal columns of equal norm.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extend", parents=[common], help="extend an icube in dimension 3, 4 or 6")
    with_matrix(p)
    p.add_argument("--dim", type=int)

    p = sub.add_parser("verify", parents=[common], help="check that a matrix is an icube")
    with_matrix(p)

    p = sub.add_parser("obstruct", parents=[common], help="necessary conditions for full extension")
    with_matrix(p)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force search")

    p = sub.add_parser("snf", parents=[common], help="Smith normal form")
    with_matrix(p)

    p = sub.add_parser("factor-quat", parents=[common], help="left divisor of a Lipschitz quaternion")
    p.add_argument("t", help='quaternion like "1+2i-3j+4k"')
    p.add_argument("--norm", type=int, required=True)

    p = sub.add_parser("two-squares", parents=[common], help="write n as a sum of two squares")
    p.add_argument("n", type=int)

    p = sub.add_parser("orthoreg", parents=[common], help="integral orthoregular basis of a binary form")
    p.add_argument("--ring", default="Z")
    p.add_argument("--form", required=True, help='2x2 matrix such as "2,1;1,3"')
    p.add_argument("--lam", type=int, required=True)
    p.add_argument("--delta", help="type delta (element or fraction)")

    p = sub.add_parser("hecke-count", parents=[common], help="count Hecke returns")
    p.add_argument("--n", type=int, required=True, choices=(2, 3, 4))
    p.add_argument("norm1", type=int)
    p.add_argument("norm2", type=int)
    p.add_argument("--max-matrices", type=int, default=_env_int("ICUBES_MAX_MATRICES", 200))

    p = sub.add_parser("sweep-c8", parents=[common], help="extension sweep for icubes in Z^8")
    p.add_argument("--norm-bound", type=int, default=25)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--ranks", default="2,3,4,5,6,7")
    p.add_argument("--report", help="append JSON lines to this file")

    sub.add_parser("verify-paper-examples", parents=[common], help="run the golden fixtures")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = Output(args.format, args.command)
    try:
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (IcubeError, ArithmeticError, NotImplementedError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_COMPUTE
    out.flush(stdout)
    return out.status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
