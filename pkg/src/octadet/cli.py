"""Command-line interface.

Exit codes: 0 success (or both sides equal), 1 a verified mathematical
mismatch, 2 usage, input or guard errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, freeconv, hyperoct, matrices
from .errors import GuardError, OctadetError
from .matrices import CharPolyCoeffs, Matrix
from .rings import ring_from_spec
from .verify import IDENTITIES, SuiteConfig, run_suite

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class InputError(OctadetError):
    """A file could not be read or parsed; the message names the file."""


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_matrix(path: str, ring_spec: str | None) -> Matrix:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    try:
        ring = ring_from_spec(ring_spec) if ring_spec else None
        return Matrix.from_json(obj, ring)
    except OctadetError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_charpoly(args) -> int:
    A = _load_matrix(args.matrix, args.ring)
    if not A.is_square:
        raise InputError(f"{args.matrix}: charpoly needs a square matrix, got {A.rows}x{A.cols}")
    sys.stdout.write(_dump(matrices.charpoly(A).to_json()))
    return EXIT_OK


_CONV_INPUTS = {"add": "ab", "mult": "abc", "rect": "abcd"}


def _closed(kind: str, mats: dict[str, Matrix]) -> CharPolyCoeffs:
    cp, mm = matrices.charpoly, matrices.mat_mul
    if kind == "add":
        return freeconv.conv_add_rhs(cp(mats["a"]), cp(mats["b"]))
    if kind == "mult":
        return freeconv.conv_mult_rhs(cp(mm(mats["b"], mats["c"])), cp(mats["a"]))
    a, b, c, d = (mats[k] for k in "abcd")
    return freeconv.conv_rect_rhs(cp(mm(a, c)), cp(mm(b, d)), a.rows, a.cols)


def _groupsum(kind: str, mats: dict[str, Matrix]) -> CharPolyCoeffs:
    if kind == "add":
        return hyperoct.conv_add_lhs(mats["a"], mats["b"])
    if kind == "mult":
        return hyperoct.conv_mult_lhs(mats["a"], mats["b"], mats["c"])
    return hyperoct.conv_rect_lhs(*(mats[k] for k in "abcd"))


def _conv_shapes(kind: str, mats: dict[str, Matrix]) -> tuple[int, int]:
    """Validate shapes up front and return ``(n, m)``."""
    a = mats["a"]
    if kind == "add":
        n = a.rows
        want = {"a": (n, n), "b": (n, n)}
        m = n
    elif kind == "mult":
        m, n = a.rows, mats["b"].rows
        want = {"a": (m, m), "b": (n, m), "c": (m, n)}
    else:
        n, m = a.rows, a.cols
        if n > m:
            raise InputError(f"rect needs --a to be n x m with n <= m, got {n}x{m}")
        want = {"a": (n, m), "b": (n, m), "c": (m, n), "d": (m, n)}
    for key, shape in want.items():
        if mats[key].shape != shape:
            raise InputError(
                f"--{key}: expected {shape[0]}x{shape[1]} for {kind}, got {mats[key].rows}x{mats[key].cols}"
            )
        if mats[key].ring != a.ring:
            raise InputError(f"--{key}: ring {mats[key].ring} differs from --a ring {a.ring}")
    return n, m


def cmd_convolve(args) -> int:
    kind = args.kind
    needed = _CONV_INPUTS[kind]
    missing = [f"--{k}" for k in needed if getattr(args, k) is None]
    if missing:
        raise InputError(f"convolve {kind} needs {', '.join(missing)}")
    mats = {k: _load_matrix(getattr(args, k), args.ring) for k in needed}
    n, m = _conv_shapes(kind, mats)
    out: dict = {"kind": kind, "mode": args.mode, "ring": str(mats["a"].ring), "n": n, "m": m}
    if args.mode in ("groupsum", "both"):
        # refuse before loading any work
        hyperoct.check_terms(f"convolve {kind} group sum", hyperoct.group_sum_terms(kind, n, m))
    closed = _closed(kind, mats) if args.mode in ("closed", "both") else None
    group = _groupsum(kind, mats) if args.mode in ("groupsum", "both") else None
    if closed is not None:
        out["closed"] = closed.to_json()
    if group is not None:
        out["groupsum"] = group.to_json()
    code = EXIT_OK
    if closed is not None and group is not None:
        out["equal"] = closed == group
        code = EXIT_OK if out["equal"] else EXIT_MISMATCH
    sys.stdout.write(_dump(out))
    return code


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def cmd_verify(args) -> int:
    identities = _csv_list(args.identities) if args.identities else list(IDENTITIES)
    cfg = SuiteConfig(
        rings=_csv_list(args.rings),
        max_n=args.max_dim,
        max_m=args.max_m,
        trials=args.trials,
        seed=args.seed,
        identities=identities,
        fail_fast=args.fail_fast,
    )
    report = run_suite(cfg, jobs=args.jobs, timing=args.timing)
    text = report.dumps()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        for name, res in report.results.items():
            status = "PASS" if res.failed == 0 else "FAIL"
            print(f"{status} {name}: {res.passed}/{res.checked}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_explore(args) -> int:
    table = hyperoct.four_set_table(args.n, args.k)
    csv_text = table.to_csv()
    summary = _dump(table.summary())
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        sys.stdout.write(summary)
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(summary)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="octadet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"octadet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charpoly", help="coefficients of det(xI + A)")
    p.add_argument("--ring", help="ring spec: int, mod:<m>, poly:<spec>; defaults to the file's ring")
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("convolve", help="finite free convolutions: closed form, group sum, or both")
    p.add_argument("kind", choices=["add", "mult", "rect"])
    p.add_argument("--mode", choices=["closed", "groupsum", "both"], default="both")
    p.add_argument("--ring")
    for key in "abcd":
        p.add_argument(f"--{key}", metavar="FILE", help=f"matrix {key.upper()}")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("verify", help="run the seeded identity suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--max-m", type=int, default=None, help="second dimension cap (defaults to --max-dim)")
    p.add_argument("--rings", default="int,mod:6,mod:2")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--identities", help=f"comma-separated subset of {','.join(IDENTITIES)}")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here instead of standard output")
    p.add_argument("--timing", action="store_true", help="record wall_ms (reports then differ run to run)")
    p.add_argument("--fail-fast", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explore", help="tabulate sums for the open four-subset problem")
    p.add_argument("kind", choices=["four-set"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", help="CSV path; without it the CSV goes to standard output")
    p.set_defaults(func=cmd_explore)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"octadet: refused: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OctadetError as exc:
        print(f"octadet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"octadet: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
