"""Command-line front end.

Exit codes: 0 success, 2 unreadable or non-symmetric input, 3 internal
invariant violation (including an exceeded Gauss cap), 4 realization failure,
5 Kirby invariance failure, 6 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import dictionary, exact, golden, kirby
from .canon import DEFAULT_GAUSS_CAP, TokenPackage, canon, parse
from .errors import (
    BitSizeExceeded,
    CapExceeded,
    InvariantViolation,
    LinkcanonError,
    NotSymmetric,
    ParseError,
    RealizationMismatch,
    SingularMatrix,
    UnrealizableU,
)
from .linkform import require_symmetric

EXIT_INPUT, EXIT_INVARIANT, EXIT_REALIZE, EXIT_KIRBY, EXIT_SELFTEST = 2, 3, 4, 5, 6


class InputError(Exception):
    pass


@dataclass(frozen=True)
class MatrixDocument:
    source: str
    matrix: exact.Mat
    name: str | None = None


# ---------------------------------------------------------------- input

def read_source(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def parse_matrix_text(text: str) -> tuple[exact.Mat, str | None]:
    """Whitespace rows, or a JSON object with a "matrix" field (by first byte)."""
    body = text.strip()
    name = None
    if body.startswith("{"):
        try:
            doc = json.loads(body)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON: {exc}") from None
        if not isinstance(doc, dict) or "matrix" not in doc:
            raise InputError('JSON input needs a "matrix" field')
        rows = doc["matrix"]
        name = doc.get("name")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise InputError('"matrix" must be an array of arrays')
        try:
            rows = [[_json_int(x) for x in r] for r in rows]
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        rows = []
        for lineno, line in enumerate(body.splitlines(), 1):
            if not line.strip():
                continue
            try:
                rows.append([int(tok) for tok in line.split()])
            except ValueError:
                raise InputError(f"line {lineno}: expected integers, got {line.strip()!r}") from None
    if any(len(r) != len(rows) for r in rows):
        raise InputError(f"matrix is not square ({len(rows)} rows, row lengths {[len(r) for r in rows]})")
    A = exact.as_matrix(rows)
    try:
        require_symmetric(A)
    except NotSymmetric as exc:
        raise InputError(f"matrix is not symmetric: {exc}") from None
    return A, name


def _json_int(x) -> int:
    if isinstance(x, bool):
        raise ValueError(f"not an integer: {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise ValueError(f"not an integer: {x!r}")


def load_matrix(source: str) -> MatrixDocument:
    A, name = parse_matrix_text(read_source(source))
    return MatrixDocument(source, A, name)


# ---------------------------------------------------------------- output

def _s(n: int) -> str:
    return str(n)


def package_document(T: TokenPackage, strict: bool) -> dict:
    layers = []
    for r in T.layers:
        entry = {"p": _s(r.p), "k": _s(r.k), "n": _s(r.n), "type": r.kind}
        if r.kind == "odd":
            entry["x"] = _s(r.x)
        elif r.kind == "A":
            entry["delta"] = None if r.delta is None else _s(r.delta)
        else:
            entry["u"] = _s(r.u)
        layers.append(entry)
    doc = {
        "token": T.serialize(strict=strict),
        "b1": _s(T.b1),
        "torsion_order": _s(T.torsion_order),
        "invariant_factors": [_s(d) for d in T.invariant_factors],
        "layers": layers,
    }
    if not strict:
        doc["extended_gauss"] = (
            None if T.extended_gauss is None else [{"k": _s(k), "u": _s(u)} for k, u in T.extended_gauss]
        )
    return doc


def emit(doc: dict, pretty_text: str | None) -> None:
    if pretty_text is not None:
        print(pretty_text)
    else:
        print(json.dumps(doc, sort_keys=True, ensure_ascii=False))


def _group_factors(factors) -> list[str]:
    out: list[tuple[str, int]] = []
    for label, sh in factors:
        text = label if label == dictionary.FREE_FACTOR else f"{label}[{sh}]"
        if out and out[-1][0] == text:
            out[-1] = (text, out[-1][1] + 1)
        else:
            out.append((text, 1))
    return [t if c == 1 else f"{t}×{c}" for t, c in out]


def _matrix_text(B) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in B) or "(empty)"


# ---------------------------------------------------------------- commands

def cmd_canon(args) -> int:
    doc = load_matrix(args.input)
    T = canon(doc.matrix, cap_gauss=args.cap_gauss)
    out = package_document(T, args.strict_paper)
    if doc.name is not None:
        out["name"] = doc.name
    emit(out, out["token"] if args.pretty else None)
    return 0


def _realize_input(args) -> TokenPackage:
    text = read_source(args.input)
    if text.lstrip().startswith("b1="):
        try:
            return parse(text.strip())
        except ParseError as exc:
            raise InputError(f"bad token: {exc}") from None
    A, _ = parse_matrix_text(text)
    return canon(A, cap_gauss=args.cap_gauss)


def cmd_realize(args) -> int:
    T = _realize_input(args)
    if args.strict_paper:
        T = T.strict()
    try:
        R = dictionary.realize(T, cap_gauss=args.cap_gauss)
    except UnrealizableU as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"package: {T.serialize()}", file=sys.stderr)
        return EXIT_REALIZE
    except RealizationMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"expected: {exc.expected.serialize()}", file=sys.stderr)
        print(f"actual:   {exc.actual.serialize()}", file=sys.stderr)
        return EXIT_REALIZE
    out = {
        "package": T.serialize(strict=args.strict_paper),
        "B": [[_s(x) for x in row] for row in R.B],
        "shift": _s(R.shift),
        "factors": [{"label": lb, "shift": _s(sh)} for lb, sh in R.factors],
        "descriptor": R.render(),
    }
    pretty = f"{_matrix_text(R.B)}\nshift={R.shift}\nfactors=[{', '.join(_group_factors(R.factors))}]"
    emit(out, pretty if args.pretty else None)
    return 0


def _fault(name: str | None):
    return {None: None, "gram": kirby.corrupt_gram}[name]


def cmd_verify_kirby(args) -> int:
    doc = load_matrix(args.input)
    reports = kirby.run_walks(
        doc.matrix,
        args.walks,
        args.steps,
        seed=args.seed,
        checkpoint_every=args.checkpoint_every,
        cap_gauss=args.cap_gauss,
        fault=_fault(args.inject_fault),
    )

    def token(T):
        return None if T is None else T.serialize(strict=args.strict_paper)

    walks = []
    for w, rep in enumerate(reports):
        entry = {"walk": _s(w), "seed": _s(rep.seed), "passed": rep.passed, "final_size": _s(len(rep.final))}
        if not rep.passed:
            got = next(T for step, T in rep.packages if step == rep.first_divergence)
            entry.update(
                first_divergence=_s(rep.first_divergence),
                expected=token(rep.packages[0][1]),
                actual=token(got),
                error=rep.error,
            )
        walks.append(entry)
    passed = all(r.passed for r in reports)
    out = {
        "passed": passed,
        "package": token(reports[0].packages[0][1]) if reports else token(canon(doc.matrix)),
        "walks": walks,
        "steps": _s(args.steps),
        "seed": _s(args.seed),
    }
    for entry in walks:
        if not entry["passed"]:
            print(
                f"walk {entry['walk']} diverged at step {entry['first_divergence']}: "
                f"expected {entry['expected']}, got {entry['actual']}"
                + (f" ({entry['error']})" if entry["error"] else ""),
                file=sys.stderr,
            )
    failed = sum(not w["passed"] for w in walks)
    emit(out, ("PASS" if passed else f"FAIL ({failed} of {len(walks)} walks diverged)") if args.pretty else None)
    return 0 if passed else EXIT_KIRBY


def cmd_selftest(args) -> int:
    rows = golden.selftest()
    passed = all(r.passed for r in rows)
    out = {
        "passed": passed,
        "rows": [
            {"name": r.name, "status": "PASS" if r.passed else "FAIL", "detail": r.detail, "ms": f"{1000 * r.seconds:.1f}"}
            for r in rows
        ],
    }
    width = max(len(r.name) for r in rows)
    table = "\n".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}" for r in rows)
    emit(out, table if args.pretty else None)
    for r in rows:
        if not r.passed:
            print(f"failed: {r.name}: {r.detail}", file=sys.stderr)
    return 0 if passed else EXIT_SELFTEST


# ---------------------------------------------------------------- parser

def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--strict-paper", action="store_true", help="omit extended_gauss from output and comparisons")
    common.add_argument("--cap-gauss", type=_positive, default=DEFAULT_GAUSS_CAP, help="largest quotient group to enumerate")

    parser = argparse.ArgumentParser(prog="linkcanon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canon", parents=[common], help="token package of a matrix")
    p.add_argument("input", help="matrix file, or - for stdin")
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("realize", parents=[common], help="canonical matrix for a matrix or token")
    p.add_argument("input", help="matrix or token file, or - for stdin")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify-kirby", parents=[common], help="random Kirby walks with invariance checks")
    p.add_argument("input", help="matrix file, or - for stdin")
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--walks", type=_nonneg, default=25)
    p.add_argument("--steps", type=_nonneg, default=50)
    p.add_argument("--checkpoint-every", type=_positive, default=1)
    p.add_argument("--inject-fault", choices=["gram"], default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify_kirby)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in worked examples")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NotSymmetric, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UnrealizableU, RealizationMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REALIZE
    except (InvariantViolation, CapExceeded, SingularMatrix, BitSizeExceeded, LinkcanonError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
