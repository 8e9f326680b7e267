"""Command-line front end: ``lpf factor|count|constant|compare|chars``.

Every command builds an envelope {command, parameters, results, version,
conventions} and renders it as JSON, CSV or a plain-text table.  Results
are lists of flat records, so the three formats carry the same data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from decimal import Decimal, InvalidOperation
from importlib import resources

from . import __version__
from .characters import L1, character_group, conductor_and_primitive, gauss_sum
from .constants import DEFAULT_PRIME_BOUND, constant_report
from .counting import CONVENTION_FLAG, MODES, count_record
from .errors import CapacityError, InvalidInput, UnsupportedQ
from .mgroup import PrimePower, factorize, least_primary_factor, prime_powers_up_to, primary_decomposition
from .residues import check_supported, residue_set_B
from .sieve import sieve_least_primary

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_UNSUPPORTED = 0, 2, 3, 4
FORMATS = ("json", "csv", "text")


# ---------------------------------------------------------------- parsing


def _decimal(text: str) -> Decimal:
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not d.is_finite():
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return d


def parse_int(text: str) -> int:
    """Integer that may be written in scientific notation, e.g. 1e7."""
    d = _decimal(text)
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_real(text: str) -> int | float:
    d = _decimal(text)
    return int(d) if d == d.to_integral_value() else float(d)


def parse_real_list(text: str) -> list[int | float]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty list")
    return [parse_real(t) for t in items]


def _prime_power(q: int) -> int:
    PrimePower.from_int(q)
    return q


# ---------------------------------------------------------------- commands


def _fmt_factorization(n: int) -> str:
    if n == 1:
        return "1"
    return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in factorize(n))


def cmd_factor(args) -> list[dict]:
    n = args.n
    if n < 1:
        raise InvalidInput("n must be at least 1")
    if n <= 2:
        decomposition, S = [], None
    else:
        decomposition = primary_decomposition(n).values
        S = least_primary_factor(n).value
    return [
        {
            "n": n,
            "factorization": _fmt_factorization(n),
            "decomposition": decomposition,
            "S": S,
            "note": "S undefined" if S is None else "",
        }
    ]


def _q_warning(q: int, x: float) -> bool:
    return x >= 3 and q > math.log(x) ** (1 / 3)


def cmd_count(args) -> list[dict]:
    q = _prime_power(args.q)
    if args.mode == "oracle" and q >= 3:
        try:
            residue_set_B(q)
        except CapacityError as exc:
            raise UnsupportedQ(f"oracle mode cannot build B_{q}: {exc}") from exc
    table = sieve_least_primary(math.floor(args.x)) if args.mode == "sieve" and args.x >= 3 else None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rec = count_record(q, args.x, table, args.mode)
    row = rec.to_dict()
    row["mode"] = args.mode
    row["q_exceeds_log_bound"] = _q_warning(q, args.x)
    return [row]


def _report(q: int, P: int):
    if q < 3:
        raise UnsupportedQ("C_q is defined for q >= 3")
    try:
        check_supported(q)
    except CapacityError as exc:
        raise UnsupportedQ(str(exc)) from exc
    return constant_report(q, P)


def cmd_constant(args) -> list[dict]:
    q = _prime_power(args.q)
    return [_report(q, args.prime_bound).to_dict()]


def cmd_compare(args) -> list[dict]:
    xs = sorted(set(args.x_list))
    if args.qmax < 2:
        raise InvalidInput("qmax must be at least 2")
    top = math.floor(max(xs))
    table = sieve_least_primary(top) if top >= 3 else None
    rows = []
    for q in prime_powers_up_to(args.qmax):
        q = q.value
        for x in xs:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                rec = count_record(q, x, table, "sieve")
            rows.append(
                {
                    "q": q,
                    "x": x,
                    "count_E": rec.count_E,
                    "main_term_E": rec.main_term_E,
                    "ratio_E": rec.ratio_E,
                    "q_exceeds_log_bound": _q_warning(q, x),
                }
            )
    return rows


def cmd_chars(args) -> list[dict]:
    G = character_group(args.modulus)
    rows = []
    for i, chi in enumerate(G.characters()):
        f, star = conductor_and_primitive(chi)
        tau = complex(1.0) if f == 1 else gauss_sum(star)
        L = None if chi.is_principal() else L1(chi)
        rows.append(
            {
                "index": i,
                "exponents": list(chi.exponents),
                "order": chi.order,
                "conductor": f,
                "parity": chi.parity(),
                "tau_re": tau.real,
                "tau_im": tau.imag,
                "L1_re": None if L is None else L.real,
                "L1_im": None if L is None else L.imag,
            }
        )
    return rows


# ---------------------------------------------------------------- rendering


def load_schema() -> dict:
    """The JSON schema every ``--format json`` output validates against."""
    text = resources.files("lpf").joinpath("schema/output.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def envelope(command: str, parameters: dict, results: list[dict]) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "results": results,
        "version": __version__,
        "conventions": [CONVENTION_FLAG],
    }


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(str(t) for t in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(env: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(env, indent=2, sort_keys=True) + "\n"
    rows = env["results"]
    cols = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r[c]) for c in cols])
        return buf.getvalue()
    cells = [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(cols)]
    lines = [f"# {env['command']} ({'; '.join(env['conventions'])})"]
    lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpf", description="Least primary factors of (Z/nZ)^x.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=FORMATS, default="text")
        p.set_defaults(func=func)
        return p

    p = add("factor", cmd_factor, "factorization, primary decomposition and S(n)")
    p.add_argument("n", type=parse_int)

    p = add("count", cmd_count, "count A_q, A'_q and E_q up to x")
    p.add_argument("--q", type=parse_int, required=True)
    p.add_argument("--x", type=parse_real, required=True)
    p.add_argument("--mode", choices=MODES, default="sieve")

    p = add("constant", cmd_constant, "the constant C_q with its error interval")
    p.add_argument("--q", type=parse_int, required=True)
    p.add_argument("--prime-bound", type=parse_int, default=DEFAULT_PRIME_BOUND)

    p = add("compare", cmd_compare, "empirical E_q counts against the main term")
    p.add_argument("--qmax", type=parse_int, required=True)
    p.add_argument("--x-list", type=parse_real_list, required=True)

    p = add("chars", cmd_chars, "Dirichlet character table")
    p.add_argument("--modulus", type=parse_int, required=True)
    return ap


def _parameters(args) -> dict:
    skip = {"func", "command", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        results = args.func(args)
    except UnsupportedQ as exc:
        print(f"lpf: unsupported q: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapacityError as exc:
        print(f"lpf: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InvalidInput as exc:
        print(f"lpf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(envelope(args.command, _parameters(args), results), args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
