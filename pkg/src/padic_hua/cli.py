"""Command-line front end.

Subcommands: ``law`` evaluates any implemented mass or bracket, ``sample``
emits JSON-lines draws, ``sing`` prints the singular numbers of a matrix
file, ``verify`` runs named experiment suites and writes JSON reports plus
CSV tables.

Exit codes are a stable contract: 0 pass, 1 gate failure, 2 usage or
configuration error.  Exact rationals are always serialized as "num/den"
strings; decimals are display-only.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from decimal import Decimal
from fractions import Fraction

from .experiments import SUITE_NAMES, run_suite
from .laws import (
    HuaParams,
    kernel_p,
    m_n_direct,
    haar_orbit_mass,
    nu_bracket,
    nu_chain_bracket,
    nu_k1_below,
    pi_n,
    pi_s_bracket,
    rr_cdf,
    tilde_pi_n,
    vol_singular_law,
)
from .matrix import format_entry, hua_density, parse_matrix_text, singular_numbers
from .padic import DEFAULT_BUDGET, PrecisionExhausted
from .partitions import Partition
from .qseries import Bracket, pochhammer, pochhammer_inf
from .rng import RngStream
from .samplers import sample_ergodic_matrix, sample_hua_matrix, sample_nu

LAW_SCHEMA = "padic-hua/law/1"
SAMPLE_SCHEMA = "padic-hua/sample/1"

# Stream namespaces for the sample subcommand, per record kind.
_SAMPLE_NS = {"nu": 10, "hua": 11, "ergodic": 12}


class ConfigError(Exception):
    """Bad parameter values (exit code 2)."""


def parse_fraction(text: str) -> Fraction:
    """Exact fraction from 'num/den' or an integer string; decimals are
    refused so exactness survives the CLI boundary."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ConfigError(
            f"{text!r} is not an exact fraction; write it as num/den (e.g. 1/2)")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {text!r} as a fraction: {exc}") from None


def parse_eps(text: str) -> Fraction:
    """Tolerances may be decimal or scientific; converted exactly."""
    try:
        return Fraction(Decimal(text))
    except ArithmeticError as exc:
        raise ConfigError(f"cannot parse {text!r} as a tolerance: {exc}") from None


def parse_int_list(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.replace(",", " ").split())


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def law_value_json(value) -> dict:
    if isinstance(value, Bracket):
        return {"lower": frac_str(value.lower), "upper": frac_str(value.upper),
                "decimal_lower": repr(float(value.lower)),
                "decimal_upper": repr(float(value.upper))}
    value = Fraction(value)
    return {"exact": frac_str(value), "decimal": repr(float(value))}


def _hp(args) -> HuaParams:
    try:
        return HuaParams(args.p, parse_fraction(args.t))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def cmd_law(args) -> int:
    name = args.name
    params: dict = {}
    try:
        if name == "pochhammer":
            a, q = parse_fraction(args.a), parse_fraction(args.q)
            value = pochhammer(a, q, args.n)
            params = {"a": frac_str(a), "q": frac_str(q), "n": args.n}
        elif name == "pochhammer_inf":
            a, q = parse_fraction(args.a), parse_fraction(args.q)
            eps = parse_eps(args.eps)
            value = pochhammer_inf(a, q, eps)
            params = {"a": frac_str(a), "q": frac_str(q), "eps": args.eps}
        elif name == "kernel":
            hp = _hp(args)
            value = kernel_p(hp, args.x1, args.x2)
            params = {"p": hp.p, "t": frac_str(hp.t), "x1": args.x1, "x2": args.x2}
        elif name == "pi_s":
            hp = _hp(args)
            value = pi_s_bracket(hp, args.x, parse_eps(args.eps))
            params = {"p": hp.p, "t": frac_str(hp.t), "x": args.x, "eps": args.eps}
        elif name == "pi_N":
            hp = _hp(args)
            value = pi_n(hp, args.N, args.x)
            params = {"p": hp.p, "t": frac_str(hp.t), "N": args.N, "x": args.x}
        elif name == "tilde_pi_N":
            hp = _hp(args)
            value = tilde_pi_n(hp, args.N, args.x)
            params = {"p": hp.p, "t": frac_str(hp.t), "N": args.N, "x": args.x}
        elif name == "mN":
            hp = _hp(args)
            k = parse_int_list(args.k)
            value = m_n_direct(hp, k)
            params = {"p": hp.p, "t": frac_str(hp.t), "k": list(k)}
        elif name == "vol":
            k = parse_int_list(args.k)
            value = vol_singular_law(args.p, len(k), k)
            params = {"p": args.p, "k": list(k)}
        elif name == "haar_orbit":
            k = parse_int_list(args.k)
            value = haar_orbit_mass(args.p, len(k), k)
            params = {"p": args.p, "k": list(k)}
        elif name == "nu":
            hp = _hp(args)
            lam = Partition(parse_int_list(args.k))
            value = nu_bracket(hp, lam, parse_eps(args.eps))
            params = {"p": hp.p, "t": frac_str(hp.t), "k": list(lam.parts),
                      "eps": args.eps}
        elif name == "nu_chain":
            hp = _hp(args)
            lam = Partition(parse_int_list(args.k))
            value = nu_chain_bracket(hp, lam, parse_eps(args.eps))
            params = {"p": hp.p, "t": frac_str(hp.t), "k": list(lam.parts),
                      "eps": args.eps}
        elif name == "rr_cdf":
            value = rr_cdf(args.p, args.s, args.x, parse_eps(args.eps))
            params = {"p": args.p, "s": args.s, "x": args.x, "eps": args.eps}
        elif name == "nu_k1_below":
            hp = _hp(args)
            value = nu_k1_below(hp, args.x, parse_eps(args.eps))
            params = {"p": hp.p, "t": frac_str(hp.t), "x": args.x, "eps": args.eps}
        elif name == "hua_density":
            hp = _hp(args)
            k = parse_int_list(args.k)
            power, coeff = hua_density(hp.p, k, hp.t)
            doc = {"schema": LAW_SCHEMA, "law": name,
                   "params": {"p": hp.p, "t": frac_str(hp.t), "k": list(k)},
                   "p_power": power, "coefficient": frac_str(coeff),
                   "decimal": repr(float(coeff) * float(hp.p) ** power)}
            print(json.dumps(doc, sort_keys=True))
            return 0
        else:
            raise ConfigError(f"unknown law {name!r}")
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from None
    doc = {"schema": LAW_SCHEMA, "law": name, "params": params}
    doc.update(law_value_json(value))
    print(json.dumps(doc, sort_keys=True))
    return 0


def matrix_record(m) -> dict:
    return {"n": m.n, "digits": m.digits, "shift": m.shift,
            "matrix": [[format_entry(m.entry(i, j)) for j in range(m.n)]
                       for i in range(m.n)]}


def cmd_sample(args) -> int:
    hp = _hp(args)
    digits, guard = args.E, args.guard
    namespace = _SAMPLE_NS[args.kind]
    lam = Partition(parse_int_list(args.k)) if args.kind == "ergodic" else None
    out = sys.stdout
    for index in range(args.count):
        rng = RngStream(args.seed, (namespace, index))
        record = {"schema": SAMPLE_SCHEMA, "kind": args.kind,
                  "seed": args.seed, "index": index}
        try:
            if args.kind == "nu":
                record["k"] = list(sample_nu(hp, rng).parts)
            elif args.kind == "hua":
                m = sample_hua_matrix(hp, args.N, digits, rng, guard)
                record["k"] = list(singular_numbers(m).values)
                record.update(matrix_record(m))
            else:
                m = sample_ergodic_matrix(hp.p, lam, args.N, digits, rng, guard)
                record.update(matrix_record(m))
        except PrecisionExhausted as exc:
            record["error"] = str(exc)
        out.write(json.dumps(record, sort_keys=True) + "\n")
    return 0


def cmd_sing(args) -> int:
    try:
        text = open(args.file, "r", encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.file}: {exc}") from None
    try:
        m = parse_matrix_text(text, args.p, args.E, args.guard)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad matrix literal: {exc}") from None
    st = singular_numbers(m)
    doc = {"schema": "padic-hua/sing/1", "p": args.p, "n": m.n,
           "digits": m.digits, "shift": m.shift, "floor": st.floor,
           "k": [v if v is not None else f"<={st.floor}" for v in st.values]}
    print(json.dumps(doc, sort_keys=True))
    return 0


def _flatten(value) -> str:
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return str(value)


def write_report_files(reports, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    summary = []
    for i, report in enumerate(reports):
        stem = f"{i:02d}-{report.name}"
        with open(os.path.join(out_dir, stem + ".json"), "w",
                  encoding="utf-8") as fh:
            fh.write(report.to_json())
        if report.table:
            keys = sorted({key for row in report.table for key in row})
            with open(os.path.join(out_dir, stem + ".csv"), "w",
                      encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(keys)
                for row in report.table:
                    writer.writerow([_flatten(row.get(k, "")) for k in keys])
        summary.append({"file": stem + ".json", "name": report.name,
                        "passed": report.passed})
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump({"schema": "padic-hua/summary/1", "reports": summary,
                   "passed": all(r["passed"] for r in summary)},
                  fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    reports = run_suite(args.suite, args.seed, workers=args.workers,
                        scale=args.scale)
    write_report_files(reports, args.out_dir)
    failed = [r.name for r in reports if not r.passed]
    for report in reports:
        status = "pass" if report.passed else "FAIL"
        print(f"[{status}] {report.name} ({report.runtime_seconds:.1f}s)",
              file=sys.stderr)
    print(f"total {time.perf_counter() - t0:.1f}s; reports in {args.out_dir}",
          file=sys.stderr)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padic-hua",
        description="Exact laws, samplers and verification experiments for "
                    "singular numbers of random p-adic matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    law = sub.add_parser("law", help="evaluate a mass or certified bracket")
    law.add_argument("name")
    law.add_argument("--p", type=int, default=2)
    law.add_argument("--t", default="1", help="exact fraction num/den")
    law.add_argument("--N", type=int, default=1)
    law.add_argument("--x", type=int, default=0)
    law.add_argument("--x1", type=int, default=0)
    law.add_argument("--x2", type=int, default=0)
    law.add_argument("--s", type=int, default=0)
    law.add_argument("--n", type=int, default=0)
    law.add_argument("--a", default="1/2")
    law.add_argument("--q", default="1/2")
    law.add_argument("--k", default="", help="comma-separated integers")
    law.add_argument("--eps", default="1e-9")
    law.set_defaults(func=cmd_law)

    sample = sub.add_parser("sample", help="emit JSON-lines draws")
    sample.add_argument("kind", choices=sorted(_SAMPLE_NS))
    sample.add_argument("--p", type=int, default=2)
    sample.add_argument("--t", default="1")
    sample.add_argument("--N", type=int, default=2)
    sample.add_argument("--E", type=int, default=DEFAULT_BUDGET.digits)
    sample.add_argument("--guard", type=int, default=DEFAULT_BUDGET.guard)
    sample.add_argument("--k", default="", help="partition for ergodic draws")
    sample.add_argument("--count", type=int, default=1)
    sample.add_argument("--seed", type=int, required=True)
    sample.set_defaults(func=cmd_sample)

    sing = sub.add_parser("sing", help="singular numbers of a matrix file")
    sing.add_argument("file")
    sing.add_argument("--p", type=int, required=True)
    sing.add_argument("--E", type=int, default=DEFAULT_BUDGET.digits)
    sing.add_argument("--guard", type=int, default=0)
    sing.set_defaults(func=cmd_sing)

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITE_NAMES)
    verify.add_argument("--seed", type=int, required=True)
    verify.add_argument("--out-dir", default="reports")
    verify.add_argument("--workers", type=int,
                        default=int(os.environ.get("PADIC_HUA_WORKERS", "1")))
    verify.add_argument("--scale", type=float, default=1.0,
                        help="multiplier on Monte Carlo draw counts")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
