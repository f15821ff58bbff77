"""Command-line interface: ``sharpmax {constant,dichotomy,transfer,verify-suite}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import mpmath

from . import constants as C
from .core import (
    INF,
    CyclicSignal,
    ExponentTuple,
    HighPrec,
    Signal,
    as_fraction,
    parse_exponent,
    signal_from_json,
    signal_to_json,
)
from .errors import BudgetExceeded, SharpMaxError
from .operators import Cyclic, FunctionalSpec, PolynomialFamily
from .suites import SUITES, run_suites
from .transference import build_transfer, corrupt_build, transfer_bound_demo, verify_inner_identity

log = logging.getLogger("sharpmax")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- value encoding ---------------------------------------------------------------


def encode(x):
    """JSON form: ``{num, den}`` for rationals, ``{highprec, bits}`` otherwise."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, HighPrec):
        with mpmath.workprec(x.bits):
            digits = int(x.bits * 0.30103) + 2  # enough to round-trip
            return {"highprec": mpmath.nstr(x.value, digits, strip_zeros=False), "bits": x.bits}
    if isinstance(x, float) and x == INF:
        return "inf"
    if isinstance(x, C.QuadraticSurd):
        return {"surd": [x.a, x.b, x.c, x.d], "text": str(x)}
    if isinstance(x, (Signal, CyclicSignal)):
        return signal_to_json(x)
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def decode(doc):
    """Inverse of :func:`encode` for numeric leaves."""
    if isinstance(doc, dict):
        if set(doc) == {"num", "den"}:
            return Fraction(doc["num"], doc["den"])
        if set(doc) == {"highprec", "bits"}:
            with mpmath.workprec(doc["bits"]):
                return HighPrec(mpmath.mpf(doc["highprec"]), doc["bits"])
        return {k: decode(v) for k, v in doc.items()}
    if isinstance(doc, list):
        return [decode(v) for v in doc]
    if doc == "inf":
        return INF
    return doc


def _text(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, HighPrec):
        with mpmath.workprec(x.bits):
            return mpmath.nstr(x.value, 20)
    if x == INF:
        return "inf"
    return str(x)


# -- run configuration --------------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    op: Optional[str] = None
    kind: str = "weak"
    system: str = "cyclic"
    L: Optional[int] = None
    L_min: int = 1
    K: tuple = (3, 4, 5)
    N_max: Optional[int] = None
    p: object = Fraction(1)
    tol: Fraction = Fraction(1, 10 ** 30)
    seed: int = 0
    budget: Optional[int] = None
    fmt: str = "json"
    out: Optional[str] = None
    timing: bool = False

    def validate(self):
        for name in ("L", "N_max", "budget"):
            v = getattr(self, name)
            if v is not None and v <= 0 and not (name == "N_max" and v == 0):
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if any(k < 3 for k in self.K):
            raise UsageError("--K values must be at least 3")


def _rational_arg(text):
    try:
        return as_fraction(text)
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"expected NUM or NUM/DEN, got {text!r}") from exc


def _exponent_arg(text):
    try:
        return parse_exponent(text)
    except Exception as exc:
        raise argparse.ArgumentTypeError(f"expected NUM/DEN or inf, got {text!r}") from exc


def _k_list(text):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# -- output -------------------------------------------------------------------------


def _flatten(prefix, value, out):
    if isinstance(value, dict) and not (set(value) <= {"num", "den", "highprec", "bits"}):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, dict):
        out[prefix] = f"{value['num']}/{value['den']}" if "num" in value else value["highprec"]
    elif isinstance(value, list):
        out[prefix] = json.dumps(value, sort_keys=True)
    else:
        out[prefix] = value


def emit(report: dict, cfg: RunConfig, stream=None):
    """Write the report as JSON, or as CSV rows with witnesses in a side-car file."""
    doc = encode(report)
    if cfg.fmt == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        rows = doc.get("rows", [doc])
        witnesses = []
        flat_rows = []
        for i, row in enumerate(rows):
            row = dict(row)
            if "witness" in row:
                witnesses.append({"row": i, "witness": row.pop("witness")})
            flat = {}
            _flatten("", row, flat)
            flat_rows.append(flat)
        fields = sorted({k for r in flat_rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in flat_rows:
            w.writerow(r)
        text = buf.getvalue()
        if cfg.out and witnesses:
            side = Path(cfg.out).with_suffix(".witnesses.json")
            side.write_text(json.dumps(witnesses, indent=2, sort_keys=True) + "\n")
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        (stream or sys.stdout).write(text)


# -- commands -------------------------------------------------------------------------


def _reference_entry(op, p, kind):
    ref = C.reference_value(op, p, kind)
    if ref is None:
        return None
    return {"value": ref.value, "source": ref.source}


def _no_method(op, kind, system, p):
    known = {
        ("weak", "p=1"): "exact on Z_L by exhaustive LP search; on Z, reference values 1, (11+sqrt(61))/12, 2",
        ("strong", "p=inf"): "equal to 1 everywhere",
        ("strong", "1<p<inf"): "certified lower bounds by search; on Z the uncentered constant is c_p, the others are open",
    }
    lines = "; ".join(f"{k[0]} {k[1]}: {v}" for k, v in known.items())
    raise UsageError(f"no method for op={op} kind={kind} system={system} p={_text(p)}. Available: {lines}")


def cmd_constant(cfg: RunConfig) -> tuple:
    t0 = time.perf_counter()
    p = cfg.p
    report = {"constant": None, "operator": cfg.op, "p": p, "kind": cfg.kind, "system": cfg.system}
    status = EXIT_OK
    if cfg.op == "cp":
        if p == INF or p <= 1:
            raise UsageError("c_p needs 1 < p < inf")
        root = C.cp_root(p, cfg.tol)
        report.update(
            constant="c_p",
            kind="root",
            system="Z",
            value=root.exact if root.exact is not None else root.value,
            certificate={
                "lo": root.lo,
                "hi": root.hi,
                "phi_lo": root.phi_lo,
                "phi_hi": root.phi_hi,
                "exact_root": root.exact,
                "certified": root.certified,
                "iterations": root.iterations,
            },
        )
        status = EXIT_OK if root.certified else EXIT_FAIL
    elif cfg.op not in C.OPERATORS:
        raise UsageError("--op must be one of os, c, u, cp")
    elif cfg.kind == "weak":
        if p != 1:
            _no_method(cfg.op, cfg.kind, cfg.system, p)
        report["constant"] = f"C^{cfg.op}({cfg.system},1)"
        report["reference_Z"] = _reference_entry(cfg.op, 1, "weak")
        if cfg.system == "cyclic":
            if cfg.L is None:
                raise UsageError("--L is required for cyclic systems")
            kw = {"budget": cfg.budget} if cfg.budget else {}
            if cfg.op == "u":
                value = C.uncentered_weak_constant_cyclic(cfg.L)
                f, lam = C.uncentered_extremizer(cfg.L)
                replay = C.weak_ratio(f, lam, "u")
                report.update(value=value, witness=f, level=lam, method="closed form; extremizer replayed")
                ok = replay.value == value
                if cfg.L <= 6:
                    search = C.weak_constant_cyclic(cfg.L, "u", **kw)
                    report["search_value"] = search.value
                    ok = ok and search.value == value
                status = EXIT_OK if ok else EXIT_FAIL
            else:
                res = C.weak_constant_cyclic(cfg.L, cfg.op, cfg.N_max, **kw)
                ok = res.solution.verify(res.problem) and res.replay().value == res.value
                report.update(
                    value=Fraction(res.value),
                    witness=res.witness(),
                    level=Fraction(1),
                    level_set=list(res.E),
                    windows=[list(w) for w in res.windows],
                    lp_duals=list(res.solution.duals),
                    lp_count=res.lp_count,
                    N_max=res.n_max,
                    method="exhaustive LP search",
                )
                if cfg.op == "c":
                    report["below_Z_reference"] = C.MELAS.compare(res.value) < 0
                    ok = ok and report["below_Z_reference"]
                status = EXIT_OK if ok else EXIT_FAIL
        elif cfg.system == "Z":
            M = cfg.N_max if cfg.N_max is not None else 50
            ref = C.reference_value(cfg.op, 1, "weak")
            lam = Fraction(1, M + 1) if cfg.op != "c" else Fraction(1, 2 * M + 1)
            rep = C.weak_ratio(Signal.delta(0), lam, cfg.op)
            report.update(
                value=ref.value,
                witness=Signal.delta(0),
                level=lam,
                witness_ratio=rep.value,
                method=f"reference value ({ref.source}); delta witness at lam = {lam}",
            )
            ok = C.MELAS.compare(rep.value) <= 0 if cfg.op == "c" else rep.value <= ref.value
            status = EXIT_OK if ok else EXIT_FAIL
        else:
            raise UsageError("--system must be Z or cyclic")
    elif cfg.kind == "strong":
        if p != INF and p <= 1:
            _no_method(cfg.op, cfg.kind, cfg.system, p)
        sysarg = "Z" if cfg.system == "Z" else cfg.L
        if sysarg is None:
            raise UsageError("--L is required for cyclic systems")
        conf = C.SearchConfig(seed=cfg.seed)
        rep = C.strong_ratio_search(sysarg, cfg.op, p, conf)
        report.update(
            constant=f"C^{cfg.op}({cfg.system},{_text(p)})",
            value=rep.value,
            value_power=rep.exact_power,
            lower_bound=p != INF,
            witness=rep.witness,
            search_config=conf.to_json(),
            method="equal to 1" if p == INF else "certified lower bound by search",
        )
        if p != INF:
            report["note"] = "lower bound only; the sharp value is known on Z only for the uncentered operator (c_p)"
        ref = _reference_entry(cfg.op, p, "strong")
        if ref is not None:
            report["reference_Z"] = ref
            below = not rep.value > ref["value"]
            report["consistent_with_reference"] = below
            status = EXIT_OK if below else EXIT_FAIL
    else:
        raise UsageError("--kind must be weak or strong")
    if cfg.timing:
        report["wall_time_ms"] = round((time.perf_counter() - t0) * 1000)
    return report, status


def cmd_dichotomy(cfg: RunConfig) -> tuple:
    t0 = time.perf_counter()
    L_max = cfg.L or 4
    kw = {"budget": cfg.budget} if cfg.budget else {}
    rows = []
    ok = True
    for L in range(cfg.L_min, L_max + 1):
        cen = C.centered_weak_constant_cyclic(L, cfg.N_max, **kw)
        unc = C.uncentered_weak_constant_cyclic(L)
        os_ = C.weak_constant_cyclic(L, "os", **kw).value
        inf_vals = {op: C.strong_ratio(CyclicSignal.indicator(L, [0]), op, INF).value for op in C.OPERATORS}
        row = {
            "L": L,
            "C_c": cen.value,
            "C_c_Z": C.MELAS,
            "C_c_strict": C.MELAS.compare(cen.value) < 0,
            "C_c_certificate": cen.solution.verify(cen.problem),
            "C_u": unc,
            "C_u_Z": Fraction(2),
            "C_u_strict": unc < 2,
            "C_os": os_,
            "C_os_equal": os_ == 1,
            "C_inf": inf_vals,
            "C_inf_equal": all(v == 1 for v in inf_vals.values()),
        }
        if L <= 6:
            row["C_u_search"] = C.weak_constant_cyclic(L, "u", **kw).value
            row["C_u_closed_form_match"] = row["C_u_search"] == unc
            ok = ok and row["C_u_closed_form_match"]
        ok = ok and all(row[k] for k in ("C_c_strict", "C_c_certificate", "C_u_strict", "C_os_equal", "C_inf_equal"))
        rows.append(row)
    report = {"table": "dichotomy", "p": 1, "rows": rows, "all_verdicts": ok}
    if cfg.timing:
        report["wall_time_ms"] = round((time.perf_counter() - t0) * 1000)
    return report, EXIT_OK if ok else EXIT_FAIL


def _load_family(path, power):
    if path:
        return PolynomialFamily.from_json(json.loads(Path(path).read_text()))
    return PolynomialFamily.power(power)


def cmd_transfer(cfg: RunConfig, args) -> tuple:
    L = cfg.L or 2
    P = _load_family(args.poly_file, args.poly_power)
    if args.signal:
        f = signal_from_json(json.loads(Path(args.signal).read_text()))
        if not isinstance(f, CyclicSignal) or f.L != L:
            raise UsageError(f"--signal must hold a cyclic signal on Z_{L}")
        fs = [f] * P.m
    else:
        fs = [CyclicSignal.indicator(L, [0])] * P.m
    O = FunctionalSpec.max(1) if args.functional == "max" else FunctionalSpec.variation(args.r, 1)
    p = cfg.p
    expo = ExponentTuple(p if p == INF else p / P.m, (p,) * P.m)
    system = Cyclic(L, steps=None if P.d == 1 else (1,) * P.d)
    budget = cfg.budget or 2_000_000
    ledger = []
    ok = True
    for K in cfg.K:
        build = build_transfer(system, P, fs, K, expo, budget)
        if args.corrupt:
            build = corrupt_build(build)
        res = verify_inner_identity(build, O.with_K(K))
        ledger.append(
            {
                "K": K,
                "R_K": build.R,
                "inner_checked": res.checked,
                "identity_holds": res.holds,
                "mismatches": res.mismatches[:20],
                "mismatch_count": len(res.mismatches),
                "norm_scaling": [{"j": s.j, "lhs": s.lhs, "rhs": s.rhs, "holds": s.holds} for s in build.scaling]
                if all(isinstance(s.lhs, (Fraction, int)) for s in build.scaling)
                else [{"j": s.j, "holds": s.holds} for s in build.scaling],
            }
        )
        ok = ok and res.holds and build.scaling_ok
    demo = transfer_bound_demo(system, P, fs, O, expo, cfg.K, budget=budget) if not args.corrupt else None
    if demo is not None:
        for entry, row in zip(ledger, demo["rows"]):
            entry["scaling_factor"] = row["scaling_factor"]
            entry["containment"] = row["containment"]
            for kind in ("strong", "weak"):
                entry[kind] = row[kind]
        ok = ok and demo["holds"]
    report = {
        "command": "transfer",
        "L": L,
        "family": P.to_json(),
        "functional": {"kind": O.kind, "r": O.r},
        "p": p,
        "rows": ledger,
        "scaling_factors": [e.get("scaling_factor") for e in ledger],
        "corrupted": bool(args.corrupt),
        "all_hold": ok,
    }
    return report, EXIT_OK if ok else EXIT_FAIL


def cmd_verify_suite(cfg: RunConfig, args) -> tuple:
    if args.list:
        return {"suites": [{"suite": k, "checks": v[1]} for k, v in SUITES.items()]}, EXIT_OK
    trials = cfg.budget or 100
    names = args.suite or None
    if names:
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise UsageError(f"unknown suites: {', '.join(unknown)}")
    results = run_suites(cfg.seed, trials, names)
    ok = all(r["ok"] for r in results)
    return {"seed": cfg.seed, "trials": trials, "rows": results, "all_pass": ok}, EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------------------


def _common(sp):
    sp.add_argument("--L", type=int, help="cycle length (largest L for dichotomy)")
    sp.add_argument("--K", type=_k_list, default=(3, 4, 5), help="comma-separated K schedule")
    sp.add_argument("--N-max", dest="N_max", type=int, help="window cap on Z_L; delta family size on Z")
    sp.add_argument("--p", type=_exponent_arg, default=Fraction(1), help="NUM/DEN or inf")
    sp.add_argument("--tol", type=_rational_arg, default=Fraction(1, 10 ** 30), help="bracket width for c_p")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, help="LP budget for searches; trial count for verify-suite")
    sp.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.add_argument("--timing", action="store_true", help="include wall_time_ms (reports are then not byte-stable)")
    sp.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpmax", description="Sharp constants for discrete maximal operators.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constant", help="compute or bound a sharp constant")
    sp.add_argument("--op", choices=("os", "c", "u", "cp"), required=True)
    sp.add_argument("--kind", choices=("weak", "strong"), default="weak")
    sp.add_argument("--system", choices=("Z", "cyclic"), default="cyclic")
    _common(sp)

    sp = sub.add_parser("dichotomy", help="tabulate cyclic weak constants against the Z references")
    sp.add_argument("--L-min", dest="L_min", type=int, default=1)
    _common(sp)

    sp = sub.add_parser("transfer", help="run the transference identities and inequalities")
    sp.add_argument("--poly-power", type=int, default=1, help="use P(n) = n^e")
    sp.add_argument("--poly-file", help="PolynomialFamily JSON document")
    sp.add_argument("--signal", help="CyclicSignal JSON document")
    sp.add_argument("--functional", choices=("max", "variation"), default="max")
    sp.add_argument("--r", type=_rational_arg, default=Fraction(2))
    sp.add_argument("--corrupt", action="store_true", help="perturb the build (self-test; must fail)")
    _common(sp)

    sp = sub.add_parser("verify-suite", help="run the randomized invariant suites")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--suite", action="append")
    _common(sp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = RunConfig(
        command=args.command,
        op=getattr(args, "op", None),
        kind=getattr(args, "kind", "weak"),
        system=getattr(args, "system", "cyclic"),
        L=args.L,
        L_min=getattr(args, "L_min", 1),
        K=args.K,
        N_max=args.N_max,
        p=args.p,
        tol=args.tol,
        seed=args.seed,
        budget=args.budget,
        fmt=args.fmt,
        out=args.out,
        timing=args.timing,
    )
    try:
        cfg.validate()
        if cfg.command == "constant":
            report, status = cmd_constant(cfg)
        elif cfg.command == "dichotomy":
            report, status = cmd_dichotomy(cfg)
        elif cfg.command == "transfer":
            report, status = cmd_transfer(cfg, args)
        else:
            report, status = cmd_verify_suite(cfg, args)
    except UsageError as exc:
        print(f"sharpmax: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"sharpmax: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SharpMaxError, ValueError) as exc:
        print(f"sharpmax: {exc}", file=sys.stderr)
        return EXIT_USAGE
    emit(report, cfg)
    if status != EXIT_OK:
        log.warning("verification failed")
    return status


if __name__ == "__main__":
    sys.exit(main())
