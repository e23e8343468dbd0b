"""Command-line surface: every operation bound to a reproducible run.

Output is machine-readable: JSON (default) or CSV with a ``# key=value``
config header.  Every run echoes its fully resolved configuration, including
the kernel backend, so a result can be reproduced from its own output.
Numeric output is deterministic for a fixed configuration and environment.

Exit codes: 0 success, 1 computational error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__
from ._backend import BACKEND, thread_count, parallel_map
from . import asymptotics, casimir, euler_maclaurin as em, smoothed, summation
from .cutoffs import parse_cutoff
from .errors import SummaError
from .exact import bernoulli, faulhaber
from .series import get_series

SERIES_GRAMMAR = "S0 | S1 | grandi | zero | monomial:s | alt-zeta:s | geometric:r"
CUTOFF_GRAMMAR = "bump | poly:p | indicator"


class UsageError(Exception):
    pass


def _fmt(value):
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return value


def _parse_grid(text: str):
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: expected comma-separated numbers") from exc


def _resolve_series(key: str):
    try:
        return get_series(key)
    except KeyError as exc:
        raise UsageError(f"unknown series key {key!r}; grammar: {SERIES_GRAMMAR}") from exc


def _resolve_cutoff(spec: str):
    try:
        return parse_cutoff(spec)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad cutoff {spec!r}; grammar: {CUTOFF_GRAMMAR}") from exc


def _outcome_payload(out: summation.SummationOutcome) -> dict:
    return {
        "method": out.method,
        "verdict": out.verdict,
        "value": _fmt(out.value) if out.value is not None else None,
        "error_estimate": out.error_estimate,
        "diagnostics": {k: _fmt(v) for k, v in out.diagnostics.items()
                        if isinstance(v, (int, float, str, Fraction))},
    }


# --- subcommand handlers: each returns (result_dict, csv_rows_or_None) --------
# csv rows: (header_tuple, [row_tuple, ...])


def _cmd_bernoulli(args):
    val = bernoulli(args.k)
    return {"k": args.k, "value": _fmt(val)}, (("k", "value"), [(args.k, _fmt(val))])


def _cmd_faulhaber(args):
    val = faulhaber(args.s, args.N)
    return ({"s": args.s, "N": args.N, "value": _fmt(val)},
            (("s", "N", "value"), [(args.s, args.N, _fmt(val))]))


def _cmd_sum(args):
    series = _resolve_series(args.series)
    if args.method == "cesaro":
        out = summation.cesaro_sum(series, args.n, tol=args.tol)
    elif args.method == "abel":
        out = summation.abel_sum(series)
    elif args.method == "ramanujan":
        out = _ramanujan_outcome(args.series)
    elif args.method == "zeta-eta":
        if not args.series.startswith("alt-zeta:"):
            raise UsageError("--method zeta-eta needs --series alt-zeta:s")
        out = summation.zeta_via_eta(int(args.series.split(":", 1)[1]))
    else:  # pragma: no cover - argparse choices guard this
        raise UsageError(f"unknown method {args.method}")
    payload = _outcome_payload(out)
    payload["series"] = series.label
    return payload, ((("series", "method", "verdict", "value", "error_estimate"),
                      [(series.label, out.method, out.verdict,
                        _fmt(out.value) if out.value is not None else "",
                        out.error_estimate if out.error_estimate is not None else "")]))


def _ramanujan_outcome(key: str) -> summation.SummationOutcome:
    """Exact zeta-regularized values for the catalog keys that have one."""
    if key == "S0":
        val = summation.ramanujan_monomial(0)
    elif key == "S1":
        val = summation.ramanujan_monomial(1)
    elif key.startswith("monomial:"):
        val = summation.ramanujan_monomial(int(key.split(":", 1)[1]))
    elif key == "grandi":
        val = Fraction(1, 2)
    elif key.startswith("alt-zeta:"):
        s = int(key.split(":", 1)[1])
        if s > 0:
            raise UsageError("exact zeta-regularized value wired only for alt-zeta:s with s <= 0")
        val = (1 - Fraction(2) ** (1 - s)) * (-bernoulli(1 - s) / (1 - s))
    else:
        raise UsageError(f"no zeta-regularized closed form for series {key!r}")
    return summation.SummationOutcome("ramanujan", "finite", val, 0.0, {})


def _cmd_ledger(args):
    report = summation.inconsistency_ledger()
    rows = [(r.identity,
             _fmt(r.rule_a) if r.rule_a is not None else "",
             _fmt(r.rule_b) if r.rule_b is not None else "",
             r.clash) for r in report.rows]
    result = {"rows": [{"identity": r.identity,
                        "rule_a": _fmt(r.rule_a) if r.rule_a is not None else None,
                        "rule_b": _fmt(r.rule_b) if r.rule_b is not None else None,
                        "clash": r.clash} for r in report.rows],
              "clash_count": len(report.clashes)}
    return result, (("identity", "rule_a", "rule_b", "clash"), rows)


def _cmd_smoothed(args):
    cutoff = _resolve_cutoff(args.cutoff)
    val = smoothed.smoothed_sum(args.s, cutoff, args.N)
    return ({"s": args.s, "cutoff": cutoff.label, "N": args.N, "value": val},
            (("s", "cutoff", "N", "value"), [(args.s, cutoff.label, args.N, val)]))


def _cmd_extract(args):
    cutoff = _resolve_cutoff(args.cutoff)
    grid = _parse_grid(args.grid)
    fit = smoothed.constant_extraction(args.s, cutoff, grid)
    result = fit.to_json_dict()
    result["error_estimate"] = fit.error_estimate
    rows = [(N, r) for N, r in zip(fit.grid[:-1], fit.residuals)]
    return result, (("N", "residual"), rows)


def _cmd_grandi(args):
    cutoff = _resolve_cutoff(args.cutoff)
    val = smoothed.grandi_smoothed(cutoff, args.N)
    return ({"cutoff": cutoff.label, "N": args.N, "value": val,
             "deviation_from_half": abs(val - 0.5)},
            (("cutoff", "N", "value"), [(cutoff.label, args.N, val)]))


def _cmd_scaling_demo(args):
    cutoff = _resolve_cutoff(args.cutoff)
    lhs, rhs, differ = smoothed.scaling_counterexample(cutoff, args.N)
    return ({"cutoff": cutoff.label, "N": args.N, "lhs": lhs, "rhs": rhs, "differ": differ},
            (("cutoff", "N", "lhs", "rhs", "differ"),
             [(cutoff.label, args.N, lhs, rhs, differ)]))


_TESTFNS = {"centered": smoothed.centered_bump, "offset": smoothed.offset_bump}


def _cmd_delta_seq(args):
    if args.testfn not in _TESTFNS:
        raise UsageError(f"unknown test function {args.testfn!r}; choose centered | offset")
    phi = _TESTFNS[args.testfn]()
    val = smoothed.delta_pairing(args.j, phi, tol=args.tol)
    at_zero = float(phi(0.0))
    return ({"j": args.j, "testfn": args.testfn, "value": val,
             "phi_at_zero": at_zero, "pairing_error": abs(val - at_zero)},
            (("j", "testfn", "value", "phi_at_zero"),
             [(args.j, args.testfn, val, at_zero)]))


def _cmd_em_tail(args):
    cutoff = _resolve_cutoff(args.cutoff)
    spec = em.monomial_cutoff_spec(args.s, cutoff, float(args.N))
    res = em.em_tail(spec, args.N, args.s, tol=args.tol)
    return ({"s": args.s, "cutoff": cutoff.label, "N": args.N,
             "lhs": res.lhs, "series": res.series, "residual": res.residual},
            (("s", "cutoff", "N", "lhs", "series", "residual"),
             [(args.s, cutoff.label, args.N, res.lhs, res.series, res.residual)]))


def _cmd_stirling(args):
    ns = range(2, args.n + 1) if args.table else [args.n]
    rows = []
    for n in ns:
        g = em.stirling_g(n)
        val, bound = em.stirling_series(n, args.terms)
        rows.append((n, g, val, bound))
    result = {"terms": args.terms,
              "rows": [{"n": n, "g": g, "value": v, "bound": b} for n, g, v, b in rows]}
    return result, (("n", "g", "value", "bound"), rows)


def _cmd_em_diverge(args):
    scan = em.em_divergence_demo(args.n, args.max_terms)
    rows = [(m + 1, _fmt(t), float(abs(t))) for m, t in enumerate(scan.terms)]
    return ({"n": args.n, "m_star": scan.m_star,
             "terms": [_fmt(t) for t in scan.terms]},
            (("m", "term", "magnitude"), rows))


def _make_casimir_config(args) -> casimir.CasimirConfig:
    return casimir.CasimirConfig(
        d=args.d, lam=getattr(args, "lam"), N=args.N,
        cutoff=_resolve_cutoff(args.cutoff), quad_tol=args.quad_tol,
    )


def _cmd_casimir(args):
    cfg = _make_casimir_config(args)
    enforce = cfg.cutoff.kind != "indicator"
    grid = [cfg.N / 2**k for k in range(args.levels - 1, -1, -1)]
    grid = [N for N in grid if N >= 10]

    def point(N):
        from dataclasses import replace

        r = casimir.u_t_dimensionless(replace(cfg, N=N), enforce_smoothness=enforce)
        return (N, r.value, r.error_estimate)

    rows = parallel_map(point, grid)
    value = rows[-1][1]
    energy = (math.pi**2 * cfg.hbar * cfg.c / (2.0 * cfg.d**3)) * value
    closed = casimir.closed_form_energy_density(cfg.d, cfg.hbar, cfg.c)
    result = {
        "limit": energy,
        "closed_form": closed,
        "relative_error": abs(energy - closed) / abs(closed),
        "u_t": value,
        "u_t_error_estimate": rows[-1][2],
    }
    return result, (("N", "value", "error_estimate"), rows)


def _cmd_casimir_force(args):
    cfg = _make_casimir_config(args)
    force = casimir.casimir_force(args.d, cfg)
    closed = casimir.closed_form_force(args.d, cfg.hbar, cfg.c)
    result = {"force": force, "closed_form": closed,
              "relative_error": abs(force - closed) / abs(closed)}
    return result, (("d", "force", "closed_form"), [(args.d, force, closed)])


def _cmd_truncate(args):
    try:
        alpha = Fraction(args.alpha)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --alpha {args.alpha!r}: expected a rational like 1/137 or 0.5") from exc
    n_star = asymptotics.optimal_truncation(alpha)
    rows = []
    for n in range(1, n_star + 6):
        log10_term = (math.lgamma(n + 1) + n * math.log(float(alpha))) / math.log(10.0)
        rows.append((n, log10_term))
    return ({"alpha": _fmt(alpha), "n_star": n_star}, (("N", "log10_term"), rows))


_BOREL_ORACLES = {
    "ones": lambda: asymptotics.CoefficientOracle(a=lambda n: 1.0, label="ones", exp_rate=1.0),
    "euler": lambda: asymptotics.CoefficientOracle(
        a=lambda n: (-1.0) ** n * float(__import__("math").factorial(n)),
        label="euler", exp_rate=0.0, borel_transform=lambda z: 1.0 / (1.0 + z)),
    "zero": lambda: asymptotics.CoefficientOracle(a=lambda n: 0.0, label="zero"),
}


def _cmd_borel(args):
    key = args.coeffs
    if key.startswith("geometric:"):
        r = float(Fraction(key.split(":", 1)[1]))
        oracle = asymptotics.CoefficientOracle(
            a=lambda n, r=r: r**n, label=key, exp_rate=abs(r))
    elif key in _BOREL_ORACLES:
        oracle = _BOREL_ORACLES[key]()
    else:
        raise UsageError(
            f"unknown coefficient oracle {key!r}; grammar: ones | euler | zero | geometric:r")
    val = asymptotics.borel_sum(oracle, args.x, args.tol)
    return ({"coeffs": key, "x": args.x, "tol": args.tol, "value": val},
            (("coeffs", "x", "value"), [(key, args.x, val)]))


def _cmd_gyro(args):
    val = asymptotics.gyro_partial(args.alpha, args.order)
    return ({"alpha": args.alpha, "order": args.order, "value": val},
            (("alpha", "order", "value"), [(args.alpha, args.order, val)]))


def _cmd_flat_check(args):
    grid = _parse_grid(args.grid)
    probes = asymptotics.flat_derivative_probe(args.beta, args.n, grid)
    rows = list(zip(grid, probes))
    return ({"beta": args.beta, "n": args.n, "probes": probes, "grid": grid},
            (("z", "probe"), rows))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="summa",
        description="Summability methods for divergent series, smoothed sums, "
                    "and the parallel-plate Casimir energy.",
    )
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--output", default=None, help="write to file instead of stdout")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("bernoulli", help="exact Bernoulli number B_k")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=_cmd_bernoulli)

    p = sub.add_parser("faulhaber", help="exact power sum 1^s + ... + N^s")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(handler=_cmd_faulhaber)

    p = sub.add_parser("sum", help="summability methods on a catalog series")
    p.add_argument("--method", choices=("cesaro", "abel", "ramanujan", "zeta-eta"),
                   required=True)
    p.add_argument("--series", required=True, help=SERIES_GRAMMAR)
    p.add_argument("--n", type=int, default=10000, help="Cesaro window")
    p.add_argument("--tol", type=float, default=1e-3)
    p.set_defaults(handler=_cmd_sum)

    p = sub.add_parser("ledger", help="two-rule-set divergent series catalog")
    p.set_defaults(handler=_cmd_ledger)

    p = sub.add_parser("smoothed", help="smoothed monomial sum")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--cutoff", default="bump", help=CUTOFF_GRAMMAR)
    p.add_argument("--N", type=float, required=True)
    p.set_defaults(handler=_cmd_smoothed)

    p = sub.add_parser("extract", help="constant extraction over an N grid")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--cutoff", default="bump")
    p.add_argument("--grid", default="100,200,400,800,1600")
    p.set_defaults(handler=_cmd_extract)

    p = sub.add_parser("grandi", help="smoothed Grandi sum")
    p.add_argument("--cutoff", default="bump")
    p.add_argument("--N", type=float, default=1e4)
    p.set_defaults(handler=_cmd_grandi)

    p = sub.add_parser("scaling-demo", help="smoothed sums are not scale invariant")
    p.add_argument("--cutoff", default="bump")
    p.add_argument("--N", type=float, default=100.0)
    p.set_defaults(handler=_cmd_scaling_demo)

    p = sub.add_parser("delta-seq", help="Dirichlet kernel pairing")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--testfn", default="centered", help="centered | offset")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(handler=_cmd_delta_seq)

    p = sub.add_parser("em-tail", help="Euler-Maclaurin tail identity")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--cutoff", default="bump")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(handler=_cmd_em_tail)

    p = sub.add_parser("stirling", help="Stirling series vs the exact gap")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--terms", type=int, default=2)
    p.add_argument("--table", action="store_true", help="rows for all 2..n")
    p.set_defaults(handler=_cmd_stirling)

    p = sub.add_parser("em-diverge", help="divergence onset of the Stirling series")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-terms", type=int, default=60)
    p.set_defaults(handler=_cmd_em_diverge)

    for name in ("casimir", "casimir-force"):
        p = sub.add_parser(name, help="smoothed plate energy" if name == "casimir"
                           else "plate force by numerical differentiation")
        p.add_argument("--d", type=float, default=1e-6, help="plate separation (m)")
        p.add_argument("--N", type=float, default=400.0)
        p.add_argument("--cutoff", default="bump")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--quad-tol", type=float, default=1e-9)
        if name == "casimir":
            p.add_argument("--levels", type=int, default=4,
                           help="N-halving rows in the convergence table")
            p.set_defaults(handler=_cmd_casimir)
        else:
            p.set_defaults(handler=_cmd_casimir_force)

    p = sub.add_parser("truncate", help="optimal truncation scan of N! alpha^N")
    p.add_argument("--alpha", required=True, help="rational in (0,1), e.g. 1/137")
    p.set_defaults(handler=_cmd_truncate)

    p = sub.add_parser("borel", help="Borel summation")
    p.add_argument("--coeffs", required=True, help="ones | euler | zero | geometric:r")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_borel)

    p = sub.add_parser("gyro", help="gyromagnetic anomaly partial sums")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--order", type=int, choices=(1, 2), required=True)
    p.set_defaults(handler=_cmd_gyro)

    p = sub.add_parser("flat-check", help="right derivatives of exp(-z^-beta) at 0")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--grid", default="1e-2,1e-3,1e-4,1e-5,1e-6")
    p.set_defaults(handler=_cmd_flat_check)

    return ap


def _config_echo(args) -> dict:
    skip = {"handler", "format", "output"}
    cfg = {k: _fmt(v) for k, v in sorted(vars(args).items())
           if k not in skip and v is not None and not callable(v)}
    cfg["backend"] = BACKEND
    cfg["threads"] = thread_count()
    cfg["version"] = __version__
    return cfg


def _emit(args, result, csv_block) -> str:
    config = _config_echo(args)
    if args.format == "json":
        return json.dumps({"config": config, "result": result},
                          sort_keys=True, allow_nan=False)
    header, rows = csv_block
    lines = [f"# {k}={v}" for k, v in sorted(config.items())]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines)


def run(argv) -> int:
    """Parse argv, run the subcommand, write output; returns the exit code."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, csv_block = args.handler(args)
        text = _emit(args, result, csv_block)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SummaError, ValueError, KeyError, ZeroDivisionError, OverflowError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
