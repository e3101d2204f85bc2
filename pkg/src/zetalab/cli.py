"""Command-line front door: orchestration, caching, and report emission.

Subcommands: report-kappa, optimize-poly, verify-vaughan, verify-rearrangement,
verify-split, moments, zeros (find | ingest), monitor-sieve.  Flags beat the
optional key=value config file; reports are JSON or CSV; exit status is 0
only if every hard assertion passed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys


def _load_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        for key, value in _load_config(args.config).items():
            if getattr(args, key, None) is None:
                setattr(args, key, value)
    return args


def _emit(args, payload: dict | list, default_fmt: str = "json") -> None:
    fmt = (getattr(args, "format", None) or default_fmt).lower()
    if fmt == "json":
        text = json.dumps(payload, sort_keys=True, indent=2, default=repr) + "\n"
    elif fmt == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        cols = list(rows[0].keys())
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c])
                                  for c in cols))
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _poly_from_arg(poly: str | None, theta: float):
    from .mollifier import MollifierPolynomial, paper_quadratic

    if poly is None:
        return paper_quadratic(theta)
    coeffs = tuple(float(c) for c in poly.split(","))
    return MollifierPolynomial(coeffs)


# ---------------------------------------------------------------------------


def cmd_report_kappa(args) -> int:
    from . import mollifier as mo

    theta = float(args.theta if args.theta is not None else 0.5)
    degree = int(args.degree if args.degree is not None else 2)
    mult = float(args.multiplicity_constant if args.multiplicity_constant is not None
                 else mo.KAPPA_MULTIPLICITY_CONSTANT)
    poly, kappa_star = mo.optimize_P(theta, degree)
    kappa_d = mo.kappa_d_lower(kappa_star, mult)
    s1 = mo.s1_factor(poly, theta)
    s2 = mo.s2_factor(poly, theta)
    print(f"kappa_star = {kappa_star!r}")
    print(f"kappa_d = {kappa_d!r}")
    if args.output:
        _emit(args, {
            "check": "report-kappa",
            "parameters": {"theta": theta, "degree": degree,
                           "multiplicity_constant": mult},
            "polynomial": list(poly.coefficients),
            "s1_factor": s1, "s2_factor": s2,
            "kappa_star": kappa_star, "kappa_d": kappa_d,
        })
    return 0


def cmd_optimize_poly(args) -> int:
    from . import mollifier as mo

    theta = float(args.theta if args.theta is not None else 0.5)
    degree = int(args.degree if args.degree is not None else 2)
    poly, value = mo.optimize_P(theta, degree)
    _emit(args, {
        "check": "optimize-poly",
        "parameters": {"theta": theta, "degree": degree},
        "coefficients": list(poly.coefficients),
        "kappa_star": value,
    })
    return 0


def cmd_verify_vaughan(args) -> int:
    from . import vaughan as va

    r = int(args.r if args.r is not None else 3)
    X = float(args.X if args.X is not None else 10.0)
    N = int(args.N if args.N is not None else min(int(X**r), 10**5))
    report = va.verify_vaughan(va.VaughanConfig(r, X), N)
    _emit(args, {
        "check": report.check,
        "parameters": report.parameters,
        "worst_case": report.worst_index,
        "deviation": report.deviation,
        "pass": report.passed,
    })
    return 0 if report.passed else 1


def cmd_verify_rearrangement(args) -> int:
    from . import arith, characters as ch, mollifier as mo

    y = float(args.y if args.y is not None else 12.0)
    T = float(args.T if args.T is not None else 200.0)
    nus = [int(args.nu)] if args.nu is not None else [1, 2]
    spec = mo.MollifierSpec.with_y(T, y, _poly_from_arg(args.poly, 0.5) if args.poly else None)
    need = max(1, int(y * T / (2 * math.pi)))
    worst = 0.0
    results = []
    for nu in nus:
        if nu == 1:
            a = arith.compute_a1(need)
        else:
            a = arith.compute_a2(need, mo.b_table(spec, need))
        direct = ch.m_nu_direct(nu, spec, a)
        rearranged = ch.m_nu_rearranged(nu, spec, a)
        dev = abs(direct - rearranged) / max(1.0, abs(direct))
        worst = max(worst, dev)
        results.append({"nu": nu, "direct": repr(direct), "rearranged": repr(rearranged),
                        "relative_deviation": dev})
    passed = worst <= 1e-8
    _emit(args, {
        "check": "rearrangement-equivalence",
        "parameters": {"y": y, "T": T},
        "worst_case": results,
        "deviation": worst,
        "pass": passed,
    })
    return 0 if passed else 1


def cmd_verify_split(args) -> int:
    import numpy as np

    from . import mollifier as mo, vaughan as va

    d = int(args.d if args.d is not None else 12)
    m_limit = int(args.m_limit if args.m_limit is not None else 500)
    seed = int(args.seed if args.seed is not None else 0)
    spec = mo.MollifierSpec.with_y(1e4, 20.0)
    dec = va.decompose_a2(spec, va.VaughanConfig(3, 16.0), n_cap=1000)
    terms = list(dec.terms())
    rng = np.random.default_rng(seed)
    term = terms[int(rng.integers(len(terms)))]
    report = va.split_by_divisor(term, dec, d, m_limit)
    _emit(args, {
        "check": report.check,
        "parameters": report.parameters,
        "worst_case": report.worst_index,
        "deviation": report.deviation,
        "pass": report.passed,
    })
    return 0 if report.passed else 1


def cmd_moments(args) -> int:
    from . import cache, mollifier as mo, zeta as ze

    T = float(args.T if args.T is not None else 1000.0)
    theta = float(args.theta if args.theta is not None else 0.3)
    poly = _poly_from_arg(args.poly, theta)
    if args.y is not None:
        spec = mo.MollifierSpec.with_y(T, float(args.y), poly)
    else:
        spec = mo.MollifierSpec.from_T_theta(T, theta, poly)
    use_cache = not args.no_cache
    if args.zero_source and args.zero_source != "compute":
        zeros = ze.ingest_zeros(args.zero_source)
    else:
        zeros = cache.load_or_find_zeros(T, directory=_cache_dir(args), enabled=use_cache,
                                         threads=int(args.threads or 1))
    result = ze.compute_moments(T, spec, zeros)
    s1_scale, s2_scale = ze.predicted_moment_scales(T, spec)
    row = {
        "T": T,
        "theta": spec.theta,
        "poly": ";".join(repr(c) for c in spec.P.coefficients),
        "ReS1": result.S1.real,
        "ImS1": result.S1.imag,
        "S2": result.S2,
        "N": result.N_T,
        "kappa_bound": result.kappa_bound,
        "ReS1_over_predicted": result.S1.real / s1_scale,
        "S2_over_predicted": result.S2 / s2_scale,
    }
    _emit(args, [row], default_fmt="csv")
    return 0


def cmd_zeros(args) -> int:
    from . import cache, zeta as ze

    if args.action == "find":
        T = float(args.T if args.T is not None else 100.0)
        zeros = cache.load_or_find_zeros(T, directory=_cache_dir(args),
                                         enabled=not args.no_cache,
                                         threads=int(args.threads or 1))
        if args.output:
            ze.write_zeros(zeros, args.output)
        else:
            for g in zeros.ordinates:
                print(repr(float(g)))
        sys.stdout.flush()
        count = ze.count_N(T, zeros)
        print(f"# N({T:g}) census={count.census} formula={count.formula}", file=sys.stderr)
        return 0
    # ingest
    zeros = ze.ingest_zeros(args.path)
    print(f"# ingested {len(zeros)} zeros up to {zeros.max_height!r}", file=sys.stderr)
    if args.output:
        ze.write_zeros(zeros, args.output)
    return 0


def cmd_monitor_sieve(args) -> int:
    from . import vaughan as va

    trials = int(args.trials if args.trials is not None else 200)
    seed = int(args.seed if args.seed is not None else 20250811)
    q_max = int(args.Q if args.Q is not None else 20)
    h_max = int(args.H if args.H is not None else 200)
    v_max = float(args.V if args.V is not None else 20.0)
    reports = va.run_sieve_trials(trials, seed, q_max, h_max, v_max)
    max_ratio = max(r.ratio for r in reports)
    worst = max(reports, key=lambda r: r.ratio)
    passed = max_ratio <= 6.0
    _emit(args, {
        "check": "hybrid-large-sieve-monitor",
        "parameters": {"trials": trials, "seed": seed, "q_max": q_max,
                       "h_max": h_max, "v_max": v_max},
        "worst_case": {"Q": worst.Q, "V": worst.V, "H": worst.H,
                       "lhs": worst.lhs, "rhs": worst.rhs},
        "deviation": max_ratio,
        "pass": passed,
    })
    return 0 if passed else 1


def _cache_dir(args):
    from . import cache

    return cache.cache_dir(getattr(args, "cache_dir", None))


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetalab",
        description="Desk-scale verification lab for mollified zeta moments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file; flags win")
        p.add_argument("--output", help="report path (default stdout)")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--seed", default=None, help="RNG seed for randomized checks")
        p.add_argument("--cache-dir", dest="cache_dir", default=None)
        p.add_argument("--no-cache", dest="no_cache", action="store_true")
        p.add_argument("--threads", type=int, default=1,
                       help="worker thread cap for scan-type workloads")

    p = sub.add_parser("report-kappa", help="closed-form kappa constants")
    common(p)
    p.add_argument("--theta", default=None)
    p.add_argument("--degree", default=None)
    p.add_argument("--multiplicity-constant", dest="multiplicity_constant", default=None)
    p.set_defaults(handler=cmd_report_kappa)

    p = sub.add_parser("optimize-poly", help="maximize the kappa quotient")
    common(p)
    p.add_argument("--theta", default=None)
    p.add_argument("--degree", default=None)
    p.set_defaults(handler=cmd_optimize_poly)

    p = sub.add_parser("verify-vaughan", help="coefficient identity check")
    common(p)
    p.add_argument("--r", default=None)
    p.add_argument("--X", default=None)
    p.add_argument("--N", default=None)
    p.set_defaults(handler=cmd_verify_vaughan)

    p = sub.add_parser("verify-rearrangement", help="additive vs character form")
    common(p)
    p.add_argument("--y", default=None)
    p.add_argument("--T", default=None)
    p.add_argument("--nu", default=None)
    p.add_argument("--poly", default=None)
    p.set_defaults(handler=cmd_verify_rearrangement)

    p = sub.add_parser("verify-split", help="divisor splitting lemma check")
    common(p)
    p.add_argument("--d", default=None)
    p.add_argument("--m-limit", dest="m_limit", default=None)
    p.set_defaults(handler=cmd_verify_split)

    p = sub.add_parser("moments", help="empirical S1, S2, kappa bound")
    common(p)
    p.add_argument("--T", default=None)
    p.add_argument("--theta", default=None)
    p.add_argument("--y", default=None)
    p.add_argument("--poly", default=None, help="comma-separated c1,...,cd")
    p.add_argument("--zero-source", dest="zero_source", default=None,
                   help="'compute' or a zero-table path")
    p.set_defaults(handler=cmd_moments)

    p = sub.add_parser("zeros", help="find or ingest zero ordinates")
    common(p)
    zsub = p.add_subparsers(dest="action", required=True)
    pf = zsub.add_parser("find")
    common(pf)
    pf.add_argument("--T", default=None)
    pf.set_defaults(handler=cmd_zeros, action="find")
    pi = zsub.add_parser("ingest")
    common(pi)
    pi.add_argument("path")
    pi.set_defaults(handler=cmd_zeros, action="ingest")

    p = sub.add_parser("monitor-sieve", help="hybrid large sieve ratio sweep")
    common(p)
    p.add_argument("--Q", default=None)
    p.add_argument("--H", default=None)
    p.add_argument("--V", default=None)
    p.add_argument("--trials", default=None)
    p.set_defaults(handler=cmd_monitor_sieve)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        args = _merge_config(args)
        return args.handler(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"zetalab: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
