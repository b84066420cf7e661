"""Command-line interface: every subsystem behind one executable.

Numeric printing: 17 significant digits in JSON (round-trip safe), 12 in
CSV/text.  Output is byte-identical across runs for fixed flags, including
under any --threads setting.  Exit codes: 0 success, 1 verification
mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import densities, eigen, moments, oracle, reference, verify
from .moments import DampedMoment
from .series import FIRST, SECOND, generate_family, normalized_product

THREADS_ENV = "ALPHA_SELFACTION_THREADS"

_MODE_ALIASES = {
    "eq64": eigen.EQ64_CLOSED,
    "eq64_closed": eigen.EQ64_CLOSED,
    "closed": eigen.EQ64_CLOSED,
    "full": eigen.FULL_SERIES_MODE,
    "full_series": eigen.FULL_SERIES_MODE,
}


def _fmt(x: float, sig: int = 12) -> str:
    return format(float(x), f".{sig}g")


def _fmt_json(x: float) -> float:
    return float(format(float(x), ".17g"))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)] + [",".join(r) for r in rows]
    return "\n".join(lines) + "\n"


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _series_rows(name: str, series) -> list[list[str]]:
    return [
        [name, str(t.coeff.numerator), str(t.coeff.denominator),
         str(t.alpha_pow), str(t.s_pow), str(t.log_pow)]
        for t in series.terms
    ]


def cmd_series(args) -> int:
    first = generate_family(FIRST, args.order)
    second = generate_family(SECOND, args.order)
    named = []
    for k in range(args.order + 1):
        named.append((f"F{k}", first.F_parts[k]))
        named.append((f"G{k}", first.G_parts[k]))
    for k in range(args.order + 1):
        named.append((f"f{k}", second.F_parts[k]))
        named.append((f"g{k}", second.G_parts[k]))
    if args.format == "json":
        payload = {name: s.to_json_obj() for name, s in named}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    elif args.format == "text":
        lines = [f"{name} = {s.to_text()}" for name, s in named]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        rows = [r for name, s in named for r in _series_rows(name, s)]
        _emit(_csv(["part", "num", "den", "alpha_pow", "s_pow", "log_pow"], rows), args.out)
    return 0


def cmd_check_coefficients(args) -> int:
    checks = reference.check_coefficients(order=args.order)
    ok = all(c.matched for c in checks)
    if args.format == "json":
        payload = [
            {
                "name": c.name,
                "matched": c.matched,
                "mismatches": [
                    {
                        "key": list(d.key),
                        "expected": None if d.expected is None else [d.expected.numerator, d.expected.denominator],
                        "got": None if d.got is None else [d.got.numerator, d.got.denominator],
                    }
                    for d in c.diffs
                ],
            }
            for c in checks
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    elif args.format == "text":
        lines = []
        for c in checks:
            if c.matched:
                lines.append(f"{c.name}: all coefficients match exactly")
            else:
                lines.append(f"{c.name}: {len(c.diffs)} coefficient mismatches")
                for d in c.diffs:
                    lines.append(f"  key {d.key}: expected {d.expected}, got {d.got}")
        lines.append("result: " + ("MATCH" if ok else "MISMATCH"))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        rows = [[c.name, str(c.matched), str(len(c.diffs))] for c in checks]
        _emit(_csv(["name", "matched", "n_mismatches"], rows), args.out)
    return 0 if ok else 1


def cmd_products(args) -> int:
    first = generate_family(FIRST, args.order)
    second = generate_family(SECOND, args.order)
    gg = normalized_product(first, second, "GG")
    ff = normalized_product(first, second, "FF")
    if args.format == "json":
        payload = {"GG_normalized": gg.to_json_obj(), "FF_normalized": ff.to_json_obj()}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    elif args.format == "text":
        _emit(f"(2/α)s²G̃g̃ = {gg.to_text()}\n(6/α)s²F̃f̃ = {ff.to_text()}\n", args.out)
    else:
        rows = _series_rows("GG", gg) + _series_rows("FF", ff)
        _emit(_csv(["product", "num", "den", "alpha_pow", "s_pow", "log_pow"], rows), args.out)
    return 0


def cmd_densities(args) -> int:
    if args.format == "json":
        payload = {
            "operators": densities.compare_printed_rows(),
            "tables": {},
        }
        for particle in (densities.ELECTRON, densities.POSITRON):
            tables = densities.density_tables(particle)
            payload["tables"][particle] = {
                name: {
                    mkey: {
                        "entries": [
                            [e.radial_product, e.harmonic, str(e.fraction)]
                            for e in tbl.entries
                        ],
                        "monopole": [
                            [e.radial_product, e.harmonic, str(e.fraction)]
                            for e in tbl.monopole
                        ],
                    }
                    for mkey, tbl in per_m.items()
                }
                for name, per_m in tables.items()
            }
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    rows = []
    for particle in (densities.ELECTRON, densities.POSITRON):
        tables = densities.density_tables(particle)
        for name in ("energy", "spin_z", "charge", "magnetization_z"):
            per_m = tables[name]
            entry_txt = {}
            for mkey, tbl in per_m.items():
                entry_txt[mkey] = " ".join(
                    f"{'+' if e.fraction > 0 else '-'}{abs(e.fraction)} {e.radial_product} {e.harmonic}"
                    for e in tbl.entries
                )
            rows.append([particle, name, entry_txt["+1/2"], entry_txt["-1/2"]])
    text = _csv(["particle", "row", "m=+1/2", "m=-1/2"], rows)
    _emit(text, args.out)
    return 0


def cmd_moments(args) -> int:
    eta = args.eta
    rows = []
    jobs = [(p, q) for p in range(-6, 7) for q in range(0, 3)]

    def one(job):
        p, q = job
        exact = moments.damped_moment(DampedMoment(p, q, eta), moments.EXACT)
        quad = moments.damped_moment(DampedMoment(p, q, eta), moments.QUADRATURE, args.tol)
        approx = _small_eta_approx(p, q, eta)
        return (p, q, exact, quad, approx)

    n_threads = _threads(args)
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(one, jobs))
    else:
        results = [one(j) for j in jobs]
    for p, q, exact, quad, approx in results:
        rows.append([
            str(p), str(q), _fmt(eta), _fmt(exact), _fmt(quad),
            "" if approx is None else _fmt(approx), _fmt(abs(exact - quad)),
        ])
    if args.format == "json":
        payload = [
            {"p": int(r[0]), "q": int(r[1]), "eta": _fmt_json(eta),
             "exact": _fmt_json(float(r[3])), "quadrature": _fmt_json(float(r[4])),
             "asymptotic": None if r[5] == "" else _fmt_json(float(r[5])),
             "abs_diff": _fmt_json(float(r[6]))}
            for r in rows
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["p", "q", "eta", "exact", "quadrature", "asymptotic", "abs_diff"], rows), args.out)
    return 0


def _small_eta_approx(p: int, q: int, eta: float) -> float | None:
    """The printed small-eta forms, where one exists (q = 0 rows)."""
    import math

    if q != 0:
        return None
    if p == -3:
        return math.exp(-eta) * (eta**-2 + eta**-1)
    if p == -2:
        return math.exp(-eta) / eta
    if p == -1:
        return -math.log(eta) - 0.5772156649015329
    if p == 0:
        return 1.0 + eta * math.log(eta)
    return 1.0 / (p + 1) - eta / p


def cmd_beta(args) -> int:
    res = moments.solve_beta(args.alpha, _beta_mode(args.mode), tol=args.tol, order=args.order)
    if args.format == "json":
        payload = {
            "alpha": _fmt_json(res.alpha),
            "mode": res.mode,
            "beta": _fmt_json(res.beta),
            "beta_asymptotic": _fmt_json(res.beta_asymptotic),
            "beta_numeric": _fmt_json(res.beta_numeric),
            "beta_full_series": _fmt_json(res.beta_full_series),
            "residuals": [_fmt_json(r) for r in res.residuals],
            "order": res.order,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    elif args.format == "text":
        lines = [
            f"alpha          = {_fmt(res.alpha)}",
            f"beta ({res.mode}) = {_fmt(res.beta)}",
            f"  asymptotic   = {_fmt(res.beta_asymptotic)}",
            f"  numeric      = {_fmt(res.beta_numeric)}",
            f"  full_series  = {_fmt(res.beta_full_series)} (order {res.order})",
            f"  residuals    = {', '.join(_fmt(r) for r in res.residuals)}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        rows = [[_fmt(res.alpha), res.mode, _fmt(res.beta), _fmt(res.beta_asymptotic),
                 _fmt(res.beta_numeric), _fmt(res.beta_full_series)]]
        _emit(_csv(["alpha", "mode", "beta", "asymptotic", "numeric", "full_series"], rows), args.out)
    return 0


def _beta_mode(mode: str) -> str:
    aliases = {
        "asymptotic": moments.ASYMPTOTIC,
        "numeric": moments.NUMERIC,
        "full": moments.FULL_SERIES,
        "full_series": moments.FULL_SERIES,
    }
    return aliases[mode]


def cmd_alpha(args) -> int:
    cfg = eigen.EigenConfig(
        bracket=(args.bracket[0], args.bracket[1]),
        tol=args.tol,
        mode=_MODE_ALIASES[args.mode],
        series_order=args.order,
    )
    res = eigen.solve_alpha(cfg)
    if args.format == "json":
        payload = {
            "alpha_root": _fmt_json(res.alpha_root),
            "beta_implied": _fmt_json(res.beta_implied),
            "lhs": _fmt_json(res.lhs),
            "rhs": _fmt_json(res.rhs),
            "omega1_term": _fmt_json(res.omega1_term),
            "omega2_term": _fmt_json(res.omega2_term),
            "lambda_term": _fmt_json(res.lambda_term),
            "iterations": res.iterations,
            "mode": res.mode,
            "series_order": res.series_order,
            "experimental_alpha": eigen.EXPERIMENTAL_ALPHA,
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    elif args.format == "text":
        lines = [
            f"alpha_root   = {_fmt(res.alpha_root)}   (mode {res.mode})",
            f"beta_implied = {_fmt(res.beta_implied)}",
            f"lhs = {_fmt(res.lhs)}, rhs = {_fmt(res.rhs)}",
            f"  omega1 term = {_fmt(res.omega1_term)}",
            f"  omega2 term = {_fmt(res.omega2_term)}",
            f"  lambda term = {_fmt(res.lambda_term)}",
            f"iterations   = {res.iterations}",
            f"experimental reference value: {eigen.EXPERIMENTAL_ALPHA}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        rows = [[_fmt(res.alpha_root), _fmt(res.beta_implied), _fmt(res.lhs),
                 _fmt(res.rhs), str(res.iterations), res.mode]]
        _emit(_csv(["alpha_root", "beta", "lhs", "rhs", "iterations", "mode"], rows), args.out)
    return 0


def cmd_refine(args) -> int:
    cfg = eigen.EigenConfig(bracket=(args.bracket[0], args.bracket[1]), tol=args.tol)
    table = eigen.refine_alpha(args.max_order, cfg)
    rows = [
        [str(r.order), r.mode, _fmt(r.alpha_root), _fmt(r.beta),
         "" if r.change is None else _fmt(r.change)]
        for r in table.rows
    ]
    if args.format == "json":
        payload = {
            "rows": [
                {"order": r.order, "mode": r.mode, "alpha_root": _fmt_json(r.alpha_root),
                 "beta": _fmt_json(r.beta),
                 "change": None if r.change is None else _fmt_json(r.change)}
                for r in table.rows
            ],
            "final_alpha": _fmt_json(table.final_alpha),
            "uncertainty": _fmt_json(table.uncertainty),
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    elif args.format == "text":
        lines = [
            f"order {r.order} ({r.mode}): alpha = {_fmt(r.alpha_root)}"
            + ("" if r.change is None else f", change {_fmt(r.change, 3)}")
            for r in table.rows
        ]
        lines.append(f"final alpha = {_fmt(table.final_alpha)} +- {_fmt(table.uncertainty, 3)}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(_csv(["order", "mode", "alpha_root", "beta", "change"], rows), args.out)
    return 0


def cmd_fig1(args) -> int:
    beta = args.beta if args.beta is not None else args.alpha**2 / 8.0
    data = oracle.fig1_data(args.alpha, beta, args.samples, order=args.order)
    if args.format == "json":
        payload = {
            "header": list(data.header),
            "rows": [[_fmt_json(v) for v in row] for row in data.rows],
            "g_zero": _fmt_json(data.g_zero),
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        rows = [[_fmt(v) for v in row] for row in data.rows]
        _emit(_csv(list(data.header), rows), args.out)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all(threads=_threads(args))
    ok = all(r.passed for r in results)
    if args.format == "json":
        payload = [
            {"criterion": r.cid, "name": r.name, "passed": r.passed, "details": r.details}
            for r in results
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = []
        for r in results:
            lines.append(f"{r.status} {r.cid} {r.name}")
            if args.format == "text":
                lines.extend(f"    {d}" for d in r.details)
        lines.append("verification: " + ("PASS" if ok else "FAIL"))
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alpha-selfaction",
        description="Exact series, damped integrals and the coupling-constant eigenvalue equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order_default=2):
        p.add_argument("--order", type=int, default=order_default)
        p.add_argument("--alpha", type=float, default=0.0073)
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--tol", type=float, default=1e-12)
        p.add_argument("--format", choices=("csv", "json", "text"), default="csv")
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=None)

    common(sub.add_parser("series", help="dump the generated iterates"))
    common(sub.add_parser("check-coefficients", help="diff iterates against embedded anchors"))
    common(sub.add_parser("products", help="dump the normalized product series"))
    common(sub.add_parser("densities", help="density tables and the 16 operator rows"))
    p = sub.add_parser("moments", help="damped moment table, exact vs quadrature")
    common(p)
    p.add_argument("--eta", type=float, default=1e-4)
    p = sub.add_parser("beta", help="the beta(alpha) condition")
    common(p)
    p.add_argument("--mode", choices=("asymptotic", "numeric", "full", "full_series"),
                   default="numeric")
    p = sub.add_parser("alpha", help="solve the eigenvalue equation")
    common(p)
    p.add_argument("--mode", choices=sorted(_MODE_ALIASES), default="eq64")
    p.add_argument("--bracket", type=float, nargs=2, default=(0.005, 0.01),
                   metavar=("LO", "HI"))
    p = sub.add_parser("refine", help="root vs series truncation order")
    common(p)
    p.add_argument("--max-order", type=int, default=2)
    p.add_argument("--bracket", type=float, nargs=2, default=(0.005, 0.01),
                   metavar=("LO", "HI"))
    p = sub.add_parser("fig1", help="profile data table")
    common(p)
    p.add_argument("--samples", type=int, default=256)
    common(sub.add_parser("verify", help="run the acceptance suite"))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "series": cmd_series,
        "check-coefficients": cmd_check_coefficients,
        "products": cmd_products,
        "densities": cmd_densities,
        "moments": cmd_moments,
        "beta": cmd_beta,
        "alpha": cmd_alpha,
        "refine": cmd_refine,
        "fig1": cmd_fig1,
        "verify": cmd_verify,
    }
    return handlers[args.command](args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
