"""Command-line front end: named experiments with seeds, config files, and
JSON/CSV reports.

Exit codes: 0 all asserted checks passed, 1 a check failed (the report is
still written), 2 usage or configuration error.  Every report embeds the
resolved config; rerunning with the same config and seed is byte-identical
under --deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import GaugeLabError, SearchExhausted
from .exact import Dyadic, Region, parse_fraction, parse_region
from .gallery import (build_A_family, build_fat_set, example_3e, example_3f,
                      example_3g, harmonic_half, oscillation_witness_3e,
                      truncation_cover, truncation_sequence)
from .gauges import Gauge, cousin_partition
from .integrands import (IntegrandFn, exact_vector_integral, identity_integrand,
                         poly_integrand)
from .integrate import (DEFAULT_TOL, NotApproximable, absolute_continuity,
                        bochner_integrate, default_functionals,
                        interval_series_check, lower_norm_integral,
                        mcshane_integrate, pettis_check, riemann_sum,
                        sample_regions, talagrand_integrate, vitali_limit)
from .report import build_report, digest_row, write_csv, write_report
from .spaces import ValueSpace, VectorValue, distance, sqrt_enclosure
from .stability import (FunctionFamily, ZQuery, family_from_integrand,
                        stability_scan, z_measure_mc)


# -- argument helpers ----------------------------------------------------------


def arg_fraction(text) -> Fraction:
    if isinstance(text, (int, float)):
        return Fraction(text)
    return parse_fraction(str(text))


def arg_fraction_list(text) -> list[Fraction]:
    if isinstance(text, (list, tuple)):
        return [arg_fraction(t) for t in text]
    return [arg_fraction(tok) for tok in str(text).split(",") if tok.strip()]


def arg_gauge(text) -> Gauge:
    """"const:1/5" or "piecewise:0,1/2,1;1/4,1/8"."""
    kind, _, rest = str(text).partition(":")
    if kind == "const":
        return Gauge.const(parse_fraction(rest))
    if kind == "piecewise":
        bpart, _, vpart = rest.partition(";")
        breaks = [Dyadic.parse(tok) for tok in bpart.split(",") if tok.strip()]
        values = [parse_fraction(tok) for tok in vpart.split(",") if tok.strip()]
        return Gauge.piecewise(breaks, values)
    raise ValueError(f"unknown gauge spec {text!r}")


def build_integrand(args) -> dict:
    """Resolve --fn into an integrand plus whatever exact data comes with it."""
    spec = args.fn
    if spec == "identity":
        phi = identity_integrand()
        return {"integrand": phi, "exact_integral": exact_vector_integral(phi)}
    if spec == "3f":
        return example_3f(args.depth)
    if spec == "3g":
        return example_3g(args.R)
    if spec.startswith("poly:"):
        coeff_lists = [
            [parse_fraction(c) for c in group.split(",") if c.strip()]
            for group in spec[5:].split(";")
        ]
        phi = poly_integrand(coeff_lists)
        return {"integrand": phi, "exact_integral": exact_vector_integral(phi)}
    raise ValueError(f"unknown integrand spec {spec!r}")


def geometric_blocks(count: int) -> list[Region]:
    return [r for r in truncation_cover(count + 1)[:count]]


# -- command handlers ----------------------------------------------------------
# each returns (exit_code, result, csv_rows)


def cmd_integrate(args):
    built = build_integrand(args)
    phi = built["integrand"]
    schedule = args.schedule
    if schedule is None:
        # piecewise integrands converge under their own breakpoint structure;
        # a uniform schedule stalls once cells outpace max_levels
        schedule = "auto" if phi.klass == "evaluator" else "adapted"
    est = mcshane_integrate(
        phi, schedule=schedule, tol=args.tol, trials_per_level=args.trials,
        max_levels=args.max_levels, seed=args.seed, flavor=args.flavor,
    )
    result = {
        "integrand": phi,
        "status": est.status,
        "value": est.value,
        "oscillation": est.oscillation,
        "trace": est.trace,
    }
    exact = built.get("exact_integral")
    if exact is not None:
        err = distance(est.value, exact)
        result["exact_integral"] = exact
        result["error_vs_exact"] = err
        result["within_tol"] = bool(err.hi <= args.tol + est.oscillation)
    code = 0 if est.status in ("converged", "oscillation-floor") else 1
    return code, result, est.trace


def cmd_pettis(args):
    built = build_integrand(args)
    phi = built["integrand"]
    fs = default_functionals(phi.space, args.functionals, seed=args.seed)
    regions = sample_regions(args.regions, seed=args.seed + 1)
    out = pettis_check(phi, fs, regions, tol=args.tol, seed=args.seed)
    return (0 if out["pass"] else 1), dict(out, integrand=phi), out["entries"]


def cmd_series(args):
    built = build_integrand(args)
    phi = built["integrand"]
    blocks = geometric_blocks(args.blocks)
    out = interval_series_check(phi, blocks, tol=args.tol,
                                window_start=args.window_start, seed=args.seed)
    result = dict(out, integrand=phi, blocks=blocks)
    result["tail_below_tol"] = out["pass"]
    ok = out["pass"]
    exact = built.get("exact_integral")
    if exact is not None and args.fn == "3g":
        # blocks hit pairwise-disjoint coordinates, so the worst late-window
        # gap is the l2 tail starting at the window; for this slow decay the
        # formula match is the check, not tail_max <= tol (that would need
        # ~2^18 blocks)
        coords = built["coordinates"]
        w = out["window_start"]
        tail_sq = sum((c * c for c in coords[w:args.blocks]), Fraction(0))
        formula = sqrt_enclosure(tail_sq)
        result["tail_formula"] = formula
        result["formula_gap"] = abs(out["tail_max"] - formula.hi)
        result["matches_formula"] = bool(
            out["tail_max"] <= formula.hi + args.tol
            and out["tail_max"] >= formula.lo - args.tol
        )
        ok = result["matches_formula"]
    result["pass"] = ok
    rows = [{"block": i, "norm": n} for i, n in enumerate(out["block_norms"])]
    return (0 if ok else 1), result, rows


def cmd_abscont(args):
    built = build_integrand(args)
    phi = built["integrand"]
    out = absolute_continuity(phi, args.etas, regions_per_eta=args.regions_per_eta,
                              seed=args.seed, tol=args.tol)
    rows = out["rows"]
    monotone = all(a["modulus"] <= b["modulus"] for a, b in zip(rows, rows[1:]))
    result = dict(out, integrand=phi, monotone=monotone)
    ok = monotone
    bound = phi.sup_norm_bound()
    if bound is not None:
        for row in rows:
            row["bound"] = bound * row["eta"] + 2 * args.tol
            row["within_bound"] = bool(row["modulus"] <= row["bound"])
        ok = ok and all(r["within_bound"] for r in rows)
        result["sup_norm_bound"] = bound
    result["pass"] = ok
    return (0 if ok else 1), result, rows


def cmd_lln(args):
    built = build_integrand(args)
    phi = built["integrand"]
    rep = talagrand_integrate(phi, seed=args.seed, n=args.n, batches=args.batches)
    result = {
        "integrand": phi,
        "n": rep.n,
        "batches": rep.batches,
        "exact_counting_path": rep.exact,
        "pooled": rep.pooled,
        "spread": rep.spread,
    }
    rows = []
    code = 0
    exact = built.get("exact_integral")
    if exact is not None:
        sqrt_n = sqrt_enclosure(Fraction(rep.n))
        within = 0
        for i, (mean, var) in enumerate(zip(rep.means, rep.variances)):
            err = distance(mean, exact).hi
            sigma = sqrt_enclosure(var).hi
            limit = 3 * sigma / sqrt_n.lo
            ok = err <= limit
            within += ok
            rows.append({"batch": i, "error": err, "sigma": sigma,
                         "limit": limit, "within": bool(ok)})
        pooled_err = distance(rep.pooled, exact).hi
        result.update({
            "exact_integral": exact,
            "batches_within_3_sigma": within,
            "pooled_error": pooled_err,
            "pass": bool(10 * within >= 9 * rep.batches
                         and pooled_err <= Fraction(1, 100)),
        })
        code = 0 if result["pass"] else 1
    else:
        rows = [{"batch": i, "sigma": sqrt_enclosure(v).hi}
                for i, v in enumerate(rep.variances)]
    return code, result, rows


def cmd_bochner(args):
    built = build_integrand(args)
    phi = built["integrand"]
    out = bochner_integrate(phi, args.eps, max_pieces=args.max_pieces)
    if isinstance(out, NotApproximable):
        return 1, {"integrand": phi, "kind": "not-approximable", "certificate": out}, None
    return 0, {
        "integrand": phi,
        "kind": "certificate",
        "n_parts": out.n_parts,
        "dominator_integral": out.dominator_integral,
        "value": out.value,
        "epsilon": out.epsilon,
    }, None


def cmd_stability(args):
    if args.family == "pairsum":
        fam = FunctionFamily.pairsum(parse_region(args.h))
    else:
        built = build_integrand(args)
        phi = built["integrand"]
        fs = default_functionals(phi.space, 4, seed=args.seed)
        fam = family_from_integrand(phi, fs)
    E = parse_region(args.E)
    if args.scan:
        out = stability_scan(fam, [E], [(args.alpha, args.beta)],
                             mn_max=args.mn_max, samples=args.samples,
                             seed=args.seed, margin=args.margin)
        cells = [
            {"region": json.dumps(row["region"]), **cell}
            for row in out["rows"] for cell in row["cells"]
        ]
        return 0, out, cells
    q = ZQuery(E, args.m, args.n, args.alpha, args.beta)
    out = z_measure_mc(fam, q, samples=args.samples, seed=args.seed)
    code = 1 if out["comparison"] == "above-threshold" else 0
    return code, dict(out, family=fam.describe()), None


def cmd_vitali(args):
    if args.sequence == "spike":
        space = ValueSpace.findim(1, "l2")
        limit = IntegrandFn.step(space, (Dyadic(0, 0), Dyadic(1, 0)),
                                 (VectorValue.coords(space, [0]),), label="zero")

        def seq(n: int) -> IntegrandFn:
            j = min(n + 1, 30)
            return IntegrandFn.step(
                space, (Dyadic(0, 0), Dyadic(1, j), Dyadic(1, 0)),
                (VectorValue.coords(space, [1 << j]), VectorValue.coords(space, [0])),
                label=f"spike-{j}",
            )

        phi = limit
    else:
        built = build_integrand(args)
        phi = built["integrand"]
        seq = truncation_sequence(phi, truncation_cover(max(args.R, 2)))
    fs = default_functionals(phi.space, args.functionals, seed=args.seed)
    regions = sample_regions(args.regions, seed=args.seed + 1)
    out = vitali_limit(seq, phi, fs, regions, tol=args.tol, n_max=args.n_max,
                       seed=args.seed)
    return (0 if out["pass"] else 1), dict(out, integrand=phi), None


def cmd_gallery(args):
    if args.kind == "3f":
        built = example_3f(args.depth)
        phi = built["integrand"]
        refusal = bochner_integrate(phi, args.eps, max_pieces=args.max_pieces)
        result = {
            "integrand": phi,
            "grid": built["grid"],
            "separation": phi.metadata["separation"],
            "bochner": refusal,
            "bochner_refused": isinstance(refusal, NotApproximable),
        }
        code = 0 if isinstance(refusal, NotApproximable) else 1
        if args.delta is not None:
            g = Gauge.const(args.delta)
            p = cousin_partition(g, seed=args.seed)
            err = distance(riemann_sum(phi, p), built["exact_integral"])
            result["riemann_delta"] = args.delta
            result["riemann_error"] = err
            allowed = 2 * args.delta + built["grid"]
            result["riemann_error_allowed"] = allowed
            if err.hi > allowed:
                code = 1
        result["pass"] = code == 0
        return code, result, None
    if args.kind == "3g":
        built = example_3g(args.R)
        lower = lower_norm_integral(built["integrand"], grid_depth=args.norm_depth)
        return 0, {
            "integrand": built["integrand"],
            "exact_integral": built["exact_integral"],
            "coordinates": built["coordinates"],
            "lower_norm_integral": lower,
            "harmonic_half": harmonic_half(args.R),
            "norm_grid_depth": args.norm_depth,
            "pass": True,
        }, None
    # 3e
    fat = build_fat_set(args.L, args.r)
    fam = build_A_family(fat, args.L, jump_grid_depth=args.jump_depth, cap=args.R)
    gauge = arg_gauge(args.gauge)
    try:
        w = oscillation_witness_3e(fat, fam, args.R, gauge, seed=args.seed,
                                   proxy_depth=args.proxy_depth,
                                   max_attempts=args.max_attempts)
    except SearchExhausted as exc:
        return 1, {
            "fat": fat.diagnostics,
            "kind": "search-exhausted",
            "message": str(exc),
            "index": exc.index,
            "trace": exc.trace,
        }, None
    required = Fraction(3, 5) - Fraction(1, w["k"])
    result = {
        "fat": fat.diagnostics,
        "k": w["k"],
        "m": w["m"],
        "mu_level_set": w["mu_level_set"],
        "proxy": w["proxy"],
        "tags_out": w["tags_out"],
        "tags_in": w["tags_in"],
        "gap": w["gap"],
        "bound": w["bound"],
        "required": required,
        "coordinate_gap": w["coordinate_gap"],
        "partition_sums_differ": True,
        "partitions": list(w["partitions"]),
        "pass": bool(w["gap"] >= w["bound"] and w["gap"] >= required),
    }
    rows = [{"tag_out": str(t), "tag_in": str(u), "cell_lo": c[0], "cell_hi": c[1]}
            for t, u, c in zip(w["tags_out"], w["tags_in"], w["cells"])]
    return (0 if result["pass"] else 1), result, rows


def cmd_report(args):
    rows = []
    all_valid = True
    for path in args.files:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            rows.append({"file": path, "command": "", "valid": False,
                         "problems": str(exc)})
            all_valid = False
            continue
        row = digest_row(path, doc)
        all_valid = all_valid and row["valid"]
        rows.append(row)
    return (0 if all_valid else 1), {"files": len(rows), "all_valid": all_valid,
                                     "rows": rows}, rows


# -- option plumbing -----------------------------------------------------------

# dest -> (converter, default); config files use the same dests
_CONVERTERS = {
    "tol": arg_fraction,
    "eps": arg_fraction,
    "alpha": arg_fraction,
    "beta": arg_fraction,
    "margin": arg_fraction,
    "delta": arg_fraction,
    "etas": arg_fraction_list,
}


def _add_common(sp):
    sp.add_argument("--seed", type=int, default=None,
                    help="rng seed (default: GIL_SEED env, then 0)")
    sp.add_argument("--tol", default=None, help="tolerance, e.g. 2^-10 or 1/1024")
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.add_argument("--csv", default=None, help="write table-valued output here")
    sp.add_argument("--config", default=None, help="JSON config file; flags override")
    sp.add_argument("--deterministic", action="store_true", default=None,
                    help="omit timestamps so reruns are byte-identical")
    sp.add_argument("--threads", type=int, default=None,
                    help="cap worker threads (results unchanged)")


# final fallbacks applied after the config file; parser defaults stay None so
# an explicit flag, a config value, and a library default are distinguishable
_DEFAULTS = {
    "integrate": {"R": 16, "depth": 8, "trials": 3,
                  "max_levels": 12, "flavor": "mcshane"},
    "pettis": {"R": 16, "depth": 6, "functionals": 20, "regions": 20},
    "series": {"R": 16, "depth": 6, "blocks": 12},
    "abscont": {"R": 16, "depth": 6, "etas": "2^-2,2^-4,2^-6,2^-8",
                "regions_per_eta": 8},
    "lln": {"R": 8, "depth": 6, "batches": 30, "n": 10_000},
    "bochner": {"R": 16, "depth": 12, "eps": "1/100", "max_pieces": 64},
    "stability": {"fn": "identity", "R": 8, "depth": 6, "family": "integrand",
                  "h": "0:2", "E": "0:1", "m": 1, "n": 1, "alpha": "3/10",
                  "beta": "7/10", "samples": 100_000, "scan": False,
                  "mn_max": 3, "margin": "1/100"},
    "vitali": {"fn": "3g", "R": 8, "depth": 6, "sequence": "truncations",
               "n_max": 12, "functionals": 8, "regions": 8},
    "gallery": {"L": 4, "r": 3, "R": 64, "gauge": "const:1/5", "jump_depth": 10,
                "max_attempts": 200, "proxy_depth": 12, "depth": 12,
                "eps": "1/100", "max_pieces": 64, "norm_depth": 8},
    "report": {},
}

_NEEDS_FN = {"integrate", "pettis", "series", "abscont", "lln", "bochner"}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gaugelab",
                                 description="gauge-integral laboratory on [0,1]")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        _add_common(sp)
        return sp

    sp = add("integrate", help="gauge-schedule Riemann sums")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--schedule", choices=("auto", "adapted"))
    sp.add_argument("--trials", type=int)
    sp.add_argument("--max-levels", dest="max_levels", type=int)
    sp.add_argument("--flavor", choices=("mcshane", "henstock"))

    sp = add("pettis", help="dual-pairing consistency check")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--functionals", type=int)
    sp.add_argument("--regions", type=int)

    sp = add("series", help="interval-series partial sums and tails")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--blocks", type=int)
    sp.add_argument("--window-start", dest="window_start", type=int)

    sp = add("abscont", help="absolute-continuity modulus table")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--etas")
    sp.add_argument("--regions-per-eta", dest="regions_per_eta", type=int)

    sp = add("lln", help="empirical-mean batches against the closed form")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--batches", type=int)
    sp.add_argument("--n", type=int)

    sp = add("bochner", help="simple-function certificate or refusal")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--eps")
    sp.add_argument("--max-pieces", dest="max_pieces", type=int)

    sp = add("stability", help="separation-set measure estimates")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--family", choices=("integrand", "pairsum"))
    sp.add_argument("--h", help="avoid region for the pairsum family")
    sp.add_argument("--E")
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--alpha")
    sp.add_argument("--beta")
    sp.add_argument("--samples", type=int)
    sp.add_argument("--scan", action="store_true", default=None)
    sp.add_argument("--mn-max", dest="mn_max", type=int)
    sp.add_argument("--margin")

    sp = add("vitali", help="convergence-theorem hypotheses and conclusion")
    sp.add_argument("--fn")
    sp.add_argument("--R", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--sequence", choices=("truncations", "spike"))
    sp.add_argument("--n-max", dest="n_max", type=int)
    sp.add_argument("--functionals", type=int)
    sp.add_argument("--regions", type=int)

    sp = add("gallery", help="constructed integrands and witnesses")
    sp.add_argument("kind", choices=("3e", "3f", "3g"))
    sp.add_argument("--L", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--R", type=int)
    sp.add_argument("--gauge")
    sp.add_argument("--jump-depth", dest="jump_depth", type=int)
    sp.add_argument("--max-attempts", dest="max_attempts", type=int)
    sp.add_argument("--proxy-depth", dest="proxy_depth", type=int)
    sp.add_argument("--depth", type=int)
    sp.add_argument("--eps")
    sp.add_argument("--max-pieces", dest="max_pieces", type=int)
    sp.add_argument("--delta")
    sp.add_argument("--norm-depth", dest="norm_depth", type=int)

    sp = add("report", help="digest and validate emitted reports")
    sp.add_argument("files", nargs="+")

    return ap


_HANDLERS = {
    "integrate": cmd_integrate,
    "pettis": cmd_pettis,
    "series": cmd_series,
    "abscont": cmd_abscont,
    "lln": cmd_lln,
    "bochner": cmd_bochner,
    "stability": cmd_stability,
    "vitali": cmd_vitali,
    "gallery": cmd_gallery,
    "report": cmd_report,
}


def resolve_args(args: argparse.Namespace) -> dict:
    """Fold in the config file (flags override), env seed, defaults, and
    convert fraction-typed options.  Returns the resolved config dict that
    the report embeds."""
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
        if not isinstance(overrides, dict):
            raise ValueError("config file must hold a JSON object")
        for key, value in overrides.items():
            dest = key.replace("-", "_")
            if not hasattr(args, dest):
                raise ValueError(f"config key {key!r} is not a known option")
            if getattr(args, dest) is None:
                setattr(args, dest, value)
    for dest, value in _DEFAULTS.get(args.command, {}).items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)
    if args.command in _NEEDS_FN and getattr(args, "fn", None) is None:
        raise ValueError(f"{args.command} requires --fn (or fn in the config file)")
    if args.seed is None:
        args.seed = int(os.environ.get("GIL_SEED", "0"))
    if args.tol is None:
        args.tol = DEFAULT_TOL
    if args.deterministic is None:
        args.deterministic = False
    for dest, conv in _CONVERTERS.items():
        if hasattr(args, dest) and getattr(args, dest) is not None:
            setattr(args, dest, conv(getattr(args, dest)))
    if args.threads:
        try:
            import numba

            # clamp to what the host allows; results do not depend on this
            cap = getattr(numba.config, "NUMBA_NUM_THREADS", 1)
            numba.set_num_threads(min(max(1, args.threads), cap))
        except ImportError:
            pass
    resolved = {}
    for key, value in sorted(vars(args).items()):
        if key in ("out", "csv", "config"):
            continue
        resolved[key] = value
    return resolved


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        config = resolve_args(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    handler = _HANDLERS[args.command]
    try:
        code, result, rows = handler(args)
    except GaugeLabError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = build_report(args.command, config, result,
                       deterministic=args.deterministic)
    text = write_report(doc, args.out)
    if not args.out:
        sys.stdout.write(text)
    if args.csv and rows:
        write_csv(rows, args.csv)
    return code


if __name__ == "__main__":
    sys.exit(main())
