"""Command-line interface.

Subcommands
-----------
enumerate      build a census CSV for a gauge cutoff (pruned by default)
poincare       evaluate the kernel series over a census with its tail bound
smoothed-count smoothed, product-weighted count below radius X
spectral-side  evaluate a spectrum file's expansion at one or more X
compare        geometric vs spectral columns over a list of X (no verdict)
oracle-torus   flat-torus two-sided identity check
perron-check   smoothing kernel: closed form vs finite contour integral

Every subcommand emits a JSON report (stdout by default, ``--report PATH``
to write a file).  Exit codes: 0 success, 1 invalid input/parameters,
2 numeric-convergence failure (uncertifiable tail or quadrature).

Examples
--------
    orbitcount enumerate --cutoff 4 --out census4.csv
    orbitcount poincare --census census4.csv --z 6
    orbitcount smoothed-count --census census4.csv --x 1.5
    orbitcount compare --census census4.csv --spectrum spectrum.csv --x 1,1.5,2
    orbitcount oracle-torus --n 1 --nu 1 --lam -1 --point 0
    orbitcount perron-check --u 1.0 --height 1000
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import RunConfig, build_config
from .errors import ConvergenceError, InputError
from .freespace import DEFAULT_C_G
from .lattice import Census, enumerate_naive, enumerate_pruned, shell_counts
from .perron import SmoothingParams, perron_contour_oracle, smoothed_geometric_count, smoothing_kernel
from .poincare import GrowthModel, series_eval
from .reports import base_meta, complex_fields, write_json
from .spectral import Spectrum, convention_sign, spectral_side_eval
from .torus import TorusParams, torus_identity_check


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--report", help="write the JSON report here (default: stdout)")
    p.add_argument("--ell", type=int, help="smoothing order (default 2)")
    p.add_argument("--theta", type=float, help="smoothing step (default 1.0)")
    p.add_argument("--nu", type=int, help="kernel exponent (default 2)")
    p.add_argument("--rho-norm", dest="rho_norm", type=float, help="spectral offset (default 1.0)")
    p.add_argument("--c-g", dest="c_g", type=float, help="free-space constant (default 1.0)")
    p.add_argument("--workers", type=int, help="worker threads (default 1)")
    p.add_argument("--budget", dest="work_budget", type=int, help="work budget")
    p.add_argument("--quad-tol", dest="quad_tol", type=float, help="contour tolerance")


def _config_from(args: argparse.Namespace) -> RunConfig:
    keys = (
        "ell", "theta", "nu", "rho_norm", "c_g", "workers", "work_budget", "quad_tol",
    )
    overrides = {k: getattr(args, k, None) for k in keys}
    return build_config(getattr(args, "config", None), overrides)


def _smoothing(cfg: RunConfig) -> SmoothingParams:
    return SmoothingParams(ell=cfg.ell, theta=cfg.theta)


def _parse_xs(raw: str) -> list[float]:
    try:
        xs = [float(s) for s in raw.split(",") if s.strip()]
    except ValueError as exc:
        raise InputError(f"bad X list {raw!r}: {exc}") from None
    if not xs:
        raise InputError("empty X list")
    return xs


def _parse_z(raw_re: float, raw_im: float) -> complex:
    return complex(raw_re, raw_im)


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_enumerate(args) -> dict:
    cfg = _config_from(args)
    enum = enumerate_naive if args.naive else enumerate_pruned
    census = enum(args.cutoff, budget=cfg.work_budget, workers=cfg.workers)
    census.to_csv(args.out)
    bins = shell_counts(census, width=0.25)
    return {
        "meta": base_meta("enumerate", cfg.as_dict()),
        "census": {
            "cutoff": args.cutoff,
            "path": args.out,
            "size": census.size,
            "compact_count": int(census.compact_part().shape[0]),
            "max_gauge": float(census.gauges[-1]) if census.size else None,
            "distinct_shells": len(census.shells()),
            "radius_histogram": [[left, n] for left, n in bins],
            "enumerator": "naive" if args.naive else "pruned",
        },
    }


def _cmd_poincare(args) -> dict:
    cfg = _config_from(args)
    census = Census.from_csv(args.census)
    model = GrowthModel(sigma0=cfg.sigma0, eps=cfg.growth_eps, safety=cfg.growth_safety)
    z = _parse_z(args.z, args.z_im)
    val = series_eval(census, z, model=model, c_g=cfg.c_g)
    return {
        "meta": base_meta("poincare", cfg.as_dict()),
        "series": {
            "z": complex_fields(val.z),
            "value": complex_fields(val.value),
            "tail_bound": val.tail,
            "required_abscissa": model.required_abscissa,
            "growth": {
                "sigma0": model.sigma0,
                "eps": model.eps,
                "safety": model.safety,
                "c_fit": val.c_ls,
            },
            "census_size": census.size,
            "shell_partial_sums": [
                {"fnorm": f, "count": n, "partial": complex_fields(p)}
                for f, n, p in val.shells
            ],
        },
    }


def _cmd_smoothed_count(args) -> dict:
    cfg = _config_from(args)
    census = Census.from_csv(args.census)
    sm = _smoothing(cfg)
    out = smoothed_geometric_count(census, args.x, sm, c_g=cfg.c_g)
    return {
        "meta": base_meta("smoothed-count", cfg.as_dict()),
        "smoothed_count": {
            "x": out.X,
            "value": out.value,
            "ell": sm.ell,
            "theta": sm.theta,
            "census_size_used": out.census_size_used,
            "shell_subtotals": [
                {"fnorm": f, "subtotal": v} for f, v in out.shell_subtotals
            ],
        },
    }


def _cmd_spectral_side(args) -> dict:
    cfg = _config_from(args)
    spectrum = Spectrum.from_csv(args.spectrum, rho_norm=cfg.rho_norm)
    sm = _smoothing(cfg)
    rows = []
    for x in _parse_xs(args.x):
        val = spectral_side_eval(spectrum, x, sm, nu=cfg.nu)
        rows.append(
            {
                "x": x,
                "total": complex_fields(val.total),
                "per_datum": [
                    {"label": lab, "value": complex_fields(v)}
                    for lab, v in val.per_datum
                ],
                "constant_labels": list(val.constant_labels),
            }
        )
    return {
        "meta": base_meta("spectral-side", cfg.as_dict()),
        "spectral": {
            "nu": cfg.nu,
            "sign": convention_sign(cfg.nu),
            "rho_norm": cfg.rho_norm,
            "data_count": len(spectrum.data),
            "evaluations": rows,
        },
    }


def _cmd_compare(args) -> dict:
    cfg = _config_from(args)
    census = Census.from_csv(args.census)
    spectrum = Spectrum.from_csv(args.spectrum, rho_norm=cfg.rho_norm)
    sm = _smoothing(cfg)
    sign = convention_sign(cfg.nu)
    rows = []
    for x in _parse_xs(args.x):
        geo = smoothed_geometric_count(census, x, sm, c_g=cfg.c_g)
        sp = spectral_side_eval(spectrum, x, sm, nu=cfg.nu)
        geo_signed = sign * geo.value
        rows.append(
            {
                "x": x,
                "geometric": geo.value,
                "geometric_signed": geo_signed,
                "spectral": complex_fields(sp.total),
                "difference": geo_signed - sp.total.real,
                "census_size_used": geo.census_size_used,
            }
        )
    return {
        "meta": base_meta("compare", cfg.as_dict()),
        "compare": {
            "nu": cfg.nu,
            "sign": sign,
            "ell": sm.ell,
            "theta": sm.theta,
            "rows": rows,
            "note": "differences are informational; no pass/fail is implied",
        },
    }


def _cmd_oracle_torus(args) -> dict:
    cfg = _config_from(args)
    params = TorusParams(
        n=args.n,
        nu=args.nu if args.nu is not None else 1,
        lam=args.lam,
        spectral_trunc=args.spectral_trunc,
        geom_trunc=args.geom_trunc,
    )
    point = [float(s) for s in args.point.split(",")] if args.point else [0.0] * params.n
    cmp = torus_identity_check(params, np.asarray(point))
    return {
        "meta": base_meta("oracle-torus", cfg.as_dict()),
        "torus": {
            "n": params.n,
            "nu": params.nu,
            "lambda": params.lam,
            "point": list(cmp.x),
            "geometric": cmp.geometric,
            "geometric_tail": cmp.geometric_tail,
            "spectral": cmp.spectral,
            "spectral_tail": cmp.spectral_tail,
            "accelerated": cmp.accelerated,
            "budget": cmp.budget,
            "discrepancy": cmp.discrepancy,
            "within_budget": cmp.within_budget,
        },
    }


def _cmd_perron_check(args) -> dict:
    cfg = _config_from(args)
    sm = _smoothing(cfg)
    closed = float(smoothing_kernel(sm, args.u))
    contour = perron_contour_oracle(
        args.u, sm, sigma=args.sigma, height=args.height, abs_tol=cfg.quad_tol
    )
    return {
        "meta": base_meta("perron-check", cfg.as_dict()),
        "perron": {
            "u": args.u,
            "ell": sm.ell,
            "theta": sm.theta,
            "sigma": args.sigma,
            "height": args.height,
            "closed_form": closed,
            "contour": complex_fields(contour.value),
            "abs_difference": abs(closed - contour.value.real),
            "quadrature_error_estimate": contour.error_estimate,
            "integrand_evaluations": contour.evaluations,
        },
    }


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orbitcount", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="build a census CSV")
    p.add_argument("--cutoff", type=float, required=True, help="gauge cutoff >= 1")
    p.add_argument("--out", required=True, help="census CSV path")
    p.add_argument("--naive", action="store_true", help="use the box-scan enumerator")
    _add_common(p)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("poincare", help="kernel series over a census")
    p.add_argument("--census", required=True)
    p.add_argument("--z", type=float, required=True, help="Re z (must exceed the certified abscissa)")
    p.add_argument("--z-im", type=float, default=0.0, help="Im z (default 0)")
    _add_common(p)
    p.set_defaults(fn=_cmd_poincare)

    p = sub.add_parser("smoothed-count", help="smoothed weighted count below radius X")
    p.add_argument("--census", required=True)
    p.add_argument("--x", type=float, required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_smoothed_count)

    p = sub.add_parser("spectral-side", help="evaluate a spectrum file at X values")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--x", required=True, help="comma-separated X values")
    _add_common(p)
    p.set_defaults(fn=_cmd_spectral_side)

    p = sub.add_parser("compare", help="geometric vs spectral columns (no verdict)")
    p.add_argument("--census", required=True)
    p.add_argument("--spectrum", required=True)
    p.add_argument("--x", required=True, help="comma-separated X values")
    _add_common(p)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("oracle-torus", help="flat-torus identity check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, required=True)
    p.add_argument("--point", help="comma-separated coordinates (default origin)")
    p.add_argument("--spectral-trunc", dest="spectral_trunc", type=int)
    p.add_argument("--geom-trunc", dest="geom_trunc", type=int)
    _add_common(p)
    p.set_defaults(fn=_cmd_oracle_torus)

    p = sub.add_parser("perron-check", help="smoothing kernel vs contour integral")
    p.add_argument("--u", type=float, required=True, help="kernel argument X - r")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--height", type=float, default=1000.0)
    _add_common(p)
    p.set_defaults(fn=_cmd_perron_check)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        doc = args.fn(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return 2
    write_json(doc, args.report)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
