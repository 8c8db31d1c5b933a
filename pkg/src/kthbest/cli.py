"""Command-line front end.

Subcommands: ``cdf`` (distribution curves), ``metric`` (receiver metrics vs
Monte Carlo), ``order`` (stochastic-ordering check between two ensembles),
``selftest`` (the seed-pinned acceptance suite), ``preset`` (list/dump the
built-in figure configurations).

Exit codes: 0 success, 1 validation error, 2 numerical failure,
3 selftest failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import evt, metrics, oracle, report
from .config import ConfigError, ExperimentConfig, dump_config, load_config
from .metrics import QuadratureError
from .presets import PRESET_NAMES, preset_config, preset_summary

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_SELFTEST = 3


class _ArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage problems as validation errors (exit 1)."""

    def error(self, message):
        raise ConfigError(message)


def _add_common_options(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="experiment config file (INI)")
    sub.add_argument("--preset", metavar="NAME", choices=PRESET_NAMES, help="built-in configuration")
    sub.add_argument("--seed", type=int, metavar="U64", help="override the Monte Carlo seed")
    sub.add_argument("--samples", type=int, metavar="N", help="override the Monte Carlo trial count")
    sub.add_argument(
        "--mode",
        choices=("asymptotic", "finite_m", "both"),
        help="which law produces the theory columns",
    )
    sub.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), dest="fmt", help="output format")
    sub.add_argument("--plot", action="store_true", help="render a PNG next to the output table")


def _resolve_config(args) -> ExperimentConfig:
    if args.config and args.preset:
        raise ConfigError("pass either --config or --preset, not both")
    if args.preset:
        cfg = preset_config(args.preset)
    elif args.config:
        cfg = load_config(args.config)
    else:
        raise ConfigError("a configuration is required: pass --config PATH or --preset NAME")
    overrides = {}
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed must fit in 64 bits, got {args.seed}")
        overrides["mc_seed"] = args.seed
    if args.samples is not None:
        if args.samples < 0:
            raise ConfigError(f"--samples must be >= 0, got {args.samples}")
        overrides["mc_n"] = args.samples
    if args.mode is not None:
        overrides["law"] = args.mode
    if args.out is not None:
        overrides["out_path"] = args.out
    if args.fmt is not None:
        overrides["out_format"] = args.fmt
    if args.plot:
        overrides["plot"] = True
    return cfg.with_overrides(**overrides) if overrides else cfg


def _emit(columns, rows, schema, cfg: ExperimentConfig, extra=None) -> None:
    text = report.write_table(columns, rows, schema, cfg.out_path, cfg.out_format, extra)
    if cfg.out_path is None:
        sys.stdout.write(text)


def _grid_for(cfg: ExperimentConfig, consts, law: str) -> np.ndarray:
    ks = cfg.ks
    if cfg.grid_kind == "explicit":
        return np.linspace(cfg.grid_lo, cfg.grid_hi, cfg.grid_count)
    los, his = [], []
    for k in ks:
        if cfg.grid_normalized:
            los.append(evt.normalized_kth_max_quantile(consts, k, 1e-3))
            his.append(evt.normalized_kth_max_quantile(consts, k, 1.0 - 1e-3))
        elif law in ("finite_m", "both"):
            los.append(evt.finite_m_kth_max_quantile(cfg.ensemble, k, 1e-3))
            his.append(evt.finite_m_kth_max_quantile(cfg.ensemble, k, 1.0 - 1e-3))
        else:
            los.append(evt.unnormalized_kth_max_quantile_asym(consts, k, 1e-3))
            his.append(evt.unnormalized_kth_max_quantile_asym(consts, k, 1.0 - 1e-3))
    return np.linspace(min(los), max(his), cfg.grid_count)


def cmd_cdf(args) -> int:
    cfg = _resolve_config(args)
    ens = cfg.ensemble
    law = cfg.resolved_law()
    want_asym = law in ("asymptotic", "both") or cfg.grid_normalized
    consts = evt.norm_constants(ens) if want_asym else None
    grid = _grid_for(cfg, consts, law)
    # Raw-gain positions of the grid points (identity unless normalized).
    raw = consts.b_m + consts.a_m * grid if cfg.grid_normalized else grid
    if cfg.grid_normalized and law in ("finite_m", "both") and np.any(raw <= 0):
        raise ConfigError("normalized grid maps below zero gain; finite-M curves unavailable there")

    columns: list[str] = ["z"]
    series: list[np.ndarray] = [grid]
    for k in cfg.ks:
        if law in ("asymptotic", "both"):
            if cfg.grid_normalized:
                columns.append(f"theory_normalized_k{k}")
                series.append(np.asarray(evt.normalized_kth_max_cdf(consts, k, grid)))
            else:
                columns.append(f"theory_unnormalized_k{k}")
                series.append(np.asarray(evt.unnormalized_kth_max_cdf_asym(consts, k, grid)))
        if law in ("finite_m", "both"):
            columns.append(f"finite_m_k{k}")
            series.append(np.asarray(evt.finite_m_kth_max_cdf(ens, k, raw)))
        if cfg.include_exact:
            columns.append(f"exact_k{k}")
            series.append(np.asarray(oracle.exact_kth_max_cdf(ens, k, raw)))
    if cfg.mc_n > 0:
        samples = oracle.sample_order_stats(ens, cfg.ks, cfg.mc_n, cfg.mc_seed)
        for k in cfg.ks:
            columns.append(f"empirical_k{k}")
            series.append(np.searchsorted(samples[k].samples, raw, side="right") / cfg.mc_n)

    rows = [[float(col[i]) for col in series] for i in range(grid.size)]
    _emit(columns, rows, "kthbest.cdf.v1", cfg)
    if cfg.plot:
        if cfg.out_path is None:
            raise ConfigError("--plot requires --out so the PNG has a home")
        png = report.plot_path_for(cfg.out_path)
        scale = "normalized" if cfg.grid_normalized else "gain"
        report.render_cdf_plot(columns, rows, png, f"k-th maximum CDF ({scale} scale, M={ens.total_links})")
        print(f"wrote {png}", file=sys.stderr)
    return EXIT_OK


_METRIC_LABELS = {
    "outage": ("outage probability", True),
    "rate": ("average throughput (bit/s/Hz)", False),
    "eff_rate": ("effective throughput (bit/s/Hz)", False),
    "bep": ("average bit-error probability", True),
}


def _metric_theory(which, law_obj, k, params):
    """One theory value; returns (value, method)."""
    if which == "outage":
        if isinstance(law_obj, evt.NormConstants):
            return metrics.outage_probability(law_obj, k, params), "closed_form"
        return (
            float(evt.finite_m_kth_max_cdf(law_obj, k, params.z_th / params.gamma_s)),
            "closed_form",
        )
    if which == "rate":
        if isinstance(law_obj, evt.NormConstants):
            value, method, _ = metrics.avg_throughput(law_obj, k, params)
            return value, method
        return metrics.avg_throughput_quadrature(law_obj, k, params), "quadrature"
    if which == "eff_rate":
        return metrics.effective_throughput(law_obj, k, params, mode="exact"), "quadrature"
    if which == "bep":
        if isinstance(law_obj, evt.NormConstants):
            estimate = metrics.avg_bep(law_obj, k, params)
            method = "closed_form" + (":model_out_of_range" if estimate.model_out_of_range else "")
            return estimate.value, method
        return metrics.avg_bep_quadrature(law_obj, k, params), "quadrature"
    raise ConfigError(f"unknown metric {which!r}")


def cmd_metric(args) -> int:
    cfg = _resolve_config(args)
    which = args.which or cfg.metric_which
    columns = ["k", "m", "law", "theory", "method", "mc_estimate", "mc_stderr", "rel_diff"]
    rows = []
    for m_total in cfg.m_values:
        ens = cfg.ensemble.scaled(m_total)
        law = cfg.resolved_law(m_total)
        laws = ("asymptotic", "finite_m") if law == "both" else (law,)
        samples = (
            oracle.sample_order_stats(ens, cfg.ks, cfg.mc_n, cfg.mc_seed) if cfg.mc_n else None
        )
        consts = evt.norm_constants(ens) if "asymptotic" in laws else None
        for k in cfg.ks:
            mc_est = mc_se = math.nan
            if samples is not None:
                mc_est, mc_se = oracle.mc_metric(
                    samples[k], cfg.params, "avg_rate" if which == "rate" else which
                )
            for law_name in laws:
                law_obj = consts if law_name == "asymptotic" else ens
                try:
                    theory, method = _metric_theory(which, law_obj, k, cfg.params)
                except QuadratureError as exc:
                    print(f"warning: k={k} M={m_total}: {exc}", file=sys.stderr)
                    theory, method = math.nan, "error:quadrature"
                rel = (
                    abs(theory - mc_est) / abs(mc_est)
                    if samples is not None and mc_est and not math.isnan(theory)
                    else math.nan
                )
                rows.append([k, m_total, law_name, theory, method, mc_est, mc_se, rel])
    _emit(columns, rows, "kthbest.metric.v1", cfg, extra={"metric": which})
    if cfg.plot:
        if cfg.out_path is None:
            raise ConfigError("--plot requires --out so the PNG has a home")
        png = report.plot_path_for(cfg.out_path)
        ylabel, logy = _METRIC_LABELS[which]
        report.render_metric_plot(columns, rows, png, f"{ylabel} vs selection rank", ylabel, logy)
        print(f"wrote {png}", file=sys.stderr)
    return EXIT_OK


def cmd_order(args) -> int:
    cfg = _resolve_config(args)
    if cfg.second_ensemble is None:
        raise ConfigError("the order command needs an [ensemble.second] section")
    c1 = evt.norm_constants(cfg.ensemble)
    c2 = evt.norm_constants(cfg.second_ensemble)
    try:
        grid = (
            np.linspace(cfg.grid_lo, cfg.grid_hi, cfg.grid_count)
            if cfg.grid_kind == "explicit"
            else evt.default_z_grid(c1, min(cfg.ks), count=cfg.grid_count)
        )
        verdict = evt.stochastic_order_check(c1, c2, grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    second_pos = (grid - c2.b_m) / c2.a_m
    first_pos = (grid - c1.b_m) / c1.a_m
    diff = second_pos - first_pos
    columns = ["z", "second_position", "first_position", "condition_diff"]
    rows = [[float(z), float(a), float(b), float(d)] for z, a, b, d in zip(grid, second_pos, first_pos, diff)]

    crossing_index = None
    signs = np.sign(diff)
    flips = np.nonzero(np.diff(signs[signs != 0]))[0]
    if verdict is evt.OrderVerdict.CROSSING and flips.size:
        nonzero_idx = np.nonzero(signs != 0)[0]
        crossing_index = int(nonzero_idx[flips[0] + 1])

    print(f"verdict: {verdict.value}", file=sys.stderr)
    if crossing_index is not None:
        print(f"first sign change at grid index {crossing_index} (z={grid[crossing_index]!r})", file=sys.stderr)
    extra = {"verdict": verdict.value, "crossing_index": crossing_index}
    _emit(columns, rows, "kthbest.order.v1", cfg, extra=extra)
    if cfg.plot:
        if cfg.out_path is None:
            raise ConfigError("--plot requires --out so the PNG has a home")
        png = report.plot_path_for(cfg.out_path)
        report.render_order_plot(columns, rows, png, f"ordering condition: {verdict.value}")
        print(f"wrote {png}", file=sys.stderr)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from . import acceptance  # deferred: pulls in the whole stack

    results = acceptance.run_all(quick=args.quick)
    width = max(len(r.name) for r in results)
    all_passed = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        all_passed &= r.passed
        print(f"[{status}] {r.index:2d}  {r.name:<{width}}  {r.seconds:7.2f}s")
        print(f"        {r.detail}")
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if all_passed else EXIT_SELFTEST


def cmd_preset(args) -> int:
    if args.action == "list":
        for name in PRESET_NAMES:
            print(f"{name}  {preset_summary(name)}")
        return EXIT_OK
    cfg = preset_config(args.name)
    text = dump_config(cfg)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="kthbest",
        description="k-th best selection combining over Rician fading: "
        "limit-theory curves, receiver metrics, and Monte Carlo validation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cdf = sub.add_parser("cdf", help="emit CDF curves (theory / finite-M / exact / empirical)")
    _add_common_options(p_cdf)
    p_cdf.set_defaults(fn=cmd_cdf)

    p_metric = sub.add_parser("metric", help="theory-vs-simulation table for one receiver metric")
    _add_common_options(p_metric)
    p_metric.add_argument(
        "--which", choices=("outage", "rate", "eff_rate", "bep"), help="metric (default from config)"
    )
    p_metric.set_defaults(fn=cmd_metric)

    p_order = sub.add_parser("order", help="stochastic-ordering verdict between two ensembles")
    _add_common_options(p_order)
    p_order.set_defaults(fn=cmd_order)

    p_self = sub.add_parser("selftest", help="run the seed-pinned acceptance suite")
    p_self.add_argument("--quick", action="store_true", help="reduced sample counts (< 10 s)")
    p_self.set_defaults(fn=cmd_selftest)

    p_preset = sub.add_parser("preset", help="list or dump the built-in configurations")
    preset_sub = p_preset.add_subparsers(dest="action", required=True)
    p_list = preset_sub.add_parser("list", help="list preset names")
    p_list.set_defaults(fn=cmd_preset, action="list")
    p_dump = preset_sub.add_parser("dump", help="write a preset as a config file")
    p_dump.add_argument("name", choices=PRESET_NAMES)
    p_dump.add_argument("--out", metavar="PATH")
    p_dump.set_defaults(fn=cmd_preset, action="dump")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (QuadratureError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
