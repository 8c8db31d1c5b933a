"""Experiment configuration: a flat INI file with sections mirroring the
data model.  Parsing is strict — unknown sections or keys are hard errors —
and every key has a default, so a dumped config is always complete and
round-trips exactly.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace

from .evt import LinkEnsemble
from .metrics import MetricParams

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "load_config", "dump_config"]

METRIC_NAMES = ("outage", "rate", "eff_rate", "bep")
LAW_CHOICES = ("auto", "asymptotic", "finite_m", "both")

# Below this link count the moderate-M evaluation is both cheap and the more
# accurate of the two routes; above it the shift-scale form takes over.
FINITE_M_DEFAULT_LIMIT = 200


class ConfigError(ValueError):
    """Configuration file or option rejected, with field context."""


_DEFAULTS: dict[str, dict[str, str]] = {
    "ensemble": {
        "nu": "1.0",
        "count": "20",
        "sigma": "2.0",
        "per_link_sigma": "",
    },
    "ensemble.second": {},
    "selection": {"k": "1, 2, 5"},
    "metrics": {
        "gamma_s": "1.0",
        "z_th": "1.0",
        "theta": "1.0",
        "bep_c": "0.25",
        "bep_rho": "0.25",
        "which": "rate",
        "m_values": "",
    },
    "grid": {
        "kind": "auto",
        "lo": "0.0",
        "hi": "10.0",
        "count": "512",
        "normalized": "false",
        "include_exact": "false",
    },
    "mode": {"law": "auto"},
    "mc": {"n": "100000", "seed": "7001"},
    "output": {"path": "", "format": "csv", "plot": "false"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    ensemble: LinkEnsemble
    second_ensemble: LinkEnsemble | None
    ks: tuple[int, ...]
    params: MetricParams
    metric_which: str
    m_values: tuple[int, ...]
    grid_kind: str
    grid_lo: float
    grid_hi: float
    grid_count: int
    grid_normalized: bool
    include_exact: bool
    law: str
    mc_n: int
    mc_seed: int
    out_path: str | None
    out_format: str
    plot: bool

    def resolved_law(self, m_total: int | None = None) -> str:
        """Concrete law for one ensemble size ('both' stays 'both')."""
        if self.law != "auto":
            return self.law
        m = m_total if m_total is not None else self.ensemble.total_links
        return "finite_m" if m < FINITE_M_DEFAULT_LIMIT else "asymptotic"

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)


def _float_list(raw: str, where: str) -> list[float]:
    items = [s.strip() for s in raw.split(",") if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError as exc:
        raise ConfigError(f"{where}: expected a comma-separated list of numbers, got {raw!r}") from exc


def _int_list(raw: str, where: str) -> list[int]:
    items = [s.strip() for s in raw.split(",") if s.strip()]
    try:
        return [int(s) for s in items]
    except ValueError as exc:
        raise ConfigError(f"{where}: expected a comma-separated list of integers, got {raw!r}") from exc


def _scalar(cast, raw: str, where: str):
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {raw!r}") from exc


def _boolean(raw: str, where: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"{where}: expected a boolean, got {raw!r}")


def _choice(raw: str, choices: tuple[str, ...], where: str) -> str:
    value = raw.strip().lower()
    if value not in choices:
        raise ConfigError(f"{where}: expected one of {choices}, got {raw!r}")
    return value


def _build_ensemble(values: dict[str, str], where: str) -> LinkEnsemble:
    nus = _float_list(values["nu"], f"{where} nu")
    counts = _int_list(values["count"], f"{where} count")
    if len(nus) != len(counts):
        raise ConfigError(
            f"{where}: nu has {len(nus)} entries but count has {len(counts)}"
        )
    per_link = values.get("per_link_sigma", "").strip()
    per_link_sigma = tuple(_float_list(per_link, f"{where} per_link_sigma")) if per_link else None
    try:
        return LinkEnsemble(
            groups=tuple(zip(nus, counts)),
            sigma=_scalar(float, values["sigma"], f"{where} sigma"),
            per_link_sigma=per_link_sigma,
        )
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    merged: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in _DEFAULTS:
            raise ConfigError(f"{source}: unknown section [{section}]")
    for section, defaults in _DEFAULTS.items():
        merged[section] = dict(defaults)
        if parser.has_section(section):
            for key, value in parser.items(section):
                if section == "ensemble.second":
                    if key not in _DEFAULTS["ensemble"]:
                        raise ConfigError(f"{source}: unknown key {key!r} in [{section}]")
                elif key not in defaults:
                    raise ConfigError(f"{source}: unknown key {key!r} in [{section}]")
                merged[section][key] = value

    ens = _build_ensemble(merged["ensemble"], f"{source} [ensemble]")

    second = None
    if merged["ensemble.second"]:
        sec = dict(_DEFAULTS["ensemble"])
        sec.update(merged["ensemble.second"])
        second = _build_ensemble(sec, f"{source} [ensemble.second]")

    ks = tuple(_int_list(merged["selection"]["k"], f"{source} [selection] k"))
    if not ks or any(k < 1 for k in ks):
        raise ConfigError(f"{source} [selection] k: ranks must be positive, got {ks}")

    met = merged["metrics"]
    try:
        params = MetricParams(
            gamma_s=_scalar(float, met["gamma_s"], f"{source} [metrics] gamma_s"),
            z_th=_scalar(float, met["z_th"], f"{source} [metrics] z_th"),
            theta=_scalar(float, met["theta"], f"{source} [metrics] theta"),
            bep_c=_scalar(float, met["bep_c"], f"{source} [metrics] bep_c"),
            bep_rho=_scalar(float, met["bep_rho"], f"{source} [metrics] bep_rho"),
        )
    except ValueError as exc:
        raise ConfigError(f"{source} [metrics]: {exc}") from exc
    which = _choice(met["which"], METRIC_NAMES, f"{source} [metrics] which")
    m_values = tuple(_int_list(met["m_values"], f"{source} [metrics] m_values"))
    if not m_values:
        m_values = (ens.total_links,)
    for m in m_values:
        if m % ens.total_links != 0:
            raise ConfigError(
                f"{source} [metrics] m_values: {m} is not a multiple of the "
                f"base ensemble size {ens.total_links}"
            )

    grid = merged["grid"]
    grid_kind = _choice(grid["kind"], ("auto", "explicit"), f"{source} [grid] kind")
    grid_count = _scalar(int, grid["count"], f"{source} [grid] count")
    if grid_count < 2:
        raise ConfigError(f"{source} [grid] count: need at least 2 points, got {grid_count}")
    grid_lo = _scalar(float, grid["lo"], f"{source} [grid] lo")
    grid_hi = _scalar(float, grid["hi"], f"{source} [grid] hi")
    if grid_kind == "explicit" and not grid_lo < grid_hi:
        raise ConfigError(f"{source} [grid]: lo must be < hi, got {grid_lo} >= {grid_hi}")

    mc_n = _scalar(int, merged["mc"]["n"], f"{source} [mc] n")
    if mc_n < 0:
        raise ConfigError(f"{source} [mc] n: must be >= 0, got {mc_n}")
    mc_seed = _scalar(int, merged["mc"]["seed"], f"{source} [mc] seed")
    if not 0 <= mc_seed < 2**64:
        raise ConfigError(f"{source} [mc] seed: must fit in 64 bits, got {mc_seed}")

    out = merged["output"]
    return ExperimentConfig(
        ensemble=ens,
        second_ensemble=second,
        ks=ks,
        params=params,
        metric_which=which,
        m_values=m_values,
        grid_kind=grid_kind,
        grid_lo=grid_lo,
        grid_hi=grid_hi,
        grid_count=grid_count,
        grid_normalized=_boolean(grid["normalized"], f"{source} [grid] normalized"),
        include_exact=_boolean(grid["include_exact"], f"{source} [grid] include_exact"),
        law=_choice(merged["mode"]["law"], LAW_CHOICES, f"{source} [mode] law"),
        mc_n=mc_n,
        mc_seed=mc_seed,
        out_path=out["path"].strip() or None,
        out_format=_choice(out["format"], ("csv", "json"), f"{source} [output] format"),
        plot=_boolean(out["plot"], f"{source} [output] plot"),
    )


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))


def dump_config(config: ExperimentConfig) -> str:
    """Complete INI text (every key explicit); parse_config round-trips it."""
    parser = configparser.ConfigParser(interpolation=None)

    def fmt_floats(values) -> str:
        return ", ".join(repr(float(v)) for v in values)

    parser["ensemble"] = {
        "nu": fmt_floats(nu for nu, _ in config.ensemble.groups),
        "count": ", ".join(str(c) for _, c in config.ensemble.groups),
        "sigma": repr(config.ensemble.sigma),
        "per_link_sigma": fmt_floats(config.ensemble.per_link_sigma)
        if config.ensemble.per_link_sigma
        else "",
    }
    if config.second_ensemble is not None:
        parser["ensemble.second"] = {
            "nu": fmt_floats(nu for nu, _ in config.second_ensemble.groups),
            "count": ", ".join(str(c) for _, c in config.second_ensemble.groups),
            "sigma": repr(config.second_ensemble.sigma),
        }
    parser["selection"] = {"k": ", ".join(str(k) for k in config.ks)}
    parser["metrics"] = {
        "gamma_s": repr(config.params.gamma_s),
        "z_th": repr(config.params.z_th),
        "theta": repr(config.params.theta),
        "bep_c": repr(config.params.bep_c),
        "bep_rho": repr(config.params.bep_rho),
        "which": config.metric_which,
        "m_values": ", ".join(str(m) for m in config.m_values),
    }
    parser["grid"] = {
        "kind": config.grid_kind,
        "lo": repr(config.grid_lo),
        "hi": repr(config.grid_hi),
        "count": str(config.grid_count),
        "normalized": str(config.grid_normalized).lower(),
        "include_exact": str(config.include_exact).lower(),
    }
    parser["mode"] = {"law": config.law}
    parser["mc"] = {"n": str(config.mc_n), "seed": str(config.mc_seed)}
    parser["output"] = {
        "path": config.out_path or "",
        "format": config.out_format,
        "plot": str(config.plot).lower(),
    }
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
