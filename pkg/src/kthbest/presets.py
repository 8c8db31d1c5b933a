"""Built-in experiment presets reproducing the six reference simulation
setups (sigma = 2 throughout; group sizes chosen so the documented
fractions are exact).

fig1   normalized CDF, i.i.d. nu=1, M=20, k in {1,2,5}
fig2   normalized CDF, nu=1 on one half / 0.5 on the other, M=20
fig3   unnormalized CDF, thirds nu in {3,1,0.5}, M=30 (moderate-M curve)
fig4   average throughput vs k for M in {21,42}, thirds nu in {2,1,0.5}
fig5   effective throughput, same ensemble as fig4, theta=1
fig6   average BEP, nu=1 on 3M/4 / 0.5 on M/4, M=20, C=rho=0.25
"""

from __future__ import annotations

from .config import ExperimentConfig
from .evt import LinkEnsemble
from .metrics import MetricParams

__all__ = ["PRESET_NAMES", "preset_config", "preset_summary"]

PRESET_NAMES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")

_SUMMARIES = {
    "fig1": "normalized k-th max CDF, i.i.d. nu=1, M=20, k={1,2,5}",
    "fig2": "normalized k-th max CDF, nu={1 x10, 0.5 x10}, M=20, k={1,2,5}",
    "fig3": "k-th max CDF, nu={3,1,0.5} in thirds, M=30, k={1,2,5}",
    "fig4": "average throughput, nu={2,1,0.5} in thirds, M={21,42}, k=1..5",
    "fig5": "effective throughput (theta=1), same ensemble as fig4",
    "fig6": "average BEP (C=rho=0.25), nu={1 x15, 0.5 x5}, M=20, k=1..5",
}


def _base(ensemble: LinkEnsemble, **kw) -> ExperimentConfig:
    defaults = dict(
        ensemble=ensemble,
        second_ensemble=None,
        ks=(1, 2, 5),
        params=MetricParams(),
        metric_which="rate",
        m_values=(ensemble.total_links,),
        grid_kind="auto",
        grid_lo=0.0,
        grid_hi=10.0,
        grid_count=512,
        grid_normalized=False,
        include_exact=False,
        law="auto",
        mc_n=100_000,
        mc_seed=7001,
        out_path=None,
        out_format="csv",
        plot=False,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


def preset_config(name: str) -> ExperimentConfig:
    if name == "fig1":
        return _base(
            LinkEnsemble(groups=((1.0, 20),), sigma=2.0),
            grid_normalized=True,
            law="asymptotic",
            mc_seed=7001,
        )
    if name == "fig2":
        return _base(
            LinkEnsemble(groups=((1.0, 10), (0.5, 10)), sigma=2.0),
            grid_normalized=True,
            law="asymptotic",
            mc_seed=7002,
        )
    if name == "fig3":
        return _base(
            LinkEnsemble(groups=((3.0, 10), (1.0, 10), (0.5, 10)), sigma=2.0),
            law="finite_m",
            mc_seed=7003,
        )
    if name == "fig4":
        return _base(
            LinkEnsemble(groups=((2.0, 7), (1.0, 7), (0.5, 7)), sigma=2.0),
            ks=(1, 2, 3, 4, 5),
            metric_which="rate",
            m_values=(21, 42),
            mc_n=1_000_000,
            mc_seed=7004,
        )
    if name == "fig5":
        return _base(
            LinkEnsemble(groups=((2.0, 7), (1.0, 7), (0.5, 7)), sigma=2.0),
            ks=(1, 2, 3, 4, 5),
            metric_which="eff_rate",
            m_values=(21, 42),
            params=MetricParams(theta=1.0),
            mc_n=1_000_000,
            mc_seed=7005,
        )
    if name == "fig6":
        return _base(
            LinkEnsemble(groups=((1.0, 15), (0.5, 5)), sigma=2.0),
            ks=(1, 2, 3, 4, 5),
            metric_which="bep",
            m_values=(20,),
            params=MetricParams(bep_c=0.25, bep_rho=0.25),
            law="asymptotic",
            mc_n=1_000_000,
            mc_seed=7006,
        )
    raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")


def preset_summary(name: str) -> str:
    return _SUMMARIES[name]
