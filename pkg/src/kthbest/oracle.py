"""Ground truth for everything else: the exact i.n.i.d. order-statistic CDF
(Poisson-binomial over per-link exceedances) and a deterministic, seeded
Monte Carlo sampler of the selection receiver.

The sampler draws each gain as (nu + sigma*N1)^2 + (sigma*N2)^2 from two
Gaussians, so it shares no code with the special-function stack it is used
to validate.  Reproducibility contract: results depend only on
(seed, n, ensemble, k) — never on chunking or thread count — because every
fixed-size chunk derives its own child stream from the root seed.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .evt import LinkEnsemble
from .metrics import MetricParams
from .specfun import marcum_q1

__all__ = [
    "EmpiricalCdf",
    "sample_kth_max",
    "sample_order_stats",
    "exact_kth_max_cdf",
    "brute_force_kth_max_cdf",
    "ks_distance",
    "mc_metric",
]

# Trials per RNG chunk; part of the reproducibility contract (and of
# config_digest), so changing it is a fixture-format change.
CHUNK_TRIALS = 1 << 16

_RNG_SCHEME = f"pcg64:seedseq-spawn:chunk={CHUNK_TRIALS}"

_FIXTURE_MAGIC = "kthbest-empirical-cdf-v1"


@dataclass(frozen=True)
class EmpiricalCdf:
    """Sorted Monte Carlo sample of one k-th maximum law, with provenance."""

    samples: np.ndarray
    seed: int
    n: int
    config_digest: str

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 1:
            raise ValueError("samples must be a nonempty 1-d array")
        if self.n != samples.size:
            raise ValueError(f"n={self.n} does not match {samples.size} samples")
        if np.any(np.diff(samples) < 0.0):
            raise ValueError("samples must be sorted ascending")

    def save(self, path) -> None:
        """Text fixture: header lines then one shortest-roundtrip float per line."""
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(f"{_FIXTURE_MAGIC}\n")
            fh.write(f"seed,{self.seed}\n")
            fh.write(f"n,{self.n}\n")
            fh.write(f"config_digest,{self.config_digest}\n")
            fh.write("samples\n")
            for x in self.samples:
                fh.write(repr(float(x)) + "\n")

    @classmethod
    def load(cls, path) -> "EmpiricalCdf":
        with open(path, "r", encoding="ascii") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0] != _FIXTURE_MAGIC:
            raise ValueError(f"{path} is not a {_FIXTURE_MAGIC} fixture")
        header = dict(line.split(",", 1) for line in lines[1:4])
        if lines[4] != "samples":
            raise ValueError("malformed fixture: missing samples marker")
        samples = np.array([float(s) for s in lines[5:]], dtype=float)
        return cls(
            samples=samples,
            seed=int(header["seed"]),
            n=int(header["n"]),
            config_digest=header["config_digest"],
        )


def _config_digest(ensemble: LinkEnsemble, k: int, n: int, seed: int) -> str:
    parts = [
        _FIXTURE_MAGIC,
        _RNG_SCHEME,
        f"groups={ensemble.groups!r}",
        f"sigma={ensemble.sigma!r}",
        f"per_link_sigma={ensemble.per_link_sigma!r}",
        f"k={k}",
        f"n={n}",
        f"seed={seed}",
    ]
    return hashlib.sha256("|".join(parts).encode("ascii")).hexdigest()


def sample_order_stats(
    ensemble: LinkEnsemble,
    ks: Iterable[int],
    n: int,
    seed: int,
) -> dict[int, EmpiricalCdf]:
    """Sample the k-th maxima for several ranks from one set of draws.

    All requested ranks are extracted from the same underlying gain matrix,
    so the per-trial records are coupled monotonically across k.
    """
    ks = sorted(set(int(k) for k in ks))
    m_total = ensemble.total_links
    if not ks or ks[0] < 1 or ks[-1] > m_total:
        raise ValueError(f"ranks must satisfy 1 <= k <= {m_total}, got {ks}")
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got {n}")
    seed = int(seed)

    nus, sigmas = ensemble.link_params()
    out = {k: np.empty(n) for k in ks}
    done = 0
    chunk_index = 0
    while done < n:
        count = min(CHUNK_TRIALS, n - done)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))
        normals = rng.standard_normal((2, count, m_total))
        gains = (nus + sigmas * normals[0]) ** 2 + (sigmas * normals[1]) ** 2
        gains.sort(axis=1)
        for k in ks:
            out[k][done : done + count] = gains[:, m_total - k]
        done += count
        chunk_index += 1

    return {
        k: EmpiricalCdf(
            samples=np.sort(out[k]),
            seed=seed,
            n=n,
            config_digest=_config_digest(ensemble, k, n, seed),
        )
        for k in ks
    }


def sample_kth_max(ensemble: LinkEnsemble, k: int, n: int, seed: int) -> EmpiricalCdf:
    """Monte Carlo sample of the k-th largest gain; deterministic in (seed, n, config)."""
    return sample_order_stats(ensemble, [k], n, seed)[int(k)]


def exact_kth_max_cdf(ensemble: LinkEnsemble, k: int, z):
    """Exact CDF of the k-th maximum: P(at most k-1 links exceed z).

    Dynamic programming over the exceedance-count distribution (a
    Poisson-binomial tail), O(M k) per evaluation point.  ``z`` may be a
    scalar or an ndarray of positive values.
    """
    k = int(k)
    m_total = ensemble.total_links
    if not 1 <= k <= m_total:
        raise ValueError(f"rank k={k} out of range for M={m_total}")
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.0) or not np.all(np.isfinite(z_arr)):
        raise ValueError("z must be positive and finite")
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)

    # dp[j] = P(exactly j of the links processed so far exceed z); mass that
    # would move past j = k-1 is discarded (it only feeds the complement).
    # The exceedance probability is shared within a (nu, sigma) group, so
    # marcum_q1 runs once per group, not once per link.
    dp = np.zeros((k, z_arr.size))
    dp[0] = 1.0
    sqrt_z = np.sqrt(z_arr)
    for nu, sig, count in _exceedance_groups(ensemble):
        q = np.atleast_1d(marcum_q1(nu / sig, sqrt_z / sig))
        for _ in range(count):
            for j in range(k - 1, 0, -1):
                dp[j] = dp[j] * (1.0 - q) + dp[j - 1] * q
            dp[0] = dp[0] * (1.0 - q)
    out = np.clip(dp.sum(axis=0), 0.0, 1.0)
    return float(out[0]) if scalar else out


def _exceedance_groups(ensemble: LinkEnsemble) -> list[tuple[float, float, int]]:
    if ensemble.per_link_sigma is None:
        return [(nu, ensemble.sigma, cnt) for nu, cnt in ensemble.groups]
    merged: dict[tuple[float, float], int] = {}
    for nu, sig in zip(*ensemble.link_params()):
        key = (float(nu), float(sig))
        merged[key] = merged.get(key, 0) + 1
    return [(nu, sig, cnt) for (nu, sig), cnt in merged.items()]


def brute_force_kth_max_cdf(ensemble: LinkEnsemble, k: int, z: float) -> float:
    """Direct subset enumeration of the order-statistic CDF; M <= 15 only.

    Sums, over every way to choose at least M-k+1 links at or below z, the
    product of the matching per-link CDF/survival factors.  Test oracle for
    the DP route.
    """
    k = int(k)
    m_total = ensemble.total_links
    if m_total > 15:
        raise ValueError(f"brute force is limited to M <= 15, got M={m_total}")
    if not 1 <= k <= m_total:
        raise ValueError(f"rank k={k} out of range for M={m_total}")
    z = float(z)
    if z <= 0.0 or not math.isfinite(z):
        raise ValueError("z must be positive and finite")

    nus, sigmas = ensemble.link_params()
    f_below = np.array(
        [1.0 - marcum_q1(nu / sig, math.sqrt(z) / sig) for nu, sig in zip(nus, sigmas)]
    )
    masks = np.arange(1 << m_total)
    bits = (masks[:, None] >> np.arange(m_total)) & 1
    probs = np.prod(np.where(bits == 1, f_below, 1.0 - f_below), axis=1)
    below_counts = bits.sum(axis=1)
    return float(probs[below_counts >= m_total - k + 1].sum())


def ks_distance(empirical: EmpiricalCdf, theoretical_cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance sup |F_hat - F| over the sample points,
    taking both the left and right empirical limits at each jump."""
    s = empirical.samples
    n = s.size
    f = np.asarray(theoretical_cdf(s), dtype=float)
    i = np.arange(1, n + 1)
    upper = np.max(np.abs(i / n - f))
    lower = np.max(np.abs((i - 1) / n - f))
    return float(max(upper, lower))


def mc_metric(
    empirical: EmpiricalCdf,
    params: MetricParams,
    which: str,
) -> tuple[float, float]:
    """Plug-in Monte Carlo estimate (value, stderr) of one receiver metric.

    ``which`` is one of outage, avg_rate, eff_rate, bep.  The effective-rate
    transform is applied after estimating the inner mean, with the standard
    error propagated by the delta method.
    """
    if empirical.n < 100:
        raise ValueError(f"need at least 100 samples for a metric estimate, got {empirical.n}")
    z = empirical.samples
    n = empirical.n
    gs = params.gamma_s

    if which == "outage":
        p_hat = np.searchsorted(z, params.z_th / gs, side="right") / n
        return float(p_hat), float(math.sqrt(p_hat * (1.0 - p_hat) / n))
    if which == "avg_rate":
        vals = np.log2(1.0 + gs * z)
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))
    if which == "eff_rate":
        vals = (1.0 + gs * z) ** (-params.theta)
        inner = float(vals.mean())
        inner_se = float(vals.std(ddof=1) / math.sqrt(n))
        estimate = -math.log2(inner) / params.theta
        stderr = inner_se / (params.theta * math.log(2.0) * inner)
        return estimate, stderr
    if which == "bep":
        vals = params.bep_c * np.exp(-params.bep_rho * gs * z)
        return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n))
    raise ValueError(f"unknown metric {which!r}; expected outage/avg_rate/eff_rate/bep")
