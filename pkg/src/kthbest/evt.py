"""Limit distribution of the k-th largest of M independent non-central
chi-square (2 dof) channel gains, and the finite-M Poisson-sum companion.

Two evaluation routes are exposed for the k-th maximum law:

* the shift-scale limit form built from the closed-form normalizing
  constants (``norm_constants`` -> ``normalized_kth_max_cdf`` and friends),
  preferred for large M;
* the moderate-M form driven by the exceedance sum
  ``u(z) = sum_m Q1(nu_m/sigma_m, sqrt(z)/sigma_m)``
  (``finite_m_kth_max_cdf`` / ``_pdf``), which also supports per-link
  scale parameters.

Convention throughout: rank ``k`` counts from the top, so ``k = 1`` selects
the maximum.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize
from scipy import special as _sp

from .specfun import log_bessel_i0, log_gamma, marcum_q1, reg_upper_gamma

__all__ = [
    "LinkEnsemble",
    "NormConstants",
    "OrderVerdict",
    "select_nu_tilde",
    "norm_constants",
    "normalized_kth_max_cdf",
    "normalized_kth_max_pdf",
    "normalized_kth_max_quantile",
    "unnormalized_kth_max_cdf_asym",
    "unnormalized_kth_max_pdf_asym",
    "unnormalized_kth_max_quantile_asym",
    "finite_m_u",
    "finite_m_u_prime",
    "finite_m_kth_max_cdf",
    "finite_m_kth_max_pdf",
    "finite_m_kth_max_quantile",
    "normalized_mgf",
    "stochastic_order_check",
    "default_z_grid",
]


@dataclass(frozen=True)
class LinkEnsemble:
    """Fading configuration: distinct LOS amplitudes with multiplicities.

    ``groups`` is a sequence of ``(nu, count)`` pairs with distinct positive
    ``nu``; ``sigma`` is the common diffuse scale.  ``per_link_sigma``
    (length M, all positive) is honoured only by the finite-M route.
    """

    groups: tuple[tuple[float, int], ...]
    sigma: float = 2.0
    per_link_sigma: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        groups = tuple((float(nu), int(cnt)) for nu, cnt in self.groups)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "sigma", float(self.sigma))
        if self.per_link_sigma is not None:
            object.__setattr__(
                self, "per_link_sigma", tuple(float(s) for s in self.per_link_sigma)
            )
        if not groups:
            raise ValueError("ensemble needs at least one (nu, count) group")
        nus = [nu for nu, _ in groups]
        if len(set(nus)) != len(nus):
            raise ValueError(f"group LOS amplitudes must be distinct, got {nus}")
        if any(nu <= 0 or not math.isfinite(nu) for nu in nus):
            raise ValueError(f"LOS amplitudes must be positive finite, got {nus}")
        if any(cnt < 1 for _, cnt in groups):
            raise ValueError("group counts must be >= 1")
        if self.total_links < 2:
            raise ValueError("ensemble must have M >= 2 links")
        if self.sigma <= 0 or not math.isfinite(self.sigma):
            raise ValueError(f"sigma must be positive finite, got {self.sigma}")
        if self.per_link_sigma is not None:
            if len(self.per_link_sigma) != self.total_links:
                raise ValueError(
                    f"per_link_sigma has {len(self.per_link_sigma)} entries for "
                    f"M={self.total_links} links"
                )
            if any(s <= 0 or not math.isfinite(s) for s in self.per_link_sigma):
                raise ValueError("per_link_sigma entries must be positive finite")

    @property
    def total_links(self) -> int:
        return sum(cnt for _, cnt in self.groups)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    def link_params(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-link (nu_m, sigma_m) arrays, in group declaration order."""
        nus = np.concatenate([np.full(cnt, nu) for nu, cnt in self.groups])
        if self.per_link_sigma is not None:
            sigmas = np.asarray(self.per_link_sigma, dtype=float)
        else:
            sigmas = np.full(self.total_links, self.sigma)
        return nus, sigmas

    def scaled(self, m_total: int) -> "LinkEnsemble":
        """Same group proportions at a different total link count."""
        base = self.total_links
        if m_total % base != 0:
            raise ValueError(f"M={m_total} is not a multiple of the base ensemble size {base}")
        f = m_total // base
        return LinkEnsemble(
            groups=tuple((nu, cnt * f) for nu, cnt in self.groups),
            sigma=self.sigma,
        )


@dataclass(frozen=True)
class NormConstants:
    """Scale/location constants of the k-th maximum limit, plus the mixture
    weight ``p`` and the dominant-group bookkeeping (nu_tilde, m_tilde)."""

    a_m: float
    b_m: float
    p: float
    nu_tilde: float
    m_tilde: int

    def __post_init__(self) -> None:
        if self.a_m <= 0 or not math.isfinite(self.a_m):
            raise ValueError(f"a_m must be positive finite, got {self.a_m}")
        if not math.isfinite(self.b_m):
            raise ValueError(f"b_m must be finite, got {self.b_m}")
        if self.p <= 0 or not math.isfinite(self.p):
            raise ValueError(f"p must be positive finite, got {self.p}")


class OrderVerdict(enum.Enum):
    SECOND_DOMINATES = "second_dominates"
    FIRST_DOMINATES = "first_dominates"
    CROSSING = "crossing"


def _check_rank(k: int, m_total: int | None = None) -> int:
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"rank k must be a positive integer, got {k!r}")
    if m_total is not None and k > m_total:
        raise ValueError(f"rank k={k} exceeds the number of links M={m_total}")
    return int(k)


def select_nu_tilde(ensemble: LinkEnsemble) -> tuple[float, int]:
    """Dominant LOS amplitude and its multiplicity.

    At finite M the growth-rate condition of the limit construction cannot
    be checked, so the largest amplitude present is taken (it satisfies the
    condition whenever group sizes stay proportional as M grows).
    """
    nu_t = max(nu for nu, _ in ensemble.groups)
    m_t = sum(cnt for nu, cnt in ensemble.groups if nu == nu_t)
    return nu_t, m_t


def norm_constants(ensemble: LinkEnsemble, nu_tilde: float | None = None) -> NormConstants:
    """Closed-form normalizing constants (a_M, b_M) and mixture weight p.

    ``nu_tilde`` overrides the dominant-amplitude choice for callers that
    model a different asymptotic regime; it must be one of the ensemble's
    group amplitudes.  Requires a common sigma and a dominant-group
    multiplicity of at least 3 (``b_M`` contains log log M-tilde).
    """
    if ensemble.per_link_sigma is not None:
        raise ValueError(
            "norm_constants requires a common sigma; per-link sigmas are only "
            "supported on the finite-M route"
        )
    if nu_tilde is None:
        nu_t, m_t = select_nu_tilde(ensemble)
    else:
        matches = [cnt for nu, cnt in ensemble.groups if nu == float(nu_tilde)]
        if not matches:
            raise ValueError(f"nu_tilde={nu_tilde} is not one of the ensemble amplitudes")
        nu_t, m_t = float(nu_tilde), matches[0]
    if m_t < 3:
        raise ValueError(
            f"dominant-group multiplicity must be >= 3 (log log term), got {m_t}"
        )

    sigma = ensemble.sigma
    a_m = 2.0 * sigma * sigma
    log_mt = math.log(m_t)
    # The -1/2 log(c exp(-nu^2/sigma^2)) piece is expanded so no exp/log
    # round trip occurs.
    b_m = a_m * (
        log_mt
        - 0.25 * math.log(log_mt)
        + (nu_t * math.sqrt(2.0) / sigma) * math.sqrt(log_mt)
        - 0.5 * math.log(2.0 * math.sqrt(2.0) * math.pi * nu_t / sigma)
        + nu_t * nu_t / (2.0 * sigma * sigma)
    )

    # The dominant group's term is identically 1; only sub-dominant groups
    # contribute, so p == 1.0 exactly for a single-group (i.i.d.) ensemble.
    p = 1.0
    sqrt_log = math.sqrt(log_mt)
    for nu, cnt in ensemble.groups:
        if nu == nu_t:
            continue
        log_term = (
            math.log(cnt / m_t)
            + 0.5 * math.log(nu_t / nu)
            + (-nu * nu - nu_t * nu_t) / (2.0 * sigma * sigma)
            + (math.sqrt(2.0) / sigma)
            * ((nu - nu_t) * sqrt_log + nu * nu_t / (math.sqrt(2.0) * sigma))
        )
        p += math.exp(log_term)
    return NormConstants(a_m=a_m, b_m=b_m, p=p, nu_tilde=nu_t, m_tilde=m_t)


def normalized_kth_max_cdf(consts: NormConstants, k: int, z):
    """CDF of the normalized k-th maximum: Gamma(k, p e^-z) / Gamma(k)."""
    k = _check_rank(k)
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    out = np.zeros_like(z_arr)
    # Left of log(p) - 700 the argument would overflow exp; the CDF is 0 there.
    ok = z_arr >= math.log(consts.p) - 700.0
    if np.any(ok):
        out[ok] = reg_upper_gamma(k, consts.p * np.exp(-z_arr[ok]))
    return float(out[0]) if scalar else out


def normalized_kth_max_pdf(consts: NormConstants, k: int, z):
    """Density of the normalized law: x^k e^-x / Gamma(k) with x = p e^-z."""
    k = _check_rank(k)
    z_arr = np.asarray(z, dtype=float)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    out = np.zeros_like(z_arr)
    ok = z_arr >= math.log(consts.p) - 700.0
    if np.any(ok):
        x = consts.p * np.exp(-z_arr[ok])
        out[ok] = np.exp(k * np.log(x) - x - log_gamma(k))
    return float(out[0]) if scalar else out


def normalized_kth_max_quantile(consts: NormConstants, k: int, q: float) -> float:
    """Inverse of ``normalized_kth_max_cdf`` at probability q in (0, 1)."""
    k = _check_rank(k)
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must be in (0,1), got {q}")
    x = float(_sp.gammainccinv(k, q))
    return math.log(consts.p) - math.log(x)


def unnormalized_kth_max_cdf_asym(consts: NormConstants, k: int, z):
    """Shift-scale limit CDF of the raw k-th maximum gain."""
    return normalized_kth_max_cdf(consts, k, (np.asarray(z, dtype=float) - consts.b_m) / consts.a_m)


def unnormalized_kth_max_pdf_asym(consts: NormConstants, k: int, z):
    return normalized_kth_max_pdf(consts, k, (np.asarray(z, dtype=float) - consts.b_m) / consts.a_m) / consts.a_m


def unnormalized_kth_max_quantile_asym(consts: NormConstants, k: int, q: float) -> float:
    return consts.b_m + consts.a_m * normalized_kth_max_quantile(consts, k, q)


def _link_groups(ensemble: LinkEnsemble) -> list[tuple[float, float, int]]:
    """(nu, sigma, count) triples, merging links that share both parameters."""
    if ensemble.per_link_sigma is None:
        return [(nu, ensemble.sigma, cnt) for nu, cnt in ensemble.groups]
    nus, sigmas = ensemble.link_params()
    merged: dict[tuple[float, float], int] = {}
    for nu, sig in zip(nus, sigmas):
        merged[(float(nu), float(sig))] = merged.get((float(nu), float(sig)), 0) + 1
    return [(nu, sig, cnt) for (nu, sig), cnt in merged.items()]


def _check_positive_z(z) -> np.ndarray:
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.0) or not np.all(np.isfinite(z_arr)):
        raise ValueError("z must be positive and finite on the finite-M route")
    return z_arr


def finite_m_u(ensemble: LinkEnsemble, z):
    """Expected exceedance count u(z) = sum_m Q1(nu_m/sigma_m, sqrt(z)/sigma_m).

    Strictly decreasing from M (at z -> 0) to 0.  Honours per-link sigmas.
    """
    z_arr = _check_positive_z(z)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    total = np.zeros_like(z_arr)
    for nu, sig, cnt in _link_groups(ensemble):
        total += cnt * np.atleast_1d(marcum_q1(nu / sig, np.sqrt(z_arr) / sig))
    return float(total[0]) if scalar else total


def finite_m_u_prime(ensemble: LinkEnsemble, z):
    """du/dz: minus the sum of per-link non-central chi-square densities."""
    z_arr = _check_positive_z(z)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    total = np.zeros_like(z_arr)
    for nu, sig, cnt in _link_groups(ensemble):
        s2 = sig * sig
        log_i0 = np.atleast_1d(log_bessel_i0(nu * np.sqrt(z_arr) / s2))
        total += cnt * np.exp(-(z_arr + nu * nu) / (2.0 * s2) + log_i0 - math.log(2.0 * s2))
    out = -total
    return float(out[0]) if scalar else out


def finite_m_kth_max_cdf(ensemble: LinkEnsemble, k: int, z):
    """Moderate-M CDF of the k-th maximum: Gamma(k, u(z)) / Gamma(k)."""
    k = _check_rank(k, ensemble.total_links)
    u = finite_m_u(ensemble, z)
    return reg_upper_gamma(k, u)


def finite_m_kth_max_pdf(ensemble: LinkEnsemble, k: int, z):
    """Moderate-M density: -u'(z) u(z)^(k-1) e^-u(z) / Gamma(k).

    Algebraically equal to the incomplete-gamma bracket form for k >= 2 and
    well defined at k = 1 (where that bracket degenerates).
    """
    k = _check_rank(k, ensemble.total_links)
    z_arr = _check_positive_z(z)
    scalar = z_arr.ndim == 0
    z_arr = np.atleast_1d(z_arr)
    u = np.atleast_1d(finite_m_u(ensemble, z_arr))
    minus_uprime = -np.atleast_1d(finite_m_u_prime(ensemble, z_arr))
    out = np.zeros_like(z_arr)
    pos = u > 0.0
    with np.errstate(divide="ignore"):
        out[pos] = minus_uprime[pos] * np.exp(
            (k - 1) * np.log(u[pos]) - u[pos] - log_gamma(k)
        )
    return float(out[0]) if scalar else out


def finite_m_kth_max_quantile(ensemble: LinkEnsemble, k: int, q: float) -> float:
    """Inverse of the moderate-M CDF; clamps to the lower support edge when
    the requested level sits below the u-form floor Gamma(k, M)/Gamma(k)."""
    k = _check_rank(k, ensemble.total_links)
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must be in (0,1), got {q}")
    target = float(_sp.gammainccinv(k, q))
    lo = 1e-12
    if finite_m_u(ensemble, lo) <= target:
        return lo
    hi = 1.0
    while finite_m_u(ensemble, hi) > target:
        hi *= 2.0
        if hi > 1e12:
            raise ArithmeticError("failed to bracket the finite-M quantile")
    return float(optimize.brentq(lambda zz: finite_m_u(ensemble, zz) - target, lo, hi, xtol=1e-12, rtol=1e-14))


def normalized_mgf(k: int, t: float) -> float:
    """MGF of the standard normalized law (mixture weight 1): Gamma(k-t)/Gamma(k)."""
    k = _check_rank(k)
    t = float(t)
    if not t < k:
        raise ValueError(f"MGF requires t < k, got t={t}, k={k}")
    return math.exp(log_gamma(k - t) - log_gamma(k))


def stochastic_order_check(
    consts_1: NormConstants,
    consts_2: NormConstants,
    z_grid: Sequence[float],
    tol: float = 1e-12,
) -> OrderVerdict:
    """Affine dominance check between two sets of normalizing constants.

    Returns SECOND_DOMINATES when (z-b2)/a2 <= (z-b1)/a1 everywhere on the
    grid (the second law is then stochastically larger), FIRST_DOMINATES for
    the reversed inequality, CROSSING otherwise.  Both constants must carry
    the same mixture weight; ordering with differing p is undefined here.
    """
    if abs(consts_1.p - consts_2.p) > 1e-12 * max(consts_1.p, consts_2.p):
        raise ValueError(
            f"stochastic ordering requires equal mixture weights, got "
            f"p1={consts_1.p}, p2={consts_2.p}"
        )
    grid = np.asarray(list(z_grid), dtype=float)
    if grid.size == 0:
        raise ValueError("z_grid must be nonempty")
    lhs = (grid - consts_2.b_m) / consts_2.a_m
    rhs = (grid - consts_1.b_m) / consts_1.a_m
    diff = lhs - rhs
    if np.all(diff <= tol):
        verdict = OrderVerdict.SECOND_DOMINATES
    elif np.all(diff >= -tol):
        verdict = OrderVerdict.FIRST_DOMINATES
    else:
        return OrderVerdict.CROSSING

    # Dominance must transfer to the CDFs; any violation is an internal error.
    f1 = np.atleast_1d(unnormalized_kth_max_cdf_asym(consts_1, 1, grid))
    f2 = np.atleast_1d(unnormalized_kth_max_cdf_asym(consts_2, 1, grid))
    if verdict is OrderVerdict.SECOND_DOMINATES:
        if np.any(f2 > f1 + 1e-12):
            raise AssertionError("affine dominance not reflected in CDFs")
    else:
        if np.any(f1 > f2 + 1e-12):
            raise AssertionError("affine dominance not reflected in CDFs")
    return verdict


def default_z_grid(
    law: NormConstants | LinkEnsemble,
    k: int,
    count: int = 512,
    tail: float = 1e-3,
    normalized: bool = False,
) -> np.ndarray:
    """Equally spaced grid covering [q(tail), q(1-tail)] of the chosen law."""
    if count < 2:
        raise ValueError("grid needs at least 2 points")
    if isinstance(law, NormConstants):
        if normalized:
            lo = normalized_kth_max_quantile(law, k, tail)
            hi = normalized_kth_max_quantile(law, k, 1.0 - tail)
        else:
            lo = unnormalized_kth_max_quantile_asym(law, k, tail)
            hi = unnormalized_kth_max_quantile_asym(law, k, 1.0 - tail)
    else:
        if normalized:
            raise ValueError("normalized grids require NormConstants")
        lo = finite_m_kth_max_quantile(law, k, tail)
        hi = finite_m_kth_max_quantile(law, k, 1.0 - tail)
    return np.linspace(lo, hi, count)
