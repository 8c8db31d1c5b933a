"""Receiver performance metrics of the k-th best selection combiner.

All metrics are expectations under one of the two k-th maximum laws from
:mod:`kthbest.evt`: pass :class:`NormConstants` for the shift-scale limit
law or :class:`LinkEnsemble` for the moderate-M law.  The closed forms
(outage, BEP, the alternating throughput series) are tied to the limit law.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

from scipy import integrate

from . import evt
from .evt import LinkEnsemble, NormConstants
from .specfun import exp_integral_e1_scaled, log_gamma

__all__ = [
    "MetricParams",
    "SeriesReport",
    "BepEstimate",
    "QuadratureError",
    "outage_probability",
    "avg_throughput_series",
    "avg_throughput_quadrature",
    "avg_throughput",
    "effective_throughput",
    "avg_bep",
]

_LN2 = math.log(2.0)

# Beyond this value of (1 + gamma_s b_M)/(gamma_s a_M) the alternating series
# overflows double headroom after a handful of terms; go straight to
# quadrature.
SERIES_ATTEMPT_LIMIT = 50.0

# Alternating-sum noise floor: once the largest term exceeds this multiple of
# the result, double precision cannot deliver the promised 1e-6 agreement.
_CANCELLATION_GUARD = 1e8


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to meet its tolerance."""


@dataclass(frozen=True)
class MetricParams:
    """Receiver-side parameters.

    gamma_s  base SNR (linear), the transmit power to noise variance ratio
    z_th     outage threshold on the received SNR (linear)
    theta    delay QoS exponent of the effective-throughput model
    bep_c    conditional BEP ceiling C of the modulation family
    bep_rho  conditional BEP exponential rate rho
    """

    gamma_s: float = 1.0
    z_th: float = 1.0
    theta: float = 1.0
    bep_c: float = 0.25
    bep_rho: float = 0.25

    def __post_init__(self) -> None:
        for name in ("gamma_s", "z_th", "theta"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive finite, got {v}")
        if not (self.bep_rho >= 0.0 and math.isfinite(self.bep_rho)):
            raise ValueError(f"bep_rho must be nonnegative finite, got {self.bep_rho}")
        if not (0.0 < self.bep_c <= 1.0):
            raise ValueError(f"bep_c must be in (0, 1], got {self.bep_c}")


@dataclass(frozen=True)
class SeriesReport:
    value: float
    terms_used: int
    converged: bool
    max_term_magnitude: float


class BepEstimate(NamedTuple):
    value: float
    model_out_of_range: bool
    raw: float


def outage_probability(consts: NormConstants, k: int, params: MetricParams) -> float:
    """P(received SNR <= z_th): the limit CDF evaluated at z_th / gamma_s."""
    return float(evt.unnormalized_kth_max_cdf_asym(consts, k, params.z_th / params.gamma_s))


def avg_throughput_series(
    consts: NormConstants,
    k: int,
    params: MetricParams,
    cap: int = 500,
) -> SeriesReport:
    """Alternating-series evaluation of E[log2(1 + gamma_s Z)] under the
    limit law.

    Terms are formed in sign + log-magnitude representation with the
    exponential-integral factor kept exp-scaled, and accumulated with
    compensated summation.  ``converged`` is False when the cap is hit, a
    term's log-magnitude exceeds 700, or cancellation has consumed the
    precision needed for the reported value to be trustworthy; callers then
    fall back to :func:`avg_throughput_quadrature`.
    """
    k = int(k)
    a, b, p = consts.a_m, consts.b_m, consts.p
    gs = params.gamma_s
    log_p = math.log(p)
    prefactor = math.exp(k * log_p - log_gamma(k)) / _LN2

    total = 0.0
    comp = 0.0  # Kahan compensation
    max_mag = 0.0
    prev_total = math.inf
    converged = False
    n_used = 0
    for n in range(cap):
        kn = k + n
        big_b = kn / (a * gs)
        log_mag = (
            n * log_p
            - log_gamma(n + 1.0)
            - math.log(kn)
            + kn * b / a
            + math.log(exp_integral_e1_scaled(big_b))
        )
        n_used = n + 1
        if log_mag > 700.0:
            break
        term = math.exp(log_mag) if n % 2 == 0 else -math.exp(log_mag)
        max_mag = max(max_mag, abs(term))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if (
            n >= 1
            and abs(term) <= 1e-10 * abs(total)
            and abs(total - prev_total) <= 1e-10 * abs(total)
        ):
            converged = True
            break
        prev_total = total

    if converged and max_mag > _CANCELLATION_GUARD * abs(total):
        converged = False
    return SeriesReport(
        value=prefactor * total,
        terms_used=n_used,
        converged=converged,
        max_term_magnitude=prefactor * max_mag,
    )


def _law_pdf_and_quantile(
    law: NormConstants | LinkEnsemble, k: int
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    if isinstance(law, NormConstants):
        return (
            lambda z: evt.unnormalized_kth_max_pdf_asym(law, k, z),
            lambda q: evt.unnormalized_kth_max_quantile_asym(law, k, q),
        )
    if isinstance(law, LinkEnsemble):
        return (
            lambda z: evt.finite_m_kth_max_pdf(law, k, z),
            lambda q: evt.finite_m_kth_max_quantile(law, k, q),
        )
    raise TypeError(f"expected NormConstants or LinkEnsemble, got {type(law).__name__}")


def _expectation(
    integrand: Callable[[float], float],
    pdf: Callable[[float], float],
    lo: float,
    hi: float,
    rel_tol: float = 1e-8,
) -> float:
    if not lo < hi:
        raise QuadratureError(f"degenerate integration domain [{lo}, {hi}]")
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(
                lambda z: integrand(z) * pdf(z), lo, hi, epsabs=0.0, epsrel=rel_tol, limit=200
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}") from exc
    if abs(value) > 0.0 and abserr > 10.0 * rel_tol * abs(value):
        raise QuadratureError(
            f"quadrature error estimate {abserr:.3e} exceeds tolerance for value {value:.6e}"
        )
    return value


def avg_throughput_quadrature(
    law: NormConstants | LinkEnsemble, k: int, params: MetricParams
) -> float:
    """E[log2(1 + gamma_s Z)] by adaptive quadrature against the chosen law.

    The domain is the [1e-9, 1-1e-9] quantile range of the law, clipped to
    nonnegative gains.
    """
    pdf, quantile = _law_pdf_and_quantile(law, int(k))
    lo = max(0.0, quantile(1e-9))
    hi = quantile(1.0 - 1e-9)
    gs = params.gamma_s
    return _expectation(lambda z: math.log1p(gs * z) / _LN2, pdf, lo, hi)


def avg_throughput(
    consts: NormConstants, k: int, params: MetricParams, cap: int = 500
) -> tuple[float, str, SeriesReport | None]:
    """Series evaluation with automatic quadrature fallback.

    Returns ``(value, method, report)`` with method "series" or
    "quadrature".  The series is only attempted while its leading exponent
    stays within double headroom.
    """
    attempt = (1.0 + params.gamma_s * consts.b_m) / (params.gamma_s * consts.a_m)
    if attempt <= SERIES_ATTEMPT_LIMIT:
        report = avg_throughput_series(consts, k, params, cap=cap)
        if report.converged:
            return report.value, "series", report
        return avg_throughput_quadrature(consts, k, params), "quadrature", report
    return avg_throughput_quadrature(consts, k, params), "quadrature", None


def effective_throughput(
    law: NormConstants | LinkEnsemble,
    k: int,
    params: MetricParams,
    mode: str = "exact",
) -> float:
    """QoS-constrained throughput -(1/theta) log2 E[(1 + gamma_s Z)^-theta].

    ``mode="high_snr_approx"`` drops the +1 inside the power (a lower
    bound); it requires the law's 1e-9 quantile to be strictly positive.
    """
    if mode not in ("exact", "high_snr_approx"):
        raise ValueError(f"mode must be 'exact' or 'high_snr_approx', got {mode!r}")
    pdf, quantile = _law_pdf_and_quantile(law, int(k))
    theta, gs = params.theta, params.gamma_s
    lo = quantile(1e-9)
    hi = quantile(1.0 - 1e-9)
    if mode == "exact":
        lo = max(0.0, lo)
        inner = _expectation(lambda z: (1.0 + gs * z) ** (-theta), pdf, lo, hi)
    else:
        if lo <= 0.0:
            raise ValueError(
                "high_snr_approx needs the law concentrated on positive gains "
                f"(1e-9 quantile is {lo:.4g})"
            )
        inner = _expectation(lambda z: (gs * z) ** (-theta), pdf, lo, hi)
    return -math.log2(inner) / theta


def avg_bep_quadrature(
    law: NormConstants | LinkEnsemble, k: int, params: MetricParams
) -> float:
    """C * E[exp(-rho gamma_s Z)] by quadrature against the chosen law; the
    numerical companion of the closed form, usable with the finite-M law."""
    pdf, quantile = _law_pdf_and_quantile(law, int(k))
    lo = max(0.0, quantile(1e-9))
    hi = quantile(1.0 - 1e-9)
    rho_gs = params.bep_rho * params.gamma_s
    return params.bep_c * _expectation(lambda z: math.exp(-rho_gs * z), pdf, lo, hi)


def avg_bep(consts: NormConstants, k: int, params: MetricParams) -> BepEstimate:
    """Closed-form average BEP C exp(-b_M rho gamma_s) Gamma(k + a_M rho gamma_s)/Gamma(k).

    The conditional model is capped at C, so a raw value above C is clipped
    and flagged ``model_out_of_range``.
    """
    k = int(k)
    c, rho, gs = params.bep_c, params.bep_rho, params.gamma_s
    shift = consts.a_m * rho * gs
    raw = math.exp(
        math.log(c) - consts.b_m * rho * gs + log_gamma(k + shift) - log_gamma(k)
    )
    if raw > c:
        return BepEstimate(value=c, model_out_of_range=True, raw=raw)
    return BepEstimate(value=raw, model_out_of_range=False, raw=raw)
