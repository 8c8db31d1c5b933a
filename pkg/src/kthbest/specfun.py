"""Special functions used throughout the package.

Everything here is exact (to the configured tolerance); the ``*_asymptotic``
functions are the classical large-argument expansions and exist purely as
cross-checks for the exact routines — they are never a computation path.

All functions accept scalars; ``marcum_q1`` and ``reg_upper_gamma`` also
accept a numpy array for their second argument and then return an array,
which is what grid evaluation and the exact order-statistic oracle need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

__all__ = [
    "Accuracy",
    "DEFAULT_ACCURACY",
    "marcum_q1",
    "marcum_q1_asymptotic",
    "bessel_i0",
    "log_bessel_i0",
    "reg_upper_gamma",
    "log_gamma",
    "exp_integral_e1",
    "exp_integral_e1_scaled",
    "gaussian_q_asymptotic",
]

_EULER_GAMMA = 0.57721566490153286060651209008240243

# Above this product the Poisson-mixture series needs O(alpha*beta) terms and
# the exp-scaled Bessel series is the cheaper, cancellation-free route.
_BESSEL_ROUTE_THRESHOLD = 30.0


@dataclass(frozen=True)
class Accuracy:
    """Series/iteration budget shared by the special-function routines."""

    rel_tol: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self) -> None:
        if not (0.0 < self.rel_tol < 1e-3):
            raise ValueError(f"rel_tol must be in (0, 1e-3), got {self.rel_tol}")
        if self.max_terms < 16:
            raise ValueError(f"max_terms must be >= 16, got {self.max_terms}")


DEFAULT_ACCURACY = Accuracy()


def _check_nonneg_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise ValueError(f"{name} must be a finite nonnegative real, got {value}")
    return value


def marcum_q1(alpha, beta, accuracy: Accuracy = DEFAULT_ACCURACY):
    """First-order Marcum Q function Q1(alpha, beta).

    ``1 - marcum_q1(nu/sigma, sqrt(z)/sigma)`` is the CDF of the two-dof
    non-central chi-square law with LOS amplitude ``nu`` and scale ``sigma``.

    ``alpha`` must be a scalar; ``beta`` may be a scalar or an ndarray.
    Results are in [0, 1], non-increasing in beta and non-decreasing in
    alpha.  Values below ~1e-300 (deep right tail) underflow to 0.
    """
    alpha = _check_nonneg_finite("alpha", alpha)
    beta_arr = np.asarray(beta, dtype=float)
    if not np.all(np.isfinite(beta_arr)) or np.any(beta_arr < 0.0):
        raise ValueError("beta must be finite and nonnegative")
    scalar = beta_arr.ndim == 0
    beta_arr = np.atleast_1d(beta_arr)

    out = np.ones_like(beta_arr)  # Q1(alpha, 0) == 1 exactly
    nonzero = beta_arr > 0.0
    # The mixture series also needs exp(-alpha^2/2) representable.
    series_mask = nonzero & (alpha * beta_arr <= _BESSEL_ROUTE_THRESHOLD) & (alpha * alpha <= 1300.0)
    bessel_mask = nonzero & ~series_mask
    if np.any(series_mask):
        out[series_mask] = _marcum_series(alpha, beta_arr[series_mask], accuracy)
    if np.any(bessel_mask):
        out[bessel_mask] = _marcum_bessel(alpha, beta_arr[bessel_mask], accuracy)
    np.clip(out, 0.0, 1.0, out=out)
    return float(out[0]) if scalar else out


def _marcum_series(alpha: float, beta: np.ndarray, accuracy: Accuracy) -> np.ndarray:
    """Poisson-mixture form: Q1 = sum_n Pois(n; a^2/2) * P(Pois(b^2/2) <= n).

    All terms are positive, so the accumulation is cancellation-free; the
    incomplete-gamma factors are advanced by recurrence.
    """
    s = 0.5 * alpha * alpha
    x = 0.5 * beta * beta
    if s == 0.0:
        return np.exp(-x)

    w = math.exp(-s)  # Poisson(s) weight at n
    pois_x = np.exp(-x)  # Poisson(x) pmf at n
    g = pois_x.copy()  # P(Pois(x) <= n) == Gamma(n+1, x)/n!
    acc = np.zeros_like(x)
    for n in range(accuracy.max_terms):
        acc += w * g
        w_next = w * s / (n + 1)
        # Remaining weight sum bounded geometrically once past the bulk.
        if n + 2 > s:
            ratio = s / (n + 2)
            w_tail = w_next / (1.0 - ratio)
            bound = accuracy.rel_tol * max(float(acc.min()), 5e-324)
            if w_tail <= bound or w_next == 0.0:
                return acc
        w = w_next
        pois_x *= x / (n + 1)
        g += pois_x
    raise ArithmeticError(
        f"marcum_q1 series did not converge within {accuracy.max_terms} terms "
        f"(alpha={alpha})"
    )


def _marcum_bessel(alpha: float, beta: np.ndarray, accuracy: Accuracy) -> np.ndarray:
    """Exp-scaled Bessel series, used when alpha*beta is large.

    For beta > alpha sums Q1 directly; otherwise sums the complementary CDF
    series (which is then < 1/2, so the final subtraction loses no accuracy).
    """
    out = np.empty_like(beta)
    for i, b in enumerate(beta):
        direct = b > alpha
        ratio = (alpha / b) if direct else (b / alpha)
        ab = alpha * b
        front = math.exp(-0.5 * (b - alpha) ** 2)
        total = 0.0
        j0 = 0 if direct else 1
        block = 64
        converged = False
        for start in range(j0, accuracy.max_terms, block):
            js = np.arange(start, start + block)
            terms = ratio**js * _sp.ive(js, ab)
            total += float(terms.sum())
            if terms[-1] <= accuracy.rel_tol * max(total, 1e-300):
                converged = True
                break
        if not converged:
            raise ArithmeticError(
                f"marcum_q1 Bessel series did not converge within "
                f"{accuracy.max_terms} terms (alpha={alpha}, beta={b})"
            )
        out[i] = front * total if direct else 1.0 - front * total
    return out


def marcum_q1_asymptotic(alpha: float, beta: float) -> float:
    """Large-beta expansion Q1 ~ (2*pi*alpha*beta)^(-1/2) exp(-(beta-alpha)^2/2).

    Cross-check only; accurate for beta >> alpha > 0, no accuracy promise
    elsewhere.
    """
    alpha = float(alpha)
    beta = float(beta)
    if not (alpha > 0.0 and beta > 0.0) or not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ValueError("marcum_q1_asymptotic requires alpha > 0 and beta > 0")
    return math.exp(-0.5 * (beta - alpha) ** 2 - 0.5 * math.log(2.0 * math.pi * alpha * beta))


def bessel_i0(x: float) -> float:
    """Modified Bessel function I0(x), x >= 0.  Overflows to inf near x ~ 713."""
    x = _check_nonneg_finite("x", x)
    return float(_sp.i0e(x)) * math.exp(x) if x < 700.0 else math.inf


def log_bessel_i0(x):
    """log I0(x); finite for arbitrarily large x.  Scalar or ndarray."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("x must be finite and nonnegative")
    out = np.log(_sp.i0e(x_arr)) + x_arr
    return float(out) if x_arr.ndim == 0 else out


def reg_upper_gamma(k: int, x):
    """Regularized upper incomplete gamma Gamma(k, x)/Gamma(k), integer k >= 1.

    Evaluated as the exact finite sum exp(-x) * sum_{m<k} x^m/m! with the
    terms formed in the log domain and accumulated relative to the largest
    one.  ``x`` may be a scalar or an ndarray.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or not np.all(np.isfinite(x_arr)):
        raise ValueError("x must be finite and nonnegative")
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)

    if k == 1:
        out = np.exp(-x_arr)
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            logx = np.log(x_arr)  # x == 0 columns are overwritten below
            m = np.arange(k, dtype=float)
            log_terms = m[:, None] * logx[None, :] - _sp.gammaln(m + 1.0)[:, None]
            top = log_terms.max(axis=0)
            out = np.exp(top - x_arr) * np.exp(log_terms - top[None, :]).sum(axis=0)
        out[x_arr == 0.0] = 1.0
    np.clip(out, 0.0, 1.0, out=out)
    return float(out[0]) if scalar else out


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = int_x^inf exp(-t)/t dt, x > 0.

    Underflows to 0 for x beyond ~740; use ``exp_integral_e1_scaled`` in
    tail-sensitive formulas.
    """
    x = _positive("x", x)
    if x < 1.5:
        return _e1_series(x)
    scaled = _e1_scaled_cf(x)
    return math.exp(-x) * scaled if x < 745.0 else 0.0


def exp_integral_e1_scaled(x: float) -> float:
    """exp(x) * E1(x); accurate and overflow-free for x up to 1e6 and beyond.

    Satisfies 1/(x+1) < exp(x)*E1(x) < 1/x for all x > 0.
    """
    x = _positive("x", x)
    if x < 1.5:
        return math.exp(x) * _e1_series(x)
    return _e1_scaled_cf(x)


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x + sum_{n>=1} (-1)^(n+1) x^n / (n * n!)
    total = 0.0
    term = 1.0
    for n in range(1, 500):
        term *= -x / n
        contrib = -term / n
        total += contrib
        if abs(contrib) <= 1e-17 * max(abs(total), 1e-300):
            return total - _EULER_GAMMA - math.log(x)
    raise ArithmeticError(f"E1 series did not converge for x={x}")


def _e1_scaled_cf(x: float) -> float:
    # Continued fraction e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...)))),
    # evaluated by the modified Lentz algorithm.  Converges for x >~ 1.
    tiny = 1e-300
    f = x + 1.0
    c = f
    d = 0.0
    for i in range(1, 1000):
        a_i = -float(i * i)
        b_i = x + 2.0 * i + 1.0
        d = b_i + a_i * d
        if d == 0.0:
            d = tiny
        c = b_i + a_i / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return 1.0 / f
    raise ArithmeticError(f"E1 continued fraction did not converge for x={x}")


def gaussian_q_asymptotic(x: float) -> float:
    """Leading-order tail expansion Q(x) ~ exp(-x^2/2) / (x sqrt(2 pi)).

    Cross-check only; no accuracy promise for small x.
    """
    x = _positive("x", x)
    return math.exp(-0.5 * x * x) / (x * math.sqrt(2.0 * math.pi))


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a finite positive real, got {value}")
    return value
