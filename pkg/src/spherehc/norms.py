"""L^p norms of zonal spherical harmonics and of Hermite polynomials in Gauss space.

All norms carry a log-scale accessor so ratios of astronomically large values
(right-hand sides reach 9^sqrt(d(d+n-1)/n)) never leave log space.  The scaling
prefactor d!/(2 lam)^(d/2) cancels in every ratio, so the scaled Gegenbauer
evaluator is used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .quadrature import IntegralResult, gaussian_truncation_radius, integrate_piecewise

__all__ = [
    "QUADRATURE",
    "CLOSED_FORM",
    "CIRCLE_FORMULA",
    "SphereParams",
    "NormValue",
    "RatioValue",
    "sphere_lp_norm",
    "sphere_l2_norm_closed",
    "gaussian_lp_norm",
    "norm_ratio_sphere",
    "norm_ratio_gaussian",
    "zonal_power_integral",
    "zonal_lp_norm",
]

QUADRATURE = "quadrature"
CLOSED_FORM = "closed-form"
CIRCLE_FORMULA = "circle-formula"

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_ROUNDING = 5e-15


@dataclass(frozen=True)
class SphereParams:
    """The n-sphere S^n in R^(n+1); zonal profiles live on [-1, 1] with lam = (n-1)/2."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"sphere dimension must be >= 1, got {self.n}")

    @property
    def lam(self) -> float:
        return (self.n - 1) / 2


@dataclass(frozen=True)
class NormValue:
    """An L^p norm with provenance.

    ``value`` is exp(log_value) and may overflow to inf for extreme inputs;
    ``log_value`` is always finite.  ``error_estimate`` is relative to value
    (zero for closed forms up to rounding).
    """

    value: float
    p: float
    error_estimate: float
    method: str
    log_value: float
    converged: bool = True


@dataclass(frozen=True)
class RatioValue:
    """A norm ratio ||.||_q / ||.||_p with combined relative error estimate."""

    value: float
    log_value: float
    error_estimate: float
    converged: bool = True


def zonal_power_integral(
    lam: float, d: int, p: float, tol: float, normalized: bool = True
) -> IntegralResult:
    """integral over [-1, 1] of |C_d^(lam)(t)|^p (1 - t^2)^(lam - 1/2) dt, rescaled.

    Returned is the integral of the *scaled* profile |G_d(s)|^p against the
    projected weight on s in (-L, L), L = sqrt(2 lam):  the raw integral equals
    the result times ((2 lam)^(d/2) / d!)^p.  With ``normalized`` the weight
    carries c_lam (probability normalization); without it the bare weight of
    the counterexample inequality is used.  The integrand is assembled in log
    space so no intermediate power overflows.
    """
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    scale = math.sqrt(2.0 * lam)
    log_const = -0.5 * math.log(2.0 * lam)
    if normalized:
        log_const += math.log(specfun.c_lambda(lam))
    wexp = lam - 0.5
    spec = specfun.GegenbauerSpec(lam, d)

    def integrand(s: np.ndarray) -> np.ndarray:
        g = np.asarray(specfun.gegenbauer_eval_scaled(spec, s), dtype=float)
        u = s / scale
        with np.errstate(divide="ignore"):
            log_g = np.where(g == 0.0, -np.inf, np.log(np.abs(g)))
            if wexp == 0.0:
                log_w = np.full_like(s, log_const)
            else:
                log_w = wexp * np.log1p(-u * u) + log_const
        return np.exp(p * log_g + log_w)

    cuts = [r * scale for r in specfun.gegenbauer_roots(spec).roots]
    return integrate_piecewise(integrand, cuts, (-scale, scale), tol)


def _norm_from_integral(res: IntegralResult, p: float, log_prefactor: float, method: str) -> NormValue:
    if not res.value > 0 or not math.isfinite(res.value):
        raise ArithmeticError(f"norm integral degenerated to {res.value}")
    log_norm = log_prefactor + math.log(res.value) / p
    rel = res.error_estimate / res.value / p + _ROUNDING
    try:
        value = math.exp(log_norm)
    except OverflowError:
        value = math.inf
    return NormValue(value, p, rel, method, log_norm, res.converged)


def sphere_lp_norm(
    params: SphereParams,
    d: int,
    p: float,
    tol: float = 1e-12,
    circle_convention: str | None = None,
) -> NormValue:
    """L^p norm of the zonal harmonic Y_d(xi) = C_d^(lam)(xi . e1) on S^n.

    Computed as (integral of |C_d|^p against the Gegenbauer weight)^(1/p) with
    the integrand split at the polynomial's roots.  n = 1 degenerates the
    weight (lam = 0) and is routed to a direct trigonometric formula; the
    paper fixes no degree normalization there, so the caller must opt in with
    ``circle_convention="cosine"`` (profile cos(d theta)).
    """
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if params.n == 1:
        return _circle_lp_norm(d, p, tol, circle_convention)
    if d == 0:
        return NormValue(1.0, p, 0.0, CLOSED_FORM, 0.0)
    lam = params.lam
    res = zonal_power_integral(lam, d, p, tol)
    prefactor = 0.5 * d * math.log(2.0 * lam) - specfun.log_gamma(d + 1.0)
    return _norm_from_integral(res, p, prefactor, QUADRATURE)


def _circle_lp_norm(d: int, p: float, tol: float, convention: str | None) -> NormValue:
    if convention != "cosine":
        raise ValueError(
            "norms on S^1 need an explicit convention: pass circle_convention='cosine' "
            "for the degree-d zonal profile cos(d theta)"
        )
    if d == 0:
        return NormValue(1.0, p, 0.0, CLOSED_FORM, 0.0)

    # mean of |cos|^p over a full period; independent of d >= 1
    def integrand(v: np.ndarray) -> np.ndarray:
        return np.abs(np.cos(v)) ** p / math.pi

    res = integrate_piecewise(integrand, [0.5 * math.pi], (0.0, math.pi), tol)
    return _norm_from_integral(res, p, 0.0, CIRCLE_FORMULA)


def sphere_l2_norm_closed(params: SphereParams, d: int) -> NormValue:
    """Closed-form ||Y_d||_2 from ||Y_d||_2^2 = (n-1) / (d (2d + n - 1) B(n-1, d)).

    Note the returned value is the norm itself; square it to compare with the
    familiar identity.  d = 0 is rejected (the formula has d in a denominator;
    the degree-0 norm is 1 by convention).
    """
    n = params.n
    if n < 2:
        raise ValueError(f"closed form needs n >= 2, got {n}")
    if d < 1:
        raise ValueError("closed form needs d >= 1 (degree-0 norm is 1 by convention)")
    log_sq = (
        math.log(n - 1.0)
        - math.log(d)
        - math.log(2.0 * d + n - 1.0)
        - specfun.log_beta(n - 1.0, float(d))
    )
    return NormValue(math.exp(0.5 * log_sq), 2.0, _ROUNDING, CLOSED_FORM, 0.5 * log_sq)


def gaussian_lp_norm(d: int, p: float, tol: float = 1e-12) -> NormValue:
    """||h_d||_{L^p(R, dgamma)} with Hermite-root breakpoints.

    The integration domain is truncated by the polynomial-growth tail bound
    with growth degree p*d, and the integrand is assembled in log space from
    the rescaled Hermite recurrence, so large degrees do not overflow.
    """
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if d == 0:
        return NormValue(1.0, p, 0.0, CLOSED_FORM, 0.0)
    growth = math.ceil(p * d)
    radius = gaussian_truncation_radius(growth, tol)
    spec = specfun.HermiteSpec(d)

    def integrand(y: np.ndarray) -> np.ndarray:
        _, log_h = specfun.hermite_log_abs(spec, y)
        return np.exp(p * log_h - 0.5 * y * y - _LOG_SQRT_2PI)

    cuts = [r for r in specfun.hermite_roots(spec).roots if -radius < r < radius]
    res = integrate_piecewise(integrand, cuts, (-radius, radius), tol)
    tail = math.exp(growth * math.log1p(radius) - 0.5 * radius * radius)
    res = IntegralResult(res.value, res.error_estimate + tail, res.subintervals_used, res.converged)
    return _norm_from_integral(res, p, 0.0, QUADRATURE)


def _ratio(nq: NormValue, np_: NormValue) -> RatioValue:
    log_ratio = nq.log_value - np_.log_value
    return RatioValue(
        math.exp(log_ratio),
        log_ratio,
        nq.error_estimate + np_.error_estimate,
        nq.converged and np_.converged,
    )


def norm_ratio_sphere(
    params: SphereParams,
    d: int,
    p: float,
    q: float,
    tol: float = 1e-12,
    circle_convention: str | None = None,
) -> RatioValue:
    """||Y_d||_q / ||Y_d||_p on S^n, computed as exp of the log-norm difference."""
    if not 1 <= p <= q:
        raise ValueError(f"need 1 <= p <= q, got ({p}, {q})")
    if d == 0 or p == q:
        return RatioValue(1.0, 0.0, 0.0)
    return _ratio(
        sphere_lp_norm(params, d, q, tol, circle_convention),
        sphere_lp_norm(params, d, p, tol, circle_convention),
    )


def norm_ratio_gaussian(d: int, p: float, q: float, tol: float = 1e-12) -> RatioValue:
    """||h_d||_q / ||h_d||_p under the standard Gaussian measure."""
    if not 1 <= p <= q:
        raise ValueError(f"need 1 <= p <= q, got ({p}, {q})")
    if d == 0 or p == q:
        return RatioValue(1.0, 0.0, 0.0)
    return _ratio(gaussian_lp_norm(d, q, tol), gaussian_lp_norm(d, p, tol))


def zonal_lp_norm(params: SphereParams, coeffs, p: float, tol: float = 1e-12) -> NormValue:
    """||sum_k a_k Y_k||_p on S^n (n >= 2) by quadrature of the zonal profile."""
    if params.n < 2:
        raise ValueError(f"zonal quadrature needs n >= 2, got {params.n}")
    if p < 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    lam = params.lam
    wexp = lam - 0.5
    log_c = math.log(specfun.c_lambda(lam))
    coeffs = np.asarray(coeffs, dtype=float)

    def integrand(t: np.ndarray) -> np.ndarray:
        u = np.asarray(specfun.gegenbauer_series(lam, coeffs, t), dtype=float)
        if wexp == 0.0:
            log_w = np.full_like(t, log_c)
        else:
            with np.errstate(divide="ignore"):
                log_w = wexp * np.log1p(-t * t) + log_c
        return np.abs(u) ** p * np.exp(log_w)

    res = integrate_piecewise(integrand, [], (-1.0, 1.0), tol)
    return _norm_from_integral(res, p, 0.0, QUADRATURE)
