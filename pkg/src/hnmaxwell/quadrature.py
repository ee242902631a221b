"""Convolution-quadrature weight generation for the Havriliak-Negami kernel.

Two families are provided:

* ``cm2_weights`` - the completely-monotone second-order weights.  Their
  generating function is

      w(z) = [1 + ((1-z)/tau)^alpha * (c*(1 - d*z))^(1-alpha)]^(-beta),
      c = (2-alpha)/(2-2*alpha),  d = alpha/(2-alpha),

  whose Taylor coefficients give a nonnegative, completely monotonic weight
  sequence while retaining second-order quadrature accuracy.

* ``bdf_cq_weights`` - classical CQ built on BDF-1/BDF-2 generating
  polynomials, w(z) = (1 + (delta(z)/tau)^alpha)^(-beta).  BDF-2 weights are
  second order but lose complete monotonicity; they exist here as the
  counterexample baseline.

Coefficients are extracted by truncated-series composition (Miller
recurrence); an independent FFT/Cauchy-integral oracle lives in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

import numpy as np

from .series import TruncatedSeries, binom_series, series_mul, series_pow

__all__ = [
    "CQWeights",
    "CM2Constants",
    "cm2_weights",
    "bdf_cq_weights",
    "delta_consistency_residual",
    "SCHEMES",
]

SCHEMES = ("cm2", "bdf1", "bdf2")


@dataclass(frozen=True)
class CQWeights:
    """A quadrature weight sequence w[0..N] with its provenance.

    The discrete convolution  sum_{k=0..n} w[n-k] * u(t_k)  approximates
    int_0^{t_n} hn_kernel(alpha, beta, t_n - s) u(s) ds  on the uniform grid
    t_k = k * tau.
    """

    scheme: str
    alpha: float
    beta: float
    tau: float
    weights: np.ndarray

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}, expected one of {SCHEMES}")
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    @property
    def order(self) -> int:
        return self.weights.size - 1


@dataclass(frozen=True)
class CM2Constants:
    """Constants of the completely-monotone second-order generating function."""

    c: float
    d: float
    gamma0: float
    gamma1: float

    @classmethod
    def from_alpha(cls, alpha: float) -> "CM2Constants":
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie strictly in (0, 1), got {alpha}")
        c = (2.0 - alpha) / (2.0 - 2.0 * alpha)
        d = alpha / (2.0 - alpha)
        return cls(c=c, d=d, gamma0=-c, gamma1=alpha / (2.0 - 2.0 * alpha))


def cm2_weights(alpha: float, beta: float, tau: float, n: int) -> CQWeights:
    """Completely-monotone second-order quadrature weights w[0..n].

    Requires 0 < alpha < 1 (alpha = 1 has no finite constants; route that
    case to ``bdf_cq_weights`` order 1).  beta = 1 is accepted for the
    Cole-Cole special case; 0 < beta < 1 is the generic range.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    consts = CM2Constants.from_alpha(alpha)
    prefactor = tau ** (-alpha) * consts.c ** (1.0 - alpha)
    b = series_mul(binom_series(alpha, 1.0, n), binom_series(1.0 - alpha, consts.d, n))
    w = series_pow(b.scale(prefactor).add_scalar(1.0), -beta)
    return CQWeights(scheme="cm2", alpha=alpha, beta=beta, tau=tau, weights=w.coeffs)


def bdf_cq_weights(order: int, alpha: float, beta: float, tau: float, n: int) -> CQWeights:
    """Classical CQ weights from the BDF-1 or BDF-2 generating polynomial."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not (0.0 < alpha <= 1.0 and 0.0 < beta <= 1.0):
        raise ValueError(f"fractional orders must lie in (0, 1], got alpha={alpha}, beta={beta}")
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    delta = np.zeros(n + 1)
    if order == 1:
        poly = [1.0, -1.0]
    else:
        # (1-z) + (1-z)^2/2 = 3/2 - 2z + z^2/2
        poly = [1.5, -2.0, 0.5]
    m = min(len(poly), n + 1)
    delta[:m] = poly[:m]
    delta_over_tau = TruncatedSeries(delta / tau)
    inner = series_pow(delta_over_tau, alpha).add_scalar(1.0)
    w = series_pow(inner, -beta)
    scheme = "bdf1" if order == 1 else "bdf2"
    return CQWeights(scheme=scheme, alpha=alpha, beta=beta, tau=tau, weights=w.coeffs)


def generate_weights(scheme: str, alpha: float, beta: float, tau: float, n: int) -> CQWeights:
    """Dispatch on the scheme name ("cm2", "bdf1", "bdf2")."""
    if scheme == "cm2":
        return cm2_weights(alpha, beta, tau, n)
    if scheme == "bdf1":
        return bdf_cq_weights(1, alpha, beta, tau, n)
    if scheme == "bdf2":
        return bdf_cq_weights(2, alpha, beta, tau, n)
    raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")


def delta_consistency_residual(alpha: float, tau: float) -> float:
    """Residual r(tau) - 1 of the second-order consistency condition.

    r(tau) = (1 - e^-tau)/tau * (c*(1 - d*e^-tau))^((1-alpha)/alpha) must
    equal 1 + O(tau^2); the returned residual decays quadratically in tau.
    """
    consts = CM2Constants.from_alpha(alpha)
    z = math.exp(-tau)
    r = (1.0 - z) / tau * (consts.c * (1.0 - consts.d * z)) ** ((1.0 - alpha) / alpha)
    return r - 1.0
