#!/usr/bin/env python3
"""Evaluating the Havriliak-Negami relaxation kernel.

The H-N medium's memory kernel is the inverse Laplace transform of
(1 + s^alpha)^(-beta).  It has no elementary closed form, but it is a scaled
three-parameter Mittag-Leffler (Prabhakar) function, which this package
evaluates by a guarded power series.  This script shows:

  * the Debye special case alpha = beta = 1, where the kernel is exactly e^-t,
  * the t -> 0 singularity t^(alpha*beta - 1),
  * exact kernel-against-monomial convolutions, the workhorse oracle behind
    the quadrature and convergence tests.
"""

import math

import numpy as np

from hnmaxwell import PrabhakarParams, hn_kernel, ml3, prabhakar_integral_monomial

print("Debye limit: hn_kernel(1, 1, t) vs exp(-t)")
for t in (0.1, 0.5, 1.0, 2.0):
    k = hn_kernel(1.0, 1.0, t)
    print(f"  t={t:4.1f}   kernel={k:.15f}   exp(-t)={math.exp(-t):.15f}")

print()
print("The series itself generalizes the exponential: ml3(1,1,1; z) = e^z")
params = PrabhakarParams(1.0, 1.0, 1.0)
worst = max(abs(ml3(params, z) - math.exp(z)) / math.exp(z) for z in np.linspace(-2, 2, 41))
print(f"  worst relative deviation on z in [-2, 2]: {worst:.2e}")

print()
print("Kernel values across fractional orders (singular like t^(ab-1) at 0):")
print("  t        (0.5, 0.5)      (0.9, 0.9)      (0.3, 1.0)")
for t in np.geomspace(1e-3, 10.0, 8):
    row = [hn_kernel(a, b, float(t)) for a, b in ((0.5, 0.5), (0.9, 0.9), (0.3, 1.0))]
    print(f"  {t:8.4f} {row[0]:15.6e} {row[1]:15.6e} {row[2]:15.6e}")

print()
print("Exact convolution of the kernel against s^k (closed Prabhakar form):")
for k in range(4):
    val = prabhakar_integral_monomial(0.5, 0.5, k, 1.0)
    print(f"  int_0^1 omega(1-s) s^{k} ds = {val:.12f}")
print()
print("These integrals are the reference values the quadrature weights are")
print("tested against; see 03_quadrature_convergence.py.")
