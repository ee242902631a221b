#!/usr/bin/env python3
"""Completely monotone quadrature weights, and why BDF-2 fails.

A weight sequence is completely monotonic when every alternating forward
difference (I - S)^k w_j is nonnegative.  That discrete shape mirrors the
complete monotonicity of the H-N kernel itself and is exactly what makes
the Maxwell stepper's energy decay unconditionally.

The second-order weights built here keep the property; standard BDF-2
convolution quadrature, although also second-order accurate, does not: its
higher differences go negative on a growing set of (alpha, beta) pairs.
"""

from hnmaxwell import bdf_cq_weights, cm2_weights, index_k

TAU, J = 0.01, 1000

print(f"index_k = min_j (I-S)^k w_j over j <= {J} - k,  tau = {TAU}")
print()
print("Completely monotone second-order weights:")
print("  (alpha, beta)    k=0          k=1          k=2          k=3")
for alpha, beta in ((0.1, 0.9), (0.5, 0.5), (0.9, 0.1), (0.9, 0.9)):
    w = cm2_weights(alpha, beta, TAU, J).weights
    idx = [index_k(w, k, J, compensated=True) for k in range(4)]
    print(f"  ({alpha:3.1f}, {beta:3.1f})  " + "  ".join(f"{v:11.3e}" for v in idx))
print("  -> every index nonnegative (to roundoff): the sequence is CM.")

print()
print("BDF-2 convolution quadrature on the same parameters:")
print("  (alpha, beta)    k=0          k=1          k=2          k=3")
for alpha, beta in ((0.1, 0.9), (0.5, 0.5), (0.9, 0.1), (0.9, 0.9)):
    w = bdf_cq_weights(2, alpha, beta, TAU, J).weights
    idx = [index_k(w, k, J, compensated=True) for k in range(4)]
    print(f"  ({alpha:3.1f}, {beta:3.1f})  " + "  ".join(f"{v:11.3e}" for v in idx))
print("  -> negative first/second/third differences appear as alpha, beta")
print("     grow: no second-order linear multistep generating function can")
print("     keep complete monotonicity.")

print()
print("First few weights side by side at alpha = beta = 0.9:")
cm = cm2_weights(0.9, 0.9, TAU, 6).weights
bdf = bdf_cq_weights(2, 0.9, 0.9, TAU, 6).weights
print("  j     cm2            bdf2")
for j in range(7):
    print(f"  {j}  {cm[j]:13.6e}  {bdf[j]:13.6e}")
print()
print("At these orders the BDF-2 defect is visible immediately: w_1 > w_0,")
print("so even plain monotonicity fails.  At milder parameters the defect")
print("hides in higher differences or far down the sequence, which is why")
print("the full grid sweep matters:  hnmx cm-check --scheme bdf2 --tau 0.01")
