"""Energy-decay time stepping for Maxwell's equations in a Havriliak-Negami
medium.

The fields advance with midpoint (Crank-Nicolson) differencing in E and H
while the polarization P is closed by the discrete convolution

    (P^n, phi) = delta_eps * sum_{k=0}^n w_{n-k} (E^k, phi) + (g3(t_n), phi),

with quadrature weights w from :mod:`hnmaxwell.quadrature`.  Eliminating H
and P from the step leaves one symmetric positive definite solve per step,

    A e^m = rhs,   A = ((eps_inf + delta_eps*w0)/tau) M_E + (tau/4) C^T M_H^{-1} C,

after which H follows explicitly and P is recovered from the convolution.
With completely monotonic weights and zero sources the discrete energy

    E^n = eps_inf ||E^n||^2 + ||H^n||^2 + delta_eps * sum_{k<=n} w_{n-k} ||E^k||^2

is nonincreasing for any step size.  The level-0 polarization is taken from
the n = 0 convolution relation (it vanishes whenever E^0 = 0 and g3(0) = 0),
which is what makes the decay inequality hold already at the first step.

Source terms g1 (Ampere), g2 (Faraday) enter as endpoint averages
(g(t_m) + g(t_{m-1}))/2; the constitutive source g3 enters at t_m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .fem import (
    AssembledOperators,
    FieldVectors,
    MaxwellMesh,
    ScalarField,
    VectorField,
    assemble,
    assemble_cell_load,
    assemble_edge_load,
    interpolate_E,
    interpolate_H,
    l2_error,
)
from .prabhakar import prabhakar_integral_monomial
from .quadrature import CQWeights, generate_weights

__all__ = [
    "HNParams",
    "SourceSet",
    "StepperState",
    "EnergyTrace",
    "ErrorReport",
    "SolveError",
    "make_step_operator",
    "init_state",
    "step",
    "energy",
    "energy_components",
    "manufactured_sources",
    "exact_E",
    "exact_P",
    "exact_H",
    "decay_initial_E",
    "decay_initial_H",
    "run_energy",
    "run_convergence",
    "observed_rates",
    "DIRECT_SOLVER_DOF_LIMIT",
]

DIRECT_SOLVER_DOF_LIMIT = 200_000
SOLVER_RTOL = 1e-12


class SolveError(RuntimeError):
    """Linear solve failed to reach the required relative residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class HNParams:
    """Physical parameters of the dispersive medium.

    delta_eps = 0 switches dispersion off entirely (plain Crank-Nicolson
    Maxwell), which serves as a conservation regression oracle.
    """

    eps_inf: float
    delta_eps: float
    alpha: float
    beta: float

    def __post_init__(self):
        if self.eps_inf < 1.0:
            raise ValueError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if self.delta_eps < 0.0:
            raise ValueError(f"delta_eps must be >= 0, got {self.delta_eps}")
        if not (0.0 < self.alpha <= 1.0 and 0.0 < self.beta <= 1.0):
            raise ValueError(
                f"fractional orders must lie in (0, 1], got alpha={self.alpha}, beta={self.beta}"
            )


@dataclass(frozen=True)
class SourceSet:
    """Source closures for the three equations; None means identically zero."""

    g1: VectorField | None = None
    g2: ScalarField | None = None
    g3: VectorField | None = None

    @classmethod
    def zero(cls) -> "SourceSet":
        return cls()

    @property
    def is_zero(self) -> bool:
        return self.g1 is None and self.g2 is None and self.g3 is None


class StepOperator:
    """Factorized solver for the per-step SPD system on the free edge dofs."""

    def __init__(self, ops: AssembledOperators, params: HNParams, tau: float, w0: float):
        if w0 <= 0.0:
            raise ValueError(f"leading weight w0 must be positive, got {w0}")
        inv_mh = sp.diags(1.0 / ops.m_h_diag)
        self.curlcurl = (ops.c.T @ inv_mh @ ops.c).tocsr()
        self.matrix = (
            ((params.eps_inf + params.delta_eps * w0) / tau) * ops.m_e
            + 0.25 * tau * self.curlcurl
        ).tocsc()
        self.tau = tau
        self._n = self.matrix.shape[0]
        self._direct = self._n <= DIRECT_SOLVER_DOF_LIMIT
        self._lu = spla.splu(self.matrix) if (self._direct and self._n > 0) else None
        self._mass_lu = None
        self._ops = ops

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self._n == 0:
            return np.zeros(0)
        if self._direct:
            x = self._lu.solve(rhs)
            x = self._refine(x, rhs)
        else:
            precond = sp.diags(1.0 / self.matrix.diagonal())
            x, info = spla.cg(self.matrix, rhs, rtol=SOLVER_RTOL, maxiter=20 * self._n, M=precond)
            if info != 0:
                raise SolveError(
                    f"CG did not converge (info={info})", residual=self._residual(x, rhs)
                )
        res = self._residual(x, rhs)
        if res > SOLVER_RTOL:
            raise SolveError(f"solver residual {res:.3e} exceeds {SOLVER_RTOL}", residual=res)
        return x

    def solve_mass(self, rhs: np.ndarray) -> np.ndarray:
        """Apply the inverse of the reduced edge mass matrix."""
        if self._n == 0:
            return np.zeros(0)
        if self._mass_lu is None:
            self._mass_lu = spla.splu(self._ops.m_e.tocsc())
        return self._mass_lu.solve(rhs)

    def _refine(self, x: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        if self._residual(x, rhs) > SOLVER_RTOL:
            x = x + self._lu.solve(rhs - self.matrix @ x)
        return x

    def _residual(self, x: np.ndarray, rhs: np.ndarray) -> float:
        scale = np.linalg.norm(rhs)
        if scale == 0.0:
            return float(np.linalg.norm(self.matrix @ x))
        return float(np.linalg.norm(self.matrix @ x - rhs) / scale)


def make_step_operator(
    ops: AssembledOperators, params: HNParams, tau: float, w0: float
) -> StepOperator:
    return StepOperator(ops, params, tau, w0)


@dataclass
class StepperState:
    """Mutable run state: fields at level n plus the whole E history.

    History rows 0..n of the preallocated arrays are valid; the convolution
    and the energy are always formed from the stored rows and the weight
    table, never incrementally drifted.
    """

    tau: float
    weights: CQWeights
    n: int
    fields: FieldVectors
    e_history: np.ndarray
    me_free_history: np.ndarray
    e_norm_sq_history: np.ndarray

    @property
    def t(self) -> float:
        return self.n * self.tau

    @property
    def capacity(self) -> int:
        return self.e_history.shape[0] - 1


def init_state(
    ops: AssembledOperators,
    params: HNParams,
    weights: CQWeights,
    e0: np.ndarray,
    h0: np.ndarray,
    n_steps: int,
    sources: SourceSet = SourceSet.zero(),
    operator: StepOperator | None = None,
) -> StepperState:
    """Set up level 0: interpolated E/H and the convolution-consistent P."""
    mesh = ops.mesh
    if weights.order < n_steps:
        raise ValueError(f"need at least {n_steps + 1} weights, got {weights.order + 1}")
    e0 = np.asarray(e0, dtype=float).copy()
    e0[mesh.boundary_edges] = 0.0
    fields = FieldVectors(e=e0, p=np.zeros(mesh.n_edges), h=np.asarray(h0, dtype=float).copy())
    w0 = weights.weights[0]
    fields.p[ops.free_edges] = params.delta_eps * w0 * e0[ops.free_edges]
    if sources.g3 is not None:
        if operator is None:
            operator = make_step_operator(ops, params, weights.tau, w0)
        load = assemble_edge_load(mesh, sources.g3, 0.0)
        fields.p[ops.free_edges] += operator.solve_mass(load[ops.free_edges])

    state = StepperState(
        tau=weights.tau,
        weights=weights,
        n=0,
        fields=fields,
        e_history=np.zeros((n_steps + 1, mesh.n_edges)),
        me_free_history=np.zeros((n_steps + 1, ops.free_edges.size)),
        e_norm_sq_history=np.zeros(n_steps + 1),
    )
    state.e_history[0] = e0
    me = ops.m_e_full @ e0
    state.me_free_history[0] = me[ops.free_edges]
    state.e_norm_sq_history[0] = e0 @ me
    return state


def step(
    state: StepperState,
    ops: AssembledOperators,
    params: HNParams,
    sources: SourceSet = SourceSet.zero(),
    operator: StepOperator | None = None,
    _load_cache: dict | None = None,
) -> StepperState:
    """Advance the state from level n to n+1 in place (and return it)."""
    m = state.n + 1
    if m > state.capacity:
        raise ValueError(f"state capacity {state.capacity} exhausted at step {m}")
    tau = state.tau
    w = state.weights.weights
    free = ops.free_edges
    mesh = ops.mesh
    if operator is None:
        operator = make_step_operator(ops, params, tau, w[0])
    cache = _load_cache if _load_cache is not None else {}

    t_m, t_prev = m * tau, (m - 1) * tau
    e_prev_free = state.fields.e[free]
    h_prev = state.fields.h

    rhs = (params.eps_inf / tau) * state.me_free_history[m - 1]
    # history increment of the discrete convolution: sum_{k<m} (w_{m-k} - w_{m-1-k}) M_E e^k
    if params.delta_eps != 0.0:
        dw = w[m:0:-1] - w[m - 1 :: -1]  # (w_{m-k} - w_{m-1-k}) for k = 0..m-1
        rhs -= (params.delta_eps / tau) * (dw @ state.me_free_history[:m])
    rhs += ops.c.T @ h_prev
    rhs -= 0.25 * tau * (operator.curlcurl @ e_prev_free)

    b2 = None
    if sources.g2 is not None:
        b2 = 0.5 * (
            _cached_load(cache, "g2", t_m, lambda: assemble_cell_load(mesh, sources.g2, t_m))
            + _cached_load(cache, "g2", t_prev, lambda: assemble_cell_load(mesh, sources.g2, t_prev))
        )
        rhs += 0.5 * tau * (ops.c.T @ (b2 / ops.m_h_diag))
    if sources.g1 is not None:
        b1 = 0.5 * (
            _cached_load(cache, "g1", t_m, lambda: assemble_edge_load(mesh, sources.g1, t_m))
            + _cached_load(cache, "g1", t_prev, lambda: assemble_edge_load(mesh, sources.g1, t_prev))
        )
        rhs += b1[free]
    if sources.g3 is not None:
        g3_m = _cached_load(cache, "g3", t_m, lambda: assemble_edge_load(mesh, sources.g3, t_m))
        g3_prev = _cached_load(
            cache, "g3", t_prev, lambda: assemble_edge_load(mesh, sources.g3, t_prev)
        )
        rhs -= (g3_m[free] - g3_prev[free]) / tau

    e_free = operator.solve(rhs)
    e_full = np.zeros(mesh.n_edges)
    e_full[free] = e_free

    h_new = h_prev - 0.5 * tau * (ops.c_full @ (e_full + state.fields.e)) / ops.m_h_diag
    if b2 is not None:
        h_new += tau * b2 / ops.m_h_diag

    state.e_history[m] = e_full
    me = ops.m_e_full @ e_full
    state.me_free_history[m] = me[free]
    state.e_norm_sq_history[m] = e_full @ me

    p_full = np.zeros(mesh.n_edges)
    p_full[free] = params.delta_eps * (w[m::-1] @ state.e_history[: m + 1, free])
    if sources.g3 is not None:
        p_full[free] += operator.solve_mass(g3_m[free])

    state.fields = FieldVectors(e=e_full, p=p_full, h=h_new)
    state.n = m
    return state


def _cached_load(cache: dict, tag: str, t: float, build: Callable[[], np.ndarray]) -> np.ndarray:
    key = (tag, round(t, 14))
    if key not in cache:
        cache[key] = build()
        # keep the two newest time levels per tag
        stale = sorted(k for k in cache if k[0] == tag)[:-2]
        for k in stale:
            del cache[k]
    return cache[key]


@dataclass(frozen=True)
class EnergyTrace:
    """Discrete energy and its three components per time level."""

    n: np.ndarray
    t: np.ndarray
    total: np.ndarray
    term_e: np.ndarray
    term_h: np.ndarray
    term_hist: np.ndarray


def energy_components(
    state: StepperState, ops: AssembledOperators, params: HNParams
) -> tuple[float, float, float]:
    """(eps_inf ||E^n||^2, ||H^n||^2, delta_eps sum_k w_{n-k} ||E^k||^2)."""
    n = state.n
    w = state.weights.weights
    term_e = params.eps_inf * state.e_norm_sq_history[n]
    term_h = float(state.fields.h @ (ops.m_h_diag * state.fields.h))
    term_hist = params.delta_eps * float(w[n::-1] @ state.e_norm_sq_history[: n + 1])
    return float(term_e), term_h, term_hist


def energy(state: StepperState, ops: AssembledOperators, params: HNParams) -> float:
    """Discrete energy at the current level."""
    return sum(energy_components(state, ops, params))


# --- manufactured solution -------------------------------------------------
#
# E = t^3 * Ehat,  P = (1 - e^-t) * Phat,  H = e^-t (x^3+1)(y^3+1)  with
# Ehat = ((x^2+1) sin(pi y), sin(pi x)(y - 1/2)),
# Phat = ((x^2+1) y(y-1),    x(x-1)(y - 1/2)).
# All fields have vanishing tangential trace on the unit square.


def _e_hat(x, y):
    return (x**2 + 1.0) * np.sin(np.pi * y), np.sin(np.pi * x) * (y - 0.5)


def _p_hat(x, y):
    return (x**2 + 1.0) * y * (y - 1.0), x * (x - 1.0) * (y - 0.5)


def exact_E(x, y, t):
    ex, ey = _e_hat(x, y)
    return t**3 * ex, t**3 * ey


def exact_P(x, y, t):
    px, py = _p_hat(x, y)
    f = 1.0 - math.exp(-t)
    return f * px, f * py


def exact_H(x, y, t):
    return math.exp(-t) * (x**3 + 1.0) * (y**3 + 1.0)


def decay_initial_E(x, y, t=0.0):
    return _e_hat(x, y)


def decay_initial_H(x, y, t=0.0):
    return (x**3 + 1.0) * (y**3 + 1.0)


def manufactured_sources(params: HNParams) -> SourceSet:
    """Sources that make the manufactured fields solve the dispersive system.

    g1 = eps_inf dE/dt + dP/dt - curl H,  g2 = dH/dt + curl E, and
    g3 = P - delta_eps * (kernel * E), where the kernel convolution of the
    t^3 time factor has the exact monomial form from
    :func:`hnmaxwell.prabhakar.prabhakar_integral_monomial`.
    """
    eps_inf, delta_eps = params.eps_inf, params.delta_eps
    alpha, beta = params.alpha, params.beta
    conv_cache: dict[float, float] = {}

    def conv_t3(t: float) -> float:
        if t not in conv_cache:
            conv_cache[t] = prabhakar_integral_monomial(alpha, beta, 3, t)
        return conv_cache[t]

    def g1(x, y, t):
        ex, ey = _e_hat(x, y)
        px, py = _p_hat(x, y)
        decay = math.exp(-t)
        curl_h_x = decay * 3.0 * y**2 * (x**3 + 1.0)
        curl_h_y = -decay * 3.0 * x**2 * (y**3 + 1.0)
        gx = eps_inf * 3.0 * t**2 * ex + decay * px - curl_h_x
        gy = eps_inf * 3.0 * t**2 * ey + decay * py - curl_h_y
        return gx, gy

    def g2(x, y, t):
        curl_e = t**3 * np.pi * (np.cos(np.pi * x) * (y - 0.5) - (x**2 + 1.0) * np.cos(np.pi * y))
        return -math.exp(-t) * (x**3 + 1.0) * (y**3 + 1.0) + curl_e

    def g3(x, y, t):
        ex, ey = _e_hat(x, y)
        px, py = _p_hat(x, y)
        f = 1.0 - math.exp(-t)
        conv = delta_eps * conv_t3(t)
        return f * px - conv * ex, f * py - conv * ey

    return SourceSet(g1=g1, g2=g2, g3=g3)


# --- experiment drivers ------------------------------------------------------


def run_energy(
    mesh: MaxwellMesh,
    params: HNParams,
    tau: float,
    t_final: float = 1.0,
    scheme: str = "cm2",
    ops: AssembledOperators | None = None,
) -> EnergyTrace:
    """Zero-source evolution from the standing initial data; returns the
    per-level discrete energy decomposition."""
    n_steps = _step_count(t_final, tau)
    if ops is None:
        ops = assemble(mesh)
    weights = generate_weights(scheme, params.alpha, params.beta, tau, n_steps)
    operator = make_step_operator(ops, params, tau, weights.weights[0])
    state = init_state(
        ops,
        params,
        weights,
        interpolate_E(mesh, decay_initial_E),
        interpolate_H(mesh, decay_initial_H),
        n_steps,
    )
    totals = np.zeros(n_steps + 1)
    comps = np.zeros((n_steps + 1, 3))
    comps[0] = energy_components(state, ops, params)
    totals[0] = comps[0].sum()
    for m in range(1, n_steps + 1):
        step(state, ops, params, operator=operator)
        comps[m] = energy_components(state, ops, params)
        totals[m] = comps[m].sum()
    levels = np.arange(n_steps + 1)
    return EnergyTrace(
        n=levels,
        t=levels * tau,
        total=totals,
        term_e=comps[:, 0],
        term_h=comps[:, 1],
        term_hist=comps[:, 2],
    )


@dataclass(frozen=True)
class ErrorReport:
    """Max-over-time L2 errors per field and the observed reduction rates."""

    taus: np.ndarray
    err_e: np.ndarray
    err_h: np.ndarray
    err_p: np.ndarray
    rate_e: np.ndarray
    rate_h: np.ndarray
    rate_p: np.ndarray
    mode: str
    tau_ref: float | None = None


def observed_rates(errors: Sequence[tuple[float, float]]) -> list[float]:
    """log2 error-reduction rates for a tau-halving error sequence."""
    taus = [tau for tau, _ in errors]
    errs = [err for _, err in errors]
    _check_halving(taus)
    if any(e <= 0.0 for e in errs):
        raise ValueError("errors must be positive to form rates")
    return [math.log2(errs[i - 1] / errs[i]) for i in range(1, len(errs))]


def run_convergence(
    mesh: MaxwellMesh,
    params: HNParams,
    tau_list: Sequence[float],
    mode: str = "vs_reference",
    tau_ref: float | None = None,
    t_final: float = 1.0,
    scheme: str = "cm2",
    ops: AssembledOperators | None = None,
) -> ErrorReport:
    """Temporal-refinement study on the manufactured solution.

    "vs_exact" measures against the analytic fields (contains the spatial
    floor of the lowest-order elements); "vs_reference" measures against a
    fine-step trajectory on the same mesh, isolating the time error.
    """
    taus = sorted(float(t) for t in tau_list)[::-1]
    _check_halving(taus)
    if mode not in ("vs_exact", "vs_reference"):
        raise ValueError(f"mode must be 'vs_exact' or 'vs_reference', got {mode!r}")
    if ops is None:
        ops = assemble(mesh)
    sources = manufactured_sources(params)

    reference = None
    tau_keep = None
    if mode == "vs_reference":
        if tau_ref is None:
            tau_ref = min(taus) / 8.0
        stride = min(taus) / tau_ref
        if abs(stride - round(stride)) > 1e-9 or round(stride) < 1:
            raise ValueError(f"tau_ref={tau_ref} must divide the smallest tau={min(taus)}")
        # reference snapshots are kept at multiples of the smallest tau
        tau_keep = min(taus)
        reference = _run_trajectory(
            ops, params, sources, tau_ref, t_final, scheme, keep_every=round(stride)
        )

    errs = {"e": [], "h": [], "p": []}
    for tau in taus:
        traj = _run_trajectory(ops, params, sources, tau, t_final, scheme, keep_every=1)
        if mode == "vs_exact":
            e_err = max(
                l2_error(mesh, e, exact_E, n * tau, "edge") for n, (e, _, _) in traj.items()
            )
            h_err = max(
                l2_error(mesh, h, exact_H, n * tau, "cell") for n, (_, h, _) in traj.items()
            )
            p_err = max(
                l2_error(mesh, p, exact_P, n * tau, "edge") for n, (_, _, p) in traj.items()
            )
        else:
            ratio = round(tau / tau_keep)
            e_err = h_err = p_err = 0.0
            for n, (e, h, p) in traj.items():
                re, rh, rp = reference[n * ratio]
                e_err = max(e_err, ops.edge_norm(e - re))
                h_err = max(h_err, ops.cell_norm(h - rh))
                p_err = max(p_err, ops.edge_norm(p - rp))
        errs["e"].append(e_err)
        errs["h"].append(h_err)
        errs["p"].append(p_err)

    rates = {
        key: np.array(observed_rates(list(zip(taus, vals)))) for key, vals in errs.items()
    }
    return ErrorReport(
        taus=np.array(taus),
        err_e=np.array(errs["e"]),
        err_h=np.array(errs["h"]),
        err_p=np.array(errs["p"]),
        rate_e=rates["e"],
        rate_h=rates["h"],
        rate_p=rates["p"],
        mode=mode,
        tau_ref=tau_ref,
    )


def _run_trajectory(
    ops: AssembledOperators,
    params: HNParams,
    sources: SourceSet,
    tau: float,
    t_final: float,
    scheme: str,
    keep_every: int,
) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Run the scheme and return {kept level -> (e, h, p)} snapshots."""
    mesh = ops.mesh
    n_steps = _step_count(t_final, tau)
    weights = generate_weights(scheme, params.alpha, params.beta, tau, n_steps)
    operator = make_step_operator(ops, params, tau, weights.weights[0])
    state = init_state(
        ops,
        params,
        weights,
        interpolate_E(mesh, exact_E, 0.0),
        interpolate_H(mesh, exact_H, 0.0),
        n_steps,
        sources=sources,
        operator=operator,
    )
    cache: dict = {}
    kept = {0: _snapshot(state)}
    for m in range(1, n_steps + 1):
        step(state, ops, params, sources, operator=operator, _load_cache=cache)
        if m % keep_every == 0:
            kept[m // keep_every] = _snapshot(state)
    return kept


def _snapshot(state: StepperState):
    return state.fields.e.copy(), state.fields.h.copy(), state.fields.p.copy()


def _step_count(t_final: float, tau: float) -> int:
    n = t_final / tau
    if abs(n - round(n)) > 1e-9 or round(n) < 1:
        raise ValueError(f"final time {t_final} must be an integer multiple of tau={tau}")
    return round(n)


def _check_halving(taus: Sequence[float]) -> None:
    if len(taus) < 1:
        raise ValueError("need at least one step size")
    for a, b in zip(taus, taus[1:]):
        if not math.isclose(a, 2.0 * b, rel_tol=1e-9):
            raise ValueError(f"step sizes must halve: {a} followed by {b}")
