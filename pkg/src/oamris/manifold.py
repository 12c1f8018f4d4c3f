"""RIS phase optimisation on the complex circle manifold.

Points are unit-modulus vectors, the metric is Re(u^H v), tangent vectors
satisfy Re(v * conj(theta)) = 0, the retraction normalises every entry and
vector transport is projection onto the new tangent space.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .metrics import RisLinearization

LN2 = np.log(2.0)


def inner(u, v) -> float:
    return float(np.real(np.vdot(u, v)))


def project_tangent(theta, v) -> np.ndarray:
    return v - np.real(v * np.conj(theta)) * theta


def retract(v) -> np.ndarray:
    """unt(v): entrywise v / |v|."""
    return v / np.abs(v)


def transport(theta_new, v) -> np.ndarray:
    return project_tangent(theta_new, v)


def _log_ratio_terms(fields, weights, noise):
    """Per-row received powers, totals and interference-plus-noise.

    The diagonal entry of each row is the desired signal.
    """
    power = weights * np.abs(fields) ** 2
    total = power.sum(axis=1) + noise
    interf = total - np.diag(power)
    return power, total, interf


class SecrecyObjective:
    """f(theta) = -(R_B_tilde - R_E) for fixed powers, with its Euclidean gradient.

    The gradient is 2 df/d(conj theta), i.e. the real gradient packed as
    d/dRe + j d/dIm, the convention the tangent projection expects.
    """

    def __init__(self, linz: RisLinearization, p, sigma_zz):
        self.linz = linz
        p = np.asarray(p, float)
        Ns = linz.N_s
        self.w_bob = np.broadcast_to(p, (Ns, Ns))
        an = np.full(linz.zeta.shape[1] - Ns, float(sigma_zz))
        self.w_eve = np.broadcast_to(np.concatenate([p, an]), linz.zeta.shape)
        self.n_evals = 0

    def value(self, theta) -> float:
        self.n_evals += 1
        L = self.linz
        _, tb, ib = _log_ratio_terms(L.bob_fields(theta), self.w_bob, L.sigma_B2)
        _, te, ie = _log_ratio_terms(L.eve_fields(theta), self.w_eve, L.sigma_E2)
        return float(-(np.sum(np.log(tb / ib)) - np.sum(np.log(te / ie))) / LN2)

    def egrad(self, theta) -> np.ndarray:
        L = self.linz
        Ns = L.N_s
        diag = np.eye(Ns, dtype=bool)

        def part(fields, m, w, noise):
            # d total/d conj(theta) = sum_k w_k m_k conj(g_k), same minus the diagonal for interference
            _, tot, intf = _log_ratio_terms(fields, w, noise)
            c = w * np.conj(fields)  # (Ns, K)
            c_int = c.copy()
            c_int[:, :Ns][diag] = 0.0
            return (np.einsum("lk,lkq->q", c / tot[:, None], m)
                    - np.einsum("lk,lkq->q", c_int / intf[:, None], m))

        bob = part(L.bob_fields(theta), L.mu, self.w_bob, L.sigma_B2)
        eve = part(L.eve_fields(theta), L.eta, self.w_eve, L.sigma_E2)
        return 2.0 / LN2 * (eve - bob)

    def rgrad(self, theta) -> np.ndarray:
        return project_tangent(theta, self.egrad(theta))


@dataclass(frozen=True)
class CGOptions:
    armijo_c: float = 1e-4  # iota
    shrink: float = 0.5  # nu
    # beta_{-1}; None scales it to pi / max|grad_0| so the first trial moves
    # the steepest element by about pi before retraction
    initial_step: float | None = None
    max_backtracks: int = 50
    grad_tol: float = 1e-6
    max_iter: int = 200
    restart_every: int | None = None  # defaults to Q


@dataclass
class ManifoldState:
    theta: np.ndarray
    grad: np.ndarray
    xi: np.ndarray
    step: float
    fval: float
    iter: int = 0
    stagnated: bool = False
    accepted: list = field(default_factory=list)  # (t, decrease, iota*t*|grad|^2) per accepted step


def initial_state(objective: SecrecyObjective, theta0, opts: CGOptions = CGOptions()) -> ManifoldState:
    theta = np.asarray(theta0, complex)
    grad = objective.rgrad(theta)
    step = opts.initial_step
    if step is None:
        gmax = float(np.max(np.abs(grad))) if grad.size else 0.0
        step = np.pi / gmax if gmax > 0 else 1.0
    return ManifoldState(theta, grad, -grad, step, objective.value(theta))


def _armijo(objective, state, direction, opts):
    gnorm2 = inner(state.grad, state.grad)
    t = state.step
    for _ in range(opts.max_backtracks + 1):
        cand = retract(state.theta + t * direction)
        fc = objective.value(cand)
        need = opts.armijo_c * t * gnorm2
        if state.fval - fc >= need:
            return cand, fc, t, need
        t *= opts.shrink
    return None


def cg_step(state: ManifoldState, objective: SecrecyObjective, opts: CGOptions = CGOptions()) -> ManifoldState:
    """One conjugate-gradient iteration with Armijo backtracking.

    If the conjugate direction admits no acceptable step within
    ``max_backtracks`` halvings, steepest descent is tried; if that also
    fails the unchanged state is returned with ``stagnated`` set.
    """
    found = _armijo(objective, state, state.xi, opts)
    if found is None:
        found = _armijo(objective, state, -state.grad, opts)
        if found is None:
            return replace(state, stagnated=True)
    theta, fval, step, need = found
    grad = objective.rgrad(theta)

    old_grad = transport(theta, state.grad)
    alpha = inner(grad, grad - old_grad) / inner(state.grad, state.grad)
    restart = opts.restart_every or theta.size
    it = state.iter + 1
    if alpha < 0 or it % restart == 0:
        alpha = 0.0
    xi = -grad + alpha * transport(theta, state.xi)
    if inner(grad, xi) >= 0:
        xi = -grad
    accepted = state.accepted + [(step, state.fval - fval, need)]
    return ManifoldState(theta, grad, xi, step, fval, it, False, accepted)


@dataclass
class ThetaResult:
    theta: np.ndarray
    trace: list
    iterations: int
    grad_norm: float
    stagnated: bool
    state: ManifoldState


def optimize_theta(objective: SecrecyObjective, theta0, opts: CGOptions = CGOptions(),
                   callback=None) -> ThetaResult:
    """Minimise f over the manifold; the f trace is nonincreasing."""
    state = initial_state(objective, theta0, opts)
    trace = [state.fval]
    while state.iter < opts.max_iter and np.sqrt(inner(state.grad, state.grad)) >= opts.grad_tol:
        state = cg_step(state, objective, opts)
        if state.stagnated:
            break
        trace.append(state.fval)
        if callback is not None:
            callback(state)
    return ThetaResult(state.theta, trace, state.iter, float(np.linalg.norm(state.grad)),
                       state.stagnated, state)
