"""Signal power allocation for a fixed RIS phase vector.

The secrecy objective is a difference of log terms. Each awkward log is
replaced by its variational form ``-ln x = max_t (-t x + ln t + 1)``, which
gives a surrogate that is concave in the powers for fixed multipliers and has
closed-form multipliers for fixed powers. Alternating the two updates is a
minorise-maximise scheme, so the true objective never decreases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LN2 = np.log(2.0)


class InfeasibleBudget(ValueError):
    pass


@dataclass(frozen=True)
class AuxMultipliers:
    t_B: np.ndarray
    t_E: np.ndarray


@dataclass(frozen=True)
class PowerSubproblem:
    """Row ``l`` of ``A`` holds |a_{l,k}|^2 over signal modes k (same for ``B``).

    ``c[l]`` is the AN power Eve's row ``l`` collects, normalised by its noise.
    """

    A: np.ndarray
    B: np.ndarray
    c: np.ndarray
    budget: float
    floor: float

    def __post_init__(self):
        object.__setattr__(self, "A", np.asarray(self.A, float))
        object.__setattr__(self, "B", np.asarray(self.B, float))
        c = np.broadcast_to(np.asarray(self.c, float), (self.A.shape[0],)).copy()
        object.__setattr__(self, "c", c)
        if self.floor < 0:
            raise ValueError("power floor must be >= 0")
        if self.A.shape[0] * self.floor > self.budget * (1 + 1e-12):
            raise InfeasibleBudget(f"{self.A.shape[0]} modes x floor {self.floor} exceeds budget {self.budget}")

    @property
    def N_s(self) -> int:
        return self.A.shape[0]

    @property
    def A_minus(self) -> np.ndarray:
        return self.A - np.diag(np.diag(self.A))

    @property
    def B_minus(self) -> np.ndarray:
        return self.B - np.diag(np.diag(self.B))

    def secrecy_bits(self, p) -> float:
        """R_B_tilde - R_E as a function of the signal powers."""
        p = np.asarray(p, float)
        num_b, den_b = 1 + self.A @ p, 1 + self.A_minus @ p
        num_e, den_e = 1 + self.B @ p + self.c, 1 + self.B_minus @ p + self.c
        return float(np.sum(np.log(num_b / den_b) - np.log(num_e / den_e)) / LN2)

    def phi_B(self, p, t_B) -> np.ndarray:
        p = np.asarray(p, float)
        return np.log1p(self.A @ p) - t_B * (1 + self.A_minus @ p) + np.log(t_B) + 1

    def phi_E(self, p, t_E) -> np.ndarray:
        p = np.asarray(p, float)
        return t_E * (1 + self.B @ p + self.c) - np.log(1 + self.B_minus @ p + self.c) - np.log(t_E) - 1

    def surrogate(self, p, t: AuxMultipliers) -> float:
        """Lower bound (in nats) on ln2 * (R_B_tilde - R_E), tight at t = t_opt(p)."""
        return float(np.sum(self.phi_B(p, t.t_B)) - np.sum(self.phi_E(p, t.t_E)))

    def surrogate_grad(self, p, t: AuxMultipliers) -> np.ndarray:
        p = np.asarray(p, float)
        g = self.A.T @ (1 / (1 + self.A @ p)) - self.A_minus.T @ t.t_B
        g -= self.B.T @ t.t_E
        g += self.B_minus.T @ (1 / (1 + self.B_minus @ p + self.c))
        return g


def update_multipliers(sub: PowerSubproblem, p) -> AuxMultipliers:
    p = np.asarray(p, float)
    return AuxMultipliers(t_B=1 / (1 + sub.A_minus @ p), t_E=1 / (1 + sub.B @ p + sub.c))


def project_capped_floor(v, budget, floor, iters=100) -> np.ndarray:
    """Euclidean projection onto {sum(p) <= budget, p >= floor}.

    Shift by the floor, clip at zero, and if the cap is violated find the
    dual shift by bisection, finished with an exact solve on the active set.
    """
    y = np.asarray(v, float) - floor
    cap = budget - floor * y.size
    x = np.maximum(y, 0.0)
    if x.sum() <= cap:
        return x + floor
    lo, hi = 0.0, float(np.max(y))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.maximum(y - mid, 0.0).sum() > cap:
            lo = mid
        else:
            hi = mid
    active = y > hi
    if active.any():
        tau = (y[active].sum() - cap) / active.sum()
        x = np.maximum(y - tau, 0.0)
    else:
        x = np.maximum(y - hi, 0.0)
    return x + floor


def projected_gradient_norm(sub, p, t) -> float:
    g = sub.surrogate_grad(p, t)
    return float(np.linalg.norm(project_capped_floor(p + g, sub.budget, sub.floor) - p))


def solve_p4(sub: PowerSubproblem, t: AuxMultipliers, p0=None, tol=1e-7, max_iter=20000):
    """Maximise the concave surrogate over the capped, floored power set.

    Projected gradient ascent with Barzilai-Borwein trial steps and
    backtracking on the projection arc. Starting from ``p0`` the surrogate
    value never decreases, which keeps the outer alternation monotone.
    """
    n = sub.N_s
    p = np.full(n, sub.budget / n) if p0 is None else np.asarray(p0, float)
    p = project_capped_floor(p, sub.budget, sub.floor)
    val = sub.surrogate(p, t)
    g = sub.surrogate_grad(p, t)
    step = 1.0 / max(1.0, float(np.max(np.abs(g))))
    for _ in range(max_iter):
        if np.linalg.norm(project_capped_floor(p + g, sub.budget, sub.floor) - p) < tol:
            break
        s = step
        while True:
            q = project_capped_floor(p + s * g, sub.budget, sub.floor)
            d = q - p
            new_val = sub.surrogate(q, t)
            if new_val >= val + 1e-4 * (g @ d) or s < 1e-20:
                break
            s *= 0.5
        if new_val < val:
            break
        g_new = sub.surrogate_grad(q, t)
        y = g_new - g
        dy = d @ y
        step = float(-(d @ d) / dy) if dy < 0 else 2 * s
        step = min(max(step, 1e-12), 1e12)
        p, val, g = q, new_val, g_new
    return p


def optimize_power(sub: PowerSubproblem, p0, tol=1e-6, max_rounds=100):
    """Alternate multiplier and power updates; returns (p, secrecy trace in bits)."""
    p = project_capped_floor(np.asarray(p0, float), sub.budget, sub.floor)
    trace = [sub.secrecy_bits(p)]
    for _ in range(max_rounds):
        t = update_multipliers(sub, p)
        p = solve_p4(sub, t, p)
        trace.append(sub.secrecy_bits(p))
        if abs(trace[-1] - trace[-2]) < tol:
            break
    return p, trace
