"""SINRs, achievable rates and secrecy rate.

Two independent evaluation routes are provided. The ``sinr_bob`` /
``sinr_eve`` functions form the full effective channels and project them on
the OAM basis. :class:`RisLinearization` precomputes the per-mode direct
terms and per-element RIS terms once, so that every gain is an affine
function ``omega + theta^H mu`` of the phase vector; this is the form the
phase optimiser works with.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .oam import ModePlan, OamBasis, eve_row

UNIT_MODULUS_TOL = 1e-9


@dataclass(frozen=True)
class NoiseConfig:
    sigma_B2: float = 1e-5
    sigma_E2: float = 1e-5

    def __post_init__(self):
        if not (self.sigma_B2 > 0 and self.sigma_E2 > 0):
            raise ValueError("noise variances must be > 0")


@dataclass(frozen=True)
class PowerAllocation:
    """Signal powers, ordered like ``plan.signal_modes``, plus the AN split."""

    p: np.ndarray
    rho: float = 0.9
    P_T: float = 1.0
    p_th: float = 0.0
    N_z: int = 3

    def __post_init__(self):
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if not 0 < self.rho <= 1:
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")
        if self.p.sum() > self.rho * self.P_T + 1e-9:
            raise ValueError("signal powers exceed rho * P_T")
        if np.any(self.p < self.p_th - 1e-12):
            raise ValueError("signal power below floor p_th")

    @property
    def budget(self) -> float:
        return self.rho * self.P_T

    @property
    def sigma_zz(self) -> float:
        return (1 - self.rho) * self.P_T / self.N_z if self.N_z else 0.0

    @classmethod
    def equal(cls, N_s, rho, P_T, N_z, p_th=None) -> "PowerAllocation":
        if p_th is None:
            p_th = default_power_floor(rho, P_T, N_s)
        return cls(np.full(N_s, rho * P_T / N_s), rho, P_T, p_th, N_z)

    def with_p(self, p) -> "PowerAllocation":
        return PowerAllocation(p, self.rho, self.P_T, self.p_th, self.N_z)


def default_power_floor(rho, P_T, N_s) -> float:
    return 1e-3 * rho * P_T / N_s


def check_unit_modulus(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=complex)
    if theta.size and np.max(np.abs(np.abs(theta) - 1)) > UNIT_MODULUS_TOL:
        raise ValueError("RIS phase vector is not unit modulus")
    return theta


def random_phases(Q, rng) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(Q))


# --- full matrix route ---

def bob_gains(channels, basis, plan, theta, noise) -> np.ndarray:
    """a[l, k] = f_l^H H_B f_k / sigma_B for l, k in the signal set."""
    Fs = basis.vectors(plan.signal_modes)
    H = channels.bob_effective(theta)
    return Fs.conj().T @ H @ Fs / np.sqrt(noise.sigma_B2)


def eve_gains(channels, basis, plan, theta, noise) -> np.ndarray:
    """b[l, k] over signal rows l and columns signal modes then AN modes."""
    rows = [eve_row(l, channels.N) for l in plan.signal_modes]
    cols = basis.vectors(plan.signal_modes + plan.an_modes)
    H = channels.eve_effective(theta)
    return H[rows] @ cols / np.sqrt(noise.sigma_E2)


def _sinr_from_gains(g2, p, an_power):
    """SINR per row of ``g2``; the first len(p) columns are signal columns."""
    Ns = len(p)
    received = g2[:, :Ns] * p
    desired = np.diag(received)
    interference = received.sum(axis=1) - desired
    return desired / (interference + an_power + 1.0)


def sinr_bob(channels: ChannelSet, basis: OamBasis, plan: ModePlan, power: PowerAllocation,
             theta, noise: NoiseConfig) -> np.ndarray:
    """Bob's per-mode SINR with AN removed, ordered like ``plan.signal_modes``."""
    theta = check_unit_modulus(theta)
    a2 = np.abs(bob_gains(channels, basis, plan, theta, noise)) ** 2
    return _sinr_from_gains(a2, power.p, 0.0)


def sinr_eve(channels: ChannelSet, basis: OamBasis, plan: ModePlan, power: PowerAllocation,
             theta, noise: NoiseConfig) -> np.ndarray:
    theta = check_unit_modulus(theta)
    b2 = np.abs(eve_gains(channels, basis, plan, theta, noise)) ** 2
    an = power.sigma_zz * b2[:, plan.N_s:].sum(axis=1)
    return _sinr_from_gains(b2, power.p, an)


@dataclass(frozen=True)
class Rates:
    R_B_tilde: float
    R_B: float
    R_E: float

    @property
    def SR(self) -> float:
        return self.R_B - self.R_E

    @property
    def SR_plus(self) -> float:
        return max(self.SR, 0.0)


def rates_and_secrecy(gamma_B, gamma_E, K) -> Rates:
    rb = float(np.sum(np.log2(1 + np.asarray(gamma_B))))
    re = float(np.sum(np.log2(1 + np.asarray(gamma_E))))
    return Rates(rb, rb + float(np.log2(K)), re)


# --- linearised route ---

@dataclass(frozen=True)
class RisLinearization:
    """Affine-in-theta gains for one (channels, plan) pair.

    ``omega[l, k] + theta^H mu[l, k]`` equals ``sigma_B * a[l, k]`` and
    ``zeta[l, k] + theta^H eta[l, k]`` equals ``sigma_E * b[l, k]``, where
    Eve's columns run over the signal modes followed by the AN modes.
    """

    omega: np.ndarray  # (Ns, Ns)
    mu: np.ndarray  # (Ns, Ns, Q)
    zeta: np.ndarray  # (Ns, Ns + Nz)
    eta: np.ndarray  # (Ns, Ns + Nz, Q)
    sigma_B2: float
    sigma_E2: float
    K: int = 1

    @property
    def N_s(self) -> int:
        return self.omega.shape[0]

    @property
    def Q(self) -> int:
        return self.mu.shape[-1]

    def bob_fields(self, theta) -> np.ndarray:
        return self.omega + self.mu @ np.conj(theta)

    def eve_fields(self, theta) -> np.ndarray:
        return self.zeta + self.eta @ np.conj(theta)

    def sinr(self, p, sigma_zz, theta):
        """(gamma_B, gamma_E) in the explicit-noise form."""
        p = np.asarray(p, float)
        Ns = self.N_s
        gb2 = np.abs(self.bob_fields(theta)) ** 2
        ge2 = np.abs(self.eve_fields(theta)) ** 2
        sb = gb2 * p
        se = ge2[:, :Ns] * p
        an = sigma_zz * ge2[:, Ns:].sum(axis=1)
        gamma_b = np.diag(sb) / (sb.sum(axis=1) - np.diag(sb) + self.sigma_B2)
        gamma_e = np.diag(se) / (se.sum(axis=1) - np.diag(se) + an + self.sigma_E2)
        return gamma_b, gamma_e

    def rates(self, p, sigma_zz, theta) -> Rates:
        return rates_and_secrecy(*self.sinr(p, sigma_zz, theta), self.K)

    def power_coefficients(self, theta, sigma_zz):
        """Squared normalised gains (A, B, c) for the power subproblem."""
        Ns = self.N_s
        A = np.abs(self.bob_fields(theta)) ** 2 / self.sigma_B2
        b2 = np.abs(self.eve_fields(theta)) ** 2 / self.sigma_E2
        return A, b2[:, :Ns], sigma_zz * b2[:, Ns:].sum(axis=1)


def linearize(channels: ChannelSet, basis: OamBasis, plan: ModePlan, noise: NoiseConfig) -> RisLinearization:
    Fs = basis.vectors(plan.signal_modes)
    Fall = basis.vectors(plan.signal_modes + plan.an_modes)
    rows = [eve_row(l, channels.N) for l in plan.signal_modes]

    omega = Fs.conj().T @ channels.H_AB @ Fs
    # mu[l, k, q] = (f_l^H H_RB)[q] * (H_AR f_k)[q]
    left_b = Fs.conj().T @ channels.H_RB  # (Ns, Q)
    right = channels.H_AR @ Fall  # (Q, Ns + Nz)
    mu = left_b[:, None, :] * right[:, : plan.N_s].T[None, :, :]

    zeta = channels.H_AE[rows] @ Fall
    left_e = channels.H_RE[rows]  # (Ns, Q)
    eta = left_e[:, None, :] * right.T[None, :, :]
    return RisLinearization(omega, mu, zeta, eta, noise.sigma_B2, noise.sigma_E2, plan.K)
