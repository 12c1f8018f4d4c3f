"""Alternating optimisation of powers and RIS phases, plus baseline schemes."""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelParams, ChannelSet, build_channels
from .geometry import SceneGeometry
from .manifold import CGOptions, SecrecyObjective, optimize_theta
from .metrics import (NoiseConfig, PowerAllocation, RisLinearization, default_power_floor,
                      linearize, random_phases)
from .oam import ModePlan, OamBasis, build_basis
from .power import PowerSubproblem, solve_p4, update_multipliers

SCHEMES = ("proposed", "equal-power", "no-an", "random-phase", "no-ris")


@dataclass(frozen=True)
class Scenario:
    """Everything that fixes the channels and the power budget (powers in watts)."""

    geometry: SceneGeometry = field(default_factory=SceneGeometry)
    channel: ChannelParams = field(default_factory=ChannelParams)
    plan: ModePlan = field(default_factory=ModePlan)
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    P_T: float = 1.0
    rho: float = 0.9
    p_th: float | None = None

    def replace(self, **changes) -> "Scenario":
        return replace(self, **changes)

    def power_floor(self, plan=None, rho=None) -> float:
        plan = plan or self.plan
        rho = self.rho if rho is None else rho
        if self.p_th is not None:
            return self.p_th
        return default_power_floor(rho, self.P_T, plan.N_s)

    def channels(self) -> ChannelSet:
        return build_channels(self.geometry, self.channel)

    def basis(self) -> OamBasis:
        return build_basis(self.geometry)


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str = "proposed"
    ao_tol: float = 1e-4
    ao_max_iter: int = 50
    seed: int = 0
    power_rounds: int = 1  # multiplier/P4 rounds per AO iteration
    theta_opts: CGOptions = field(default_factory=CGOptions)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if not self.ao_tol > 0 or self.ao_max_iter < 1:
            raise ValueError("ao_tol must be > 0 and ao_max_iter >= 1")


@dataclass
class RunResult:
    scheme: str
    sr_trace: list
    rb_trace: list
    re_trace: list
    p: np.ndarray
    theta: np.ndarray
    gamma_B: np.ndarray
    gamma_E: np.ndarray
    R_B: float
    R_E: float
    iterations: int
    converged: bool
    stagnated: bool
    wall_time: float
    plan: ModePlan
    power: PowerAllocation

    @property
    def SR(self) -> float:
        return self.R_B - self.R_E


def _alternate(linz: RisLinearization, power: PowerAllocation, theta, cfg: SchemeConfig,
               optimize_p=True, optimize_theta_=True, scheme="proposed", plan=None):
    t0 = time.perf_counter()
    p = power.p.copy()
    szz = power.sigma_zz
    theta = np.asarray(theta, complex)

    rates = linz.rates(p, szz, theta)
    sr, rb, re = [rates.SR], [rates.R_B], [rates.R_E]
    stagnated = converged = False
    it = 0
    for it in range(1, cfg.ao_max_iter + 1):
        if optimize_p:
            A, B, c = linz.power_coefficients(theta, szz)
            sub = PowerSubproblem(A, B, c, power.budget, power.p_th)
            for _ in range(cfg.power_rounds):
                p = solve_p4(sub, update_multipliers(sub, p), p)
        if optimize_theta_ and theta.size:
            res = optimize_theta(SecrecyObjective(linz, p, szz), theta, cfg.theta_opts)
            theta = res.theta
            stagnated |= res.stagnated
        rates = linz.rates(p, szz, theta)
        sr.append(rates.SR)
        rb.append(rates.R_B)
        re.append(rates.R_E)
        if abs(sr[-1] - sr[-2]) < cfg.ao_tol:
            converged = True
            break

    gb, ge = linz.sinr(p, szz, theta)
    return RunResult(scheme, sr, rb, re, p, theta, gb, ge, rates.R_B, rates.R_E, it, converged,
                     stagnated, time.perf_counter() - t0, plan, power.with_p(p))


def run_rmcg_ao(scenario: Scenario, cfg: SchemeConfig = SchemeConfig(), channels=None) -> RunResult:
    """Jointly optimise signal powers and RIS phases for the scenario's mode plan.

    Starts from an equal power split and all-ones phases. Each iteration
    refreshes the multipliers, solves the concave power problem, then runs
    the manifold CG on the phases, so the secrecy rate never decreases.
    """
    channels = scenario.channels() if channels is None else channels
    plan = scenario.plan
    linz = linearize(channels, scenario.basis(), plan, scenario.noise)
    power = PowerAllocation.equal(plan.N_s, scenario.rho, scenario.P_T, plan.N_z,
                                  scenario.power_floor())
    return _alternate(linz, power, np.ones(channels.Q, complex), cfg, plan=plan, scheme=cfg.scheme)


def run_baseline(scheme: str, scenario: Scenario, cfg: SchemeConfig = SchemeConfig(), channels=None) -> RunResult:
    """Run one of the comparison schemes.

    equal-power   powers fixed at rho P_T / N_s, phases optimised
    no-an         every mode carries data (rho = 1, no AN, K = 1), both optimised
    random-phase  seeded uniform phases, powers optimised
    no-ris        RIS removed, powers optimised
    """
    cfg = replace(cfg, scheme=scheme)
    if scheme == "proposed":
        return run_rmcg_ao(scenario, cfg, channels)
    channels = scenario.channels() if channels is None else channels
    basis = scenario.basis()
    plan, rho = scenario.plan, scenario.rho
    theta = np.ones(channels.Q, complex)
    opt_p = opt_theta = True

    if scheme == "equal-power":
        opt_p = False
    elif scheme == "no-an":
        plan, rho = ModePlan.all_signal(channels.N), 1.0
    elif scheme == "random-phase":
        theta = random_phases(channels.Q, np.random.default_rng(cfg.seed))
        opt_theta = False
    elif scheme == "no-ris":
        channels = channels.without_ris()
        theta = np.ones(0, complex)
        opt_theta = False

    linz = linearize(channels, basis, plan, scenario.noise)
    power = PowerAllocation.equal(plan.N_s, rho, scenario.P_T, plan.N_z,
                                  scenario.power_floor(plan, rho))
    return _alternate(linz, power, theta, cfg, opt_p, opt_theta, scheme, plan)


def run_scheme(scenario: Scenario, cfg: SchemeConfig) -> RunResult:
    return run_baseline(cfg.scheme, scenario, cfg)


def random_eve_scenario(scenario: Scenario, rng, phi_range=(np.pi / 40, np.pi / 8)) -> Scenario:
    """Same scenario with Eve's direction drawn at random (distance unchanged)."""
    theta = rng.uniform(0, 2 * np.pi)
    varphi = rng.uniform(*phi_range)
    return scenario.replace(geometry=scenario.geometry.replace(theta=theta, varphi=varphi))
