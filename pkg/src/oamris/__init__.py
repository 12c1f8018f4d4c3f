"""Secrecy-rate optimisation for RIS-assisted OAM links with artificial noise."""

from .channel import ChannelParams, ChannelSet, build_channels
from .config import ConfigError, load_config
from .geometry import SceneGeometry
from .manifold import CGOptions, SecrecyObjective, optimize_theta
from .metrics import NoiseConfig, PowerAllocation, linearize, rates_and_secrecy
from .montecarlo import MonteCarloConfig, simulate_ber
from .oam import ModePlan, build_basis
from .pipeline import Scenario, SchemeConfig, run_baseline, run_rmcg_ao, run_scheme
from .power import PowerSubproblem, optimize_power

__all__ = [
    "CGOptions", "ChannelParams", "ChannelSet", "ConfigError", "ModePlan", "MonteCarloConfig",
    "NoiseConfig", "PowerAllocation", "PowerSubproblem", "Scenario", "SceneGeometry",
    "SchemeConfig", "SecrecyObjective", "build_basis", "build_channels", "linearize",
    "load_config", "optimize_power", "optimize_theta", "rates_and_secrecy", "run_baseline",
    "run_rmcg_ao", "run_scheme", "simulate_ber",
]
