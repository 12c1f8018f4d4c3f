"""Flat ``section.key = value`` configuration files.

Every key must appear in the shipped ``defaults.cfg``; a user file only
overrides. Values are validated field by field and errors name the key.
"""
from __future__ import annotations

import hashlib
from importlib import resources
from pathlib import Path

import numpy as np

from .channel import ChannelParams
from .geometry import SceneGeometry
from .manifold import CGOptions
from .metrics import NoiseConfig
from .montecarlo import MonteCarloConfig
from .oam import ModePlan, mode_labels
from .pipeline import SCHEMES, Scenario, SchemeConfig


class ConfigError(ValueError):
    pass


def dbm_to_watt(dbm):
    return 10.0 ** ((np.asarray(dbm, float) - 30.0) / 10.0)


def watt_to_dbm(w):
    return 10.0 * np.log10(np.asarray(w, float)) + 30.0


def parse_text(text: str, source="<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        out[key.lower()] = value
    return out


def _default_text() -> str:
    return resources.files("oamris").joinpath("defaults.cfg").read_text()


# --- typed field parsers ---

def _num(kind, lo=None, hi=None, lo_open=False):
    def parse(key, v):
        try:
            x = kind(float(v)) if kind is int and float(v).is_integer() else kind(v)
        except ValueError:
            raise ConfigError(f"{key}: expected {kind.__name__}, got {v!r}") from None
        if lo is not None and (x <= lo if lo_open else x < lo):
            raise ConfigError(f"{key}: must be {'>' if lo_open else '>='} {lo}, got {x}")
        if hi is not None and x > hi:
            raise ConfigError(f"{key}: must be <= {hi}, got {x}")
        return x
    return parse


def _list(item, min_len=1, exact=None):
    def parse(key, v):
        parts = [s.strip() for s in v.split(",") if s.strip()]
        if exact is not None and len(parts) != exact:
            raise ConfigError(f"{key}: expected {exact} values, got {len(parts)}")
        if len(parts) < min_len:
            raise ConfigError(f"{key}: expected at least {min_len} value(s)")
        return tuple(item(key, s) for s in parts)
    return parse


def _choice(options):
    def parse(key, v):
        if v not in options:
            raise ConfigError(f"{key}: expected one of {', '.join(options)}, got {v!r}")
        return v
    return parse


def _bool(key, v):
    low = v.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {v!r}")


def _auto_or(parse):
    def inner(key, v):
        return None if v.lower() == "auto" else parse(key, v)
    return inner


_float = _num(float)
_pos = _num(float, 0, lo_open=True)
_int = _num(int)

SCHEMA = {
    "scene.n": _num(int, 2),
    "scene.r_a": _pos, "scene.r_b": _pos, "scene.r_e": _pos,
    "scene.alpha_a_deg": _float, "scene.alpha_b_deg": _float, "scene.alpha_e_deg": _float,
    "scene.u_b": _list(_float, exact=3),
    "ris.center": _list(_float, exact=3),
    "ris.q_y": _num(int, 1), "ris.q_z": _num(int, 1),
    "ris.d_y": _pos, "ris.d_z": _pos,
    "eve.distance": _pos, "eve.theta_deg": _float, "eve.phi_deg": _float,
    "eve.tilt_x_deg": _float, "eve.tilt_y_deg": _float,
    "channel.wavelength": _pos, "channel.beta": _pos,
    "modes.low": _list(_int), "modes.high": _list(_int, min_len=0),
    "modes.n_s": _num(int, 1), "modes.n_an": _num(int, 0), "modes.combo_index": _num(int, 0),
    "power.p_t_dbm": _float, "power.rho": _num(float, 0, 1, lo_open=True),
    "power.p_th_dbm": _auto_or(_float),
    "noise.sigma_b_dbm": _float, "noise.sigma_e_dbm": _float,
    "solver.ao_tol": _pos, "solver.ao_max_iter": _num(int, 1), "solver.power_rounds": _num(int, 1),
    "solver.theta_max_iter": _num(int, 0), "solver.theta_grad_tol": _pos,
    "solver.armijo_c": _num(float, 0, 1, lo_open=True), "solver.armijo_shrink": _num(float, 0, 1, lo_open=True),
    "solver.initial_step": _auto_or(_pos),
    "run.scheme": _choice(SCHEMES), "run.seed": _num(int, 0), "run.threads": _num(int, 1),
    "sweep.schemes": _list(_choice(SCHEMES)),
    "sweep.z_r": _list(_float), "sweep.q": _list(_num(int, 1)),
    "sweep.p_t_dbm": _list(_float), "sweep.sigma_dbm": _list(_float),
    "ber.trials": _num(int, 1), "ber.snr_db": _list(_float),
    "ber.eve_receiver": _choice(("lmmse", "zf")), "ber.include_an": _bool,
}


class Config:
    """Resolved configuration: raw strings plus typed values."""

    def __init__(self, raw: dict[str, str]):
        unknown = sorted(set(raw) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"unknown key(s): {', '.join(unknown)}")
        missing = sorted(set(SCHEMA) - set(raw))
        if missing:
            raise ConfigError(f"missing key(s): {', '.join(missing)}")
        self.raw = dict(raw)
        self.values = {k: SCHEMA[k](k, v) for k, v in raw.items()}
        # construct once so cross-field errors surface at load time
        try:
            self.scenario()
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None

    def __getitem__(self, key):
        return self.values[key]

    def with_overrides(self, **kv) -> "Config":
        raw = dict(self.raw)
        for k, v in kv.items():
            raw[k.lower()] = str(v)
        return Config(raw)

    def fingerprint(self) -> str:
        # run.threads does not change any result, so it is left out
        body = "\n".join(f"{k}={self.raw[k]}" for k in sorted(self.raw) if k != "run.threads")
        return hashlib.sha256(body.encode()).hexdigest()[:16]

    def geometry(self) -> SceneGeometry:
        v = self.values
        rad = np.deg2rad
        return SceneGeometry(
            N=v["scene.n"], r_A=v["scene.r_a"], r_B=v["scene.r_b"], r_E=v["scene.r_e"],
            alpha_A=rad(v["scene.alpha_a_deg"]), alpha_B=rad(v["scene.alpha_b_deg"]),
            alpha_E=rad(v["scene.alpha_e_deg"]), u_B=v["scene.u_b"], u_R=v["ris.center"],
            D=v["eve.distance"], theta=rad(v["eve.theta_deg"]), varphi=rad(v["eve.phi_deg"]),
            vartheta_x=rad(v["eve.tilt_x_deg"]), vartheta_y=rad(v["eve.tilt_y_deg"]),
            Q_y=v["ris.q_y"], Q_z=v["ris.q_z"], d_y=v["ris.d_y"], d_z=v["ris.d_z"],
        )

    def plan(self) -> ModePlan:
        v = self.values
        plan = ModePlan(low_modes=v["modes.low"], high_modes=v["modes.high"], N_s=v["modes.n_s"],
                        N_z=v["modes.n_an"], combo_index=v["modes.combo_index"])
        if set(plan.low_modes + plan.high_modes) != set(mode_labels(v["scene.n"])):
            raise ConfigError(f"modes.low/modes.high: must partition the modes {sorted(mode_labels(v['scene.n']))}")
        return plan

    def scenario(self) -> Scenario:
        v = self.values
        p_th = v["power.p_th_dbm"]
        return Scenario(
            geometry=self.geometry(),
            channel=ChannelParams(beta=v["channel.beta"], wavelength=v["channel.wavelength"]),
            plan=self.plan(),
            noise=NoiseConfig(float(dbm_to_watt(v["noise.sigma_b_dbm"])),
                              float(dbm_to_watt(v["noise.sigma_e_dbm"]))),
            P_T=float(dbm_to_watt(v["power.p_t_dbm"])),
            rho=v["power.rho"],
            p_th=None if p_th is None else float(dbm_to_watt(p_th)),
        )

    def scheme_config(self, scheme=None) -> SchemeConfig:
        v = self.values
        cg = CGOptions(armijo_c=v["solver.armijo_c"], shrink=v["solver.armijo_shrink"],
                       initial_step=v["solver.initial_step"], grad_tol=v["solver.theta_grad_tol"],
                       max_iter=v["solver.theta_max_iter"])
        return SchemeConfig(scheme=scheme or v["run.scheme"], ao_tol=v["solver.ao_tol"],
                            ao_max_iter=v["solver.ao_max_iter"], seed=v["run.seed"],
                            power_rounds=v["solver.power_rounds"], theta_opts=cg)

    def montecarlo(self, include_an=None) -> MonteCarloConfig:
        v = self.values
        return MonteCarloConfig(trials=v["ber.trials"], snr_grid_db=v["ber.snr_db"], seed=v["run.seed"],
                                eve_receiver=v["ber.eve_receiver"],
                                include_an=v["ber.include_an"] if include_an is None else include_an,
                                threads=v["run.threads"])


def load_config(path=None, overrides=None) -> Config:
    raw = parse_text(_default_text(), "defaults.cfg")
    if path is not None:
        user = parse_text(Path(path).read_text(), str(path))
        unknown = sorted(set(user) - set(SCHEMA))
        if unknown:
            raise ConfigError(f"{path}: unknown key(s): {', '.join(unknown)}")
        raw.update(user)
    if overrides:
        raw.update({k.lower(): str(v) for k, v in overrides.items()})
    return Config(raw)
