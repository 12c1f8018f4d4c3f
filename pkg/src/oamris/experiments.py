"""Parameter sweeps behind the command-line experiments.

Each function returns ``(header, rows, runs)`` or a dict of those per scheme,
where ``runs`` are the underlying :class:`RunResult` objects. Sweep points
are independent and may run on a worker pool; row order always follows the
grid.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import Config, ConfigError, dbm_to_watt
from .montecarlo import simulate_ber
from .metrics import NoiseConfig
from .pipeline import run_scheme

RUN_COLUMNS = ["secrecy_rate", "rate_bob", "rate_eve", "iterations"]


def _map(fn, items, threads):
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _run_row(r):
    return [r.SR, r.R_B, r.R_E, r.iterations]


def convergence(cfg: Config):
    r = run_scheme(cfg.scenario(), cfg.scheme_config())
    rows = [[i, sr, rb, re] for i, (sr, rb, re) in enumerate(zip(r.sr_trace, r.rb_trace, r.re_trace))]
    return ["iteration", "secrecy_rate", "rate_bob", "rate_eve"], rows, [r]


def sweep_zr(cfg: Config, threads=1):
    base = cfg.scenario()
    grid = cfg["sweep.z_r"]
    out = {}
    for scheme in cfg["sweep.schemes"]:
        sc_cfg = cfg.scheme_config(scheme)

        def point(z):
            u_R = base.geometry.u_R.copy()
            u_R[2] = z
            return run_scheme(base.replace(geometry=base.geometry.replace(u_R=u_R)), sc_cfg)

        runs = _map(point, grid, threads)
        out[scheme] = (["z_r"] + RUN_COLUMNS, [[z] + _run_row(r) for z, r in zip(grid, runs)], runs)
    return out


def sweep_q(cfg: Config, threads=1):
    """Vary Q = Q_y * Q_z by changing Q_y with Q_z held at its configured value."""
    base = cfg.scenario()
    Q_z = base.geometry.Q_z
    grid = cfg["sweep.q"]
    bad = [q for q in grid if q % Q_z]
    if bad:
        raise ConfigError(f"sweep.q: values {bad} are not multiples of ris.q_z = {Q_z}")
    out = {}
    for scheme in cfg["sweep.schemes"]:
        sc_cfg = cfg.scheme_config(scheme)

        def point(q):
            return run_scheme(base.replace(geometry=base.geometry.replace(Q_y=q // Q_z)), sc_cfg)

        runs = _map(point, grid, threads)
        out[scheme] = (["q"] + RUN_COLUMNS, [[q] + _run_row(r) for q, r in zip(grid, runs)], runs)
    return out


def sweep_power(cfg: Config, threads=1):
    """Secrecy rate versus P_T for each noise level (Bob and Eve noise equal)."""
    base = cfg.scenario()
    sc_cfg = cfg.scheme_config()
    grid = [(s, p) for s in cfg["sweep.sigma_dbm"] for p in cfg["sweep.p_t_dbm"]]

    def point(sp):
        s, p = sp
        n2 = float(dbm_to_watt(s))
        return run_scheme(base.replace(P_T=float(dbm_to_watt(p)), noise=NoiseConfig(n2, n2)), sc_cfg)

    runs = _map(point, grid, threads)
    rows = [[s, p] + _run_row(r) for (s, p), r in zip(grid, runs)]
    return ["sigma_dbm", "p_t_dbm"] + RUN_COLUMNS, rows, runs


def ber(cfg: Config, threads=1):
    """Optimise (p, theta) with the configured scheme, then simulate QPSK BERs."""
    sc = cfg.scenario()
    r = run_scheme(sc, cfg.scheme_config())
    channels = sc.channels()
    if r.theta.size == 0:
        channels = channels.without_ris()
    mc = cfg.montecarlo()
    if threads > 1:
        from dataclasses import replace
        mc = replace(mc, threads=threads)
    curve = simulate_ber(channels, sc.basis(), r.plan, r.power, r.theta, mc)
    return curve, [r]


def format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.10g}"
