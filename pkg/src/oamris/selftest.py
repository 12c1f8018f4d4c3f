"""Fast invariant checks run by ``oamris selftest``.

Each check returns ``(ok, detail)``. The whole suite takes a few seconds and
uses small random instances alongside the default scene.
"""
from __future__ import annotations

import time

import numpy as np

from .channel import ChannelSet
from .config import dbm_to_watt, load_config, watt_to_dbm
from .geometry import SceneGeometry
from .manifold import CGOptions, SecrecyObjective, optimize_theta
from .metrics import (NoiseConfig, PowerAllocation, linearize, random_phases, sinr_bob, sinr_eve)
from .oam import ModePlan, build_basis, enumerate_combinations
from .pipeline import Scenario, SchemeConfig, run_rmcg_ao
from .power import PowerSubproblem, solve_p4, update_multipliers


def random_channels(rng, N, Q) -> ChannelSet:
    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return ChannelSet(cn(N, N), cn(Q, N), cn(N, Q), cn(N, N), cn(N, Q))


def check_dft_unitary():
    err = max(np.abs(build_basis(N).F.conj().T @ build_basis(N).F - np.eye(N)).max() for N in (4, 8, 16))
    return err < 1e-12, f"max |F^H F - I| = {err:.2e}"


def check_circulant():
    sc = Scenario()
    F = sc.basis().F
    M = F.conj().T @ sc.channels().H_AB @ F
    off = np.sum(np.abs(M - np.diag(np.diag(M))) ** 2) / np.sum(np.abs(np.diag(M)) ** 2)
    return off < 1e-10, f"off-diagonal / diagonal mass = {off:.2e}"


def check_dual_sinr(seeds=20):
    worst = 0.0
    plan, noise = ModePlan(), NoiseConfig()
    basis = build_basis(8)
    for s in range(seeds):
        rng = np.random.default_rng(s)
        ch = random_channels(rng, 8, 4 if s % 2 else 16)
        theta = random_phases(ch.Q, rng)
        power = PowerAllocation(rng.uniform(0.05, 0.3, 3), 0.9, 1.0)
        linz = linearize(ch, basis, plan, noise)
        gb, ge = linz.sinr(power.p, power.sigma_zz, theta)
        for a, b in ((gb, sinr_bob(ch, basis, plan, power, theta, noise)),
                     (ge, sinr_eve(ch, basis, plan, power, theta, noise))):
            worst = max(worst, float(np.max(np.abs(a - b) / np.abs(b))))
    return worst < 1e-10, f"max relative gap = {worst:.2e}"


def check_gradient(seeds=5, h=1e-6):
    worst = 0.0
    basis = build_basis(8)
    for s in range(seeds):
        rng = np.random.default_rng(100 + s)
        ch = random_channels(rng, 8, 8)
        linz = linearize(ch, basis, ModePlan(), NoiseConfig(1.0, 1.0))
        obj = SecrecyObjective(linz, rng.uniform(0.1, 0.5, 3), 0.03)
        theta = random_phases(8, rng)
        g = obj.egrad(theta)
        fd = np.empty(8, complex)
        for q in range(8):
            e = np.zeros(8)
            e[q] = h
            fd[q] = ((obj.value(theta + e) - obj.value(theta - e))
                     + 1j * (obj.value(theta + 1j * e) - obj.value(theta - 1j * e))) / (2 * h)
        worst = max(worst, float(np.linalg.norm(g - fd) / np.linalg.norm(fd)))
    return worst < 1e-5, f"max relative error = {worst:.2e}"


def check_manifold_run():
    rng = np.random.default_rng(7)
    ch = random_channels(rng, 8, 16)
    linz = linearize(ch, build_basis(8), ModePlan(), NoiseConfig(1.0, 1.0))
    obj = SecrecyObjective(linz, np.array([0.3, 0.3, 0.3]), 0.03)
    dev, tang = [], []

    def watch(state):
        dev.append(np.abs(np.abs(state.theta) - 1).max())
        tang.append(np.abs(np.real(state.grad * np.conj(state.theta))).max())

    res = optimize_theta(obj, random_phases(16, rng), CGOptions(max_iter=50), watch)
    mono = bool(np.all(np.diff(res.trace) <= 1e-12))
    ok = max(dev) < 1e-12 and max(tang) < 1e-9 and mono
    return ok, f"modulus dev {max(dev):.1e}, tangency {max(tang):.1e}, monotone {mono}"


def check_power_grid(n=301):
    rng = np.random.default_rng(3)
    sub = PowerSubproblem(rng.uniform(1, 50, (2, 2)), rng.uniform(0.5, 20, (2, 2)),
                          rng.uniform(0, 2, 2), 1.0, 1e-3)
    t = update_multipliers(sub, np.array([0.3, 0.6]))
    p = solve_p4(sub, t)
    xs = np.linspace(sub.floor, sub.budget - sub.floor, n)
    pts = [(x, y) for x in xs for y in xs if x + y <= sub.budget] + [(x, sub.budget - x) for x in xs]
    best = max(sub.surrogate(np.array(pt), t) for pt in pts)
    gap = (best - sub.surrogate(p, t)) / abs(best)
    return gap < 1e-3, f"relative gap to grid = {gap:.1e}"


def check_index_modulation():
    plan = ModePlan()
    n = len(enumerate_combinations(plan.low_modes, plan.high_modes, plan.N_s, plan.N_z))
    ok = plan.K == 8 and np.log2(plan.K) == 3 and n >= plan.K
    return ok, f"K = {plan.K}, enumerated {n} combinations"


def check_dbm():
    rt = float(dbm_to_watt(watt_to_dbm(1e-5)))
    ok = dbm_to_watt(30) == 1.0 and abs(dbm_to_watt(-20) - 1e-5) < 1e-18 and abs(rt - 1e-5) < 1e-12
    return ok, "30 dBm -> 1 W, -20 dBm -> 1e-5 W"


def check_ao_monotone():
    sc = Scenario(geometry=SceneGeometry(Q_y=3, Q_z=2))
    r = run_rmcg_ao(sc, SchemeConfig(ao_max_iter=20))
    mono = bool(np.all(np.diff(r.sr_trace) >= -1e-6))
    return mono and r.converged, f"{r.iterations} iterations, SR {r.SR:.4f}, monotone {mono}"


def check_default_config():
    cfg = load_config()
    return cfg["scene.n"] == 8 and cfg.scenario().P_T == 1.0, f"fingerprint {cfg.fingerprint()}"


CHECKS = {
    "dft-unitary": check_dft_unitary,
    "circulant-diagonal": check_circulant,
    "dual-sinr": check_dual_sinr,
    "euclidean-gradient": check_gradient,
    "manifold-invariants": check_manifold_run,
    "power-vs-grid": check_power_grid,
    "index-modulation": check_index_modulation,
    "dbm-conversion": check_dbm,
    "ao-monotone": check_ao_monotone,
    "default-config": check_default_config,
}


def run_selftest(verbose=False) -> bool:
    all_ok = True
    for name, fn in CHECKS.items():
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name:22s} {detail}  ({time.perf_counter() - t0:.2f}s)")
    return all_ok
