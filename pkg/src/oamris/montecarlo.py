"""Symbol-level QPSK simulation of Bob's OAM receiver and a MIMO eavesdropper.

Bob decomposes his array output with the DFT, removes the known AN, rescales
each signal mode by its own gain and slices. Eve does not know the OAM basis
or the mode sets: she linearly equalises her antenna-domain channel, slices
every stream, and her errors are counted on the streams paired with the
signal modes.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet
from .metrics import PowerAllocation
from .oam import ModePlan, OamBasis, eve_row

CHUNK = 8192  # trials per RNG stream; results do not depend on thread count


@dataclass(frozen=True)
class MonteCarloConfig:
    trials: int = 100_000
    snr_grid_db: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)
    seed: int = 0
    eve_receiver: str = "lmmse"
    include_an: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if len(self.snr_grid_db) == 0:
            raise ValueError("SNR grid must be nonempty")
        if self.eve_receiver not in ("lmmse", "zf"):
            raise ValueError(f"unknown Eve receiver {self.eve_receiver!r}")


@dataclass
class BerCurve:
    snr_db: np.ndarray
    bob_errors: np.ndarray
    eve_errors: np.ndarray
    bits: np.ndarray
    trials: int
    extra: dict = field(default_factory=dict)

    @property
    def ber_bob(self) -> np.ndarray:
        return self.bob_errors / self.bits

    @property
    def ber_eve(self) -> np.ndarray:
        return self.eve_errors / self.bits

    def ci(self, which="eve", z=1.96):
        """Normal-approximation binomial 95% interval (low, high)."""
        ber = self.ber_eve if which == "eve" else self.ber_bob
        half = z * np.sqrt(np.maximum(ber * (1 - ber), 0.0) / self.bits)
        return np.clip(ber - half, 0, 1), np.clip(ber + half, 0, 1)

    def to_csv(self, path, comments=()):
        with open(path, "w", newline="") as fh:
            for c in comments:
                fh.write(f"# {c}\n")
            w = csv.writer(fh)
            w.writerow(["snr_db", "ber_bob", "ber_eve", "ci_low", "ci_high", "trials",
                        "bob_ci_low", "bob_ci_high"])
            lo, hi = self.ci("eve")
            blo, bhi = self.ci("bob")
            for i, s in enumerate(self.snr_db):
                w.writerow([f"{s:g}", f"{self.ber_bob[i]:.8g}", f"{self.ber_eve[i]:.8g}",
                            f"{lo[i]:.8g}", f"{hi[i]:.8g}", self.trials,
                            f"{blo[i]:.8g}", f"{bhi[i]:.8g}"])


def qpsk_modulate(bits) -> np.ndarray:
    """Gray-mapped unit-energy QPSK; bits has a trailing axis of length 2."""
    return ((1 - 2 * bits[..., 0]) + 1j * (1 - 2 * bits[..., 1])) / np.sqrt(2)


def qpsk_demodulate(symbols) -> np.ndarray:
    return np.stack([symbols.real < 0, symbols.imag < 0], axis=-1).astype(np.int8)


def count_bit_errors(tx_bits, rx_bits) -> int:
    return int(np.count_nonzero(tx_bits != rx_bits))


def complex_normal(rng, shape, var=1.0) -> np.ndarray:
    return np.sqrt(var / 2) * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def noise_for_snr(G, Fs, p, snr_db) -> float:
    """Per-antenna noise variance giving the requested desired-signal SNR over the array."""
    desired = float(np.sum(p * np.sum(np.abs(G @ Fs) ** 2, axis=0)))
    return desired / (G.shape[0] * 10 ** (snr_db / 10))


def equalizer(G, noise_var, signal_var, kind="lmmse") -> np.ndarray:
    N = G.shape[1]
    GH = G.conj().T
    if kind == "zf":
        return np.linalg.pinv(G)
    return np.linalg.solve(GH @ G + (noise_var / signal_var) * np.eye(N), GH)


class _Link:
    """Precomputed per-run quantities shared by all trials."""

    def __init__(self, channels, basis, plan, power, theta, include_an):
        self.N = channels.N
        self.cols_s = basis.columns(plan.signal_modes)
        self.cols_z = basis.columns(plan.an_modes)
        self.F = basis.F
        self.p = np.asarray(power.p, float)
        self.szz = power.sigma_zz if include_an else 0.0
        self.Gb = channels.bob_effective(theta)
        self.Ge = channels.eve_effective(theta)
        self.Fs = self.F[:, self.cols_s]
        # Bob's mode-domain channel and per-mode compensation gains
        self.Hb_modes = self.F.conj().T @ self.Gb @ self.F
        self.gain = np.diag(self.Hb_modes)[self.cols_s]
        self.eve_rows = np.array([eve_row(l, self.N) for l in plan.signal_modes])
        self.tx_power = self.p.sum() + len(self.cols_z) * self.szz
        # Eve's prior per antenna comes from the nominal budget, so toggling AN
        # leaves her receiver unchanged
        self.eve_prior = power.P_T / self.N

    def transmit(self, rng, n):
        bits = rng.integers(0, 2, size=(n, len(self.cols_s), 2), dtype=np.int8)
        s = np.zeros((n, self.N), complex)
        s[:, self.cols_s] = np.sqrt(self.p) * qpsk_modulate(bits)
        z = np.zeros((n, self.N), complex)
        if self.szz > 0 and len(self.cols_z):
            z[:, self.cols_z] = complex_normal(rng, (n, len(self.cols_z)), self.szz)
        x = (s + z) @ self.F.T
        return bits, z, x


def _chunk(link: _Link, rng, n, sb2, se2, W):
    bits, z, x = link.transmit(rng, n)
    nb = complex_normal(rng, (n, link.N), sb2)
    ne = complex_normal(rng, (n, link.N), se2)

    yb = x @ link.Gb.T + nb
    yb_modes = yb @ link.F.conj() - z @ link.Hb_modes.T
    bob_bits = qpsk_demodulate(yb_modes[:, link.cols_s] / link.gain)

    ye = x @ link.Ge.T + ne
    xe = ye @ W.T
    eve_bits = qpsk_demodulate(xe[:, link.eve_rows])
    return count_bit_errors(bits, bob_bits), count_bit_errors(bits, eve_bits)


def simulate_ber(channels: ChannelSet, basis: OamBasis, plan: ModePlan, power: PowerAllocation,
                 theta, mc: MonteCarloConfig = MonteCarloConfig()) -> BerCurve:
    """Bit-error rates of Bob and Eve over the SNR grid.

    The grid value sets the received desired-signal SNR over each receiver's
    array (noise variance scaled accordingly), so Bob and Eve are compared at
    equal received SNR. Trials are split into fixed-size chunks with their
    own RNG streams spawned from ``mc.seed``.
    """
    link = _Link(channels, basis, plan, power, np.asarray(theta, complex), mc.include_an)
    snr = np.asarray(mc.snr_grid_db, float)
    sizes = [CHUNK] * (mc.trials // CHUNK) + ([mc.trials % CHUNK] if mc.trials % CHUNK else [])
    root = np.random.SeedSequence(mc.seed)
    streams = root.spawn(len(snr))

    bob_err = np.zeros(len(snr), dtype=np.int64)
    eve_err = np.zeros(len(snr), dtype=np.int64)
    for i, s in enumerate(snr):
        sb2 = noise_for_snr(link.Gb, link.Fs, link.p, s)
        se2 = noise_for_snr(link.Ge, link.Fs, link.p, s)
        W = equalizer(link.Ge, se2, link.eve_prior, mc.eve_receiver)
        seeds = streams[i].spawn(len(sizes))

        def work(j):
            return _chunk(link, np.random.default_rng(seeds[j]), sizes[j], sb2, se2, W)

        if mc.threads > 1:
            with ThreadPoolExecutor(mc.threads) as pool:
                results = list(pool.map(work, range(len(sizes))))
        else:
            results = [work(j) for j in range(len(sizes))]
        bob_err[i] = sum(r[0] for r in results)
        eve_err[i] = sum(r[1] for r in results)

    bits = np.full(len(snr), mc.trials * plan.N_s * 2, dtype=np.int64)
    return BerCurve(snr, bob_err, eve_err, bits, mc.trials)


def transmit_power(channels, basis, plan, power, theta, trials=10_000, seed=0, include_an=True) -> float:
    """Empirical mean of |x|^2 over ``trials`` transmit vectors."""
    link = _Link(channels, basis, plan, power, np.asarray(theta, complex), include_an)
    _, _, x = link.transmit(np.random.default_rng(seed), trials)
    return float(np.mean(np.sum(np.abs(x) ** 2, axis=1)))
