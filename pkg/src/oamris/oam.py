"""OAM mode basis and index-modulation mode plans."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .geometry import SceneGeometry


class ModePlanError(ValueError):
    pass


def mode_labels(N: int) -> list[int]:
    """Mode labels in column order: column c carries label c if c <= N//2, else c - N."""
    return [c if c <= N // 2 else c - N for c in range(N)]


@dataclass(frozen=True)
class OamBasis:
    F: np.ndarray
    mode_order: tuple[int, ...]

    def column(self, l: int) -> int:
        try:
            return self.mode_order.index(l)
        except ValueError:
            raise ModePlanError(f"mode {l} not in {self.mode_order}") from None

    def columns(self, modes) -> np.ndarray:
        return np.array([self.column(l) for l in modes], dtype=int)

    def vectors(self, modes) -> np.ndarray:
        """N x len(modes) matrix of the requested mode vectors."""
        return self.F[:, self.columns(modes)]


def build_basis(g: SceneGeometry | int, alpha: float = 0.0) -> OamBasis:
    """IDFT basis with f_l[n] = exp(j l phi_n) / sqrt(N) on Alice's azimuths."""
    if isinstance(g, SceneGeometry):
        N, alpha = g.N, g.alpha_A
    else:
        N = int(g)
    labels = mode_labels(N)
    phi = 2 * np.pi * np.arange(N) / N + alpha
    F = np.exp(1j * np.outer(phi, labels)) / np.sqrt(N)
    return OamBasis(F=F, mode_order=tuple(labels))


def combination_count(N, N_A, N_s, N_z) -> int:
    """K = 2 ** floor(log2(C(N_A-1, N_s-1) * C(N-N_A, N_z)))."""
    _check_counts(N, N_A, N_s, N_z)
    total = math.comb(N_A - 1, N_s - 1) * math.comb(N - N_A, N_z)
    return 1 << (total.bit_length() - 1)


def _check_counts(N, N_A, N_s, N_z):
    if N_s < 1 or N_z < 0 or N_A < N_s or N - N_A < N_z or N_A > N:
        raise ModePlanError(f"infeasible mode counts N={N}, N_A={N_A}, N_s={N_s}, N_z={N_z}")


def enumerate_combinations(low_modes, high_modes, N_s, N_z):
    """First K (signal set, AN set) pairs in lexicographic order.

    Signal sets always start with mode 0 followed by ``N_s - 1`` nonzero low
    modes, taken in the order the low modes are listed. Combination ``i``
    carries the index bits of ``i`` in plain binary.
    """
    low, high = list(low_modes), list(high_modes)
    if 0 not in low:
        raise ModePlanError("mode 0 must be a low-order mode")
    N = len(low) + len(high)
    K = combination_count(N, len(low), N_s, N_z)
    nonzero = [l for l in low if l != 0]
    pairs = itertools.product(
        ((0, *c) for c in itertools.combinations(nonzero, N_s - 1)),
        itertools.combinations(high, N_z),
    )
    return list(itertools.islice(pairs, K))


@dataclass(frozen=True)
class ModePlan:
    low_modes: tuple[int, ...] = (0, 1, -1, -2)
    high_modes: tuple[int, ...] = (2, -3, 3, 4)
    N_s: int = 3
    N_z: int = 3
    combo_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "low_modes", tuple(int(l) for l in self.low_modes))
        object.__setattr__(self, "high_modes", tuple(int(l) for l in self.high_modes))
        low, high = set(self.low_modes), set(self.high_modes)
        if len(low) != len(self.low_modes) or len(high) != len(self.high_modes) or low & high:
            raise ModePlanError("low and high mode lists must be disjoint without repeats")
        if 0 not in low:
            raise ModePlanError("mode 0 must be a low-order mode")
        _check_counts(self.N, self.N_A, self.N_s, self.N_z)
        if not 0 <= self.combo_index < self.K:
            raise ModePlanError(f"combo_index {self.combo_index} out of range 0..{self.K - 1}")

    @property
    def N(self) -> int:
        return len(self.low_modes) + len(self.high_modes)

    @property
    def N_A(self) -> int:
        return len(self.low_modes)

    @property
    def K(self) -> int:
        return combination_count(self.N, self.N_A, self.N_s, self.N_z)

    @cached_property
    def combinations(self):
        return enumerate_combinations(self.low_modes, self.high_modes, self.N_s, self.N_z)

    @property
    def signal_modes(self) -> tuple[int, ...]:
        return self.combinations[self.combo_index][0]

    @property
    def an_modes(self) -> tuple[int, ...]:
        return self.combinations[self.combo_index][1]

    def index_bits(self) -> str:
        width = self.K.bit_length() - 1
        return format(self.combo_index, f"0{width}b") if width else ""

    @classmethod
    def all_signal(cls, N: int) -> "ModePlan":
        """Every mode carries data, no AN and no index information (K = 1)."""
        labels = mode_labels(N)
        low = [0] + [l for l in labels if l != 0]
        return cls(low_modes=tuple(low), high_modes=(), N_s=N, N_z=0)


def eve_row(l: int, N: int) -> int:
    """Eve antenna row (0-based) paired with signal mode ``l``."""
    return l % N
