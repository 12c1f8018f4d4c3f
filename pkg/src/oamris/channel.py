"""Free-space line-of-sight channels between array elements."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, SceneGeometry


@dataclass(frozen=True)
class ChannelParams:
    beta: float = 1.0
    wavelength: float = 0.1

    def __post_init__(self):
        if not self.beta > 0 or not self.wavelength > 0:
            raise ValueError("beta and wavelength must be > 0")


def los_coefficient(p_tx, p_rx, params: ChannelParams) -> complex:
    """Spherical-wave LoS coefficient between two points."""
    d = float(np.linalg.norm(np.asarray(p_rx, float) - np.asarray(p_tx, float)))
    if d == 0.0:
        raise GeometryError("coincident transmit and receive points")
    lam = params.wavelength
    return complex(params.beta * lam / (4 * np.pi * d) * np.exp(-2j * np.pi * d / lam))


def los_matrix(rx: np.ndarray, tx: np.ndarray, params: ChannelParams) -> np.ndarray:
    """Matrix with entry [i, j] = LoS coefficient from ``tx[j]`` to ``rx[i]``."""
    rx = np.asarray(rx, float).reshape(-1, 3)
    tx = np.asarray(tx, float).reshape(-1, 3)
    d = np.linalg.norm(rx[:, None, :] - tx[None, :, :], axis=-1)
    if d.size and np.min(d) == 0.0:
        raise GeometryError("coincident transmit and receive points")
    lam = params.wavelength
    return params.beta * lam / (4 * np.pi * d) * np.exp(-2j * np.pi * d / lam)


@dataclass(frozen=True)
class ChannelSet:
    H_AB: np.ndarray  # N x N, Bob element m <- Alice element n
    H_AR: np.ndarray  # Q x N
    H_RB: np.ndarray  # N x Q
    H_AE: np.ndarray  # N x N, Eve element v <- Alice element n
    H_RE: np.ndarray  # N x Q

    def __post_init__(self):
        N = self.H_AB.shape[0]
        Q = self.H_AR.shape[0]
        shapes = {"H_AB": (N, N), "H_AR": (Q, N), "H_RB": (N, Q), "H_AE": (N, N), "H_RE": (N, Q)}
        for name, shape in shapes.items():
            mat = getattr(self, name)
            if mat.shape != shape:
                raise ValueError(f"{name} has shape {mat.shape}, expected {shape}")
            mat.setflags(write=False)

    @property
    def N(self) -> int:
        return self.H_AB.shape[0]

    @property
    def Q(self) -> int:
        return self.H_AR.shape[0]

    def bob_effective(self, theta) -> np.ndarray:
        """H_AB + H_RB diag(theta^H) H_AR."""
        return self.H_AB + (self.H_RB * np.conj(theta)) @ self.H_AR

    def eve_effective(self, theta) -> np.ndarray:
        return self.H_AE + (self.H_RE * np.conj(theta)) @ self.H_AR

    def without_ris(self) -> "ChannelSet":
        N = self.N
        empty = np.zeros((0, N), complex)
        return ChannelSet(self.H_AB, empty, empty.T.copy(), self.H_AE, empty.T.copy())

    def to_csv(self, path) -> None:
        """Dump every matrix as rows of (matrix, row, col, re, im)."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["matrix", "row", "col", "re", "im"])
            for name in ("H_AB", "H_AR", "H_RB", "H_AE", "H_RE"):
                mat = getattr(self, name)
                for (i, j), h in np.ndenumerate(mat):
                    w.writerow([name, i, j, repr(h.real), repr(h.imag)])


def build_channels(g: SceneGeometry, params: ChannelParams) -> ChannelSet:
    A, B, E, R = g.alice_positions(), g.bob_positions(), g.eve_positions(), g.ris_positions()
    return ChannelSet(
        H_AB=los_matrix(B, A, params),
        H_AR=los_matrix(R, A, params),
        H_RB=los_matrix(B, R, params),
        H_AE=los_matrix(E, A, params),
        H_RE=los_matrix(E, R, params),
    )
