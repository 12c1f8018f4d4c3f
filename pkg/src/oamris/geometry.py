"""Element coordinates of the Alice/Bob/Eve circular arrays and the RIS panel.

Alice sits at the origin with her array in the z = 0 plane; Bob is parallel
and coaxial by default. Eve's array is centred at distance ``D`` from Alice
along the direction ``(theta, varphi)`` and tilted by rotations about x and y.
All indices in the public element functions are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


class GeometryError(ValueError):
    """Invalid scene parameters or element index."""


def _vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise GeometryError(f"expected a 3-vector, got shape {a.shape}")
    return a


def rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def ring_points(center, radius, offset, N, indices, rotation=None) -> np.ndarray:
    """Points of an N-element circle for arbitrary integer (1-based) indices.

    Indices are not range-checked, so ``n`` and ``n + N`` give the same
    point up to rounding.
    """
    idx = np.asarray(indices, dtype=float)
    phi = 2.0 * np.pi * (idx - 1.0) / N + offset
    local = np.stack([radius * np.cos(phi), radius * np.sin(phi), np.zeros_like(phi)], axis=-1)
    if rotation is not None:
        local = local @ np.asarray(rotation).T
    return np.asarray(center, dtype=float) + local


@dataclass(frozen=True)
class SceneGeometry:
    """Positions and orientations of the three arrays and the RIS.

    Lengths are in metres and angles in radians. ``theta`` and ``varphi`` are
    Eve's azimuth (from +x in the transmit plane) and polar angle (from +z);
    ``vartheta_x`` / ``vartheta_y`` rotate Eve's array about x then y.
    """

    N: int = 8
    r_A: float = 0.2
    r_B: float = 0.2
    r_E: float = 0.2
    alpha_A: float = 0.0
    alpha_B: float = 0.0
    alpha_E: float = 0.0
    u_B: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 20.0]))
    u_R: np.ndarray = field(default_factory=lambda: np.array([2.0, 0.0, 20.0]))
    D: float = 10.0
    theta: float = 0.0
    varphi: float = -np.pi / 20
    vartheta_x: float = np.pi / 4
    vartheta_y: float = np.pi / 4
    Q_y: int = 15
    Q_z: int = 10
    d_y: float = 0.05
    d_z: float = 0.05

    def __post_init__(self):
        object.__setattr__(self, "u_B", _vec3(self.u_B))
        object.__setattr__(self, "u_R", _vec3(self.u_R))
        if int(self.N) != self.N or self.N < 2:
            raise GeometryError(f"N must be an integer >= 2, got {self.N}")
        for name in ("r_A", "r_B", "r_E", "D", "d_y", "d_z"):
            if not getattr(self, name) > 0:
                raise GeometryError(f"{name} must be > 0, got {getattr(self, name)}")
        for name in ("Q_y", "Q_z"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise GeometryError(f"{name} must be an integer >= 1, got {v}")

    @property
    def u_A(self) -> np.ndarray:
        return np.zeros(3)

    @property
    def u_E(self) -> np.ndarray:
        s = np.sin(self.varphi)
        return self.D * np.array([s * np.cos(self.theta), s * np.sin(self.theta), np.cos(self.varphi)])

    @property
    def Q(self) -> int:
        return int(self.Q_y * self.Q_z)

    @property
    def eve_rotation(self) -> np.ndarray:
        return rot_y(self.vartheta_y) @ rot_x(self.vartheta_x)

    def replace(self, **changes) -> "SceneGeometry":
        return replace(self, **changes)

    # vectorised element arrays, row i is element i+1

    def alice_positions(self) -> np.ndarray:
        return ring_points(self.u_A, self.r_A, self.alpha_A, self.N, np.arange(1, self.N + 1))

    def bob_positions(self) -> np.ndarray:
        return ring_points(self.u_B, self.r_B, self.alpha_B, self.N, np.arange(1, self.N + 1))

    def eve_positions(self) -> np.ndarray:
        return ring_points(self.u_E, self.r_E, self.alpha_E, self.N, np.arange(1, self.N + 1),
                           rotation=self.eve_rotation)

    def ris_positions(self) -> np.ndarray:
        q = np.arange(1, self.Q + 1)
        q_y, q_z = ris_grid_index(q, self.Q_y)
        off_y = self.d_y * (q_y + (-1.0 - self.Q_y) / 2.0)
        off_z = self.d_z * (q_z + (-1.0 - self.Q_z) / 2.0)
        return self.u_R + np.stack([np.zeros_like(off_y), off_y, off_z], axis=-1)


def ris_grid_index(q, Q_y):
    """Map 1-based linear RIS index to (q_y, q_z), q_y running fastest."""
    q0 = np.asarray(q) - 1
    return q0 % Q_y + 1, q0 // Q_y + 1


def _check_index(i, upper, what):
    if int(i) != i or not 1 <= i <= upper:
        raise GeometryError(f"{what} index {i} out of range 1..{upper}")


def alice_element(g: SceneGeometry, n: int) -> np.ndarray:
    _check_index(n, g.N, "Alice")
    return ring_points(g.u_A, g.r_A, g.alpha_A, g.N, n)


def bob_element(g: SceneGeometry, m: int) -> np.ndarray:
    _check_index(m, g.N, "Bob")
    return ring_points(g.u_B, g.r_B, g.alpha_B, g.N, m)


def eve_element(g: SceneGeometry, v: int) -> np.ndarray:
    _check_index(v, g.N, "Eve")
    return ring_points(g.u_E, g.r_E, g.alpha_E, g.N, v, rotation=g.eve_rotation)


def ris_element(g: SceneGeometry, q: int) -> np.ndarray:
    _check_index(q, g.Q, "RIS")
    return g.ris_positions()[int(q) - 1]
