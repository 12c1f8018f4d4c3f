import numpy as np
import pytest
from hypothesis import given, strategies as st

from oamris.geometry import (GeometryError, SceneGeometry, alice_element, bob_element, eve_element,
                             ring_points, ris_element, ris_grid_index, rot_x, rot_y)


def test_alice_first_element_on_x_axis():
    g = SceneGeometry()
    np.testing.assert_allclose(alice_element(g, 1), [0.2, 0, 0], atol=1e-15)
    np.testing.assert_allclose(alice_element(g, 3), [0, 0.2, 0], atol=1e-15)


def test_bob_ring_is_coaxial_with_alice():
    g = SceneGeometry()
    P = g.bob_positions()
    np.testing.assert_allclose(P[:, 2], 20.0)
    np.testing.assert_allclose(P[:, :2], g.alice_positions()[:, :2], atol=1e-15)


def test_eve_center_from_spherical_angles():
    g = SceneGeometry(theta=np.pi / 2, varphi=np.pi / 2, D=3)
    np.testing.assert_allclose(g.u_E, [0, 3, 0], atol=1e-15)
    # default: polar angle -pi/20 with azimuth 0 puts Eve at negative x
    d = SceneGeometry()
    assert d.u_E[0] < 0 and d.u_E[2] > 9.8


def test_eve_ring_radius_and_rotation():
    g = SceneGeometry()
    P = g.eve_positions()
    np.testing.assert_allclose(np.linalg.norm(P - g.u_E, axis=1), g.r_E)
    # the rotated ring's normal is R e_z
    normal = g.eve_rotation @ np.array([0, 0, 1.0])
    np.testing.assert_allclose((P - g.u_E) @ normal, 0, atol=1e-14)


def test_rotations_right_handed():
    np.testing.assert_allclose(rot_x(np.pi / 2) @ [0, 1, 0], [0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(rot_y(np.pi / 2) @ [0, 0, 1], [1, 0, 0], atol=1e-15)


def test_ris_grid_centered_on_center():
    g = SceneGeometry()
    R = g.ris_positions()
    assert R.shape == (150, 3)
    np.testing.assert_allclose(R.mean(axis=0), g.u_R, atol=1e-12)
    np.testing.assert_allclose(R[:, 0], 2.0)
    # q_y runs fastest
    np.testing.assert_allclose(R[1] - R[0], [0, 0.05, 0], atol=1e-15)
    np.testing.assert_allclose(R[15] - R[0], [0, 0, 0.05], atol=1e-15)
    np.testing.assert_allclose(ris_element(g, 1), R[0])


def test_ris_grid_index():
    assert ris_grid_index(1, 15) == (1, 1)
    assert ris_grid_index(16, 15) == (1, 2)
    assert ris_grid_index(150, 15) == (15, 10)


@pytest.mark.parametrize("fn,idx", [(alice_element, 0), (bob_element, 9), (eve_element, -1), (ris_element, 151)])
def test_index_out_of_range(fn, idx):
    with pytest.raises(GeometryError):
        fn(SceneGeometry(), idx)


@pytest.mark.parametrize("field,value", [("r_A", 0.0), ("D", -1.0), ("N", 1), ("Q_y", 0)])
def test_invalid_geometry(field, value):
    with pytest.raises(GeometryError):
        SceneGeometry(**{field: value})


@given(st.integers(1, 16), st.integers(2, 16), st.floats(0, 2 * np.pi))
def test_ring_periodic_in_index(n, N, offset):
    a = ring_points([1, 2, 3], 0.5, offset, N, n)
    b = ring_points([1, 2, 3], 0.5, offset, N, n + N)
    np.testing.assert_allclose(a, b, atol=1e-12)


@given(st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi))
def test_rotation_orthonormal(a, b):
    R = rot_y(b) @ rot_x(a)
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0)
