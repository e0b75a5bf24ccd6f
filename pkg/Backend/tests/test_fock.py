import numpy as np
from parameterized import parameterized

from app.helpers.fock import basis_size, fock_basis, occupation_factorials, two_mode_transfer


@parameterized.expand([(1, 1), (2, 2), (2, 4), (3, 5), (3, 8)])
def test_fock_basis_size_and_conservation(photons, modes):
    patterns = fock_basis(photons, modes)
    assert patterns.shape == (basis_size(photons, modes), modes)
    assert (patterns.sum(axis=1) == photons).all()
    assert len({tuple(p) for p in patterns.tolist()}) == len(patterns)


def test_fock_basis_order_starts_with_all_photons_in_first_mode():
    assert fock_basis(2, 3)[0].tolist() == [2, 0, 0]


def test_occupation_factorials():
    assert occupation_factorials([2, 0, 3]) == 2 * 6


@parameterized.expand([(m, theta) for m in range(5) for theta in (0.0, 0.3, np.pi / 4, 1.2)])
def test_two_mode_transfer_is_orthogonal(photons, theta):
    t = two_mode_transfer(theta, photons)
    assert np.allclose(t.T @ t, np.eye(photons + 1), atol=1e-12)


def test_two_mode_transfer_hong_ou_mandel():
    # |1,1> through a 50/50 splitter never leaves one photon per mode
    t = two_mode_transfer(np.pi / 4, 2)
    assert abs(t[1, 1]) < 1e-12
    assert np.isclose(t[0, 1] ** 2, 0.5)
    assert np.isclose(t[2, 1] ** 2, 0.5)
