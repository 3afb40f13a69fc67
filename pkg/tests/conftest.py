import numpy as np
import pytest

from trotterbench import build_random_two_term, build_xy_lattice, solve_w2

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)


def rand_hermitian(n, rng):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


@pytest.fixture(scope="session")
def xy23():
    return build_xy_lattice(2, 3, 0.25, 0.75)


@pytest.fixture(scope="session")
def rand3():
    """The seeded 3-qubit two-term Hamiltonian used by the claim checks."""
    return build_random_two_term(3, 10, 7)


@pytest.fixture(scope="session")
def rand2():
    return build_random_two_term(2, 4, 1)


@pytest.fixture(scope="session")
def w2_solution():
    return solve_w2(-0.3)
