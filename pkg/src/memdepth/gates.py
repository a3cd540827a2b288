"""Named two-qubit interactions and the finite-depth families.

All matrices act on ``system (x) memory`` with the system as the most
significant qubit:

``identity``  I_4
``swap``      |ab> -> |ba>
``cnot``      system controls a flip of the memory: |s m> -> |s, m xor s>
``u_alpha_z`` the depth-2 family member with a_x = a_y = +pi/4 (below)
"""
from __future__ import annotations

import numpy as np

from .linalg import I2, PAULIS, dagger, haar_unitary

IDENTITY = np.eye(4, dtype=complex)
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]

XX = np.kron(PAULIS[0], PAULIS[0])
YY = np.kron(PAULIS[1], PAULIS[1])
ZZ = np.kron(PAULIS[2], PAULIS[2])


def u_alpha_z(alpha_z: float, sign_x: int = 1, sign_y: int = 1) -> np.ndarray:
    """``[I + ZZ + i e^{-2i a_z}(XX + YY)] / 2 * XX^{h_x} YY^{h_y}``.

    Equals ``exp(i(sign_x XX + sign_y YY) pi/4 + i a_z ZZ)`` up to a global
    phase; ``h = 1`` for a negative sign.
    """
    u = 0.5 * (np.eye(4) + ZZ + 1j * np.exp(-2j * alpha_z) * (XX + YY))
    if sign_x < 0:
        u = u @ XX
    if sign_y < 0:
        u = u @ YY
    return u


def w_prime(beta: float, q: int = 1) -> np.ndarray:
    """Memory rotation that keeps the z axis fixed up to sign ``q``:
    ``[[0, 1], [-1, 0]]^{(1-q)/2} diag(e^{i beta}, e^{-i beta})``."""
    if q not in (1, -1):
        raise ValueError("q must be +1 or -1")
    flip = np.array([[0, 1], [-1, 0]], dtype=complex) if q == -1 else I2
    return flip @ np.diag([np.exp(1j * beta), np.exp(-1j * beta)])


def depth_two_unitary(alpha_z, beta, q, v1, v2, w2) -> np.ndarray:
    """``(v1 (x) w2^dag W') U_{a_z} (v2 (x) w2)``."""
    return np.kron(v1, dagger(w2) @ w_prime(beta, q)) @ u_alpha_z(alpha_z) @ np.kron(v2, w2)


def random_local(rng: np.random.Generator) -> np.ndarray:
    return haar_unitary(2, rng)


def random_depth_two(rng: np.random.Generator, margin: float = 0.05) -> np.ndarray:
    """Random member of the depth-2 family.

    ``a_z`` is drawn from ``(-pi/4 + margin, pi/4 - margin)`` to stay clear
    of the SWAP corner, where the depth drops to 1.
    """
    alpha_z = rng.uniform(-np.pi / 4 + margin, np.pi / 4 - margin)
    beta = rng.uniform(0, 2 * np.pi)
    q = int(rng.choice([1, -1]))
    v1, v2, w2 = (random_local(rng) for _ in range(3))
    return depth_two_unitary(alpha_z, beta, q, v1, v2, w2)


def random_swap_class(rng: np.random.Generator) -> np.ndarray:
    a, b, c, d = (random_local(rng) for _ in range(4))
    return np.kron(a, b) @ SWAP @ np.kron(c, d)


def random_factorized(rng: np.random.Generator) -> np.ndarray:
    return np.kron(random_local(rng), random_local(rng))


PRESETS = {
    "identity": IDENTITY,
    "swap": SWAP,
    "cnot": CNOT,
}


def bell_state() -> np.ndarray:
    """Density matrix of (|00> + |11>)/sqrt(2)."""
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return np.outer(psi, psi.conj())
