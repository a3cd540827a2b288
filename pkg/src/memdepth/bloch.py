"""Bloch-vector picture of qubit states and of the two channels induced by a
two-qubit interaction.

The interaction ``u`` acts on ``system (x) memory`` in that tensor order.
For a fixed system input ``rho`` the memory evolves under the concurrent
channel ``xi -> tr_sys[u (rho (x) xi) u^dag]``; for a fixed memory state
``xi`` the system sees ``rho -> tr_mem[u (rho (x) xi) u^dag]``. Both are
affine maps ``v -> M v + t`` on Bloch vectors.

For ``u = exp(i sum_j a_j s_j (x) s_j)`` the concurrent matrix has the
closed form returned by :func:`f_matrix_analytic`. It agrees with the
partial-trace extraction entrywise, with no sign adjustment, under the
system-first tensor order. With ``a_x = a_y = pi/4`` it reduces to::

    F(r) = cos(2 a_z) * [[0, 0, -r_y],
                         [0, 0,  r_x],
                         [0, 0,  0  ]]

and the same matrix with ``r`` replaced by the memory Bloch vector ``m``
describes the system channel. A negative ``a_x`` (or ``a_y``) flips the
sign of the ``r_x`` (resp. ``r_y``) entry, since ``sin 2a`` changes sign.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError
from .linalg import (
    I2,
    PAULIS,
    STRUCTURAL_TOL,
    UNITARY_TOL,
    Subspace,
    as_matrix,
    check_density,
    check_unitary,
    dagger,
    nullspace_basis,
    partial_trace,
)

BLOCH_NORM_TOL = 1e-9

#: Bloch vectors of I/2 and (I + sigma_k)/2; affinely independent
AFFINE_PROBES = np.array(
    [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
)


def _as_bloch(r) -> np.ndarray:
    r = np.asarray(r, dtype=float).reshape(-1)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise InvalidStateError(f"Bloch vector must be 3 finite reals, got {r!r}")
    return r


def density_from_bloch(r) -> np.ndarray:
    """``(I + r . sigma) / 2``."""
    r = _as_bloch(r)
    if np.linalg.norm(r) > 1 + BLOCH_NORM_TOL:
        raise InvalidStateError(f"Bloch vector norm {np.linalg.norm(r):.6g} exceeds 1")
    return 0.5 * (I2 + r[0] * PAULIS[0] + r[1] * PAULIS[1] + r[2] * PAULIS[2])


def pauli_components(op) -> np.ndarray:
    """``tr(sigma_k op)`` for k = x, y, z (complex in general)."""
    op = as_matrix(op)
    return np.array([np.trace(p @ op) for p in PAULIS])


def bloch_from_density(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise InvalidStateError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    if np.linalg.norm(rho - dagger(rho)) > UNITARY_TOL:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > UNITARY_TOL:
        raise InvalidStateError("density matrix does not have unit trace")
    return pauli_components(rho).real


@dataclass(frozen=True)
class AffineChannelRep:
    """Qubit channel acting on Bloch vectors as ``r -> matrix @ r + vector``."""

    matrix: np.ndarray
    vector: np.ndarray

    def __call__(self, r) -> np.ndarray:
        return self.matrix @ np.asarray(r, dtype=float) + self.vector

    def ptm(self) -> np.ndarray:
        """4x4 Pauli transfer matrix in the (I, X, Y, Z) basis."""
        out = np.zeros((4, 4))
        out[0, 0] = 1.0
        out[1:, 0] = self.vector
        out[1:, 1:] = self.matrix
        return out

    def apply(self, op) -> np.ndarray:
        """Apply the channel to an arbitrary 2x2 operator (linear extension)."""
        return apply_ptm(self.ptm(), op)

    def distance(self, other: "AffineChannelRep") -> float:
        return float(
            max(
                np.abs(self.matrix - other.matrix).max(),
                np.abs(self.vector - other.vector).max(),
            )
        )


_PAULI_BASIS = (I2,) + PAULIS


def apply_ptm(ptm, op) -> np.ndarray:
    """Apply a single-qubit Pauli transfer matrix to a 2x2 operator."""
    op = as_matrix(op)
    coeffs = np.array([np.trace(p @ op) for p in _PAULI_BASIS]) / 2
    out_coeffs = np.asarray(ptm) @ coeffs
    return sum(c * p for c, p in zip(out_coeffs, _PAULI_BASIS))


def apply_ptm_pair(ptm_a, ptm_b, op) -> np.ndarray:
    """Apply ``A (x) B`` to a two-qubit operator given both channels' PTMs."""
    op = as_matrix(op)
    paulis2 = [np.kron(p, q) for p in _PAULI_BASIS for q in _PAULI_BASIS]
    coeffs = np.array([np.trace(p @ op) for p in paulis2]) / 4
    out_coeffs = np.kron(np.asarray(ptm_a), np.asarray(ptm_b)) @ coeffs
    return sum(c * p for c, p in zip(out_coeffs, paulis2))


def _extract_affine(images) -> AffineChannelRep:
    """Affine rep from the images of the four probe states, in probe order."""
    b = [bloch_from_density(img) for img in images]
    vector = b[0]
    matrix = np.column_stack([b[k + 1] - vector for k in range(3)])
    return AffineChannelRep(matrix, vector)


def concurrent_channel(u, rho_sys) -> AffineChannelRep:
    """Memory-side channel ``xi -> tr_sys[u (rho_sys (x) xi) u^dag]``."""
    u = check_unitary(u, 4)
    rho = check_density(rho_sys, 2)
    images = [
        partial_trace(u @ np.kron(rho, density_from_bloch(p)) @ dagger(u), [2, 2], [1])
        for p in AFFINE_PROBES
    ]
    return _extract_affine(images)


def system_channel(u, xi_mem) -> AffineChannelRep:
    """System-side channel ``rho -> tr_mem[u (rho (x) xi_mem) u^dag]``."""
    u = check_unitary(u, 4)
    xi = check_density(xi_mem, 2)
    images = [
        partial_trace(u @ np.kron(density_from_bloch(p), xi) @ dagger(u), [2, 2], [0])
        for p in AFFINE_PROBES
    ]
    return _extract_affine(images)


def memory_response(u, a) -> list[np.ndarray]:
    """``tr_mem[u (rho (x) a) u^dag]`` for the four probe inputs ``rho``.

    These four inputs span all 2x2 operators, so ``a`` is irrelevant iff
    every returned operator vanishes.
    """
    u = as_matrix(u)
    return [
        partial_trace(u @ np.kron(density_from_bloch(p), a) @ dagger(u), [2, 2], [0])
        for p in AFFINE_PROBES
    ]


def irrelevant_subspace(u, tol: float = STRUCTURAL_TOL) -> Subspace:
    """Traceless memory operators ``a . sigma`` that never influence the
    system output, as unit vectors ``a`` in R^3.

    The identity direction is excluded up front: it always contributes.
    """
    u = check_unitary(u, 4)
    # columns: real-linear image of sigma_k, flattened to real coordinates
    cols = []
    for p in PAULIS:
        flat = np.concatenate([m.reshape(-1) for m in memory_response(u, p)])
        cols.append(np.concatenate([flat.real, flat.imag]))
    return nullspace_basis(np.column_stack(cols), tol)


def relevant_projector(u, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    """Orthogonal projector (3x3, real) onto the relevant Bloch directions."""
    return irrelevant_subspace(u, tol).complement_projector().real


def f_matrix_analytic(angles, r) -> np.ndarray:
    """Closed-form concurrent matrix of ``exp(i sum_j a_j s_j (x) s_j)``."""
    ax, ay, az = np.asarray(angles, dtype=float)
    rx, ry, rz = np.asarray(r, dtype=float)
    cx, cy, cz = np.cos(2 * ax), np.cos(2 * ay), np.cos(2 * az)
    sx, sy, sz = np.sin(2 * ax), np.sin(2 * ay), np.sin(2 * az)
    return np.array(
        [
            [cy * cz, rz * cy * sz, -ry * sy * cz],
            [-rz * cx * sz, cx * cz, rx * sx * cz],
            [ry * cx * sy, -rx * sx * cy, cx * cy],
        ]
    )


def det_f_analytic(angles, r) -> float:
    ax, ay, az = np.asarray(angles, dtype=float)
    rx, ry, rz = np.asarray(r, dtype=float)
    cx, cy, cz = np.cos(2 * ax), np.cos(2 * ay), np.cos(2 * az)
    sx, sy, sz = np.sin(2 * ax), np.sin(2 * ay), np.sin(2 * az)
    return float(
        rx**2 * sx**2 * cy**2 * cz**2
        + ry**2 * cx**2 * sy**2 * cz**2
        + rz**2 * cx**2 * cy**2 * sz**2
        + cx**2 * cy**2 * cz**2
    )


def rotation_of(w) -> np.ndarray:
    """SO(3) matrix ``R_jk = tr(s_j w s_k w^dag) / 2`` of a qubit unitary."""
    w = as_matrix(w)
    return np.array(
        [[np.trace(pj @ w @ pk @ dagger(w)).real / 2 for pk in PAULIS] for pj in PAULIS]
    )


def random_bloch(rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    """Uniform sample from the Bloch ball of the given radius."""
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v) * radius * rng.uniform() ** (1 / 3)
