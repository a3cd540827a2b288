"""Dense complex linear algebra for small (<= 2**7 dimensional) operators.

Index convention: tensor products are row-major with the most significant
subsystem first, i.e. ``kron(a, b)[i*p + k, j*q + l] == a[i, j] * b[k, l]``.
A composite index over subsystems with dimensions ``dims`` therefore
unravels with ``np.unravel_index(idx, dims)`` (C order). Every partial
trace and embedding in the package relies on this.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, InvalidStateError, InvalidUnitaryError

#: tolerance for structural decisions (rank, singularity, vanishing cosines)
STRUCTURAL_TOL = 1e-9
#: tolerance for unitarity and state validity checks
UNITARY_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array and reject non-finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("matrix has non-finite entries")
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def tensor_product(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(ops: Iterable) -> np.ndarray:
    ops = list(ops)
    if not ops:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, (as_matrix(o) for o in ops))


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced operator on the subsystems listed in ``keep``.

    Kept subsystems stay in their original relative order regardless of
    the order given in ``keep``.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionError(f"subsystem dimensions must be positive: {dims}")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionError(
            f"matrix shape {m.shape} does not match subsystem dims {dims}"
        )
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {n} subsystems")

    traced = [k for k in range(n) if k not in keep]
    t = m.reshape(dims + dims)
    # contract bra/ket index pairs from the highest position downwards so
    # earlier axis numbers stay valid
    for count, k in enumerate(sorted(traced, reverse=True)):
        remaining = n - count
        t = np.trace(t, axis1=k, axis2=k + remaining)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


@dataclass(frozen=True)
class Subspace:
    """Subspace given by orthonormal basis vectors stored as the rows of
    ``basis`` (shape ``(k, ambient_dim)``; ``k`` may be zero)."""

    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        b = self.basis
        return b.T @ b.conj()

    def complement_projector(self) -> np.ndarray:
        return np.eye(self.ambient_dim) - self.projector()

    def overlap(self, v) -> float:
        """Squared norm of the projection of the unit vector along ``v``."""
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        return float(np.linalg.norm(self.basis.conj() @ v) ** 2)


def nullspace_basis(m, tol: float = STRUCTURAL_TOL) -> Subspace:
    """Right singular vectors of ``m`` whose singular value is below ``tol``.

    Columns beyond the row count (wide matrices) have implicit zero singular
    values and are always included.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_matrix(m)
    n_cols = m.shape[1]
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    sv = np.zeros(n_cols)
    sv[: len(s)] = s
    basis = vh[sv < tol]
    if np.all(np.isreal(m)):
        basis = basis.real
    return Subspace(n_cols, basis)


def haar_unitary(dim: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex
    Ginibre matrix, with the phases of R's diagonal moved into Q."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0])) < tol)


def check_unitary(u, dim: int | None = None, tol: float = UNITARY_TOL) -> np.ndarray:
    u = as_matrix(u)
    if dim is not None and u.shape != (dim, dim):
        raise InvalidUnitaryError(f"expected a {dim}x{dim} unitary, got shape {u.shape}")
    if not is_unitary(u, tol):
        err = np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0]))
        raise InvalidUnitaryError(f"matrix is not unitary (||U^dag U - I||_F = {err:.3e})")
    return u


def check_density(rho, dim: int | None = None, tol: float = UNITARY_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity (to ``-tol``)."""
    try:
        rho = as_matrix(rho)
    except DimensionError as exc:
        raise InvalidStateError(str(exc)) from exc
    if rho.shape[0] != rho.shape[1] or (dim is not None and rho.shape[0] != dim):
        raise InvalidStateError(f"bad density matrix shape {rho.shape}")
    if np.linalg.norm(rho - dagger(rho)) > tol:
        raise InvalidStateError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidStateError(f"density matrix trace {np.trace(rho).real:.6g} != 1")
    if np.linalg.eigvalsh((rho + dagger(rho)) / 2).min() < -tol:
        raise InvalidStateError("density matrix is not positive semidefinite")
    return rho


def trace_norm(h) -> float:
    """Trace norm of a Hermitian operator (sum of absolute eigenvalues)."""
    h = as_matrix(h)
    return float(np.abs(np.linalg.eigvalsh((h + dagger(h)) / 2)).sum())


def trace_distance(a, b) -> float:
    """Trace-norm of ``a - b`` (no factor 1/2)."""
    return trace_norm(as_matrix(a) - as_matrix(b))
