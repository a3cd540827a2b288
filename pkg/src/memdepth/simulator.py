"""Sequential uses of a memory channel generated by a fixed interaction.

Register layout for multi-slot simulations: input slots in use order, then
the memory as the last (least significant) qubit. Use ``j`` applies the
interaction to (slot j, memory). In reset verification the slots are
ordered ``reset1..., test1, reset2..., test2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .bloch import (
    AFFINE_PROBES,
    AffineChannelRep,
    apply_ptm_pair,
    bloch_from_density,
    concurrent_channel,
    density_from_bloch,
    system_channel,
)
from .errors import DimensionError, SizeLimitError
from .linalg import (
    STRUCTURAL_TOL,
    check_density,
    check_unitary,
    dagger,
    partial_trace,
    tensor_all,
    trace_distance,
)

MAX_SLOTS = 7
MAX_QUBITS_VERIFY = 7
MAX_RESET = 4

#: memory probes for the reset-channel independence check
MEMORY_PROBES = np.array(
    [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
)


@dataclass(frozen=True)
class MemoryProcess:
    unitary: np.ndarray
    memory_state: np.ndarray
    use_count: int = 0


def step(p: MemoryProcess, rho_in) -> tuple[np.ndarray, MemoryProcess]:
    """One use of the device: returns the system output and the evolved process."""
    rho = check_density(rho_in, 2)
    u = p.unitary
    joint = u @ np.kron(rho, p.memory_state) @ dagger(u)
    out = partial_trace(joint, [2, 2], [0])
    mem = partial_trace(joint, [2, 2], [1])
    return out, replace(p, memory_state=mem, use_count=p.use_count + 1)


@dataclass
class Trajectory:
    memory_blochs: list[np.ndarray] = field(default_factory=list)
    per_use_channels: list[AffineChannelRep] = field(default_factory=list)
    outputs: list[np.ndarray] = field(default_factory=list)

    @property
    def output_blochs(self) -> list[np.ndarray]:
        return [bloch_from_density(o) for o in self.outputs]


def run_sequence(u, xi0, inputs) -> Trajectory:
    u = check_unitary(u, 4)
    p = MemoryProcess(u, check_density(xi0, 2))
    traj = Trajectory(memory_blochs=[bloch_from_density(p.memory_state)])
    for rho in inputs:
        traj.per_use_channels.append(system_channel(u, p.memory_state))
        out, p = step(p, rho)
        traj.outputs.append(out)
        traj.memory_blochs.append(bloch_from_density(p.memory_state))
    return traj


def compose_affine_memory(u, m1, inputs) -> np.ndarray:
    """Memory Bloch vector after ``inputs`` via the affine composition
    ``(F_n...F_1) m1 + (F_n...F_2) f_1 + ... + f_n``."""
    reps = [concurrent_channel(u, rho) for rho in inputs]
    n = len(reps)

    def prod(lo):  # F_n ... F_{lo+1} (0-based: reps[lo:])
        out = np.eye(3)
        for rep in reps[lo:]:
            out = rep.matrix @ out
        return out

    total = prod(0) @ np.asarray(m1, dtype=float)
    for j in range(n):
        total = total + prod(j + 1) @ reps[j].vector
    return total


def _apply_pair(t: np.ndarray, op4: np.ndarray, a: int, b: int) -> np.ndarray:
    """Contract a (2,2,2,2) operator into axes ``a``, ``b`` of tensor ``t``."""
    res = np.tensordot(op4, t, axes=([2, 3], [a, b]))
    return np.moveaxis(res, [0, 1], [a, b])


def joint_output(u, xi0, omega, n_slots: int) -> np.ndarray:
    """Joint output state of ``n_slots`` uses fed with the (possibly
    entangled) ``omega``; the memory is traced out at the end."""
    if n_slots < 1:
        raise DimensionError("n_slots must be >= 1")
    if n_slots > MAX_SLOTS:
        raise SizeLimitError(f"n_slots={n_slots} exceeds the limit of {MAX_SLOTS}")
    u = check_unitary(u, 4)
    xi0 = check_density(xi0, 2)
    omega = check_density(omega)
    if omega.shape[0] != 2**n_slots:
        raise DimensionError(f"omega has dimension {omega.shape[0]}, expected {2**n_slots}")

    nq = n_slots + 1
    t = np.kron(omega, xi0).reshape((2,) * (2 * nq))
    u4 = u.reshape(2, 2, 2, 2)
    u4c = u4.conj()
    mem = nq - 1
    for j in range(n_slots):
        t = _apply_pair(t, u4, j, mem)
        t = _apply_pair(t, u4c, nq + j, nq + mem)
    t = np.trace(t, axis1=mem, axis2=nq + mem)
    d = 2**n_slots
    return t.reshape(d, d)


def kraus_blocks(u) -> np.ndarray:
    """Blocks ``A[a, b] = (I (x) <a|) u (I (x) |b>)``, shape (2, 2, 2, 2)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 matrix, got {u.shape}")
    return u.reshape(2, 2, 2, 2).transpose(1, 3, 0, 2)


def kraus_normalization_residual(blocks: np.ndarray) -> float:
    """Max deviation from ``sum_a A_ab^dag A_ac = d_bc I`` and
    ``sum_b A_ab A_cb^dag = d_ac I``."""
    worst = 0.0
    for b in range(2):
        for c in range(2):
            left = sum(dagger(blocks[a, b]) @ blocks[a, c] for a in range(2))
            right = sum(blocks[b, a] @ dagger(blocks[c, a]) for a in range(2))
            target = np.eye(2) * (b == c)
            worst = max(worst, np.abs(left - target).max(), np.abs(right - target).max())
    return float(worst)


def _check_reset(reset) -> list[np.ndarray]:
    reset = list(reset)
    if len(reset) > MAX_RESET:
        raise SizeLimitError(f"reset sequences longer than {MAX_RESET} are not supported")
    return [check_density(r, 2) for r in reset]


def path_operators(blocks: np.ndarray, n: int) -> np.ndarray:
    """``M[a_n, a_0] = sum_{a_1..a_{n-1}} A_{a_1 a_0} (x) ... (x) A_{a_n a_{n-1}}``
    on the n reset slots; shape (2, 2, 2**n, 2**n)."""
    dim = 2**n
    m = np.zeros((2, 2, dim, dim), dtype=complex)
    if n == 0:
        m[0, 0] = m[1, 1] = 1.0
        return m
    for path in np.ndindex(*(2,) * (n + 1)):
        ops = [blocks[path[j + 1], path[j]] for j in range(n)]
        m[path[n], path[0]] += tensor_all(ops)
    return m


def omega_operators(u, reset, omega) -> np.ndarray:
    """``Omega[a, c]`` with ``E_reset^xi[omega] = sum_ac xi_ac Omega[a, c]``;
    shape (2, 2, 2, 2)."""
    reset = _check_reset(reset)
    omega = np.asarray(omega, dtype=complex)
    blocks = kraus_blocks(u)
    n = len(reset)
    m = path_operators(blocks, n)
    big_xi = tensor_all(reset)
    out = np.zeros((2, 2, 2, 2), dtype=complex)
    for a in range(2):
        for c in range(2):
            for an in range(2):
                for cn in range(2):
                    coef = np.trace(m[an, a] @ big_xi @ dagger(m[cn, c]))
                    if coef == 0:
                        continue
                    for a_next in range(2):
                        out[a, c] += coef * blocks[a_next, an] @ omega @ dagger(blocks[a_next, cn])
    return out


def memory_after(u, xi, inputs) -> np.ndarray:
    p = MemoryProcess(check_unitary(u, 4), check_density(xi, 2))
    for rho in inputs:
        _, p = step(p, rho)
    return p.memory_state


def reset_channel(u, reset, xi) -> AffineChannelRep:
    """Channel on the input following ``reset``, starting from memory ``xi``."""
    reset = _check_reset(reset)
    return system_channel(u, memory_after(u, xi, reset))


def channel_distance(a: AffineChannelRep, b: AffineChannelRep) -> float:
    """Max trace distance between outputs over the affine probe inputs.

    For qubits the trace norm of a state difference equals the Euclidean
    distance of the Bloch vectors. Zero iff the channels coincide, since the
    probes affinely span the ball.
    """
    return float(max(np.linalg.norm(a(r) - b(r)) for r in AFFINE_PROBES))


@dataclass
class ResetVerificationReport:
    factorization_residual: float
    memory_independence_residual: float
    omega_offdiag_residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = bool(
            self.factorization_residual < self.tolerance
            and self.memory_independence_residual < self.tolerance
            and self.omega_offdiag_residual < self.tolerance
        )


def _reorder(rho: np.ndarray, order: list[int]) -> np.ndarray:
    """Permute qubits: output qubit ``k`` is input qubit ``order[k]``."""
    n = len(order)
    t = rho.reshape((2,) * (2 * n))
    t = t.transpose(order + [n + k for k in order])
    return t.reshape(2**n, 2**n)


def verify_reset_factorization(u, reset1, reset2, omega12, xi, tol: float = STRUCTURAL_TOL) -> ResetVerificationReport:
    """Simulate ``reset1, test1, reset2, test2`` with ``omega12`` on the two
    test slots and compare the joint test output with the product of the
    two reset channels applied to ``omega12``."""
    u = check_unitary(u, 4)
    reset1, reset2 = _check_reset(reset1), _check_reset(reset2)
    xi = check_density(xi, 2)
    omega12 = check_density(omega12, 4)
    n1, n2 = len(reset1), len(reset2)
    n_slots = n1 + n2 + 2
    if n_slots + 1 > MAX_QUBITS_VERIFY:
        raise SizeLimitError(f"{n_slots} slots plus memory exceed {MAX_QUBITS_VERIFY} qubits")

    # build in order [reset1, reset2, test1, test2], then move to slot order
    stacked = np.kron(tensor_all(reset1 + reset2), omega12)
    src = list(range(n1)) + [n1 + n2] + list(range(n1, n1 + n2)) + [n1 + n2 + 1]
    full_in = _reorder(stacked, src)
    joint = joint_output(u, xi, full_in, n_slots)
    t1, t2 = n1, n1 + n2 + 1
    observed = partial_trace(joint, [2] * n_slots, [t1, t2])

    omega1 = partial_trace(omega12, [2, 2], [0])
    e1 = reset_channel(u, reset1, xi)
    xi_mid = memory_after(u, xi, reset1 + [omega1])
    e2 = reset_channel(u, reset2, xi_mid)
    predicted = apply_ptm_pair(e1.ptm(), e2.ptm(), omega12)
    fact = trace_distance(observed, predicted)

    indep = 0.0
    offdiag = 0.0
    for reset, ref in ((reset1, e1), (reset2, e2)):
        for m in MEMORY_PROBES:
            indep = max(indep, channel_distance(reset_channel(u, reset, density_from_bloch(m)), ref))
        for r in AFFINE_PROBES:
            om = omega_operators(u, reset, density_from_bloch(r))
            offdiag = max(offdiag, np.linalg.norm(om[0, 1]), np.linalg.norm(om[1, 0]))
    return ResetVerificationReport(float(fact), float(indep), float(offdiag), tol)
