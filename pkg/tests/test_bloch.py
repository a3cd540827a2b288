import itertools

import numpy as np
import pytest
from conftest import expm_interaction
from hypothesis import given, settings
from hypothesis import strategies as st

from memdepth.bloch import (
    AffineChannelRep,
    bloch_from_density,
    concurrent_channel,
    density_from_bloch,
    det_f_analytic,
    f_matrix_analytic,
    irrelevant_subspace,
    random_bloch,
    rotation_of,
    system_channel,
)
from memdepth.errors import InvalidStateError, InvalidUnitaryError
from memdepth.gates import CNOT, IDENTITY, SWAP, random_local, u_alpha_z
from memdepth.linalg import PAULIS, dagger, haar_unitary, partial_trace, random_density

seeds = st.integers(min_value=0, max_value=2**32 - 1)
Q = np.pi / 4


def test_density_examples():
    np.testing.assert_array_equal(density_from_bloch([0, 0, 0]), np.eye(2) / 2)
    np.testing.assert_array_equal(density_from_bloch([0, 0, 1]), np.diag([1, 0]))
    evals = np.linalg.eigvalsh(density_from_bloch(np.ones(3) / np.sqrt(3)))
    np.testing.assert_allclose(evals, [0, 1], atol=1e-12)


def test_bloch_examples():
    np.testing.assert_array_equal(bloch_from_density(np.eye(2) / 2), [0, 0, 0])
    np.testing.assert_array_equal(bloch_from_density(np.diag([1, 0])), [0, 0, 1])


def test_bloch_roundtrip(rng):
    worst = max(
        np.abs(bloch_from_density(density_from_bloch(r)) - r).max() for r in (random_bloch(rng) for _ in range(1000))
    )
    assert worst < 1e-12


def test_state_errors():
    with pytest.raises(InvalidStateError):
        density_from_bloch([1.0, 0.1, 0.0])
    with pytest.raises(InvalidStateError):
        bloch_from_density(np.array([[0.5, 0.2], [0.0, 0.5]]))
    with pytest.raises(InvalidStateError):
        bloch_from_density(np.eye(2))
    with pytest.raises(InvalidUnitaryError):
        concurrent_channel(2 * np.eye(4), np.eye(2) / 2)


def test_concurrent_channel_swap(rng):
    r = random_bloch(rng)
    ch = concurrent_channel(SWAP, density_from_bloch(r))
    np.testing.assert_allclose(ch.matrix, 0, atol=1e-15)
    np.testing.assert_allclose(ch.vector, r, atol=1e-15)


def test_concurrent_channel_identity(rng):
    ch = concurrent_channel(IDENTITY, density_from_bloch(random_bloch(rng)))
    np.testing.assert_allclose(ch.matrix, np.eye(3), atol=1e-15)
    np.testing.assert_allclose(ch.vector, 0, atol=1e-15)


def test_concurrent_channel_matches_closed_form():
    angles, r = (0.3, 0.5, 0.7), np.array([0.2, -0.1, 0.4])
    ch = concurrent_channel(expm_interaction(angles), density_from_bloch(r))
    np.testing.assert_allclose(ch.matrix, f_matrix_analytic(angles, r), atol=1e-10)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_closed_form_matches_extraction_everywhere(seed):
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-np.pi, np.pi, 3)
    r = random_bloch(rng)
    u = expm_interaction(angles)
    np.testing.assert_allclose(concurrent_channel(u, density_from_bloch(r)).matrix, f_matrix_analytic(angles, r), atol=1e-10)
    # exchange symmetry: the same matrix acts on the system given memory r
    np.testing.assert_allclose(system_channel(u, density_from_bloch(r)).matrix, f_matrix_analytic(angles, r), atol=1e-10)


@pytest.mark.parametrize("sx, sy", list(itertools.product([1, -1], repeat=2)))
def test_rank_one_sign_convention(rng, sx, sy):
    az = 0.37
    r = random_bloch(rng)
    f = concurrent_channel(expm_interaction((sx * Q, sy * Q, az)), density_from_bloch(r)).matrix
    expected = np.cos(2 * az) * np.array([[0, 0, -sy * r[1]], [0, 0, sx * r[0]], [0, 0, 0]])
    np.testing.assert_allclose(f, expected, atol=1e-12)


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_affine_extraction_consistency(seed):
    rng = np.random.default_rng(seed)
    u = haar_unitary(4, rng)
    rho, m = random_density(2, rng), random_bloch(rng)
    xi = density_from_bloch(m)
    joint = u @ np.kron(rho, xi) @ dagger(u)
    mem_exact = bloch_from_density(partial_trace(joint, [2, 2], [1]))
    sys_exact = bloch_from_density(partial_trace(joint, [2, 2], [0]))
    np.testing.assert_allclose(concurrent_channel(u, rho)(m), mem_exact, atol=1e-10)
    np.testing.assert_allclose(system_channel(u, xi)(bloch_from_density(rho)), sys_exact, atol=1e-10)


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_affine_rep_keeps_ball(seed):
    rng = np.random.default_rng(seed)
    ch = concurrent_channel(haar_unitary(4, rng), random_density(2, rng))
    for _ in range(20):
        assert np.linalg.norm(ch(random_bloch(rng))) <= 1 + 1e-9


def test_affine_rep_ptm_and_apply(rng):
    ch = system_channel(haar_unitary(4, rng), random_density(2, rng))
    r = random_bloch(rng)
    out = ch.apply(density_from_bloch(r))
    np.testing.assert_allclose(bloch_from_density(out), ch(r), atol=1e-12)
    assert ch.ptm()[0].tolist() == [1, 0, 0, 0]
    assert ch.distance(AffineChannelRep(ch.matrix.copy(), ch.vector.copy())) == 0


def test_system_channel_swap(rng):
    m = random_bloch(rng)
    ch = system_channel(SWAP, density_from_bloch(m))
    np.testing.assert_allclose(ch.matrix, 0, atol=1e-15)
    np.testing.assert_allclose(ch.vector, m, atol=1e-15)


def test_system_channel_factorized_is_rotation(rng):
    v, w = random_local(rng), random_local(rng)
    # oracle: images of the Pauli axes under conjugation by v
    rot = np.column_stack([bloch_from_density((np.eye(2) + v @ p @ dagger(v)) / 2) for p in PAULIS])
    for _ in range(3):
        ch = system_channel(np.kron(v, w), random_density(2, rng))
        np.testing.assert_allclose(ch.matrix, rot, atol=1e-12)
        np.testing.assert_allclose(ch.vector, 0, atol=1e-12)
    np.testing.assert_allclose(rotation_of(v), rot, atol=1e-12)


def test_f_matrix_examples(rng):
    r = random_bloch(rng)
    np.testing.assert_allclose(f_matrix_analytic((Q, Q, Q), r), 0, atol=1e-15)
    np.testing.assert_allclose(f_matrix_analytic((0, 0, 0), r), np.eye(3), atol=1e-15)
    f = f_matrix_analytic((Q, Q, 0.2), r)
    assert np.linalg.matrix_rank(f, tol=1e-12) == 1
    np.testing.assert_allclose(f[:, 2], np.cos(0.4) * np.array([-r[1], r[0], 0]), atol=1e-15)


def test_det_examples(rng):
    for _ in range(20):
        r = random_bloch(rng)
        assert det_f_analytic((Q, 0, 0), r) == pytest.approx(r[0] ** 2, abs=1e-15)
        assert abs(det_f_analytic((Q, Q, rng.uniform(-3, 3)), r)) < 1e-15
        assert det_f_analytic((0, 0, 0), r) == 1


def test_det_formula_matches_matrix_determinant(rng):
    for _ in range(10_000):
        angles, r = rng.uniform(-np.pi, np.pi, 3), random_bloch(rng)
        assert abs(np.linalg.det(f_matrix_analytic(angles, r)) - det_f_analytic(angles, r)) < 1e-12


def _det_vanishes_identically(angles) -> bool:
    # det is a quadratic form in r without cross terms: check r = 0 and the axes
    return max(abs(det_f_analytic(angles, r)) for r in np.vstack([np.zeros(3), np.eye(3)])) < 1e-12


@pytest.mark.parametrize("combo", list(itertools.product([Q, -Q, 3 * Q, None], repeat=3)))
def test_det_vanishing_conditions_on_critical_set(rng, combo):
    angles = np.array([rng.uniform(-1.5, 1.5) if a is None else a for a in combo])
    critical = np.sum(np.abs(np.cos(2 * angles)) < 1e-9)
    assert _det_vanishes_identically(angles) == (critical >= 2)


def test_det_nonvanishing_off_critical_grid():
    grid = np.linspace(-np.pi / 2, np.pi / 2, 20)  # avoids +-pi/4 by construction
    for angles in itertools.product(grid, repeat=3):
        assert not _det_vanishes_identically(angles)


@pytest.mark.parametrize("sx, sy", list(itertools.product([1, -1], repeat=2)))
def test_rank_one_products_vanish(rng, sx, sy):
    u = expm_interaction((sx * Q, sy * Q, rng.uniform(-Q, Q)))
    for _ in range(200):
        f1 = concurrent_channel(u, density_from_bloch(random_bloch(rng))).matrix
        f2 = concurrent_channel(u, density_from_bloch(random_bloch(rng))).matrix
        assert np.abs(f2 @ f1).max() < 1e-10


def test_u_alpha_z_linear_part_ignores_m_z_but_offset_does_not(rng):
    u = u_alpha_z(np.pi / 8)
    for _ in range(20):
        m = random_bloch(rng, radius=0.5)
        up, down = m + [0, 0, 0.4], m - [0, 0, 0.4]
        ch_up, ch_down = system_channel(u, density_from_bloch(up)), system_channel(u, density_from_bloch(down))
        np.testing.assert_allclose(ch_up.matrix, ch_down.matrix, atol=1e-12)
        # the z output follows the memory population
        assert ch_up.vector[2] - ch_down.vector[2] == pytest.approx(0.8, abs=1e-12)
    # hence sigma_z reaches the output and no memory direction is irrelevant
    out = partial_trace(u @ np.kron(np.eye(2) / 2, PAULIS[2]) @ dagger(u), [2, 2], [0])
    np.testing.assert_allclose(out, PAULIS[2], atol=1e-12)
    assert irrelevant_subspace(u).dim == 0


def test_irrelevant_subspace_controlled_phase():
    # exp(i a ZZ): only the memory population matters to the system
    sub = irrelevant_subspace(expm_interaction((0, 0, 0.3)))
    assert sub.dim == 2
    assert sub.overlap([1, 0, 0]) > 1 - 1e-9 and sub.overlap([0, 1, 0]) > 1 - 1e-9


def test_irrelevant_subspace_factorized(rng):
    assert irrelevant_subspace(np.kron(random_local(rng), random_local(rng))).dim == 3


def _brute_force_irrelevant(u, rng, samples=100):
    """Nullspace of the stacked maps a -> tr_mem[u (rho (x) a.sigma) u^dag]
    over many random rho, via a plain numpy SVD."""
    rows = []
    for _ in range(samples):
        rho = random_density(2, rng)
        cols = [partial_trace(u @ np.kron(rho, p) @ dagger(u), [2, 2], [0]).reshape(-1) for p in PAULIS]
        block = np.column_stack(cols)
        rows.extend([block.real, block.imag])
    _, s, vh = np.linalg.svd(np.vstack(rows))
    return vh[s < 1e-9 * s.max()]


@pytest.mark.parametrize("name", ["cnot", "u_alpha_z", "haar"])
def test_irrelevant_subspace_matches_brute_force(rng, name):
    u = {"cnot": CNOT, "u_alpha_z": u_alpha_z(0.3), "haar": haar_unitary(4, rng)}[name]
    sub = irrelevant_subspace(u)
    oracle = _brute_force_irrelevant(u, rng)
    assert sub.dim == oracle.shape[0]
    np.testing.assert_allclose(sub.projector().real, oracle.T @ oracle, atol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_irrelevant_elements_never_reach_the_output(seed):
    rng = np.random.default_rng(seed)
    a, b, c = random_local(rng), random_local(rng), random_local(rng)
    u = np.kron(a, b) @ expm_interaction((0, 0, rng.uniform(-0.7, 0.7))) @ np.kron(c, np.eye(2))
    sub = irrelevant_subspace(u)
    assert sub.dim >= 1
    for vec in sub.basis:
        op = sum(x * p for x, p in zip(vec, PAULIS))
        for _ in range(100):
            out = partial_trace(u @ np.kron(random_density(2, rng), op) @ dagger(u), [2, 2], [0])
            assert np.linalg.norm(out) < 1e-9
