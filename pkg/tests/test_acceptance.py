"""Acceptance criteria, each at its stated tolerance and runtime budget.

Every criterion prints one PASS/FAIL line; the lines are repeated in the
terminal summary. Run standalone with ``python tests/test_acceptance.py``.
"""
import functools
import itertools
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES

from memdepth.bloch import (
    concurrent_channel,
    density_from_bloch,
    det_f_analytic,
    irrelevant_subspace,
    random_bloch,
)
from memdepth.classical import survey
from memdepth.depth import crosscheck, extension_closure_holds, max_det_over_samples
from memdepth.gates import (
    CNOT,
    IDENTITY,
    SWAP,
    bell_state,
    random_depth_two,
    random_factorized,
    random_swap_class,
    u_alpha_z,
)
from memdepth.kak import interaction_unitary, kak_compose, kak_decompose
from memdepth.linalg import haar_unitary
from memdepth.simulator import run_sequence, verify_reset_factorization

Q = np.pi / 4


def report(number: int, title: str, passed: bool, detail: str, elapsed: float, budget: float | None = None):
    timing = f"{elapsed:.2f} s" + (f" (budget {budget:g} s)" if budget else "")
    line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {title} | {detail} | {timing}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return line


def _timed(fn):
    t0 = time.perf_counter()
    result = fn()
    return result, time.perf_counter() - t0


def criterion_1():
    def work():
        worst = max(np.linalg.norm(kak_compose(kak_decompose(u)) - u) for u in (haar_unitary(4, s) for s in range(1000)))
        swap_err = float(np.abs(kak_decompose(SWAP).angles - Q).max())
        return worst, swap_err

    (worst, swap_err), dt = _timed(work)
    ok = worst < 1e-9 and swap_err < 1e-10 and dt < 10
    return ok, f"worst roundtrip residual {worst:.2e}, SWAP angle error {swap_err:.2e}", dt, 10


def criterion_2():
    def work():
        rng = np.random.default_rng(2)
        worst = 0.0
        for _ in range(10_000):
            angles, r = rng.uniform(-np.pi, np.pi, 3), random_bloch(rng)
            f = concurrent_channel(interaction_unitary(angles), density_from_bloch(r)).matrix
            worst = max(worst, abs(np.linalg.det(f) - det_f_analytic(angles, r)))
        probes = np.vstack([np.zeros(3), np.eye(3)])

        def vanishes(angles):
            # quadratic form in r without cross terms: r = 0 and the axes decide it
            return max(abs(det_f_analytic(angles, r)) for r in probes) < 1e-12

        grid = np.linspace(-np.pi / 2, np.pi / 2, 20)
        critical_values = [Q, -Q, 3 * Q, -3 * Q]
        cases = list(itertools.product(grid, repeat=3))
        for combo in itertools.product(critical_values + [None], repeat=3):
            for _ in range(3):
                cases.append(tuple(rng.uniform(-1.5, 1.5) if a is None else a for a in combo))
        mismatches = sum(
            vanishes(a) != (np.sum(np.abs(np.cos(2 * np.asarray(a))) < 1e-9) >= 2) for a in cases
        )
        return worst, mismatches, len(cases)

    (worst, mismatches, n_cases), dt = _timed(work)
    ok = worst < 1e-10 and mismatches == 0 and dt < 30
    return ok, f"max |det F - formula| {worst:.2e}; vanishing-condition mismatches {mismatches}/{n_cases}", dt, 30


@functools.lru_cache(maxsize=1)
def classification_cases():
    rng = np.random.default_rng(3)
    cases = [("factorized", IDENTITY, 0)]
    cases += [("factorized", random_factorized(rng), 0) for _ in range(50)]
    cases += [("swap-class", random_swap_class(rng), 1) for _ in range(50)]
    cases += [("depth-two family", random_depth_two(rng), 2) for _ in range(50)]
    cases += [("cnot", CNOT, None)]
    cases += [("haar", haar_unitary(4, rng), None) for _ in range(500)]
    return cases


def criterion_3():
    def work():
        wrong, disagree = [], 0
        for name, u, expected in classification_cases():
            rep = crosscheck(u)
            disagree += not rep.agree
            if rep.analytic.depth != expected:
                wrong.append(name)
        return wrong, disagree

    (wrong, disagree), dt = _timed(work)
    n = len(classification_cases())
    ok = not wrong and disagree == 0 and dt < 60
    return ok, f"{n} unitaries, {len(wrong)} unexpected verdicts, {disagree} analytic/numeric disagreements", dt, 60


def criterion_4():
    def work():
        rng = np.random.default_rng(4)
        worst = 0.0
        for sx, sy in itertools.product([1, -1], repeat=2):
            u = interaction_unitary((sx * Q, sy * Q, rng.uniform(-Q, Q)))
            for _ in range(250):
                f1 = concurrent_channel(u, density_from_bloch(random_bloch(rng))).matrix
                f2 = concurrent_channel(u, density_from_bloch(random_bloch(rng))).matrix
                worst = max(worst, float(np.abs(f2 @ f1).max()))
        return worst

    worst, dt = _timed(work)
    return worst < 1e-10, f"1000 pairs over all four sign branches, max |F2 F1| {worst:.2e}", dt, None


def criterion_5():
    def work():
        results = []
        for az in (np.pi / 8, 0.1, -0.3, 0.6):
            sub = irrelevant_subspace(u_alpha_z(az))
            overlap = sub.overlap([0, 0, 1]) if sub.dim else 0.0
            results.append((sub.dim, overlap))
        return results

    results, dt = _timed(work)
    ok = all(dim == 1 and overlap > 1 - 1e-9 for dim, overlap in results)
    dims = sorted({dim for dim, _ in results})
    detail = f"expected span(sigma_z); computed irrelevant dimensions {dims}"
    if not ok:
        detail += " (sigma_z reaches the system output through the channel offset)"
    return ok, detail, dt, None


def criterion_6():
    def work():
        rng = np.random.default_rng(6)

        def states(k):
            return [density_from_bloch(random_bloch(rng)) for _ in range(k)]

        worst_fact = worst_off = 0.0
        for _ in range(100):
            r = verify_reset_factorization(random_depth_two(rng), states(2), states(2), bell_state(), states(1)[0])
            worst_fact = max(worst_fact, r.factorization_residual)
            worst_off = max(worst_off, r.omega_offdiag_residual)
        cnot_fail = sum(
            verify_reset_factorization(CNOT, states(2), states(2), bell_state(), states(1)[0]).factorization_residual > 1e-6
            for _ in range(100)
        )
        return worst_fact, worst_off, cnot_fail

    (worst_fact, worst_off, cnot_fail), dt = _timed(work)
    ok = worst_fact < 1e-9 and worst_off < 1e-9 and cnot_fail >= 95 and dt < 120
    detail = f"depth-2 max residual {worst_fact:.2e}, max off-diagonal {worst_off:.2e}; CNOT failures {cnot_fail}/100"
    return ok, detail, dt, 120


def criterion_7():
    def work():
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(50):
            u = u_alpha_z(rng.uniform(-Q, Q))
            inputs = [density_from_bloch(random_bloch(rng)) for _ in range(6)]
            a = run_sequence(u, density_from_bloch(random_bloch(rng)), inputs).memory_blochs
            b = run_sequence(u, density_from_bloch(random_bloch(rng)), inputs).memory_blochs
            worst = max(worst, max(float(np.linalg.norm(x - y)) for x, y in zip(a[2:], b[2:])))
        return worst

    worst, dt = _timed(work)
    return worst < 1e-10, f"max memory difference from m3 on {worst:.2e} over 50 runs", dt, None


def criterion_8():
    def work():
        entries = survey(4)
        labels = {e.permutation.mapping: e.label for e in entries}
        return entries, labels

    (entries, labels), dt = _timed(work)
    realized = set(labels.values())
    ok = (
        len(entries) == 24
        and realized <= {"0", "1", "ExceedsBound(4)"}
        and "2" not in realized
        and labels[(0, 1, 2, 3)] == "0"
        and labels[(0, 2, 1, 3)] == "1"
        and dt < 1
    )
    return ok, f"{len(entries)} permutations, realized depths {sorted(realized)}", dt, 1


def criterion_9():
    def work():
        rng = np.random.default_rng(9)
        closure_fail = singular_fail = checked = 0
        for _, u, expected in classification_cases():
            if expected is None:
                continue
            closure_fail += not extension_closure_holds(u, expected)
            if irrelevant_subspace(u).dim < 3:
                checked += 1
                singular_fail += max_det_over_samples(u, rng, 100) >= 1e-9
        return closure_fail, singular_fail, checked

    (closure_fail, singular_fail, checked), dt = _timed(work)
    ok = closure_fail == 0 and singular_fail == 0
    detail = f"extension-closure failures {closure_fail}; singularity failures {singular_fail}/{checked}"
    return ok, detail, dt, None


CRITERIA = [
    (1, "KAK roundtrip", criterion_1),
    (2, "determinant formula and vanishing conditions", criterion_2),
    (3, "depth classification table", criterion_3),
    (4, "rank-1 nilpotency", criterion_4),
    (5, "irrelevant parameter of the U_az family", criterion_5),
    (6, "reset-sequence factorization", criterion_6),
    (7, "depth-2 trajectory", criterion_7),
    (8, "classical survey", criterion_8),
    (9, "cross-oracle invariants", criterion_9),
]


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance(number, title, fn):
    ok, detail, elapsed, budget = fn()
    line = report(number, title, ok, detail, elapsed, budget)
    assert ok, line


if __name__ == "__main__":
    for number, title, fn in CRITERIA:
        report(number, title, *fn())
