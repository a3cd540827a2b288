"""Memory depth of the channel generated by a two-qubit interaction.

Two independent routes:

* :func:`classify_analytic` reads the verdict off the canonical KAK angles
  and the memory-side locals (depth is 0, 1, 2 or infinite for a qubit
  memory).
* :func:`classify_numeric` searches for the smallest ``n`` such that every
  length-``n`` product of concurrent matrices maps the memory Bloch ball
  into the irrelevant directions. ``F(r)`` is affine in ``r``, so every
  product is multi-affine in the inputs and it suffices to check products
  over the four affinely independent Bloch vectors ``0, e_x, e_y, e_z``.
  This route can only report "exceeds bound", never "infinite".
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .bloch import (
    AFFINE_PROBES,
    concurrent_channel,
    density_from_bloch,
    random_bloch,
    relevant_projector,
    rotation_of,
)
from .kak import KakDecomposition, kak_decompose
from .linalg import STRUCTURAL_TOL, check_unitary

DEFAULT_N_MAX = 4
#: a criterion within this factor of the tolerance is flagged as near-threshold
NEAR_FACTOR = 1e3


class Verdict(enum.Enum):
    ZERO = 0
    ONE = 1
    TWO = 2
    INFINITE = "inf"

    @property
    def depth(self) -> int | None:
        return None if self is Verdict.INFINITE else self.value


@dataclass
class AnalyticCertificate:
    angles: np.ndarray
    cosines: np.ndarray
    # names of the vanishing-cosine conditions that hold, e.g. ["xy"]
    conditions: list[str]
    distinguished_axis: int | None = None
    s_matrix: np.ndarray | None = None
    s_constraint_residual: float | None = None
    near_threshold: list[str] = field(default_factory=list)
    witness_inputs: list[list[float]] | None = None
    witness_norm: float | None = None


@dataclass
class DepthClassification:
    verdict: Verdict
    certificate: AnalyticCertificate
    decomposition: KakDecomposition

    @property
    def depth(self) -> int | None:
        return self.verdict.depth


@dataclass
class NumericDepthResult:
    depth: int | None
    n_max: int
    residuals: list[float]

    @property
    def exceeds_bound(self) -> bool:
        return self.depth is None

    @property
    def status(self) -> str:
        return f"ExceedsBound({self.n_max})" if self.depth is None else f"DepthIs({self.depth})"


def _near(value: float, tol: float) -> bool:
    return tol <= value < tol * NEAR_FACTOR or tol / NEAR_FACTOR < value < tol


def classify_analytic(u, tol: float = STRUCTURAL_TOL, witness_length: int = DEFAULT_N_MAX) -> DepthClassification:
    u = check_unitary(u, 4)
    dec = kak_decompose(u)
    angles = dec.angles
    cosines = np.cos(2 * angles)
    vanishing = np.abs(cosines) < tol
    names = ("x", "y", "z")
    conditions = [names[i] + names[j] for i, j in itertools.combinations(range(3), 2) if vanishing[i] and vanishing[j]]
    cert = AnalyticCertificate(angles=angles, cosines=cosines, conditions=conditions)
    cert.near_threshold = [f"cos2a_{names[j]}" for j in range(3) if _near(abs(cosines[j]), tol)]

    if np.linalg.norm(angles) < tol:
        verdict = Verdict.ZERO
    elif np.all(np.abs(angles - np.pi / 4) < tol):
        verdict = Verdict.ONE
    elif vanishing.sum() == 2:
        k = int(np.flatnonzero(~vanishing)[0])
        s = rotation_of(dec.w2 @ dec.w1)
        off = max(abs(s[k, j]) for j in range(3) if j != k)
        cert.distinguished_axis = k
        cert.s_matrix = s
        cert.s_constraint_residual = float(off)
        if _near(off, tol):
            cert.near_threshold.append("s_constraint")
        verdict = Verdict.TWO if off < tol else Verdict.INFINITE
    else:
        verdict = Verdict.INFINITE

    if verdict is Verdict.INFINITE:
        seq, norm = _witness(u, witness_length)
        cert.witness_inputs = seq
        cert.witness_norm = norm
    return DepthClassification(verdict, cert, dec)


def tetrahedral_matrices(u) -> list[np.ndarray]:
    """Concurrent matrices ``F(r)`` at ``r = 0, e_x, e_y, e_z``."""
    return [concurrent_channel(u, density_from_bloch(r)).matrix for r in AFFINE_PROBES]


def _products(mats: list[np.ndarray], n: int):
    """Yield ``(index_sequence, F_{i_n} ... F_{i_1})`` over all length-n words."""
    if n == 0:
        yield (), np.eye(3)
        return
    for word, prev in _products(mats, n - 1):
        for i, m in enumerate(mats):
            yield word + (i,), m @ prev


def relevant_residual(u, n: int, p_rel: np.ndarray | None = None, mats=None) -> tuple[float, tuple[int, ...]]:
    """Max over tetrahedral words of ``||P_rel F_n ... F_1||_F`` and its argmax."""
    p_rel = relevant_projector(u) if p_rel is None else p_rel
    mats = tetrahedral_matrices(u) if mats is None else mats
    best, arg = -1.0, ()
    for word, g in _products(mats, n):
        val = float(np.linalg.norm(p_rel @ g))
        if val > best:
            best, arg = val, word
    return best, arg


def _witness(u, n: int):
    norm, word = relevant_residual(u, n)
    return [AFFINE_PROBES[i].tolist() for i in word], norm


def classify_numeric(u, n_max: int = DEFAULT_N_MAX, tol: float = STRUCTURAL_TOL) -> NumericDepthResult:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    u = check_unitary(u, 4)
    p_rel = relevant_projector(u, tol)
    mats = tetrahedral_matrices(u)
    residuals = [relevant_residual(u, n, p_rel, mats)[0] for n in range(n_max + 1)]
    passing = [n for n, r in enumerate(residuals) if r < tol]
    return NumericDepthResult(passing[0] if passing else None, n_max, residuals)


@dataclass
class CrosscheckReport:
    analytic: DepthClassification
    numeric: NumericDepthResult

    @property
    def agree(self) -> bool:
        if self.analytic.verdict is Verdict.INFINITE:
            return self.numeric.exceeds_bound
        return self.numeric.depth == self.analytic.depth


def crosscheck(u, n_max: int = DEFAULT_N_MAX, tol: float = STRUCTURAL_TOL) -> CrosscheckReport:
    return CrosscheckReport(classify_analytic(u, tol, n_max), classify_numeric(u, n_max, tol))


def extension_closure_holds(u, depth: int, tol: float = STRUCTURAL_TOL) -> bool:
    """A relevant-free product at length ``depth`` stays relevant-free at ``depth + 1``."""
    return relevant_residual(u, depth + 1)[0] < tol


def max_det_over_samples(u, rng: np.random.Generator, samples: int = 100) -> float:
    """Largest ``|det F(r)|`` over random Bloch vectors in the unit ball."""
    worst = 0.0
    for _ in range(samples):
        r = random_bloch(rng)
        f = concurrent_channel(u, density_from_bloch(r)).matrix
        worst = max(worst, abs(float(np.linalg.det(f))))
    return worst
