"""Classical bit memory channels: the 24 permutations of two-bit configurations.

A configuration ``(s, m)`` of system bit ``s`` and memory bit ``m`` has index
``2*s + m``, matching the system-first qubit order. States are probability
pairs; the computation is exact over :class:`fractions.Fraction`.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .depth import DEFAULT_N_MAX

_ZERO, _ONE = Fraction(0), Fraction(1)


@dataclass(frozen=True)
class BitPermutation:
    mapping: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.mapping) != [0, 1, 2, 3]:
            raise ValueError(f"not a permutation of 0..3: {self.mapping}")

    @property
    def matrix(self) -> np.ndarray:
        """0/1 matrix with ``matrix[mapping[i], i] = 1``."""
        m = np.zeros((4, 4))
        for i, j in enumerate(self.mapping):
            m[j, i] = 1.0
        return m


@dataclass(frozen=True)
class ClassicalDepthEntry:
    permutation: BitPermutation
    depth: int | None
    n_max: int

    @property
    def label(self) -> str:
        return f"ExceedsBound({self.n_max})" if self.depth is None else str(self.depth)


def enumerate_bit_permutations() -> list[BitPermutation]:
    return [BitPermutation(p) for p in itertools.permutations(range(4))]


def _output_marginals(perm: BitPermutation, p_in: Fraction, q: Fraction) -> tuple[Fraction, Fraction]:
    """``(P(s'=0), P(m'=0))`` for independent inputs ``P(s=0)=p_in``, ``P(m=0)=q``."""
    ps = (p_in, 1 - p_in)
    pm = (q, 1 - q)
    sys0 = mem0 = _ZERO
    for idx in range(4):
        weight = ps[idx // 2] * pm[idx % 2]
        out = perm.mapping[idx]
        if out // 2 == 0:
            sys0 += weight
        if out % 2 == 0:
            mem0 += weight
    return sys0, mem0


def _memory_slope(perm: BitPermutation, p_in: Fraction) -> Fraction:
    return _output_marginals(perm, p_in, _ONE)[1] - _output_marginals(perm, p_in, _ZERO)[1]


def _system_slope(perm: BitPermutation, p_in: Fraction) -> Fraction:
    return _output_marginals(perm, p_in, _ONE)[0] - _output_marginals(perm, p_in, _ZERO)[0]


def classify_classical(perm: BitPermutation, n_max: int = DEFAULT_N_MAX) -> ClassicalDepthEntry:
    """Least ``n`` after which the system output no longer depends on the
    memory ``n`` uses back, checked on the affine input basis ``{0, 1}``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    basis = (_ZERO, _ONE)
    if all(_system_slope(perm, p) == 0 for p in basis):
        return ClassicalDepthEntry(perm, 0, n_max)
    slopes = {p: _memory_slope(perm, p) for p in basis}
    for n in range(1, n_max + 1):
        if all(math.prod(slopes[p] for p in seq) == 0 for seq in itertools.product(basis, repeat=n)):
            return ClassicalDepthEntry(perm, n, n_max)
    return ClassicalDepthEntry(perm, None, n_max)


def survey(n_max: int = DEFAULT_N_MAX) -> list[ClassicalDepthEntry]:
    return [classify_classical(p, n_max) for p in enumerate_bit_permutations()]


def depth_histogram(entries: list[ClassicalDepthEntry]) -> dict[str, int]:
    counts = Counter(e.label for e in entries)
    return dict(sorted(counts.items()))
