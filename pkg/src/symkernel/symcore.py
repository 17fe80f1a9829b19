"""Partitions, (anti-)symmetric polynomials, Schur functions and norm constants.

Point arguments are array-likes whose trailing axis holds the ``n``
coordinates; leading axes are treated as a batch, so every evaluator
works equally on a single point or on a stack of quadrature nodes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    DegeneratePointError,
    DomainError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidWeightError,
)

DEGENERACY_RTOL = 1e-6


class Partition(tuple):
    """Weakly decreasing tuple of non-negative integers, padded to length n."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(x) for x in parts)
        if not parts:
            raise InvalidDimensionError("a partition needs at least one part")
        if parts[-1] < 0 or any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidInputError(f"{parts} is not weakly decreasing and non-negative")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def to_strict(self) -> "StrictPartition":
        return StrictPartition(a + b for a, b in zip(self, delta(len(self))))


class StrictPartition(tuple):
    """Strictly decreasing tuple ``p = m + delta(n)``."""

    def __new__(cls, parts: Iterable[int]):
        parts = tuple(int(x) for x in parts)
        if not parts:
            raise InvalidDimensionError("a partition needs at least one part")
        if parts[-1] < 0 or any(a <= b for a, b in zip(parts, parts[1:])):
            raise InvalidInputError(f"{parts} is not strictly decreasing and non-negative")
        return super().__new__(cls, parts)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def shape(self) -> Partition:
        """The partition ``m`` with ``self == m + delta``."""
        return Partition(a - b for a, b in zip(self, delta(len(self))))


def delta(n: int) -> StrictPartition:
    """Staircase ``(n-1, n-2, ..., 1, 0)``."""
    if n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n}")
    return StrictPartition(range(n - 1, -1, -1))


def _partitions_of(k: int, n: int, largest: int) -> Iterator[tuple[int, ...]]:
    # partitions of k into at most n parts, each part <= largest, zero-padded
    if n == 0:
        if k == 0:
            yield ()
        return
    for first in range(min(k, largest), -1, -1):
        if first * n < k:
            break
        for rest in _partitions_of(k - first, n - 1, first):
            yield (first,) + rest


def enumerate_partitions(n: int, max_weight: int) -> list[Partition]:
    """All partitions of length ``n`` with weight <= ``max_weight``.

    Ordered by weight, then lexicographically ascending within a weight.
    This ordering is used by every series and Gram computation.
    """
    if n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n}")
    return list(_enumerate_partitions(n, max_weight))


@lru_cache(maxsize=256)
def _enumerate_partitions(n: int, max_weight: int) -> tuple[Partition, ...]:
    out: list[Partition] = []
    for k in range(max_weight + 1):
        out.extend(Partition(p) for p in sorted(_partitions_of(k, n, k)))
    return tuple(out)


def enumerate_strict_partitions(n: int, max_weight: int) -> list[StrictPartition]:
    return [m.to_strict() for m in enumerate_partitions(n, max_weight)]


def _as_points(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        raise InvalidDimensionError("expected a vector of coordinates")
    # subnormal entries overflow the LU pivot reciprocal
    tiny = np.abs(z) < np.finfo(float).tiny
    if tiny.any():
        z = np.where(tiny, 0.0, z)
    return z


def _unbox(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def check_in_polydisc(z) -> np.ndarray:
    z = _as_points(z)
    if z.shape[-1] < 1:
        raise InvalidDimensionError("point has no coordinates")
    if not np.all(np.isfinite(z)) or np.any(np.abs(z) >= 1.0):
        raise DomainError("every coordinate must have modulus < 1")
    return z


def elementary_symmetric(z) -> np.ndarray:
    """Values ``(e_1(z), ..., e_n(z))`` from the coefficients of prod(t + z_i)."""
    z = _as_points(z)
    n = z.shape[-1]
    e = np.zeros(z.shape[:-1] + (n + 1,), dtype=complex)
    e[..., 0] = 1.0
    for i in range(n):
        zi = z[..., i, None]
        e[..., 1 : i + 2] = e[..., 1 : i + 2] + zi * e[..., 0 : i + 1]
    return e[..., 1:]


@dataclass(frozen=True)
class SymmetrizedPoint:
    """A point of the symmetrized polydisc, optionally with a polydisc preimage."""

    coords: np.ndarray
    provenance: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords, dtype=complex))
        if self.provenance is not None:
            pre = np.asarray(self.provenance, dtype=complex)
            object.__setattr__(self, "provenance", pre)
            if not np.allclose(elementary_symmetric(pre), self.coords, rtol=1e-12, atol=1e-14):
                raise InvalidInputError("coords do not match the symmetrized preimage")

    @property
    def n(self) -> int:
        return self.coords.shape[-1]


def symmetrize(z) -> SymmetrizedPoint:
    z = check_in_polydisc(z)
    return SymmetrizedPoint(elementary_symmetric(z), provenance=z)


def vandermonde(z):
    """``prod_{i<j} (z_i - z_j)``."""
    z = _as_points(z)
    n = z.shape[-1]
    out = np.ones(z.shape[:-1], dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            out = out * (z[..., i] - z[..., j])
    return _unbox(out)


def antisymmetrized_monomial(p: Sequence[int], z):
    """``det(z_i ** p_j)`` by LU with partial pivoting; exactly 0 for repeated exponents."""
    z = _as_points(z)
    p = tuple(int(x) for x in p)
    if len(p) != z.shape[-1]:
        raise InvalidDimensionError(f"multi-index {p} does not match {z.shape[-1]} coordinates")
    if len(set(p)) < len(p):
        return _unbox(np.zeros(z.shape[:-1], dtype=complex))
    mat = z[..., :, None] ** np.asarray(p)[None, :]
    return _unbox(np.linalg.det(mat))


def antisymmetrized_table(ps: Sequence[Sequence[int]], z) -> np.ndarray:
    """``a_p(z)`` for every multi-index in ``ps``, shape ``batch + (len(ps),)``."""
    z = _as_points(z)
    if not ps:
        return np.zeros(z.shape[:-1] + (0,), dtype=complex)
    exps = np.asarray(ps, dtype=int)
    if exps.shape[-1] != z.shape[-1]:
        raise InvalidDimensionError("multi-index length does not match point dimension")
    mats = z[..., None, :, None] ** exps[:, None, :]
    out = np.linalg.det(mats)
    repeated = np.array([len(set(p)) < len(p) for p in exps.tolist()])
    out[..., repeated] = 0.0
    return out


def complete_homogeneous_table(kmax: int, z) -> np.ndarray:
    """Array of ``h_0(z), ..., h_kmax(z)`` along a new trailing axis.

    Built variable by variable from the power series of prod 1/(1 - z_i t);
    every step is a sum of products, so there is no cancellation.
    """
    z = _as_points(z)
    h = np.zeros(z.shape[:-1] + (kmax + 1,), dtype=complex)
    h[..., 0] = 1.0
    for i in range(z.shape[-1]):
        zi = z[..., i]
        for k in range(1, kmax + 1):
            h[..., k] = h[..., k] + zi * h[..., k - 1]
    return h


def complete_homogeneous(k: int, z):
    z = _as_points(z)
    if k < 0:
        return _unbox(np.zeros(z.shape[:-1], dtype=complex))
    return _unbox(complete_homogeneous_table(k, z)[..., k])


def _jacobi_trudi_indices(m: Sequence[int]) -> np.ndarray:
    n = len(m)
    i = np.arange(n)
    return np.asarray(m)[:, None] - i[:, None] + i[None, :]


def schur(m: Sequence[int], z):
    """Schur polynomial ``s_m`` via the Jacobi-Trudi determinant ``det(h_{m_i - i + j})``.

    Well defined at coincident coordinates, unlike the bialternant quotient.
    """
    z = _as_points(z)
    m = Partition(m)
    if len(m) != z.shape[-1]:
        raise InvalidDimensionError(f"partition {tuple(m)} does not match {z.shape[-1]} coordinates")
    idx = _jacobi_trudi_indices(m)
    kmax = max(int(idx.max()), 0)
    h = complete_homogeneous_table(kmax, z)
    mat = np.where(idx >= 0, h[..., np.clip(idx, 0, None)], 0.0)
    return _unbox(np.linalg.det(mat))


def schur_table(partitions: Sequence[Sequence[int]], z) -> np.ndarray:
    """Schur values for many partitions at once, shape ``batch + (len(partitions),)``."""
    z = _as_points(z)
    n = z.shape[-1]
    if not partitions:
        return np.zeros(z.shape[:-1] + (0,), dtype=complex)
    idx = np.stack([_jacobi_trudi_indices(Partition(m)) for m in partitions])
    if idx.shape[-1] != n:
        raise InvalidDimensionError("partition length does not match point dimension")
    h = complete_homogeneous_table(max(int(idx.max()), 0), z)
    # h: batch + (K,), idx: (P, n, n) -> batch + (P, n, n)
    mats = np.where(idx >= 0, h[..., np.clip(idx, 0, None)], 0.0)
    return np.linalg.det(mats)


def min_pairwise_distance(z) -> np.ndarray:
    z = _as_points(z)
    n = z.shape[-1]
    if n < 2:
        return np.full(z.shape[:-1], np.inf)
    diffs = np.abs(z[..., :, None] - z[..., None, :])
    iu = np.triu_indices(n, 1)
    return diffs[..., iu[0], iu[1]].min(axis=-1)


def is_degenerate(z, rtol: float = DEGENERACY_RTOL) -> np.ndarray:
    """True where ``min_{i<j} |z_i - z_j| < rtol * (1 + max |z_i|)``."""
    z = _as_points(z)
    scale = 1.0 + np.abs(z).max(axis=-1)
    return min_pairwise_distance(z) < rtol * scale


def schur_bialternant(m: Sequence[int], z, rtol: float = DEGENERACY_RTOL):
    """Schur polynomial as the quotient ``a_{m+delta}(z) / a_delta(z)``.

    Raises DegeneratePointError near the diagonal; use :func:`schur` there.
    Pass ``rtol=0`` to disable the guard (for perturbation studies).
    """
    z = _as_points(z)
    m = Partition(m)
    if len(m) != z.shape[-1]:
        raise InvalidDimensionError(f"partition {tuple(m)} does not match {z.shape[-1]} coordinates")
    if np.any(is_degenerate(z, rtol)):
        raise DegeneratePointError(
            "coordinates nearly coincide; the bialternant is 0/0 here, use schur() instead"
        )
    return _unbox(
        np.asarray(antisymmetrized_monomial(m.to_strict(), z))
        / np.asarray(antisymmetrized_monomial(delta(len(m)), z))
    )


def check_weight(lam: float, minimum: float = 1.0) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam < minimum:
        raise InvalidWeightError(f"weight must be >= {minimum}, got {lam}")
    return lam


def pochhammer(lam: float, k: int) -> float:
    """Rising factorial ``lam (lam+1) ... (lam+k-1)``."""
    lam = float(lam)
    if not lam > 0:
        raise InvalidWeightError(f"pochhammer needs lam > 0, got {lam}")
    if k < 0:
        raise InvalidInputError("k must be non-negative")
    out = 1.0
    for i in range(k):
        out *= lam + i
    return out


def pochhammer_ratio(lam: float, k: int) -> float:
    """``(lam)_k / k!`` accumulated one factor at a time."""
    out = 1.0
    for i in range(k):
        out *= (lam + i) / (i + 1)
    return out


def basis_norm_constant(p: Sequence[int], lam: float) -> float:
    """Normalizer ``c_p = sqrt((lam)_p / (n! p!))`` making ``c_p a_p`` a unit vector."""
    lam = check_weight(lam)
    p = StrictPartition(p)
    ratio = 1.0
    for pj in p:
        ratio *= pochhammer_ratio(lam, pj)
    return math.sqrt(ratio / math.factorial(len(p)))


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=16)
def signed_permutations(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    return tuple((s, permutation_sign(s)) for s in itertools.permutations(range(n)))


def orbit(p: Sequence[int]) -> frozenset[tuple[int, ...]]:
    """All rearrangements of the multi-index ``p``."""
    return frozenset(itertools.permutations(tuple(p)))


def orbit_disjointness(p: Sequence[int], q: Sequence[int]) -> bool:
    """Whether the permutation orbits of two strict partitions are disjoint."""
    p, q = StrictPartition(p), StrictPartition(q)
    if len(p) != len(q):
        raise InvalidDimensionError("partitions must have the same length")
    return orbit(p).isdisjoint(orbit(q))


@dataclass
class SparsePolynomial:
    """Polynomial in ``n`` variables stored as ``{exponent tuple: coefficient}``."""

    n: int
    terms: dict[tuple[int, ...], complex] = field(default_factory=dict)
    prune: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidDimensionError(f"dimension must be >= 1, got {self.n}")
        clean: dict[tuple[int, ...], complex] = {}
        for exp, coef in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.n or min(exp) < 0:
                raise InvalidInputError(f"bad exponent {exp} for {self.n} variables")
            clean[exp] = clean.get(exp, 0) + complex(coef)
        self.terms = {e: c for e, c in clean.items() if abs(c) > self.prune or (self.prune == 0 and c != 0)}

    @classmethod
    def monomial(cls, exponent: Sequence[int], coef: complex = 1.0) -> "SparsePolynomial":
        return cls(len(exponent), {tuple(exponent): coef})

    @classmethod
    def from_mapping(cls, n: int, terms: Mapping[tuple[int, ...], complex], prune: float = 0.0):
        return cls(n, dict(terms), prune)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def max_exponent(self) -> int:
        return max((max(e) for e in self.terms), default=0)

    def _combine(self, other: "SparsePolynomial", sign: int) -> "SparsePolynomial":
        if other.n != self.n:
            raise InvalidDimensionError("polynomials live in different dimensions")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + sign * c
        return SparsePolynomial(self.n, terms, max(self.prune, other.prune))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, scalar):
        return SparsePolynomial(self.n, {e: c * scalar for e, c in self.terms.items()}, self.prune)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def permuted(self, perm: Sequence[int]) -> "SparsePolynomial":
        """The polynomial ``z -> f(z_perm[0], ..., z_perm[n-1])``."""
        terms: dict[tuple[int, ...], complex] = {}
        for e, c in self.terms.items():
            new = [0] * self.n
            for i, a in enumerate(e):
                new[perm[i]] = a
            terms[tuple(new)] = terms.get(tuple(new), 0) + c
        return SparsePolynomial(self.n, terms, self.prune)

    def evaluate(self, z):
        z = _as_points(z)
        if z.shape[-1] != self.n:
            raise InvalidDimensionError(f"expected {self.n} coordinates, got {z.shape[-1]}")
        if not self.terms:
            return _unbox(np.zeros(z.shape[:-1], dtype=complex))
        exps = np.array(list(self.terms.keys()))
        coefs = np.array(list(self.terms.values()), dtype=complex)
        powers = np.prod(z[..., None, :] ** exps, axis=-1)
        return _unbox(powers @ coefs)

    __call__ = evaluate

    def max_coefficient_difference(self, other: "SparsePolynomial") -> float:
        diff = self - other
        return max((abs(c) for c in diff.terms.values()), default=0.0)


def antisymmetrized_polynomial(p: Sequence[int]) -> SparsePolynomial:
    """``a_p`` expanded as ``sum_sigma sgn(sigma) z^(p o sigma)``."""
    p = tuple(int(x) for x in p)
    n = len(p)
    terms: dict[tuple[int, ...], complex] = {}
    for perm, sign in signed_permutations(n):
        exp = tuple(p[perm[i]] for i in range(n))
        terms[exp] = terms.get(exp, 0) + sign
    return SparsePolynomial(n, terms)
