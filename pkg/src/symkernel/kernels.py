"""Reproducing kernels on the polydisc and the symmetrized polydisc.

Every kernel uses the normalization ``||1|| = 1``.  Determinant routes
evaluate closed forms; series routes sum over the orthonormal
antisymmetric / Schur bases in the fixed graded-lex partition order and
report a geometric tail majorant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Sequence

import numpy as np

from . import symcore as sc
from .errors import (
    ConvergenceError,
    DegeneratePointError,
    DomainError,
    InvalidDimensionError,
    InvalidInputError,
    SingularEvaluationError,
)
from .symcore import SparsePolynomial, SymmetrizedPoint, check_weight

DEFAULT_MAX_WEIGHT = 30
TAIL_SAFETY = 10.0

Method = Literal["determinant", "series", "explicit", "product"]
METHODS = ("determinant", "series", "explicit", "product")


@dataclass(frozen=True)
class KernelResult:
    value: complex
    method: str
    truncation_degree: int | None = None
    tail_estimate: float | None = None
    points: tuple[SymmetrizedPoint, SymmetrizedPoint] | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidInputError(f"unknown method {self.method!r}")
        if (self.tail_estimate is not None) != (self.method == "series"):
            raise InvalidInputError("tail_estimate is reported exactly for series results")
        if self.tail_estimate is not None and not self.tail_estimate >= 0:
            raise InvalidInputError("tail_estimate must be non-negative")
        object.__setattr__(self, "value", complex(self.value))

    def __complex__(self) -> complex:
        return self.value


def _pair(z, w) -> tuple[np.ndarray, np.ndarray]:
    z = sc.check_in_polydisc(z)
    w = sc.check_in_polydisc(w)
    if z.ndim != 1 or w.ndim != 1:
        raise InvalidDimensionError("kernel arguments must be single points")
    if z.shape != w.shape:
        raise InvalidDimensionError(f"dimension mismatch: {z.shape[0]} vs {w.shape[0]}")
    return z, w


def _kernel_matrix(z: np.ndarray, w: np.ndarray, lam: float) -> np.ndarray:
    # principal branch is valid since Re(1 - z w*) > 0 on the bidisc
    return (1.0 - np.outer(z, np.conj(w))) ** (-lam)


def _rho(z: np.ndarray, w: np.ndarray) -> float:
    rho = float(np.abs(z).max() * np.abs(w).max())
    if rho >= 1.0:
        raise ConvergenceError(f"series does not converge for rho = {rho}")
    return rho


def _tail(last_layer: float, rho: float) -> float:
    """Geometric majorant of the omitted layers given the size of the last kept one."""
    if last_layer == 0.0 or rho == 0.0:
        return 0.0
    return TAIL_SAFETY * last_layer * rho / (1.0 - rho)


def bergman_kernel_polydisc(z, w, lam: float) -> complex:
    """``prod_i (1 - z_i conj(w_i)) ** -lam``."""
    lam = check_weight(lam)
    z, w = _pair(z, w)
    return complex(np.prod((1.0 - z * np.conj(w)) ** (-lam)))


def kernel_anti_det(z, w, lam: float) -> KernelResult:
    """Kernel of the antisymmetric subspace as ``det((1 - z_j conj(w_k))**-lam) / n!``."""
    lam = check_weight(lam)
    z, w = _pair(z, w)
    n = z.shape[0]
    value = np.linalg.det(_kernel_matrix(z, w, lam)) / math.factorial(n)
    return KernelResult(value, "determinant")


def hardy_kernel_anti(z, w) -> KernelResult:
    return kernel_anti_det(z, w, 1.0)


@lru_cache(maxsize=64)
def _series_data(n: int, lam: float, max_weight: int):
    strict = sc.enumerate_strict_partitions(n, max_weight)
    coef = np.array([sc.basis_norm_constant(p, lam) ** 2 for p in strict])
    layers = np.array([p.shape.weight for p in strict])
    return strict, coef, layers


def _layered_sum(terms: np.ndarray, layers: np.ndarray, max_weight: int, rho: float):
    value = terms.sum()
    last = float(np.abs(terms[layers == max_weight]).sum())
    return value, _tail(last, rho)


def kernel_anti_series(z, w, lam: float, max_weight: int = DEFAULT_MAX_WEIGHT) -> KernelResult:
    """``sum c_p^2 a_p(z) conj(a_p(w))`` over strict ``p = m + delta`` with ``|m| <= max_weight``."""
    lam = check_weight(lam)
    z, w = _pair(z, w)
    rho = _rho(z, w)
    strict, coef, layers = _series_data(z.shape[0], lam, max_weight)
    terms = coef * sc.antisymmetrized_table(strict, z) * np.conj(sc.antisymmetrized_table(strict, w))
    value, tail = _layered_sum(terms, layers, max_weight, rho)
    return KernelResult(value, "series", max_weight, tail)


def js_norm_sq(n: int, lam: float) -> float:
    """Squared norm of the Vandermonde ``prod_{i<j}(z_i - z_j)``: ``n! delta! / (lam)_delta``."""
    lam = check_weight(lam)
    if n < 1:
        raise InvalidDimensionError(f"dimension must be >= 1, got {n}")
    out = float(math.factorial(n))
    for k in sc.delta(n):
        out /= sc.pochhammer_ratio(lam, k)
    return out


def symmetrized_basis_constant_sq(p: Sequence[int], lam: float) -> float:
    """``c_p^2`` for the orthonormal Schur basis ``c_p S_p`` of the symmetrized space."""
    p = sc.StrictPartition(p)
    return js_norm_sq(len(p), lam) * sc.basis_norm_constant(p, lam) ** 2


def _check_nondegenerate(*points: np.ndarray) -> None:
    for x in points:
        if np.any(sc.is_degenerate(x)):
            raise DegeneratePointError(
                "coincident coordinates make the determinant form 0/0; use method='series'"
            )


def _schur_series(z, w, coef, strict, max_weight, rho) -> tuple[complex, float]:
    shapes = [p.shape for p in strict]
    layers = np.array([m.weight for m in shapes])
    terms = coef * sc.schur_table(shapes, z) * np.conj(sc.schur_table(shapes, w))
    return _layered_sum(terms, layers, max_weight, rho)


def bergman_kernel_symmetrized(
    z, w, lam: float, method: str = "determinant", max_weight: int = DEFAULT_MAX_WEIGHT
) -> KernelResult:
    """Weighted Bergman kernel of the symmetrized polydisc at ``(s(z), s(w))``.

    ``method="determinant"`` divides the antisymmetric kernel by the two
    Vandermonde factors and refuses near-coincident coordinates;
    ``method="series"`` sums the orthonormal Schur basis and is total.
    """
    lam = check_weight(lam)
    z, w = _pair(z, w)
    n = z.shape[0]
    points = (sc.symmetrize(z), sc.symmetrize(w))
    jn = js_norm_sq(n, lam)
    if method == "determinant":
        _check_nondegenerate(z, w)
        det = np.linalg.det(_kernel_matrix(z, w, lam))
        value = jn / math.factorial(n) * det / (sc.vandermonde(z) * np.conj(sc.vandermonde(w)))
        return KernelResult(value, "determinant", points=points)
    if method == "series":
        rho = _rho(z, w)
        strict, coef, _ = _series_data(n, lam, max_weight)
        value, tail = _schur_series(z, w, jn * coef, strict, max_weight, rho)
        return KernelResult(value, "series", max_weight, tail, points=points)
    raise InvalidInputError(f"method must be 'determinant' or 'series', got {method!r}")


def _as_g2(u) -> np.ndarray:
    coords = u.coords if isinstance(u, SymmetrizedPoint) else np.asarray(u, dtype=complex)
    if coords.shape != (2,):
        raise InvalidDimensionError("expected a point of the symmetrized bidisc (2 coordinates)")
    # (u1, u2) lies in G_2 iff both roots of t^2 - u1 t + u2 are in the unit disc
    roots = np.roots([1.0, -coords[0], coords[1]])
    if np.any(np.abs(roots) >= 1.0):
        raise DomainError(f"{coords.tolist()} is not in the symmetrized bidisc")
    return coords


def g2_bergman_explicit(u, v) -> complex:
    """Closed rational form of the Bergman kernel on the symmetrized bidisc."""
    u1, u2 = _as_g2(u)
    v1, v2 = np.conj(_as_g2(v))
    num = 2.0 * (1.0 + u2 * v2) - u1 * v1
    den = ((1.0 - u2 * v2) ** 2 - (u1 - u2 * v1) * (v1 - v2 * u1)) ** 2
    if den == 0:
        raise SingularEvaluationError("denominator vanishes")
    return complex(0.5 * num / den)


def szego_kernel_symmetrized(
    z, w, method: str = "product", max_weight: int = DEFAULT_MAX_WEIGHT
) -> KernelResult:
    """Szego kernel of the symmetrized polydisc at ``(s(z), s(w))``.

    ``product`` is ``prod_{j,k} (1 - z_j conj(w_k))**-1``; ``determinant``
    is the Hardy determinant over both Vandermonde factors; ``series`` is
    the truncated Cauchy sum ``sum_m S_m(z) conj(S_m(w))``.
    """
    z, w = _pair(z, w)
    points = (sc.symmetrize(z), sc.symmetrize(w))
    if method == "product":
        value = np.prod(1.0 / (1.0 - np.outer(z, np.conj(w))))
        return KernelResult(value, "product", points=points)
    if method == "determinant":
        _check_nondegenerate(z, w)
        det = np.linalg.det(_kernel_matrix(z, w, 1.0))
        value = det / (sc.vandermonde(z) * np.conj(sc.vandermonde(w)))
        return KernelResult(value, "determinant", points=points)
    if method == "series":
        rho = _rho(z, w)
        strict = sc.enumerate_strict_partitions(z.shape[0], max_weight)
        value, tail = _schur_series(z, w, np.ones(len(strict)), strict, max_weight, rho)
        return KernelResult(value, "series", max_weight, tail, points=points)
    raise InvalidInputError(f"method must be 'product', 'determinant' or 'series', got {method!r}")


def project_sign(f: SparsePolynomial) -> SparsePolynomial:
    """Orthogonal projection onto antisymmetric polynomials, ``(1/n!) sum sgn(t) f(t^-1 z)``."""
    n = f.n
    terms: dict[tuple[int, ...], complex] = {}
    for perm, sign in sc.signed_permutations(n):
        for exp, c in f.permuted(perm).terms.items():
            terms[exp] = terms.get(exp, 0) + sign * c
    scale = 1.0 / math.factorial(n)
    return SparsePolynomial(n, {e: c * scale for e, c in terms.items()}, f.prune)


def _multi_indices(n: int, total: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _multi_indices(n - 1, total - first):
            yield (first,) + rest


@lru_cache(maxsize=32)
def _projected_monomials(n: int, lam: float, max_weight: int):
    """Projected monomials ``P_sgn(z^q)`` for every ``|q| <= max_weight + |delta|``.

    Returns padded exponent/coefficient arrays, the polydisc-kernel
    coefficients ``(lam)_q / q!`` and the layer index of each ``q``.
    """
    base = sum(sc.delta(n))
    nperm = math.factorial(n)
    exps, coefs, weights, layers = [], [], [], []
    for d in range(max_weight + base + 1):
        for q in _multi_indices(n, d):
            proj = project_sign(SparsePolynomial.monomial(q))
            e = np.zeros((nperm, n), dtype=int)
            c = np.zeros(nperm, dtype=complex)
            for k, (exp, coef) in enumerate(proj.terms.items()):
                e[k], c[k] = exp, coef
            exps.append(e)
            coefs.append(c)
            weights.append(math.prod(sc.pochhammer_ratio(lam, qi) for qi in q))
            layers.append(d - base)
    return np.array(exps), np.array(coefs), np.array(weights), np.array(layers)


def kernel_sgn(z, w, lam: float, max_weight: int = DEFAULT_MAX_WEIGHT) -> KernelResult:
    """Sign-isotypic kernel: the polydisc kernel expansion with each monomial projected.

    Sums ``(lam)_q / q! * P_sgn(z^q)(z) * conj(P_sgn(w^q)(w))`` over all
    multi-indices whose degree matches ``|m| <= max_weight`` for ``p = m + delta``.
    """
    lam = check_weight(lam)
    z, w = _pair(z, w)
    rho = _rho(z, w)
    exps, coefs, weights, layers = _projected_monomials(z.shape[0], lam, max_weight)
    pz = (np.prod(z ** exps, axis=-1) * coefs).sum(axis=-1)
    pw = (np.prod(w ** exps, axis=-1) * coefs).sum(axis=-1)
    terms = weights * pz * np.conj(pw)
    value, tail = _layered_sum(terms, layers, max_weight, rho)
    return KernelResult(value, "series", max_weight, tail)
