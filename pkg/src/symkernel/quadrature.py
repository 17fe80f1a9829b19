"""Inner products for the weighted polydisc measures and Gram certification.

Three independent routes are provided: exact coefficient sums using
monomial orthogonality, tensor Gauss-Jacobi x trapezoid quadrature, and
seeded Monte Carlo.  For ``lam > 1`` each coordinate carries the
probability measure with density ``(lam-1)(1-t)^(lam-2)`` in ``t = |z|^2``
and uniform angle; ``lam == 1`` is the normalized torus measure.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.special import roots_jacobi

from . import symcore as sc
from .errors import InvalidInputError
from .kernels import js_norm_sq, symmetrized_basis_constant_sq
from .symcore import SparsePolynomial, check_weight

Evaluatable = Callable[[np.ndarray], np.ndarray]
GramMethod = Literal["analytic", "quadrature", "montecarlo"]


def monomial_norm_sq(m: Sequence[int], lam: float) -> float:
    """``||z^m||^2 = prod_i m_i! / (lam)_{m_i}``; identically 1 on the torus."""
    lam = check_weight(lam)
    out = 1.0
    for mi in m:
        out /= sc.pochhammer_ratio(lam, int(mi))
    return out


def inner_product_analytic(f: SparsePolynomial, g: SparsePolynomial, lam: float) -> complex:
    lam = check_weight(lam)
    if f.n != g.n:
        raise InvalidInputError("polynomials live in different dimensions")
    total = 0j
    for exp, c in f.terms.items():
        d = g.terms.get(exp)
        if d is not None:
            total += c * np.conj(d) * monomial_norm_sq(exp, lam)
    return complex(total)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    exact_degree: int
    lam: float

    def __post_init__(self):
        if self.nodes.shape[0] != self.weights.shape[0]:
            raise InvalidInputError("nodes and weights differ in length")
        if np.any(self.weights <= 0) or abs(self.weights.sum() - 1.0) > 1e-13:
            raise InvalidInputError("weights must be positive and sum to 1")

    @property
    def n(self) -> int:
        return self.nodes.shape[-1]

    def __len__(self) -> int:
        return self.weights.shape[0]


def _disc_rule(lam: float, exact_degree: int) -> tuple[np.ndarray, np.ndarray]:
    n_ang = exact_degree + 1
    theta = 2 * np.pi * np.arange(n_ang) / n_ang
    ang_nodes = np.exp(1j * theta)
    ang_weights = np.full(n_ang, 1.0 / n_ang)
    if lam == 1.0:
        return ang_nodes, ang_weights
    n_rad = math.ceil((exact_degree + 2) / 2)
    x, wx = roots_jacobi(n_rad, lam - 2.0, 0.0)
    t = (1.0 + x) / 2.0
    wt = wx / wx.sum()
    nodes = (np.sqrt(t)[:, None] * ang_nodes[None, :]).ravel()
    weights = (wt[:, None] * ang_weights[None, :]).ravel()
    return nodes, weights


def build_rule(n: int, lam: float, exact_degree: int) -> QuadratureRule:
    """Tensor rule exact for ``z^a conj(z)^b`` whenever every ``a_i, b_i <= exact_degree``."""
    lam = check_weight(lam)
    if n < 1 or exact_degree < 0:
        raise InvalidInputError("need n >= 1 and exact_degree >= 0")
    nodes1, weights1 = _disc_rule(lam, exact_degree)
    grids = np.meshgrid(*([np.arange(len(nodes1))] * n), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=-1)
    nodes = nodes1[idx]
    weights = np.prod(weights1[idx], axis=-1)
    weights = weights / weights.sum()
    return QuadratureRule(nodes, weights, exact_degree, lam)


def inner_product_numeric(f: Evaluatable, g: Evaluatable, rule: QuadratureRule) -> complex:
    fv = np.asarray(f(rule.nodes))
    gv = np.asarray(g(rule.nodes))
    return complex(np.sum(rule.weights * fv * np.conj(gv)))


def _sample_block(rng: np.random.Generator, size: int, n: int, lam: float) -> np.ndarray:
    theta = rng.random((size, n)) * (2 * np.pi)
    if lam == 1.0:
        return np.exp(1j * theta)
    u = rng.random((size, n))
    # inverse CDF of Beta(1, lam - 1)
    t = 1.0 - u ** (1.0 / (lam - 1.0))
    return np.sqrt(t) * np.exp(1j * theta)


def sample_points(n: int, lam: float, samples: int, seed: int, block_size: int = 1 << 16) -> np.ndarray:
    """Deterministic sample of the measure; block ``k`` uses the stream jumped ``k`` times."""
    lam = check_weight(lam)
    return np.concatenate(
        [
            _sample_block(_block_rng(seed, k), size, n, lam)
            for k, size in enumerate(_block_sizes(samples, block_size))
        ]
    )


def _block_sizes(samples: int, block_size: int) -> list[int]:
    full, rest = divmod(samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _block_rng(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed).jumped(k))


def _mc_moments(
    evaluate: Evaluatable,
    n: int,
    lam: float,
    samples: int,
    seed: int,
    block_size: int,
    workers: int | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Sample means of ``f_i conj(f_j)`` and of ``|f_i|^2 |f_j|^2``.

    ``evaluate`` maps a ``(size, n)`` block of points to ``(size, k)`` values.
    """

    def block(args):
        k, size = args
        pts = _sample_block(_block_rng(seed, k), size, n, lam)
        vals = np.asarray(evaluate(pts), dtype=complex)
        mag = np.abs(vals) ** 2
        return vals.T @ np.conj(vals), mag.T @ mag

    jobs = list(enumerate(_block_sizes(samples, block_size)))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(block, jobs))
    else:
        parts = [block(j) for j in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    return s1 / samples, s2 / samples


def _stderr(mean: np.ndarray, second: np.ndarray, samples: int) -> np.ndarray:
    var = np.clip(second - np.abs(mean) ** 2, 0.0, None)
    if samples > 1:
        var = var * samples / (samples - 1)
    return np.sqrt(var / samples)


def monte_carlo_inner_product(
    f: Evaluatable,
    g: Evaluatable,
    n: int,
    lam: float,
    samples: int,
    seed: int,
    block_size: int = 1 << 16,
    workers: int | None = None,
) -> tuple[complex, float]:
    """Estimate ``<f, g>`` and its one-sigma standard error."""
    lam = check_weight(lam)
    if samples < 1:
        raise InvalidInputError("need at least one sample")

    def both(z):
        return np.stack([np.asarray(f(z), dtype=complex), np.asarray(g(z), dtype=complex)], axis=-1)

    mean, second = _mc_moments(both, n, lam, samples, seed, block_size, workers)
    return complex(mean[0, 1]), float(_stderr(mean, second, samples)[0, 1])


@dataclass
class GramReport:
    matrix: np.ndarray
    basis_labels: list[sc.StrictPartition]
    max_offdiag: float
    max_diag_error: float
    method: str
    space: str = "polydisc"
    stderr: np.ndarray | None = None

    def __post_init__(self):
        if len(set(self.basis_labels)) != len(self.basis_labels):
            raise InvalidInputError("basis labels must be distinct")
        if self.matrix.size and np.abs(self.matrix - self.matrix.conj().T).max() > 1e-13:
            raise InvalidInputError("Gram matrix is not hermitian")

    def max_deviation(self) -> float:
        return max(self.max_offdiag, self.max_diag_error)

    def max_sigma(self) -> float:
        """Largest ``|G - I|`` measured in standard errors (Monte Carlo only)."""
        if self.stderr is None:
            raise InvalidInputError("no standard errors for a deterministic Gram matrix")
        dev = np.abs(self.matrix - np.eye(len(self.basis_labels)))
        with np.errstate(divide="ignore", invalid="ignore"):
            z = np.where(dev == 0, 0.0, dev / self.stderr)
        return float(np.nan_to_num(z, nan=np.inf, posinf=np.inf).max())


def _basis(labels: Sequence[sc.StrictPartition], lam: float, space: str):
    """Unit basis functions in the polydisc picture.

    For the symmetrized space the inner product pulls back through the
    normalized Vandermonde, so ``c_p S_p`` is represented by
    ``c_p S_p * a_delta / ||J_s||``; the Schur factor is evaluated by
    Jacobi-Trudi, independently of the determinant ``a_p``.
    """
    n = len(labels[0])
    if space == "polydisc":
        consts = np.array([sc.basis_norm_constant(p, lam) for p in labels])

        def evaluate(z):
            return sc.antisymmetrized_table(labels, z) * consts

        polys = [sc.antisymmetrized_polynomial(p) * c for p, c in zip(labels, consts)]
        return evaluate, polys
    if space == "symmetrized":
        jn = js_norm_sq(n, lam)
        consts = np.sqrt([symmetrized_basis_constant_sq(p, lam) for p in labels])
        shapes = [p.shape for p in labels]

        def evaluate(z):
            jac = np.asarray(sc.vandermonde(z))[..., None] / math.sqrt(jn)
            return sc.schur_table(shapes, z) * consts * jac

        polys = [sc.antisymmetrized_polynomial(p) * (c / math.sqrt(jn)) for p, c in zip(labels, consts)]
        return evaluate, polys
    raise InvalidInputError(f"space must be 'polydisc' or 'symmetrized', got {space!r}")


def gram_matrix(
    partitions: Sequence[Sequence[int]],
    lam: float,
    method: GramMethod = "analytic",
    space: str = "polydisc",
    samples: int = 10**6,
    seed: int = 0,
    workers: int | None = None,
) -> GramReport:
    """Gram matrix of the normalized basis vectors labelled by strict partitions."""
    lam = check_weight(lam)
    labels = [sc.StrictPartition(p) for p in partitions]
    if not labels:
        raise InvalidInputError("need at least one basis label")
    if len(set(labels)) != len(labels):
        raise InvalidInputError("duplicate basis labels")
    if len({len(p) for p in labels}) != 1:
        raise InvalidInputError("labels must share one dimension")
    n = len(labels[0])
    evaluate, polys = _basis(labels, lam, space)
    stderr = None
    if method == "analytic":
        mat = np.array([[inner_product_analytic(f, g, lam) for g in polys] for f in polys])
    elif method == "quadrature":
        rule = build_rule(n, lam, max(p[0] for p in labels))
        vals = evaluate(rule.nodes)
        mat = (vals * rule.weights[:, None]).T @ np.conj(vals)
    elif method == "montecarlo":
        if samples < 1:
            raise InvalidInputError("need at least one sample")
        mat, second = _mc_moments(evaluate, n, lam, samples, seed, 1 << 16, workers)
        stderr = _stderr(mat, second, samples)
    else:
        raise InvalidInputError(f"unknown Gram method {method!r}")
    mat = (mat + mat.conj().T) / 2
    off = np.abs(mat - np.diag(np.diag(mat))).max() if len(labels) > 1 else 0.0
    diag = np.abs(np.diag(mat) - 1.0).max()
    return GramReport(mat, labels, float(off), float(diag), method, space, stderr)
