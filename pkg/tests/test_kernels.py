import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symkernel import kernels as kn
from symkernel import symcore as sc
from symkernel.errors import (
    DegeneratePointError,
    DomainError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidWeightError,
)

from .conftest import random_points
from .oracles import leibniz_det

ZW = np.array([0.5, 0.2])
# (1/2) [(0.75 * 0.96)^-1 - 0.9^-2]
ANTI_HARDY_ZW = 0.5 * (1 / (0.75 * 0.96) - 1 / 0.81)
SZEGO_ZW = 1 / (0.75 * 0.9 * 0.9 * 0.96)


def pair_strategy(n_values=(2, 3), radius=0.5):
    @st.composite
    def build(draw):
        n = draw(st.sampled_from(n_values))
        rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
        return random_points(rng, n, radius), random_points(rng, n, radius)

    return build()


def test_kernel_result_invariants():
    with pytest.raises(InvalidInputError):
        kn.KernelResult(1.0, "series")
    with pytest.raises(InvalidInputError):
        kn.KernelResult(1.0, "determinant", tail_estimate=0.0)
    with pytest.raises(InvalidInputError):
        kn.KernelResult(1.0, "series", 3, -1.0)
    with pytest.raises(InvalidInputError):
        kn.KernelResult(1.0, "magic")


class TestPolydisc:
    def test_origin(self):
        assert kn.bergman_kernel_polydisc([0, 0, 0], [0, 0, 0], 3.3) == 1

    def test_one_variable(self):
        assert kn.bergman_kernel_polydisc([0.5], [0.5], 2) == pytest.approx(16 / 9)

    @given(pair_strategy(n_values=(1, 2, 3), radius=0.95), st.floats(1, 6))
    def test_hermitian(self, zw, lam):
        z, w = zw
        a = kn.bergman_kernel_polydisc(z, w, lam)
        b = kn.bergman_kernel_polydisc(w, z, lam)
        assert abs(a - np.conj(b)) <= 1e-13 * abs(a)

    def test_domain(self):
        with pytest.raises(DomainError):
            kn.bergman_kernel_polydisc([1.0, 0], [0, 0], 2)
        with pytest.raises(InvalidWeightError):
            kn.bergman_kernel_polydisc([0.1, 0], [0, 0], 0.5)
        with pytest.raises(InvalidDimensionError):
            kn.bergman_kernel_polydisc([0.1, 0], [0], 2)


class TestAntisymmetric:
    def test_equal_coordinates_vanish(self):
        assert kn.kernel_anti_det([0.3, 0.3], [0.1, -0.4j], 2.5).value == 0
        assert abs(kn.kernel_anti_det([0.3, 0.1, 0.3], [0.1, 0.2, -0.4j], 1).value) < 1e-16

    def test_hardy_value(self):
        assert kn.kernel_anti_det(ZW, ZW, 1).value == pytest.approx(ANTI_HARDY_ZW, rel=1e-14)
        assert ANTI_HARDY_ZW == pytest.approx(0.0771604938, abs=1e-10)

    def test_matches_leibniz_determinant(self, rng):
        z, w = random_points(rng, 3), random_points(rng, 3)
        lam = 2.7
        mat = [[(1 - zj * np.conj(wk)) ** -lam for wk in w] for zj in z]
        assert kn.kernel_anti_det(z, w, lam).value == pytest.approx(leibniz_det(mat) / 6, rel=1e-13)

    def test_series_matches_determinant(self):
        res = kn.kernel_anti_series(ZW, ZW, 1, 40)
        assert res.value == pytest.approx(ANTI_HARDY_ZW, abs=1e-10)
        assert res.method == "series" and res.truncation_degree == 40

    def test_series_vanishes_at_origin(self):
        assert kn.kernel_anti_series([0, 0], [0.3, 0.2], 2).value == 0
        assert kn.kernel_anti_series([0.1, 0.4j, 0.2], [0, 0, 0], 1.5).value == 0

    def test_series_under_simultaneous_permutation(self, rng):
        z, w = random_points(rng, 3), random_points(rng, 3)
        ref = kn.kernel_anti_series(z, w, 2, 20).value
        for perm in itertools.permutations(range(3)):
            p = list(perm)
            assert kn.kernel_anti_series(z[p], w[p], 2, 20).value == pytest.approx(ref, rel=1e-13)

    @given(pair_strategy(radius=0.8), st.sampled_from([1.0, 2.0, 3.5]), st.integers(2, 12))
    @settings(deadline=None, max_examples=40)
    def test_truncation_error_within_tail(self, zw, lam, d):
        z, w = zw
        det = kn.kernel_anti_det(z, w, lam).value
        res = kn.kernel_anti_series(z, w, lam, d)
        # tail bounds truncation; allow rounding on top
        assert abs(det - res.value) <= res.tail_estimate + 1e-14

    def test_hardy_alias(self, rng):
        z, w = random_points(rng, 3), random_points(rng, 3)
        assert kn.hardy_kernel_anti(z, w).value == kn.kernel_anti_det(z, w, 1).value

    @given(pair_strategy(radius=0.9), st.floats(1, 5))
    def test_hermitian(self, zw, lam):
        z, w = zw
        a = kn.kernel_anti_det(z, w, lam).value
        b = kn.kernel_anti_det(w, z, lam).value
        assert abs(a - np.conj(b)) <= 1e-13 * max(abs(a), 1e-300) + 1e-17

    @given(pair_strategy(radius=0.9), st.floats(1, 5))
    def test_positive_on_diagonal(self, zw, lam):
        z, _ = zw
        if sc.min_pairwise_distance(z) < 1e-2:
            return
        k = kn.kernel_anti_det(z, z, lam).value
        assert k.real > 0 and abs(k.imag) <= 1e-12 * k.real


class TestJacobianNorm:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_bergman_weight_two(self, n):
        assert kn.js_norm_sq(n, 2) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_hardy(self, n):
        assert kn.js_norm_sq(n, 1) == pytest.approx(math.factorial(n))

    def test_weight_three(self):
        # E|z1 - z2|^2 = 2 E[t] = 2/3 with E[t] = 1/3 for density 2(1-t)
        from .oracles import beta_moment

        assert kn.js_norm_sq(2, 3) == pytest.approx(2 * beta_moment(1, 3), rel=1e-12)
        assert kn.js_norm_sq(2, 3) == pytest.approx(2 / 3)

    def test_rejects_weight_below_one(self):
        with pytest.raises(InvalidWeightError):
            kn.js_norm_sq(2, 0.9)


class TestSymmetrizedBergman:
    def test_origin_series(self):
        res = kn.bergman_kernel_symmetrized([0, 0], [0, 0], 2, "series")
        assert res.value == pytest.approx(1.0, abs=1e-15)
        assert kn.g2_bergman_explicit([0, 0], [0, 0]) == 1

    @pytest.mark.parametrize("a, b", [(0.3, 0.5), (0.2 + 0.4j, -0.6j), (-0.7, 0.1 + 0.1j)])
    def test_reduction_on_axis(self, a, b):
        x = a * np.conj(b)
        expected = 0.5 * (2 - x) / (1 - x) ** 2
        res = kn.bergman_kernel_symmetrized([a, 0], [b, 0], 2)
        assert res.value == pytest.approx(expected, rel=1e-13)
        assert kn.g2_bergman_explicit([a, 0], [b, 0]) == pytest.approx(expected, rel=1e-14)

    def test_permutation_invariance(self, rng):
        z, w = random_points(rng, 3), random_points(rng, 3)
        ref = kn.bergman_kernel_symmetrized(z, w, 3).value
        for perm in itertools.permutations(range(3)):
            assert kn.bergman_kernel_symmetrized(z[list(perm)], w, 3).value == pytest.approx(ref, rel=1e-12)

    @given(pair_strategy(), st.sampled_from([1.0, 2.0, 2.5, 4.0]))
    @settings(deadline=None, max_examples=30)
    def test_methods_agree(self, zw, lam):
        z, w = zw
        if sc.min_pairwise_distance(z) < 1e-3 or sc.min_pairwise_distance(w) < 1e-3:
            return
        det = kn.bergman_kernel_symmetrized(z, w, lam).value
        ser = kn.bergman_kernel_symmetrized(z, w, lam, "series")
        assert abs(det - ser.value) <= ser.tail_estimate + 1e-11 * abs(det)

    def test_degenerate_refused_by_determinant_only(self):
        z, w = [0.3, 0.3], [0.1, 0.2]
        with pytest.raises(DegeneratePointError):
            kn.bergman_kernel_symmetrized(z, w, 2)
        res = kn.bergman_kernel_symmetrized(z, w, 2, "series")
        near = kn.bergman_kernel_symmetrized([0.3, 0.3 + 1e-5], w, 2)
        assert res.value == pytest.approx(near.value, rel=1e-4)

    def test_points_attached(self):
        res = kn.bergman_kernel_symmetrized([0.5, 0.2], [0.1, 0.3], 2)
        np.testing.assert_allclose(res.points[0].coords, [0.7, 0.1])
        np.testing.assert_allclose(res.points[1].provenance, [0.1, 0.3])

    def test_unknown_method(self):
        with pytest.raises(InvalidInputError):
            kn.bergman_kernel_symmetrized([0.5, 0.2], [0.1, 0.3], 2, "product")

    @given(pair_strategy(n_values=(2,), radius=0.9))
    def test_g2_matches_determinant(self, zw):
        z, w = zw
        if sc.min_pairwise_distance(z) < 1e-3 or sc.min_pairwise_distance(w) < 1e-3:
            return
        explicit = kn.g2_bergman_explicit(sc.symmetrize(z), sc.symmetrize(w))
        det = kn.bergman_kernel_symmetrized(z, w, 2).value
        assert abs(explicit - det) <= 1e-10 * abs(det)

    def test_g2_rejects_points_outside(self):
        with pytest.raises(DomainError):
            kn.g2_bergman_explicit([2.0, 0.0], [0, 0])
        with pytest.raises(InvalidDimensionError):
            kn.g2_bergman_explicit([0.0, 0.0, 0.0], [0, 0])


class TestSzego:
    def test_origin(self):
        for method in ("product", "series"):
            assert kn.szego_kernel_symmetrized([0, 0], [0, 0], method).value == 1

    def test_w_zero(self, rng):
        z = random_points(rng, 3, 0.9)
        assert kn.szego_kernel_symmetrized(z, [0, 0, 0]).value == 1
        assert kn.szego_kernel_symmetrized(z, [0, 0, 0], "series").value == pytest.approx(1, abs=1e-15)

    def test_worked_value(self):
        for method in ("product", "determinant", "series"):
            res = kn.szego_kernel_symmetrized(ZW, ZW, method, 40)
            assert res.value == pytest.approx(SZEGO_ZW, rel=1e-13)
        assert SZEGO_ZW == pytest.approx(1.714677641, abs=1e-9)

    def test_degenerate_determinant(self):
        with pytest.raises(DegeneratePointError):
            kn.szego_kernel_symmetrized([0.2, 0.2], [0.1, 0.3], "determinant")

    @given(pair_strategy(radius=0.7))
    @settings(deadline=None)
    def test_cauchy_within_tail(self, zw):
        z, w = zw
        prod = kn.szego_kernel_symmetrized(z, w).value
        ser = kn.szego_kernel_symmetrized(z, w, "series", 15)
        assert abs(prod - ser.value) <= ser.tail_estimate + 1e-13

    def test_symmetrized_bergman_at_hardy_weight_is_szego(self, rng):
        z, w = random_points(rng, 3), random_points(rng, 3)
        a = kn.bergman_kernel_symmetrized(z, w, 1).value
        b = kn.szego_kernel_symmetrized(z, w).value
        assert a == pytest.approx(b, rel=1e-11)


class TestSignProjection:
    def test_examples(self):
        assert len(kn.project_sign(sc.SparsePolynomial.monomial((1, 1)))) == 0
        assert len(kn.project_sign(sc.SparsePolynomial.monomial((0, 0, 0)))) == 0
        out = kn.project_sign(sc.SparsePolynomial.monomial((2, 0)))
        assert out.terms == {(2, 0): 0.5, (0, 2): -0.5}

    def test_monomial_image_is_scaled_determinant(self, rng):
        z = random_points(rng, 3, 0.9)
        for q in [(3, 0, 1), (0, 4, 2), (5, 5, 1)]:
            img = kn.project_sign(sc.SparsePolynomial.monomial(q))
            assert img(z) == pytest.approx(sc.antisymmetrized_monomial(q, z) / 6, abs=1e-15)

    def test_idempotent_and_antisymmetric(self, rng):
        terms = {tuple(rng.integers(0, 4, 3)): complex(*rng.normal(size=2)) for _ in range(8)}
        f = sc.SparsePolynomial(3, terms)
        pf = kn.project_sign(f)
        assert kn.project_sign(pf).max_coefficient_difference(pf) < 1e-15
        z = random_points(rng, 3, 0.9)
        assert pf(z[[1, 0, 2]]) == pytest.approx(-pf(z), abs=1e-14)

    def test_kernel_sgn_matches_series(self, rng):
        for n in (2, 3):
            z, w = random_points(rng, n), random_points(rng, n)
            a = kn.kernel_sgn(z, w, 2, 20)
            b = kn.kernel_anti_series(z, w, 2, 20)
            assert abs(a.value - b.value) < 1e-14
            assert a.tail_estimate == pytest.approx(b.tail_estimate, rel=1e-10)

    def test_kernel_sgn_origin(self):
        assert kn.kernel_sgn([0, 0], [0.2, 0.4], 2, 10).value == 0

    def test_kernel_sgn_worked_point(self):
        z = np.array([0.3, 0.1])
        assert kn.kernel_sgn(z, z, 2, 40).value == pytest.approx(kn.kernel_anti_det(z, z, 2).value, abs=1e-8)


def test_hardy_is_not_a_power_of_bergman():
    """Fit log S = alpha log B + log c on a grid of diagonal points; residual stays large."""
    grid = [(a, b) for a in np.linspace(-0.6, 0.6, 7) for b in np.linspace(-0.6, 0.6, 7) if abs(a - b) > 0.05]
    log_s, log_b = [], []
    for a, b in grid:
        z = np.array([a, b])
        log_s.append(np.log(kn.szego_kernel_symmetrized(z, z).value.real))
        log_b.append(np.log(kn.g2_bergman_explicit(sc.symmetrize(z), sc.symmetrize(z)).real))
    design = np.column_stack([log_b, np.ones(len(log_b))])
    coef, *_ = np.linalg.lstsq(design, np.array(log_s), rcond=None)
    residual = np.abs(design @ coef - np.array(log_s)).max()
    assert residual > 1e-2
