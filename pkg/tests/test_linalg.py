import numpy as np
import pytest

from metricgap.errors import AsymmetricInput, DimensionMismatch, SingularSystem
from metricgap.linalg import (
    SymMatrix,
    eigenvalues_sym,
    factor,
    invert,
    quad_form,
    solve,
)

from oracles import det_cofactor


def random_sym(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return SymMatrix(a + a.T)


class TestSymMatrix:
    def test_accepts_exact_symmetry(self):
        m = SymMatrix([[0.0, 1.0], [1.0, 0.0]])
        assert m.n == 2
        assert m[0, 1] == 1.0

    def test_averages_tiny_asymmetry(self):
        m = SymMatrix([[0.0, 1.0 + 1e-15], [1.0, 0.0]])
        assert m[0, 1] == m[1, 0]

    def test_rejects_gross_asymmetry(self):
        with pytest.raises(AsymmetricInput):
            SymMatrix([[0.0, 1.0], [2.0, 0.0]])

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatch):
            SymMatrix([[1.0, 2.0, 3.0]])

    def test_rejects_empty(self):
        with pytest.raises(DimensionMismatch):
            SymMatrix(np.zeros((0, 0)))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            SymMatrix([[np.nan]])

    def test_backing_array_read_only(self):
        m = SymMatrix(np.eye(3))
        with pytest.raises(ValueError):
            m.a[0, 0] = 5.0

    def test_array_protocol(self):
        m = SymMatrix(np.eye(2))
        assert np.array_equal(np.asarray(m), np.eye(2))


class TestFactor:
    def test_identity(self):
        f = factor(SymMatrix(np.eye(3)))
        assert not f.singular_flag
        assert f.min_pivot_ratio == 1.0

    def test_all_ones_is_singular(self):
        f = factor(SymMatrix(np.ones((2, 2))))
        assert f.singular_flag

    def test_zero_matrix_is_singular(self):
        f = factor(SymMatrix(np.zeros((2, 2))))
        assert f.singular_flag
        assert f.min_pivot_ratio == 0.0

    def test_three_point_uniform_space_nonsingular(self):
        # det of the 3x3 all-ones-off-diagonal matrix is 2, by cofactor
        # expansion with the reference oracle.
        a = np.ones((3, 3)) - np.eye(3)
        assert det_cofactor(a) == pytest.approx(2.0, abs=1e-12)
        assert not factor(SymMatrix(a)).singular_flag

    def test_zero_diagonal_two_by_two_pivot(self):
        # [[0, 1], [1, 0]] forces a 2x2 pivot block; both magnitudes are 1.
        f = factor(SymMatrix([[0.0, 1.0], [1.0, 0.0]]))
        assert not f.singular_flag
        assert f.min_pivot_ratio == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_reconstructs_input(self, seed):
        m = random_sym(7, seed)
        f = factor(m)
        rebuilt = f.lower @ f.block_diag @ f.lower.T
        assert np.max(np.abs(rebuilt - m.a)) <= 1e-12 * max(1.0, m.max_abs)


class TestSolveInvert:
    @pytest.mark.parametrize("seed", range(6))
    def test_solve_recovers_rhs(self, seed):
        m = random_sym(8, seed)
        f = factor(m)
        rng = np.random.default_rng(1000 + seed)
        b = rng.standard_normal(8)
        x = solve(f, b)
        assert np.max(np.abs(m.a @ x - b)) <= 1e-9 * max(1.0, np.max(np.abs(b)))

    def test_solve_matrix_rhs(self):
        m = random_sym(5, 42)
        x = solve(factor(m), np.eye(5))
        assert np.max(np.abs(m.a @ x - np.eye(5))) <= 1e-10

    def test_solve_singular_raises(self):
        f = factor(SymMatrix(np.ones((3, 3))))
        with pytest.raises(SingularSystem):
            solve(f, np.ones(3))

    def test_solve_dimension_mismatch(self):
        f = factor(SymMatrix(np.eye(3)))
        with pytest.raises(DimensionMismatch):
            solve(f, np.ones(4))

    def test_invert_uniform_space_closed_form(self):
        # Inverse of the n-point all-ones-off-diagonal matrix is
        # (1/(n-1)) ones - identity.
        n = 4
        a = SymMatrix(np.ones((n, n)) - np.eye(n))
        expected = np.ones((n, n)) / (n - 1) - np.eye(n)
        assert np.max(np.abs(invert(factor(a)).a - expected)) <= 1e-12

    @pytest.mark.parametrize("seed", range(4))
    def test_invert_matches_numpy(self, seed):
        m = random_sym(6, seed)
        got = invert(factor(m)).a
        assert np.max(np.abs(got - np.linalg.inv(m.a))) <= 1e-9 * np.max(np.abs(got))


class TestEigQuad:
    def test_uniform_space_spectrum(self):
        # Frozen after checking the characteristic polynomial with the
        # cofactor determinant: -1 (three times) and 3.
        a = SymMatrix(np.ones((4, 4)) - np.eye(4))
        got = eigenvalues_sym(a)
        assert np.allclose(got, [-1.0, -1.0, -1.0, 3.0], atol=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_ascending_order(self, seed):
        vals = eigenvalues_sym(random_sym(9, seed))
        assert np.all(np.diff(vals) >= 0)

    def test_quad_form_known_value(self):
        m = SymMatrix([[2.0, 1.0], [1.0, 3.0]])
        assert quad_form(m, [1.0, 1.0], [1.0, 1.0]) == pytest.approx(7.0)

    def test_quad_form_symmetry(self):
        m = random_sym(5, 7)
        rng = np.random.default_rng(8)
        x, y = rng.standard_normal(5), rng.standard_normal(5)
        assert quad_form(m, x, y) == pytest.approx(quad_form(m, y, x), rel=1e-12)

    def test_quad_form_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            quad_form(SymMatrix(np.eye(2)), [1.0], [1.0, 2.0])
