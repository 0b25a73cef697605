import numpy as np
import pytest

from adaptfir import (
    CorrelationModel,
    FirSystem,
    InvalidArgumentError,
    NumericFailureError,
    SingularMatrixError,
    cost,
    estimate_correlation,
    fir_filter,
    generate_white_gaussian,
    gradient,
    hessian,
    max_eigenvalue,
    newton_step,
    sda_run,
    solve_linear,
    wiener_solve,
)

from conftest import random_model
from oracles import correlation_sums, fd_gradient, fd_hessian, largest_eig_3x3_bisection, quad_cost_loops


@pytest.fixture(scope="module")
def white_model():
    x = generate_white_gaussian(200_000, seed=1)
    d = fir_filter(FirSystem([1, 2]), x)
    return estimate_correlation(x, d, 2)


class TestCorrelationModel:
    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidArgumentError):
            CorrelationModel([[1, 0.5], [0, 1]], [0, 0], 1.0)

    def test_rejects_negative_power(self):
        with pytest.raises(InvalidArgumentError):
            CorrelationModel(np.eye(2), [0, 0], -1.0)

    def test_rejects_shape_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            CorrelationModel(np.eye(2), [0, 0, 0], 1.0)


class TestEstimateCorrelation:
    def test_constant_signal(self):
        x = np.ones(10_000)
        d = generate_white_gaussian(10_000, seed=3)
        m = estimate_correlation(x, d, 1)
        assert m.R.tolist() == [[1.0]]
        assert m.p[0] == pytest.approx(d.mean(), rel=1e-12)

    def test_white_noise_through_plant(self, white_model):
        assert np.max(np.abs(white_model.R - np.eye(2))) < 0.02
        assert np.max(np.abs(white_model.p - [1, 2])) < 0.02

    def test_matches_summation_oracle(self):
        x = [0.3, -1.1, 2.0, 0.4, -0.7]
        d = [1.0, 0.5, -0.2, 0.9, 1.3]
        m = estimate_correlation(x, d, 2)
        R, p, s = correlation_sums(x, d, 2)
        np.testing.assert_allclose(m.R, R, rtol=1e-15, atol=0)
        np.testing.assert_allclose(m.p, p, rtol=1e-15, atol=0)
        assert m.sigma_d2 == pytest.approx(s, rel=1e-15)

    def test_R_is_symmetric_and_psd(self, rng):
        x = rng.standard_normal(500)
        d = rng.standard_normal(500)
        m = estimate_correlation(x, d, 4)
        assert np.array_equal(m.R, m.R.T)
        assert np.linalg.eigvalsh(m.R).min() >= -1e-9

    @pytest.mark.parametrize("x,d,taps", [([1, 2, 3], [1, 2], 1), ([1, 2], [1, 2], 3), ([1, 2], [1, 2], 0)])
    def test_invalid(self, x, d, taps):
        with pytest.raises(InvalidArgumentError):
            estimate_correlation(x, d, taps)


class TestCost:
    def test_zero_weight(self):
        assert cost(CorrelationModel(np.eye(2), [0, 0], 1.0), [0, 0]) == 1.0

    def test_at_optimum(self):
        assert cost(CorrelationModel(np.eye(2), [1, 2], 5.0), [1, 2]) == 0.0

    def test_matches_triple_loop(self, rng):
        for _ in range(50):
            N = int(rng.integers(1, 6))
            m = random_model(rng, N)
            w = rng.standard_normal(N)
            ref = quad_cost_loops(m.R.tolist(), m.p.tolist(), m.sigma_d2, w.tolist())
            assert cost(m, w) == pytest.approx(ref, rel=1e-12, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            cost(CorrelationModel(np.eye(2), [0, 0], 1.0), [0, 0, 0])

    def test_value_at_optimum_equals_reduced_form(self, rng):
        for _ in range(20):
            m = random_model(rng, int(rng.integers(1, 6)))
            w = wiener_solve(m)
            assert cost(m, w) == pytest.approx(m.sigma_d2 - m.p @ w, rel=1e-12, abs=1e-12)


class TestGradient:
    def test_hand_value(self):
        assert gradient(CorrelationModel(np.eye(2), [1, 2], 5.0), [0, 0]).tolist() == [-2, -4]

    def test_vanishes_at_optimum(self, rng):
        for _ in range(20):
            m = random_model(rng, int(rng.integers(1, 6)))
            g = gradient(m, wiener_solve(m))
            assert np.linalg.norm(g) <= 1e-9 * max(1.0, np.linalg.norm(m.p))

    def test_finite_differences(self, rng):
        for _ in range(100):
            N = int(rng.integers(1, 6))
            m = random_model(rng, N)
            w = rng.standard_normal(N)
            fd = np.array(fd_gradient(lambda v: cost(m, v), w.tolist(), step=1e-5))
            g = gradient(m, w)
            assert np.linalg.norm(g - fd) <= 1e-6 * max(1.0, np.linalg.norm(g))

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            gradient(CorrelationModel(np.eye(2), [0, 0], 1.0), [0])


class TestHessian:
    def test_identity(self):
        assert hessian(CorrelationModel(np.eye(2), [0, 0], 1.0)).tolist() == [[2, 0], [0, 2]]

    def test_finite_differences(self, rng):
        for _ in range(30):
            N = int(rng.integers(1, 5))
            m = random_model(rng, N)
            w = rng.standard_normal(N)
            fd = np.array(fd_hessian(lambda v: cost(m, v), w.tolist()))
            H = hessian(m)
            assert np.max(np.abs(H - fd)) <= 1e-5 * max(1.0, np.max(np.abs(H)))

    def test_symmetric(self, rng):
        H = hessian(random_model(rng, 4))
        assert np.array_equal(H, H.T)


class TestWienerSolve:
    def test_identity(self):
        assert wiener_solve(CorrelationModel(np.eye(2), [1, 2], 5.0)).tolist() == [1, 2]

    def test_diagonal(self):
        assert wiener_solve(CorrelationModel(np.diag([2.0, 4.0]), [2, 4], 1.0)).tolist() == [1, 1]

    def test_from_white_noise(self, white_model):
        assert np.max(np.abs(wiener_solve(white_model) - [1, 2])) < 0.03

    def test_residual(self, rng):
        for _ in range(50):
            m = random_model(rng, int(rng.integers(1, 6)))
            w = wiener_solve(m)
            assert np.linalg.norm(m.R @ w - m.p) <= 1e-9 * max(1.0, np.linalg.norm(m.p))

    def test_singular_names_pivot(self):
        m = CorrelationModel([[1.0, 1.0], [1.0, 1.0]], [1, 1], 1.0)
        with pytest.raises(SingularMatrixError) as info:
            wiener_solve(m)
        assert info.value.pivot_index == 1
        assert "pivot 1" in str(info.value)

    def test_optimality_under_perturbation(self, rng):
        for _ in range(10):
            N = int(rng.integers(1, 6))
            m = random_model(rng, N)
            w = wiener_solve(m)
            j_opt = cost(m, w)
            for _ in range(100):
                delta = rng.standard_normal(N)
                delta *= rng.uniform(0, 1) / np.linalg.norm(delta)
                assert cost(m, w + delta) >= j_opt - 1e-12


class TestSolveLinear:
    def test_needs_pivoting(self):
        A = [[0.0, 1.0], [1.0, 0.0]]
        assert solve_linear(A, [2.0, 3.0]).tolist() == [3.0, 2.0]

    def test_against_numpy(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 8))
            A = rng.standard_normal((n, n)) + n * np.eye(n)
            b = rng.standard_normal(n)
            np.testing.assert_allclose(solve_linear(A, b), np.linalg.solve(A, b), rtol=1e-10, atol=1e-12)

    def test_zero_matrix(self):
        with pytest.raises(SingularMatrixError) as info:
            solve_linear(np.zeros((3, 3)), np.ones(3))
        assert info.value.pivot_index == 0


class TestNewtonStep:
    def test_fixed_point(self, rng):
        m = random_model(rng, 3)
        w = wiener_solve(m)
        np.testing.assert_allclose(newton_step(m, w), w, atol=1e-9)

    def test_one_step_from_anywhere(self, rng):
        for _ in range(100):
            N = int(rng.integers(1, 6))
            m = random_model(rng, N)
            w0 = 10 * rng.standard_normal(N)
            assert np.linalg.norm(newton_step(m, w0) - wiener_solve(m)) <= 1e-9

    def test_hand_value(self):
        m = CorrelationModel(np.eye(2), [1, 2], 5.0)
        assert newton_step(m, [10, -10]).tolist() == [1, 2]

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            newton_step(CorrelationModel(np.zeros((2, 2)), [0, 0], 0.0), [1, 1])


class TestSdaRun:
    def test_fixed_point(self, rng):
        m = random_model(rng, 3)
        w = wiener_solve(m)
        traj = sda_run(m, w, 0.05, 50)
        assert len(traj) == 51 == len(traj.costs)
        for wk in traj.weights:
            np.testing.assert_allclose(wk, w, atol=1e-9)

    def test_geometric_contraction(self):
        m = CorrelationModel(np.eye(2), [1, 2], 5.0)
        traj = sda_run(m, [0, 0], 0.5, 100)
        assert not traj.diverged
        assert np.max(np.abs(traj.final - [1, 2])) <= 1e-9
        # error halves each step: w_k = p (1 - 0.5^k)
        assert traj.weights[3].tolist() == [0.875, 1.75]

    def test_beyond_stability_boundary(self):
        m = CorrelationModel(np.eye(2), [1, 2], 5.0)
        traj = sda_run(m, [0, 0], 2.5, 10_000)
        assert traj.diverged
        assert len(traj) < 10_001
        assert np.linalg.norm(traj.final) > 1e12
        assert all(np.isfinite(traj.costs))

    @pytest.mark.parametrize("mu", [0.0, -0.1])
    def test_bad_mu(self, mu):
        with pytest.raises(InvalidArgumentError):
            sda_run(CorrelationModel(np.eye(1), [1], 1.0), [0], mu, 10)

    def test_stability_dichotomy(self, rng):
        for _ in range(10):
            m = random_model(rng, int(rng.integers(2, 5)), ridge=1.0)
            lam = max_eigenvalue(m.R)
            ok = sda_run(m, np.zeros(m.N), 1.9 / lam, 10_000)
            assert not ok.diverged
            assert np.linalg.norm(gradient(m, ok.final)) < 1e-6
            bad = sda_run(m, np.zeros(m.N), 2.1 / lam, 10_000)
            assert bad.diverged


class TestMaxEigenvalue:
    def test_identity(self):
        assert max_eigenvalue(np.eye(2)) == pytest.approx(1.0, rel=1e-12)

    def test_diagonal(self):
        assert max_eigenvalue(np.diag([2.0, 4.0])) == pytest.approx(4.0, rel=1e-9)

    def test_scalar(self):
        assert max_eigenvalue([[3.5]]) == 3.5

    def test_characteristic_polynomial_oracle(self, rng):
        for _ in range(25):
            A = rng.standard_normal((3, 3))
            R = A @ A.T
            ref = largest_eig_3x3_bisection(R.tolist())
            assert max_eigenvalue(R) == pytest.approx(ref, abs=1e-7)

    def test_cap_reports_last_estimate(self):
        # eigenvalue ratio 0.999: far too slow for 50 iterations at rtol 1e-9
        with pytest.raises(NumericFailureError) as info:
            max_eigenvalue(np.diag([1.0, 0.999]), max_iter=50)
        assert 0.999 < info.value.last_estimate < 1.0
