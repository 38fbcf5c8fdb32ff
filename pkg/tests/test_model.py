import numpy as np
import pytest

from airsel import (
    AggregationWeights,
    ChannelMatrix,
    NoiseModel,
    ProblemInstance,
    SelectionVector,
    SystemDims,
    TransmitScalars,
    aggregation_error,
    lasso_quadratic,
    make_rng,
    receiver_normal_system,
    selection_gain_vector,
)
from conftest import random_design, random_instance


def scalar_instance(h=1.0, sigma2=1.0, phi=1.0):
    return ProblemInstance(
        dims=SystemDims(1, 1, 1),
        channel=ChannelMatrix(np.array([[h]], complex)),
        weights=AggregationWeights(np.array([phi])),
        noise=NoiseModel(sigma2),
    )


class TestTypes:
    def test_dims_validation(self):
        with pytest.raises(ValueError):
            SystemDims(4, 2, 5)
        with pytest.raises(ValueError):
            SystemDims(4, 0, 2)
        with pytest.raises(ValueError):
            SystemDims(4, 2, 0)
        assert SystemDims(4, 2, 4).n_rf_chains == 4  # L = N allowed

    def test_weights_must_be_normalized(self):
        with pytest.raises(ValueError):
            AggregationWeights(np.array([0.5, 0.6]))
        with pytest.raises(ValueError):
            AggregationWeights(np.array([1.5, -0.5]))
        w = AggregationWeights.uniform(4)
        assert np.allclose(w.phi, 0.25)

    def test_transmit_power_bound(self):
        TransmitScalars(np.array([1.0 + 0j]), power_limit=1.0)
        with pytest.raises(ValueError):
            TransmitScalars(np.array([1.1 + 0j]), power_limit=1.0)

    def test_selection_modes(self):
        SelectionVector(np.array([0.0, 0.5, 1.0]))
        with pytest.raises(ValueError):
            SelectionVector(np.array([1.2, 0.0]))
        binary = SelectionVector(np.array([1.0, 0.0, 1.0]), mode="binary")
        assert binary.n_selected == 2
        with pytest.raises(ValueError):
            SelectionVector(np.array([0.5, 0.5]), mode="binary")

    def test_channel_finite(self):
        with pytest.raises(ValueError):
            ChannelMatrix(np.array([[np.inf]], complex))

    def test_instance_shape_check(self):
        with pytest.raises(ValueError):
            ProblemInstance(
                dims=SystemDims(2, 2, 1),
                channel=ChannelMatrix(np.zeros((2, 1), complex)),
                weights=AggregationWeights(np.array([0.5, 0.5])),
                noise=NoiseModel(1.0),
            )

    def test_arrays_are_frozen(self):
        ch = ChannelMatrix(np.zeros((2, 2), complex))
        with pytest.raises(ValueError):
            ch.entries[0, 0] = 1.0


class TestAggregationError:
    def test_zero_receiver_leaves_weight_norm(self):
        inst = random_instance(3, 2, 2, seed=5)
        inst = ProblemInstance(
            dims=inst.dims,
            channel=inst.channel,
            weights=AggregationWeights(np.array([0.5, 0.5])),
            noise=inst.noise,
        )
        m = np.zeros(3, complex)
        s = np.ones(3)
        b = np.ones(2, complex)
        assert aggregation_error(m, s, b, inst) == pytest.approx(0.5)

    def test_scalar_case(self):
        inst = scalar_instance()
        err = aggregation_error(
            np.array([0.5 + 0j]), np.array([1.0]), np.array([1.0 + 0j]), inst
        )
        assert err == pytest.approx(0.5)  # (0.5-1)^2 + 0.25

    def test_dimension_mismatch(self):
        inst = random_instance(4, 2, 2, seed=0)
        with pytest.raises(ValueError):
            aggregation_error(
                np.zeros(3, complex), np.ones(4), np.ones(2, complex), inst
            )

    def test_matches_monte_carlo_expectation(self):
        # Sample-average oracle: mean |theta - theta_hat|^2 over unit-variance
        # model draws and channel noise reproduces the closed form within 1%.
        inst = random_instance(4, 2, 2, seed=77)
        m, s, b = random_design(inst, seed=78)
        rng = make_rng(99)
        draws = 1_000_000
        k, n = 2, 4
        varsigma = (
            rng.standard_normal((draws, k)) + 1j * rng.standard_normal((draws, k))
        ) / np.sqrt(2)
        noise = (
            rng.standard_normal((draws, n)) + 1j * rng.standard_normal((draws, n))
        ) * np.sqrt(inst.noise.sigma2 / 2)
        theta = varsigma @ inst.weights.phi
        row = (np.conj(m) * s) @ inst.channel.entries * b  # m^H S H B
        theta_hat = varsigma @ row + noise @ (np.conj(m) * s)
        mc = float(np.mean(np.abs(theta - theta_hat) ** 2))
        exact = aggregation_error(m, s, b, inst)
        assert mc == pytest.approx(exact, rel=0.01)

    def test_nonnegative_and_gradient_matches_finite_differences(self):
        inst = random_instance(4, 3, 2, seed=11)
        step = 1e-6
        for trial in range(100):
            m, s, b = random_design(inst, seed=1000 + trial)
            base = aggregation_error(m, s, b, inst)
            assert base >= 0.0
            # analytic gradient wrt (Re m, Im m): 2 (A m - a)
            a_mat, a_vec = receiver_normal_system(s, b, inst)
            grad = 2.0 * (a_mat @ m - a_vec)
            rng = make_rng(2000 + trial)
            direction = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            direction /= np.linalg.norm(direction)
            up = aggregation_error(m + step * direction, s, b, inst)
            dn = aggregation_error(m - step * direction, s, b, inst)
            fd = (up - dn) / (2 * step)
            analytic = float(np.real(np.vdot(grad, direction)))
            assert fd == pytest.approx(analytic, rel=1e-5, abs=1e-7)


class TestReceiverNormalSystem:
    def test_zero_selection_gives_zero_system(self, small_instance):
        _, _, b = random_design(small_instance, seed=3)
        a_mat, a_vec = receiver_normal_system(np.zeros(4), b, small_instance)
        assert np.all(a_mat == 0) and np.all(a_vec == 0)

    def test_scalar_values(self):
        inst = scalar_instance(h=2.0)
        a_mat, a_vec = receiver_normal_system(
            np.array([1.0]), np.array([1.0 + 0j]), inst
        )
        assert a_mat[0, 0] == pytest.approx(5.0)  # 4 + 1
        assert a_vec[0] == pytest.approx(2.0 * inst.weights.phi[0])

    def test_quadratic_form_matches_objective(self, small_instance):
        # (1/2) m^H A m - Re{m^H a} == (err - ||phi||^2) / 2
        inst = small_instance
        norm_phi = float(inst.weights.phi @ inst.weights.phi)
        for trial in range(20):
            m, s, b = random_design(inst, seed=300 + trial)
            a_mat, a_vec = receiver_normal_system(s, b, inst)
            quad = 0.5 * float(np.real(np.vdot(m, a_mat @ m))) - float(
                np.real(np.vdot(m, a_vec))
            )
            err = aggregation_error(m, s, b, inst)
            assert quad == pytest.approx((err - norm_phi) / 2, rel=1e-10, abs=1e-12)

    def test_hermitian_psd(self, small_instance):
        rng = make_rng(4)
        for trial in range(100):
            _, s, b = random_design(small_instance, seed=400 + trial)
            a_mat, _ = receiver_normal_system(s, b, small_instance)
            assert np.allclose(a_mat, np.conj(a_mat.T), atol=1e-12)
            x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            val = float(np.real(np.vdot(x, a_mat @ x)))
            assert val >= -1e-10 * float(np.real(np.vdot(x, x)))


class TestLassoQuadratic:
    def test_zero_receiver(self, small_instance):
        _, _, b = random_design(small_instance, seed=7)
        q, c = lasso_quadratic(np.zeros(4, complex), b, small_instance)
        assert np.all(q == 0) and np.all(c == 0)

    def test_scalar_identity(self):
        inst = scalar_instance()
        q, c = lasso_quadratic(np.array([1.0 + 0j]), np.array([1.0 + 0j]), inst)
        assert q[0, 0] == pytest.approx(2.0)
        assert c[0] == pytest.approx(1.0)
        # objective at s=1 equals the true error: 2 - 2 + 1 = 1
        err = aggregation_error(
            np.array([1.0 + 0j]), np.array([1.0]), np.array([1.0 + 0j]), inst
        )
        assert 2.0 - 2.0 + 1.0 == pytest.approx(err)

    def test_identity_holds_for_random_selections(self, small_instance):
        inst = small_instance
        norm_phi = float(inst.weights.phi @ inst.weights.phi)
        rng = make_rng(8)
        for trial in range(100):
            m, _, b = random_design(inst, seed=500 + trial)
            q, c = lasso_quadratic(m, b, inst)
            s = rng.uniform(size=4)
            quad = float(np.real(s @ q @ s)) - 2.0 * float(s @ c) + norm_phi
            err = aggregation_error(m, s, b, inst)
            assert abs(quad - err) <= 1e-10 * (1.0 + norm_phi)


class TestSelectionGainVector:
    def test_zero_receiver(self, small_instance):
        _, _, b = random_design(small_instance, seed=9)
        g = selection_gain_vector(np.zeros(4, complex), b, small_instance)
        assert np.all(g == 0)

    def test_conjugation_convention(self):
        # m = j: gain = (H B phi) * conj(m) = 1 * (-j)
        inst = scalar_instance()
        g = selection_gain_vector(np.array([1j]), np.array([1.0 + 0j]), inst)
        assert g[0] == pytest.approx(-1j)

    def test_real_part_is_descent_consistent_linear_term(self, small_instance):
        # Re{gain} equals lasso_quadratic's linear coefficient, the form for
        # which coordinate descent on the selection quadratic is monotone.
        for trial in range(10):
            m, _, b = random_design(small_instance, seed=600 + trial)
            g = selection_gain_vector(m, b, small_instance)
            _, c = lasso_quadratic(m, b, small_instance)
            assert np.allclose(np.real(g), c, atol=1e-12)
