import numpy as np
import pytest

from chantrackkit._errors import DimensionError, DomainError, NumericalError
from chantrackkit.data_classes import DampingConfig, GaussianMessage, QuantizerSpec
from chantrackkit.channel import make_training_matrix, measurement_matrix
from chantrackkit.em import combine_time_prior
from chantrackkit.gamp import (
    g_in,
    g_out,
    gamp_block_update,
    gamp_solve,
    init_state,
    linearize_output,
    lmmse_stage,
    trunc_normal_mean,
    trunc_normal_moments,
)
from chantrackkit.oracle import lmmse_posterior, mc_trunc_moments, quadrature_gout
from chantrackkit.quantizer import quantize


def _complex(rng, size, scale=1.0):
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


class TestTruncatedNormal:
    def test_untruncated(self):
        mean, var = trunc_normal_moments(0.7, 2.0, -np.inf, np.inf)
        assert mean == pytest.approx(0.7)
        assert var == pytest.approx(2.0)

    def test_symmetric(self):
        assert trunc_normal_mean(0.0, 1.0, -1.3, 1.3) == pytest.approx(0.0, abs=1e-15)

    def test_half_normal(self):
        mean, var = trunc_normal_moments(0.0, 1.0, 0.0, np.inf)
        assert mean == pytest.approx(np.sqrt(2 / np.pi), rel=1e-12)
        assert var == pytest.approx(1 - 2 / np.pi, rel=1e-12)

    def test_far_tail_stays_in_cell(self):
        mean, var = trunc_normal_moments(0.0, 1.0, 30.0, 31.0)
        assert 30.0 <= mean <= 31.0
        assert 0.0 < var < 1.0

    def test_empty_cell(self):
        with pytest.raises(NumericalError) as err:
            trunc_normal_moments(0.0, 1.0, 1.0, 1.0)
        assert err.value.diagnostics["a"] == 1.0

    def test_matches_monte_carlo(self, rng):
        for _ in range(100):
            mu, var = rng.normal(0, 2), rng.uniform(0.2, 3.0)
            a = rng.normal(0, 2)
            b = a + rng.uniform(0.1, 3.0) if rng.uniform() < 0.8 else np.inf
            expected, stderr = mc_trunc_moments(mu, var, a, b, 20000, rng)
            assert abs(trunc_normal_mean(mu, var, a, b) - expected) <= 4 * stderr


class TestInputFunction:
    def test_gaussian_prior(self):
        value, gain = g_in(3.0, 1.0, GaussianMessage(1.0, 2.0))
        assert value == pytest.approx(7 / 3)
        assert gain == pytest.approx(2 / 3)

    def test_uninformative_prior(self):
        value, gain = g_in(3.0 - 1j, 1.0, GaussianMessage(0.0, np.inf))
        assert value == 3.0 - 1j
        assert gain == 1.0

    def test_point_mass_prior(self):
        value, gain = g_in(3.0, 1.0, GaussianMessage(1.5, 0.0))
        assert value == 1.5
        assert gain == 0.0

    def test_degenerate(self):
        with pytest.raises(DomainError):
            g_in(1.0, 0.0, GaussianMessage(0.0, 0.0))

    def test_derivative(self, rng):
        r = _complex(rng, 1000)
        nu_r = rng.uniform(0.1, 2.0, 1000)
        prior = GaussianMessage(_complex(rng, 1000), rng.uniform(0.1, 2.0, 1000))
        h = 1e-6
        numeric = (g_in(r + h, nu_r, prior)[0] - g_in(r - h, nu_r, prior)[0]) / (2 * h)
        np.testing.assert_allclose(numeric.real, g_in(r, nu_r, prior)[1], rtol=1e-5)


def _averaged_fd(p, nu_p, y, noise_var, spec, h=1e-6):
    d_re = (g_out(p + h, nu_p, y, noise_var, spec)[0] - g_out(p - h, nu_p, y, noise_var, spec)[0]).real
    d_im = (g_out(p + 1j * h, nu_p, y, noise_var, spec)[0] - g_out(p - 1j * h, nu_p, y, noise_var, spec)[0]).imag
    return (d_re + d_im) / (4 * h)


class TestOutputFunction:
    def test_no_quantization(self):
        value, derivative = g_out(1 + 1j, 2.0, 0.5j, 0.25, QuantizerSpec.none())
        assert value == pytest.approx((1 + 1j - 2.0 * 0.5j) / 1.5)
        assert derivative == pytest.approx(1 / 1.5)

    def test_vanishing_precision(self):
        value, derivative = g_out(1 + 1j, 1e-12, 3.0, 0.1, QuantizerSpec.none())
        assert value == pytest.approx(1 + 1j, rel=1e-10)
        assert derivative == pytest.approx(1.0)

    def test_pdq_without_distortion(self, rng):
        p, y = _complex(rng, 20), _complex(rng, 20)
        nu_p = rng.uniform(0.5, 2.0, 20)
        expected = g_out(p, nu_p, y, 0.3, QuantizerSpec.none())
        got = g_out(p, nu_p, y, 0.3, QuantizerSpec.pdq(3, 0.5, rho=0.0))
        np.testing.assert_allclose(got[0], expected[0])
        np.testing.assert_allclose(got[1], expected[1])

    def test_precision_must_be_positive(self):
        with pytest.raises(DomainError):
            g_out(0j, 0.0, 0j, 1.0, QuantizerSpec.none())

    @pytest.mark.parametrize(
        "spec",
        [
            QuantizerSpec.none(),
            QuantizerSpec.pdq(3, 0.5),
            QuantizerSpec.uniform(3, 0.5),
        ],
        ids=["none", "pdq", "uniform"],
    )
    def test_derivative_matches_finite_difference(self, spec, rng):
        n = 1000
        nu_p = rng.uniform(0.5, 2.0, n)
        p = nu_p * _complex(rng, n, 0.7)
        noise_var = 0.3
        z = p / nu_p + _complex(rng, n, np.sqrt(0.5 / nu_p))
        y = z + _complex(rng, n, np.sqrt(noise_var / 2))
        if spec.mode == "uniform":
            y = quantize(y, spec)
        _, derivative = g_out(p, nu_p, y, noise_var, spec)
        numeric = _averaged_fd(p, nu_p, y, noise_var, spec)
        np.testing.assert_allclose(derivative, numeric, rtol=1e-5, atol=1e-8)

    @pytest.mark.parametrize(
        "spec",
        [
            QuantizerSpec.none(),
            QuantizerSpec.pdq(3, 0.5),
            QuantizerSpec.uniform(3, 0.5),
        ],
        ids=["none", "pdq", "uniform"],
    )
    def test_linearized_channel_reproduces_output(self, spec, rng):
        n = 200
        nu_p = rng.uniform(0.5, 2.0, n)
        p = nu_p * _complex(rng, n, 0.7)
        y = p / nu_p + _complex(rng, n, 0.5)
        if spec.mode == "uniform":
            y = quantize(y, spec)
        y_lin, w_lin = linearize_output(p, nu_p, y, 0.3, spec)
        value, derivative = g_out(p, nu_p, y, 0.3, spec)
        np.testing.assert_allclose((p - nu_p * y_lin) / (1 + nu_p * w_lin), value, rtol=1e-8, atol=1e-12)
        np.testing.assert_allclose(1 / (1 + nu_p * w_lin), derivative, rtol=1e-8)

    def test_linearized_gaussian_modes_are_fixed(self, rng):
        y = _complex(rng, 5)
        y_lin, w_lin = linearize_output(_complex(rng, 5), np.ones(5), y, 0.3, QuantizerSpec.none())
        np.testing.assert_array_equal(y_lin, y)
        np.testing.assert_array_equal(w_lin, 0.3)
        spec = QuantizerSpec.pdq(3, 0.5, rho=0.2, input_power=1.0)
        y_lin, w_lin = linearize_output(0j, 1.0, y, 0.3, spec)
        np.testing.assert_allclose(y_lin, y / 0.8)
        np.testing.assert_allclose(w_lin, (0.8 * 0.3 + 0.2 * 0.8 * 1.0) / 0.64)

    def test_uniform_matches_quadrature(self, rng):
        spec = QuantizerSpec.uniform(3, 0.5)
        for _ in range(100):
            nu_p = rng.uniform(0.5, 2.0)
            p = nu_p * complex(*(0.7 * rng.standard_normal(2)))
            noise_var = rng.uniform(0.05, 1.0)
            z = p / nu_p + complex(*(np.sqrt(0.5 / nu_p) * rng.standard_normal(2)))
            y = complex(quantize(z + complex(*(np.sqrt(noise_var / 2) * rng.standard_normal(2))), spec))
            value, _ = g_out(p, nu_p, y, noise_var, spec)
            expected = quadrature_gout(p, nu_p, y, noise_var, spec)
            np.testing.assert_allclose(value, expected, rtol=1e-6, atol=1e-9)


def _small_system(rng, N=8, P=8, snr_db=30.0):
    training = make_training_matrix(N, P, float(P), rng)
    B = measurement_matrix(training)
    lam = rng.uniform(0.5, 1.5, N)
    h = np.sqrt(lam / 2) * (rng.standard_normal(N) + 1j * rng.standard_normal(N))
    noise_var = P / 10 ** (snr_db / 10)
    y = B @ h + np.sqrt(noise_var / 2) * (rng.standard_normal(P) + 1j * rng.standard_normal(P))
    return B, y, GaussianMessage(np.zeros(N), lam), noise_var


class TestGampSolver:
    def test_init_state(self):
        state = init_state(3, GaussianMessage([1.0, 2.0], [np.inf, 0.5]))
        np.testing.assert_array_equal(state.x, [0, 2])
        np.testing.assert_array_equal(state.nu_x, [1.0, 0.5])
        assert np.all(np.isinf(state.nu_r))
        assert state.w_lin is None

    @pytest.mark.parametrize("P", [4, 8])
    def test_reaches_lmmse_posterior(self, P, rng):
        B, y, prior, noise_var = _small_system(rng, N=8, P=P)
        state, _ = gamp_solve(
            B, y, prior, QuantizerSpec.none(), noise_var,
            DampingConfig(k_max=1000, tol=1e-14),
        )
        expected, cov = lmmse_posterior(y, B, prior.mean, prior.var, noise_var)
        np.testing.assert_allclose(state.x, expected, rtol=1e-6, atol=1e-8)
        np.testing.assert_allclose(state.nu_x, np.real(np.diag(cov)), rtol=1e-6)

    @pytest.mark.parametrize("snr_db", [15.0, 20.0, 30.0])
    def test_row_orthogonal_variances(self, snr_db):
        # B B^H = I with P < N: the scalar iid recursion would add mean(nu_x)
        for seed in range(10):
            rng = np.random.default_rng(seed)
            B, y, prior, noise_var = _small_system(rng, N=32, P=8, snr_db=snr_db)
            state, _ = gamp_solve(B, y, prior, QuantizerSpec.none(), noise_var)
            _, cov = lmmse_posterior(y, B, prior.mean, prior.var, noise_var)
            np.testing.assert_allclose(state.nu_x, np.real(np.diag(cov)), rtol=1e-6)

    def test_measurement_message_rebuilds_posterior(self, rng):
        B, y, prior, noise_var = _small_system(rng, N=8, P=6)
        state, _ = gamp_solve(
            B, y, prior, QuantizerSpec.none(), noise_var,
            DampingConfig(k_max=1000, tol=1e-14),
        )
        rebuilt = combine_time_prior(prior, state.measurement)
        np.testing.assert_allclose(rebuilt.mean, state.x, rtol=1e-8, atol=1e-10)
        np.testing.assert_allclose(rebuilt.var, state.nu_x, rtol=1e-8)

    def test_unitary_measurement_ignores_prior(self, rng):
        B, y, prior, noise_var = _small_system(rng, N=8, P=8)
        post, extrinsic, _ = lmmse_stage(B, prior, y, np.full(8, noise_var))
        # B^H B = I: each coefficient sees B^H y with noise noise_var
        np.testing.assert_allclose(extrinsic.mean, B.conj().T @ y, rtol=1e-8)
        np.testing.assert_allclose(extrinsic.var, noise_var, rtol=1e-8)
        np.testing.assert_allclose(post.var, prior.var * noise_var / (prior.var + noise_var), rtol=1e-10)

    def test_uninformative_prior_uses_information_form(self, rng):
        B, y = _complex(rng, (8, 4)), _complex(rng, 8)
        flat = GaussianMessage(np.zeros(4), np.full(4, np.inf))
        post, extrinsic, _ = lmmse_stage(B, flat, y, np.full(8, 0.1))
        least_squares = np.linalg.lstsq(B, y, rcond=None)[0]
        np.testing.assert_allclose(post.mean, least_squares, rtol=1e-8)
        np.testing.assert_allclose(extrinsic.mean, post.mean, rtol=1e-8)
        np.testing.assert_allclose(extrinsic.var, post.var, rtol=1e-8)

    def test_damping_keeps_fixed_point(self, rng):
        B, y, prior, noise_var = _small_system(rng, N=4, P=4)
        results = [
            gamp_solve(
                B, y, prior, QuantizerSpec.none(), noise_var,
                DampingConfig(theta_s=theta, theta_x=theta, k_max=2000, tol=1e-14),
            )[0].x
            for theta in (0.7, 0.4)
        ]
        np.testing.assert_allclose(results[0], results[1], atol=1e-6)

    def test_noiseless_tight_prior(self, rng):
        B, _, prior, _ = _small_system(rng, N=4, P=4)
        h = _complex(rng, 4)
        tight = GaussianMessage(h, np.full(4, 1e-10))
        state, _ = gamp_solve(B, B @ h, tight, QuantizerSpec.none(), 1e-12)
        np.testing.assert_allclose(state.x, h, atol=1e-6)

    def test_dimension_mismatch(self, rng):
        B, y, prior, noise_var = _small_system(rng, N=4, P=4)
        with pytest.raises(DimensionError):
            gamp_block_update(
                B, y[:3], prior, QuantizerSpec.none(), noise_var,
                init_state(4, prior), DampingConfig(),
            )

    def test_quantized_estimate_improves_on_prior(self, rng):
        N = P = 8
        B, _, prior, noise_var = _small_system(rng, N=N, P=P)
        errors = []
        spec = QuantizerSpec.uniform(4, 0.3)
        for _ in range(20):
            h = np.sqrt(prior.var / 2) * _complex(rng, N)
            q = B @ h + np.sqrt(noise_var / 2) * _complex(rng, P)
            state, _ = gamp_solve(B, quantize(q, spec), prior, spec, noise_var)
            errors.append(np.sum(np.abs(state.x - h) ** 2) / np.sum(np.abs(h) ** 2))
        assert np.mean(errors) < 0.1
