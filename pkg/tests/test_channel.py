import astropy.units as u
import numpy as np
import pytest

from chantrackkit._errors import DimensionError, DomainError
from chantrackkit.data_classes import (
    ALPHA_MAX,
    ArrayGeometry,
    ModelParams,
    QuantizerSpec,
    RayChannelSpec,
)
from chantrackkit.channel import (
    ar_evolve,
    default_support_width,
    dft_matrix,
    doppler_shift,
    draw_initial,
    from_virtual,
    gen_physical_path,
    gen_ray_channel,
    gen_sparse_path,
    load_complex_table,
    make_sparse_params,
    make_training_matrix,
    measurement_matrix,
    observe_block,
    observe_path,
    save_complex_table,
    steering_vector,
    to_virtual,
    velocity_to_alpha,
)


class TestSteeringVector:
    def test_broadside(self):
        a = steering_vector(0.0, ArrayGeometry(4))
        np.testing.assert_allclose(a, np.ones(4))

    def test_endfire_half_wavelength(self):
        a = steering_vector(np.pi / 2, ArrayGeometry(2, 0.5))
        np.testing.assert_allclose(a, [1, -1], atol=1e-15)

    def test_elementwise(self):
        theta = np.pi / 6
        a = steering_vector(theta, ArrayGeometry(3, 0.5))
        expected = [np.exp(1j * 2 * np.pi * n * 0.5 * np.sin(theta)) for n in range(3)]
        np.testing.assert_allclose(a, expected, rtol=1e-14)

    def test_angle_out_of_range(self):
        with pytest.raises(DomainError):
            steering_vector(2.0, ArrayGeometry(4))


class TestVirtualTransform:
    def test_energy_preserved(self, rng):
        h = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        np.testing.assert_allclose(
            np.linalg.norm(to_virtual(h)), np.linalg.norm(h), rtol=1e-12
        )

    def test_dft_column_maps_to_unit_vector(self):
        F = dft_matrix(8)
        e = to_virtual(F.conj().T[:, 3])
        np.testing.assert_allclose(e, np.eye(8)[3], atol=1e-12)

    def test_inverse(self, rng):
        h = rng.standard_normal((8, 3)) + 1j * rng.standard_normal((8, 3))
        np.testing.assert_allclose(from_virtual(to_virtual(h)), h, atol=1e-12)

    def test_dft_entries(self):
        F = dft_matrix(4)
        i, k = np.meshgrid(np.arange(4), np.arange(4), indexing="ij")
        np.testing.assert_allclose(F, np.exp(-2j * np.pi * i * k / 4) / 2, atol=1e-15)


class TestRayChannel:
    def _spec(self, **kwargs):
        base = dict(
            theta_min=-0.3,
            theta_max=0.3,
            num_rays=1,
            doppler_max=0.0,
            block_duration=1e-3,
            num_blocks=4,
        )
        base.update(kwargs)
        return RayChannelSpec(**base)

    def test_zero_doppler_freezes_channel(self, rng):
        h = gen_ray_channel(self._spec(), ArrayGeometry(8), rng)
        for m in range(1, 4):
            np.testing.assert_allclose(h[:, m], h[:, 0])

    def test_single_unit_ray(self):
        spec = self._spec(doppler_max=100.0)
        h = gen_ray_channel(spec, ArrayGeometry(8), np.random.default_rng(3), gains=[1.0])
        theta = np.random.default_rng(3).uniform(-0.3, 0.3, 1)[0]
        np.testing.assert_allclose(h[:, 0], steering_vector(theta, ArrayGeometry(8)))

    def test_gain_shape_checked(self, rng):
        with pytest.raises(DimensionError):
            gen_ray_channel(self._spec(num_rays=3), ArrayGeometry(4), rng, gains=[1.0])

    def test_physical_path_support(self, rng):
        spec = self._spec(num_rays=10, doppler_max=50.0, num_blocks=8)
        path, power = gen_physical_path(spec, ArrayGeometry(32), rng)
        assert path.values.shape == (32, 8)
        assert power.shape == (32,)
        assert path.true_support.size >= 1
        assert np.argmax(power) in path.true_support


class TestArModel:
    def test_alpha_one_freezes(self, rng):
        params = ModelParams(1.0, np.ones(4))
        h = draw_initial(params, rng)
        np.testing.assert_array_equal(ar_evolve(h, params, rng), h)

    def test_alpha_outside_unit_interval(self, rng):
        with pytest.raises(DomainError):
            ar_evolve(np.zeros(3), ModelParams(1.5, np.ones(3)), rng)

    def test_shape_mismatch(self, rng):
        with pytest.raises(DimensionError):
            ar_evolve(np.zeros(4), ModelParams(0.5, np.ones(3)), rng)

    def test_zero_variance_rows_stay_zero(self, rng):
        params = ModelParams(0.9, [0.0, 1.0, 0.0])
        path = gen_sparse_path(params, 20, rng)
        assert np.all(path.values[[0, 2]] == 0)
        np.testing.assert_array_equal(path.true_support, [1])

    def test_stationary_variance(self, rng):
        params = ModelParams(0.8, [0.5, 2.0])
        h = draw_initial(params, rng)
        samples = []
        for _ in range(20000):
            h = ar_evolve(h, params, rng)
            samples.append(h)
        power = np.mean(np.abs(np.array(samples)) ** 2, axis=0)
        np.testing.assert_allclose(power, params.lam, rtol=0.1)

    def test_support_width(self):
        assert default_support_width(32, 4) == 1
        assert default_support_width(128, 4) == 3

    def test_sparse_params_contiguous(self, rng):
        params = make_sparse_params(32, 5, 0.9, rng)
        support = params.support
        assert support.size == 5
        np.testing.assert_array_equal(np.diff(support), 1)
        assert np.all((params.lam[support] >= 0.5) & (params.lam[support] <= 1.5))


class TestTraining:
    def test_orthogonality(self, rng):
        training = make_training_matrix(64, 16, 16.0, rng)
        assert training.gram_residual() < 1e-10

    def test_square_is_unitary(self, rng):
        training = make_training_matrix(8, 8, 8.0, rng)
        np.testing.assert_allclose(
            training.X.conj().T @ training.X, np.eye(8), atol=1e-12
        )

    def test_single_pilot_norm(self, rng):
        training = make_training_matrix(8, 1, 4.0, rng)
        np.testing.assert_allclose(np.linalg.norm(training.X), 2.0)

    def test_too_many_pilots(self, rng):
        with pytest.raises(DimensionError):
            make_training_matrix(4, 5, 1.0, rng)

    def test_measurement_matrix(self, rng):
        training = make_training_matrix(8, 4, 4.0, rng)
        F = dft_matrix(8)
        np.testing.assert_allclose(
            measurement_matrix(training), training.X.T @ F.conj().T, atol=1e-12
        )

    def test_noiseless_observation(self, rng):
        training = make_training_matrix(8, 4, 4.0, rng)
        h = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        q, B = observe_block(h, training, 0.0, rng)
        np.testing.assert_allclose(q, B @ h)

    def test_observe_path_shapes(self, rng):
        params = make_sparse_params(16, 2, 0.9, rng)
        path = gen_sparse_path(params, 5, rng)
        obs = observe_path(path, 4, 4.0, 0.01, QuantizerSpec.uniform(3, 0.5), rng)
        assert obs.y.shape == (5, 4)
        assert obs.B.shape == (5, 4, 16)
        np.testing.assert_array_equal(obs.y.real, np.round(obs.y.real))


class TestDoppler:
    def test_calibration_point(self):
        alpha = velocity_to_alpha(200 * u.km / u.hour)
        assert alpha == pytest.approx(0.9899, abs=1e-9)

    def test_zero_velocity_clamped(self):
        assert velocity_to_alpha(0.0) == ALPHA_MAX

    def test_alpha_decreases_with_speed(self):
        speeds = [10, 50, 100, 200]
        alphas = [velocity_to_alpha(v * u.km / u.hour) for v in speeds]
        assert all(a > b for a, b in zip(alphas, alphas[1:]))

    def test_shift(self):
        f_d = doppler_shift(300.0, 1e9)
        assert f_d.to_value(u.Hz) == pytest.approx(300.0 * 1e9 / 299792458.0)

    def test_negative_velocity(self):
        with pytest.raises(DomainError):
            doppler_shift(-1.0)


class TestComplexTables:
    def test_round_trip_is_exact(self, tmp_path, rng):
        values = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
        path = tmp_path / "h.csv"
        save_complex_table(path, values)
        np.testing.assert_array_equal(load_complex_table(path), values)

    def test_vector_becomes_column(self, tmp_path):
        path = tmp_path / "v.csv"
        save_complex_table(path, [1 + 2j, -3.5j])
        np.testing.assert_array_equal(load_complex_table(path), [[1 + 2j], [-3.5j]])
