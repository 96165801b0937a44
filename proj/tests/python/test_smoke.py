"""Smoke tests for the ghostsim python bindings (fast preset, tiny runs)."""

import numpy as np
import pytest

import ghostsim as gs


def test_version():
    assert gs.__version__


def test_double_slit_geometry():
    m = gs.make_double_slit(30e-6, 60e-6, 120e-6, 3e-6, 128)
    assert m.shape == (128, 128)
    assert set(np.unique(m)) == {0.0, 1.0}
    # mirror symmetric
    assert np.array_equal(m, m[:, ::-1])


def test_fresnel_identity_and_energy():
    rng = np.random.default_rng(1)
    u = rng.standard_normal((64, 64)) + 1j * rng.standard_normal((64, 64))
    out, pitch = gs.fresnel_propagate(u, 10e-6, 650e-9, 0.0)
    assert pitch == 10e-6
    np.testing.assert_array_equal(out, u)

    zmax = 64 * (10e-6) ** 2 / 650e-9
    out, _ = gs.fresnel_propagate(u, 10e-6, 650e-9, 0.5 * zmax, method="transfer")
    assert np.sum(np.abs(out) ** 2) == pytest.approx(np.sum(np.abs(u) ** 2), rel=1e-9)


def test_source_determinism():
    a = gs.generate_source_realization(1e-3, 128, 20e-6, 650e-9, seed=7)
    b = gs.generate_source_realization(1e-3, 128, 20e-6, 650e-9, seed=7)
    np.testing.assert_array_equal(a, b)
    c = gs.generate_source_realization(1e-3, 128, 20e-6, 650e-9, seed=8)
    assert not np.array_equal(a, c)


def test_campaign_and_gi_reconstruction():
    lay = gs.fast_layout()
    mask = gs.make_double_slit(30e-6, 60e-6, 120e-6, lay.object_pitch, lay.frame_window)
    frames, buckets, seeds, pitch = gs.run_campaign(lay, mask, m=24, master_seed=5)
    assert frames.shape == (24, 256, 256)
    assert buckets.shape == (24,)
    assert np.all(buckets > 0)
    assert seeds[0] == gs.split_seed(5, 0)

    est, status = gs.gi_reconstruct(frames, buckets, pitch)
    assert est.shape == (256, 256)
    assert status == "converged"
    assert est.max() == pytest.approx(1.0)


def test_cs_identity_recovery():
    x0 = np.zeros(16)
    x0[3], x0[11] = 1.25, 0.5
    est, status, residual, iters = gs.cs_reconstruct(
        np.eye(16), x0, roi_rows=4, roi_cols=4, epsilon=0.0
    )
    assert status == "converged"
    np.testing.assert_allclose(est.ravel(), x0, atol=1e-8)
    assert residual < 1e-8
    assert iters >= 1


def test_bp_oracle_matches_cs():
    rng = np.random.default_rng(3)
    A = rng.choice([-1.0, 1.0], size=(12, 30)) / np.sqrt(12)
    x0 = np.zeros(30)
    x0[4], x0[20] = 1.0, 0.7
    y = A @ x0
    oracle = gs.bp_oracle_enumerate(A, y, k_max=2)
    est, status, _, _ = gs.cs_reconstruct(A, y, roi_rows=5, roi_cols=6, epsilon=0.0)
    np.testing.assert_allclose(est.ravel(), oracle, atol=1e-4)


def test_metrics():
    mask = gs.make_double_slit(30e-6, 60e-6, 120e-6, 3e-6, 96)
    slit = gs.SlitGeometry(30e-6, 60e-6, 120e-6)
    pm = gs.double_slit_metrics(mask, 3e-6, slit)
    assert pm["midpoint_ratio"] == pytest.approx(0.0, abs=1e-12)
    assert pm["resolved"]

    err = gs.image_error(mask, mask, pitch=3e-6)
    assert err["mse"] == 0.0


def test_speckle_width_scales_with_source_size():
    lay = gs.fast_layout()
    mask = np.ones((lay.frame_window, lay.frame_window))
    frames, _, _, pitch = gs.run_campaign(lay, mask, m=120, master_seed=11)
    width = gs.speckle_correlation_width(frames, pitch)
    # fast preset: wl z / D = 650nm * 50mm / 1mm = 32.5 um
    assert 20e-6 < width < 50e-6
