import numpy as np
import pytest
from scipy import integrate

from gaussclone import (
    CloneMarginal,
    GaussianChannel,
    GaussianState,
    apply_channel,
    clone_marginal,
    coherent_state,
    compose_channels,
    cp_min_eigenvalue,
    husimi_q,
    identity_channel,
    mode_amplitudes,
    symplectic_form,
    vacuum_state,
)
from gaussclone.circuits import g_opt_matrix, mean_map_matrix
from gaussclone.design import symmetric_profile

from conftest import random_optimal_profile


def random_cp_channel(rng, m_in, m_out):
    s = rng.standard_normal((2 * m_out, 2 * m_in))
    q = rng.standard_normal((2 * m_out, 2 * m_out))
    g = q @ q.T / (2 * m_out)
    k = symplectic_form(m_out) - s @ symplectic_form(m_in) @ s.T
    mu = np.linalg.eigvalsh(g + 1j * k)[0]
    if mu < 0:
        g = g + (-mu + 1e-12) * np.eye(2 * m_out)
    return GaussianChannel(m_in, m_out, s, g)


def random_physical_state(rng, m):
    w = rng.standard_normal((2 * m, 2 * m))
    cov = np.eye(2 * m) + w @ w.T / (2 * m)
    return GaussianState(m, rng.standard_normal(2 * m), cov)


def test_symplectic_form_invariants():
    for m in (1, 2, 5):
        j = symplectic_form(m)
        assert np.array_equal(j.T, -j)
        assert np.allclose(j @ j, -np.eye(2 * m))


def test_state_validation():
    with pytest.raises(ValueError):
        GaussianState(1, np.zeros(2), np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        GaussianState(1, np.zeros(3), np.eye(2))


def test_coherent_state_convention():
    st = coherent_state([1 + 2j])
    assert np.allclose(st.mean, [np.sqrt(2), 2 * np.sqrt(2)])
    assert np.allclose(st.cov, np.eye(2))
    assert st.is_physical()
    assert mode_amplitudes(st)[0] == pytest.approx(1 + 2j)


def test_apply_identity_channel():
    rng = np.random.default_rng(0)
    st = random_physical_state(rng, 3)
    out = apply_channel(identity_channel(3), st)
    assert np.allclose(out.mean, st.mean)
    assert np.allclose(out.cov, st.cov)


def test_apply_channel_symmetric_cloner_diagonal():
    # optimal 1->2 symmetric cloner applied to a coherent state: each clone
    # quadrature variance is 1 + 2 * (1/2) = 2
    profile = symmetric_profile(1, 2)
    ch = GaussianChannel(1, 2, mean_map_matrix(1, 2), g_opt_matrix(profile))
    out = apply_channel(ch, coherent_state([0.7 - 0.2j]))
    assert np.allclose(np.diag(out.cov), 2.0)
    assert np.allclose(mode_amplitudes(out), 0.7 - 0.2j)


def test_apply_channel_composition():
    rng = np.random.default_rng(1)
    for _ in range(10):
        ch1 = random_cp_channel(rng, 2, 3)
        ch2 = random_cp_channel(rng, 3, 2)
        st = random_physical_state(rng, 2)
        stepwise = apply_channel(ch2, apply_channel(ch1, st))
        once = apply_channel(compose_channels(ch2, ch1), st)
        assert np.max(np.abs(stepwise.mean - once.mean)) < 1e-12
        assert np.max(np.abs(stepwise.cov - once.cov)) < 1e-12


def test_apply_channel_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_channel(identity_channel(2), vacuum_state(3))


def test_cp_min_eigenvalue_identity():
    assert abs(cp_min_eigenvalue(identity_channel(2))) < 1e-12


def test_cp_min_eigenvalue_optimal_cloner():
    profile = symmetric_profile(1, 2)
    ch = GaussianChannel(1, 2, mean_map_matrix(1, 2), g_opt_matrix(profile))
    assert cp_min_eigenvalue(ch) >= -1e-10


def test_cp_min_eigenvalue_noiseless_cloning_negative():
    # perfect cloning (G = 0 with the mean-replicating S) is not CP; for
    # 1->2 the min eigenvalue of iK is exactly -1
    ch = GaussianChannel(1, 2, mean_map_matrix(1, 2), np.zeros((4, 4)))
    assert cp_min_eigenvalue(ch) == pytest.approx(-1.0, abs=1e-12)


def test_cp_channel_preserves_physicality():
    rng = np.random.default_rng(2)
    for _ in range(20):
        ch = random_cp_channel(rng, 2, 3)
        st = random_physical_state(rng, 2)
        assert apply_channel(ch, st).is_physical(tol=1e-8)


@pytest.mark.parametrize(
    "diag,n,fid",
    [(1.0, 0.0, 1.0), (2.0, 0.5, 2 / 3), (5.0, 2.0, 1 / 3)],
)
def test_clone_marginal_noise_and_fidelity(diag, n, fid):
    cov = np.diag([diag, 3.0, diag, 3.0])
    st = GaussianState(2, np.array([np.sqrt(2), 0.0, 0.0, 0.0]), cov)
    marg = clone_marginal(st, 0)
    assert marg.thermal_noise == pytest.approx(n, abs=1e-12)
    assert marg.fidelity == pytest.approx(fid, abs=1e-12)
    assert marg.coherent_amplitude == pytest.approx(1.0)


def test_clone_marginal_noise_bijection():
    for n in (0.0, 0.5, 1.0, 2.0, 10.0):
        cov = np.eye(2) * (1 + 2 * n)
        st = GaussianState(1, np.zeros(2), cov)
        assert clone_marginal(st, 0).thermal_noise == pytest.approx(n, abs=1e-12)


def test_clone_marginal_rejects_anisotropy():
    st = GaussianState(1, np.zeros(2), np.diag([1.0, 3.0]))
    with pytest.raises(ValueError, match="isotropic"):
        clone_marginal(st, 0)


def test_husimi_q_peak_values():
    assert husimi_q(CloneMarginal(0.3 + 0.1j, 0.0, 1.0), 0.3 + 0.1j) == pytest.approx(1 / np.pi)
    assert husimi_q(CloneMarginal(1.0, 0.5, 2 / 3), 1.0) == pytest.approx(2 / (3 * np.pi))


def test_husimi_q_normalization():
    rng = np.random.default_rng(3)
    for _ in range(3):
        marg = CloneMarginal(
            complex(rng.normal(), rng.normal()), float(rng.uniform(0, 5)), 0.0
        )
        width = np.sqrt(marg.thermal_noise + 1)
        cx, cy = marg.coherent_amplitude.real, marg.coherent_amplitude.imag
        total, _ = integrate.dblquad(
            lambda y, x: husimi_q(marg, complex(x, y)),
            cx - 10 * width,
            cx + 10 * width,
            cy - 10 * width,
            cy + 10 * width,
        )
        assert total == pytest.approx(1.0, abs=1e-6)


def test_circuit_channels_are_cp():
    rng = np.random.default_rng(4)
    from gaussclone import build_interferometer, channel_from_amplifier

    for _ in range(10):
        profile, _ = random_optimal_profile(rng)
        ch = channel_from_amplifier(build_interferometer(profile), profile)
        assert cp_min_eigenvalue(ch) >= -1e-10
