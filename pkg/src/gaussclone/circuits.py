"""Physical realizations of the optimal asymmetric cloner.

Two equivalent circuits are synthesized from a noise profile on the optimal
surface:

* amplifier scheme: an unbalanced beam splitter taps the collected signal,
  a phase-insensitive amplifier of gain g boosts the transmitted part, and
  an M-port interferometer V distributes signal and noise into the clones;
* feedforward scheme: a tap + heterodyne measurement + per-clone conditional
  displacements emulate the amplifier with passive optics only.

Both reproduce the same output Gaussian state: clone means equal the input
amplitude and the covariance is I + 2F with F_jk = sqrt(n_j n_k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GaussianChannel, GaussianState, apply_channel, coherent_state
from .design import NoiseProfile, residual

RESIDUAL_TOL = 1e-8


class OffSurfaceError(ValueError):
    """The noise profile does not lie on the optimal surface."""


def _require_on_surface(profile: NoiseProfile, tol: float = RESIDUAL_TOL):
    r = residual(profile)
    if abs(r) > tol:
        raise OffSurfaceError(f"profile residual {r:.3g} exceeds tolerance {tol:.0e}")


# -- analytic matrices of the cloner channel ---------------------------------


def noise_gram_matrix(profile: NoiseProfile) -> np.ndarray:
    """Rank-one matrix F with F_jk = sqrt(n_j n_k)."""
    w = np.sqrt(profile.noises)
    return np.outer(w, w)


def mean_map_matrix(n_in: int, m_out: int) -> np.ndarray:
    """2M x 2 matrix S replicating the collected-mode mean into every clone."""
    s = np.zeros((2 * m_out, 2))
    s[:m_out, 0] = 1.0 / math.sqrt(n_in)
    s[m_out:, 1] = 1.0 / math.sqrt(n_in)
    return s


def clone_output_cov(profile: NoiseProfile) -> np.ndarray:
    """Output covariance of the M clones: blkdiag(I + 2F, I + 2F)."""
    block = np.eye(profile.m_out) + 2.0 * noise_gram_matrix(profile)
    return np.block(
        [[block, np.zeros_like(block)], [np.zeros_like(block), block]]
    )


def g_opt_matrix(profile: NoiseProfile) -> np.ndarray:
    """Channel noise matrix of the optimal cloner: blocks I + 2F - H/N."""
    m, n = profile.m_out, profile.n_in
    block = np.eye(m) + 2.0 * noise_gram_matrix(profile) - np.ones((m, m)) / n
    z = np.zeros_like(block)
    return np.block([[block, z], [z, block]])


def k_matrix(n_in: int, m_out: int) -> np.ndarray:
    """K = J_M - S J_1 S^T for the mean-replicating S."""
    m = m_out
    p = np.eye(m) - np.ones((m, m)) / n_in
    z = np.zeros_like(p)
    return np.block([[z, p], [-p, z]])


def a_opt_matrix(profile: NoiseProfile) -> np.ndarray:
    """Complete-positivity matrix A_opt = G_opt + iK (Hermitian)."""
    return g_opt_matrix(profile) + 1j * k_matrix(profile.n_in, profile.m_out)


# -- amplifier scheme --------------------------------------------------------


@dataclass(frozen=True)
class AmplifierCircuit:
    """Tap transmittance t, amplifier gain g, interferometer V, and the
    effective auxiliary-mode coefficients kappa of the composite map."""

    t: float
    g: float
    V: np.ndarray
    kappa: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        kappa = np.asarray(self.kappa, dtype=float)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "kappa", kappa)
        V.setflags(write=False)
        kappa.setflags(write=False)


def gain_and_transmittance(profile: NoiseProfile) -> tuple[float, float]:
    """Amplifier gain g = sqrt(1 + n_tot) and tap transmittance
    t = sqrt((M - N) / (n_tot N))."""
    if profile.m_out <= profile.n_in:
        raise ValueError("amplifier scheme requires M > N")
    _require_on_surface(profile)
    n_tot = profile.n_tot
    if n_tot <= 0:
        raise ValueError("M > N requires strictly positive total noise")
    g = math.sqrt(1.0 + n_tot)
    t = math.sqrt((profile.m_out - profile.n_in) / (n_tot * profile.n_in))
    if t > 1.0 + 1e-12:
        raise OffSurfaceError(f"transmittance {t:.6g} > 1; profile is infeasible")
    return g, min(t, 1.0)


def _complete_unitary(fixed_cols: list[np.ndarray], dim: int) -> np.ndarray:
    """Deterministic Gram-Schmidt completion over canonical basis vectors."""
    cols = [c / np.linalg.norm(c) for c in fixed_cols]
    for i in range(dim):
        if len(cols) == dim:
            break
        v = np.zeros(dim)
        v[i] = 1.0
        for c in cols:
            v -= (c @ v) * c
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            continue
        cols.append(v / norm)
    if len(cols) != dim:
        raise RuntimeError("Gram-Schmidt completion failed (degenerate norms)")
    return np.column_stack(cols)


def build_interferometer(profile: NoiseProfile) -> AmplifierCircuit:
    """Synthesize the amplifier-scheme circuit {t, g, V, kappa}.

    Column M of V routes the amplifier idler noise, v_jM = sqrt(n_j / n_tot);
    column 1 (for t < 1) enforces that each clone's coherent amplitude is
    exactly the input amplitude; the remaining columns are a deterministic
    unitary completion.
    """
    g, t = gain_and_transmittance(profile)
    m, n = profile.m_out, profile.n_in
    n_tot = profile.n_tot
    r = math.sqrt(max(0.0, 1.0 - t * t))
    col_noise = np.sqrt(profile.noises / n_tot)
    sqrt_n = math.sqrt(n)

    if r > 1e-9:
        col_sig = (1.0 - col_noise * g * t * sqrt_n) / (r * sqrt_n)
        norm = np.linalg.norm(col_sig)
        if abs(norm - 1.0) > 1e-8 or abs(col_sig @ col_noise) > 1e-8:
            raise OffSurfaceError(
                "amplitude column cannot be completed to a unitary "
                f"(norm {norm:.6g}); profile residual is nonzero"
            )
        ordered = _complete_unitary([col_sig, col_noise], m)
        # put columns back in circuit order (b_1, ..., b_{M-1}, a_out)
        v = np.empty((m, m))
        v[:, 0] = ordered[:, 0]
        v[:, m - 1] = ordered[:, 1]
        v[:, 1 : m - 1] = ordered[:, 2:]
    else:
        # symmetric point t = 1: mode b_1 carries no signal, no amplitude
        # constraint; fix the noise column and complete the rest
        ordered = _complete_unitary([col_noise], m)
        v = np.empty((m, m))
        v[:, m - 1] = ordered[:, 0]
        v[:, : m - 1] = ordered[:, 1:]

    # composite coefficients of the auxiliary vacuum modes b_1..b_{M-1}:
    # kappa_j1 = v_j1 t - v_jM g r, kappa_jk = v_jk otherwise
    kappa = v[:, : m - 1].copy()
    kappa[:, 0] = v[:, 0] * t - v[:, m - 1] * g * r
    return AmplifierCircuit(t=t, g=g, V=v, kappa=kappa)


def channel_from_amplifier(circ: AmplifierCircuit, profile: NoiseProfile) -> GaussianChannel:
    """Compose tap, amplifier, and interferometer into a single (S, G) map.

    The channel input is the single collected mode (carrying sqrt(N) alpha);
    S equals the mean-replicating matrix and G equals blocks I + 2F - H/N.
    """
    m, n = profile.m_out, profile.n_in
    t, g = circ.t, circ.g
    r = math.sqrt(max(0.0, 1.0 - t * t))
    amp_noise = math.sqrt(max(0.0, g * g - 1.0))
    total = m + 1  # modes: a, b_1..b_{M-1}, c (idler)

    def embed(mix):
        z = np.zeros_like(mix)
        return np.block([[mix, z], [z, mix]])

    bs = np.eye(total)
    bs[0, 0], bs[0, 1], bs[1, 0], bs[1, 1] = t, -r, r, t

    amp = np.eye(2 * total)
    # x block on (a, c)
    amp[0, 0] = amp[m, m] = g
    amp[0, m] = amp[m, 0] = amp_noise
    # p block on (a, c): conjugate coupling flips sign
    amp[total, total] = amp[total + m, total + m] = g
    amp[total, total + m] = amp[total + m, total] = -amp_noise

    mix = np.zeros((total, total))
    mix[:m, 0] = circ.V[:, m - 1]
    mix[:m, 1:m] = circ.V[:, : m - 1]
    mix[m, m] = 1.0

    t_total = embed(mix) @ amp @ embed(bs)
    clone_rows = np.r_[0:m, total : total + m]
    s_chan = t_total[np.ix_(clone_rows, [0, total])]
    cov_out = (t_total @ t_total.T)[np.ix_(clone_rows, clone_rows)]
    g_chan = cov_out - s_chan @ s_chan.T
    g_chan = 0.5 * (g_chan + g_chan.T)
    return GaussianChannel(m_in=1, m_out=m, S=s_chan, G=g_chan)


def amplifier_output_state(
    circ: AmplifierCircuit, profile: NoiseProfile, alpha: complex
) -> GaussianState:
    """Exact output Gaussian state of the amplifier scheme on N copies of
    |alpha> (after signal collection into one mode)."""
    channel = channel_from_amplifier(circ, profile)
    collected = coherent_state([math.sqrt(profile.n_in) * alpha])
    return apply_channel(channel, collected)


# -- feedforward scheme ------------------------------------------------------


@dataclass(frozen=True)
class FeedforwardCircuit:
    """Tap reflectance, electronic gains, splitter reflectances, and the
    calibrated phase convention of the conditional displacement."""

    r_tap: float
    gains: np.ndarray
    reflectances: np.ndarray
    phase_convention: str = "outcome"

    def __post_init__(self):
        gains = np.asarray(self.gains, dtype=float)
        refl = np.asarray(self.reflectances, dtype=float)
        if self.phase_convention not in ("outcome", "conjugate"):
            raise ValueError(f"unknown phase convention {self.phase_convention!r}")
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "reflectances", refl)
        gains.setflags(write=False)
        refl.setflags(write=False)


def feedforward_params(profile: NoiseProfile) -> FeedforwardCircuit:
    """Tap reflectance, electronic gains g_j = sqrt(n_j), and the recursive
    splitter reflectances of the feedforward scheme."""
    _require_on_surface(profile)
    m, n = profile.m_out, profile.n_in
    n_tot = profile.n_tot
    excess = m - n
    denom_sq = (2.0 + n_tot) * n - m
    if denom_sq <= 0:
        raise ValueError("degenerate splitter recursion: (2 + n_tot) N - M <= 0")
    gains = np.sqrt(profile.noises)
    r_tap = math.sqrt(excess / ((1.0 + n_tot) * n))
    refl = np.zeros(m - 1)
    trans_prod = 1.0  # product of (1 - r_k^2) over earlier splitters
    for j in range(m - 1):
        rj = (math.sqrt(1.0 + n_tot) - math.sqrt(excess * profile.noises[j])) / (
            math.sqrt(denom_sq) * math.sqrt(trans_prod)
        )
        if rj < -1e-12 or rj > 1.0 + 1e-12:
            raise OffSurfaceError(f"splitter reflectance r_{j + 1} = {rj:.6g} outside [0, 1]")
        rj = min(max(rj, 0.0), 1.0)
        refl[j] = rj
        trans_prod *= 1.0 - rj * rj
    return FeedforwardCircuit(r_tap=r_tap, gains=gains, reflectances=refl)


def splitting_amplitudes(circ: FeedforwardCircuit) -> np.ndarray:
    """Amplitude fraction of the transmitted beam reaching each clone."""
    m = circ.gains.size
    d = np.zeros(m)
    trans = 1.0
    for j in range(m - 1):
        d[j] = circ.reflectances[j] * trans
        trans *= math.sqrt(1.0 - circ.reflectances[j] ** 2)
    d[m - 1] = trans
    return d


def feedforward_output_state(
    circ: FeedforwardCircuit, n_in: int, alpha: complex
) -> GaussianState:
    """Exact output Gaussian state of the feedforward scheme, including the
    classical correlations induced by the shared heterodyne outcome."""
    m = circ.gains.size
    amp_in = math.sqrt(n_in) * alpha
    t_tap = math.sqrt(1.0 - circ.r_tap**2)
    d = splitting_amplitudes(circ)
    o_mean = circ.r_tap * amp_in
    if circ.phase_convention == "conjugate":
        o_mean = np.conj(o_mean)
    amps = d * t_tap * amp_in + circ.gains * o_mean
    mean = np.concatenate([np.sqrt(2) * amps.real, np.sqrt(2) * amps.imag])
    # each quadrature: optical vacuum (unit cov) + shared displacement noise
    block = np.eye(m) + 2.0 * np.outer(circ.gains, circ.gains)
    z = np.zeros_like(block)
    return GaussianState(m, mean, np.block([[block, z], [z, block]]))


def scheme_equivalence_check(
    profile: NoiseProfile, alpha: complex = 0.8 - 0.3j, tol: float = 1e-9
) -> dict:
    """Build both circuits and compare their output Gaussian states.

    Returns a report with the element-wise mean and covariance discrepancies
    and a pass flag at the given tolerance.
    """
    _require_on_surface(profile)
    amp = build_interferometer(profile)
    ff = feedforward_params(profile)
    st_amp = amplifier_output_state(amp, profile, alpha)
    st_ff = feedforward_output_state(ff, profile.n_in, alpha)
    mean_diff = float(np.max(np.abs(st_amp.mean - st_ff.mean)))
    cov_diff = float(np.max(np.abs(st_amp.cov - st_ff.cov)))
    disc = max(mean_diff, cov_diff)
    return {
        "mean_discrepancy": mean_diff,
        "cov_discrepancy": cov_diff,
        "discrepancy": disc,
        "passed": disc < tol,
    }
