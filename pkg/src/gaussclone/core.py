"""Gaussian states, Gaussian CP maps, and clone figures of merit.

Conventions used throughout the package:

* quadrature ordering is (x_1, ..., x_m, p_1, ..., p_m) with [x, p] = i;
* the covariance matrix is the symmetrized second moment
  gamma_jk = <dr_j dr_k + dr_k dr_j>, so the vacuum covariance is the
  identity (one shot-noise unit = 1/2 variance per quadrature);
* a coherent state |alpha> has mean (sqrt(2) Re alpha, sqrt(2) Im alpha)
  per mode, so that <a> = alpha under a = (x + i p) / sqrt(2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10
PSD_TOL = 1e-9


def symplectic_form(num_modes: int) -> np.ndarray:
    """Commutator matrix J = [[0, I], [-I, 0]] in xxpp ordering."""
    eye = np.eye(num_modes)
    zero = np.zeros((num_modes, num_modes))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class GaussianState:
    """Mean quadrature vector and covariance matrix of a Gaussian state."""

    num_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        d = 2 * self.num_modes
        if self.num_modes < 1:
            raise ValueError("need at least one mode")
        if mean.shape != (d,):
            raise ValueError(f"mean must have shape ({d},), got {mean.shape}")
        if cov.shape != (d, d):
            raise ValueError(f"cov must have shape ({d}, {d}), got {cov.shape}")
        if not np.allclose(cov, cov.T, atol=DEFAULT_TOL):
            raise ValueError("covariance matrix must be symmetric")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        mean.setflags(write=False)
        cov.setflags(write=False)

    def physicality_min_eigenvalue(self) -> float:
        """Min eigenvalue of cov + iJ; >= -tol for a physical state."""
        j = symplectic_form(self.num_modes)
        return float(np.linalg.eigvalsh(self.cov + 1j * j)[0])

    def is_physical(self, tol: float = PSD_TOL) -> bool:
        return self.physicality_min_eigenvalue() >= -tol


def vacuum_state(num_modes: int) -> GaussianState:
    return GaussianState(num_modes, np.zeros(2 * num_modes), np.eye(2 * num_modes))


def coherent_state(alphas) -> GaussianState:
    """Product coherent state with the given complex amplitudes (one per mode)."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    m = alphas.size
    mean = np.concatenate([np.sqrt(2) * alphas.real, np.sqrt(2) * alphas.imag])
    return GaussianState(m, mean, np.eye(2 * m))


def mode_amplitudes(state: GaussianState) -> np.ndarray:
    """Complex amplitudes <a_j> = (<x_j> + i <p_j>) / sqrt(2)."""
    m = state.num_modes
    return (state.mean[:m] + 1j * state.mean[m:]) / np.sqrt(2)


@dataclass(frozen=True)
class GaussianChannel:
    """Gaussian CP map (S, G): cov -> S cov S^T + G, mean -> S mean."""

    m_in: int
    m_out: int
    S: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        S = np.asarray(self.S, dtype=float)
        G = np.asarray(self.G, dtype=float)
        if S.shape != (2 * self.m_out, 2 * self.m_in):
            raise ValueError(
                f"S must have shape ({2 * self.m_out}, {2 * self.m_in}), got {S.shape}"
            )
        if G.shape != (2 * self.m_out, 2 * self.m_out):
            raise ValueError(f"G must have shape {(2 * self.m_out,) * 2}, got {G.shape}")
        if not np.allclose(G, G.T, atol=DEFAULT_TOL):
            raise ValueError("G must be symmetric")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "G", G)
        S.setflags(write=False)
        G.setflags(write=False)


def identity_channel(num_modes: int) -> GaussianChannel:
    d = 2 * num_modes
    return GaussianChannel(num_modes, num_modes, np.eye(d), np.zeros((d, d)))


def apply_channel(ch: GaussianChannel, st: GaussianState) -> GaussianState:
    """Propagate a Gaussian state through a Gaussian CP map."""
    if st.num_modes != ch.m_in:
        raise ValueError(f"channel expects {ch.m_in} input modes, state has {st.num_modes}")
    return GaussianState(ch.m_out, ch.S @ st.mean, ch.S @ st.cov @ ch.S.T + ch.G)


def compose_channels(second: GaussianChannel, first: GaussianChannel) -> GaussianChannel:
    """Channel equivalent to applying `first` then `second`."""
    if first.m_out != second.m_in:
        raise ValueError("mode-count mismatch in channel composition")
    return GaussianChannel(
        first.m_in,
        second.m_out,
        second.S @ first.S,
        second.S @ first.G @ second.S.T + second.G,
    )


def cp_min_eigenvalue(ch: GaussianChannel) -> float:
    """Min eigenvalue of G + iK with K = J_out - S J_in S^T.

    The channel is completely positive iff the returned value is >= -tol.
    """
    k = symplectic_form(ch.m_out) - ch.S @ symplectic_form(ch.m_in) @ ch.S.T
    return float(np.linalg.eigvalsh(ch.G + 1j * k)[0])


@dataclass(frozen=True)
class CloneMarginal:
    """Single-mode marginal of a clone: amplitude, thermal noise, fidelity."""

    coherent_amplitude: complex
    thermal_noise: float
    fidelity: float


def clone_marginal(st: GaussianState, j: int, tol: float = 1e-8) -> CloneMarginal:
    """Extract clone j's amplitude, thermal noise n_j and fidelity 1/(1+n_j).

    Requires the mode's 2x2 covariance block to be isotropic (equal x and p
    variances, no cross term); anything else signals a non-covariant circuit.
    """
    m = st.num_modes
    if not 0 <= j < m:
        raise IndexError(f"mode index {j} out of range for {m} modes")
    vx = st.cov[j, j]
    vp = st.cov[m + j, m + j]
    cxp = st.cov[j, m + j]
    scale = max(1.0, abs(vx), abs(vp))
    if abs(vx - vp) > tol * scale or abs(cxp) > tol * scale:
        raise ValueError(
            f"mode {j} covariance block is not isotropic: "
            f"var_x={vx:.6g}, var_p={vp:.6g}, cross={cxp:.6g}"
        )
    n = (vx - 1.0) / 2.0
    if n < -tol:
        raise ValueError(f"mode {j} has sub-vacuum variance {vx:.6g}")
    n = max(n, 0.0)
    alpha = (st.mean[j] + 1j * st.mean[m + j]) / np.sqrt(2)
    return CloneMarginal(complex(alpha), float(n), 1.0 / (1.0 + n))


def husimi_q(marginal: CloneMarginal, beta: complex) -> float:
    """Husimi Q-function of a displaced thermal clone, evaluated at beta."""
    n = marginal.thermal_noise
    if n < 0:
        raise ValueError("thermal noise must be non-negative")
    d2 = abs(marginal.coherent_amplitude - beta) ** 2
    return float(np.exp(-d2 / (n + 1.0)) / (np.pi * (n + 1.0)))
