"""Shot-level Monte Carlo of the feedforward cloning scheme.

Each shot draws a heterodyne outcome for the tapped beam (complex Gaussian
with variance 1/2 per real component around the reflected amplitude), splits
the transmitted coherent beam over the output array, and displaces every
clone by its electronic gain times the shared outcome.  Sample statistics
converge to clone means alpha and covariance I + 2F.

Shots are partitioned deterministically into shards with independent
counter-derived substreams; results depend on (seed, shots, shards) only,
never on execution order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .circuits import (
    FeedforwardCircuit,
    feedforward_output_state,
    feedforward_params,
    splitting_amplitudes,
)
from .core import coherent_state
from .design import NoiseProfile, residual


@dataclass(frozen=True)
class SimConfig:
    profile: NoiseProfile
    alpha: complex
    shots: int
    seed: int
    shards: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("need at least one shot")
        if self.shards < 1:
            raise ValueError("need at least one shard")
        if abs(residual(self.profile)) > 1e-8:
            raise ValueError("profile must lie on the optimal surface")


@dataclass(frozen=True)
class SimResult:
    clone_means: np.ndarray  # complex amplitudes, length M
    clone_cov: np.ndarray  # 2M x 2M, vacuum-identity convention
    mean_se: np.ndarray  # per-quadrature standard error of the means
    cov_se: np.ndarray  # per-entry standard error of clone_cov
    shots_used: int


def calibrate_phase_convention(profile: NoiseProfile) -> str:
    """Select the displacement phase convention that reproduces clone means
    equal to the input amplitude, by exact mean propagation.

    The tie at zero electronic gain is broken toward the plain-outcome
    convention.
    """
    circ = feedforward_params(profile)
    alpha = 1.0 + 0.5j
    target = coherent_state([alpha] * profile.m_out).mean
    passing = []
    for conv in ("outcome", "conjugate"):
        trial = FeedforwardCircuit(
            r_tap=circ.r_tap,
            gains=circ.gains,
            reflectances=circ.reflectances,
            phase_convention=conv,
        )
        st = feedforward_output_state(trial, profile.n_in, alpha)
        if np.max(np.abs(st.mean - target)) < 1e-9:
            passing.append(conv)
    if not passing:
        raise RuntimeError("no displacement convention reproduces the input amplitude")
    return passing[0]


def _shard_sizes(shots: int, shards: int) -> list[int]:
    base, extra = divmod(shots, shards)
    return [base + (1 if i < extra else 0) for i in range(shards)]


def run(
    config: SimConfig,
    circuit: FeedforwardCircuit | None = None,
    samples_path: str | None = None,
) -> SimResult:
    """Simulate the feedforward scheme shot by shot and estimate clone
    statistics.

    If `samples_path` is given, every per-shot sample is streamed to CSV with
    columns (shot, clone, x, p, o_re, o_im).
    """
    profile = config.profile
    m = profile.m_out
    if circuit is None:
        circuit = feedforward_params(profile)
        circuit = FeedforwardCircuit(
            r_tap=circuit.r_tap,
            gains=circuit.gains,
            reflectances=circuit.reflectances,
            phase_convention=calibrate_phase_convention(profile),
        )
    conj = circuit.phase_convention == "conjugate"
    amp_in = math.sqrt(profile.n_in) * config.alpha
    t_tap = math.sqrt(1.0 - circuit.r_tap**2)
    d = splitting_amplitudes(circuit)
    gains = circuit.gains
    o_mean = circuit.r_tap * amp_in
    o_mean_used = np.conj(o_mean) if conj else o_mean
    # deterministic part of the clone means; the noise part is accumulated
    # separately so the sample covariance is independent of alpha exactly
    det_amp = d * t_tap * amp_in + gains * o_mean_used
    det_x = np.sqrt(2) * det_amp.real
    det_p = np.sqrt(2) * det_amp.imag

    writer = None
    csv_file = None
    if samples_path is not None:
        csv_file = open(samples_path, "w", newline="")
        writer = csv.writer(csv_file)
        writer.writerow(["shot", "clone", "x", "p", "o_re", "o_im"])

    count = 0
    total = np.zeros(2 * m)
    scatter = np.zeros((2 * m, 2 * m))
    shot_offset = 0
    try:
        for shard, size in enumerate(_shard_sizes(config.shots, config.shards)):
            if size == 0:
                continue
            rng = np.random.default_rng([config.seed, shard])
            z = rng.standard_normal((size, 2 * m + 2))
            # heterodyne outcome noise, quadrature units: sd 1 per quadrature
            o_x = z[:, 0]
            o_p = z[:, 1]
            o_p_used = -o_p if conj else o_p
            vac = z[:, 2:] * math.sqrt(0.5)
            x = vac[:, :m] + np.outer(o_x, gains)
            p = vac[:, m:] + np.outer(o_p_used, gains)
            quads = np.hstack([x, p])
            count += size
            total += quads.sum(axis=0)
            scatter += quads.T @ quads
            if writer is not None:
                o_re = o_x / np.sqrt(2) + o_mean.real
                o_im = o_p / np.sqrt(2) + o_mean.imag
                x = x + det_x
                p = p + det_p
                for i in range(size):
                    for j in range(m):
                        writer.writerow(
                            [
                                shot_offset + i,
                                j,
                                f"{x[i, j]:.17g}",
                                f"{p[i, j]:.17g}",
                                f"{o_re[i]:.17g}",
                                f"{o_im[i]:.17g}",
                            ]
                        )
            shot_offset += size
    finally:
        if csv_file is not None:
            csv_file.close()

    noise_mean = total / count
    if count > 1:
        m2 = scatter - count * np.outer(noise_mean, noise_mean)
        raw_cov = m2 / (count - 1)
    else:
        raw_cov = np.zeros((2 * m, 2 * m))
    clone_cov = 2.0 * raw_cov
    mean = noise_mean + np.concatenate([det_x, det_p])
    clone_means = (mean[:m] + 1j * mean[m:]) / np.sqrt(2)
    mean_se = np.sqrt(np.maximum(np.diag(raw_cov), 0.0) / count)
    denom = max(count - 1, 1)
    cov_se = np.sqrt(
        np.outer(np.diag(clone_cov), np.diag(clone_cov)) + clone_cov**2
    ) / math.sqrt(denom)
    return SimResult(
        clone_means=clone_means,
        clone_cov=clone_cov,
        mean_se=mean_se,
        cov_se=cov_se,
        shots_used=count,
    )
