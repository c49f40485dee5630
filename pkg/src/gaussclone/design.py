"""Design of optimal asymmetric Gaussian cloners.

The set of optimal N->M asymmetric Gaussian cloning machines is the surface

    (sum_k sqrt(n_k))^2 = (M - N) (sum_j n_j + 1)

in the space of per-clone thermal noises n_j.  This module solves that
constraint in its various guises: completing a partial noise assignment,
the fully symmetric point, weighted-cost optimal designs via a Lagrange
multiplier, and the infinite-copy partial-estimation limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

DESIGN_TOL = 1e-9


class InfeasibleDesignError(ValueError):
    """Requested clone fidelities are incompatible with the optimal surface."""


@dataclass(frozen=True)
class NoiseProfile:
    """A design point: input count N, output count M, per-clone noises n_j."""

    n_in: int
    m_out: int
    noises: np.ndarray

    def __post_init__(self):
        noises = np.asarray(self.noises, dtype=float)
        if self.n_in < 1:
            raise ValueError("need at least one input replica")
        if self.m_out < self.n_in:
            raise ValueError("output count M must satisfy M >= N")
        if noises.shape != (self.m_out,):
            raise ValueError(f"expected {self.m_out} noises, got shape {noises.shape}")
        if np.any(noises < 0):
            raise ValueError("thermal noises must be non-negative")
        object.__setattr__(self, "noises", noises)
        noises.setflags(write=False)

    @property
    def n_tot(self) -> float:
        return float(np.sum(self.noises))

    def fidelities(self) -> np.ndarray:
        return 1.0 / (1.0 + self.noises)

    def is_optimal(self, tol: float = DESIGN_TOL) -> bool:
        return abs(residual(self)) <= tol


@dataclass
class CostWeights:
    """Strictly positive weights x_j of the linear noise cost sum x_j n_j.

    The Lagrange multiplier of the constrained minimization is stored in
    ``lagrange`` after solving (always negative).
    """

    weights: np.ndarray
    lagrange: float | None = field(default=None)

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        if weights.ndim != 1 or weights.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if np.any(weights <= 0):
            raise ValueError("all cost weights must be strictly positive")
        self.weights = weights


@dataclass(frozen=True)
class EstimationTradeoffPoint:
    """Quantum-copy noise/fidelity vs classical-estimate noise/fidelity."""

    n_f: float
    n_g: float
    fidelity_quantum: float
    fidelity_estimate: float


def residual(profile: NoiseProfile) -> float:
    """(sum sqrt(n_k))^2 - (M - N)(sum n_j + 1); zero on the optimal surface."""
    s = float(np.sum(np.sqrt(profile.noises)))
    return s * s - (profile.m_out - profile.n_in) * (profile.n_tot + 1.0)


def last_noise_roots(partial, n_in: int, m_out: int) -> list[float]:
    """All non-negative values of n_M completing `partial` to the optimal surface.

    Sorted ascending; the smallest root gives the maximum fidelity of the
    last clone and is the one marked optimal.
    """
    partial = np.asarray(partial, dtype=float)
    if partial.shape != (m_out - 1,):
        raise ValueError(f"expected {m_out - 1} noises, got shape {partial.shape}")
    if np.any(partial < 0):
        raise ValueError("thermal noises must be non-negative")
    if m_out <= n_in:
        raise ValueError("completion requires M > N")
    excess = m_out - n_in
    s = float(np.sum(np.sqrt(partial)))
    t = float(np.sum(partial))
    # (excess - 1) u^2 - 2 s u + [excess (t + 1) - s^2] = 0 with u = sqrt(n_M)
    a = excess - 1
    c = excess * (t + 1.0) - s * s
    if a == 0:
        if s <= 0:
            raise InfeasibleDesignError(
                "M - N = 1 requires at least one noisy clone among the first M - 1"
            )
        u = c / (2.0 * s)
        roots = [u]
    else:
        disc = s * s - a * c
        # a double root has an exactly zero discriminant; rounding noise in
        # s^2 - ac would otherwise blow up to sqrt-size error in the root
        if abs(disc) < 1e-12 * max(1.0, s * s, abs(a * c)):
            disc = 0.0
        if disc < 0:
            raise InfeasibleDesignError(
                f"requested fidelities are too high (discriminant {4 * disc:.6g} < 0)"
            )
        sq = math.sqrt(disc)
        roots = [(s - sq) / a, (s + sq) / a]
    roots = sorted({u * u for u in roots if u >= -1e-14})
    if not roots:
        raise InfeasibleDesignError("no non-negative completion exists")
    return [max(0.0, r) for r in roots]


def solve_last_noise(partial, n_in: int, m_out: int) -> float:
    """Smallest n_M completing the partial noise assignment (max fidelity)."""
    return last_noise_roots(partial, n_in, m_out)[0]


def symmetric_profile(n_in: int, m_out: int) -> NoiseProfile:
    """All clones equal: n_j = (M - N) / (M N)."""
    if n_in < 1 or m_out < n_in:
        raise ValueError("need M >= N >= 1")
    n = (m_out - n_in) / (m_out * n_in)
    return NoiseProfile(n_in, m_out, np.full(m_out, n))


def design_from_weights(w: CostWeights, n_in: int, m_out: int) -> NoiseProfile:
    """Minimize sum x_j n_j over the optimal surface.

    The extremal equations give sqrt(n_j) = lam * S / (lam (M-N) - x_j) with
    S = sum sqrt(n_k); S cancels from its own defining sum, leaving the
    closed scalar condition sum_j lam / (lam (M-N) - x_j) = 1 for the
    multiplier lam < 0.  The overall scale of the noises is then fixed by
    the surface constraint.
    """
    x = w.weights
    if x.shape != (m_out,):
        raise ValueError(f"expected {m_out} weights, got shape {x.shape}")
    if m_out <= n_in:
        raise ValueError("weighted design requires M > N")
    excess = m_out - n_in

    def h(lam):
        return float(np.sum(lam / (lam * excess - x))) - 1.0

    # h is strictly decreasing on (-inf, 0): h(0-) = -1, h(-inf) = N/(M-N) > 0.
    lo, hi = -1e-6, None
    for mag in np.geomspace(1e-6, 1e6, 61):
        if h(-mag) > 0:
            hi = -mag
            break
        lo = -mag
    if hi is None:
        raise RuntimeError(
            f"no bracketing multiplier found in [-1e6, -1e-6]; h(-1e6)={h(-1e6):.3g}"
        )
    lam = brentq(h, hi, lo, xtol=1e-14, rtol=8.9e-16)
    coeff = lam / (lam * excess - x)
    denom = 1.0 - excess * float(np.sum(coeff**2))
    if denom <= 0:
        raise RuntimeError("degenerate scale equation; multiplier solve failed")
    s = math.sqrt(excess / denom)
    profile = NoiseProfile(n_in, m_out, (s * coeff) ** 2)
    if abs(residual(profile)) > DESIGN_TOL:
        raise RuntimeError(f"designed profile is off-surface: residual {residual(profile):.3g}")
    w.lagrange = float(lam)
    return profile


def estimation_tradeoff(n_f: float) -> EstimationTradeoffPoint:
    """Optimal partial-estimation tradeoff (infinite-copy limit).

    n_G = (n_F + 1)^2 / (4 n_F); the fidelities then satisfy
    G = 4F(1-F) / (4F(1-F) + 1).
    """
    if n_f < 0:
        raise ValueError("quantum-copy noise must be non-negative")
    if n_f == 0:
        # Undisturbed quantum copy: infinitely noisy state estimation.
        return EstimationTradeoffPoint(0.0, math.inf, 1.0, 0.0)
    n_g = (n_f + 1.0) ** 2 / (4.0 * n_f)
    return EstimationTradeoffPoint(n_f, n_g, 1.0 / (1.0 + n_f), 1.0 / (1.0 + n_g))


def reduce_perfect_clone(profile: NoiseProfile, tol: float = DESIGN_TOL) -> NoiseProfile:
    """Strip one perfect (zero-noise) clone, giving an (N-1)->(M-1) profile.

    A perfect clone just passes one input replica through, so the surface
    residual is preserved exactly.
    """
    zeros = np.flatnonzero(profile.noises <= tol)
    if zeros.size == 0:
        raise ValueError("no zero-noise clone to remove")
    if profile.n_in < 2:
        raise ValueError("cannot reduce below one input replica")
    keep = np.delete(profile.noises, zeros[0])
    return NoiseProfile(profile.n_in - 1, profile.m_out - 1, keep)


def surface_matrix_determinant(profile: NoiseProfile) -> float:
    """det of I - H/N + F restricted to span{|f>, |h>}; equals residual/N.

    Singularity of I - H/N + F is equivalent to the profile lying on the
    optimal surface.
    """
    n = profile.n_in
    w = np.sqrt(profile.noises)
    f2 = float(w @ w)
    fh = float(np.sum(w))
    b = np.array([[1.0 + f2, fh], [-fh / n, 1.0 - profile.m_out / n]])
    return float(np.linalg.det(b))
