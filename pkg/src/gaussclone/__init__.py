"""Optimal N-to-M asymmetric Gaussian cloning of coherent states.

Design of optimal noise profiles, synthesis of the amplifier and
feedforward realizations, shot-level Monte Carlo simulation, and numerical
verification of the SDP dual certificate of optimality.
"""

from .core import (
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
from .design import (
    CostWeights,
    EstimationTradeoffPoint,
    InfeasibleDesignError,
    NoiseProfile,
    design_from_weights,
    estimation_tradeoff,
    last_noise_roots,
    reduce_perfect_clone,
    residual,
    solve_last_noise,
    symmetric_profile,
)
from .circuits import (
    AmplifierCircuit,
    FeedforwardCircuit,
    OffSurfaceError,
    a_opt_matrix,
    amplifier_output_state,
    build_interferometer,
    channel_from_amplifier,
    clone_output_cov,
    feedforward_output_state,
    feedforward_params,
    g_opt_matrix,
    gain_and_transmittance,
    k_matrix,
    mean_map_matrix,
    noise_gram_matrix,
    scheme_equivalence_check,
)
from .certificate import (
    CertifiedProblem,
    DualCertificate,
    build_certificate,
    build_problem,
    random_feasible_cost_scan,
    verify_certificate,
    weights_from_profile,
)
from .simulate import SimConfig, SimResult, calibrate_phase_convention, run

__version__ = "0.1.0"
