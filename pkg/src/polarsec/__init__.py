"""Secrecy-rate maximization with polarization-reconfigurable transmit antennas.

A numpy/scipy library implementing joint transmit beamforming and
polarforming against an eavesdropper, together with the Monte Carlo
experiment harness reproducing the reference simulation studies.
"""

from .ao import AoIteration, AoTrace, solve_instance, solve_instance_fpa, solve_instance_mrt
from .beamforming import (
    Beamformer,
    QuadraticFormPair,
    mrt_beamformer,
    optimal_beamformer,
    quadratic_forms,
    quadratic_forms_mrc,
)
from .channel import (
    ChannelSet,
    PhaseShiftVector,
    PolarformingVector,
    PolarizedLink,
    RngStream,
    TerminalPolarization,
    circular_psv,
    effective_channel,
    gen_channel_set,
    gen_polarized_link,
    linear_polarization,
    perturb_eve_links,
    phase_shift_vector,
    polarforming_vector,
    terminal_polarization,
    trial_stream,
    zero_psv,
)
from .experiments import (
    ConfigError,
    ScenarioConfig,
    SweepResult,
    SweepRow,
    apply_overrides,
    read_config,
    run_antenna_sweep,
    run_csi_error_sweep,
    run_multi_eve_sweep,
    run_snr_sweep,
)
from .linalg import ContractViolation, HermEigen, herm_eig, max_gen_eigvec, solve_hpd
from .metrics import RatePair, cross_correlation, secrecy_rate, secrecy_rate_mrc
from .polarforming import (
    LiftedProblem,
    PolarformingResult,
    RelaxedSolution,
    build_lifted,
    charnes_cooper_sdp,
    gaussian_randomization,
    lift_psv,
    objective_at_psv,
)
from .sdp import (
    SdpInfeasible,
    SdpNonConvergence,
    SdpProblem,
    SdpSolution,
    SdpSolverError,
    make_sdp_problem,
    sdp_solve,
)

__version__ = "0.1.0"
