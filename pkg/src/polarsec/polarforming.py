"""Phase-shift optimization for a fixed beamformer.

Pipeline: lift the per-antenna phase pairs to a unit-modulus vector of length
2N, pose the fractional SNR-ratio objective as a rank-relaxed semidefinite
program, make it linear with the Charnes-Cooper substitution, solve it with
the interior-point engine, and recover a feasible phase-shift vector by
Gaussian randomization over the relaxed solution's factorization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    PhaseShiftVector,
    _resolve_generator,
    effective_channel,
    phase_shift_vector,
)
from .linalg import ContractViolation, herm_eig
from .sdp import SdpSolverError, make_sdp_problem, sdp_solve

TWO_PI = 2.0 * np.pi

DEFAULT_RANDOMIZATION_COUNT = 200


class DegenerateSolution(SdpSolverError):
    """The recovered normalization variable collapsed to zero."""


@dataclass(frozen=True)
class LiftedProblem:
    """Quadratic forms of the lifted unit-modulus problem.

    b_user/b_eve stack the per-antenna 2-vectors Lambda_n^H g into 2N x N
    block-diagonal matrices; d_user/d_eve are the (1/(2 sigma^2)) B w w^H B^H
    forms whose ratio reproduces the SNR ratio at any lifted phase vector.
    """

    d_user: np.ndarray
    d_eve: np.ndarray
    b_user: np.ndarray
    b_eve: np.ndarray

    @property
    def n(self) -> int:
        return self.b_user.shape[1]


@dataclass(frozen=True)
class RelaxedSolution:
    """Rank-relaxed optimum: unit-diagonal PSD matrix and its objective value."""

    f: np.ndarray
    mu: float
    relaxed_objective: float


@dataclass(frozen=True)
class PolarformingResult:
    """Best feasible phase-shift vector found plus the relaxation upper bound.

    base_phases holds the winning candidate's per-antenna reference phases.
    They do not change the antenna polarization (only the phase differences
    do), but the scored objective counts them as per-antenna beamformer phase
    rotations, so the caller applies exp(-j*base_phases) to its beamformer to
    realize achieved_objective exactly.
    """

    psv: PhaseShiftVector
    achieved_objective: float
    upper_bound: float
    base_phases: np.ndarray


def lift_psv(psv: PhaseShiftVector) -> np.ndarray:
    """Unit-modulus 2N-vector whose odd/even phase differences equal the PSV."""
    phases = np.zeros(2 * len(psv))
    phases[1::2] = psv.thetas
    return np.exp(1j * phases)


def recover_psv(phases: np.ndarray) -> PhaseShiftVector:
    """Collapse lifted phases to per-antenna phase differences in [0, 2*pi)."""
    return phase_shift_vector(np.mod(phases[1::2] - phases[0::2], TWO_PI))


def fractional_objective(lp: LiftedProblem, lifted: np.ndarray) -> float:
    """SNR-ratio objective (quad_user + 1) / (quad_eve + 1) at a lifted vector."""
    num = float(np.real(lifted.conj() @ lp.d_user @ lifted)) + 1.0
    den = float(np.real(lifted.conj() @ lp.d_eve @ lifted)) + 1.0
    return num / den


def objective_at_psv(lp: LiftedProblem, psv: PhaseShiftVector) -> float:
    return fractional_objective(lp, lift_psv(psv))


def _block_stack(links, g) -> np.ndarray:
    n = len(links)
    out = np.zeros((2 * n, n), dtype=np.complex128)
    for k, link in enumerate(links):
        out[2 * k : 2 * k + 2, k] = link.lam.conj().T @ g.g
    return out


def build_lifted(channels, w, sigma2: float, sigma2_eve: float | None = None) -> LiftedProblem:
    """Assemble the lifted quadratic forms for a channel set and beamformer.

    Uses the first eavesdropper antenna (the phase optimization always targets
    a single-antenna eavesdropper).  A fixed random probe verifies that the
    lifted channel reproduces the per-antenna channel model before the forms
    are returned.
    """
    if sigma2 <= 0.0:
        raise ContractViolation("sigma2 must be positive")
    if sigma2_eve is None:
        sigma2_eve = sigma2
    w_vec = np.asarray(getattr(w, "w", w), dtype=np.complex128)
    n = channels.n
    if w_vec.shape != (n,):
        raise ContractViolation(
            f"beamformer length {w_vec.shape} does not match {n} antennas"
        )
    b_user = _block_stack(channels.user_links, channels.g_user)
    b_eve = _block_stack(channels.eve_column(0), channels.g_eve)
    bu_w = b_user @ w_vec
    be_w = b_eve @ w_vec
    d_user = np.outer(bu_w, bu_w.conj()) / (2.0 * sigma2)
    d_eve = np.outer(be_w, be_w.conj()) / (2.0 * sigma2_eve)
    lp = LiftedProblem(d_user, d_eve, b_user, b_eve)
    _check_lifting(lp, channels)
    return lp


def _check_lifting(lp: LiftedProblem, channels) -> None:
    # identity check: lifted channel == probe-rotated per-antenna channel
    probe = np.random.default_rng(0x11F7).uniform(0.0, TWO_PI, 2 * lp.n)
    lifted = np.exp(1j * probe)
    base = np.exp(1j * probe[0::2])
    thetas = phase_shift_vector(probe[1::2] - probe[0::2])
    for b_mat, links, g in (
        (lp.b_user, channels.user_links, channels.g_user),
        (lp.b_eve, channels.eve_column(0), channels.g_eve),
    ):
        via_lift = b_mat.conj().T @ lifted / np.sqrt(2.0)
        direct = base * effective_channel(links, g, thetas)
        if np.max(np.abs(via_lift - direct)) > 1e-12 * max(1.0, np.max(np.abs(direct))):
            raise ContractViolation("lifted channel identity violated")


def charnes_cooper_sdp(lp: LiftedProblem) -> RelaxedSolution:
    """Solve the rank-relaxed fractional program as one linear SDP.

    The Charnes-Cooper substitution turns the ratio into a linear objective
    over a PSD variable of order 2N+1 holding the scaled matrix and the
    normalization scalar on its diagonal; the unit-diagonal matrix is
    recovered by dividing out the scalar.
    """
    n2 = 2 * lp.n
    dim = n2 + 1
    objective = np.zeros((dim, dim), dtype=np.complex128)
    objective[:n2, :n2] = lp.d_user
    objective[n2, n2] = 1.0

    norm_mat = np.zeros((dim, dim), dtype=np.complex128)
    norm_mat[:n2, :n2] = lp.d_eve
    norm_mat[n2, n2] = 1.0
    constraints = [(norm_mat, 1.0)]
    for l in range(n2):
        pin = np.zeros((dim, dim), dtype=np.complex128)
        pin[l, l] = 1.0
        pin[n2, n2] = -1.0
        constraints.append((pin, 0.0))

    solution = sdp_solve(make_sdp_problem(objective, constraints))
    mu = float(solution.x[n2, n2].real)
    if mu <= 1e-12:
        raise DegenerateSolution(
            "normalization variable vanished", solution.iterations,
            solution.duality_gap, solution.feas_residual,
        )
    f = solution.x[:n2, :n2] / mu
    f = 0.5 * (f + f.conj().T)
    num = float(np.real(np.sum(lp.d_user.conj() * f))) + 1.0
    den = float(np.real(np.sum(lp.d_eve.conj() * f))) + 1.0
    return RelaxedSolution(f=f, mu=mu, relaxed_objective=num / den)


def gaussian_randomization(
    rs: RelaxedSolution,
    lp: LiftedProblem,
    incumbent: PhaseShiftVector,
    count: int = DEFAULT_RANDOMIZATION_COUNT,
    rng=None,
) -> PolarformingResult:
    """Recover a feasible phase-shift vector from the relaxed solution.

    Candidates are the principal eigenvector of the relaxed matrix, ``count``
    Gaussian samples drawn through its eigendecomposition factor, and the
    incumbent itself (which guarantees the alternating loop never regresses).
    Every candidate is projected to unit modulus entrywise and scored with the
    exact fractional objective; the winner is split into the phase-shift
    vector (entrywise differences) and the per-antenna base phases that the
    caller folds into its beamformer.
    """
    count = int(count)
    if count < 1:
        raise ContractViolation("randomization count must be at least 1")
    gen = _resolve_generator(rng) if rng is not None else np.random.default_rng(0)
    eig = herm_eig(rs.f)
    factor = eig.eigenvectors * np.sqrt(np.clip(eig.eigenvalues, 0.0, None))
    n2 = rs.f.shape[0]
    draws = (
        gen.standard_normal((n2, count)) + 1j * gen.standard_normal((n2, count))
    ) / np.sqrt(2.0)
    candidates = np.concatenate(
        [
            eig.eigenvectors[:, -1:],
            factor @ draws,
            lift_psv(incumbent)[:, None],
        ],
        axis=1,
    )
    phases = np.angle(candidates)

    # score the unit-modulus projections with the exact fractional objective
    lifted = np.exp(1j * phases)
    num = np.real(np.sum(lifted.conj() * (lp.d_user @ lifted), axis=0)) + 1.0
    den = np.real(np.sum(lifted.conj() * (lp.d_eve @ lifted), axis=0)) + 1.0
    scores = num / den
    best = int(np.argmax(scores))
    winner = phases[:, best]
    return PolarformingResult(
        psv=phase_shift_vector(np.mod(winner[1::2] - winner[0::2], TWO_PI)),
        achieved_objective=float(scores[best]),
        upper_bound=rs.relaxed_objective,
        base_phases=np.mod(winner[0::2], TWO_PI),
    )
