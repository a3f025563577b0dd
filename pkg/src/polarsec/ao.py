"""Alternating optimization of transmit beamforming and polarforming.

Each iteration first recomputes the secrecy-optimal (or MRT) beamformer for
the current phase-shift vector and then re-optimizes the phase shifts for the
new beamformer through the relaxation/randomization pipeline; the loop ends
when the secrecy-rate gain drops below the configured tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamforming import Beamformer, mrt_beamformer, optimal_beamformer, quadratic_forms
from .channel import (
    PURPOSE_RANDOMIZATION,
    ChannelSet,
    PhaseShiftVector,
    RngStream,
    circular_psv,
    effective_channel,
    zero_psv,
)
from .metrics import secrecy_rate
from .polarforming import build_lifted, charnes_cooper_sdp, gaussian_randomization

MAX_ITERS = 50


@dataclass(frozen=True)
class AoIteration:
    index: int
    rate_after_beamforming: float
    rate_after_polarforming: float
    upper_bound_rate: float


@dataclass(frozen=True)
class AoTrace:
    """Per-iteration rates of one alternating-optimization run."""

    iterations: tuple
    converged: bool
    final_psv: PhaseShiftVector
    final_w: Beamformer

    @property
    def final_rate(self) -> float:
        return self.iterations[-1].rate_after_polarforming

    @property
    def final_upper_bound_rate(self) -> float:
        return self.iterations[-1].upper_bound_rate


def _channels_at(channels: ChannelSet, psv: PhaseShiftVector):
    h_user = effective_channel(channels.user_links, channels.g_user, psv)
    h_eve = effective_channel(channels.eve_column(0), channels.g_eve, psv)
    return h_user, h_eve


def _run_loop(channels: ChannelSet, cfg, rng, beamform) -> AoTrace:
    sigma2 = cfg.sigma2
    psv = zero_psv(channels.n)
    rand_gen = rng.substream(PURPOSE_RANDOMIZATION).generator() if isinstance(
        rng, RngStream
    ) else rng
    rows = []
    prev_rate = 0.0
    converged = False
    w = None
    for k in range(1, MAX_ITERS + 1):
        h_user, h_eve = _channels_at(channels, psv)
        w = beamform(h_user, h_eve)
        rate_beam = secrecy_rate(h_user, h_eve, w, sigma2).secrecy_rate

        lifted = build_lifted(channels, w, sigma2)
        relaxed = charnes_cooper_sdp(lifted)
        result = gaussian_randomization(
            relaxed, lifted, psv, cfg.rand_count, rand_gen
        )
        psv = result.psv
        # the winner's base phases act as per-antenna beamformer rotations;
        # folding them in realizes the scored objective exactly
        w = Beamformer(w.w * np.exp(-1j * result.base_phases), w.p_max)
        h_user, h_eve = _channels_at(channels, psv)
        rate_polar = secrecy_rate(h_user, h_eve, w, sigma2).secrecy_rate
        upper_rate = max(float(np.log2(result.upper_bound)), 0.0)
        rows.append(AoIteration(k, rate_beam, rate_polar, upper_rate))
        if rate_polar - prev_rate < cfg.epsilon:
            converged = True
            break
        prev_rate = rate_polar
    return AoTrace(tuple(rows), converged, psv, w)


def solve_instance(channels: ChannelSet, cfg, rng) -> AoTrace:
    """Joint beamforming/polarforming optimization (the proposed scheme).

    Starts from the all-zero phase-shift vector and alternates the closed-form
    beamformer with the relaxation-based phase update until the secrecy-rate
    gain falls below cfg.epsilon or the 50-iteration cap.  The per-iteration
    upper_bound_rate is the (clamped) log of the relaxed objective for that
    iteration's beamformer.
    """
    sigma2 = cfg.sigma2

    def beamform(h_user, h_eve):
        return optimal_beamformer(quadratic_forms(h_user, h_eve, sigma2), cfg.p_max)

    return _run_loop(channels, cfg, rng, beamform)


def solve_instance_mrt(channels: ChannelSet, cfg, rng) -> AoTrace:
    """Same loop with the beamforming step replaced by maximum ratio transmission."""

    def beamform(h_user, h_eve):
        return mrt_beamformer(h_user, cfg.p_max)

    return _run_loop(channels, cfg, rng, beamform)


def solve_instance_fpa(channels: ChannelSet, cfg) -> AoTrace:
    """Fixed circular polarization: a single beamforming solve, no phase update."""
    sigma2 = cfg.sigma2
    psv = circular_psv(channels.n)
    h_user, h_eve = _channels_at(channels, psv)
    w = optimal_beamformer(quadratic_forms(h_user, h_eve, sigma2), cfg.p_max)
    rate = secrecy_rate(h_user, h_eve, w, sigma2).secrecy_rate
    rows = (AoIteration(1, rate, rate, rate),)
    return AoTrace(rows, True, psv, w)
