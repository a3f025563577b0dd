"""Polarized channel model for polarization-reconfigurable transmit antennas.

Each transmit antenna carries two orthogonal elements whose relative phase
sets the radiated polarization; the propagation to a single-antenna terminal
is a 2x2 complex gain matrix whose off-diagonal power is controlled by the
inverse cross-polarization discrimination chi.  Generation is driven by
deterministic, independently seeded RNG streams so Monte Carlo trials are
reproducible regardless of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import ContractViolation

TWO_PI = 2.0 * np.pi

# Variance of each scattering-matrix element, taken literally as 1/sqrt(2).
ELEMENT_VARIANCE = 1.0 / np.sqrt(2.0)

# Fixed purpose codes: trial t, purpose p uses stream index t*16 + p.
PURPOSE_USER_LINKS = 0
PURPOSE_EVE_LINKS = 1
PURPOSE_CHANNEL_ERROR = 2
PURPOSE_RANDOMIZATION = 3
PURPOSES_PER_TRIAL = 16


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream keyed by (master_seed, stream_index).

    Identical (seed, index) pairs produce identical draws in any execution
    order, so independent trials can run in parallel.
    """

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        seed = np.random.SeedSequence(
            (int(self.master_seed) & 0xFFFFFFFFFFFFFFFF, int(self.stream_index))
        )
        return np.random.default_rng(seed)

    def substream(self, offset: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_index + int(offset))


def trial_stream(master_seed: int, trial: int, purpose: int = 0) -> RngStream:
    """Stream for one (trial, purpose) pair; trials never share indices."""
    return RngStream(master_seed, trial * PURPOSES_PER_TRIAL + purpose)


def _resolve_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise ContractViolation(f"expected RngStream or numpy Generator, got {type(rng)!r}")


@dataclass(frozen=True)
class PolarformingVector:
    """Per-antenna polarization state (1/sqrt(2)) [1, e^{j theta}]^T."""

    theta: float
    value: np.ndarray


def polarforming_vector(theta: float) -> PolarformingVector:
    """Polarforming vector for one antenna; theta is wrapped to [0, 2*pi)."""
    theta = float(theta)
    if not np.isfinite(theta):
        raise ContractViolation("theta must be finite")
    theta = float(np.mod(theta, TWO_PI))
    value = np.array([1.0, np.exp(1j * theta)], dtype=np.complex128) / np.sqrt(2.0)
    return PolarformingVector(theta, value)


@dataclass(frozen=True)
class PhaseShiftVector:
    """Phases (radians, each in [0, 2*pi)) of the N antenna phase shifters."""

    thetas: np.ndarray

    def __len__(self) -> int:
        return self.thetas.shape[0]


def phase_shift_vector(thetas) -> PhaseShiftVector:
    thetas = np.asarray(thetas, dtype=np.float64)
    if thetas.ndim != 1 or thetas.shape[0] < 1:
        raise ContractViolation("phase shift vector needs at least one entry")
    if not np.all(np.isfinite(thetas)):
        raise ContractViolation("phase shifts must be finite")
    return PhaseShiftVector(np.mod(thetas, TWO_PI))


def zero_psv(n: int) -> PhaseShiftVector:
    return phase_shift_vector(np.zeros(n))


def circular_psv(n: int) -> PhaseShiftVector:
    """Fixed circular polarization: theta = pi/2 on every antenna."""
    return phase_shift_vector(np.full(n, 0.5 * np.pi))


@dataclass(frozen=True)
class TerminalPolarization:
    """Unit-norm polarization vector of a receive antenna."""

    g: np.ndarray


def terminal_polarization(g) -> TerminalPolarization:
    g = np.asarray(g, dtype=np.complex128)
    if g.shape != (2,):
        raise ContractViolation(f"polarization vector must have shape (2,), got {g.shape}")
    norm = np.linalg.norm(g)
    if not np.isfinite(norm) or norm == 0.0:
        raise ContractViolation("polarization vector must be nonzero and finite")
    return TerminalPolarization(g / norm)


def linear_polarization() -> TerminalPolarization:
    return terminal_polarization([1.0, 0.0])


@dataclass(frozen=True)
class PolarizedLink:
    """2x2 complex gain matrix of one antenna-to-terminal polarized channel."""

    lam: np.ndarray
    chi: float


def _xpd_mask(chi: float) -> np.ndarray:
    root = np.sqrt(chi)
    return np.array([[1.0, root], [root, 1.0]]) / np.sqrt(chi + 1.0)


def _draw_fading(gen: np.random.Generator, shape) -> np.ndarray:
    # CN(0, ELEMENT_VARIANCE) entries; real block drawn before imaginary block
    # so batch generation is reproducible independent of batch size.
    re = gen.standard_normal(shape)
    im = gen.standard_normal(shape)
    return np.sqrt(ELEMENT_VARIANCE / 2.0) * (re + 1j * im)


def _links_from_generator(chi: float, count: int, gen: np.random.Generator):
    fading = _draw_fading(gen, (count, 2, 2))
    mask = _xpd_mask(chi)
    return tuple(PolarizedLink(mask * fading[k], chi) for k in range(count))


def gen_polarized_link(chi: float, rng) -> PolarizedLink:
    """Draw one polarized link with inverse XPD chi.

    The 2x2 gain is the elementwise product of the XPD magnitude mask and an
    i.i.d. CN(0, 1/sqrt(2)) scattering matrix; chi = 0 gives exactly diagonal
    gains.
    """
    chi = float(chi)
    if not np.isfinite(chi) or chi < 0.0:
        raise ContractViolation("chi must be finite and nonnegative")
    return _links_from_generator(chi, 1, _resolve_generator(rng))[0]


@dataclass(frozen=True)
class ChannelSet:
    """One realization of all links: N user links and an N x M eavesdropper grid."""

    user_links: tuple
    eve_links: tuple  # eve_links[n][m]
    g_user: TerminalPolarization
    g_eve: TerminalPolarization

    @property
    def n(self) -> int:
        return len(self.user_links)

    @property
    def m(self) -> int:
        return len(self.eve_links[0])

    def eve_column(self, m: int) -> tuple:
        return tuple(row[m] for row in self.eve_links)

    def with_eve_links(self, eve_links) -> "ChannelSet":
        return replace(self, eve_links=tuple(tuple(row) for row in eve_links))


def gen_channel_set(cfg, rng: RngStream) -> ChannelSet:
    """Generate a full channel realization from a scenario's trial stream.

    cfg needs n_bs, m_eve, chi_user, chi_eve, g_user, g_eve.  rng is the
    trial's base stream; user and eavesdropper links draw from fixed
    purpose substreams so the realization is a pure function of
    (master_seed, stream_index).
    """
    n, m = int(cfg.n_bs), int(cfg.m_eve)
    if n < 1 or m < 1:
        raise ContractViolation("n_bs and m_eve must be at least 1")
    user_gen = rng.substream(PURPOSE_USER_LINKS).generator()
    eve_gen = rng.substream(PURPOSE_EVE_LINKS).generator()
    user_links = _links_from_generator(float(cfg.chi_user), n, user_gen)
    flat = _links_from_generator(float(cfg.chi_eve), n * m, eve_gen)
    eve_links = tuple(tuple(flat[i * m + j] for j in range(m)) for i in range(n))
    return ChannelSet(
        user_links=user_links,
        eve_links=eve_links,
        g_user=terminal_polarization(cfg.g_user),
        g_eve=terminal_polarization(cfg.g_eve),
    )


def effective_channel(links, g: TerminalPolarization, psv: PhaseShiftVector) -> np.ndarray:
    """Effective N-vector channel: entry n is g^H Lambda_n f(theta_n)."""
    n = len(links)
    if len(psv) != n:
        raise ContractViolation(
            f"dimension mismatch: {n} links vs {len(psv)} phase shifts"
        )
    lams = np.stack([link.lam for link in links])
    f = np.empty((n, 2), dtype=np.complex128)
    f[:, 0] = 1.0
    f[:, 1] = np.exp(1j * psv.thetas)
    f /= np.sqrt(2.0)
    return np.einsum("i,nij,nj->n", g.g.conj(), lams, f)


def perturb_eve_links(links, xi: float, rng):
    """Apply the multiplicative estimation-error model to a link grid.

    Each entry of the estimate is the true gain minus |gain| times a
    CN(0, xi) draw, so the normalized error has variance xi.  Zero-magnitude
    entries are left untouched (the normalized error is undefined there).
    Accepts a flat sequence of links or an N x M grid and returns the same
    shape.
    """
    xi = float(xi)
    if not np.isfinite(xi) or xi < 0.0:
        raise ContractViolation("xi must be finite and nonnegative")
    gen = _resolve_generator(rng)
    nested = isinstance(links[0], (tuple, list))
    rows = links if nested else [links]
    flat = [link for row in rows for link in row]
    lams = np.stack([link.lam for link in flat])
    noise = _draw_error(gen, lams.shape, xi)
    perturbed = lams - np.abs(lams) * noise
    out_flat = [
        replace(link, lam=perturbed[k]) for k, link in enumerate(flat)
    ]
    if not nested:
        return tuple(out_flat)
    m = len(rows[0])
    return tuple(
        tuple(out_flat[i * m + j] for j in range(m)) for i in range(len(rows))
    )


def _draw_error(gen: np.random.Generator, shape, xi: float) -> np.ndarray:
    re = gen.standard_normal(shape)
    im = gen.standard_normal(shape)
    return np.sqrt(xi / 2.0) * (re + 1j * im)
