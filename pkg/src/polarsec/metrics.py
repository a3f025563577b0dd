"""Closed-form rate and correlation metrics for all transmission schemes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ContractViolation


@dataclass(frozen=True)
class RatePair:
    """Secrecy, eavesdropper, and user rates in bps/Hz.

    secrecy_rate is user_rate - eve_rate clamped at zero.
    """

    secrecy_rate: float
    eve_rate: float
    user_rate: float


def _weight_vector(w) -> np.ndarray:
    # accepts a Beamformer or a bare complex vector
    return np.asarray(getattr(w, "w", w), dtype=np.complex128)


def secrecy_rate(h_user, h_eve, w, sigma2: float, sigma2_eve: float | None = None) -> RatePair:
    """Achievable secrecy rate of a beamformer against a single-antenna eavesdropper.

    sigma2 is the user's noise power; the eavesdropper's defaults to the same
    value (the two-noise variant is available but unused by the scenarios).
    """
    h_user = np.asarray(h_user, dtype=np.complex128)
    h_eve = np.asarray(h_eve, dtype=np.complex128)
    w = _weight_vector(w)
    if h_user.shape != w.shape or h_eve.shape != w.shape:
        raise ContractViolation("h_user, h_eve, and w must share one dimension")
    if sigma2 <= 0.0:
        raise ContractViolation("sigma2 must be positive")
    if sigma2_eve is None:
        sigma2_eve = sigma2
    elif sigma2_eve <= 0.0:
        raise ContractViolation("sigma2_eve must be positive")
    user_snr = abs(np.vdot(h_user, w)) ** 2 / sigma2
    eve_snr = abs(np.vdot(h_eve, w)) ** 2 / sigma2_eve
    user_rate = float(np.log2(1.0 + user_snr))
    eve_rate = float(np.log2(1.0 + eve_snr))
    return RatePair(max(user_rate - eve_rate, 0.0), eve_rate, user_rate)


def secrecy_rate_mrc(h_user, h_eve_matrix, w, sigma2: float) -> RatePair:
    """Secrecy rate against an M-antenna eavesdropper using maximum ratio combining.

    The eavesdropper's channel is an N x M matrix; its received SNR is
    ||H_E^H w||^2 / sigma2.
    """
    h_user = np.asarray(h_user, dtype=np.complex128)
    h_mat = np.asarray(h_eve_matrix, dtype=np.complex128)
    w = _weight_vector(w)
    if h_mat.ndim != 2 or h_mat.shape[0] != w.shape[0] or h_user.shape != w.shape:
        raise ContractViolation("eavesdropper matrix must be N x M with matching N")
    if sigma2 <= 0.0:
        raise ContractViolation("sigma2 must be positive")
    user_snr = abs(np.vdot(h_user, w)) ** 2 / sigma2
    eve_snr = float(np.linalg.norm(h_mat.conj().T @ w) ** 2) / sigma2
    user_rate = float(np.log2(1.0 + user_snr))
    eve_rate = float(np.log2(1.0 + eve_snr))
    return RatePair(max(user_rate - eve_rate, 0.0), eve_rate, user_rate)


def cross_correlation(h_user, h_eve) -> float:
    """Normalized channel cross-correlation in [0, 1].

    For a vector eavesdropper channel this is |h_U^H h_E| / (||h_U|| ||h_E||);
    for an N x M matrix it is ||h_U^H H_E|| / (||h_U|| ||H_E||_F).
    """
    h_user = np.asarray(h_user, dtype=np.complex128)
    h_eve = np.asarray(h_eve, dtype=np.complex128)
    nu = np.linalg.norm(h_user)
    if h_eve.ndim == 1:
        ne = np.linalg.norm(h_eve)
        if nu == 0.0 or ne == 0.0:
            raise ContractViolation("cross_correlation requires nonzero channels")
        return float(abs(np.vdot(h_user, h_eve)) / (nu * ne))
    if h_eve.ndim == 2:
        ne = np.linalg.norm(h_eve)
        if nu == 0.0 or ne == 0.0:
            raise ContractViolation("cross_correlation requires nonzero channels")
        return float(np.linalg.norm(h_user.conj() @ h_eve) / (nu * ne))
    raise ContractViolation("eavesdropper channel must be a vector or matrix")
