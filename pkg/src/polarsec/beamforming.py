"""Transmit beamformer designs: the optimal secrecy beamformer and MRT."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ContractViolation, max_gen_eigvec, require_hermitian

POWER_SLACK = 1e-9


@dataclass(frozen=True)
class Beamformer:
    """Complex transmit weight vector within a power budget."""

    w: np.ndarray
    p_max: float

    def __post_init__(self):
        power = float(np.linalg.norm(self.w) ** 2)
        if power > self.p_max + POWER_SLACK:
            raise ContractViolation(
                f"beamformer power {power:.12f} exceeds budget {self.p_max}"
            )


@dataclass(frozen=True)
class QuadraticFormPair:
    """Rank-limited Hermitian PSD quadratic forms of the user and eavesdropper.

    a_user = h_U h_U^H / sigma2 and a_eve = h_E h_E^H / sigma2 (the same noise
    power scales both, following the source definition; the scenarios use
    equal noise anyway).  For a multi-antenna eavesdropper a_eve becomes
    H_E H_E^H / sigma2 with rank up to M.
    """

    a_user: np.ndarray
    a_eve: np.ndarray


def quadratic_forms(h_user, h_eve, sigma2: float) -> QuadraticFormPair:
    h_user = np.asarray(h_user, dtype=np.complex128)
    h_eve = np.asarray(h_eve, dtype=np.complex128)
    if sigma2 <= 0.0:
        raise ContractViolation("sigma2 must be positive")
    return QuadraticFormPair(
        np.outer(h_user, h_user.conj()) / sigma2,
        np.outer(h_eve, h_eve.conj()) / sigma2,
    )


def quadratic_forms_mrc(h_user, h_eve_matrix, sigma2: float) -> QuadraticFormPair:
    h_user = np.asarray(h_user, dtype=np.complex128)
    h_mat = np.asarray(h_eve_matrix, dtype=np.complex128)
    if sigma2 <= 0.0:
        raise ContractViolation("sigma2 must be positive")
    return QuadraticFormPair(
        np.outer(h_user, h_user.conj()) / sigma2,
        (h_mat @ h_mat.conj().T) / sigma2,
    )


def optimal_beamformer(pair: QuadraticFormPair, p_max: float) -> Beamformer:
    """Secrecy-optimal beamformer for fixed channels.

    Maximizes (w^H A_U w + 1) / (w^H A_E w + 1) under ||w||^2 <= p_max; the
    solution is sqrt(p_max) times the dominant generalized eigenvector of
    (A_U + I/p_max, A_E + I/p_max), which always uses the full power budget.
    """
    if p_max <= 0.0:
        raise ContractViolation("p_max must be positive")
    a_user = require_hermitian(pair.a_user, "A_user")
    a_eve = require_hermitian(pair.a_eve, "A_eve")
    n = a_user.shape[0]
    ridge = np.eye(n) / p_max
    v = max_gen_eigvec(a_user + ridge, a_eve + ridge)
    w = np.sqrt(p_max) * v
    # renormalize away eigenvector rounding so the budget binds exactly
    w *= np.sqrt(p_max) / np.linalg.norm(w)
    return Beamformer(w, float(p_max))


def mrt_beamformer(h_user, p_max: float) -> Beamformer:
    """Maximum ratio transmission along the user's channel at full power."""
    if p_max <= 0.0:
        raise ContractViolation("p_max must be positive")
    h_user = np.asarray(h_user, dtype=np.complex128)
    norm = np.linalg.norm(h_user)
    if norm == 0.0:
        raise ContractViolation("MRT is undefined for a zero channel")
    return Beamformer(np.sqrt(p_max) * h_user / norm, float(p_max))
