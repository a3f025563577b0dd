"""Complex dense linear algebra shared by the optimization modules.

Thin layer over LAPACK (through numpy/scipy) that pins down the conventions
the rest of the package relies on: ascending eigenvalues, deterministic
eigenvector phases, and explicit checks on Hermitian structure.  All
operations are pure; identical inputs give bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

# Absolute deviation (relative to max(1, max|entry|)) above which a matrix is
# rejected as non-Hermitian.
HERMITIAN_TOL = 1e-10

# Minimum eigenvalue below which the right-hand matrix of the generalized
# eigenproblem is treated as singular.
MIN_PD_EIGENVALUE = 1e-12


class ContractViolation(ValueError):
    """Raised when an input violates a documented precondition."""


def as_complex_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex 2-D array, raising ContractViolation otherwise."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ContractViolation(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ContractViolation(f"{name} contains non-finite entries")
    return a


def hermitian_deviation(a: np.ndarray) -> float:
    """Largest entrywise deviation of a square matrix from its conjugate transpose."""
    return float(np.max(np.abs(a - a.conj().T), initial=0.0))


def require_hermitian(a, name: str = "matrix") -> np.ndarray:
    """Validate Hermitian structure and return the exactly hermitized matrix."""
    a = as_complex_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ContractViolation(f"{name} must be square, got shape {a.shape}")
    dev = hermitian_deviation(a)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if dev > HERMITIAN_TOL * scale:
        raise ContractViolation(
            f"{name} is not Hermitian: max deviation {dev:.3e} exceeds tolerance"
        )
    return 0.5 * (a + a.conj().T)


def normalize_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a complex vector so its largest-magnitude entry is real nonnegative.

    Makes eigenvector output deterministic; a zero vector is returned unchanged.
    """
    v = np.asarray(v, dtype=np.complex128)
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    mag = abs(pivot)
    if mag == 0.0:
        return v.copy()
    return v * (pivot.conjugate() / mag)


@dataclass(frozen=True)
class HermEigen:
    """Full spectral decomposition of a Hermitian matrix.

    eigenvalues are real and ascending; eigenvectors are unit-norm columns with
    deterministic phase (largest-magnitude entry real nonnegative).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def herm_eig(a) -> HermEigen:
    """Spectral decomposition of a Hermitian matrix.

    Raises ContractViolation for non-square or non-Hermitian input (deviation
    above HERMITIAN_TOL).
    """
    a = require_hermitian(a, "A")
    vals, vecs = np.linalg.eigh(a)
    # columnwise deterministic phase
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    mags = np.abs(pivots)
    safe = np.where(mags == 0.0, 1.0, mags)
    phases = np.where(mags == 0.0, 1.0, pivots.conj() / safe)
    return HermEigen(vals, vecs * phases[np.newaxis, :])


def max_gen_eigvec(p, q) -> np.ndarray:
    """Unit vector maximizing the generalized Rayleigh quotient (v^H P v)/(v^H Q v).

    P must be Hermitian and Q Hermitian positive definite.  Solved by Cholesky
    whitening (Q = LL^H, then a Hermitian eigenproblem on L^{-1} P L^{-H})
    rather than iterating on the non-Hermitian Q^{-1}P.  On a (near-)repeated
    top eigenvalue the candidate whose phase-normalized real part is
    lexicographically largest is returned, which keeps the output deterministic.
    """
    p = require_hermitian(p, "P")
    q = require_hermitian(q, "Q")
    if p.shape != q.shape:
        raise ContractViolation(f"shape mismatch: P {p.shape} vs Q {q.shape}")
    q_min = float(np.linalg.eigvalsh(q)[0])
    if q_min <= MIN_PD_EIGENVALUE:
        raise ContractViolation(
            f"Q is not positive definite: minimum eigenvalue {q_min:.3e}"
        )
    chol = scipy.linalg.cholesky(q, lower=True, check_finite=False)
    t = scipy.linalg.solve_triangular(chol, p, lower=True, check_finite=False)
    m = scipy.linalg.solve_triangular(chol, t.conj().T, lower=True, check_finite=False)
    m = 0.5 * (m + m.conj().T)
    vals, vecs = np.linalg.eigh(m)
    top = vals[-1]
    tie_tol = 1e-10 * max(1.0, abs(top))
    best = None
    best_key = None
    for k in range(vals.shape[0] - 1, -1, -1):
        if top - vals[k] > tie_tol:
            break
        u = vecs[:, k]
        v = scipy.linalg.solve_triangular(
            chol.conj().T, u, lower=False, check_finite=False
        )
        v = normalize_phase(v / np.linalg.norm(v))
        key = tuple(v.real)
        if best is None or key > best_key:
            best = v
            best_key = key
    return best


def solve_hpd(a, b) -> np.ndarray:
    """Solve A x = b for Hermitian positive definite A via Cholesky."""
    a = require_hermitian(a, "A")
    b = np.asarray(b, dtype=np.complex128)
    try:
        factor = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise ContractViolation(f"A is not positive definite: {exc}") from exc
    return scipy.linalg.cho_solve(factor, b, check_finite=False)
