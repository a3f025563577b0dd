"""Dense primal-dual interior-point solver for small Hermitian SDPs.

Solves

    maximize    tr(C X)
    subject to  tr(A_i X) = b_i,   i = 1..m,
                X Hermitian positive semidefinite,

via Nesterov-Todd scaled Mehrotra predictor-corrector steps applied to the
real symmetric embedding of the complex problem.  Problem orders here are
tiny (2N+1 <= ~33), so dense O(d^3) factorizations per iteration are cheap
and robust.

Setting the environment variable POLARSEC_SDP_TRACE=1 appends per-iteration
residuals to a text log (POLARSEC_SDP_TRACE_FILE, default
``polarsec_sdp_trace.log`` in the working directory).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .linalg import ContractViolation, require_hermitian

MAX_ITERATIONS = 200
# contract tolerances certified on the returned solution
CERT_GAP = 1e-6
CERT_FEAS = 1e-7
# internal stopping targets, tighter than the contract so downstream
# consumers (which divide by the recovered scaling variable) keep headroom
STOP_GAP = 1e-9
STOP_FEAS = 1e-10
BOUNDARY_FRACTION = 0.98
TRACE_ENV = "POLARSEC_SDP_TRACE"
TRACE_FILE_ENV = "POLARSEC_SDP_TRACE_FILE"


class SdpSolverError(RuntimeError):
    """Base class for solver failures; carries the last iterate's residuals."""

    def __init__(self, message, iterations=0, duality_gap=np.inf, feas_residual=np.inf):
        super().__init__(
            f"{message} (iterations={iterations}, duality_gap={duality_gap:.3e}, "
            f"feas_residual={feas_residual:.3e})"
        )
        self.iterations = iterations
        self.duality_gap = duality_gap
        self.feas_residual = feas_residual


class SdpNonConvergence(SdpSolverError):
    """Iteration cap reached without meeting the contract tolerances."""


class SdpInfeasible(SdpSolverError):
    """Dual objective diverged, indicating a (numerically) infeasible primal."""


@dataclass(frozen=True)
class SdpProblem:
    """Standard-form Hermitian SDP: maximize tr(C X) s.t. tr(A_i X) = b_i, X PSD."""

    dim: int
    objective: np.ndarray
    constraints: tuple  # ((A_i, b_i), ...)


def make_sdp_problem(objective, constraints) -> SdpProblem:
    objective = require_hermitian(objective, "objective")
    d = objective.shape[0]
    if not constraints:
        raise ContractViolation("constraint list must be nonempty")
    checked = []
    for k, (mat, rhs) in enumerate(constraints):
        mat = require_hermitian(mat, f"constraint {k}")
        if mat.shape[0] != d:
            raise ContractViolation(f"constraint {k} order {mat.shape[0]} != {d}")
        rhs = float(rhs)
        if not np.isfinite(rhs):
            raise ContractViolation(f"constraint {k} has non-finite right-hand side")
        checked.append((mat, rhs))
    return SdpProblem(d, objective, tuple(checked))


@dataclass(frozen=True)
class SdpSolution:
    """Certified primal solution with duality gap and feasibility residuals."""

    x: np.ndarray
    objective_value: float
    dual_value: float
    duality_gap: float
    feas_residual: float
    iterations: int


def _embed(mat: np.ndarray) -> np.ndarray:
    """Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix."""
    re, im = mat.real, mat.imag
    return np.block([[re, -im], [im, re]])


def _recover(y: np.ndarray, d: int) -> np.ndarray:
    """Map a 2d x 2d symmetric iterate back to a d x d Hermitian matrix."""
    re = 0.5 * (y[:d, :d] + y[d:, d:])
    im = 0.5 * (y[d:, :d] - y[:d, d:])
    x = re + 1j * im
    return 0.5 * (x + x.conj().T)


def _initial_scale(problem: SdpProblem) -> float:
    ratios = []
    for mat, rhs in problem.constraints:
        tr = abs(float(np.trace(mat).real))
        if tr > 1e-12 * (1.0 + abs(rhs)):
            ratios.append(abs(rhs) / tr)
    tau = float(np.mean(ratios)) if ratios else 1.0
    if not np.isfinite(tau) or tau <= 0.0:
        tau = 1.0
    return min(max(tau, 1e-4), 1e4)


def _max_steps(dir_p: np.ndarray, dir_d: np.ndarray, inv_sqrt_v: np.ndarray):
    """Largest steps keeping diag(v) + alpha*direction inside the cone.

    Both directions are whitened by the current scaling point and checked
    through one batched eigenvalue call.
    """
    outer = inv_sqrt_v[:, None] * inv_sqrt_v[None, :]
    lams = np.linalg.eigvalsh(np.stack((dir_p * outer, dir_d * outer)))
    out = []
    for lam_min in lams[:, 0]:
        out.append(np.inf if lam_min >= 0.0 else -1.0 / float(lam_min))
    return out


def _trace_writer():
    if os.environ.get(TRACE_ENV, "") != "1":
        return None
    path = os.environ.get(TRACE_FILE_ENV, "polarsec_sdp_trace.log")
    return open(path, "a", encoding="utf-8")


def _schur_factor(schur: np.ndarray):
    """Cholesky of the (theoretically PD) Schur matrix, with ridge fallback."""
    try:
        return scipy.linalg.cho_factor(schur, lower=True, check_finite=False)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError, ValueError):
        pass
    ridge = 1e-12 * max(float(np.trace(schur)), 1.0)
    eye = np.eye(schur.shape[0])
    for _ in range(4):
        try:
            return scipy.linalg.cho_factor(
                schur + ridge * eye, lower=True, check_finite=False
            )
        except (scipy.linalg.LinAlgError, np.linalg.LinAlgError, ValueError):
            ridge *= 1e3
    return None


def _psd_factor(mat: np.ndarray) -> np.ndarray:
    """Square factor F with F F^T = mat, eigenvalues floored at rounding level.

    The scaling construction only needs some square factor, so an
    eigendecomposition with a tiny eigenvalue floor keeps the iteration going
    where a Cholesky would reject an iterate grazing the cone boundary.
    """
    vals, vecs = np.linalg.eigh(mat)
    floor = 1e-14 * max(float(vals[-1]), 1e-30)
    return vecs * np.sqrt(np.maximum(vals, floor))


def sdp_solve(problem: SdpProblem) -> SdpSolution:
    """Solve a strictly feasible standard-form Hermitian SDP.

    Returns a solution meeting duality_gap <= 1e-6*(1+|obj|) and
    feas_residual <= 1e-7 (the solver internally targets tighter values).
    Raises SdpNonConvergence when the 200-iteration cap is hit first and
    SdpInfeasible when the dual objective diverges.
    """
    d = problem.dim
    n = 2 * d
    b_orig = np.array([rhs for _, rhs in problem.constraints], dtype=np.float64)
    m = b_orig.shape[0]
    a_orig = np.stack([0.5 * _embed(mat) for mat, _ in problem.constraints])

    # normalize constraints and objective; this rescales the dual variables and
    # evens out the Schur conditioning but leaves the primal feasible set as is
    con_scale = 1.0 / np.maximum(
        np.sqrt(np.sum(a_orig * a_orig, axis=(1, 2))), 1e-12
    )
    obj_scale = 1.0 / max(1.0, float(np.linalg.norm(problem.objective)))
    a_stack = a_orig * con_scale[:, None, None]
    a_flat = a_stack.reshape(m, -1)
    b = b_orig * con_scale
    c_mat = obj_scale * 0.5 * _embed(problem.objective)

    tau = _initial_scale(problem)
    x = tau * np.eye(n)
    s = np.eye(n)
    y = np.zeros(m)
    eye = np.eye(n)

    def residuals():
        # scaled-system residuals drive the Newton steps; stopping and
        # reporting use original units
        primal = float(np.sum(c_mat * x)) / obj_scale
        dual = float(b @ y) / obj_scale
        rp = b - a_flat @ x.ravel()
        rd = c_mat + s - np.tensordot(y, a_stack, axes=1)
        feas = max(float(np.max(np.abs(rp * (1.0 / con_scale)), initial=0.0)),
                   float(np.max(np.abs(rd), initial=0.0)) / obj_scale)
        return primal, dual, abs(dual - primal), feas, rp, rd

    trace = _trace_writer()
    if trace is not None:
        trace.write(f"# sdp_solve dim={d} constraints={m}\n")

    steps = 0
    best_metric = np.inf
    stall = 0
    try:
        while True:
            primal, dual, gap, feas, rp, rd = residuals()
            gap_scale = 1.0 + abs(primal)
            if trace is not None:
                trace.write(
                    f"iter {steps:3d} primal={primal:+.9e} dual={dual:+.9e} "
                    f"gap={gap:.3e} feas={feas:.3e}\n"
                )
            if not np.isfinite(gap) or not np.isfinite(feas):
                raise SdpNonConvergence("iterates became non-finite", steps, gap, feas)
            if gap <= STOP_GAP * gap_scale and feas <= STOP_FEAS:
                break
            contract_ok = gap <= CERT_GAP * gap_scale and feas <= CERT_FEAS
            metric = max(gap / (gap_scale * STOP_GAP), feas / STOP_FEAS)
            if metric < 0.8 * best_metric:
                best_metric = metric
                stall = 0
            else:
                stall += 1
            if contract_ok and stall >= 6:
                break  # numerical floor reached, contract already met
            if dual < -1e12 * (1.0 + float(np.max(np.abs(b), initial=0.0))):
                raise SdpInfeasible("dual objective diverged", steps, gap, feas)
            if steps >= MAX_ITERATIONS:
                if contract_ok:
                    break
                raise SdpNonConvergence("iteration cap exceeded", steps, gap, feas)

            # Nesterov-Todd scaling from clamped PSD factors and one SVD
            lx = _psd_factor(x)
            ls = _psd_factor(s)
            u_svd, sig, vt = np.linalg.svd(ls.T @ lx)
            inv_sqrt_sig = 1.0 / np.sqrt(sig)
            g = lx @ (vt.T * inv_sqrt_sig)
            g_inv = (inv_sqrt_sig[:, None] * u_svd.T) @ ls.T

            a_hat = np.matmul(np.matmul(g.T, a_stack), g)
            a_hat_flat = a_hat.reshape(m, -1)
            rd_hat = g.T @ rd @ g
            schur = a_hat_flat @ a_hat_flat.T
            schur_factor = _schur_factor(schur)

            def schur_solve(rhs):
                if schur_factor is None:
                    return np.linalg.lstsq(schur, rhs, rcond=None)[0]
                return scipy.linalg.cho_solve(schur_factor, rhs, check_finite=False)

            v = sig
            inv_sqrt_v = inv_sqrt_sig
            v_mean = 0.5 * (v[:, None] + v[None, :])
            mu = float(np.sum(v * v)) / n

            # predictor (affine-scaling) direction
            rc_aff = np.diag(-v)
            t_vec = a_hat_flat @ (rc_aff + rd_hat).ravel() - rp
            dy_aff = schur_solve(t_vec)
            ds_hat_aff = (dy_aff @ a_hat_flat).reshape(n, n) - rd_hat
            dx_hat_aff = rc_aff - ds_hat_aff
            step_p_aff, step_d_aff = _max_steps(dx_hat_aff, ds_hat_aff, inv_sqrt_v)
            alpha_p_aff = min(1.0, step_p_aff)
            alpha_d_aff = min(1.0, step_d_aff)
            x_aff = np.diag(v) + alpha_p_aff * dx_hat_aff
            s_aff = np.diag(v) + alpha_d_aff * ds_hat_aff
            mu_aff = max(float(np.sum(x_aff * s_aff)) / n, 0.0)
            sigma = min(max((mu_aff / mu) ** 3, 1e-8), 1.0)

            # corrector with Mehrotra second-order term
            cross = dx_hat_aff @ ds_hat_aff
            cross = 0.5 * (cross + cross.T)
            rc = (sigma * mu * eye - np.diag(v * v) - cross) / v_mean
            t_vec = a_hat_flat @ (rc + rd_hat).ravel() - rp
            dy = schur_solve(t_vec)
            ds_hat = (dy @ a_hat_flat).reshape(n, n) - rd_hat
            dx_hat = rc - ds_hat

            step_p, step_d = _max_steps(dx_hat, ds_hat, inv_sqrt_v)
            alpha_p = min(1.0, BOUNDARY_FRACTION * step_p)
            alpha_d = min(1.0, BOUNDARY_FRACTION * step_d)

            x += alpha_p * (g @ dx_hat @ g.T)
            s += alpha_d * (g_inv.T @ ds_hat @ g_inv)
            x = 0.5 * (x + x.T)
            s = 0.5 * (s + s.T)
            y += alpha_d * dy
            steps += 1
    finally:
        if trace is not None:
            trace.close()

    return SdpSolution(
        x=_recover(x, d),
        objective_value=primal,
        dual_value=dual,
        duality_gap=gap,
        feas_residual=feas,
        iterations=steps,
    )
