"""Real-time propagation ``exp(-i H t) psi`` for real symmetric H."""

from __future__ import annotations

import numpy as np
import scipy.linalg as la

from ..exceptions import StepTooLarge


class SpectralPropagator:
    """Exact propagation through a full eigendecomposition of ``H``."""

    def __init__(self, matrix):
        dense = matrix.toarray() if hasattr(matrix, "toarray") else np.asarray(matrix)
        self.energies, self.modes = la.eigh(dense)

    def evolve(self, psi, times):
        """States ``exp(-i H t) psi`` as rows, one per entry of ``times``."""
        coeffs = self.modes.T @ psi
        phases = np.exp(-1j * np.outer(times, self.energies))
        return (phases * coeffs[None, :]) @ self.modes.T


def _lanczos_basis(matrix, v, m):
    n = v.shape[0]
    Q = np.zeros((n, m + 1), dtype=complex)
    alpha = np.zeros(m)
    beta = np.zeros(m)
    norm = np.linalg.norm(v)
    Q[:, 0] = v / norm
    for i in range(m):
        w = matrix @ Q[:, i]
        alpha[i] = np.real(np.vdot(Q[:, i], w))
        w -= Q[:, : i + 1] @ (Q[:, : i + 1].conj().T @ w)
        w -= Q[:, : i + 1] @ (Q[:, : i + 1].conj().T @ w)
        beta[i] = np.linalg.norm(w)
        if beta[i] < 1e-14:
            return Q[:, : i + 1], alpha[: i + 1], beta[: i + 1], norm, True
        Q[:, i + 1] = w / beta[i]
    return Q, alpha, beta, norm, False


class KrylovPropagator:
    """Short-iterate Lanczos propagation with a-posteriori step control.

    Each step projects onto an ``krylov_dim``-dimensional Krylov space and
    exponentiates the tridiagonal projection exactly. The step error is
    estimated by the weight the exact small-space propagator puts on the
    last Lanczos vector, times the residual coupling ``beta_m``. Steps are
    halved until the estimate is below ``step_tol``; if that needs a step
    shorter than ``min_step`` the propagation aborts.
    """

    def __init__(self, matrix, krylov_dim=30, step_tol=1e-10, max_error=1e-8, min_step=1e-6):
        self.matrix = matrix
        self.krylov_dim = krylov_dim
        self.step_tol = step_tol
        self.max_error = max_error
        self.min_step = min_step
        self.error_log = []

    def step(self, psi, dt):
        """One attempted step; returns ``(new_psi, error_estimate)``."""
        m = min(self.krylov_dim, psi.shape[0] - 1) if psi.shape[0] > 1 else 1
        Q, alpha, beta, norm, exhausted = _lanczos_basis(self.matrix, psi, m)
        k = alpha.shape[0]
        evals, evecs = la.eigh_tridiagonal(alpha, beta[: k - 1]) if k > 1 else (alpha, np.ones((1, 1)))
        small = evecs @ (np.exp(-1j * evals * dt) * evecs[0, :])
        new = norm * (Q[:, :k] @ small)
        err = 0.0 if exhausted else float(norm * beta[k - 1] * abs(small[-1]))
        return new, err

    def evolve(self, psi, times):
        psi = np.asarray(psi, dtype=complex)
        out = np.empty((len(times), psi.shape[0]), dtype=complex)
        t_now = 0.0
        dt = 1.0
        for idx, t_target in enumerate(times):
            if t_target < t_now:
                raise ValueError("times must be non-decreasing and start at >= 0")
            while t_target - t_now > 1e-14 * max(1.0, abs(t_target)):
                h = min(dt, t_target - t_now)
                new, err = self.step(psi, h)
                while err > self.step_tol:
                    if h / 2 < self.min_step:
                        if err > self.max_error:
                            raise StepTooLarge(
                                f"Krylov step error {err:.2e} exceeds {self.max_error:g} "
                                f"at t={t_now:.6g} with dt={h:.3g}"
                            )
                        break
                    h /= 2
                    dt = h
                    new, err = self.step(psi, h)
                self.error_log.append(err)
                psi = new
                t_now += h
                if err < 0.01 * self.step_tol and h == dt:
                    dt *= 1.5
            t_now = t_target
            out[idx] = psi
        return out
