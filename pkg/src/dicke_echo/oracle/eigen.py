"""Lowest eigenpair of the Dicke Hamiltonian with photon-cutoff escalation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as la

from ..exceptions import NoConvergence
from ..model import DickeParams, PhaseLabel, classify_phase
from .basis import FockSpinBasis, SparseHamiltonian, build_hamiltonian

#: Dimension above which the iterative solver replaces dense diagonalization.
DENSE_LIMIT = 4000

ENERGY_TOL = 1e-8
MEAN_TOL = 1e-6


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    vector: np.ndarray
    n_max_used: int
    basis: FockSpinBasis
    residual: float
    energy_shift: float = float("nan")
    mean_shift: float = float("nan")
    solver: str = "dense"
    history: tuple = field(default_factory=tuple)

    @property
    def converged(self) -> bool:
        return self.energy_shift_ok and self.mean_shift_ok

    @property
    def energy_shift_ok(self) -> bool:
        return abs(self.energy_shift) < ENERGY_TOL * max(abs(self.energy), 1e-300)

    @property
    def mean_shift_ok(self) -> bool:
        return abs(self.mean_shift) < MEAN_TOL


def _fix_sign(v):
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def lanczos_lowest(
    matrix,
    tol: float = 1e-10,
    krylov_dim: int = 120,
    max_restarts: int = 50,
    v0: Optional[np.ndarray] = None,
):
    """Lowest eigenpair of a real symmetric operator by restarted Lanczos.

    Every new Lanczos vector is reorthogonalized against the whole basis.
    After ``krylov_dim`` steps the iteration restarts from the current Ritz
    vector. Convergence is declared when ``||A v - E v|| <= tol * |E|``.

    Returns ``(energy, vector, residual, matvecs)``.
    """
    n = matrix.shape[0]
    if v0 is None:
        # deterministic start with overlap on every basis state
        v0 = np.random.default_rng(12345).standard_normal(n)
    q = np.asarray(v0, dtype=float)
    q = q / np.linalg.norm(q)
    m = min(krylov_dim, n)
    best = (math.inf, None, math.inf)
    matvecs = 0
    for _ in range(max_restarts):
        Q = np.zeros((n, m))
        alpha = np.zeros(m)
        beta = np.zeros(m)
        Q[:, 0] = q
        steps = m
        for i in range(m):
            w = matrix @ Q[:, i]
            matvecs += 1
            alpha[i] = Q[:, i] @ w
            w -= Q[:, : i + 1] @ (Q[:, : i + 1].T @ w)
            w -= Q[:, : i + 1] @ (Q[:, : i + 1].T @ w)
            beta[i] = np.linalg.norm(w)
            if i + 1 == m:
                break
            if beta[i] < 1e-14 * max(1.0, abs(alpha[i])):
                steps = i + 1
                break
            Q[:, i + 1] = w / beta[i]
        evals, evecs = la.eigh_tridiagonal(alpha[:steps], beta[: steps - 1])
        energy = evals[0]
        vec = Q[:, :steps] @ evecs[:, 0]
        vec /= np.linalg.norm(vec)
        resid = np.linalg.norm(matrix @ vec - energy * vec)
        matvecs += 1
        if resid < best[2]:
            best = (energy, vec, resid)
        if resid <= tol * max(abs(energy), 1e-300):
            return energy, _fix_sign(vec), resid, matvecs
        q = vec
    raise NoConvergence("Lanczos restarts exhausted", best_residual=best[2])


def ground_state(h: SparseHamiltonian, tol: float = 1e-10, solver: str = "auto"):
    """Lowest eigenpair of ``h``.

    ``solver`` is ``"dense"``, ``"lanczos"`` or ``"auto"`` (dense up to
    :data:`DENSE_LIMIT`). Returns ``(energy, vector, residual, solver_used)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if solver == "auto":
        solver = "dense" if h.dimension <= DENSE_LIMIT else "lanczos"
    if solver == "dense":
        evals, evecs = la.eigh(h.dense(), subset_by_index=[0, 0])
        energy, vec = float(evals[0]), _fix_sign(evecs[:, 0])
        resid = float(np.linalg.norm(h.matrix @ vec - energy * vec))
        if resid > tol * max(abs(energy), 1.0):
            raise NoConvergence("dense eigensolver residual too large", resid)
    elif solver == "lanczos":
        energy, vec, resid, _ = lanczos_lowest(h.matrix, tol=tol)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return float(energy), vec, float(resid), solver


def initial_cutoff(p: DickeParams) -> int:
    """Starting photon cutoff, padded well past the mean photon number."""
    mean = 0.0
    if classify_phase(p) is PhaseLabel.SUPER_RADIANT:
        mu = p.omega * p.omega0 / (4.0 * p.g**2)
        mean = p.g**2 * p.n_atoms * (1.0 - mu * mu) / p.omega**2
    return int(math.ceil(mean + 10.0 * math.sqrt(mean + 1.0) + 20.0))


def _mean_photons(vec, basis):
    prob = (basis.reshape(vec) ** 2).sum(axis=1)
    return float(prob @ np.arange(basis.n_max + 1))


def solve_ground_state(
    p: DickeParams,
    tol: float = 1e-10,
    n_max: Optional[int] = None,
    max_doublings: int = 4,
    solver: str = "auto",
) -> GroundStateResult:
    """Ground state of the undriven ensemble, converged in the photon cutoff.

    The cutoff starts at :func:`initial_cutoff` (or ``n_max``) and doubles
    until the relative energy change drops below 1e-8 and the mean photon
    number moves by less than 1e-6.
    """
    cutoff = initial_cutoff(p) if n_max is None else int(n_max)
    previous = None
    history = []
    for _ in range(max_doublings + 1):
        basis = FockSpinBasis(cutoff, p.n_atoms)
        energy, vec, resid, used = ground_state(build_hamiltonian(p, basis), tol, solver)
        mean = _mean_photons(vec, basis)
        history.append((cutoff, energy, mean))
        if previous is not None:
            d_energy = energy - previous[0]
            d_mean = mean - previous[1]
            result = GroundStateResult(
                energy=energy,
                vector=vec,
                n_max_used=cutoff,
                basis=basis,
                residual=resid,
                energy_shift=d_energy,
                mean_shift=d_mean,
                solver=used,
                history=tuple(history),
            )
            if result.converged:
                return result
        previous = (energy, mean)
        cutoff *= 2
    raise NoConvergence(
        f"photon cutoff did not converge up to n_max={cutoff // 2}",
        best_residual=abs(history[-1][1] - history[-2][1]) if len(history) > 1 else math.nan,
    )
