"""Exact photon statistics and decoherence factor at finite N."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..model import Branch, DickeParams, ProbeAtom, shifted_params
from ..polariton import CLAMP_TOLERANCE, EchoCurve, clamp_unit
from .basis import FockSpinBasis, build_hamiltonian
from .eigen import DENSE_LIMIT, GroundStateResult, solve_ground_state
from .propagate import KrylovPropagator, SpectralPropagator

NORM_TOLERANCE = 1e-8


@dataclass(frozen=True)
class PhotonStatistics:
    mean: float
    variance: float
    distribution: np.ndarray


def photon_statistics(gs: GroundStateResult, basis: Optional[FockSpinBasis] = None) -> PhotonStatistics:
    basis = gs.basis if basis is None else basis
    amps = basis.reshape(gs.vector)
    prob = np.sum(np.abs(amps) ** 2, axis=1)
    prob = prob / prob.sum()
    n = np.arange(prob.size, dtype=float)
    mean = float(prob @ n)
    # central second moment avoids cancellation between <n^2> and <n>^2
    variance = float(prob @ (n - mean) ** 2)
    return PhotonStatistics(mean=mean, variance=variance, distribution=prob)


def parity_leakage(gs: GroundStateResult) -> float:
    """Norm of the ground state's component in the minority parity sector."""
    parity = gs.basis.parity()
    plus = np.linalg.norm(gs.vector[parity == 1])
    minus = np.linalg.norm(gs.vector[parity == -1])
    return float(min(plus, minus))


def _evolve(h, psi, times, method):
    if method == "spectral":
        return SpectralPropagator(h.matrix).evolve(psi, times)
    propagator = KrylovPropagator(h.matrix)
    return propagator.evolve(psi, times)


def echo_exact(
    p: DickeParams,
    times: Sequence[float],
    probe: Optional[ProbeAtom] = None,
    gs: Optional[GroundStateResult] = None,
    include_constants: bool = False,
    method: str = "auto",
    tol: float = 1e-10,
) -> EchoCurve:
    """Echo ``|<G| e^{i H_g t} e^{-i H_e t} |G>|^2`` from full time evolution.

    ``|G>`` is the ground state of the unshifted Hamiltonian; ``H_g`` and
    ``H_e`` see the cavity at ``omega -+ delta_tilde``. With
    ``include_constants`` the c-number energies ``-+(omega_s + delta_tilde)/2``
    of the probe are added back; they only rotate the phase of D(t).

    ``method`` is ``"spectral"``, ``"krylov"`` or ``"auto"`` (spectral up to
    the dense dimension limit). The returned curve carries D(t) in
    ``decoherence``.
    """
    t = np.asarray(times, dtype=float)
    if gs is None:
        gs = solve_ground_state(p, tol=tol)
    basis = gs.basis
    if method == "auto":
        method = "spectral" if basis.dim <= DENSE_LIMIT else "krylov"
    if method == "krylov" and t.size and t[0] < 0:
        raise ValueError("Krylov propagation needs non-negative times")

    h_g = build_hamiltonian(shifted_params(p, Branch.GROUND), basis)
    h_e = build_hamiltonian(shifted_params(p, Branch.EXCITED), basis)
    if include_constants:
        if probe is None:
            raise ValueError("include_constants needs the probe atom")
        offset = 0.5 * (probe.omega_s + p.delta_tilde)
        h_g = h_g.shifted(-offset)
        h_e = h_e.shifted(+offset)

    psi0 = gs.vector.astype(complex)
    states_g = _evolve(h_g, psi0, t, method)
    states_e = _evolve(h_e, psi0, t, method)

    norms_g = np.linalg.norm(states_g, axis=1)
    norms_e = np.linalg.norm(states_e, axis=1)
    drift = float(max(np.max(np.abs(norms_g - 1.0), initial=0.0),
                      np.max(np.abs(norms_e - 1.0), initial=0.0)))
    states_g /= norms_g[:, None]
    states_e /= norms_e[:, None]

    overlap = np.einsum("ij,ij->i", states_g.conj(), states_e)
    # 1 - |D|^2 as the squared norm of the perpendicular part keeps the
    # small deficit at short times accurate
    perp = np.sum(np.abs(states_e - overlap[:, None] * states_g) ** 2, axis=1)
    direct = np.abs(overlap) ** 2
    raw = np.where(perp < 0.5, 1.0 - perp, direct)
    values, excursion = clamp_unit(raw)
    return EchoCurve(
        times=t,
        values=values,
        method="exact",
        params_snapshot=p,
        decoherence=overlap,
        metadata={
            "propagation": method,
            "norm_drift": drift,
            "norm_ok": drift <= NORM_TOLERANCE,
            "clamp_excursion": excursion,
            "clamp_ok": excursion <= CLAMP_TOLERANCE,
            "n_max_used": gs.n_max_used,
        },
    )


def echo_characteristic(
    gs: GroundStateResult, p: DickeParams, times: Sequence[float]
) -> EchoCurve:
    """Echo from the photon-number characteristic function at ``2 delta_tilde t``."""
    stats = photon_statistics(gs)
    t = np.asarray(times, dtype=float)
    n = np.arange(stats.distribution.size)
    chi = np.exp(-2j * p.delta_tilde * np.outer(t, n)) @ stats.distribution
    values, _ = clamp_unit(np.abs(chi) ** 2)
    return EchoCurve(
        times=t,
        values=values,
        method="analytic-characteristic",
        params_snapshot=p,
        decoherence=chi,
    )


def reduced_coherence(probe: ProbeAtom, d):
    """Off-diagonal element ``<e|rho_s|g> = D conj(alpha) beta`` of the probe."""
    return np.asarray(d) * np.conj(probe.alpha_amp) * probe.beta_amp


def reduced_density_matrix(probe: ProbeAtom, d: complex) -> np.ndarray:
    """Probe density matrix in the ordered basis (|g>, |e>)."""
    c = complex(reduced_coherence(probe, d))
    return np.array(
        [[abs(probe.alpha_amp) ** 2, np.conj(c)], [c, abs(probe.beta_amp) ** 2]],
        dtype=complex,
    )


def oracle_report(p: DickeParams, gs: GroundStateResult, stats: PhotonStatistics) -> dict:
    """JSON-ready summary of one ground-state solve."""
    return {
        "params": p.to_dict(),
        "n_max_used": gs.n_max_used,
        "energy": gs.energy,
        "mean": stats.mean,
        "variance": stats.variance,
        "distribution": stats.distribution.tolist(),
        "residual": gs.residual,
        "energy_shift": gs.energy_shift,
        "mean_shift": gs.mean_shift,
        "solver": gs.solver,
    }


def dump_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)


def load_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        report = json.load(fh)
    report["params"] = DickeParams(**report["params"])
    report["distribution"] = np.asarray(report["distribution"], dtype=float)
    return report
