"""Finite-N exact diagonalization of the Dicke Hamiltonian."""

from .basis import FockSpinBasis, SparseHamiltonian, build_hamiltonian
from .echo import (
    PhotonStatistics,
    dump_report,
    echo_characteristic,
    echo_exact,
    load_report,
    oracle_report,
    parity_leakage,
    photon_statistics,
    reduced_coherence,
    reduced_density_matrix,
)
from .eigen import (
    DENSE_LIMIT,
    GroundStateResult,
    ground_state,
    initial_cutoff,
    lanczos_lowest,
    solve_ground_state,
)
from .propagate import KrylovPropagator, SpectralPropagator

__all__ = [
    "DENSE_LIMIT",
    "FockSpinBasis",
    "GroundStateResult",
    "KrylovPropagator",
    "PhotonStatistics",
    "SparseHamiltonian",
    "SpectralPropagator",
    "build_hamiltonian",
    "dump_report",
    "echo_characteristic",
    "echo_exact",
    "ground_state",
    "initial_cutoff",
    "lanczos_lowest",
    "load_report",
    "oracle_report",
    "parity_leakage",
    "photon_statistics",
    "reduced_coherence",
    "reduced_density_matrix",
    "solve_ground_state",
]
