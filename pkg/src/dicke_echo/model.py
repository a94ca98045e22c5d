"""Physical parameters of the photon-dressed ensemble and the probe atom.

All frequencies are measured in units of the cavity frequency, so the
conventional choice is ``omega=1``; times are the dimensionless ``omega*t``.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

from .exceptions import InvalidParameters, InvalidShift, RegimeViolation

#: Relative half-width of the band around g_c labelled ``Critical``.
CRITICAL_TOLERANCE = 1e-9

#: Minimum |detuning| / coupling ratio accepted for a dispersive probe.
DISPERSIVE_RATIO = 10.0


class PhaseLabel(str, enum.Enum):
    NORMAL = "Normal"
    SUPER_RADIANT = "SuperRadiant"
    CRITICAL = "Critical"

    def __str__(self):
        return self.value


class Branch(str, enum.Enum):
    """State of the probe atom selecting the conditional Hamiltonian."""

    GROUND = "ground"
    EXCITED = "excited"


@dataclass(frozen=True)
class DickeParams:
    """Cavity + ensemble configuration.

    Parameters
    ----------
    omega : float
        Cavity frequency.
    omega0 : float
        Atomic level spacing.
    g : float
        Collective coupling (``g0 * sqrt(N)``).
    n_atoms : int
        Number of atoms N.
    delta_tilde : float
        Magnitude of the dispersive cavity shift induced by the probe.
    """

    omega: float = 1.0
    omega0: float = 1.0
    g: float = 0.0
    n_atoms: int = 1
    delta_tilde: float = 0.0

    def __post_init__(self):
        for name in ("omega", "omega0", "g", "delta_tilde"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise InvalidParameters(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if isinstance(self.n_atoms, bool) or int(self.n_atoms) != self.n_atoms:
            raise InvalidParameters(f"n_atoms must be an integer, got {self.n_atoms!r}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))

        if self.omega <= 0:
            raise InvalidParameters(f"omega must be positive, got {self.omega}")
        if self.omega0 <= 0:
            raise InvalidParameters(f"omega0 must be positive, got {self.omega0}")
        if self.g < 0:
            raise InvalidParameters(f"g must be non-negative, got {self.g}")
        if self.n_atoms < 1:
            raise InvalidParameters(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.delta_tilde < 0:
            raise InvalidParameters(
                f"delta_tilde must be non-negative, got {self.delta_tilde}"
            )
        if self.delta_tilde >= self.omega:
            raise InvalidParameters(
                f"delta_tilde={self.delta_tilde} must stay below omega={self.omega}"
            )

    @property
    def g_c(self) -> float:
        return critical_coupling(self)

    def replace(self, **changes) -> "DickeParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class ProbeAtom:
    """Far-detuned two-level atom crossing the cavity.

    ``delta_s`` is the detuning ``omega_s - omega``; ``alpha_amp`` and
    ``beta_amp`` are the amplitudes on |g> and |e>.
    """

    omega_s: float
    g_s: float
    delta_s: float
    alpha_amp: complex = 1 / math.sqrt(2)
    beta_amp: complex = 1 / math.sqrt(2)

    def __post_init__(self):
        norm = abs(self.alpha_amp) ** 2 + abs(self.beta_amp) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvalidParameters(
                f"probe amplitudes must be normalized, |a|^2+|b|^2={norm!r}"
            )
        if self.g_s < 0:
            raise InvalidParameters(f"g_s must be non-negative, got {self.g_s}")
        if self.delta_s == 0:
            raise RegimeViolation("delta_s must be non-zero")
        if abs(self.delta_s) < DISPERSIVE_RATIO * self.g_s:
            raise RegimeViolation(
                f"|delta_s|={abs(self.delta_s)} is below {DISPERSIVE_RATIO:g}*g_s="
                f"{DISPERSIVE_RATIO * self.g_s}; not dispersive"
            )

    @classmethod
    def from_detuning(cls, omega, g_s, delta_s, **amplitudes) -> "ProbeAtom":
        """Build a probe whose transition sits ``delta_s`` above the cavity."""
        return cls(omega_s=omega + delta_s, g_s=g_s, delta_s=delta_s, **amplitudes)


def critical_coupling(p: DickeParams) -> float:
    """Coupling ``sqrt(omega * omega0) / 2`` at which the ensemble goes super-radiant."""
    return math.sqrt(p.omega * p.omega0) / 2.0


def dispersive_shift(probe: ProbeAtom) -> float:
    """Signed cavity shift ``g_s**2 / delta_s`` of a dispersive probe."""
    if abs(probe.delta_s) < DISPERSIVE_RATIO * probe.g_s:
        raise RegimeViolation("probe is not in the dispersive regime")
    return probe.g_s**2 / probe.delta_s


def classify_phase(p: DickeParams, tol: float = CRITICAL_TOLERANCE) -> PhaseLabel:
    g_c = critical_coupling(p)
    if p.g < g_c * (1.0 - tol):
        return PhaseLabel.NORMAL
    if p.g > g_c * (1.0 + tol):
        return PhaseLabel.SUPER_RADIANT
    return PhaseLabel.CRITICAL


def shifted_params(p: DickeParams, branch) -> DickeParams:
    """Parameters of the conditional Hamiltonian for one probe state.

    The ground branch sees the cavity at ``omega - delta_tilde``, the
    excited branch at ``omega + delta_tilde``. The returned record carries
    ``delta_tilde=0``.
    """
    branch = Branch(branch)
    if branch is Branch.GROUND:
        omega = p.omega - p.delta_tilde
    else:
        omega = p.omega + p.delta_tilde
    if omega <= 0:
        raise InvalidShift(f"shifted cavity frequency {omega} is not positive")
    return dataclasses.replace(p, omega=omega, delta_tilde=0.0)
