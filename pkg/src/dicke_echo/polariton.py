"""Thermodynamic-limit polariton spectra, photon-number variance and echo.

Below the critical coupling the ensemble is two coupled oscillators; above
it the photon and collective spin acquire macroscopic displacements and the
fluctuations about them form a second pair of oscillators. Both are
diagonalized by a Bogoliubov transformation whose photon-sector coefficients
``f1..f4`` fix the ground-state photon statistics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import CriticalPoint, NearCriticalWarning, WrongPhase
from .model import DickeParams, PhaseLabel, classify_phase, critical_coupling

#: Frames closer than this relative distance to g_c are flagged near-critical.
NEAR_CRITICAL_BAND = 1e-2

#: Lower polariton frequency (in units of omega) that triggers a warning.
SOFT_MODE_FLOOR = 1e-6

#: Largest excursion outside [0, 1] silently clamped on an echo value.
CLAMP_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PolaritonFrame:
    phase: PhaseLabel
    omega_minus: float
    omega_plus: float
    theta: float
    f: tuple
    mu: Optional[float] = None
    alpha_disp: float = 0.0
    beta_disp: float = 0.0
    near_critical: bool = False
    condition: float = 1.0
    params: Optional[DickeParams] = field(default=None, compare=False, repr=False)

    @property
    def symplectic_residual(self) -> float:
        """Deviation of ``f1^2 - f2^2 + f3^2 - f4^2`` from one."""
        f1, f2, f3, f4 = self.f
        return (f1 * f1 - f2 * f2 + f3 * f3 - f4 * f4) - 1.0


@dataclass(frozen=True)
class VarianceReport:
    gamma: float
    phase: PhaseLabel
    n_term: float
    fluctuation_term: float
    condition: float = 1.0


@dataclass(frozen=True)
class EchoCurve:
    """Loschmidt echo sampled on a time grid.

    ``method`` is one of ``analytic-gaussian``, ``analytic-characteristic``
    or ``exact``. ``decoherence`` holds the complex overlap D(t) when the
    producer has it.
    """

    times: np.ndarray
    values: np.ndarray
    method: str
    params_snapshot: DickeParams
    decoherence: Optional[np.ndarray] = None
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-D arrays of equal length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValueError("echo values must lie in [0, 1]")
        if self.method not in ("analytic-gaussian", "analytic-characteristic", "exact"):
            raise ValueError(f"unknown echo method {self.method!r}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


def clamp_unit(values):
    """Clamp to [0, 1]; also return the largest excursion that was removed."""
    values = np.asarray(values, dtype=float)
    excursion = float(np.max(np.maximum(values - 1.0, -values), initial=0.0))
    return np.clip(values, 0.0, 1.0), max(excursion, 0.0)


def _bogoliubov_f(omega, omega_minus, omega_plus, theta):
    c, s = math.cos(theta), math.sin(theta)
    root_m = math.sqrt(omega * omega_minus)
    root_p = math.sqrt(omega * omega_plus)
    return (
        0.5 * c * (omega + omega_minus) / root_m,
        0.5 * c * (omega - omega_minus) / root_m,
        0.5 * s * (omega + omega_plus) / root_p,
        0.5 * s * (omega - omega_plus) / root_p,
    )


def _require_phase(p: DickeParams, expected: PhaseLabel):
    phase = classify_phase(p)
    if phase is PhaseLabel.CRITICAL:
        raise CriticalPoint(p.g, critical_coupling(p))
    if phase is not expected:
        raise WrongPhase(f"g={p.g} lies in the {phase} phase, not {expected}")


def _near_critical(p: DickeParams, omega_minus: float) -> bool:
    g_c = critical_coupling(p)
    soft = omega_minus < SOFT_MODE_FLOOR * p.omega
    if soft:
        warnings.warn(
            f"lower polariton frequency {omega_minus:.3e} is below "
            f"{SOFT_MODE_FLOOR:g}*omega at g={p.g}",
            NearCriticalWarning,
            stacklevel=3,
        )
    return soft or abs(p.g / g_c - 1.0) < NEAR_CRITICAL_BAND


def dynamical_matrix(p: DickeParams) -> np.ndarray:
    """Position-space stiffness matrix whose eigenvalues are the squared
    polariton frequencies of the phase ``p`` lies in."""
    w, w0 = p.omega, p.omega0
    if classify_phase(p) is PhaseLabel.SUPER_RADIANT:
        mu = w * w0 / (4.0 * p.g**2)
        return np.array([[w * w, w * w0], [w * w0, (w0 / mu) ** 2]])
    c = 2.0 * p.g * math.sqrt(w * w0)
    return np.array([[w * w, c], [c, w0 * w0]])


def normal_frame(p: DickeParams) -> PolaritonFrame:
    _require_phase(p, PhaseLabel.NORMAL)
    w, w0, g = p.omega, p.omega0, p.g
    mean = 0.5 * (w0 * w0 + w * w)
    half_split = 0.5 * math.sqrt((w0 * w0 - w * w) ** 2 + 16.0 * g * g * w0 * w)
    # cancellation-free lower root: product of the roots is w^2 w0^2 - 4 g^2 w w0
    upper_sq = mean + half_split
    lower_sq = w * w0 * (w * w0 - 4.0 * g * g) / upper_sq
    omega_minus, omega_plus = math.sqrt(lower_sq), math.sqrt(upper_sq)
    theta = 0.5 * math.atan2(4.0 * g * math.sqrt(w * w0), w0 * w0 - w * w)
    f = _bogoliubov_f(w, omega_minus, omega_plus, theta)
    return PolaritonFrame(
        phase=PhaseLabel.NORMAL,
        omega_minus=omega_minus,
        omega_plus=omega_plus,
        theta=theta,
        f=f,
        near_critical=_near_critical(p, omega_minus),
        condition=w / omega_minus,
        params=p,
    )


def super_radiant_frame(p: DickeParams) -> PolaritonFrame:
    _require_phase(p, PhaseLabel.SUPER_RADIANT)
    w, w0, g, n = p.omega, p.omega0, p.g, p.n_atoms
    mu = w * w0 / (4.0 * g * g)
    alpha = g * g * n * (1.0 - mu * mu) / (w * w)
    beta = 0.5 * n * (1.0 - mu)
    stiff = (w0 / mu) ** 2
    mean = 0.5 * (stiff + w * w)
    half_split = 0.5 * math.sqrt((stiff - w * w) ** 2 + 4.0 * w * w * w0 * w0)
    upper_sq = mean + half_split
    # product of the roots is w^2 w0^2 (1/mu^2 - 1)
    lower_sq = w * w * w0 * w0 * (1.0 - mu * mu) / (mu * mu) / upper_sq
    omega_minus, omega_plus = math.sqrt(lower_sq), math.sqrt(upper_sq)
    theta = 0.5 * math.atan2(2.0 * w * w0 * mu * mu, w0 * w0 - mu * mu * w * w)
    f = _bogoliubov_f(w, omega_minus, omega_plus, theta)
    return PolaritonFrame(
        phase=PhaseLabel.SUPER_RADIANT,
        omega_minus=omega_minus,
        omega_plus=omega_plus,
        theta=theta,
        f=f,
        mu=mu,
        alpha_disp=alpha,
        beta_disp=beta,
        near_critical=_near_critical(p, omega_minus),
        condition=w / omega_minus,
        params=p,
    )


def polariton_frame(p: DickeParams) -> PolaritonFrame:
    """Frame for whichever phase ``p`` lies in; raises at the critical point."""
    phase = classify_phase(p)
    if phase is PhaseLabel.NORMAL:
        return normal_frame(p)
    if phase is PhaseLabel.SUPER_RADIANT:
        return super_radiant_frame(p)
    raise CriticalPoint(p.g, critical_coupling(p))


def photon_variance(frame: PolaritonFrame) -> VarianceReport:
    """Ground-state variance of ``a^dag a`` in the polariton vacuum."""
    if frame.phase is PhaseLabel.CRITICAL:
        raise CriticalPoint(float("nan"), float("nan"))
    f1, f2, f3, f4 = frame.f
    fluctuation = 2 * f1**2 * f2**2 + 2 * f3**2 * f4**2 + (f1 * f4 + f2 * f3) ** 2
    n_term = 0.0
    if frame.phase is PhaseLabel.SUPER_RADIANT:
        n_term = frame.alpha_disp * ((f1 + f2) ** 2 + (f3 + f4) ** 2)
    return VarianceReport(
        gamma=n_term + fluctuation,
        phase=frame.phase,
        n_term=n_term,
        fluctuation_term=fluctuation,
        condition=frame.condition,
    )


def ground_state_variance(p: DickeParams) -> float:
    return photon_variance(polariton_frame(p)).gamma


def loschmidt_echo_gaussian(
    p: DickeParams, gamma: float, times: Sequence[float]
) -> EchoCurve:
    """Short-time echo ``exp(-4 gamma delta_tilde^2 t^2)``."""
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    t = np.asarray(times, dtype=float)
    values = np.exp(-4.0 * gamma * p.delta_tilde**2 * t * t)
    return EchoCurve(times=t, values=values, method="analytic-gaussian", params_snapshot=p)


def decay_scaling(p: DickeParams, n_list: Sequence[int]) -> list:
    """``(N, gamma)`` pairs at fixed couplings for each atom number in ``n_list``."""
    _require_phase(p, PhaseLabel.SUPER_RADIANT)
    return [(int(n), ground_state_variance(p.replace(n_atoms=int(n)))) for n in n_list]
