"""Loschmidt-echo sensitivity of the Dicke model near its critical point."""

__version__ = "0.1.0"

from .exceptions import (
    CriticalPoint,
    CutoffTooSmall,
    DickeError,
    InvalidParameters,
    InvalidShift,
    NearCriticalWarning,
    NoConvergence,
    RegimeViolation,
    StepTooLarge,
    WrongPhase,
)
from .model import (
    Branch,
    DickeParams,
    PhaseLabel,
    ProbeAtom,
    classify_phase,
    critical_coupling,
    dispersive_shift,
    shifted_params,
)
from .polariton import (
    EchoCurve,
    PolaritonFrame,
    VarianceReport,
    decay_scaling,
    dynamical_matrix,
    ground_state_variance,
    loschmidt_echo_gaussian,
    normal_frame,
    photon_variance,
    polariton_frame,
    super_radiant_frame,
)
from .estimators import ExactEcho, PolaritonEcho

__all__ = [
    "Branch",
    "CriticalPoint",
    "CutoffTooSmall",
    "DickeError",
    "DickeParams",
    "EchoCurve",
    "ExactEcho",
    "InvalidParameters",
    "InvalidShift",
    "NearCriticalWarning",
    "NoConvergence",
    "PhaseLabel",
    "PolaritonEcho",
    "PolaritonFrame",
    "ProbeAtom",
    "RegimeViolation",
    "StepTooLarge",
    "VarianceReport",
    "WrongPhase",
    "classify_phase",
    "critical_coupling",
    "decay_scaling",
    "dispersive_shift",
    "dynamical_matrix",
    "ground_state_variance",
    "loschmidt_echo_gaussian",
    "normal_frame",
    "photon_variance",
    "polariton_frame",
    "shifted_params",
    "super_radiant_frame",
]
