"""Pulse-level simulation of holonomic and two-photon gates on a driven transmon qutrit."""

from holoqutrit.dynamics import DecoherenceParams, TimeGrid, propagate_lindblad, propagate_unitary
from holoqutrit.holonomy import GateSpec, ab_from_angles, holonomic_unitary2, holonomic_unitary3
from holoqutrit.pulseshape import Envelope, ScalingPair, Transition, calibrate_2pi

__version__ = "0.1.0"

__all__ = [
    "DecoherenceParams", "Envelope", "GateSpec", "ScalingPair", "TimeGrid", "Transition",
    "ab_from_angles", "calibrate_2pi", "holonomic_unitary2", "holonomic_unitary3",
    "propagate_lindblad", "propagate_unitary", "__version__",
]
