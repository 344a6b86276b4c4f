"""Supersymmetric vector coherent states: exact operator algebra, truncated
Fock models, moment measures, frame checks and the Landau-type examples."""

from .checks import Check
from .spectra import EnergySequence
from .measures import RadialMeasure, landau_measure, oscillator_measure
from .nnls import MomentFitter, fit_measure
from .vcs import VcsFamily, frame_operator, normalization, state_vector

__version__ = "0.1.0"

__all__ = [
    "Check",
    "EnergySequence",
    "RadialMeasure",
    "landau_measure",
    "oscillator_measure",
    "MomentFitter",
    "fit_measure",
    "VcsFamily",
    "frame_operator",
    "normalization",
    "state_vector",
]
