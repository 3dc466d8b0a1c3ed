"""
Simulation toolkit for learning quantum states and oracles through depolarizing noise.

Submodules: ``pauli`` (symplectic Pauli strings), ``dense`` (small
density-matrix simulator), ``noise``, ``bell`` (exact two-copy Bell
sampling), ``protocols``, ``lemmas``, ``happy``, ``simon`` and ``harness``.
"""
from .bell import MAX_MIXED, BellSample, bell_prob, sample_bell
from .errors import CapacityError, DomainError, NumericalError
from .noise import NoiseModel
from .pauli import PauliString

__all__ = [
    "MAX_MIXED", "BellSample", "CapacityError", "DomainError", "NoiseModel", "NumericalError",
    "PauliString", "bell_prob", "sample_bell",
]
__version__ = "0.1.0"
