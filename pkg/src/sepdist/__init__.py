"""Entanglement distribution with separable three-qubit states (CVDC protocol)."""

from .dur_states import RHO_PRIME, DurParams

__version__ = "0.1.0"

__all__ = ["DurParams", "RHO_PRIME", "__version__"]
