"""Numerical lab for classical limits and spontaneous symmetry breaking.

Three exactly buildable models (the double-well Schrodinger operator, the quantum
Curie-Weiss model and the two-site Bose-Hubbard model) are solved at finite hbar or N,
and their coherent-state expectations are compared with the classical limit mixtures.
"""

__version__ = "0.1.0"

from . import classical, errors, experiments, linalg, models, quantize, tensor  # noqa: E402

__all__ = ["classical", "errors", "experiments", "linalg", "models", "quantize", "tensor", "__version__"]
