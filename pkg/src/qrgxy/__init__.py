"""Quantum renormalization group analysis of the anisotropic XY model in one and two dimensions."""

__version__ = "0.1.0"

from .errors import AnalysisError, LinalgError, ModelError, QRGError
from .model1d import Couplings

__all__ = ["AnalysisError", "Couplings", "LinalgError", "ModelError", "QRGError", "__version__"]
