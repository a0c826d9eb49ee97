"""Exact tensor calculus on parallelizable charts, deformation cohomology of
local Lie groups, and gauge deformations."""

from .poly import Poly, ParseError
from .jets import TJet
from .tensor import TensorField

__version__ = "0.1.0"

__all__ = ["Poly", "ParseError", "TJet", "TensorField", "__version__"]
