"""Numerical verification of the density calculus of noncompact harmonic manifolds."""
from __future__ import annotations

__version__ = "0.1.0"

from harmonia.catalog import GrowthType, ModelSpace, SpaceError, classify_growth, growth_exponents, make_space  # noqa: E402

__all__ = ["GrowthType", "ModelSpace", "SpaceError", "classify_growth", "growth_exponents", "make_space",
           "__version__"]
