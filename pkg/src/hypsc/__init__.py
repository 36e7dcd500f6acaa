"""Surface codes on closed tilings: construction, exact distances, matching
decoder simulations, and twist-based logical operations."""

from .surface import CssCode, TiledSurface, derive_code, validate_surface
from .builders import (
    catalog_names,
    from_catalog,
    hyperbolic_45,
    rotated_toric,
    semi_hyperbolic,
    toric,
)

__all__ = [
    "CssCode",
    "TiledSurface",
    "derive_code",
    "validate_surface",
    "catalog_names",
    "from_catalog",
    "hyperbolic_45",
    "rotated_toric",
    "semi_hyperbolic",
    "toric",
]

__version__ = "0.1.0"
