"""Generalized quadrangles, Kantor families, elation groups and STGQ properties."""

from .geometry import IncidenceGeometry, Order, verify_gq

__version__ = "0.1.0"

__all__ = ["IncidenceGeometry", "Order", "verify_gq", "__version__"]
