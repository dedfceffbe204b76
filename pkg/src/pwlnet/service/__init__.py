"""HTTP service wrapping the core package."""

from . import schemas
from .handlers import ROUTES

__all__ = ["ROUTES", "schemas"]
