"""HTTP surface: FastAPI app factory and request/response schemas."""

from .app import create_app

__all__ = ["create_app"]
