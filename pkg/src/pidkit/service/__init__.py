"""HTTP service wrapping the core package.

Run it with uvicorn:

    uvicorn --factory pidkit.service:create_app
"""

from .app import create_app

__all__ = ["create_app"]
