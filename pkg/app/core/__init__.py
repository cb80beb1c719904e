# Core package initialization
"""Core toolkit components.

This module provides configuration, logging, constants and the exception
hierarchy shared by every service.
"""

from app.core.config import settings, Settings

__all__ = ["settings", "Settings"]
