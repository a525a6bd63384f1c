"""Directed homology bimodules of finite precubical sets, computed exactly."""

__version__ = "0.1.0"
