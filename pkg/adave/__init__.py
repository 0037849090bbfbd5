# adave/__init__.py

"""Motion-adaptive sparse cross-frame attention and two-pass video editing engine."""

__version__ = "0.1.0"
