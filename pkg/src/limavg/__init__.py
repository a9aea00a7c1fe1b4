"""Long-run average problems for vector addition systems with states."""

__version__ = "0.1.0"
