"""noun2verb - probabilistic models of denominal verb comprehension and production."""

__version__ = "1.0.0"
