"""Bound states of the one-dimensional hydrogen atom with point interactions at the origin."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .connection import (ConnectionParams, Family, SpectralLevel, energy, solve_alpha,
                         spectral_function, spectrum)

__all__ = ["ConnectionParams", "Family", "SpectralLevel", "energy", "solve_alpha",
           "spectral_function", "spectrum", "__version__"]
