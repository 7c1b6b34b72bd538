"""Uhlmann-Jozsa fidelity of density matrices."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, validate, fidelity


def fidelity_of(rho, sigma, method="auto", tol=1e-10):
    """Fidelity of two arrays, validating both as density matrices first."""
    return fidelity(validate(rho, tol), validate(sigma, tol), method).value
