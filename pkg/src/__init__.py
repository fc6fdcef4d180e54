"""Stochastic 3D Navier-Stokes regularity engine"""

__version__ = "1.0.0"
