"""Gravity-capillary water waves in holomorphic coordinates: spectral solver,
paradifferential diagnostics, normal-form symbols and modified energies."""

__version__ = "0.1.0"
