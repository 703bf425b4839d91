"""Bending systems on polygon spaces and their mirror superpotentials.

The package is organised bottom-up:

* :mod:`bendmirror.exactalg` -- rationals and Laurent polynomials
* :mod:`bendmirror.polygoncomb` -- triangulations and flips
* :mod:`bendmirror.clustermirror` -- Pluecker coordinates in cluster charts
* :mod:`bendmirror.polytopes` -- bending and Gelfand-Zeitlin polytopes
* :mod:`bendmirror.diskclasses` -- ladder quivers and disk classes
* :mod:`bendmirror.potentials` -- disk potential assembly
* :mod:`bendmirror.crit` -- critical points and the kappa search
* :mod:`bendmirror.polygonsim` -- polygon configurations in R^3
* :mod:`bendmirror.cli` -- command-line interface
"""

__version__ = "0.1.0"
SCHEMA = "bendmirror/1"
