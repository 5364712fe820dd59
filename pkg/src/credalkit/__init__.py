"""credalkit: exact rational machinery for systems of credal sets.

Checks permutation/marginal consistency of a family of credal sets of
finite-dimensional distributions, builds the induced joint set over the
full path space, verifies that its pushforwards reproduce every
prescribed set, and produces exact certificates when anything fails.
All arithmetic is rational; no tolerances anywhere.
"""

from credalkit._backend import kernel_backend

__version__ = "0.1.0"

__all__ = ["__version__", "kernel_backend"]
