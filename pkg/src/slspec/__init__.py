"""Eigenvalues of Sturm-Liouville operators with Sobolev (possibly distributional) potentials."""
__version__ = "0.1.0"
