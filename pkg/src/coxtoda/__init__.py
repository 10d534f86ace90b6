"""coxtoda: exact-arithmetic toolkit for Coxeter-Toda lattices.

Bidiagonal factorizations of Coxeter double Bruhat cells, planar-network
boundary measurements, Hankel-determinant inversion of the moment map,
cluster charts with their transport moves, Toda flows, and the
Backlund-Darboux maps connecting the charts.
"""

from ._kern import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"
__all__ = ["KERNEL_BACKEND", "__version__"]
