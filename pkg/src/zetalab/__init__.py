"""Desk-scale verification laboratory for mollified moments of zeta.

Subpackages build the concrete objects of the mollified-moment method
(arithmetic coefficient tables, the mollifier polynomial and its predicted
main terms, Dirichlet characters and Gauss sums, the generalised Vaughan
decomposition, critical-line zeros and empirical moments) and verify each
identity numerically or exactly at desk scale.
"""

__version__ = "0.1.0"
