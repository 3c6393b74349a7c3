"""Exact computations in the Picard modular group PU(2,1) over O_7 = Z[(1+i*sqrt(7))/2]."""

__version__ = "0.1.0"
