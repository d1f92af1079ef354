"""Multihomogeneous expansions on sums of l_p blocks, Runge certificates,
finite-dimensional dbar experiments and an almost-complex-structure lab."""
from . import acslab, dominate, mhcalc, multiindex, runge, sumspace
from .multiindex import MultiIndex
from .sumspace import SumSpaceSpec, SumVector

__version__ = "0.1.0"
__all__ = ["acslab", "dominate", "mhcalc", "multiindex", "runge", "sumspace",
           "MultiIndex", "SumSpaceSpec", "SumVector", "__version__"]
