"""Finite-dimensional dbar-calculus: polynomial data, solvers, norms, condensation."""
from .cauchy import (SliceSolution, cauchy_pompeiu_slice_solve, cauchy_transform_exact,
                     dbar_residual, slice_form, slice_function)
from .condensation import (CondensationSpec, CondensedForm, block_pullback, condense,
                       cylinder_lift, projection_pullback, restrict, synthetic_family,
                       synthetic_member)
from .minsup import (GrowthRow, MinSupResult, ball_grid, growth_csv, growth_row,
                     growth_table, lawson, min_sup_solution)
from .norms import CmNorm, cm_norm, cm_norm_detail
from .poly import (NotClosedError, PolyForm01, PolyFunction, closedness_residuals, dbar,
                   homotopy_solve, is_closed, random_poly)

__all__ = [name for name in dir() if not name.startswith("_")]
