"""Representer theorems for linear functionals in reproducing kernel Hilbert spaces."""
__version__ = "0.1.0"

from .functionals import (Convolution, DiscreteMeasure, Expectation, PointEval, apply,
                          functional_from_dict, gram_matrix, representer)
from .kernels import (Kernel, KernelExpansion, inner_product, is_psd, kernel_eval, norm,
                      section)
from .optim import InfeasibleError, NumericalError
from .reduction import (HingeLoss, KPCAConstraint, ReducedProblem, ScalarLoss, SquaredLoss,
                        reduce, solve_ivanov, solve_kpca, solve_rls, solve_scalar_family,
                        solve_svm)
from .regularizers import (AnisotropicQuadratic, IndicatorBall, MonotoneTable, Power, Radial,
                           ShiftedNorm, Square, catalogue, characterization_check,
                           check_equal_norm, check_orthogonal_monotonicity,
                           check_ray_monotonicity)
from .theorem_lab import (build_rotation_path, min_n_for_contraction, monotone_chain_check,
                          necessity_probe, representer_span_experiment, sublevel_geometry_probe)
