"""anisoframe: cone-adapted directional frames on the discrete torus, the
sequence spaces they generate, and budgeted nonlinear approximation over
them, with built-in empirical verifiers for the comparability, direct /
inverse inequality and interpolation identities the construction satisfies.
"""

__version__ = "0.1.0"

from .indices import (COARSE, CONE, IndexSet, ShearIndex, coarse_index,
                      cone_index, dump_index_set, load_index_set)
from .geometry import (Cube, cube_of, enumerate_shears, extreme_cube_at,
                       index_contains, measure_nu, measure_of, partition_check,
                       shear_partition_count)
from .windows import Window1D, build_windows
from .frame import (ShearletCoeffs, ShearletSystem2D, analyze, grid_norm2,
                    parseval_defect, random_bandlimited, synthesize,
                    synthesize_sparse)
from .spaces import (SpaceParams, besov_norm, canonical_weight,
                     identification_check, lorentz_norm, tl_norm)
from .democracy import (besov_democracy_exact, converse_alpha_scan,
                        democracy_ratio, lemma31_check, random_index_set,
                        s_gamma)
from .rnla import (ApproxCurve, ApproxParams, approx_space_norm,
                   greedy_approximant, jackson_bernstein_check, sigma_curve,
                   sigma_exact)
from .interpolate import (SpacePair, approx_space, besov_space,
                          interp_norm, k_functional_upper, lorentz_space,
                          pair_equivalence)

__all__ = [name for name in dir() if not name.startswith("_")]
