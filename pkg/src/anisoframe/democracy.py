"""Two-sided comparability of unit-atom sums with power-weighted set measures.

For a finite cube family the norm of the sum of normalized unit atoms is
compared against powers of the measure nu_beta.  In the block-norm scale the
comparison is an exact identity; in the integral-norm scale it is a two-sided
band whose constants are existential, so they are calibrated on a seeded
corpus and pinned as a regression.  The pointwise engine behind the band is
the scale-geometric bound on sums of |P|^gamma over cubes containing a point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import (cube_of, extreme_cube_at, measure_nu, measure_of,
                       members_containing, shear_partition_count)
from .indices import IndexSet, ShearIndex, cone_index
from .spaces import SpaceParams, besov_norm, canonical_weight, tl_norm


# ---------------------------------------------------------------------------
# pointwise weighted cover sums
# ---------------------------------------------------------------------------

def s_gamma(gamma_set: Iterable[ShearIndex], gamma_exp: float, x) -> float:
    """Exact sum of |P|^gamma over the members whose cube contains x."""
    hits = members_containing(x, gamma_set)
    return math.fsum(measure_of(idx, gamma_exp) for idx in hits)


def scale_sum_constant(gamma_exp: float, d: int = 2) -> float:
    """Geometric-series bound constant for the covering sum.

    Per scale there are at most (2^{d-1}+1) 2^{j(d-1)} tilings, and summing
    |P_j|^gamma across the dominated scales leaves the geometric factor
    sum_m 2^{-m |(d+1)gamma - (d-1)|}.
    """
    c_d = 2 ** (d - 1) + 1
    expo = (d + 1) * gamma_exp - (d - 1)
    if expo == 0:
        raise ValueError("gamma at the critical exponent (d-1)/(d+1)")
    return c_d / (1.0 - 2.0 ** (-abs(expo)))


@dataclass
class CoverBoundReport:
    gamma_exp: float
    d: int
    case: str                 # 'coarsest' (above critical) or 'finest' (below)
    constant: float
    samples: int
    skipped: int
    max_lower_ratio: float    # max over samples of |P|^gamma / S
    max_upper_ratio: float    # max over samples of S / (C |P|^{gamma-(d-1)/(d+1)})
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def lemma31_check(gamma_set, gamma_exp: float, samples: Sequence,
                  d: int = 2) -> CoverBoundReport:
    """Verify the two-sided pointwise bounds on the weighted cover sum.

    Above the critical exponent (d-1)/(d+1) the reference cube is the
    coarsest member containing x; below it, a finest member.  Both bounds use
    the explicit geometric-series constant; samples with no containing cube
    are skipped and reported.
    """
    critical = (d - 1) / (d + 1)
    if gamma_exp == critical:
        raise ValueError("gamma at the critical exponent")
    case = "coarsest" if gamma_exp > critical else "finest"
    mode = "largest" if gamma_exp > critical else "smallest"
    const = scale_sum_constant(gamma_exp, d)
    gamma_list = list(gamma_set)
    skipped = 0
    violations = []
    max_lo = 0.0
    max_hi = 0.0
    slack = 1.0 + 1e-12
    for x in samples:
        ref = extreme_cube_at(x, gamma_list, mode)
        if ref is None:
            skipped += 1
            continue
        s_val = s_gamma(gamma_list, gamma_exp, x)
        lower = measure_of(ref, gamma_exp)
        upper = const * measure_of(ref, gamma_exp - critical)
        if not (lower <= s_val * slack and s_val <= upper * slack):
            violations.append((x, lower, s_val, upper))
        max_lo = max(max_lo, lower / s_val)
        max_hi = max(max_hi, s_val / upper)
    return CoverBoundReport(gamma_exp, d, case, const, len(samples) - skipped,
                            skipped, max_lo, max_hi, violations)


# ---------------------------------------------------------------------------
# random cube families
# ---------------------------------------------------------------------------

def random_index_set(rng, size: int, j_max: int = 4, window: int = 8,
                     d: int = 2) -> IndexSet:
    """Seeded random cone-cube family: scales <= j_max, all admissible shears,
    translates such that cubes stay within a window of the given side."""
    picked = set()
    while len(picked) < size:
        j = int(rng.integers(0, j_max + 1))
        cone = int(rng.integers(1, d + 1))
        l = tuple(int(rng.integers(-(2 ** j), 2 ** j + 1)) for _ in range(d - 1))
        half = window // 2
        k = []
        for axis in range(d):
            scale = 4 ** j if axis == cone - 1 else 2 ** j
            k.append(int(rng.integers(-half * scale, half * scale)))
        picked.add(cone_index(cone, j, l, tuple(k)))
    return IndexSet(picked)


def sample_point_in(idx: ShearIndex, rng, grain: int = 64):
    """Exact rational point inside the cube of idx."""
    from fractions import Fraction
    cube = cube_of(idx)
    t = [Fraction(int(rng.integers(0, grain)), grain) for _ in range(idx.d)]
    return tuple(o + sum(t[c] * cube.edges[c][r] for c in range(idx.d))
                 for r, o in enumerate(cube.origin))


# ---------------------------------------------------------------------------
# the two-sided band in the integral-norm scale
# ---------------------------------------------------------------------------

def alpha_exponent(par1: SpaceParams, par2: SpaceParams) -> float:
    return par1.p * (par2.s - 1.0 / par2.p - par1.s + 1.0 / par1.p)


def unit_atom_sum(gamma_set, par2: SpaceParams) -> dict:
    """The sequence sum_P e_P / u_P with u the unit-atom norms of the second
    space."""
    u = canonical_weight(par2.s, par2.p)
    return {idx: 1.0 / u(idx) for idx in gamma_set}


@dataclass
class DemocracyReport:
    size: int
    alpha: float
    norm: float
    nu_lower_root: float      # nu_{alpha + (d-1)/(d+1)}^{1/p1}
    nu_upper_root: float      # nu_{alpha - p1(d-1)/(q1(d+1))}^{1/p1}
    lower_ratio: float        # norm / nu_lower_root  (empirical C)
    upper_ratio: float        # norm / nu_upper_root  (empirical C')


def democracy_ratio(gamma_set, par1: SpaceParams, par2: SpaceParams,
                    d: int = 2) -> DemocracyReport:
    """Norm of the normalized atom sum against both measure powers."""
    if par1.p == par1.q:
        raise ValueError("p1 = q1 has an exact identity; use besov_democracy_exact")
    alpha = alpha_exponent(par1, par2)
    seq = unit_atom_sum(gamma_set, par2)
    norm = tl_norm(seq, par1)
    crit = (d - 1) / (d + 1)
    nu_lo = measure_nu(gamma_set, alpha + crit) ** (1.0 / par1.p)
    nu_hi = measure_nu(gamma_set, alpha - par1.p * crit / par1.q) ** (1.0 / par1.p)
    return DemocracyReport(len(list(gamma_set)), alpha, norm, nu_lo, nu_hi,
                           norm / nu_lo, norm / nu_hi)


def besov_democracy_exact(gamma_set, par1: SpaceParams, par2: SpaceParams,
                          alpha: Optional[float] = None):
    """Exact identity in the block-norm scale: the atom-sum norm equals
    nu_alpha(Gamma)^{1/p1} for alpha = p1[s2 - 1/p2 - s1 + 1/p1]."""
    if alpha is None:
        alpha = alpha_exponent(par1, par2)
    seq = unit_atom_sum(gamma_set, par2)
    norm = besov_norm(seq, SpaceParams(par1.s, par1.p, par1.p))
    nu_root = measure_nu(gamma_set, alpha) ** (1.0 / par1.p)
    defect = abs(norm - nu_root) / max(norm, nu_root, 1e-300)
    return norm, nu_root, defect


# ---------------------------------------------------------------------------
# block families and the admissible-exponent scan
# ---------------------------------------------------------------------------

def block_family(j: int, l: int, n: int, cone: int = 1, d: int = 2) -> IndexSet:
    """n^d adjacent disjoint cubes of one (cone, j, l) tiling."""
    import itertools
    ks = itertools.product(range(n), repeat=d)
    return IndexSet(cone_index(cone, j, (l,) * (d - 1), k) for k in ks)


def block_norm_closed_form(j: int, n: int, par1: SpaceParams,
                           par2: SpaceParams, d: int = 2) -> float:
    """Atom-sum norm of a block family: disjoint same-measure cubes make the
    integral elementary."""
    gamma = par1.q * (par2.s - par1.s - 1.0 / par2.p)
    cube = 2.0 ** (-j * (d + 1))
    return cube ** (gamma / par1.q) * (n ** d * cube) ** (1.0 / par1.p)


@dataclass
class AlphaScanReport:
    alpha_center: float
    window_lo: float          # empirical: below this the lower bound degenerates
    window_hi: float          # empirical: above this the upper bound degenerates
    candidates: list          # (alpha', lower slope, upper slope, admissible)


def converse_alpha_scan(par1: SpaceParams, par2: SpaceParams,
                        j_range=range(0, 5), n: int = 2,
                        candidates: Optional[Sequence[float]] = None,
                        d: int = 2, slope_tol: float = 1e-9) -> AlphaScanReport:
    """Scan measure exponents for which the block-family ratios stay bounded.

    For each candidate the two democracy ratios are evaluated on block
    families across scales and their log-slopes in j fitted; the lower bound
    degenerates (ratio -> 0) when its slope goes negative and the upper bound
    degenerates (ratio -> infinity) when its slope goes positive.
    """
    alpha = alpha_exponent(par1, par2)
    crit = (d - 1) / (d + 1)
    if candidates is None:
        w = crit + par1.p * crit / par1.q
        grid = [alpha + t * w for t in np.linspace(-1.5, 1.5, 25)]
        ends = [alpha - crit, alpha + par1.p * crit / par1.q,
                alpha - par1.p * crit / par1.q, alpha + crit]
        candidates = sorted(set(grid) | set(ends))
    js = np.array(list(j_range), dtype=float)
    norms = np.array([block_norm_closed_form(int(j), n, par1, par2, d)
                      for j in js])
    rows = []
    lo, hi = math.inf, -math.inf
    for a in candidates:
        nu_lo = np.array([measure_nu(block_family(int(j), 0, n, 1, d), a + crit)
                          for j in js]) ** (1.0 / par1.p)
        nu_hi = np.array([measure_nu(block_family(int(j), 0, n, 1, d),
                                     a - par1.p * crit / par1.q)
                          for j in js]) ** (1.0 / par1.p)
        slope_lower = np.polyfit(js, np.log2(norms / nu_lo), 1)[0]
        slope_upper = np.polyfit(js, np.log2(norms / nu_hi), 1)[0]
        admissible = slope_lower >= -slope_tol and slope_upper <= slope_tol
        rows.append((a, float(slope_lower), float(slope_upper), admissible))
        if admissible:
            lo = min(lo, a)
            hi = max(hi, a)
    return AlphaScanReport(alpha, lo, hi, rows)
