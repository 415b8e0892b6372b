"""Exact geometry of the sheared cube family and its power-weighted measures.

Every cube is the affine image ``A^{-j} B^{[-l]} ([0,1)^d + k)`` of the
half-open unit cube.  All vertex coordinates are dyadic rationals and all
membership decisions are made in exact arithmetic; floats only appear when a
real exponent is applied to a measure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from .indices import CONE, COARSE, IndexSet, ShearIndex

Point = tuple  # tuple of Fraction (or int), length d


# ---------------------------------------------------------------------------
# dilation / shear matrices
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def forward_matrix(cone: int, j: int, l: tuple, d: int):
    """Integer matrix B^[l] A^j mapping a point into unit-cube coordinates."""
    rows = []
    others = [m for m in range(d) if m != cone - 1]
    for i in range(d):
        row = [0] * d
        scale_i = 4 ** j if i == cone - 1 else 2 ** j
        row[i] = scale_i
        if i == cone - 1:
            # shear row: l acts on the remaining coordinates in order
            for pos, m in enumerate(others):
                row[m] = l[pos] * (2 ** j)
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def inverse_matrix(cone: int, j: int, l: tuple, d: int):
    """Exact rational matrix A^{-j} B^{[-l]} (columns are the cube edges)."""
    neg_l = tuple(-x for x in l)
    rows = []
    others = [m for m in range(d) if m != cone - 1]
    for i in range(d):
        den = 4 ** j if i == cone - 1 else 2 ** j
        row = [Fraction(0)] * d
        row[i] = Fraction(1, den)
        if i == cone - 1:
            for pos, m in enumerate(others):
                row[m] = Fraction(neg_l[pos], den)
        rows.append(tuple(row))
    return tuple(rows)


def _matvec(mat, vec):
    return tuple(sum(mi * vi for mi, vi in zip(row, vec)) for row in mat)


# ---------------------------------------------------------------------------
# cubes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cube:
    """Half-open sheared parallelepiped with exact dyadic-rational geometry."""

    origin: tuple
    edges: tuple           # edges[i] is the image of the i-th unit vector
    measure: Fraction
    index: ShearIndex

    @property
    def d(self) -> int:
        return len(self.origin)

    def vertices2d(self):
        """The four vertices in counterclockwise order (d=2 only)."""
        if self.d != 2:
            raise ValueError("vertices2d requires d=2")
        o = self.origin
        e1, e2 = self.edges
        return (o,
                (o[0] + e1[0], o[1] + e1[1]),
                (o[0] + e1[0] + e2[0], o[1] + e1[1] + e2[1]),
                (o[0] + e2[0], o[1] + e2[1]))

    def contains(self, x: Sequence) -> bool:
        """Exact half-open membership, solved from the cube's own edge data."""
        rel = tuple(Fraction(xi) - oi for xi, oi in zip(x, self.origin))
        t = _solve(self.edges, rel)
        return all(0 <= ti < 1 for ti in t)


def _solve(edge_cols, rhs):
    """Solve sum_i t_i * edges[i] = rhs exactly (edges given as columns)."""
    d = len(rhs)
    if d == 2:
        e1, e2 = edge_cols
        det = e1[0] * e2[1] - e1[1] * e2[0]
        t1 = (rhs[0] * e2[1] - rhs[1] * e2[0]) / det
        t2 = (e1[0] * rhs[1] - e1[1] * rhs[0]) / det
        return (t1, t2)
    # small dense Gaussian elimination over Fractions
    a = [[Fraction(edge_cols[c][r]) for c in range(d)] + [Fraction(rhs[r])]
         for r in range(d)]
    for col in range(d):
        piv = next(r for r in range(col, d) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(d):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                for c in range(col, d + 1):
                    a[r][c] -= f * a[col][c]
    return tuple(a[r][d] / a[r][r] for r in range(d))


def cube_of(idx: ShearIndex) -> Cube:
    """The sheared cube addressed by an index (coarse indices give unit cubes)."""
    d = idx.d
    if idx.kind == COARSE:
        origin = tuple(Fraction(ki) for ki in idx.k)
        edges = tuple(tuple(Fraction(1 if i == m else 0) for i in range(d))
                      for m in range(d))
        return Cube(origin, edges, Fraction(1), idx)
    inv = inverse_matrix(idx.cone, idx.j, idx.l, d)
    origin = _matvec(inv, idx.k)
    # columns of the inverse matrix
    edges = tuple(tuple(inv[r][c] for r in range(d)) for c in range(d))
    return Cube(origin, edges, Fraction(1, 2 ** ((d + 1) * idx.j)), idx)


# fast exact membership through the forward map ---------------------------------

def _point_nums(x: Sequence) -> tuple:
    """Common-denominator integer representation (n_1, .., n_d, D) of a point."""
    fr = [Fraction(xi) for xi in x]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return tuple(f.numerator * (den // f.denominator) for f in fr) + (den,)


def index_contains(idx: ShearIndex, x: Sequence) -> bool:
    """Exact membership of x in the cube of idx via the forward shear map."""
    nums = _point_nums(x)
    return _index_contains_nums(idx, nums[:-1], nums[-1])


def _index_contains_nums(idx: ShearIndex, nums, den) -> bool:
    if idx.kind == COARSE:
        return all(ki * den <= ni < (ki + 1) * den
                   for ki, ni in zip(idx.k, nums))
    mat = forward_matrix(idx.cone, idx.j, idx.l, idx.d)
    for row, ki in zip(mat, idx.k):
        y = sum(mij * nj for mij, nj in zip(row, nums))
        if not ki * den <= y < (ki + 1) * den:
            return False
    return True


def members_containing(x: Sequence, gamma: Iterable[ShearIndex]):
    """All indices of the collection whose cube contains x (exact)."""
    nums = _point_nums(x)
    n, den = nums[:-1], nums[-1]
    return [idx for idx in gamma if _index_contains_nums(idx, n, den)]


# ---------------------------------------------------------------------------
# shear bookkeeping
# ---------------------------------------------------------------------------

def enumerate_shears(j: int, d: int = 2) -> Iterator[tuple]:
    """All admissible shear vectors at scale j: the box |l_i| <= 2^j."""
    rng = range(-(2 ** j), 2 ** j + 1)
    return itertools.product(rng, repeat=d - 1)


def shear_partition_count(j: int, d: int = 2) -> int:
    """Number of distinct per-scale tilings of R^d induced at scale j."""
    return 2 ** ((j + 1) * (d - 1)) + 1


# ---------------------------------------------------------------------------
# power-weighted measures
# ---------------------------------------------------------------------------

def measure_nu(gamma: Iterable[ShearIndex], beta: float) -> float:
    """Sum of |Q|^beta over the collection; beta=0 is the counting measure."""
    terms = []
    for idx in gamma:
        j = 0 if idx.kind == COARSE else idx.j
        terms.append(math.pow(2.0, -(idx.d + 1) * j * beta))
    return math.fsum(terms)


def measure_of(idx: ShearIndex, beta: float) -> float:
    j = 0 if idx.kind == COARSE else idx.j
    return math.pow(2.0, -(idx.d + 1) * j * beta)


# ---------------------------------------------------------------------------
# tiling verification
# ---------------------------------------------------------------------------

def cubes_meeting_window(cone: int, j: int, l: tuple, window) -> list[ShearIndex]:
    """Indices in the (cone, j, l) tiling whose cube can meet the window box."""
    from .indices import cone_index
    d = len(window)
    mat = forward_matrix(cone, j, l, d)
    corners = itertools.product(*[(Fraction(lo), Fraction(hi)) for lo, hi in window])
    lo = [None] * d
    hi = [None] * d
    for corner in corners:
        y = _matvec(mat, corner)
        for i in range(d):
            lo[i] = y[i] if lo[i] is None or y[i] < lo[i] else lo[i]
            hi[i] = y[i] if hi[i] is None or y[i] > hi[i] else hi[i]
    ranges = [range(math.floor(lo[i]), math.floor(hi[i]) + 1) for i in range(d)]
    return [cone_index(cone, j, l, k) for k in itertools.product(*ranges)]


def partition_check(cone: int, j: int, l, window, samples_per_unit: int = 4,
                    omit: Iterable[ShearIndex] = ()):
    """Check that the fixed-(cone, j, l) cube family tiles the window exactly.

    Every point of a dyadic sample grid inside the half-open window must lie
    in exactly one cube; membership is decided in exact arithmetic against the
    cube's own vertex data (not against the defining shear map).  Returns
    ``(ok, violations)`` where violations lists offending sample points with
    their coverage counts.
    """
    if isinstance(l, int):
        l = (l,)
    l = tuple(l)
    d = len(window)
    omitted = set(omit)
    candidates = [idx for idx in cubes_meeting_window(cone, j, l, window)
                  if idx not in omitted]
    cubes = {idx: cube_of(idx) for idx in candidates}
    mat = forward_matrix(cone, j, l, d)
    by_k = {idx.k: idx for idx in candidates}

    h = Fraction(1, samples_per_unit)
    axes = []
    for lo, hi in window:
        lo, hi = Fraction(lo), Fraction(hi)
        n = int((hi - lo) / h)
        axes.append([lo + i * h for i in range(n)])

    violations = []
    neighbor_box = list(itertools.product((-2, -1, 0, 1, 2), repeat=d))
    for x in itertools.product(*axes):
        y = _matvec(mat, x)
        k0 = tuple(math.floor(yi) for yi in y)
        hits = []
        for delta in neighbor_box:
            k = tuple(k0i + di for k0i, di in zip(k0, delta))
            idx = by_k.get(k)
            if idx is not None and cubes[idx].contains(x):
                hits.append(idx)
        if len(hits) != 1:
            violations.append((x, tuple(hits)))
    return (not violations), violations


# ---------------------------------------------------------------------------
# extreme-cube queries
# ---------------------------------------------------------------------------

def extreme_cube_at(x: Sequence, gamma, mode: str) -> Optional[ShearIndex]:
    """Coarsest ('largest') or finest ('smallest') member of gamma containing x.

    Ties in the measure are broken by the index total order, which the finest
    cube genuinely needs: several same-scale tilings can contain x at once.
    """
    if mode not in ("largest", "smallest"):
        raise ValueError("mode must be 'largest' or 'smallest'")
    hits = members_containing(x, gamma)
    if not hits:
        return None
    if mode == "largest":
        best_measure = max(idx.measure() for idx in hits)
    else:
        best_measure = min(idx.measure() for idx in hits)
    return min(idx for idx in hits if idx.measure() == best_measure)
