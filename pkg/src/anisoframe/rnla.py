"""Budgeted best-subset approximation of coefficient sequences.

The budget of a kept index set is its power-weighted measure, not its
cardinality; the approximant keeps the original amplitudes on the kept set
(optimal in the monotone block norms used here).  A prefix-greedy heuristic
and an exact branch-and-bound subset search produce error-versus-budget
curves, whose weighted integrals give the approximation-scheme quasi-norms;
on top of those sit the direct and inverse inequality verifiers linking the
curves to weighted rearrangement norms.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .geometry import measure_of
from .indices import COARSE, ShearIndex
from .spaces import (INF, SpaceParams, WeightSeq, besov_norm, canonical_weight,
                     lorentz_norm, weight_at)

EXACT_SUPPORT_CAP = 22


@dataclass(frozen=True)
class ApproxParams:
    """Decay rate and integration exponent of an approximation scheme."""

    xi: float
    mu: float

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError("the decay exponent must be positive")
        if not self.mu > 0:
            raise ValueError("mu must be positive")


@dataclass
class _Instance:
    """Preprocessed knapsack view of a sequence against a p=q block norm."""

    indices: list
    energies: list            # (w_I |s_I|)^r per item, block-separated sign
    masses: list              # nu_beta mass per item
    coarse_flags: list
    r: float
    coarse_total: float
    cone_total: float

    def error(self, kept) -> float:
        """Block norm of the residual after keeping the given item ids."""
        coarse_kept = math.fsum(self.energies[i] for i in kept if self.coarse_flags[i])
        cone_kept = math.fsum(self.energies[i] for i in kept if not self.coarse_flags[i])
        coarse_rem = max(self.coarse_total - coarse_kept, 0.0)
        cone_rem = max(self.cone_total - cone_kept, 0.0)
        return coarse_rem ** (1.0 / self.r) + cone_rem ** (1.0 / self.r)


def _build_instance(s, err_space: SpaceParams, beta: float) -> _Instance:
    if err_space.p != err_space.q:
        raise ValueError("the error space must have p = q (weighted l^r structure)")
    r = err_space.p
    w = canonical_weight(err_space.s, err_space.p)
    indices, energies, masses, flags = [], [], [], []
    for idx in sorted(s):
        a = abs(s[idx])
        if a == 0.0:
            continue
        indices.append(idx)
        energies.append((w(idx) * a) ** r)
        masses.append(measure_of(idx, beta))
        flags.append(idx.kind == COARSE)
    coarse_total = math.fsum(e for e, f in zip(energies, flags) if f)
    cone_total = math.fsum(e for e, f in zip(energies, flags) if not f)
    return _Instance(indices, energies, masses, flags, r, coarse_total, cone_total)


# ---------------------------------------------------------------------------
# greedy and exact subset selection
# ---------------------------------------------------------------------------

def greedy_approximant(s, err_space: SpaceParams, beta: float, t: float):
    """Prefix-greedy kept set under budget t and the exact resulting error.

    Items are ranked by error-reduction per unit budget; the scan stops at
    the first item that would overflow the budget, so kept sets are nested as
    t grows.
    """
    if t < 0:
        raise ValueError("budget must be nonnegative")
    inst = _build_instance(s, err_space, beta)
    order = _greedy_order(inst)
    kept = []
    kept_masses = []
    for i in order:
        # fsum keeps budget accounting identical across item orders
        if math.fsum(kept_masses + [inst.masses[i]]) > t:
            break
        kept.append(i)
        kept_masses.append(inst.masses[i])
    return [inst.indices[i] for i in kept], inst.error(kept)


def _greedy_order(inst: _Instance):
    n = len(inst.indices)
    return sorted(range(n),
                  key=lambda i: (-inst.energies[i] / inst.masses[i],
                                 inst.indices[i].sort_key()))


def sigma_exact(s, err_space: SpaceParams, beta: float, t: float) -> float:
    """Exact best-subset error at budget t via branch and bound.

    Keeping the original amplitudes on the kept set is optimal for monotone
    p=q block norms, so the infimum runs over subsets only; supports beyond
    the cap are rejected in favor of the greedy route.
    """
    if t < 0:
        raise ValueError("budget must be nonnegative")
    inst = _build_instance(s, err_space, beta)
    n = len(inst.indices)
    if n > EXACT_SUPPORT_CAP:
        raise ValueError(
            f"support {n} exceeds the exact-search cap {EXACT_SUPPORT_CAP}; "
            "use the greedy oracle")
    kept = _best_subset(inst, t)
    return inst.error(kept)


def _best_subset(inst: _Instance, t: float):
    """Depth-first search over kept subsets with a take-all-remaining bound.

    Feasibility tests use fsum over the kept masses so that borderline
    budgets are decided exactly as in the unpruned enumeration.
    """
    n = len(inst.indices)
    order = _greedy_order(inst)
    energies = [inst.energies[i] for i in order]
    masses = [inst.masses[i] for i in order]
    coarse = [inst.coarse_flags[order[i]] for i in range(n)]

    best_err = inst.error([])
    best_kept: list = []

    def err_of(coarse_kept, cone_kept):
        return (max(inst.coarse_total - coarse_kept, 0.0) ** (1.0 / inst.r)
                + max(inst.cone_total - cone_kept, 0.0) ** (1.0 / inst.r))

    def dfs(pos, kept, kept_masses, coarse_kept, cone_kept):
        nonlocal best_err, best_kept
        rest = list(range(pos, n))
        # optimistic bound: keep every remaining item regardless of budget
        ck = coarse_kept + math.fsum(energies[i] for i in rest if coarse[i])
        nk = cone_kept + math.fsum(energies[i] for i in rest if not coarse[i])
        if err_of(ck, nk) >= best_err:
            return
        if rest and math.fsum(kept_masses + [masses[i] for i in rest]) <= t:
            err = err_of(ck, nk)
            if err < best_err:
                best_err = err
                best_kept = kept + rest
            return
        if pos == n:
            err = err_of(coarse_kept, cone_kept)
            if err < best_err:
                best_err = err
                best_kept = list(kept)
            return
        if math.fsum(kept_masses + [masses[pos]]) <= t:
            dfs(pos + 1, kept + [pos], kept_masses + [masses[pos]],
                coarse_kept + (energies[pos] if coarse[pos] else 0.0),
                cone_kept + (0.0 if coarse[pos] else energies[pos]))
        dfs(pos + 1, kept, kept_masses, coarse_kept, cone_kept)

    dfs(0, [], [], 0.0, 0.0)
    return [order[i] for i in best_kept]


def sigma_exhaustive(s, err_space: SpaceParams, beta: float, t: float) -> float:
    """Unpruned enumeration over all subsets; the oracle for the exact search."""
    inst = _build_instance(s, err_space, beta)
    n = len(inst.indices)
    best = inst.error([])
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            if math.fsum(inst.masses[i] for i in combo) <= t:
                err = inst.error(list(combo))
                if err < best:
                    best = err
    return best


# ---------------------------------------------------------------------------
# error-versus-budget curves
# ---------------------------------------------------------------------------

@dataclass
class ApproxCurve:
    """Right-continuous nonincreasing step curve of best errors per budget."""

    budgets: np.ndarray       # strictly increasing, starts at 0
    errors: np.ndarray        # errors[i] on [budgets[i], budgets[i+1])
    method: str

    def value_at(self, t: float) -> float:
        if t < 0:
            raise ValueError("budget must be nonnegative")
        pos = int(np.searchsorted(self.budgets, t, side="right")) - 1
        return float(self.errors[pos])

    def quasi_norm(self, par: ApproxParams) -> float:
        """Weighted integral of the curve: closed form piece by piece."""
        xs = np.append(self.budgets, np.inf)
        terms = []
        if par.mu == INF:
            vals = [self.errors[i] * xs[i + 1] ** par.xi
                    for i in range(len(self.errors)) if self.errors[i] > 0]
            return max(vals) if vals else 0.0
        e = par.xi * par.mu
        for i in range(len(self.errors)):
            if self.errors[i] <= 0:
                continue
            if not math.isfinite(xs[i + 1]):
                return math.inf
            terms.append((self.errors[i] ** par.mu) * (xs[i + 1] ** e - xs[i] ** e))
        return (math.fsum(terms) / e) ** (1.0 / par.mu)


def sigma_curve(s, err_space: SpaceParams, beta: float,
                method: str = "greedy") -> ApproxCurve:
    """Evaluate the best-subset error at every budget breakpoint the method
    can distinguish: prefix measures for greedy, all distinct subset measures
    for exact."""
    inst = _build_instance(s, err_space, beta)
    n = len(inst.indices)
    if method == "greedy":
        order = _greedy_order(inst)
        budgets = [0.0]
        errors = [inst.error([])]
        kept = []
        kept_masses = []
        for i in order:
            kept.append(i)
            kept_masses.append(inst.masses[i])
            budgets.append(math.fsum(kept_masses))
            errors.append(inst.error(kept))
        return ApproxCurve(np.array(budgets), np.array(errors), "greedy")
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if n > 16:
        raise ValueError("exact curves are capped at support 16")
    # Pareto frontier over all subsets
    points = []
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            mass = math.fsum(inst.masses[i] for i in combo)
            points.append((mass, inst.error(list(combo))))
    points.sort()
    budgets = [0.0]
    errors = [inst.error([])]
    best = errors[0]
    for mass, err in points:
        if err < best:
            best = err
            if mass == budgets[-1]:
                errors[-1] = err
            else:
                budgets.append(mass)
                errors.append(err)
    return ApproxCurve(np.array(budgets), np.array(errors), "exact")


def approx_space_norm(s, err_space: SpaceParams, beta: float,
                      par: ApproxParams, method: str = "greedy") -> float:
    """Quasi-norm of the approximation scheme built on (err_space, nu_beta)."""
    return sigma_curve(s, err_space, beta, method).quasi_norm(par)


# ---------------------------------------------------------------------------
# direct and inverse inequality verifiers
# ---------------------------------------------------------------------------

@dataclass
class InequalityReport:
    xi: float
    mu: float
    r: float
    beta: float
    jackson_sup: float
    bernstein_sup: float
    per_element: list = field(repr=False, default_factory=list)


def jackson_bernstein_check(corpus: Iterable, par1: SpaceParams,
                            par2: SpaceParams, xi: float, mu: float,
                            beta_side: str = "center",
                            method: str = "exact",
                            d: int = 2) -> InequalityReport:
    """Suprema of the direct (error vs. rearrangement norm) and inverse
    (rearrangement norm vs. full norm on budgeted elements) ratios.

    beta_side picks the measure exponent: 'jackson' and 'bernstein' shift the
    comparability exponent by the respective geometric corrections; 'center'
    (for p1 = q1, where both coincide) uses it unshifted.
    """
    from .democracy import alpha_exponent
    alpha = alpha_exponent(par1, par2)
    crit = (d - 1) / (d + 1)
    if beta_side == "jackson":
        beta = alpha - par1.p * crit / par1.q
    elif beta_side == "bernstein":
        beta = alpha + crit
    elif beta_side == "center":
        beta = alpha
    else:
        raise ValueError("beta_side must be jackson, bernstein or center")
    r = 1.0 / (xi + 1.0 / par1.p)
    u = canonical_weight(par2.s, par2.p)
    err_space = SpaceParams(par1.s, par1.p, par1.p)
    if par1.p != par1.q and method == "exact":
        method = "greedy"

    jackson_sup = 0.0
    bernstein_sup = 0.0
    rows = []
    for s in corpus:
        if not s:
            continue
        curve = sigma_curve(s, err_space, beta, method)
        lorentz = lorentz_norm(s, u, beta, r, mu)
        # sup_t t^xi sigma(t) is attained at piece right endpoints
        tail = max((curve.errors[i] * curve.budgets[i + 1] ** xi
                    for i in range(len(curve.errors) - 1)), default=0.0)
        jx = tail / lorentz if lorentz > 0 else 0.0
        # inverse direction over nested budgeted prefixes of the sequence
        bx = 0.0
        inst = _build_instance(s, err_space, beta)
        order = _greedy_order(inst)
        kept = []
        for i in order:
            kept.append(i)
            prefix = {inst.indices[m]: s[inst.indices[m]] for m in kept}
            t_pref = math.fsum(inst.masses[m] for m in kept)
            full = besov_norm(prefix, err_space)
            ln = lorentz_norm(prefix, u, beta, r, mu)
            if full > 0:
                bx = max(bx, ln / (t_pref ** xi * full))
        jackson_sup = max(jackson_sup, jx)
        bernstein_sup = max(bernstein_sup, bx)
        rows.append((len(s), jx, bx))
    return InequalityReport(xi, mu, r, beta, jackson_sup, bernstein_sup, rows)


def single_atom_ratios(xi: float, mu: float, p1: float) -> tuple[float, float]:
    """Closed-form direct/inverse ratios of a one-atom sequence: the atom's
    weights cancel and only the Lorentz normalization survives."""
    r = 1.0 / (xi + 1.0 / p1)
    if mu == INF:
        return 1.0, 1.0
    return (mu / r) ** (1.0 / mu), (r / mu) ** (1.0 / mu)
