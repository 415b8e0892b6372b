"""Two-space splitting functionals and real-interpolation norm bands.

The splitting functional K(s, t) = inf { ||s-g||_X + t ||g||_Y } is bounded
from above over a threshold family: prefixes and suffixes of the weighted
magnitude order, optionally with a proportional split of the boundary item.
The family's candidate pairs (||s-g||_X, ||g||_Y) make K an exact lower
envelope of affine functions of t, so interpolation integrals reduce to
closed forms per envelope segment plus exact tails, reported as a
lower/upper band from the two step conventions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .spaces import INF, SpaceParams, besov_norm, canonical_weight, lorentz_norm
from .rnla import ApproxParams, approx_space_norm


@dataclass(frozen=True)
class SeqSpace:
    """A named quasi-norm together with an ordering weight for thresholding."""

    name: str
    norm: Callable[[dict], float]
    order_weight: Callable


def besov_space(par: SpaceParams, name: Optional[str] = None) -> SeqSpace:
    u = canonical_weight(par.s, par.p)
    return SeqSpace(name or f"b({par.s},{par.p},{par.q})",
                    lambda c: besov_norm(c, par), u)


def lorentz_space(u, beta: float, p: float, mu: float,
                  name: Optional[str] = None) -> SeqSpace:
    return SeqSpace(name or f"lorentz({p},{mu};{beta})",
                    lambda c: lorentz_norm(c, u, beta, p, mu), u)


def approx_space(err_space: SpaceParams, beta: float, par: ApproxParams,
                 method: str = "exact", name: Optional[str] = None) -> SeqSpace:
    u = canonical_weight(err_space.s, err_space.p)
    return SeqSpace(name or f"A({par.xi},{par.mu})",
                    lambda c: approx_space_norm(c, err_space, beta, par, method),
                    u)


@dataclass(frozen=True)
class SpacePair:
    X: SeqSpace
    Y: SeqSpace

    def swap(self) -> "SpacePair":
        return SpacePair(self.Y, self.X)


# ---------------------------------------------------------------------------
# threshold splitting family
# ---------------------------------------------------------------------------

def _threshold_orders(s: dict, pair: SpacePair):
    """Magnitude and weight-ratio orderings, symmetric in the two spaces."""
    wx, wy = pair.X.order_weight, pair.Y.order_weight
    keys = [lambda idx: wx(idx) / wy(idx),
            lambda idx: wy(idx) / wx(idx),
            lambda idx: abs(s[idx]) * wx(idx),
            lambda idx: abs(s[idx]) * wy(idx)]
    orders = []
    for key in keys:
        order = tuple(sorted(s, key=lambda idx: (-key(idx), idx.sort_key())))
        if order not in orders:
            orders.append(order)
    return orders


def split_candidates(s: dict, pair: SpacePair, shrink_steps: int = 0):
    """Candidate pairs (||s-g||_X, ||g||_Y) over threshold splits.

    Every cut set enters with both role assignments and the orderings are
    symmetric in the pair, so the family is closed under complement; that is
    what gives the swap identity K(s,t;X,Y) = t K(s,1/t;Y,X) exactly.
    shrink_steps > 0 additionally splits the cut-boundary item proportionally
    on an evenly spaced grid (also complement-closed).
    """
    cuts = set()
    splits = []
    for order in _threshold_orders(s, pair):
        n = len(order)
        for i in range(n + 1):
            cut = frozenset(order[:i])
            if cut not in cuts:
                cuts.add(cut)
                splits.append((order[:i], order[i:], None, 0.0))
            if shrink_steps and i < n:
                for step in range(1, shrink_steps):
                    splits.append((order[:i], order[i + 1:], order[i],
                                   step / shrink_steps))
    out = []
    for kept, rest, boundary, c in splits:
        for flip in (False, True):
            g_part, h_part = (rest, kept) if flip else (kept, rest)
            cg = (1.0 - c) if flip else c
            g = {idx: s[idx] for idx in g_part}
            h = {idx: s[idx] for idx in h_part}
            if boundary is not None:
                g[boundary] = cg * s[boundary]
                h[boundary] = (1.0 - cg) * s[boundary]
            out.append((pair.X.norm(h), pair.Y.norm(g)))
    return out


def k_functional_upper(s: dict, t: float, pair: SpacePair,
                       family: str = "threshold") -> float:
    """Upper bound on the splitting functional at a single t."""
    shrink = 16 if family == "threshold+shrink" else 0
    if family not in ("threshold", "threshold+shrink"):
        raise ValueError("family must be 'threshold' or 'threshold+shrink'")
    cands = split_candidates(s, pair, shrink)
    val = min(hx + t * hy for hx, hy in cands)
    if shrink:
        val = min(val, _shrink_refine(s, t, pair))
    return val


def _shrink_refine(s: dict, t: float, pair: SpacePair,
                   iters: int = 40) -> float:
    """Golden-section search of the boundary-item split at each cut, run for
    both role assignments so the refinement stays complement-closed."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    best = math.inf
    for order in _threshold_orders(s, pair):
        for i in range(len(order)):
            kept, b, rest = order[:i], order[i], order[i + 1:]
            for flip in (False, True):
                g_part, h_part = (rest, kept) if flip else (kept, rest)
                base_g = {idx: s[idx] for idx in g_part}
                base_h = {idx: s[idx] for idx in h_part}

                def val(c):
                    g = dict(base_g)
                    h = dict(base_h)
                    g[b] = c * s[b]
                    h[b] = (1.0 - c) * s[b]
                    return pair.X.norm(h) + t * pair.Y.norm(g)

                lo, hi = 0.0, 1.0
                x1 = hi - phi * (hi - lo)
                x2 = lo + phi * (hi - lo)
                f1, f2 = val(x1), val(x2)
                for _ in range(iters):
                    if f1 <= f2:
                        hi, x2, f2 = x2, x1, f1
                        x1 = hi - phi * (hi - lo)
                        f1 = val(x1)
                    else:
                        lo, x1, f1 = x1, x2, f2
                        x2 = lo + phi * (hi - lo)
                        f2 = val(x2)
                best = min(best, f1, f2, val(0.0), val(1.0))
    return best


# ---------------------------------------------------------------------------
# envelope form of the K bound and interpolation integrals
# ---------------------------------------------------------------------------

def k_envelope(s: dict, pair: SpacePair, shrink_steps: int = 0):
    """Pareto-prune the candidate pairs; K(t) = min(hx + t hy) over them."""
    cands = split_candidates(s, pair, shrink_steps)
    cands = sorted(set(cands))
    pruned = []
    best_hy = math.inf
    for hx, hy in cands:   # ascending hx
        if hy < best_hy:
            pruned.append((hx, hy))
            best_hy = hy
    return pruned


def envelope_value(env, t: float) -> float:
    return min(hx + t * hy for hx, hy in env)


def _envelope_kinks(env):
    """Breakpoints of the lower envelope of the candidate lines."""
    ts = []
    for i in range(len(env)):
        for j in range(i + 1, len(env)):
            (ax, ay), (bx, by) = env[i], env[j]
            if ay != by:
                t = (bx - ax) / (ay - by)
                if t > 0 and math.isfinite(t):
                    ts.append(t)
    return sorted(ts)


@dataclass(frozen=True)
class InterpBand:
    lower: float
    upper: float

    @property
    def mid(self) -> float:
        return math.sqrt(self.lower * self.upper) if self.lower > 0 else self.upper

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def interp_norm(s: dict, theta: float, q: float, pair: SpacePair,
                family: str = "threshold", grid_ratio: float = 2.0 ** 0.25,
                pad: float = 16.0) -> InterpBand:
    """Band for the (theta, q) interpolation norm built on the K upper bound.

    The candidate envelope makes K piecewise affine, so the two tails (where
    K is exactly linear, resp. constant) integrate in closed form; on the
    kink range a geometric grid brackets the integral with both endpoint
    conventions, which is where the band width comes from.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    shrink = 16 if family == "threshold+shrink" else 0
    env = k_envelope(s, pair, shrink)
    if not env:
        return InterpBand(0.0, 0.0)
    # g = s gives hx = 0; g = 0 gives hy = 0: both are in the family
    zero_hy = [hx for hx, hy in env if hy == 0.0]
    zero_hx = [hy for hx, hy in env if hx == 0.0]
    if not zero_hy or not zero_hx:
        raise ValueError("the split family must contain the trivial splits")
    k_inf = min(zero_hy)      # K(t) for large t
    y_slope = min(zero_hx)    # K(t)/t for small t
    if k_inf == 0.0 or y_slope == 0.0:
        return InterpBand(0.0, 0.0)

    kinks = _envelope_kinks(env)
    t_lo = (kinks[0] if kinks else k_inf / y_slope) / pad
    t_hi = (kinks[-1] if kinks else k_inf / y_slope) * pad

    if q == INF:
        # exact supremum of t^-theta K(t) over the envelope
        sup = 0.0
        ts = [t_lo, t_hi] + kinks
        for t in ts:
            sup = max(sup, t ** (-theta) * envelope_value(env, t))
        for hx, hy in env:
            if hx > 0 and hy > 0:
                t_star = theta * hx / ((1 - theta) * hy)
                val = t_star ** (-theta) * (hx + t_star * hy)
                if val <= envelope_value(env, t_star) * (1 + 1e-12):
                    sup = max(sup, t_star ** (-theta) * envelope_value(env, t_star))
        return InterpBand(sup, sup)

    tq = theta * q
    # exact tails: K = t * y_slope below the first kink, K = k_inf above the last
    lower_tail = (y_slope ** q) * t_lo ** ((1 - theta) * q) / ((1 - theta) * q)
    upper_tail = (k_inf ** q) * t_hi ** (-tq) / tq
    lo_sum = [lower_tail, upper_tail]
    hi_sum = [lower_tail, upper_tail]
    t = t_lo
    while t < t_hi:
        t_next = min(t * grid_ratio, t_hi)
        weight = (t ** (-tq) - t_next ** (-tq)) / tq
        lo_sum.append((envelope_value(env, t) ** q) * weight)
        hi_sum.append((envelope_value(env, t_next) ** q) * weight)
        t = t_next
    return InterpBand(math.fsum(lo_sum) ** (1.0 / q),
                      math.fsum(hi_sum) ** (1.0 / q))


def identical_pair_constant(theta: float, q: float) -> float:
    """Exact value of (integral of [t^-theta min(1,t)]^q dt/t)^(1/q)."""
    if q == INF:
        return 1.0
    return (1.0 / ((1 - theta) * q) + 1.0 / (theta * q)) ** (1.0 / q)


# ---------------------------------------------------------------------------
# interpolation identity verifiers
# ---------------------------------------------------------------------------

@dataclass
class EquivalenceReport:
    theta: float
    q: float
    ratio_lo: float
    ratio_hi: float
    rows: list

    @property
    def band_width(self) -> float:
        return self.ratio_hi / self.ratio_lo if self.ratio_lo > 0 else math.inf


def pair_equivalence(corpus: Iterable[dict], pair: SpacePair,
                     target: SeqSpace, theta: float, q: float,
                     family: str = "threshold") -> EquivalenceReport:
    """Per-element ratio band of the interpolation norm against a target norm."""
    ratio_lo, ratio_hi = math.inf, 0.0
    rows = []
    for s in corpus:
        if not s:
            continue
        band = interp_norm(s, theta, q, pair, family)
        direct = target.norm(s)
        if direct == 0.0:
            continue
        lo = band.lower / direct
        hi = band.upper / direct
        ratio_lo = min(ratio_lo, lo)
        ratio_hi = max(ratio_hi, hi)
        rows.append((len(s), band.lower, band.upper, direct))
    return EquivalenceReport(theta, q, ratio_lo, ratio_hi, rows)


def scheme_interpolation_check(corpus, err_space: SpaceParams, beta: float,
                               xi0: float, mu0: float, xi1: float, mu1: float,
                               theta: float, mu: float,
                               method: str = "exact") -> EquivalenceReport:
    """Interpolating two approximation schemes lands in the predicted scheme:
    the decay exponents combine affinely."""
    pair = SpacePair(approx_space(err_space, beta, ApproxParams(xi0, mu0), method),
                     approx_space(err_space, beta, ApproxParams(xi1, mu1), method))
    xi = (1 - theta) * xi0 + theta * xi1
    target = approx_space(err_space, beta, ApproxParams(xi, mu), method)
    return pair_equivalence(corpus, pair, target, theta, mu)


def block_norm_interpolation_check(corpus, par1: SpaceParams,
                                   par2: SpaceParams, xi0: float, xi1: float,
                                   theta: float) -> EquivalenceReport:
    """Interpolating the identified block-norm spaces of two decay exponents
    lands in the block-norm space of the combined exponent."""
    from .democracy import alpha_exponent
    alpha = alpha_exponent(par1, par2)
    r0 = 1.0 / (xi0 + 1.0 / par1.p)
    r1 = 1.0 / (xi1 + 1.0 / par1.p)
    g0 = par1.s + xi0 * (1.0 - alpha)
    g1 = par1.s + xi1 * (1.0 - alpha)
    xi = (1 - theta) * xi0 + theta * xi1
    r = 1.0 / ((1 - theta) / r0 + theta / r1)
    gamma = par1.s + xi * (1.0 - alpha)
    pair = SpacePair(besov_space(SpaceParams(g0, r0, r0)),
                     besov_space(SpaceParams(g1, r1, r1)))
    target = besov_space(SpaceParams(gamma, r, r))
    return pair_equivalence(corpus, pair, target, theta, r)
