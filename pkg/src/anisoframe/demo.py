"""Synthetic cartoon benchmark: directional versus separable thresholding.

The test image is two smooth regions separated by a circle, periodic on the
torus so no artificial frame edges enter.  Both transforms are tight, so
best n-term selection is plain coefficient thresholding; the directional
error needs a synthesis pass (the frame is redundant), the separable
baseline error is just the discarded energy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frame import ShearletSystem2D, analyze, grid_norm2, synthesize


def cartoon_image(n: int, radius: float = 0.25) -> np.ndarray:
    """Disk with smooth polynomial shading over a smooth periodic background."""
    x = (np.arange(n) + 0.5) / n
    X, Y = np.meshgrid(x, x, indexing="ij")
    background = 0.35 + 0.15 * np.sin(2 * np.pi * X) * np.sin(2 * np.pi * Y)
    r2 = (X - 0.5) ** 2 + (Y - 0.5) ** 2
    inside = r2 < radius ** 2
    shade = (1.0 - r2 / radius ** 2) ** 2
    img = background.copy()
    img[inside] += 0.15 + 0.35 * shade[inside]
    return img


# ---------------------------------------------------------------------------
# separable orthonormal baseline
# ---------------------------------------------------------------------------

def haar2d(f: np.ndarray) -> np.ndarray:
    """Full multiresolution orthonormal Haar coefficients (periodic, square)."""
    a = np.asarray(f, dtype=float).copy()
    n = a.shape[0]
    if a.shape != (n, n) or n & (n - 1):
        raise ValueError("need a square power-of-two grid")
    size = n
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    while size > 1:
        block = a[:size, :size]
        avg = (block[0::2, :] + block[1::2, :]) * inv_sqrt2
        dif = (block[0::2, :] - block[1::2, :]) * inv_sqrt2
        block[:] = np.vstack([avg, dif])
        avg = (block[:, 0::2] + block[:, 1::2]) * inv_sqrt2
        dif = (block[:, 0::2] - block[:, 1::2]) * inv_sqrt2
        block[:] = np.hstack([avg, dif])
        size //= 2
    return a


def haar_nterm_errors(f: np.ndarray, budgets) -> list[float]:
    """Squared L2 error of best n-term Haar approximation per budget."""
    n = f.shape[0]
    coeffs = np.sort(np.abs(haar2d(f)).ravel())[::-1]
    energy = coeffs ** 2
    total = float(np.sum(energy))
    prefix = np.concatenate([[0.0], np.cumsum(energy)])
    out = []
    for b in budgets:
        kept = min(int(b), len(energy))
        out.append(max(total - float(prefix[kept]), 0.0) / (n * n))
    return out


# ---------------------------------------------------------------------------
# directional thresholding curve
# ---------------------------------------------------------------------------

def shearlet_nterm_errors(f: np.ndarray, system: ShearletSystem2D,
                          budgets) -> list[float]:
    """Squared L2 error of n-term directional approximation per budget."""
    coeffs = analyze(f, system)
    flat = np.concatenate([arr.ravel() for arr in coeffs.data.values()])
    order = np.argsort(np.abs(flat))[::-1]
    out = []
    for b in budgets:
        kept = min(int(b), flat.size)
        mask_flat = np.zeros(flat.size, dtype=bool)
        mask_flat[order[:kept]] = True
        pos = 0
        kept_coeffs = coeffs.copy()
        for band in system.bands:
            arr = kept_coeffs.data[band.key()]
            m = mask_flat[pos:pos + arr.size].reshape(arr.shape)
            arr[~m] = 0.0
            pos += arr.size
        rec = synthesize(kept_coeffs).real
        out.append(grid_norm2(f - rec))
    return out


@dataclass
class DecayReport:
    budgets: list
    shear_errors: list
    haar_errors: list
    shear_slope: float
    haar_slope: float
    shear_monotone: bool
    haar_monotone: bool
    full_budget_error: float


def fit_loglog_slope(budgets, errors) -> float:
    xs, ys = [], []
    for b, e in zip(budgets, errors):
        if b > 0 and e > 0:
            xs.append(math.log(b))
            ys.append(math.log(e))
    if len(xs) < 2:
        return 0.0
    return float(np.polyfit(xs, ys, 1)[0])


def decay_demo(n: int = 256, j_max: int = 3, budgets=None,
               image: np.ndarray = None) -> DecayReport:
    """Error-versus-budget curves for the cartoon image.

    Only monotonicity and the full-budget endpoint are contract; the fitted
    slopes are reported for regression pinning, desk-scale grids being far
    from any asymptotic regime.
    """
    system = ShearletSystem2D(n, j_max)
    f = cartoon_image(n) if image is None else image
    if budgets is None:
        budgets = [2 ** k for k in range(5, 14)]
    budgets = list(budgets)
    shear = shearlet_nterm_errors(f, system, budgets)
    haar = haar_nterm_errors(f, budgets)
    coeffs_total = analyze(f, system).total_count()
    full = shearlet_nterm_errors(f, system, [coeffs_total])[0]
    mono = lambda xs: all(xs[i + 1] <= xs[i] * (1 + 1e-12) for i in range(len(xs) - 1))
    return DecayReport(budgets, shear, haar,
                       fit_loglog_slope(budgets, shear),
                       fit_loglog_slope(budgets, haar),
                       mono(shear), mono(haar), full)
