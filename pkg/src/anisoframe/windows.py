"""Smooth compactly supported frequency windows for the cone-adapted frame.

The radial profile lives on |w| in [1/16, 1/2] and its squares tile dyadic
scale-by-4 dilates; the angular profile lives on [-1, 1] and its squares
tile unit shifts.  Both are built from a polynomial ramp r of configurable
order n (r(t) + r(1-t) = 1, r is C^n at the seams), so the square-sum
identities hold to machine precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def ramp_coefficients(order: int) -> tuple:
    """Coefficients of the normalized incomplete-beta polynomial ramp.

    r(t) = c * integral_0^t u^n (1-u)^n du with c chosen so r(1) = 1; the
    symmetry r(t) + r(1-t) = 1 is exact for the polynomial.
    """
    if order < 1:
        raise ValueError("ramp order must be >= 1")
    n = order
    # r(t) = c * sum_i binom(n,i) (-1)^i t^{n+i+1} / (n+i+1)
    raw = {}
    for i in range(n + 1):
        raw[n + i + 1] = Fraction(math.comb(n, i) * (-1) ** i, n + i + 1)
    total = sum(raw.values())
    coeffs = [Fraction(0)] * (2 * n + 2)
    for power, c in raw.items():
        coeffs[power] = c / total
    return tuple(float(c) for c in coeffs)


def ramp(t, order: int = 3):
    """Evaluate the order-n ramp, clamped to [0, 1] outside the transition."""
    coeffs = ramp_coefficients(order)
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, 0.0, 1.0)
    out = np.zeros_like(tc)
    for c in reversed(coeffs):
        out = out * tc + c
    return out if out.shape else float(out)


@dataclass(frozen=True)
class Window1D:
    """The pair of 1-D profiles (radial, angular) of a given smoothness order."""

    order: int = 3

    # radial profile: support [1/16, 1/2] in |w|, square-sums to 1 across
    # scale-by-4 dilates for |w| >= 1/8
    def radial(self, w):
        a = np.abs(np.asarray(w, dtype=float))
        out = np.zeros_like(a)
        rise = (a >= 1 / 16) & (a < 1 / 8)
        flat = (a >= 1 / 8) & (a <= 1 / 4)
        fall = (a > 1 / 4) & (a < 1 / 2)
        out[rise] = np.sin(0.5 * np.pi * ramp(16 * a[rise] - 1, self.order))
        out[flat] = 1.0
        out[fall] = np.cos(0.5 * np.pi * ramp(4 * a[fall] - 1, self.order))
        return out if out.shape else float(out)

    def radial_top(self, w):
        """Radial profile with the falling edge removed (finest-scale plateau)."""
        a = np.abs(np.asarray(w, dtype=float))
        out = np.zeros_like(a)
        rise = (a >= 1 / 16) & (a < 1 / 8)
        out[rise] = np.sin(0.5 * np.pi * ramp(16 * a[rise] - 1, self.order))
        out[a >= 1 / 8] = 1.0
        return out if out.shape else float(out)

    # angular profile: support [-1, 1], unit-shift squares sum to 1 on [-1, 1]
    def angular(self, w):
        a = np.abs(np.asarray(w, dtype=float))
        out = np.zeros_like(a)
        inside = a < 1
        out[inside] = np.cos(0.5 * np.pi * ramp(a[inside], self.order))
        return out if out.shape else float(out)

    # --- identity diagnostics -------------------------------------------------

    def radial_square_sum(self, w, jmax: int = 60):
        """sum_{j=0..jmax} radial(4^-j w)^2 (equals 1 for |w| >= 1/8)."""
        w = np.asarray(w, dtype=float)
        total = np.zeros_like(w)
        for j in range(jmax + 1):
            total += self.radial(np.ldexp(w, -2 * j)) ** 2
        return total if total.shape else float(total)

    def angular_square_sum(self, w):
        """angular(w-1)^2 + angular(w)^2 + angular(w+1)^2 (equals 1 on [-1,1])."""
        w = np.asarray(w, dtype=float)
        total = self.angular(w - 1) ** 2 + self.angular(w) ** 2 + self.angular(w + 1) ** 2
        return total if total.shape else float(total)

    def sheared_angular_square_sum(self, w, j: int):
        """sum_{|l| <= 2^j} angular(2^j w - l)^2 (equals 1 on [-1,1])."""
        w = np.asarray(w, dtype=float)
        total = np.zeros_like(w)
        for l in range(-(2 ** j), 2 ** j + 1):
            total += self.angular((2 ** j) * w - l) ** 2
        return total if total.shape else float(total)


def build_windows(smoothness_order: int = 3) -> Window1D:
    """Construct the window pair; identities hold to ~1e-15 at all points."""
    return Window1D(order=int(smoothness_order))
