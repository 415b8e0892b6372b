"""Band-limited cone-adapted frame on the 2-D discrete torus.

The frequency plane is split into two cones plus a low-frequency patch.  Each
band (cone, j, l) carries the window product evaluated on the sheared,
parabolically dilated argument; the two atoms per scale sitting on the
diagonal seam are glued from both cones' formulas so the squared spectra sum
to one without cutoff functions.  Analysis multiplies the spectrum by a band
and samples the result on that band's translate lattice; synthesis is the
exact adjoint, and the two compose to the identity on the resolvable
frequency range.

Scaling conventions: lattice frequencies m are integers in [-N/2, N/2); the
windows are evaluated at m / c with c = N / 4**j_max, so the finest scale
reaches the Nyquist square.  With ``close_top`` the finest radial window
keeps the value 1 out to Nyquist and the system is tight on the whole grid;
without it the plane above |m| = c 4**j_max / 4 is left uncovered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .indices import COARSE, CONE, ShearIndex, coarse_index, cone_index
from .windows import Window1D, build_windows


@dataclass(frozen=True)
class Band:
    """One frequency band of the system with its translate lattice."""

    kind: str            # 'coarse' | 'cone' | 'seam'
    cone: int            # 1 or 2 (seam bands are indexed on cone 1)
    j: int
    l: int
    spectrum: np.ndarray          # real N x N window samples
    rows: np.ndarray              # lattice grid rows, shape (K1, K2)
    cols: np.ndarray              # lattice grid cols, shape (K1, K2)
    K1: int
    K2: int

    @property
    def n_translates(self) -> int:
        return self.K1 * self.K2

    def key(self):
        if self.kind == "coarse":
            return ("coarse",)
        return (self.cone, self.j, self.l)


class ShearletSystem2D:
    """Tight frame of sheared band-limited atoms on the N x N torus."""

    def __init__(self, n: int, j_max: int, order: int = 3,
                 close_top: bool = True):
        if n & (n - 1) or n <= 0:
            raise ValueError("grid size must be a power of two")
        if j_max < 0:
            raise ValueError("j_max must be nonnegative")
        c, rem = divmod(n, 4 ** j_max)
        if rem or c < 4:
            raise ValueError(
                f"j_max={j_max} too deep for n={n}: need 4**j_max <= n/4 so every "
                "band fits the Nyquist square")
        self.n = n
        self.j_max = j_max
        self.base = c
        self.order = order
        self.close_top = close_top
        self.windows: Window1D = build_windows(order)

        m = np.fft.fftfreq(n, 1.0 / n)
        self._m1 = m[:, None]
        self._m2 = m[None, :]
        self.bands: list[Band] = []
        self._build_bands()
        self._band_by_key = {b.key(): b for b in self.bands}

    # -- construction -------------------------------------------------------

    def _radial(self, axis_freq, j: int) -> np.ndarray:
        w = self.windows
        arg = axis_freq / (self.base * 4.0 ** j)
        if self.close_top and j == self.j_max:
            return w.radial_top(arg)
        return w.radial(arg)

    def _cone_window(self, cone: int, j: int, l: int) -> np.ndarray:
        """Window product on the lattice for one cone; zero off the cone axis."""
        w = self.windows
        a = self._m1 if cone == 1 else self._m2
        b = self._m2 if cone == 1 else self._m1
        rad = self._radial(a, j)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(a != 0, b / np.where(a != 0, a, 1.0), 0.0)
        ang = w.angular((2.0 ** j) * ratio - l)
        return np.where(a != 0, rad * ang, 0.0)

    def _seam_window(self, j: int, l: int) -> np.ndarray:
        near1 = np.abs(self._m2) <= np.abs(self._m1)
        return np.where(near1, self._cone_window(1, j, l),
                        self._cone_window(2, j, l))

    def _lattice(self, cone: int, j: int, l: int):
        """Grid positions of the translate lattice for a (cone, j, l) band."""
        c, n = self.base, self.n
        ka = np.arange(c * 4 ** j)
        kb = np.arange(c * 2 ** j)
        step_a = n // (c * 4 ** j)   # along the cone axis
        step_b = n // (c * 2 ** j)
        if cone == 1:
            k1 = ka[:, None]
            k2 = kb[None, :]
            rows = ((k1 - l * k2) * step_a) % n
            cols = (k2 * step_b) % n
            return rows, np.broadcast_to(cols, rows.shape).copy(), len(ka), len(kb)
        k1 = kb[:, None]
        k2 = ka[None, :]
        cols = ((k2 - l * k1) * step_a) % n
        rows = (k1 * step_b) % n
        return np.broadcast_to(rows, cols.shape).copy(), cols, len(kb), len(ka)

    def _build_bands(self):
        square_sum = np.zeros((self.n, self.n))
        cone_bands = []
        for j in range(self.j_max + 1):
            bound = 2 ** j
            for cone in (1, 2):
                for l in range(-(bound - 1), bound):
                    W = self._cone_window(cone, j, l)
                    cone_bands.append(("cone", cone, j, l, W))
                    square_sum += W * W
            for l in (-bound, bound):
                W = self._seam_window(j, l)
                cone_bands.append(("seam", 1, j, l, W))
                square_sum += W * W

        # low-frequency complement, confined to the block where the cone
        # coverage has not yet risen to one
        c = self.base
        lowpass = np.sqrt(np.clip(1.0 - square_sum, 0.0, None))
        patch = (np.abs(self._m1) < c / 8) & (np.abs(self._m2) < c / 8)
        lowpass = np.where(patch, lowpass, 0.0)
        kc = np.arange(c)
        rows = (kc[:, None] * (self.n // c)) % self.n
        cols = (kc[None, :] * (self.n // c)) % self.n
        rows = np.broadcast_to(rows, (c, c)).copy()
        cols = np.broadcast_to(cols, (c, c)).copy()
        self.bands.append(Band("coarse", 0, 0, 0, lowpass, rows, cols, c, c))

        for kind, cone, j, l, W in cone_bands:
            rows, cols, K1, K2 = self._lattice(cone, j, l)
            self.bands.append(Band(kind, cone, j, l, W, rows, cols, K1, K2))

    # -- queries -------------------------------------------------------------

    def band(self, key) -> Band:
        return self._band_by_key[key]

    def band_spectrum(self, cone: int, j: int, l: int) -> np.ndarray:
        """Window samples of a band; the two diagonal shears are the glued
        atoms shared by both cones and live under cone 1."""
        if abs(l) == 2 ** j:
            if cone != 1:
                raise KeyError("diagonal bands are indexed on cone 1")
            return self._band_by_key[(1, j, l)].spectrum
        return self._band_by_key[(cone, j, l)].spectrum

    @property
    def resolvable_bound(self) -> int:
        """Sup-norm frequency bound on which the squared spectra sum to one."""
        if self.close_top:
            return self.n // 2
        return self.base * 4 ** self.j_max // 4

    def resolvable_mask(self) -> np.ndarray:
        r = self.resolvable_bound
        if self.close_top:
            return np.ones((self.n, self.n), dtype=bool)
        return (np.abs(self._m1) <= r) & (np.abs(self._m2) <= r)

    def frequency_grids(self):
        return (np.broadcast_to(self._m1, (self.n, self.n)),
                np.broadcast_to(self._m2, (self.n, self.n)))

    # -- index bookkeeping ----------------------------------------------------

    def index_of(self, band: Band, k1: int, k2: int) -> ShearIndex:
        if band.kind == "coarse":
            return coarse_index((k1, k2))
        return cone_index(band.cone, band.j, band.l, (k1, k2))

    def canonical_slot(self, idx: ShearIndex):
        """Map an index with arbitrary integer translate onto its band slot."""
        if idx.kind == COARSE:
            band = self._band_by_key[("coarse",)]
            return band, idx.k[0] % band.K1, idx.k[1] % band.K2
        key = (idx.cone, idx.j, idx.l[0])
        if key not in self._band_by_key:
            raise KeyError(
                f"{idx!r} is not a band of this system (diagonal atoms are "
                "indexed on cone 1; scales run 0..j_max)")
        band = self._band_by_key[key]
        l = idx.l[0]
        if band.cone == 1:
            k2 = idx.k[1] % band.K2
            k1 = (idx.k[0] - l * (idx.k[1] - k2)) % band.K1
        else:
            k1 = idx.k[0] % band.K1
            k2 = (idx.k[1] - l * (idx.k[0] - k1)) % band.K2
        return band, k1, k2


class ShearletCoeffs:
    """Dense per-band coefficient arrays produced by the analysis operator."""

    def __init__(self, system: ShearletSystem2D,
                 data: Optional[dict] = None):
        self.system = system
        if data is None:
            data = {b.key(): np.zeros((b.K1, b.K2), dtype=complex)
                    for b in system.bands}
        self.data = data

    def copy(self) -> "ShearletCoeffs":
        return ShearletCoeffs(self.system,
                              {k: v.copy() for k, v in self.data.items()})

    def energy(self) -> float:
        return float(sum(np.sum(np.abs(v) ** 2) for v in self.data.values()))

    def total_count(self) -> int:
        return sum(v.size for v in self.data.values())

    def to_sparse(self, threshold: float = 0.0) -> dict:
        """Finitely supported index-to-amplitude map (drops |c| <= threshold)."""
        out = {}
        for band in self.system.bands:
            arr = self.data[band.key()]
            keep = np.argwhere(np.abs(arr) > threshold)
            for k1, k2 in keep:
                out[self.system.index_of(band, int(k1), int(k2))] = complex(arr[k1, k2])
        return out

    @classmethod
    def from_sparse(cls, system: ShearletSystem2D, seq) -> "ShearletCoeffs":
        coeffs = cls(system)
        for idx, val in seq.items():
            band, k1, k2 = system.canonical_slot(idx)
            coeffs.data[band.key()][k1, k2] += val
        return coeffs


# ---------------------------------------------------------------------------
# grid functions and the transform pair
# ---------------------------------------------------------------------------

def grid_norm2(f: np.ndarray) -> float:
    """Squared discrete L2 norm (1/N^2) sum |f|^2 on the unit torus."""
    n = f.shape[0]
    return float(np.sum(np.abs(f) ** 2)) / (n * n)


def analyze(f: np.ndarray, system: ShearletSystem2D) -> ShearletCoeffs:
    """Frame coefficients of a grid function, band by band."""
    f = np.asarray(f)
    if f.shape != (system.n, system.n):
        raise ValueError(f"grid size {f.shape} does not match system {system.n}")
    F = np.fft.fft2(f)
    out = {}
    for band in system.bands:
        conv = np.fft.ifft2(F * band.spectrum)
        out[band.key()] = conv[band.rows, band.cols] / math.sqrt(band.n_translates)
    return ShearletCoeffs(system, out)


def synthesize(coeffs: ShearletCoeffs,
               system: Optional[ShearletSystem2D] = None) -> np.ndarray:
    """Adjoint of analyze: superposition of the atoms with given amplitudes."""
    system = system or coeffs.system
    acc = np.zeros((system.n, system.n), dtype=complex)
    for band in system.bands:
        arr = coeffs.data.get(band.key())
        if arr is None or not np.any(arr):
            continue
        h = np.zeros((system.n, system.n), dtype=complex)
        h[band.rows, band.cols] = arr
        acc += np.fft.fft2(h) * (band.spectrum / math.sqrt(band.n_translates))
    return np.fft.ifft2(acc) * (system.n * system.n)


def synthesize_sparse(seq, system: ShearletSystem2D) -> np.ndarray:
    return synthesize(ShearletCoeffs.from_sparse(system, seq), system)


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParsevalReport:
    overall: float        # max |1 - sum of squared spectra| on the resolvable set
    interior: float
    seam: float
    beyond: float         # residual above the resolvable range (close_top: 0)

    def __float__(self):
        return self.overall


def parseval_defect(system: ShearletSystem2D) -> ParsevalReport:
    """Pointwise tightness defect of the squared-spectrum partition of unity."""
    total = np.zeros((system.n, system.n))
    for band in system.bands:
        total += band.spectrum ** 2
    defect = np.abs(1.0 - total)
    mask = system.resolvable_mask()
    m1, m2 = system.frequency_grids()
    on_seam = np.abs(np.abs(m1) - np.abs(m2)) == 0
    overall = float(defect[mask].max())
    interior = float(defect[mask & ~on_seam].max())
    seam = float(defect[mask & on_seam].max())
    beyond = float(defect[~mask].max()) if (~mask).any() else 0.0
    return ParsevalReport(overall, interior, seam, beyond)


def random_bandlimited(system: ShearletSystem2D, rng,
                       bound: Optional[int] = None,
                       real: bool = False) -> np.ndarray:
    """Random grid function with spectrum inside the resolvable square."""
    n = system.n
    b = system.resolvable_bound if bound is None else bound
    b = min(b, n // 2 - 1)
    F = np.zeros((n, n), dtype=complex)
    size = (2 * b + 1, 2 * b + 1)
    block = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    sel = np.arange(-b, b + 1)
    F[np.ix_(sel % n, sel % n)] = block
    f = np.fft.ifft2(F) * (n * n)
    if real:
        f = f.real
    return f
