"""Support covers, density histograms, uniformity, and integer tiling.

When every level satisfies Phi(n) = p_n the Moran measure is absolutely
continuous; its support can then be approximated from outside by finite
unions of closed rational intervals, its density estimated by exact-atom
histograms, and the tiling of the line by integer translates of the support
checked by sampling.  All interval endpoints stay exact rationals; only the
density values are floating point.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import MoranError, MoranSystem, atoms


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted union of disjoint closed intervals with rational endpoints."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @classmethod
    def from_intervals(cls, pairs: Iterable[tuple]) -> "IntervalUnion":
        """Normalize arbitrary closed intervals: sort and merge touching ones."""
        items = sorted((Fraction(a), Fraction(b)) for a, b in pairs)
        merged: list[list[Fraction]] = []
        for lo, hi in items:
            if hi < lo:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(tuple((lo, hi) for lo, hi in merged))

    def __post_init__(self):
        flat = []
        for lo, hi in self.intervals:
            flat.extend((lo, hi))
        object.__setattr__(self, "_flat", tuple(flat))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def hull(self) -> tuple[Fraction, Fraction]:
        if self.is_empty:
            raise ValueError("empty union has no hull")
        return self.intervals[0][0], self.intervals[-1][1]

    @property
    def total_length(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def contains(self, x) -> bool:
        x = Fraction(x)
        flat = self._flat
        i = bisect_left(flat, x)
        if i == len(flat):
            return False
        # odd index: strictly inside an interval; even: on a left endpoint
        return i % 2 == 1 or flat[i] == x

    def distance_to(self, x) -> Fraction:
        """Distance from a point to the union (0 when contained)."""
        if self.is_empty:
            raise ValueError("empty union")
        x = Fraction(x)
        if self.contains(x):
            return Fraction(0)
        flat = self._flat
        i = bisect_left(flat, x)
        cands = []
        if i > 0:
            cands.append(x - flat[i - 1])
        if i < len(flat):
            cands.append(flat[i] - x)
        return min(cands)

    def translate(self, t) -> "IntervalUnion":
        t = Fraction(t)
        return IntervalUnion(tuple((lo + t, hi + t) for lo, hi in self.intervals))

    def gaps(self) -> list[tuple[Fraction, Fraction]]:
        return [
            (self.intervals[k][1], self.intervals[k + 1][0])
            for k in range(len(self.intervals) - 1)
        ]

    def is_subset_of(self, other: "IntervalUnion") -> bool:
        for lo, hi in self.intervals:
            flat = other._flat
            i = bisect_left(flat, lo)
            if i % 2 == 1:
                k = (i - 1) // 2
            elif i < len(flat) and flat[i] == lo:
                k = i // 2
            else:
                return False
            if hi > other.intervals[k][1]:
                return False
        return True

    def hausdorff_distance(self, other: "IntervalUnion") -> Fraction:
        """Exact Hausdorff distance between two nonempty unions."""

        def directed(a: "IntervalUnion", b: "IntervalUnion") -> Fraction:
            # d(., b) peaks at endpoints of a and at gap midpoints of b
            cands = list(a._flat)
            cands += [
                (lo + hi) / 2 for lo, hi in b.gaps() if a.contains((lo + hi) / 2)
            ]
            return max(b.distance_to(x) for x in cands)

        if self.is_empty or other.is_empty:
            raise ValueError("empty union")
        return max(directed(self, other), directed(other, self))


def support_cover(system: MoranSystem, level: int) -> IntervalUnion:
    """Outer cover of the support: one interval [x, x + R] per level atom.

    R is the exact tail radius sum_{i > level} max(D_i)/P_i, so the cover
    contains the support and shrinks to it as the level grows.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    meas = atoms(system, level)
    r = system.tail_max_sum(level)
    return IntervalUnion.from_intervals((x, x + r) for x in meas.atoms)


@dataclass(frozen=True)
class Histogram:
    """Density estimate over the support hull from exact level atoms."""

    edges: np.ndarray  # bins + 1 edges spanning the support hull
    counts: np.ndarray
    density: np.ndarray  # counts / (atom_count * bin width)
    atom_count: int
    hull: tuple[Fraction, Fraction]

    @property
    def bin_width(self) -> float:
        return float(self.edges[1] - self.edges[0])

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def total_mass(self) -> float:
        return float(self.counts.sum()) / self.atom_count

    @property
    def empty_fraction(self) -> float:
        """Fraction of hull bins carrying no atoms (large for singular mass)."""
        return float(np.mean(self.counts == 0))

    @property
    def sparse_support(self) -> bool:
        """Flags mass concentrating on a thin set; the density estimate then
        diverges with the level instead of converging to a bounded function."""
        return self.empty_fraction > 0.25


def density_histogram(system: MoranSystem, level: int, bins: int) -> Histogram:
    """Histogram density estimate of the level-truncated measure.

    Atoms are exact rationals with equal weight, so bin assignment is exact
    up to float rounding of the positions; the estimate converges weakly to
    the density when the measure is absolutely continuous.  The level should
    be large enough to put a couple dozen atoms in each interior bin.
    """
    if bins < 1:
        raise ValueError("bins must be positive")
    meas = atoms(system, level)
    lo = meas.atoms[0]
    hi = meas.atoms[-1] + system.tail_max_sum(level)
    if hi <= lo:
        raise MoranError("degenerate support: zero bin width")
    counts, edges = np.histogram(
        meas.positions(), bins=bins, range=(float(lo), float(hi))
    )
    q = len(meas.atoms)
    width = (float(hi) - float(lo)) / bins
    return Histogram(edges, counts, counts / (q * width), q, (lo, hi))


def uniformity_check(
    histogram: Histogram | np.ndarray, tol: float, edge_exclude: int = 2
) -> bool:
    """True when all interior bins with positive mass agree within tol.

    Agreement is relative deviation from the mean of those bins.  For an
    absolutely continuous measure a False verdict rules out spectrality,
    since such a spectral measure must be uniform on its support.  Accepts a
    Histogram or a bare density array.
    """
    if isinstance(histogram, Histogram):
        dens = histogram.density
    else:
        dens = np.asarray(histogram, dtype=float)
    if edge_exclude:
        dens = dens[edge_exclude:-edge_exclude]
    dens = dens[dens > 0]
    if dens.size == 0:
        return False
    mean = float(dens.mean())
    return bool(np.max(np.abs(dens - mean)) <= tol * mean)


#: Verdict strings emitted by density_verdict.
VERDICT_SPARSE = "no bounded density detected"
VERDICT_NOT_SPECTRAL = "not spectral by uniformity criterion"
VERDICT_UNIFORM = "uniform on support"


def density_verdict(histogram: Histogram, tol: float = 0.1) -> str:
    """One-line verdict for a density histogram.

    Sparse support means the histogram is diverging rather than estimating a
    bounded density.  A bounded but non-uniform estimate rules out
    spectrality for absolutely continuous measures.
    """
    if histogram.sparse_support:
        return VERDICT_SPARSE
    if not uniformity_check(histogram, tol):
        return VERDICT_NOT_SPECTRAL
    return VERDICT_UNIFORM


def tiling_check(T: IntervalUnion, window: int, samples: int) -> bool:
    """Do integer translates of T cover almost every point exactly once?

    Samples midpoints (2j+1)/(2*samples) of a uniform refinement of [0, 1)
    and counts exact membership of x + k over |k| <= window.  Midpoint
    sampling avoids integer boundary points; an even sample count also
    avoids half-integers, so shared endpoints of exact tilings never double
    count.  The window must reach past the diameter of T.
    """
    if T.is_empty:
        raise ValueError("empty union")
    lo, hi = T.hull
    if window < hi - lo:
        raise ValueError(f"window {window} smaller than diameter {hi - lo}")
    if samples < 1:
        raise ValueError("samples must be positive")
    shifts = range(-window, window + 1)
    for j in range(samples):
        x = Fraction(2 * j + 1, 2 * samples)
        cover = sum(1 for k in shifts if T.contains(x + k))
        if cover != 1:
            return False
    return True
