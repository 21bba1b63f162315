from fractions import Fraction

import numpy as np
import pytest

from moranspec import (
    IntervalUnion,
    density_histogram,
    density_verdict,
    make_system,
    support_cover,
    tiling_check,
    uniformity_check,
)
from moranspec.density import VERDICT_NOT_SPECTRAL, VERDICT_SPARSE, VERDICT_UNIFORM


class TestIntervalUnion:
    def test_merge_touching(self):
        u = IntervalUnion.from_intervals([(0, 1), (1, 2), (3, 4)])
        assert u.intervals == ((Fraction(0), Fraction(2)),
                               (Fraction(3), Fraction(4)))

    def test_merge_overlapping_unsorted(self):
        u = IntervalUnion.from_intervals([(2, 3), (0, Fraction(5, 2))])
        assert u.intervals == ((Fraction(0), Fraction(3)),)

    def test_contains_boundaries(self):
        u = IntervalUnion.from_intervals([(0, 1), (2, 3)])
        assert u.contains(0) and u.contains(1) and u.contains(Fraction(1, 2))
        assert u.contains(2) and u.contains(3)
        assert not u.contains(Fraction(3, 2)) and not u.contains(4)
        assert not u.contains(-1)

    def test_length_and_hull(self):
        u = IntervalUnion.from_intervals([(0, 1), (2, Fraction(7, 2))])
        assert u.total_length == Fraction(5, 2)
        assert u.hull == (Fraction(0), Fraction(7, 2))

    def test_distance(self):
        u = IntervalUnion.from_intervals([(0, 1), (3, 4)])
        assert u.distance_to(Fraction(1, 2)) == 0
        assert u.distance_to(2) == 1
        assert u.distance_to(Fraction(9, 4)) == Fraction(3, 4)
        assert u.distance_to(5) == 1

    def test_subset(self):
        big = IntervalUnion.from_intervals([(0, 2), (3, 5)])
        small = IntervalUnion.from_intervals([(0, 1), (4, 5)])
        assert small.is_subset_of(big)
        assert not big.is_subset_of(small)

    def test_hausdorff(self):
        a = IntervalUnion.from_intervals([(0, 1)])
        b = IntervalUnion.from_intervals([(0, Fraction(1, 2)),
                                          (Fraction(3, 4), 1)])
        # gap midpoint 5/8 of b is the farthest point of a
        assert a.hausdorff_distance(b) == Fraction(1, 8)
        assert a.hausdorff_distance(a) == 0
        c = IntervalUnion.from_intervals([(0, 1), (2, 3)])
        assert a.hausdorff_distance(c) == 2

    def test_translate(self):
        u = IntervalUnion.from_intervals([(0, 1)])
        assert u.translate(Fraction(1, 3)).intervals == (
            (Fraction(1, 3), Fraction(4, 3)),
        )


class TestSupportCover:
    def test_unit_interval(self, final_system):
        cover = support_cover(final_system, 6)
        target = IntervalUnion.from_intervals([(0, 1)])
        assert cover.hausdorff_distance(target) <= final_system.tail_max_sum(6)

    def test_nonuniform_full_interval(self, nonuniform_system):
        cover = support_cover(nonuniform_system, 6)
        assert cover.intervals == ((Fraction(0), Fraction(13, 4)),)

    def test_single_binary_level(self, dyadic_system):
        # [0, 1/2] + [1/2, 1] merge into the unit interval
        cover = support_cover(dyadic_system, 1)
        assert cover.intervals == ((Fraction(0), Fraction(1)),)

    def test_refinement(self, final_system, nonuniform_system):
        s_cantor = make_system(cycle=[(4, (0, 2))])
        for s in (final_system, nonuniform_system, s_cantor):
            prev = support_cover(s, 1)
            for level in range(2, 7):
                cur = support_cover(s, level)
                assert cur.is_subset_of(prev)
                assert cur.total_length <= prev.total_length
                prev = cur

    def test_cantor_length_shrinks(self):
        s = make_system(cycle=[(4, (0, 2))])
        lengths = [float(support_cover(s, n).total_length) for n in (1, 4, 8)]
        assert lengths[0] > lengths[1] > lengths[2]
        assert lengths[2] < 0.1


class TestHistogram:
    def test_mass_and_plateaus(self, nonuniform_system):
        hist = density_histogram(nonuniform_system, 12, 1024)
        assert hist.total_mass == pytest.approx(1.0, abs=1e-12)
        w = (float(hist.hull[1]) - float(hist.hull[0])) / 1024
        for lo, hi, value in [(0, 0.5, 4 / 27), (1, 1.5, 8 / 27),
                              (1.5, 2.75, 4 / 9)]:
            i0 = int(np.ceil((lo + 2 * w) / w))
            i1 = int((hi - 2 * w) / w)
            mean = float(hist.density[i0:i1].mean())
            assert mean == pytest.approx(value, rel=0.02)

    def test_unit_density(self, final_system):
        hist = density_histogram(final_system, 10, 512)
        inner = hist.density[10:-10]
        assert float(inner.mean()) == pytest.approx(1.0, rel=0.01)
        assert not hist.sparse_support

    def test_density_integrates_to_one(self, final_system, nonuniform_system):
        # unit-weight systems: the estimate must integrate back to 1
        for s, level in ((final_system, 10), (nonuniform_system, 12)):
            hist = density_histogram(s, level, 1024)
            integral = float(np.sum(hist.density) * hist.bin_width)
            assert integral == pytest.approx(1.0, abs=1e-3)
            assert hist.total_mass == pytest.approx(1.0, abs=1e-12)

    def test_cantor_flagged(self):
        s = make_system(cycle=[(4, (0, 2))])
        hist = density_histogram(s, 10, 1024)
        assert hist.sparse_support
        assert hist.empty_fraction > 0.5

    def test_bad_bins(self, final_system):
        with pytest.raises(ValueError):
            density_histogram(final_system, 3, 0)


class TestUniformity:
    def test_nonuniform_false(self, nonuniform_system):
        hist = density_histogram(nonuniform_system, 12, 1024)
        assert not uniformity_check(hist, 0.1)
        assert density_verdict(hist) == VERDICT_NOT_SPECTRAL

    def test_uniform_true(self, final_system):
        hist = density_histogram(final_system, 12, 2048)
        assert uniformity_check(hist, 0.1)
        assert density_verdict(hist) == VERDICT_UNIFORM

    def test_constant_array(self):
        assert uniformity_check(np.full(64, 3.7), 1e-9)

    def test_sparse_verdict(self):
        s = make_system(cycle=[(4, (0, 2))])
        hist = density_histogram(s, 10, 1024)
        assert density_verdict(hist) == VERDICT_SPARSE


class TestTiling:
    def test_unit_interval(self):
        u = IntervalUnion.from_intervals([(0, 1)])
        assert tiling_check(u, 3, 10000)

    def test_long_interval_overcovers(self):
        u = IntervalUnion.from_intervals([(0, Fraction(13, 4))])
        assert not tiling_check(u, 5, 2000)

    def test_split_tile(self):
        u = IntervalUnion.from_intervals([(0, Fraction(1, 2)),
                                          (Fraction(3, 2), 2)])
        assert tiling_check(u, 3, 2000)

    def test_gap_undercovers(self):
        u = IntervalUnion.from_intervals([(0, Fraction(1, 2))])
        assert not tiling_check(u, 2, 500)

    def test_translation_invariance(self):
        u = IntervalUnion.from_intervals([(0, Fraction(1, 2)),
                                          (Fraction(3, 2), 2)])
        for shift in (-3, 1, 7):
            assert tiling_check(u.translate(shift), 3 + abs(shift), 500)

    def test_window_too_small(self):
        u = IntervalUnion.from_intervals([(0, Fraction(13, 4))])
        with pytest.raises(ValueError, match="window"):
            tiling_check(u, 3, 100)

    def test_end_to_end_unit_tile(self, final_system):
        # finite-level orthogonality and the tiling check are the two faces
        # of the same structure for this system
        cover = support_cover(final_system, 8)
        assert tiling_check(cover, 3, 4000)
