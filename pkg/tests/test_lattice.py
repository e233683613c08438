import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_order_two_pairs

from bandscan import lattice
from bandscan.errors import DomainError

SQ2 = math.sqrt(2.0) / 2.0


class TestEnumeration:
    def test_single_shift(self):
        assert lattice.enumerate_candidate_shifts((0, 0, 0.5)) == [(0, 0, 1)]

    def test_generic_vector_has_none(self):
        assert lattice.enumerate_candidate_shifts((0.3, 0.1, 0.2)) == []

    def test_corner_vector(self):
        got = lattice.enumerate_candidate_shifts((0.5, 0.5, 0.5))
        want = sorted(
            [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
        )
        assert got == want

    def test_zero_vector_rejected(self):
        with pytest.raises(DomainError):
            lattice.enumerate_candidate_shifts((0.0, 0.0, 0.0))
        with pytest.raises(DomainError):
            lattice.classify_wavevector((0.0, 0.0, 0.0))

    def test_negative_tolerance_rejected(self):
        with pytest.raises(DomainError):
            lattice.enumerate_candidate_shifts((0, 0, 0.5), tol=-1.0)


class TestClassification:
    def test_order_two(self):
        cls = lattice.classify_wavevector((0, 0, 0.5))
        assert cls.order == 2
        assert cls.shifts == ((0, 0, 1),)

    def test_face_diagonal_is_order_four(self):
        # (1,1,0) also satisfies 2 k.m = |m|^2 here: 2*(0.5+0.5) = 2 = |m|^2
        cls = lattice.classify_wavevector((0.5, 0.5, 0))
        assert cls.order == 4
        assert set(cls.shifts) == {(1, 0, 0), (0, 1, 0), (1, 1, 0)}

    def test_non_exceptional(self):
        assert lattice.classify_wavevector((0.3, 0.1, 0.2)).order == 1

    def test_exact_rational_mode(self):
        cls = lattice.classify_wavevector_exact((0, 0, Fraction(1, 2)))
        assert cls.order == 2 and cls.shifts == ((0, 0, 1),)
        cls = lattice.classify_wavevector_exact(((1, 2), (1, 2), (1, 2)))
        assert cls.order == 8
        # knife edge: a tiny perturbation along m flips the exact predicate
        cls = lattice.classify_wavevector_exact((Fraction(1, 2) + Fraction(1, 10**9), 0, 0))
        assert (1, 0, 0) not in cls.shifts

    def test_exact_matches_float_on_rationals(self, pair_rng):
        for _ in range(50):
            num = pair_rng.integers(-8, 9, size=3)
            den = pair_rng.integers(1, 7)
            if not num.any():
                continue
            kf = num / den
            exact = lattice.classify_wavevector_exact([(int(n), int(den)) for n in num])
            approx = lattice.classify_wavevector(kf)
            assert exact.order == approx.order
            assert exact.shifts == approx.shifts


class TestNu:
    def test_face_center(self):
        assert lattice.nu((0, 0, 0.5), (0, 0, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_hand_values(self):
        # 4*(0.25+0.04) - 1 and 4*(0.25+0.36+0.09) - 1
        assert lattice.nu((0.5, 0.2, 0), (1, 0, 0)) == pytest.approx(0.16, rel=1e-12)
        assert lattice.nu((0.5, 0.6, 0.3), (1, 0, 0)) == pytest.approx(1.8, rel=1e-12)

    def test_violating_pair_rejected(self):
        with pytest.raises(DomainError):
            lattice.nu((0.3, 0.1, 0.2), (1, 0, 0))

    def test_nonnegative_over_many_pairs(self, pair_rng):
        pairs = random_order_two_pairs(pair_rng, 10_000, ratio_band=0.0)
        nus = [lattice.nu(k0, m0) for k0, m0, _ in pairs]
        assert min(nus) >= -1e-12


class TestGapAdmissible:
    def test_gap_predicted(self):
        adm = lattice.gap_admissible((0.5, 0.2, 0), (1, 0, 0))
        assert adm.verdict is lattice.Verdict.GAP_PREDICTED
        assert adm.ratio == pytest.approx(math.sqrt(0.29), rel=1e-12)

    def test_no_gap(self):
        adm = lattice.gap_admissible((0.5, 0.6, 0.3), (1, 0, 0))
        assert adm.verdict is lattice.Verdict.NO_GAP
        assert adm.ratio == pytest.approx(math.sqrt(0.7), rel=1e-12)

    def test_boundary_excluded(self):
        # |k0|^2 = 0.5 with the plane condition for (1,0,0) and order two
        k0 = (0.5, 0.3, 0.4)
        assert lattice.classify_wavevector(k0).order == 2
        adm = lattice.gap_admissible(k0, (1, 0, 0))
        assert adm.verdict is lattice.Verdict.BOUNDARY_EXCLUDED

    def test_higher_order_excluded(self):
        adm = lattice.gap_admissible((0.5, 0.5, 0), (1, 0, 0))
        assert adm.verdict is lattice.Verdict.HIGHER_ORDER_EXCLUDED

    def test_non_exceptional_rejected(self):
        with pytest.raises(DomainError):
            lattice.gap_admissible((0.3, 0.1, 0.2), (1, 0, 0))

    def test_gap_iff_nu_below_one(self, pair_rng):
        band = 1e-6
        for k0, m0, ratio in random_order_two_pairs(pair_rng, 300):
            adm = lattice.gap_admissible(k0, m0, exclusion_band=band)
            if adm.verdict is lattice.Verdict.BOUNDARY_EXCLUDED:
                continue
            predicted = adm.verdict is lattice.Verdict.GAP_PREDICTED
            assert predicted == (adm.nu < 1.0)
            assert predicted == (ratio < SQ2)


coord = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.tuples(coord, coord, coord))
    def test_cubic_equivariance(self, k):
        if np.linalg.norm(k) < 1e-3:
            return
        base = lattice.classify_wavevector(k)
        for P in lattice.cubic_symmetries():
            mapped = lattice.classify_wavevector(P @ np.asarray(k))
            assert mapped.order == base.order
            want = sorted(tuple(int(c) for c in P @ np.asarray(m)) for m in base.shifts)
            assert list(mapped.shifts) == want

    @settings(max_examples=60, deadline=None)
    @given(st.tuples(coord, coord, coord))
    def test_enumeration_box_is_exhaustive(self, k):
        kv = np.asarray(k)
        norm = np.linalg.norm(kv)
        if norm < 1e-3:
            return
        tol = lattice.DEFAULT_TOL
        inside = set(lattice.enumerate_candidate_shifts(kv, tol))
        big = math.ceil(4.0 * norm) + 2
        brute = set()
        rng = np.arange(-big, big + 1)
        M = np.stack(np.meshgrid(rng, rng, rng, indexing="ij"), -1).reshape(-1, 3)
        m2 = np.sum(M * M, axis=1)
        ok = m2 > 0
        resid = np.abs(2.0 * (M[ok] @ kv) - m2[ok]) <= tol * np.maximum(1.0, m2[ok])
        for m in M[ok][resid]:
            brute.add(tuple(int(c) for c in m))
        assert brute == inside


@pytest.fixture(scope="module")
def fmap():
    return lattice.face_gap_region((0, 0, 1), samples=101)

class TestFaceGapRegion:
    def _flag(self, fmap, t1, t2):
        i = int(round((t1 + 1.0) / 0.02))
        j = int(round((t2 + 1.0) / 0.02))
        return bool(fmap.flagged[i, j])

    def test_center_inside(self, fmap):
        assert self._flag(fmap, 0.0, 0.0)

    def test_disk_points(self, fmap):
        assert self._flag(fmap, 0.2, 0.1)  # 0.05 < 0.25
        assert not self._flag(fmap, 0.41, 0.31)  # 0.2642 > 0.25
        assert not self._flag(fmap, 0.5, 0.5)

    def test_flagged_set_is_the_disk(self, fmap):
        T1, T2 = np.meshgrid(fmap.t1, fmap.t2, indexing="ij")
        r2 = T1**2 + T2**2
        # strict interior/exterior pixels must match; the circle itself may
        # land either way within one pixel
        pix = 0.02 * math.sqrt(2.0)
        interior = r2 < (0.5 - pix) ** 2
        exterior = r2 > (0.5 + pix) ** 2
        assert fmap.flagged[interior].all()
        assert not fmap.flagged[exterior].any()

    def test_area_conventions(self, fmap):
        assert fmap.flagged_area() == pytest.approx(math.pi / 4.0, rel=0.03)
        assert fmap.flagged_fraction() == pytest.approx(math.pi / 16.0, rel=0.03)

    def test_other_axes_match(self):
        a = lattice.face_gap_region((0, 0, 1), samples=41)
        b = lattice.face_gap_region((0, 1, 0), samples=41)
        c = lattice.face_gap_region((-1, 0, 0), samples=41)
        assert int(a.flagged.sum()) == int(b.flagged.sum()) == int(c.flagged.sum())

    def test_bad_input(self):
        with pytest.raises(DomainError):
            lattice.face_gap_region((0, 0, 0))
        with pytest.raises(DomainError):
            lattice.face_gap_region((0, 0, 1), samples=1)
