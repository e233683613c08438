"""Reciprocal-lattice geometry for the cubic cell [-pi, pi]^3.

The reciprocal lattice is Z^3.  A Bloch vector k is *exceptional of order n*
when n lattice points (counting the origin) lie on the sphere of radius |k|
centered at k, i.e. when the plane condition

    2 k . m = |m|^2,   m integer, m != 0,

has n - 1 solutions.  Everything here is elementary integer/vector geometry:
enumeration of the solutions, classification, the gap-geometry parameter

    nu = 4 |k0|^2 / |m0|^2 - 1  (>= 0 by Cauchy-Schwarz),

and the admissibility test: a local gap near omega = c|k0| exists iff
|k0|/|m0| < sqrt(2)/2, equivalently nu < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .errors import DomainError

SQRT_HALF = math.sqrt(2.0) / 2.0

#: Default relative tolerance for the floating-point plane condition.
DEFAULT_TOL = 1e-9

#: Default half-width of the band excluded around |k0|/|m0| = sqrt(2)/2.
DEFAULT_EXCLUSION_BAND = 1e-6


class Verdict(Enum):
    GAP_PREDICTED = "GapPredicted"
    NO_GAP = "NoGap"
    BOUNDARY_EXCLUDED = "BoundaryExcluded"
    HIGHER_ORDER_EXCLUDED = "HigherOrderExcluded"


@dataclass(frozen=True)
class ExceptionalClass:
    """Classification of a Bloch vector: order and the witnessing shifts."""

    order: int
    shifts: tuple[tuple[int, int, int], ...]
    tolerance_used: float

    def __post_init__(self):
        if self.order != 1 + len(self.shifts):
            raise ValueError("order must equal 1 + number of shifts")


@dataclass(frozen=True)
class GapAdmissibility:
    verdict: Verdict
    ratio: float
    nu: float


def as_wavevector(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise DomainError(f"wave vector must have 3 components, got shape {k.shape}")
    if not np.all(np.isfinite(k)):
        raise DomainError("wave vector components must be finite")
    return k


def _require_nonzero(k: np.ndarray) -> float:
    norm = float(np.linalg.norm(k))
    if norm == 0.0:
        raise DomainError("zero wave vector is not classifiable")
    return norm


def as_shift(m) -> tuple[int, int, int]:
    t = tuple(int(c) for c in m)
    if len(t) != 3 or any(c != float(o) for c, o in zip(t, m)):
        raise DomainError(f"lattice shift must be an integer 3-vector, got {m!r}")
    if t == (0, 0, 0):
        raise DomainError("lattice shift must be nonzero")
    return t


@lru_cache(maxsize=64)
def _candidate_box(bound: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.arange(-bound, bound + 1)
    M = np.stack(np.meshgrid(rng, rng, rng, indexing="ij"), axis=-1).reshape(-1, 3)
    m2 = np.sum(M * M, axis=1)
    keep = (m2 > 0) & (m2 <= bound * bound)
    return M[keep], m2[keep]


def enumerate_candidate_shifts(k, tol: float = DEFAULT_TOL) -> list[tuple[int, int, int]]:
    """All nonzero integer m with |2 k.m - |m|^2| <= tol * max(1, |m|^2).

    The search box |m| <= ceil(2|k|) + 1 is exhaustive: the plane condition
    plus Cauchy-Schwarz forces |m|^2 = 2 k.m <= 2|k||m|, and the +1 guard
    absorbs the tolerance.
    """
    k = as_wavevector(k)
    _require_nonzero(k)
    if tol < 0:
        raise DomainError("tolerance must be nonnegative")
    bound = math.ceil(2.0 * float(np.linalg.norm(k))) + 1
    M, m2 = _candidate_box(bound)
    resid = np.abs(2.0 * (M @ k) - m2)
    hits = [tuple(int(c) for c in m) for m in M[resid <= tol * np.maximum(1.0, m2)]]
    hits.sort()
    return hits


def classify_wavevector(k, tol: float = DEFAULT_TOL) -> ExceptionalClass:
    """Order and shift set of a Bloch vector (order 1 = non-exceptional)."""
    shifts = tuple(enumerate_candidate_shifts(k, tol))
    return ExceptionalClass(order=1 + len(shifts), shifts=shifts, tolerance_used=tol)


def classify_wavevector_exact(k_rational: Sequence) -> ExceptionalClass:
    """Exact-arithmetic classification for rational k.

    Components may be Fractions, ints, or (numerator, denominator) pairs.
    The plane condition 2 k.m = |m|^2 is evaluated in exact integer
    arithmetic, so the result is a deterministic knife-edge predicate.
    """
    comps = []
    for c in k_rational:
        if isinstance(c, tuple):
            comps.append(Fraction(c[0], c[1]))
        else:
            comps.append(Fraction(c))
    if len(comps) != 3:
        raise DomainError("wave vector must have 3 components")
    if all(c == 0 for c in comps):
        raise DomainError("zero wave vector is not classifiable")
    norm2 = sum(c * c for c in comps)
    bound = math.ceil(2.0 * math.sqrt(float(norm2))) + 1
    hits = []
    rng = range(-bound, bound + 1)
    for m in product(rng, rng, rng):
        if m == (0, 0, 0):
            continue
        m2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2]
        if 2 * (comps[0] * m[0] + comps[1] * m[1] + comps[2] * m[2]) == m2:
            hits.append(m)
    hits.sort()
    return ExceptionalClass(order=1 + len(hits), shifts=tuple(hits), tolerance_used=0.0)


def is_ewald_pair(k0, m0, tol: float = DEFAULT_TOL) -> bool:
    """Whether (k0, m0) satisfies 2 k0.m0 = |m0|^2 within tolerance."""
    k0 = as_wavevector(k0)
    m0 = as_shift(m0)
    m2 = m0[0] ** 2 + m0[1] ** 2 + m0[2] ** 2
    lhs = 2.0 * (k0[0] * m0[0] + k0[1] * m0[1] + k0[2] * m0[2]) - m2
    return abs(lhs) <= tol * max(1.0, m2)


def nu(k0, m0, tol: float = DEFAULT_TOL) -> float:
    """Gap-geometry parameter nu = 4|k0|^2/|m0|^2 - 1 for an Ewald pair."""
    k0 = as_wavevector(k0)
    m0 = as_shift(m0)
    if not is_ewald_pair(k0, m0, tol):
        raise DomainError(f"(k0={tuple(k0)}, m0={m0}) violates 2 k.m = |m|^2")
    m2 = m0[0] ** 2 + m0[1] ** 2 + m0[2] ** 2
    return 4.0 * float(np.dot(k0, k0)) / m2 - 1.0


def require_order_two_pair(k0, m0, tol: float = DEFAULT_TOL) -> ExceptionalClass:
    """Validate that k0 is exceptional of order exactly two with shift m0."""
    k0 = as_wavevector(k0)
    m0 = as_shift(m0)
    cls = classify_wavevector(k0, tol)
    if cls.order == 1:
        raise DomainError(f"k0={tuple(k0)} is non-exceptional")
    if cls.order > 2:
        raise DomainError(
            f"k0={tuple(k0)} is exceptional of order {cls.order}; "
            "only order-two pairs are supported"
        )
    if cls.shifts[0] != m0:
        raise DomainError(f"shift of k0 is {cls.shifts[0]}, not {m0}")
    return cls


def gap_admissible(
    k0,
    m0,
    exclusion_band: float = DEFAULT_EXCLUSION_BAND,
    tol: float = DEFAULT_TOL,
) -> GapAdmissibility:
    """Local-gap admissibility of an exceptional pair.

    GapPredicted when |k0|/|m0| < sqrt(2)/2 - band (equivalently nu < 1),
    NoGap above the band, BoundaryExcluded inside it, and
    HigherOrderExcluded when k0 lies on three or more cones.
    """
    k0 = as_wavevector(k0)
    m0 = as_shift(m0)
    knorm = _require_nonzero(k0)
    if not is_ewald_pair(k0, m0, tol):
        raise DomainError(f"(k0, m0={m0}) violates the plane condition")
    mnorm = math.sqrt(m0[0] ** 2 + m0[1] ** 2 + m0[2] ** 2)
    ratio = knorm / mnorm
    nu_val = 4.0 * ratio * ratio - 1.0

    cls = classify_wavevector(k0, tol)
    if cls.order == 1:
        raise DomainError(f"k0={tuple(k0)} is non-exceptional")
    if cls.order > 2:
        return GapAdmissibility(Verdict.HIGHER_ORDER_EXCLUDED, ratio, nu_val)
    if abs(ratio - SQRT_HALF) <= exclusion_band:
        return GapAdmissibility(Verdict.BOUNDARY_EXCLUDED, ratio, nu_val)
    if ratio < SQRT_HALF:
        return GapAdmissibility(Verdict.GAP_PREDICTED, ratio, nu_val)
    return GapAdmissibility(Verdict.NO_GAP, ratio, nu_val)


@dataclass(frozen=True)
class FaceGapMap:
    """Rasterized gap-admissibility map over a Brillouin-zone face.

    The face {k . m0 = |m0|^2 / 2} is parameterized by coordinates (t1, t2)
    along two orthonormal in-plane directions; the sample window is the
    square |t1|, |t2| <= half_width around the face center m0/2.  For
    m0 = (0,0,1) the coordinates are literally (k1, k2).
    """

    m0: tuple[int, int, int]
    t1: np.ndarray
    t2: np.ndarray
    flagged: np.ndarray  # bool, shape (len(t1), len(t2))
    half_width: float

    def flagged_area(self) -> float:
        """Flagged area: pixel count times the grid-spacing cell area."""
        n1, n2 = self.flagged.shape
        d1 = 2.0 * self.half_width / (n1 - 1) if n1 > 1 else 2.0 * self.half_width
        d2 = 2.0 * self.half_width / (n2 - 1) if n2 > 1 else 2.0 * self.half_width
        return float(self.flagged.sum()) * d1 * d2

    def flagged_fraction(self) -> float:
        """Flagged area divided by the window area (2*half_width)^2."""
        return self.flagged_area() / (2.0 * self.half_width) ** 2


def _face_basis(m0: tuple[int, int, int]) -> tuple[np.ndarray, np.ndarray]:
    m = np.asarray(m0, dtype=float)
    # pick the coordinate axis least aligned with m0, Gram-Schmidt the rest
    probe = np.zeros(3)
    probe[int(np.argmin(np.abs(m)))] = 1.0
    e1 = probe - (probe @ m) / (m @ m) * m
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(m / np.linalg.norm(m), e1)
    return e1, e2


def face_gap_region(
    m0,
    samples: int = 101,
    half_width: float = 1.0,
    exclusion_band: float = DEFAULT_EXCLUSION_BAND,
    tol: float = DEFAULT_TOL,
) -> FaceGapMap:
    """Boolean map of the GapPredicted region on the face k.m0 = |m0|^2/2.

    Every face point satisfies the plane condition for m0 by construction;
    a pixel is flagged when the classification there is exactly order two
    and |k|/|m0| < sqrt(2)/2 - band.  For m0 = (0,0,1) the flagged set is
    the disk k1^2 + k2^2 < 1/4.  Vectorized over the whole raster.
    """
    m0 = as_shift(m0)
    if samples < 2:
        raise DomainError("samples must be >= 2")
    m = np.asarray(m0, dtype=float)
    m2 = float(m @ m)
    e1, e2 = _face_basis(m0)
    center = m / 2.0

    t1 = np.linspace(-half_width, half_width, samples)
    t2 = np.linspace(-half_width, half_width, samples)
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    K = center[None, None, :] + T1[..., None] * e1 + T2[..., None] * e2
    Kf = K.reshape(-1, 3)

    kmax = float(np.max(np.linalg.norm(Kf, axis=1)))
    bound = math.ceil(2.0 * kmax) + 1
    rng = range(-bound, bound + 1)
    ms = np.array(
        [mm for mm in product(rng, rng, rng)
         if mm != (0, 0, 0) and mm[0] ** 2 + mm[1] ** 2 + mm[2] ** 2 <= bound * bound],
        dtype=float,
    )
    msq = np.sum(ms * ms, axis=1)
    # residual of the plane condition for every (pixel, candidate) pair
    resid = np.abs(2.0 * (Kf @ ms.T) - msq[None, :])
    hits = resid <= tol * np.maximum(1.0, msq)[None, :]
    counts = hits.sum(axis=1)

    ratio = np.linalg.norm(Kf, axis=1) / math.sqrt(m2)
    flagged = (counts == 1) & (ratio < SQRT_HALF - exclusion_band)
    return FaceGapMap(
        m0=m0,
        t1=t1,
        t2=t2,
        flagged=flagged.reshape(samples, samples),
        half_width=half_width,
    )


def cubic_symmetries() -> list[np.ndarray]:
    """The 48 signed permutation matrices of the cube group."""
    mats = []
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        for signs in product((1, -1), repeat=3):
            P = np.zeros((3, 3))
            for row, (col, s) in enumerate(zip(perm, signs)):
                P[row, col] = s
            mats.append(P)
    return mats
