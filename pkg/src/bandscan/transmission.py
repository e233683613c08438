"""Asymptotic dispersion and local gaps for penetrable spherical inclusions.

Material contrast enters through

    alpha = 1 - gamma_minus/gamma_plus,
    beta  = 3 (sigma - 1) / (sigma + 2),    sigma = rho_plus/rho_minus,

(+ outside / - inside), and the geometry through f, the inclusion volume
fraction of the (2 pi)^3 cell.  Branches over the ray k = (1 + delta) k0:

    omega_pm / c = |k0| (1 + (alpha+beta) f / 2)
                   + (nu*dt +- sqrt(mu^2 + dt^2)) / (2 |k0|),

with dt = delta |m0|^2 / 2 and mu = |alpha + beta kh0.kh1| |k0|^2 f, where
kh0, kh1 are the unit vectors of k0 and k1 = k0 - m0.  For nu < 1 the local
gap is the interval of half-width mu*sqrt(1-nu^2)/(2|k0|) centered at
|k0|(1 + (alpha+beta) f / 2); frequencies are in units of the host speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .dirichlet import (
    CELL_VOLUME,
    DEFAULT_DELTA0,
    BranchCurve,
    GapInterval,
    GapStatus,
)
from .errors import DomainError


def material_coefficients(
    gamma_plus: float, gamma_minus: float, rho_plus: float, rho_minus: float
) -> tuple[float, float, float]:
    """(alpha, beta, sigma) from the raw material constants."""
    for name, v in (
        ("gamma_plus", gamma_plus),
        ("gamma_minus", gamma_minus),
        ("rho_plus", rho_plus),
        ("rho_minus", rho_minus),
    ):
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"{name} must be finite and positive, got {v}")
    sigma = rho_plus / rho_minus
    alpha = 1.0 - gamma_minus / gamma_plus
    beta = 3.0 * (sigma - 1.0) / (sigma + 2.0)
    return alpha, beta, sigma


@dataclass(frozen=True)
class MaterialSpec:
    gamma_plus: float
    gamma_minus: float
    rho_plus: float
    rho_minus: float

    def __post_init__(self):
        material_coefficients(
            self.gamma_plus, self.gamma_minus, self.rho_plus, self.rho_minus
        )

    @property
    def sigma(self) -> float:
        return self.rho_plus / self.rho_minus

    @property
    def alpha(self) -> float:
        return 1.0 - self.gamma_minus / self.gamma_plus

    @property
    def beta(self) -> float:
        s = self.sigma
        return 3.0 * (s - 1.0) / (s + 2.0)

    @property
    def c_plus(self) -> float:
        return 1.0 / math.sqrt(self.gamma_plus * self.rho_plus)

    @property
    def c_minus(self) -> float:
        return 1.0 / math.sqrt(self.gamma_minus * self.rho_minus)


def volume_fraction(a: float, cell_volume: float = CELL_VOLUME) -> float:
    return (4.0 / 3.0) * math.pi * a**3 / cell_volume


@dataclass(frozen=True)
class TransmissionParams:
    """Materials plus sphere radius a; f is always derived from a."""

    materials: MaterialSpec
    a: float

    def __post_init__(self):
        if not (self.a > 0.0 and math.isfinite(self.a)):
            raise DomainError("sphere radius a must be finite and positive")
        if volume_fraction(self.a) >= 1.0:
            raise DomainError("volume fraction must be below 1")

    @property
    def f(self) -> float:
        return volume_fraction(self.a)

    @classmethod
    def from_volume_fraction(cls, materials: MaterialSpec, f: float) -> "TransmissionParams":
        if not (0.0 < f < 1.0):
            raise DomainError(f"volume fraction must lie in (0, 1), got {f}")
        a = (f * CELL_VOLUME * 3.0 / (4.0 * math.pi)) ** (1.0 / 3.0)
        return cls(materials=materials, a=a)


def khat_dot(k0, m0, tol: float = lattice.DEFAULT_TOL) -> float:
    """kh0 . kh1 for k1 = k0 - m0 on the Ewald sphere (|k1| = |k0|)."""
    k0 = lattice.as_wavevector(k0)
    m0 = lattice.as_shift(m0)
    if not lattice.is_ewald_pair(k0, m0, tol):
        raise DomainError("(k0, m0) violates the plane condition")
    k1 = k0 - np.asarray(m0, dtype=float)
    return float(np.dot(k0, k1) / (np.linalg.norm(k0) * np.linalg.norm(k1)))


def coupling_mu(k0, m0, params: TransmissionParams, tol: float = lattice.DEFAULT_TOL) -> float:
    """Splitting amplitude mu = |alpha + beta kh0.kh1| |k0|^2 f."""
    k0v = np.asarray(k0, dtype=float)
    mats = params.materials
    c1 = khat_dot(k0, m0, tol)
    return abs(mats.alpha + mats.beta * c1) * float(np.dot(k0v, k0v)) * params.f


def matrix_M_transmission(
    k0,
    m0,
    params: TransmissionParams,
    epsilon: float,
    delta: float,
    tol: float = lattice.DEFAULT_TOL,
) -> np.ndarray:
    """Leading-order 2x2 interaction matrix whose determinant vanishes on
    the dispersion surface (spherical inclusions)."""
    lattice.require_order_two_pair(k0, m0, tol)
    k0 = np.asarray(k0, dtype=float)
    m0t = lattice.as_shift(m0)
    k2 = float(np.dot(k0, k0))
    V = CELL_VOLUME
    mats = params.materials
    c1 = khat_dot(k0, m0t, tol)
    ab = mats.alpha + mats.beta
    off = mats.alpha + mats.beta * c1
    m2 = m0t[0] ** 2 + m0t[1] ** 2 + m0t[2] ** 2
    M = 2.0 * epsilon * k2 * V * np.eye(2, dtype=complex)
    M -= params.f * k2 * V * np.array([[ab, off], [off, ab]], dtype=complex)
    M += delta * V * np.diag([0.0, float(m2)]).astype(complex)
    return M


def branch_pair_transmission(
    k0,
    m0,
    params: TransmissionParams,
    delta_tilde: float,
    delta0: float = DEFAULT_DELTA0,
    tol: float = lattice.DEFAULT_TOL,
) -> tuple[float, float]:
    """(omega_minus/c, omega_plus/c) at one delta_tilde; c is the host speed."""
    lattice.require_order_two_pair(k0, m0, tol)
    if abs(delta_tilde) > delta0:
        raise DomainError(
            f"|delta_tilde|={abs(delta_tilde)} exceeds the ray half-width {delta0}"
        )
    k0 = np.asarray(k0, dtype=float)
    knorm = float(np.linalg.norm(k0))
    nu_val = lattice.nu(k0, m0, tol)
    mats = params.materials
    mu = coupling_mu(k0, m0, params, tol)
    center = knorm * (1.0 + 0.5 * (mats.alpha + mats.beta) * params.f)
    root = math.hypot(mu, delta_tilde)
    base = center + nu_val * delta_tilde / (2.0 * knorm)
    return (base - root / (2.0 * knorm), base + root / (2.0 * knorm))


def dispersion_scan_transmission(
    k0,
    m0,
    params: TransmissionParams,
    delta_range: tuple[float, float] = (-DEFAULT_DELTA0, DEFAULT_DELTA0),
    n_samples: int = 101,
    delta0: float | None = None,
    tol: float = lattice.DEFAULT_TOL,
) -> BranchCurve:
    lo, hi = float(delta_range[0]), float(delta_range[1])
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    if hi < lo:
        raise DomainError("delta_range must be increasing")
    if delta0 is None:
        delta0 = max(abs(lo), abs(hi), DEFAULT_DELTA0)
    dts = np.linspace(lo, hi, n_samples) if n_samples > 1 else np.array([lo])
    lower = np.empty(n_samples)
    upper = np.empty(n_samples)
    for i, dt in enumerate(dts):
        lower[i], upper[i] = branch_pair_transmission(k0, m0, params, float(dt), delta0, tol)
    m0 = lattice.as_shift(m0)
    k0 = tuple(float(x) for x in np.asarray(k0, dtype=float))
    return BranchCurve(k0, m0, dts, lower, upper)


def gap_with_status_transmission(
    k0,
    m0,
    params: TransmissionParams,
    exclusion_band: float = lattice.DEFAULT_EXCLUSION_BAND,
    tol: float = lattice.DEFAULT_TOL,
) -> tuple[GapStatus, GapInterval | None]:
    """Local gap for the transmission problem, with a status flag.

    Accidental zero splitting (alpha + beta kh0.kh1 = 0, e.g. identical
    materials) is reported as DEGENERATE_SPLITTING rather than as a gap of
    width zero: the leading order predicts touching bands there.
    """
    adm = lattice.gap_admissible(k0, m0, exclusion_band, tol)
    if adm.verdict is lattice.Verdict.HIGHER_ORDER_EXCLUDED:
        raise DomainError("higher-order exceptional point; no gap theory here")
    if adm.verdict is lattice.Verdict.BOUNDARY_EXCLUDED:
        raise DomainError(
            f"|k0|/|m0|={adm.ratio} inside the exclusion band around sqrt(2)/2"
        )
    if adm.verdict is lattice.Verdict.NO_GAP:
        return GapStatus.NO_GAP_NU, None

    k0v = np.asarray(k0, dtype=float)
    knorm = float(np.linalg.norm(k0v))
    mu = coupling_mu(k0, m0, params, tol)
    if mu == 0.0:
        return GapStatus.DEGENERATE_SPLITTING, None
    mats = params.materials
    center = knorm * (1.0 + 0.5 * (mats.alpha + mats.beta) * params.f)
    half = mu * math.sqrt(1.0 - adm.nu * adm.nu) / (2.0 * knorm)
    interval = GapInterval(
        lo_over_c=center - half,
        hi_over_c=center + half,
        k0=tuple(float(x) for x in k0v),
        m0=lattice.as_shift(m0),
        problem="transmission",
        a=params.a,
    )
    return GapStatus.PREDICTED, interval


def local_gap_transmission(
    k0,
    m0,
    params: TransmissionParams,
    exclusion_band: float = lattice.DEFAULT_EXCLUSION_BAND,
    tol: float = lattice.DEFAULT_TOL,
) -> GapInterval | None:
    _, interval = gap_with_status_transmission(k0, m0, params, exclusion_band, tol)
    return interval


def epsilon_nonexceptional_transmission(
    k, params: TransmissionParams, tol: float = lattice.DEFAULT_TOL
) -> float:
    """Single-mode dispersion correction eps = (alpha + beta) f / 2.

    The dispersion point is omega = (1 + eps) c |k| with c the host speed.
    """
    k = np.asarray(k, dtype=float)
    cls = lattice.classify_wavevector(k, tol)
    if cls.order != 1:
        raise DomainError(
            f"k={tuple(k)} is exceptional of order {cls.order}; "
            "use branch_pair_transmission"
        )
    mats = params.materials
    return 0.5 * (mats.alpha + mats.beta) * params.f
