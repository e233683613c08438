"""Constructive demonstration that no global gap opens in a fixed window.

For every frequency omega on a grid, a propagating non-exceptional Bloch
wave is exhibited by solving (1 + eps(a, t d)) t = omega / c for t along a
generic ray direction d (bracketed 1D root find).  Directions that land on
an exceptional vector are perturbed automatically.  A bracketing failure
raises, since with small a the dispersion sheet covers the window and
failure indicates a bug rather than physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import lattice
from .dirichlet import DirichletParams
from .errors import DomainError, NumericalError

#: Generic default ray: rationally independent components.
DEFAULT_DIRECTION = (1.0, math.sqrt(2.0), math.sqrt(3.0))


@dataclass(frozen=True)
class CoverageRow:
    omega_over_c: float
    k: tuple[float, float, float]
    order: int
    residual: float


def _root_along_ray(omega: float, A: float) -> float:
    """Solve t + A/t = omega for the upper root (A = 2 pi q a / |Pi|)."""
    if A == 0.0:
        return omega
    disc = omega * omega - 4.0 * A
    if disc <= 0.0:
        raise NumericalError(
            f"no propagating branch at omega/c={omega}: a too large for the window"
        )
    f = lambda t: t + A / t - omega
    lo = math.sqrt(A)
    hi = omega + 1.0
    if f(lo) >= 0.0:
        raise NumericalError(f"bracketing failed at omega/c={omega}")
    return float(brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200))


def cover_frequency(
    omega_over_c: float,
    p: DirichletParams,
    direction=DEFAULT_DIRECTION,
    tol: float = lattice.DEFAULT_TOL,
    max_perturbations: int = 8,
) -> CoverageRow:
    """A non-exceptional k with (1 + eps(a, k)) |k| = omega/c on a ray."""
    if omega_over_c <= 0:
        raise DomainError("omega must be positive")
    d = np.asarray(direction, dtype=float)
    if np.linalg.norm(d) == 0:
        raise DomainError("ray direction must be nonzero")
    A = 2.0 * math.pi * p.q * p.a / p.cell_volume
    for attempt in range(max_perturbations + 1):
        dhat = d / np.linalg.norm(d)
        t = _root_along_ray(omega_over_c, A)
        k = t * dhat
        cls = lattice.classify_wavevector(k, tol)
        if cls.order == 1:
            eps = A / (t * t)
            residual = abs((1.0 + eps) * float(np.linalg.norm(k)) - omega_over_c)
            return CoverageRow(
                omega_over_c, tuple(float(x) for x in k), cls.order, residual
            )
        # rotate slightly off the exceptional plane and retry
        d = d + (attempt + 1) * 1e-3 * np.array([1.0, -0.5, 0.25])
    raise NumericalError(
        f"could not find a non-exceptional cover for omega/c={omega_over_c}"
    )


def global_scan(
    omega_lo: float,
    omega_hi: float,
    samples: int,
    p: DirichletParams,
    direction=DEFAULT_DIRECTION,
    tol: float = lattice.DEFAULT_TOL,
) -> list[CoverageRow]:
    """Cover every omega in [omega_lo, omega_hi] by a propagating wave."""
    if not (0.0 < omega_lo < omega_hi):
        raise DomainError("need 0 < omega_lo < omega_hi")
    if samples < 1:
        raise DomainError("samples must be >= 1")
    omegas = np.linspace(omega_lo, omega_hi, samples)
    return [cover_frequency(float(om), p, direction, tol) for om in omegas]
