"""Plane-wave-expansion eigensolver for the penetrable-sphere problem.

The weak form div(grad u / rho) + omega^2 gamma u = 0 with Bloch vector k
becomes, in the Fourier basis u = sum_g u_g e^{i (k+g).x},

    sum_g' (k+g).(k+g') eta^(g-g') u_g' = omega^2 sum_g' gamma^(g-g') u_g',

with eta = 1/rho.  Both coefficient fields are piecewise constant with a
sphere at the origin, so their Fourier coefficients come from the analytic
ball-indicator transform (never from FFT sampling).  The pencil (A, B) is
real symmetric with B positive definite; a uniform medium gives
omega^2 = c^2 |k+g|^2 exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.linalg

from ..errors import DomainError, NumericalError
from ..transmission import TransmissionParams
from .eig import EigResult

#: Cap on the plane-wave basis size (2*g_max+1)^3.
MAX_BASIS = 12_000

CELL_VOLUME = (2.0 * math.pi) ** 3


@dataclass(frozen=True)
class PWEBasis:
    """Lexicographically ordered integer modes with |g|_inf <= g_max."""

    g_max: int
    basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.g_max < 1:
            raise DomainError("g_max must be >= 1")
        size = (2 * self.g_max + 1) ** 3
        if size > MAX_BASIS:
            raise DomainError(f"basis size {size} exceeds cap {MAX_BASIS}")
        rng = range(-self.g_max, self.g_max + 1)
        arr = np.array(list(product(rng, rng, rng)), dtype=int)
        object.__setattr__(self, "basis", arr)

    def __len__(self):
        return len(self.basis)


def sphere_indicator_fourier(g, a: float):
    """Fourier coefficient of the radius-a ball indicator on the cell.

    Normalized so the g = 0 value is exactly the volume fraction
    f = (4/3) pi a^3 / (2 pi)^3; for g != 0 the value is
    f * 3 (sin t - t cos t) / t^3 with t = |g| a, which tends to f as
    t -> 0.  Accepts an integer 3-vector or an array of |g| values.
    """
    if a <= 0:
        raise DomainError("sphere radius must be positive")
    g = np.asarray(g, dtype=float)
    gnorm = np.linalg.norm(g) if g.shape == (3,) else g
    f = (4.0 / 3.0) * math.pi * a**3 / CELL_VOLUME
    t = np.asarray(gnorm, dtype=float) * a
    out = np.full(t.shape, f)
    small = t < 1e-4
    ts = t[small]
    out[small] = f * (1.0 - ts * ts / 10.0 + ts**4 / 280.0)
    big = ~small
    tb = t[big]
    out[big] = f * 3.0 * (np.sin(tb) - tb * np.cos(tb)) / tb**3
    if out.shape == ():
        return float(out)
    return out


def assemble_pwe(k, params: TransmissionParams, g_max: int):
    """(A, B) pencil matrices for one Bloch vector."""
    k = np.asarray(k, dtype=float)
    basis = PWEBasis(g_max).basis.astype(float)
    kg = k[None, :] + basis
    dots = kg @ kg.T
    dG = np.linalg.norm(basis[:, None, :] - basis[None, :, :], axis=2)
    chi = sphere_indicator_fourier(dG, params.a)
    mats = params.materials
    eta_p = 1.0 / mats.rho_plus
    eta_m = 1.0 / mats.rho_minus
    diag = dG < 0.5
    eta = np.where(diag, eta_p, 0.0) + (eta_m - eta_p) * chi
    gam = np.where(diag, mats.gamma_plus, 0.0) + (mats.gamma_minus - mats.gamma_plus) * chi
    return dots * eta, gam


def pwe_transmission_eigenvalues(
    k, params: TransmissionParams, g_max: int, count: int
) -> EigResult:
    """Lowest `count` omega^2 values of the transmission cell problem."""
    if g_max < 2:
        raise DomainError("g_max must be >= 2")
    if count < 1:
        raise DomainError("count must be >= 1")
    if g_max * params.a < 1.0:
        warnings.warn(
            f"g_max*a = {g_max * params.a:.2f} < 1: truncation barely "
            "resolves the sphere",
            stacklevel=2,
        )
    A, B = assemble_pwe(k, params, g_max)
    herm = np.linalg.norm(A - A.T) / max(np.linalg.norm(A), 1e-300)
    if herm > 1e-12:
        raise NumericalError(f"PWE assembly not symmetric (defect {herm:.2e})")
    if count > len(A):
        raise DomainError(f"count {count} exceeds basis size {len(A)}")
    try:
        vals, vecs = scipy.linalg.eigh(A, B, subset_by_index=(0, count - 1))
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"generalized eigensolve failed: {exc}") from exc
    res = np.linalg.norm(A @ vecs - (B @ vecs) * vals[None, :], axis=0)
    scale = max(np.max(np.abs(vals)), 1e-300)
    resolution = f"pwe g_max={g_max} basis={len(A)}"
    return EigResult(
        np.asarray(vals, dtype=float),
        tuple(float(x) for x in np.asarray(k, dtype=float)),
        resolution,
        float(np.max(res) / scale),
    )
