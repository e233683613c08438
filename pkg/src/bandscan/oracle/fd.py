"""Finite-difference Bloch eigensolver for the sound-soft sphere problem.

The Bloch wave u = Phi(x) e^{-i k.x} with cell-periodic Phi turns the
Helmholtz cell problem into the Hermitian eigenproblem

    (-lap + 2i k.grad + |k|^2) Phi = lambda Phi,     lambda = (omega/c)^2,

discretized on a uniform n^3 grid over [-pi, pi)^3 with the 7-point
Laplacian and centered first differences under periodic wraparound.  The
inclusion enters by node masking (|x - center| < a): masked rows/columns
are removed, which is the deflated form of replacing them by identity.
The staircase boundary carries an O(h) geometry error; tolerances of the
consumers are set accordingly.

Without a mask the discrete operator is diagonal in the plane-wave basis
with symbol

    sum_j [ 4 sin^2(g_j h/2)/h^2 - 2 k_j sin(g_j h)/h + k_j^2 ],

which is also what the FFT preconditioner inverts.  The module ships the
free-lattice Green function (Bessel-integral form) and the exact discrete
capacitance of a masked node pattern; together they give a staircase-free
baseline for remainder studies against the asymptotic formulas.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np
import scipy.fft
import scipy.sparse as sp
from scipy.integrate import quad
from scipy.sparse.linalg import LinearOperator
from scipy.special import ive

from ..errors import DomainError, ResolutionError
from .eig import EigResult, hermitian_eigensolve

TWO_PI = 2.0 * math.pi

#: Grid sizes whose free dimension is at/below this go through dense LAPACK.
DENSE_LIMIT = 4000


def axis_coords(n: int) -> np.ndarray:
    return -math.pi + (TWO_PI / n) * np.arange(n)


def sphere_mask(n: int, a: float, center=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Boolean (n,n,n) array, True at nodes with |x - center| < a.

    Distances use the minimum image, so off-center spheres stay whole.
    """
    x = axis_coords(n)

    def centered(c):
        t = x - c
        return (t + math.pi) % TWO_PI - math.pi

    dx = centered(center[0])[:, None, None]
    dy = centered(center[1])[None, :, None]
    dz = centered(center[2])[None, None, :]
    return dx * dx + dy * dy + dz * dz < a * a


def fourier_symbol(n: int, k) -> np.ndarray:
    """Exact eigenvalues of the unmasked discrete operator per FFT mode."""
    h = TWO_PI / n
    g = np.fft.fftfreq(n, d=1.0 / n)
    th = g * h
    axes = []
    for kj in k:
        axes.append(4.0 * np.sin(th / 2) ** 2 / h**2 - 2.0 * kj * np.sin(th) / h + kj**2)
    return axes[0][:, None, None] + axes[1][None, :, None] + axes[2][None, None, :]


@dataclass(frozen=True)
class FDGrid:
    """Uniform grid plus inclusion mask for one (n, a, center) geometry."""

    n: int
    a: float
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    inclusion_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 8:
            raise DomainError("grid must have n >= 8 points per axis")
        if not (0.0 <= self.a < math.pi / 2):
            raise DomainError("inclusion radius must satisfy 0 <= a < pi/2")
        object.__setattr__(
            self, "inclusion_mask", sphere_mask(self.n, self.a, self.center)
        )

    @property
    def h(self) -> float:
        return TWO_PI / self.n

    @property
    def cells_across(self) -> float:
        return 2.0 * self.a / self.h

    def free_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.inclusion_mask.ravel())


def _resolve_workers(workers: int | None) -> int:
    # BANDSCAN_THREADS caps FFT worker threads; -1 means all cores
    if workers is not None:
        return workers
    return int(os.environ.get("BANDSCAN_THREADS", "-1") or "-1")


class _GridOperator:
    """Matrix-free restricted stencil operator and its FFT preconditioner."""

    def __init__(self, grid: FDGrid, k, workers: int | None = None):
        self.grid = grid
        self.k = np.asarray(k, dtype=float)
        self.workers = _resolve_workers(workers)
        self.idx = grid.free_indices()
        self.nfree = self.idx.size
        n = grid.n
        self.shape3 = (n, n, n)
        sym = fourier_symbol(n, self.k)
        # shift keeps the preconditioner positive definite near the low modes
        tau = max(float(self.k @ self.k), 1e-6)
        self.pre_sym = 1.0 / (sym + tau)
        self.h = grid.h
        self.k2 = float(self.k @ self.k)

    def _scatter(self, V):
        full = np.zeros((np.prod(self.shape3), V.shape[1]), dtype=complex)
        full[self.idx] = V
        return full.reshape(*self.shape3, V.shape[1])

    def _gather(self, G):
        return G.reshape(-1, G.shape[-1])[self.idx]

    def matmat(self, V):
        V = np.asarray(V, dtype=complex)
        squeeze = V.ndim == 1
        if squeeze:
            V = V[:, None]
        G = self._scatter(V)
        h = self.h
        out = (6.0 / h**2 + self.k2) * G
        for ax, kj in enumerate(self.k):
            up = np.roll(G, -1, axis=ax)
            dn = np.roll(G, 1, axis=ax)
            out += -(up + dn) / h**2 + (1j * kj / h) * (up - dn)
        R = self._gather(out)
        return R[:, 0] if squeeze else R

    def precmat(self, V):
        V = np.asarray(V, dtype=complex)
        squeeze = V.ndim == 1
        if squeeze:
            V = V[:, None]
        G = self._scatter(V)
        Gh = scipy.fft.fftn(G, axes=(0, 1, 2), workers=self.workers)
        Gh *= self.pre_sym[..., None]
        G = scipy.fft.ifftn(Gh, axes=(0, 1, 2), workers=self.workers)
        R = self._gather(G)
        return R[:, 0] if squeeze else R

    def as_linear_operators(self):
        A = LinearOperator(
            (self.nfree, self.nfree), matvec=self.matmat, matmat=self.matmat,
            dtype=complex,
        )
        T = LinearOperator(
            (self.nfree, self.nfree), matvec=self.precmat, matmat=self.precmat,
            dtype=complex,
        )
        return A, T

    def plane_wave_block(self, gs) -> np.ndarray:
        x = axis_coords(self.grid.n)
        X = x[:, None, None]
        Y = x[None, :, None]
        Z = x[None, None, :]
        cols = []
        for g in gs:
            w = np.exp(1j * (g[0] * X + g[1] * Y + g[2] * Z))
            cols.append(w.ravel()[self.idx])
        B = np.stack(cols, axis=1)
        Q, _ = np.linalg.qr(B)
        return Q


def _block_modes(n: int, k, count: int, max_extra: int = 8):
    """Plane-wave start modes; block boundary avoids degenerate shells."""
    sym = fourier_symbol(n, k)
    g = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    flat = sym.ravel()
    order = np.argsort(flat)
    vals = flat[order]
    size = count
    for b in range(count, min(count + max_extra, len(vals) - 1) + 1):
        if b >= len(vals) or vals[b] - vals[b - 1] > 1e-8 * (1.0 + abs(vals[b])):
            size = b
            break
    else:
        size = min(count + max_extra, len(vals))
    modes = []
    nn = n
    for flat_idx in order[:size]:
        i, j, l = np.unravel_index(flat_idx, (nn, nn, nn))
        modes.append((int(g[i]), int(g[j]), int(g[l])))
    return modes


def assemble_sparse(n: int, k, mask: np.ndarray | None = None) -> sp.csr_matrix:
    """Explicit sparse matrix of the (restricted) grid operator.

    Mainly for debugging exports and for cross-checking the matrix-free
    path; identical spectra are asserted in the test suite.
    """
    k = np.asarray(k, dtype=float)
    h = TWO_PI / n
    eye = sp.identity(n, format="csr")
    shift = sp.csr_matrix(
        (np.ones(n), (np.arange(n), (np.arange(n) + 1) % n)), shape=(n, n)
    )
    ops = []
    for axis in range(3):
        parts = [eye, eye, eye]
        parts[axis] = shift
        up = sp.kron(sp.kron(parts[0], parts[1]), parts[2], format="csr")
        ops.append(up)
    A = sp.identity(n**3, format="csr", dtype=complex) * (6.0 / h**2 + float(k @ k))
    for axis, up in enumerate(ops):
        dn = up.T.tocsr()
        A = A - (up + dn) / h**2 + (1j * k[axis] / h) * (up - dn)
    if mask is not None:
        free = np.flatnonzero(~mask.ravel())
        A = A[free][:, free]
    return A.tocsr()


def fd_dirichlet_eigenvalues(
    k,
    a: float,
    n: int,
    count: int,
    *,
    center=(0.0, 0.0, 0.0),
    tol: float = 1e-8,
    maxiter: int = 400,
    workers: int | None = None,
) -> EigResult:
    """Lowest `count` values of lambda = (omega/c)^2 for the masked problem.

    Requires n >= 16 and at least two grid cells across the inclusion
    diameter (a hard floor below which the staircase sphere degenerates);
    below four cells a resolution warning is issued instead.
    """
    k = np.asarray(k, dtype=float)
    if k.shape != (3,):
        raise DomainError("wave vector must have 3 components")
    if n < 16:
        raise DomainError("fd_dirichlet_eigenvalues requires n >= 16")
    if count < 1:
        raise DomainError("count must be >= 1")
    grid = FDGrid(n=n, a=a, center=tuple(center))
    if a > 0.0:
        if grid.cells_across < 2.0:
            raise ResolutionError(
                f"only {grid.cells_across:.2f} grid cells across the inclusion "
                f"diameter at n={n}; need at least 2"
            )
        if grid.cells_across < 4.0:
            warnings.warn(
                f"{grid.cells_across:.2f} grid cells across the inclusion "
                "diameter; staircase error is large below 4",
                stacklevel=2,
            )

    op = _GridOperator(grid, k, workers=workers)
    nmask = int(grid.inclusion_mask.sum())
    resolution = f"fd n={n} h={grid.h:.6g} masked={nmask}"

    if op.nfree <= DENSE_LIMIT:
        A = assemble_sparse(n, k, grid.inclusion_mask).toarray()
        vals, res = hermitian_eigensolve(A, count, return_residual=True)
        return EigResult(vals, tuple(map(float, k)), resolution, res)

    modes = _block_modes(n, k, count)
    X = op.plane_wave_block(modes)
    A, T = op.as_linear_operators()
    vals, res = hermitian_eigensolve(
        A, count, precond=T, v0=X, tol=tol, maxiter=maxiter, allow_large=True,
        return_residual=True,
    )
    return EigResult(vals, tuple(map(float, k)), resolution, res)


# ---------------------------------------------------------------------------
# Free-lattice Green function and the exact discrete inclusion capacitance.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def lattice_green(m1: int, m2: int, m3: int) -> float:
    """Green function g(m) of the unit-spacing 7-point Laplacian on Z^3.

    g(m) = int_0^inf e^{-6t} I_m1(2t) I_m2(2t) I_m3(2t) dt, evaluated with
    exponentially scaled Bessel functions; g(0) is the Watson constant
    0.2527310098..., and g(m) ~ 1/(4 pi |m|) at large |m|.
    """
    m1, m2, m3 = sorted((abs(int(m1)), abs(int(m2)), abs(int(m3))))

    def integrand(t):
        return ive(m1, 2.0 * t) * ive(m2, 2.0 * t) * ive(m3, 2.0 * t)

    v1, _ = quad(integrand, 0.0, 50.0, limit=300, epsabs=1e-13, epsrel=1e-12)
    v2, _ = quad(integrand, 50.0, np.inf, limit=300, epsabs=1e-13, epsrel=1e-12)
    return v1 + v2


def mask_pattern(radius_cells: float) -> np.ndarray:
    """Integer nodes with |m| < radius_cells (the staircase ball pattern)."""
    if radius_cells <= 0:
        return np.zeros((0, 3), dtype=int)
    r = math.ceil(radius_cells)
    pts = [
        m
        for m in product(range(-r, r + 1), repeat=3)
        if m[0] ** 2 + m[1] ** 2 + m[2] ** 2 < radius_cells**2
    ]
    return np.array(sorted(pts), dtype=int)


def discrete_inclusion_capacitance(pattern: np.ndarray, h: float) -> float:
    """Exact Gaussian capacitance of a masked node pattern at spacing h.

    Solves the discrete equilibrium problem sum_j g(m_i - m_j) c_j = 1 on
    the pattern and returns h * sum(c) / (4 pi); a grid sphere of radius a
    centered on a node has pattern mask_pattern(a / h).  This is the
    staircase-consistent stand-in for the shape capacitance q*a.
    """
    pattern = np.asarray(pattern, dtype=int)
    if pattern.ndim != 2 or pattern.shape[1] != 3 or len(pattern) == 0:
        raise DomainError("pattern must be a nonempty (n, 3) integer array")
    npts = len(pattern)
    G = np.empty((npts, npts))
    for i in range(npts):
        d = np.abs(pattern - pattern[i])
        for j in range(npts):
            G[i, j] = lattice_green(int(d[j, 0]), int(d[j, 1]), int(d[j, 2]))
    c = np.linalg.solve(G, np.ones(npts))
    return h * float(c.sum()) / (4.0 * math.pi)
