"""Hermitian eigensolver front end and the ASCII matrix exchange format.

Dense problems go through LAPACK; large sparse/operator problems go through
preconditioned LOBPCG with a deterministic starting block.  Returned
eigenpairs are residual-checked: ||A x - lambda (M) x|| <= tol * scale with
scale = max(|lambda|) over the returned set, and a NumericalError carries
the residual report when the iteration cap is hit.

Triplet export format (ASCII, documented for debugging):

    # bandscan hermitian triplets v1
    <nrows> <ncols> <nnz>
    <i> <j> <re> <im>        (0-based, one line per stored entry)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from ..errors import DomainError, NumericalError

#: Contract caps: beyond these the caller is out of the supported envelope.
MAX_DENSE = 12_000
MAX_SPARSE = 120_000


@dataclass(frozen=True)
class EigResult:
    """Sorted lowest eigenvalues of one discretized Bloch problem."""

    eigenvalues: np.ndarray = field(repr=False)
    k: tuple[float, float, float]
    resolution: str
    residual_norm: float

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        if np.any(np.diff(ev) < 0):
            raise NumericalError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", ev)


def _as_dense(A):
    if sp.issparse(A):
        return A.toarray()
    return np.asarray(A)


def _residuals(A, M, vals, vecs):
    AV = A @ vecs
    MV = vecs if M is None else M @ vecs
    R = AV - MV * vals[None, :]
    return np.linalg.norm(R, axis=0) / np.maximum(np.linalg.norm(MV, axis=0), 1e-300)


def _rayleigh_ritz(S, AS):
    """Ritz pairs of the subspace span(S); robust against mild rank loss."""
    G = S.conj().T @ AS
    G = 0.5 * (G + G.conj().T)
    Mg = S.conj().T @ S
    Mg = 0.5 * (Mg + Mg.conj().T)
    try:
        theta, C = scipy.linalg.eigh(G, Mg)
        return theta, C
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        # rank-deficient basis: drop directions below the cutoff
        w, U = np.linalg.eigh(Mg)
        keep = w > 1e-12 * max(w.max(), 1e-300)
        if not np.any(keep):
            raise NumericalError("eigensolver basis collapsed")
        B = U[:, keep] / np.sqrt(w[keep])[None, :]
        Gr = B.conj().T @ G @ B
        Gr = 0.5 * (Gr + Gr.conj().T)
        theta, C = np.linalg.eigh(Gr)
        return theta, B @ C


def _block_preconditioned_eigensolve(A_mul, T_mul, X0, count, tol, maxiter):
    """Locally optimal block preconditioned solver for lowest eigenpairs.

    Deterministic LOBPCG variant: subspace span[X, T r, P] per step, with
    explicit re-orthogonalization and a Gram-based fallback when the basis
    degenerates (the situation that breaks stock implementations).
    Returns (theta, X, relative residuals, iterations).
    """
    X, _ = np.linalg.qr(np.asarray(X0, dtype=complex))
    AX = A_mul(X)
    P = AP = None
    theta = rel = None
    for it in range(maxiter):
        theta_full, C = _rayleigh_ritz(X, AX)
        X = X @ C
        AX = AX @ C
        theta = theta_full
        R = AX - X * theta[None, :]
        # residuals relative to the spectral scale of the computed block
        scale = max(float(np.max(np.abs(theta))), 1e-8)
        rel = np.linalg.norm(R, axis=0) / scale
        if np.all(rel[:count] <= tol):
            # refresh the implicit product before accepting, guarding
            # against drift accumulated through the three-term recurrence
            AX = A_mul(X)
            theta, C = _rayleigh_ritz(X, AX)
            X = X @ C
            AX = AX @ C
            R = AX - X * theta[None, :]
            scale = max(float(np.max(np.abs(theta))), 1e-8)
            rel = np.linalg.norm(R, axis=0) / scale
            if np.all(rel[:count] <= tol):
                return theta, X, rel, it
        W = T_mul(R)
        W = W - X @ (X.conj().T @ W)
        if P is not None:
            W = W - P @ (P.conj().T @ W)
        keep = np.linalg.norm(W, axis=0) > 1e-14
        if not np.any(keep):
            return theta, X, rel, it
        W, _ = np.linalg.qr(W[:, keep])
        AW = A_mul(W)
        S = [X, W]
        AS = [AX, AW]
        if P is not None:
            S.append(P)
            AS.append(AP)
        S = np.concatenate(S, axis=1)
        AS = np.concatenate(AS, axis=1)
        th2, C = _rayleigh_ritz(S, AS)
        m = X.shape[1]
        C = C[:, :m]
        Xn = S @ C
        AXn = AS @ C
        # new conjugate directions: the non-X part of the update
        Cw = C[m:, :]
        Pn = S[:, m:] @ Cw
        APn = AS[:, m:] @ Cw
        try:
            Pq, Rp = np.linalg.qr(Pn)
            good = np.abs(np.diag(Rp)) > 1e-12 * max(np.linalg.norm(Pn), 1e-300)
            if np.any(good):
                APq = np.linalg.solve(Rp.conj().T, APn.conj().T).conj().T
                P, AP = Pq[:, good], APq[:, good]
            else:
                P = AP = None
        except np.linalg.LinAlgError:
            P = AP = None
        X, AX = Xn, AXn
    return theta, X, rel, maxiter


def hermitian_eigensolve(
    A,
    count: int,
    M=None,
    *,
    precond=None,
    v0=None,
    tol: float = 1e-8,
    maxiter: int = 400,
    seed: int = 0,
    allow_large: bool = False,
    return_residual: bool = False,
):
    """Lowest `count` eigenvalues of a Hermitian (pencil) problem.

    A and optional M may be ndarrays, sparse matrices, or LinearOperators.
    Dense inputs (or anything of dimension <= 4000) are solved directly;
    otherwise LOBPCG runs with the supplied preconditioner and starting
    block.  v0 defaults to a seeded random block, so fixed inputs and seed
    give bit-identical output.  allow_large lifts the sparse-dimension cap
    for matrix-free grid operators that manage their own memory.
    """
    n = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise DomainError("matrix must be square")
    if count < 1 or count > n:
        raise DomainError(f"count must be in [1, {n}]")

    dense_like = isinstance(A, np.ndarray) or sp.issparse(A)
    if isinstance(A, np.ndarray) and n > MAX_DENSE:
        raise DomainError(f"dense dimension {n} exceeds cap {MAX_DENSE}")
    if sp.issparse(A) and n > MAX_SPARSE and not allow_large:
        raise DomainError(f"sparse dimension {n} exceeds cap {MAX_SPARSE}")
    if not dense_like and n > MAX_SPARSE and not allow_large:
        raise DomainError(f"operator dimension {n} exceeds cap {MAX_SPARSE}")

    if dense_like and (n <= 4000 or isinstance(A, np.ndarray)):
        Ad = _as_dense(A)
        Md = None if M is None else _as_dense(M)
        herm_gap = np.linalg.norm(Ad - Ad.conj().T)
        if herm_gap > 1e-10 * max(np.linalg.norm(Ad), 1e-300):
            raise NumericalError(f"matrix not Hermitian (defect {herm_gap:.2e})")
        try:
            vals, vecs = scipy.linalg.eigh(Ad, Md, subset_by_index=(0, count - 1))
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"dense eigensolve failed: {exc}") from exc
        vals = np.asarray(vals, dtype=float)
        if return_residual:
            res = _residuals(Ad, Md, vals, vecs)
            return vals, float(np.max(res) / max(np.max(np.abs(vals)), 1e-300))
        return vals

    # iterative path
    if M is not None:
        raise DomainError("generalized problems are dense-only in this solver")
    if v0 is None:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))
    X = np.array(v0, dtype=complex, copy=True)
    if X.shape[0] != n or X.shape[1] < count:
        raise DomainError("starting block shape mismatch")

    A_mul = (lambda V: A @ V)
    if precond is None:
        T_mul = lambda V: V
    elif isinstance(precond, LinearOperator):
        T_mul = lambda V: precond @ V
    else:
        T_mul = precond

    vals, vecs, rel, iters = _block_preconditioned_eigensolve(
        A_mul, T_mul, X, count, tol, maxiter
    )
    if np.all(rel[:count] <= tol):
        out = np.asarray(vals[:count].real, dtype=float)
        if return_residual:
            return out, float(np.max(rel[:count]))
        return out
    raise NumericalError(
        f"eigensolver did not converge: relative residuals "
        f"{np.array2string(rel[:count], precision=3)} exceed tol {tol} "
        f"after {iters} iterations"
    )


def eigensolve_residual(A, count: int, vals, vecs) -> float:
    return float(np.max(_residuals(A, None, np.asarray(vals)[:count], vecs[:, :count])))


def export_triplets(A, path) -> None:
    """Write a matrix in the ASCII triplet exchange format."""
    if sp.issparse(A):
        C = A.tocoo()
        rows, cols, vals = C.row, C.col, C.data
        shape = A.shape
    else:
        A = np.asarray(A)
        rows, cols = np.nonzero(np.ones_like(A, dtype=bool))
        vals = A[rows, cols]
        shape = A.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# bandscan hermitian triplets v1\n")
        fh.write(f"{shape[0]} {shape[1]} {len(vals)}\n")
        for i, j, v in zip(rows, cols, vals):
            v = complex(v)
            fh.write(f"{i} {j} {v.real!r} {v.imag!r}\n")


def read_triplets(path) -> sp.coo_matrix:
    """Read a matrix written by export_triplets."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise DomainError("missing triplet header line")
        nr, nc, nnz = (int(t) for t in fh.readline().split())
        rows = np.empty(nnz, dtype=int)
        cols = np.empty(nnz, dtype=int)
        vals = np.empty(nnz, dtype=complex)
        for idx in range(nnz):
            i, j, re, im = fh.readline().split()
            rows[idx], cols[idx] = int(i), int(j)
            vals[idx] = float(re) + 1j * float(im)
    return sp.coo_matrix((vals, (rows, cols)), shape=(nr, nc))
