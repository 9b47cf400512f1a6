"""Dense linear algebra for channel outputs.

Matrices are plain ``numpy`` arrays (square, row-major, complex or real).
The eigensolver is a self-contained cyclic Jacobi method so that it can act
as an independent oracle for the closed-form spectra in :mod:`whp.spectrum`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionError, NotHermitianError, NotPSDError

MAX_DIM = 4096
DEFAULT_TOL = 1e-12
MAX_SWEEPS = 60


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray  # descending
    residual: float  # max_k ||A v_k - lambda_k v_k||
    sweeps: int = 0


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise DimensionError(f"kron result {rows}x{cols} exceeds max_dim={max_dim}")
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(rows, cols)


def transpose(a) -> np.ndarray:
    """Plain transpose, no conjugation."""
    return _as_matrix(a).T.copy()


def partial_trace(a, d1: int, d2: int, side: str = "second") -> np.ndarray:
    """Trace out one tensor factor of a ``(d1*d2) x (d1*d2)`` matrix.

    ``side="first"`` removes the d1 factor and returns a d2 x d2 matrix;
    ``side="second"`` removes the d2 factor and returns a d1 x d1 matrix.
    """
    a = _as_matrix(a)
    if a.shape != (d1 * d2, d1 * d2):
        raise DimensionError(f"shape {a.shape} incompatible with d1={d1}, d2={d2}")
    t = a.reshape(d1, d2, d1, d2)
    if side == "first":
        return np.einsum("ijil->jl", t)
    if side == "second":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"side must be 'first' or 'second', not {side!r}")


def check_hermitian(a, tol: float = DEFAULT_TOL) -> None:
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix is not square: {a.shape}")
    dev = np.abs(a - a.conj().T)
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    i, j = np.unravel_index(np.argmax(dev), dev.shape)
    if dev[i, j] > tol * scale:
        raise NotHermitianError(int(i), int(j), float(dev[i, j]))


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # Tournament schedule: every unordered pair appears once per sweep and the
    # pairs inside one round are disjoint, so a round is a single block rotation.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[k], players[m - 1 - k]) for k in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        if pairs:
            rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_symmetric(a: np.ndarray, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS):
    """Cyclic Jacobi for a real symmetric matrix; returns (diag, V, sweeps).

    Stops once the off-diagonal Frobenius norm is below ``tol * ||a||_F``,
    after one extra polishing sweep (convergence is quadratic, so that sweep
    takes the off-diagonal part down to roundoff).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v, 0
    target = tol * np.linalg.norm(a)
    rounds = _round_robin(n)
    off_mask = ~np.eye(n, dtype=bool)
    polished = False
    for sweep in range(max_sweeps + 1):
        off = np.sqrt(np.sum(a[off_mask] ** 2))
        if off <= target and (polished or off == 0.0):
            return a.diagonal().copy(), v, sweep
        if off <= target:
            polished = True
        if sweep == max_sweeps:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rot = np.eye(n)
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            a = rot.T @ a @ rot
            a = 0.5 * (a + a.T)
            v = v @ rot
    raise ConvergenceError(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})"
    )


def hermitian_eigenvalues(a, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> SpectrumResult:
    """Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.

    Complex input is handled through the real symmetric embedding
    ``[[Re, -Im], [Im, Re]]``, whose spectrum is that of ``a`` doubled.
    """
    a = _as_matrix(a)
    check_hermitian(a, tol)
    a = 0.5 * (a + a.conj().T)
    if np.iscomplexobj(a) and np.any(a.imag != 0.0):
        re, im = a.real, a.imag
        work = np.block([[re, -im], [im, re]])
        doubled = True
    else:
        work = np.real(a).astype(float)
        doubled = False
    diag, vecs, sweeps = jacobi_symmetric(work, tol, max_sweeps)
    resid = work @ vecs - vecs * diag
    residual = float(np.max(np.linalg.norm(resid, axis=0)))
    evals = np.sort(diag)[::-1]
    if doubled:
        evals = evals[::2]
    return SpectrumResult(eigenvalues=evals, residual=residual, sweeps=sweeps)


def eigvalsh(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Descending eigenvalues only."""
    return hermitian_eigenvalues(a, tol).eigenvalues


def clamp_psd(eigenvalues, tol: float | None = None) -> np.ndarray:
    lam = np.asarray(eigenvalues, dtype=float)
    if tol is None:
        tol = DEFAULT_TOL * max(1, lam.size)
    if lam.size and lam.min() < -tol:
        raise NotPSDError(f"eigenvalue {lam.min():.3e} below -{tol:.1e}")
    return np.where(lam < 0.0, 0.0, lam)


def pnorm_psd(eigenvalues, p: float, tol: float | None = None) -> float:
    """Schatten p-norm ``(sum_i lambda_i**p)**(1/p)`` from a PSD spectrum."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    lam = clamp_psd(eigenvalues, tol)
    return float(np.sum(lam**p) ** (1.0 / p))
