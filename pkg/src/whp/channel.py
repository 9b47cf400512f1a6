"""Werner-Holevo channel and the product-channel output in Schmidt form."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SimplexError
from .linalg import eigvalsh, kron, partial_trace

SIMPLEX_TOL = 1e-12
ZERO_CLAMP = 1e-14
MAX_FACTOR_DIM = 64


def as_schmidt(coeffs, tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate a Schmidt vector and return it as a float array on the simplex.

    Entries below ``ZERO_CLAMP`` are set to exactly 0 and the vector is
    renormalized, so that downstream pole handling sees true zeros.
    """
    lam = np.array(coeffs, dtype=float).ravel()
    if lam.size == 0 or not np.all(np.isfinite(lam)):
        raise SimplexError("Schmidt vector must be a non-empty finite array")
    if lam.min() < -tol:
        raise SimplexError(f"negative Schmidt coefficient {lam.min():.3e}")
    if abs(lam.sum() - 1.0) > tol:
        raise SimplexError(f"Schmidt coefficients sum to {lam.sum():.15g}, not 1")
    lam[lam < ZERO_CLAMP] = 0.0
    return lam / lam.sum()


def canonical_dims(d1: int, d2: int) -> tuple[int, int]:
    if d1 < 2 or d2 < 2:
        raise DimensionError(f"dimensions must be >= 2, got ({d1}, {d2})")
    if max(d1, d2) > MAX_FACTOR_DIM:
        raise DimensionError(f"dimension {max(d1, d2)} exceeds {MAX_FACTOR_DIM}")
    return (d1, d2) if d1 <= d2 else (d2, d1)


@dataclass(frozen=True)
class WHChannel:
    """Werner-Holevo channel ``mu -> (I Tr(mu) - mu^T) / (d - 1)``."""

    d: int

    def __post_init__(self):
        if self.d < 2:
            raise DimensionError(f"Werner-Holevo channel needs d >= 2, got {self.d}")

    def apply(self, mu) -> np.ndarray:
        mu = np.asarray(mu)
        if mu.shape != (self.d, self.d):
            raise DimensionError(f"input shape {mu.shape} does not match d={self.d}")
        return (np.eye(self.d) * np.trace(mu) - mu.T) / (self.d - 1)

    __call__ = apply


def _unit(d: int, a: int, b: int) -> np.ndarray:
    e = np.zeros((d, d))
    e[a, b] = 1.0
    return e


def product_output(lam, d1: int, d2: int) -> np.ndarray:
    """Output of the product channel on the state with Schmidt vector ``lam``.

    Built term by term as ``sum_ab sqrt(l_a l_b) Phi1(|a><b|) (x) Phi2(|a><b|)``
    in the Schmidt bases, which gives a real symmetric matrix.
    """
    d1, d2 = canonical_dims(d1, d2)
    lam = as_schmidt(lam)
    if lam.size != d1:
        raise DimensionError(f"Schmidt vector has length {lam.size}, expected min(d1, d2) = {d1}")
    ch1, ch2 = WHChannel(d1), WHChannel(d2)
    root = np.sqrt(lam)
    out = np.zeros((d1 * d2, d1 * d2))
    for a in range(d1):
        for b in range(d1):
            w = root[a] * root[b]
            if w == 0.0:
                continue
            out += w * kron(ch1(_unit(d1, a, b)), ch2(_unit(d2, a, b)))
    return out


def product_input(lam, d1: int, d2: int) -> np.ndarray:
    """``|psi><psi|`` for ``psi = sum_a sqrt(l_a) |a>|a>``."""
    d1, d2 = canonical_dims(d1, d2)
    lam = as_schmidt(lam)
    psi = np.zeros(d1 * d2)
    for a, la in enumerate(lam):
        psi[a * d2 + a] = np.sqrt(la)
    return np.outer(psi, psi)


def schmidt_from_state(psi, d1: int, d2: int, tol: float = 1e-10) -> np.ndarray:
    """Schmidt coefficients of a bipartite unit vector, sorted descending."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != d1 * d2:
        raise DimensionError(f"state has length {psi.size}, expected {d1 * d2}")
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("zero vector has no Schmidt decomposition")
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state norm {norm:.15g} is not 1")
    rho = np.outer(psi, psi.conj())
    reduced = partial_trace(rho, d1, d2, side="second" if d1 <= d2 else "first")
    lam = np.clip(eigvalsh(reduced), 0.0, None)
    return np.sort(lam / lam.sum())[::-1]
