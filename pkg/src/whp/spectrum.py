"""Closed-form spectrum of the product-channel output.

The ``d1*d2`` eigenvalues split into three families:

* ``e[a, b] = (1 - l_a - l_b) / ((d1-1)(d2-1))`` for ordered pairs a != b,
* ``h[a] = (1 - l_a) / ((d1-1)(d2-1))``, each with multiplicity ``d2 - d1``,
* ``g[a] = gamma_a / ((d1-1)(d2-1))`` where ``gamma`` are the roots of the
  secular equation ``prod(mu_a - gamma) * (1 + sum l_a / (mu_a - gamma)) = 0``
  with poles ``mu_a = 1 - 2 l_a``.

The secular roots are the eigenvalues of ``diag(mu) + sqrt(l) sqrt(l)^T``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import as_schmidt, canonical_dims
from .errors import ConvergenceError, DegenerateClassError, DimensionError
from .linalg import eigvalsh

CLAMP_TOL = 1e-12


def solve_secular(lam, method: str = "eigen", tol: float = 1e-15, max_iter: int = 200) -> np.ndarray:
    """All roots of the secular equation, sorted descending.

    ``method="eigen"`` diagonalizes ``diag(1 - 2 l) + sqrt(l) sqrt(l)^T`` with
    the Jacobi solver. ``method="bisect"`` brackets each root between
    consecutive poles and bisects the secular function; kept for
    cross-validation.
    """
    lam = as_schmidt(lam)
    if method == "eigen":
        root = np.sqrt(lam)
        gamma = eigvalsh(np.diag(1.0 - 2.0 * lam) + np.outer(root, root))
    elif method == "bisect":
        gamma = _secular_bisect(lam, tol, max_iter)
    else:
        raise ValueError(f"unknown method {method!r}")
    gamma = np.where((gamma < 0.0) & (gamma > -CLAMP_TOL), 0.0, gamma)
    return np.sort(gamma)[::-1]


def _secular_bisect(lam: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    poles = 1.0 - 2.0 * lam
    order = np.argsort(poles)
    poles, weights = poles[order], lam[order]

    # Coalesced poles: a group of k equal poles with total weight w contributes
    # k-1 roots at the pole (k if w == 0) and acts as one pole of weight w.
    roots = []
    grouped_poles, grouped_weights = [], []
    i = 0
    while i < poles.size:
        j = i
        while j + 1 < poles.size and poles[j + 1] - poles[i] <= 4 * np.finfo(float).eps:
            j += 1
        w = weights[i : j + 1].sum()
        roots.extend([poles[i]] * (j - i))
        if w > 0.0:
            grouped_poles.append(poles[i])
            grouped_weights.append(w)
        else:
            roots.append(poles[i])
        i = j + 1
    mu, w = np.array(grouped_poles), np.array(grouped_weights)

    def secular(x):
        return 1.0 + np.sum(w / (mu - x))

    uppers = list(mu[1:]) + [mu[-1] + w.sum() + 1.0]
    for lo, hi in zip(mu, uppers):
        a, b = lo, hi
        for _ in range(max_iter):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b or b - a <= tol * max(1.0, abs(mid)):
                break
            if secular(mid) < 0.0:
                a = mid
            else:
                b = mid
        else:
            raise ConvergenceError(f"secular bisection in ({lo}, {hi}) did not converge")
        roots.append(0.5 * (a + b))
    return np.array(roots)


@dataclass(frozen=True)
class EigenClasses:
    d1: int
    d2: int
    e_pairs: np.ndarray  # ordered pairs (a, b), a != b, row-major
    h_vals: np.ndarray  # each with multiplicity d2 - d1
    g_vals: np.ndarray
    gamma: np.ndarray

    @property
    def h_multiplicity(self) -> int:
        return self.d2 - self.d1

    def flatten(self) -> np.ndarray:
        """All ``d1*d2`` eigenvalues with multiplicity, descending."""
        vals = np.concatenate([self.e_pairs, np.repeat(self.h_vals, self.h_multiplicity), self.g_vals])
        return np.sort(vals)[::-1]

    def to_dict(self) -> dict:
        return {
            "d1": self.d1,
            "d2": self.d2,
            "e_pairs": self.e_pairs.tolist(),
            "h_vals": self.h_vals.tolist(),
            "h_multiplicity": self.h_multiplicity,
            "g_vals": self.g_vals.tolist(),
            "gamma": self.gamma.tolist(),
            "spectrum": self.flatten().tolist(),
        }


def _clamp(x: np.ndarray) -> np.ndarray:
    return np.where((x < 0.0) & (x > -CLAMP_TOL), 0.0, x)


def analytic_spectrum(lam, d1: int, d2: int, method: str = "eigen") -> EigenClasses:
    d1, d2 = canonical_dims(d1, d2)
    lam = as_schmidt(lam)
    if lam.size != d1:
        raise DimensionError(f"Schmidt vector has length {lam.size}, expected {d1}")
    norm = (d1 - 1) * (d2 - 1)
    a, b = np.where(~np.eye(d1, dtype=bool))
    e = _clamp((1.0 - lam[a] - lam[b]) / norm)
    h = _clamp((1.0 - lam) / norm)
    gamma = solve_secular(lam, method=method)
    g = _clamp(gamma / norm)
    return EigenClasses(d1=d1, d2=d2, e_pairs=e, h_vals=h, g_vals=g, gamma=gamma)


def pnorm_power(lam, d1: int, d2: int, p: float) -> float:
    """``||sigma_12(lam)||_p^p`` through the analytic spectrum."""
    vals = analytic_spectrum(lam, d1, d2).flatten()
    return float(np.sum(vals**p))


@dataclass(frozen=True)
class PNormDecomposition:
    """``||sigma||_p^p = c1 sum e~^p + c2 sum h~^p + c3 sum g~^p = t1 + t2 + t3``.

    The rescaled families each sum to one. ``e_tilde`` is undefined when
    ``d1 == 2`` and ``h_tilde`` when ``d1 == d2``; reading them then raises
    :class:`DegenerateClassError`.
    """

    p: float
    d1: int
    d2: int
    t1: float
    t2: float
    t3: float
    c1: float
    c2: float
    c3: float
    g_tilde: np.ndarray
    _e_tilde: np.ndarray | None = field(default=None, repr=False)
    _h_tilde: np.ndarray | None = field(default=None, repr=False)

    @property
    def e_degenerate(self) -> bool:
        return self._e_tilde is None

    @property
    def h_degenerate(self) -> bool:
        return self._h_tilde is None

    @property
    def e_tilde(self) -> np.ndarray:
        if self._e_tilde is None:
            raise DegenerateClassError(f"e-class rescaling undefined for d1 = {self.d1}")
        return self._e_tilde

    @property
    def h_tilde(self) -> np.ndarray:
        if self._h_tilde is None:
            raise DegenerateClassError(f"h-class is empty for d1 = d2 = {self.d1}")
        return self._h_tilde

    @property
    def total(self) -> float:
        return self.t1 + self.t2 + self.t3


def decompose(classes: EigenClasses, p: float) -> PNormDecomposition:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    d1, d2 = classes.d1, classes.d2
    c1 = ((d1 - 2) / (d2 - 1)) ** p
    c2 = (d2 - d1) * float(d2 - 1) ** (-p)
    # Unit trace forces sum(g) = 1/(d2-1), hence this rescaling.
    c3 = float(d2 - 1) ** (-p)
    g_tilde = (d2 - 1) * classes.g_vals
    t3 = c3 * float(np.sum(g_tilde**p))
    e_tilde = h_tilde = None
    t1 = t2 = 0.0
    if d1 > 2:
        e_tilde = (d2 - 1) / (d1 - 2) * classes.e_pairs
        t1 = c1 * float(np.sum(e_tilde**p))
    if d2 > d1:
        h_tilde = (d2 - 1) * classes.h_vals
        t2 = c2 * float(np.sum(h_tilde**p))
    return PNormDecomposition(
        p=p, d1=d1, d2=d2, t1=t1, t2=t2, t3=t3, c1=c1, c2=c2, c3=c3,
        g_tilde=g_tilde, _e_tilde=e_tilde, _h_tilde=h_tilde,
    )


def pnorm_decomposition(lam, d1: int, d2: int, p: float) -> PNormDecomposition:
    return decompose(analytic_spectrum(lam, d1, d2), p)


def symmetric_polynomials(x) -> np.ndarray:
    """``[s_0, s_1, ..., s_n]`` from the coefficients of ``prod(1 + t x_i)``."""
    x = np.asarray(x, dtype=float).ravel()
    s = np.zeros(x.size + 1)
    s[0] = 1.0
    for k, xi in enumerate(x, start=1):
        s[1 : k + 1] = s[1 : k + 1] + xi * s[:k]
    return s


def s_hat(lam, k: int) -> float:
    """k-th elementary symmetric polynomial of the secular roots."""
    gamma = solve_secular(lam)
    if not 0 <= k <= gamma.size:
        raise ValueError(f"k must lie in 0..{gamma.size}, got {k}")
    return float(symmetric_polynomials(gamma)[k])
