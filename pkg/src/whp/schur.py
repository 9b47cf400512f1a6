"""Majorization, Schur-convexity harness and divided-difference calculus.

Divided differences are evaluated as the symmetric sum
``sum_j g(x_j) / prod_{i != j} (x_j - x_i)``. That sum cancels heavily once
nodes get close, so it is accumulated with ``mpmath`` at ``DPS`` digits on the
(exact) binary values of the float nodes.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable

import mpmath
import numpy as np

from .errors import NodeCoalescenceError
from .spectrum import pnorm_decomposition, s_hat, symmetric_polynomials

MAJORIZATION_TOL = 1e-12
SCHUR_TOL = 1e-10
SEPARATION = 1e-6
DPS = 60


# -- majorization -----------------------------------------------------------

def majorizes(x, y, tol: float = MAJORIZATION_TOL) -> bool:
    """True iff ``x`` is majorized by ``y`` (``x < y`` in the majorization order)."""
    x, y = np.asarray(x, dtype=float).ravel(), np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if abs(x.sum() - y.sum()) > 1e-10:
        raise ValueError(f"sum mismatch: {x.sum():.15g} vs {y.sum():.15g}")
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    return bool(np.all(cx <= cy + tol))


@dataclass(frozen=True)
class MajorizationPair:
    lower: np.ndarray
    upper: np.ndarray


def random_majorization_pair(upper, seed, mixes: int = 3) -> MajorizationPair:
    """``lower = D @ upper`` for a random doubly stochastic ``D``.

    ``D`` is a Dirichlet-weighted mix of ``mixes`` uniformly random permutation
    matrices, so ``lower`` is majorized by ``upper`` by construction.
    """
    if mixes < 1:
        raise ValueError("mixes must be >= 1")
    upper = np.asarray(upper, dtype=float).ravel()
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(mixes)) if mixes > 1 else np.ones(1)
    lower = np.zeros_like(upper)
    for w in weights:
        lower += w * upper[rng.permutation(upper.size)]
    return MajorizationPair(lower=lower, upper=upper.copy())


def sample_simplex(rng: np.random.Generator, d: int, sparsify: float = 0.2) -> np.ndarray:
    """Uniform Dirichlet point, then each coordinate zeroed with prob. ``sparsify``."""
    x = rng.exponential(size=d)
    if sparsify > 0:
        keep = rng.random(d) >= sparsify
        if keep.any():
            x = x * keep
    return x / x.sum()


# -- Schur-convexity harness ------------------------------------------------

@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    function: str
    direction: str
    dims: int | list[int]
    p: float | None
    pairs: int
    violations: int
    worst_margin: float
    worst_pair: dict | None
    seed: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class SchurTestError(RuntimeError):
    def __init__(self, message, lower, upper):
        super().__init__(message)
        self.lower, self.upper = lower, upper


def schur_test(
    fn: Callable[[np.ndarray], float],
    d: int,
    pairs: int,
    seed: int,
    direction: str = "convex",
    tol: float = SCHUR_TOL,
    name: str | None = None,
    dims=None,
    p: float | None = None,
) -> TestReport:
    """Check ``fn(lower) <= fn(upper)`` (convex) or ``>=`` (concave) on random pairs.

    Pair ``i`` is drawn from its own generator seeded with ``(seed, i)``.
    ``worst_margin`` is the largest signed violation observed, negative when
    every pair satisfied the inequality strictly.
    """
    if pairs < 1:
        raise ValueError("pairs must be >= 1")
    if direction not in ("convex", "concave"):
        raise ValueError(f"direction must be 'convex' or 'concave', not {direction!r}")
    sign = 1.0 if direction == "convex" else -1.0
    violations = 0
    worst = -math.inf
    worst_pair = None
    for i in range(pairs):
        rng = np.random.default_rng([seed, i])
        upper = sample_simplex(rng, d)
        pair = random_majorization_pair(upper, rng.integers(2**63), mixes=int(rng.integers(1, d + 2)))
        try:
            margin = sign * (fn(pair.lower) - fn(pair.upper))
        except Exception as exc:
            raise SchurTestError(f"evaluation failed on sample {i}: {exc}", pair.lower, pair.upper) from exc
        if margin > tol:
            violations += 1
        if margin > worst:
            worst = margin
            if margin > tol:
                worst_pair = {"lower": pair.lower.tolist(), "upper": pair.upper.tolist()}
    return TestReport(
        function=name or getattr(fn, "__name__", "fn"),
        direction=direction,
        dims=dims if dims is not None else d,
        p=p,
        pairs=pairs,
        violations=violations,
        worst_margin=float(worst),
        worst_pair=worst_pair,
        seed=seed,
    )


def t_component(d1: int, d2: int, p: float, which: str = "t3") -> Callable[[np.ndarray], float]:
    def fn(lam):
        return getattr(pnorm_decomposition(lam, d1, d2, p), which)

    fn.__name__ = which
    return fn


def s_hat_function(k: int) -> Callable[[np.ndarray], float]:
    def fn(lam):
        return s_hat(lam, k)

    fn.__name__ = f"s_hat_{k}"
    return fn


# -- divided differences ----------------------------------------------------

def char_poly_coeffs(x) -> np.ndarray:
    """Coefficients of ``prod(t - x_i)``, ascending: entry k multiplies ``t**k``."""
    s = symmetric_polynomials(x)
    n = s.size - 1
    return np.array([(-1) ** (n - k) * s[n - k] for k in range(n + 1)])


def check_separation(nodes, separation: float = SEPARATION) -> np.ndarray:
    x = np.asarray(nodes, dtype=float).ravel()
    if x.size >= 2:
        gap = np.min(np.diff(np.sort(x)))
        if gap <= separation:
            raise NodeCoalescenceError(f"node gap {gap:.3e} not above {separation:.1e}")
    return x


def _weights(x: np.ndarray) -> list:
    # 1 / prod_{i != j} (x_j - x_i), exact on the binary node values
    xs = [mpmath.mpf(float(v)) for v in x]
    out = []
    for j, xj in enumerate(xs):
        prod = mpmath.mpf(1)
        for i, xi in enumerate(xs):
            if i != j:
                prod *= xj - xi
        out.append(1 / prod)
    return out


def droot_dsm(nodes, j: int, m: int, separation: float = SEPARATION) -> float:
    """Sensitivity of root ``x_j`` to the elementary symmetric polynomial ``s_m``.

    ``j`` is 0-based.
    """
    x = check_separation(nodes, separation)
    n = x.size
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in 1..{n}, got {m}")
    with mpmath.workdps(DPS):
        w = _weights(x)[j]
        return float((-1) ** (m + 1) * mpmath.mpf(float(x[j])) ** (n - m) * w)


@dataclass(frozen=True)
class DividedDifferenceProbe:
    nodes: np.ndarray
    p: float
    m: int


def df_dsm(probe: DividedDifferenceProbe, separation: float = SEPARATION) -> float:
    """Derivative of ``f(x) = sum x_i**p`` with respect to ``s_m`` (chain rule over roots)."""
    x = check_separation(probe.nodes, separation)
    n, m, p = x.size, probe.m, probe.p
    if not 2 <= m <= n:
        raise ValueError(f"m must lie in 2..{n}, got {m}")
    with mpmath.workdps(DPS):
        mp_p = mpmath.mpf(p)
        total = mpmath.mpf(0)
        for xj, wj in zip(x, _weights(x)):
            xj = mpmath.mpf(float(xj))
            total += (-1) ** (m + 1) * xj ** (n - m) * mp_p * xj ** (mp_p - 1) * wj
        return float(total)


def newton_divided_difference(g: Callable, nodes, separation: float = SEPARATION) -> float:
    """Leading coefficient of the polynomial interpolating ``g`` at ``nodes``.

    ``g`` is called with ``mpmath.mpf`` arguments, so plain arithmetic
    (``x**k``, ``*``, ``+``) is evaluated in extended precision.
    """
    x = check_separation(nodes, separation)
    with mpmath.workdps(DPS):
        total = mpmath.mpf(0)
        for xj, wj in zip(x, _weights(x)):
            total += g(mpmath.mpf(float(xj))) * wj
        return float(total)


def g_m(n: int, m: int, p: float) -> Callable:
    """``(-1)^(m+1) p x^(n-m+p-1)``, whose divided difference is ``df/ds_m``."""
    def g(x):
        return (-1) ** (m + 1) * p * x ** (n - m + p - 1)

    return g


def g_m_derivative(n: int, m: int, p: float) -> Callable:
    """(n-1)-th derivative of :func:`g_m`."""
    coeff = (-1) ** (m + 1) * p
    for k in range(1, n):
        coeff *= p - m + k
    exponent = p - m

    def dg(x):
        return coeff * np.asarray(x, dtype=float) ** exponent

    return dg


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    stderr: float
    samples: int


def hermite_genocchi(g_deriv: Callable, nodes, samples: int = 100_000, seed: int = 0) -> MonteCarloEstimate:
    """Monte-Carlo simplex integral of ``g^(n-1)(sum t_i x_i)``.

    The integral over the standard (n-1)-simplex equals the divided difference
    of ``g`` at the nodes; the simplex volume is ``1/(n-1)!``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    x = np.asarray(nodes, dtype=float).ravel()
    n = x.size
    rng = np.random.default_rng(seed)
    t = rng.exponential(size=(samples, n))
    t /= t.sum(axis=1, keepdims=True)
    vals = np.asarray(g_deriv(t @ x), dtype=float)
    vol = 1.0 / math.factorial(n - 1)
    stderr = vol * vals.std(ddof=1) / math.sqrt(samples) if samples > 1 else math.inf
    return MonteCarloEstimate(value=float(vol * vals.mean()), stderr=float(stderr), samples=samples)


def random_probe_nodes(rng: np.random.Generator, n: int, separation: float = SEPARATION,
                       max_tries: int = 1000) -> np.ndarray:
    """Dirichlet point on the simplex with all pairwise gaps above ``separation``."""
    for _ in range(max_tries):
        x = rng.exponential(size=n)
        x /= x.sum()
        if np.min(np.diff(np.sort(x))) > separation:
            return x
    raise RuntimeError(f"no separated sample in {max_tries} tries")


def perturbed_f(nodes, p: float, m: int, eps: float) -> tuple[float, float, float]:
    """Finite-difference oracle for ``df/ds_m``.

    Shifts ``s_m`` by ``+-eps`` in the characteristic polynomial, re-solves the
    roots (companion matrix, then Newton polishing in extended precision) and
    returns ``(f_plus, f_minus, actual_shift)``.
    """
    x = np.asarray(nodes, dtype=float)
    n = x.size
    s = symmetric_polynomials(x)
    results = []
    shifts = []
    for sgn in (1, -1):
        sp = s.copy()
        sp[m] = s[m] + sgn * eps
        shifts.append(sp[m])
        # descending coefficients of sum_k (-1)^(n-k) s_(n-k) t^k
        desc = [(-1) ** i * sp[i] for i in range(n + 1)]
        guess = np.sort(np.roots(desc).real)
        with mpmath.workdps(40):
            coeffs = [mpmath.mpf(float(c)) for c in desc]
            polished = [mpmath.findroot(lambda t: mpmath.polyval(coeffs, t), mpmath.mpf(float(r))) for r in guess]
            results.append(float(sum(r**p for r in polished)))
    return results[0], results[1], shifts[0] - shifts[1]
