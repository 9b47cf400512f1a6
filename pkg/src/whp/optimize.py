"""Maximal p-norms of Werner-Holevo channels and their tensor products."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import canonical_dims, product_output
from .errors import ConvergenceError, DimensionError
from .linalg import eigvalsh
from .spectrum import pnorm_power

TIE_TOL = 1e-12


def nu_single(d: int, p: float) -> float:
    """Maximal output p-norm of the d-dimensional Werner-Holevo channel.

    Every pure input gives the spectrum ``{0, 1/(d-1) x (d-1)}``, so the
    maximum is state independent: ``(d-1)**(1/p - 1)``.
    """
    if d < 2:
        raise DimensionError(f"d must be >= 2, got {d}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float((d - 1) ** (1.0 / p - 1.0))


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


@dataclass(frozen=True)
class OptimizerConfig:
    fd_step: float = 1e-6
    initial_step: float = 0.1
    min_step: float = 1e-12
    ftol: float = 1e-13
    max_iter: int = 5000
    oracle_check: bool = True
    oracle_tol: float = 1e-9


@dataclass
class OptimizationResult:
    d1: int
    d2: int
    p: float
    best_lambda: np.ndarray
    best_value: float
    vertex_value: float
    gap: float
    restarts: int
    converged: bool
    iterations_total: int
    restart_values: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["best_lambda"] = self.best_lambda.tolist()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _objective(lam, d1, d2, p) -> float:
    return pnorm_power(lam, d1, d2, p)


def _gradient(lam: np.ndarray, d1, d2, p, h: float) -> np.ndarray:
    # Differences are taken on the unnormalized vector and mapped back to the
    # simplex, so steps never leave it; coordinates within h of 0 use a
    # forward difference.
    def f(x):
        return _objective(x / x.sum(), d1, d2, p)

    grad = np.zeros_like(lam)
    f0 = None
    for i in range(lam.size):
        up = lam.copy()
        up[i] += h
        if lam[i] >= h:
            down = lam.copy()
            down[i] -= h
            grad[i] = (f(up) - f(down)) / (2 * h)
        else:
            if f0 is None:
                f0 = f(lam)
            grad[i] = (f(up) - f0) / h
    return grad - grad.mean()


def ascend(start, d1: int, d2: int, p: float, config: OptimizerConfig = OptimizerConfig()):
    """Projected-gradient ascent from ``start``; returns (lambda, value, iterations, converged).

    Steps go along the unit-normalized gradient, halving from
    ``initial_step`` until the projected point improves the objective.
    """
    lam = project_simplex(start)
    value = _objective(lam, d1, d2, p)
    for it in range(1, config.max_iter + 1):
        grad = _gradient(lam, d1, d2, p, config.fd_step)
        norm = np.linalg.norm(grad)
        if norm == 0.0:
            return lam, value, it, True
        grad = grad / norm
        step = config.initial_step
        while True:
            trial = project_simplex(lam + step * grad)
            trial_value = _objective(trial, d1, d2, p)
            if trial_value > value:
                break
            step *= 0.5
            if step <= config.min_step:
                return lam, value, it, True
        gain = trial_value - value
        lam, value = trial, trial_value
        if gain <= config.ftol:
            return lam, value, it, True
    return lam, value, config.max_iter, False


def vertex(d: int) -> np.ndarray:
    v = np.zeros(d)
    v[0] = 1.0
    return v


def restart_starts(d: int, restarts: int, seed: int) -> list[np.ndarray]:
    """Vertex, barycenter, then ``restarts - 2`` Dirichlet points seeded by ``(seed, r)``."""
    starts = [vertex(d), np.full(d, 1.0 / d)]
    for r in range(2, restarts):
        starts.append(np.random.default_rng([seed, r]).dirichlet(np.ones(d)))
    return starts[:restarts]


def maximize_product_pnorm(d1: int, d2: int, p: float, restarts: int = 6, seed: int = 0,
                           config: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """Multi-start maximization of ``||sigma_12(lambda)||_p^p`` over the simplex."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    d1, d2 = canonical_dims(d1, d2)
    d = d1
    vertex_value = _objective(vertex(d), d1, d2, p)
    best_lam, best_value = vertex(d), vertex_value
    any_converged = False
    iterations = 0
    values = []
    for start in restart_starts(d, restarts, seed):
        lam, value, its, ok = ascend(start, d1, d2, p, config)
        iterations += its
        any_converged |= ok
        values.append(value)
        if config.oracle_check:
            dense = float(np.sum(np.clip(eigvalsh(product_output(lam, d1, d2)), 0.0, None) ** p))
            if abs(dense - value) > config.oracle_tol:
                raise ConvergenceError(
                    f"analytic objective {value!r} disagrees with dense spectrum {dense!r} at {lam}"
                )
        if value > best_value + TIE_TOL:
            best_lam, best_value = lam, value
    if not any_converged:
        raise ConvergenceError(f"no restart converged for d1={d1}, d2={d2}, p={p}")
    gap = best_value - vertex_value
    return OptimizationResult(
        d1=d1, d2=d2, p=p, best_lambda=best_lam, best_value=best_value,
        vertex_value=vertex_value, gap=gap, restarts=restarts, converged=any_converged,
        iterations_total=iterations, restart_values=values,
    )


def multiplicativity_gap(d1: int, d2: int, p: float, restarts: int = 6, seed: int = 0,
                         config: OptimizerConfig = OptimizerConfig()) -> float:
    """Optimized ``||sigma_12||_p^p`` minus ``(nu_p(Phi_d1) nu_p(Phi_d2))**p``."""
    res = maximize_product_pnorm(d1, d2, p, restarts, seed, config)
    return res.best_value - (nu_single(d1, p) * nu_single(d2, p)) ** p


def vertex_distance(lam) -> float:
    """l-infinity distance from the sorted vector to (1, 0, ..., 0)."""
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]
    return float(np.max(np.abs(lam - vertex(lam.size))))


def barycenter_excess(d: int, p: float) -> float:
    """Barycenter value minus vertex value of ``||sigma_12||_p^p`` at d1 = d2 = d."""
    return _objective(np.full(d, 1.0 / d), d, d, p) - _objective(vertex(d), d, d, p)


def find_crossover(d: int, p_lo: float, p_hi: float, tol: float = 1e-6, max_iter: int = 200) -> float:
    """Bisect for the exponent where the maximally entangled input overtakes product inputs."""
    if d < 3:
        raise DimensionError("crossover needs d >= 3")
    f_lo, f_hi = barycenter_excess(d, p_lo), barycenter_excess(d, p_hi)
    if not (f_lo < 0.0 < f_hi):
        raise ValueError(f"no sign change on [{p_lo}, {p_hi}]: F = ({f_lo:.3e}, {f_hi:.3e})")
    lo, hi = p_lo, p_hi
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if barycenter_excess(d, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
