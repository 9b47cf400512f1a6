"""Seeded verification sweeps that produce plain-dict reports.

Each function is deterministic in its arguments, so two runs with the same
seed yield equal reports.
"""
from __future__ import annotations

import numpy as np

from .channel import product_output
from .linalg import eigvalsh
from .optimize import (
    find_crossover,
    maximize_product_pnorm,
    nu_single,
    vertex_distance,
)
from .schur import (
    DividedDifferenceProbe,
    df_dsm,
    g_m_derivative,
    hermite_genocchi,
    perturbed_f,
    random_probe_nodes,
    s_hat_function,
    sample_simplex,
    schur_test,
    t_component,
)
from .spectrum import analytic_spectrum, solve_secular

MULTIPLICATIVITY_P = (1.01, 1.1, 1.25, 1.5, 1.75, 2.0)
SCHUR_P = (1.25, 1.5, 1.75, 2.0)
SCHUR_DIMS = ((3, 3), (3, 5), (4, 4), (2, 6))
DIVDIFF_P = (1.1, 1.5, 1.9)


def random_dims(rng: np.random.Generator, lo: int = 2, hi: int = 6) -> tuple[int, int]:
    a, b = rng.integers(lo, hi + 1, size=2)
    return (int(a), int(b)) if a <= b else (int(b), int(a))


def oracle_equivalence(samples: int = 500, seed: int = 0) -> dict:
    """Analytic vs dense-Jacobi spectra, plus the class-sum identities."""
    max_spec = max_e = max_h = max_g = max_trace = 0.0
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        d1, d2 = random_dims(rng)
        lam = sample_simplex(rng, d1)
        classes = analytic_spectrum(lam, d1, d2)
        dense = eigvalsh(product_output(lam, d1, d2))
        max_spec = max(max_spec, float(np.max(np.abs(classes.flatten() - dense))))
        max_e = max(max_e, abs(classes.e_pairs.sum() - (d1 - 2) / (d2 - 1)))
        max_h = max(max_h, abs(classes.h_vals.sum() - 1 / (d2 - 1)))
        max_g = max(max_g, abs(classes.g_vals.sum() - 1 / (d2 - 1)))
        total = classes.e_pairs.sum() + (d2 - d1) * classes.h_vals.sum() + classes.g_vals.sum()
        max_trace = max(max_trace, abs(total - 1.0))
    return {
        "samples": samples,
        "seed": seed,
        "max_spectrum_error": max_spec,
        "max_e_sum_error": float(max_e),
        "max_h_sum_error": float(max_h),
        "max_g_sum_error": float(max_g),
        "max_trace_error": float(max_trace),
    }


def multiplicativity_grid(ps=MULTIPLICATIVITY_P, dims=range(2, 6), restarts: int = 6, seed: int = 0) -> list[dict]:
    rows = []
    for p in ps:
        for d1 in dims:
            for d2 in dims:
                res = maximize_product_pnorm(d1, d2, p, restarts=restarts, seed=seed)
                product = (nu_single(d1, p) * nu_single(d2, p)) ** p
                rows.append({
                    "d1": d1, "d2": d2, "p": p,
                    "best_value": res.best_value,
                    "vertex_value": res.vertex_value,
                    "multiplicativity_gap": res.best_value - product,
                    "vertex_distance": vertex_distance(res.best_lambda),
                    "converged": res.converged,
                })
    return rows


def counterexample(d: int = 3, p: float = 5.0, tol: float = 1e-6, restarts: int = 6, seed: int = 0) -> dict:
    res = maximize_product_pnorm(d, d, p, restarts=restarts, seed=seed)
    bary = analytic_spectrum(np.full(d, 1.0 / d), d, d).flatten()
    vert = analytic_spectrum(np.eye(d)[0], d, d).flatten()
    return {
        "d": d,
        "p": p,
        "barycenter_value": float(np.sum(bary**p)),
        "vertex_value": float(np.sum(vert**p)),
        "optimized_value": res.best_value,
        "gap": res.gap,
        "p_star": find_crossover(d, 4.0, 6.0, tol),
    }


def golden_points() -> dict:
    out = {}
    for name, lam in (("vertex", [1.0, 0.0, 0.0]), ("barycenter", [1 / 3, 1 / 3, 1 / 3])):
        out[name] = {
            "analytic": analytic_spectrum(lam, 3, 3).flatten().tolist(),
            "dense": eigvalsh(product_output(lam, 3, 3)).tolist(),
            "gamma": solve_secular(lam).tolist(),
            "gamma_bisect": solve_secular(lam, method="bisect").tolist(),
        }
    return out


def schur_suite(ps=SCHUR_P, dims=SCHUR_DIMS, pairs: int = 500, seed: int = 0) -> list[dict]:
    reports = []
    for d1, d2 in dims:
        for p in ps:
            reports.append(schur_test(t_component(d1, d2, p, "t3"), d1, pairs, seed, "convex",
                                      name="t3", dims=[d1, d2], p=p).to_dict())
        for k in range(2, d1 + 1):
            reports.append(schur_test(s_hat_function(k), d1, pairs, seed, "concave",
                                      name=f"s_hat_{k}", dims=[d1, d2]).to_dict())
    return reports


def divided_difference_suite(probes: int = 1000, seed: int = 0, hg_samples: int = 100_000,
                 cross_checks: int = 12) -> dict:
    """Sign of df/ds_m on random probes, the p = 2 degeneracy, and two cross-oracles."""
    negative = total = 0
    worst_sign = -np.inf
    for i in range(probes):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(3, 7))
        p = DIVDIFF_P[i % len(DIVDIFF_P)]
        x = random_probe_nodes(rng, n)
        for m in range(2, n + 1):
            v = df_dsm(DividedDifferenceProbe(x, p, m))
            total += 1
            negative += v < 0.0
            worst_sign = max(worst_sign, v)

    p2_m2_max = -np.inf
    p2_higher_abs = 0.0
    for i in range(probes // 4):
        rng = np.random.default_rng([seed, probes + i])
        n = int(rng.integers(3, 7))
        x = random_probe_nodes(rng, n)
        p2_m2_max = max(p2_m2_max, df_dsm(DividedDifferenceProbe(x, 2.0, 2)))
        for m in range(3, n + 1):
            p2_higher_abs = max(p2_higher_abs, abs(df_dsm(DividedDifferenceProbe(x, 2.0, m))))

    hg_max_z = 0.0
    fd_max_rel = 0.0
    for i in range(cross_checks):
        rng = np.random.default_rng([seed, 10 * probes + i])
        n = int(rng.integers(3, 5))
        p = DIVDIFF_P[i % len(DIVDIFF_P)]
        x = random_probe_nodes(rng, n, separation=0.05)
        for m in range(2, n + 1):
            exact = df_dsm(DividedDifferenceProbe(x, p, m))
            est = hermite_genocchi(g_m_derivative(n, m, p), x, hg_samples, seed=int(rng.integers(2**63)))
            hg_max_z = max(hg_max_z, abs(est.value - exact) / est.stderr)
            f_plus, f_minus, shift = perturbed_f(x, p, m, 1e-7)
            fd = (f_plus - f_minus) / shift
            fd_max_rel = max(fd_max_rel, abs(fd - exact) / abs(exact))

    return {
        "probes": probes,
        "seed": seed,
        "derivatives_checked": total,
        "negative": int(negative),
        "max_derivative": float(worst_sign),
        "p2_m2_max": float(p2_m2_max),
        "p2_higher_max_abs": float(p2_higher_abs),
        "hermite_genocchi_max_z": float(hg_max_z),
        "finite_difference_max_rel": float(fd_max_rel),
    }
