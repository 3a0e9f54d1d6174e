"""Seeded random-restart simplex search for the sup/inf problems.

Every restart draws its starting point from a seed derived as
(master_seed, restart_index), so results are reproducible bit-for-bit
and independent of whether restarts run serially or on a thread pool.

Two execution lanes share those semantics. The generic lane accepts any
python callable and chains a few simplex descents with shrinking spread.
The kernel lane handles the two entropy objectives that dominate this
library (steered-ensemble divergence and decomposition roofs); it runs a
compiled simplex loop through a graded-smoothing schedule, because those
surfaces develop cusps wherever an ensemble member turns pure and plain
descent stalls in the resulting ravines. Smoothing floors the member
spectra, which merges the spurious basins; the floor is then annealed
away stage by stage with small re-seeding kicks at each level.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import NonFiniteObjective, ValidationError
from .measurements import _rotation_pairs

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

_POLISH_ROUNDS = 8
_POLISH_SHRINK = 0.25

# graded-smoothing ladder: spectra floored at mu, annealed geometrically
_MU_TOP = 3e-2
_MU_RATIO = 0.55
_MU_STAGES = 12
_FINAL_HOPS = 8
_STAGE_HOPS = 2
_ALPHA_ONE_WINDOW = 1e-6


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 2000
    objective_tol: float = 1e-8
    simplex_init_scale: float = 0.3
    master_seed: int = 0
    parallel: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValidationError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.objective_tol > 0 or not self.simplex_init_scale > 0:
            raise ValidationError("tolerances must be positive")


@dataclass(frozen=True, eq=False)
class OptReport:
    best_value: float
    best_params: np.ndarray
    per_restart_values: np.ndarray
    evaluations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class SearchKernel:
    """Compiled-lane description of one of the two entropy objectives.

    kind 0: rank-1 measurement steering; cdata is the regrouped state
    (dim*dim, d_keep*d_keep) and the value minimized is minus the
    ensemble divergence. kind 1: decomposition roof; cdata is the
    purification matrix (d_keep*other, dim) and the value minimized is
    the average member entropy. Either way the search space is the angle
    vector of an n_vec x dim isometry.
    """

    kind: int
    cdata: np.ndarray
    n_vec: int
    dim: int
    d_keep: int
    alpha: float
    s_avg: float = 0.0


def _simplex(x0: np.ndarray, scale: float) -> np.ndarray:
    n = x0.size
    s = np.tile(x0, (n + 1, 1))
    s[1:] += scale * np.eye(n)
    return s


def _one_restart(f, x0, config: OptimizerConfig):
    """Chained simplex descents from x0; returns (value, params, nfev, converged)."""
    x = x0
    fx = f(x0)
    nfev = 1
    remaining = config.max_iters
    scale = config.simplex_init_scale
    converged = False
    for _ in range(_POLISH_ROUNDS):
        if remaining <= 0:
            break
        res = minimize(
            f,
            x,
            method="Nelder-Mead",
            options={
                "maxiter": remaining,
                "xatol": 1e-9,
                "fatol": config.objective_tol,
                "initial_simplex": _simplex(x, scale),
            },
        )
        remaining -= res.nit
        nfev += res.nfev
        improved = fx - res.fun
        if res.fun < fx:
            x, fx = res.x, res.fun
        scale *= _POLISH_SHRINK
        if res.success and improved < config.objective_tol:
            converged = True
            break
    return fx, x, nfev, converged


if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _kernel_value(kind, cdata, ii, jj, x, n, dim, dkeep, alpha, mu, s_avg):  # pragma: no cover - jitted
        npairs = ii.size
        v = np.zeros((n, dim), dtype=np.complex128)
        for t in range(dim):
            chi = x[2 * npairs + t]
            v[t, t] = complex(math.cos(chi), math.sin(chi))
        for p in range(npairs):
            c = math.cos(x[p])
            s = math.sin(x[p])
            e = complex(math.cos(x[npairs + p]), math.sin(x[npairs + p]))
            i = ii[p]
            j = jj[p]
            for col in range(dim):
                a = v[i, col]
                b = v[j, col]
                v[i, col] = c * a - s * e * b
                v[j, col] = s * np.conj(e) * a + c * b

        acc = 0.0
        shannon = abs(alpha - 1.0) <= _ALPHA_ONE_WINDOW
        member = np.empty((dkeep, dkeep), dtype=np.complex128)
        dother = cdata.shape[0] // dkeep if kind == 1 else 0
        phi = np.empty(cdata.shape[0], dtype=np.complex128)
        for xo in range(n):
            if kind == 0:
                for a_ in range(dkeep):
                    for b_ in range(dkeep):
                        t_ = a_ * dkeep + b_
                        z = 0.0 + 0.0j
                        for r in range(dim):
                            vr = v[xo, r]
                            for s_ in range(dim):
                                z += vr * np.conj(v[xo, s_]) * cdata[r * dim + s_, t_]
                        member[a_, b_] = z
            else:
                for i_ in range(cdata.shape[0]):
                    z = 0.0 + 0.0j
                    for k_ in range(dim):
                        z += cdata[i_, k_] * v[xo, k_]
                    phi[i_] = z
                for a_ in range(dkeep):
                    for c_ in range(dkeep):
                        z = 0.0 + 0.0j
                        for b_ in range(dother):
                            z += phi[a_ * dother + b_] * np.conj(phi[c_ * dother + b_])
                        member[a_, c_] = z
            p = 0.0
            for a_ in range(dkeep):
                p += member[a_, a_].real
            if p <= 1e-12:
                continue
            if dkeep == 2:
                m00 = member[0, 0].real / p
                m11 = member[1, 1].real / p
                br = member[0, 1].real / p
                bi = member[0, 1].imag / p
                half = 0.5 * (m00 + m11)
                det = m00 * m11 - (br * br + bi * bi)
                disc = half * half - det
                if disc < 0.0:
                    disc = 0.0
                disc = math.sqrt(disc)
                w = np.empty(2)
                w[0] = half - disc
                w[1] = half + disc
            else:
                w = np.linalg.eigvalsh(member / p)
            if mu > 0.0:
                for q_ in range(dkeep):
                    w[q_] = (max(w[q_], 0.0) + mu) / (1.0 + dkeep * mu)
            ent = 0.0
            if shannon:
                for q_ in range(dkeep):
                    if w[q_] > 1e-12:
                        ent -= w[q_] * math.log2(w[q_])
            else:
                pow_sum = 0.0
                for q_ in range(dkeep):
                    if w[q_] > 1e-12:
                        pow_sum += w[q_] ** alpha
                ent = math.log2(pow_sum) / (1.0 - alpha)
            acc += p * ent
        if kind == 0:
            return acc - s_avg
        return acc

    @njit(cache=True, nogil=True)
    def _nm_descent_nb(kind, cdata, ii, jj, x0, n, dim, dkeep, alpha, mu, s_avg,
                       scale, maxiter, xatol, fatol):  # pragma: no cover - jitted
        k = x0.size
        sim = np.empty((k + 1, k))
        fsim = np.empty(k + 1)
        sim[0] = x0
        fsim[0] = _kernel_value(kind, cdata, ii, jj, x0, n, dim, dkeep, alpha, mu, s_avg)
        for i in range(k):
            sim[i + 1] = x0
            sim[i + 1, i] += scale
            fsim[i + 1] = _kernel_value(kind, cdata, ii, jj, sim[i + 1], n, dim, dkeep, alpha, mu, s_avg)
        nfev = k + 1
        nit = 0
        while nit < maxiter:
            order = np.argsort(fsim)
            sim = sim[order]
            fsim = fsim[order]
            xspread = 0.0
            fspread = 0.0
            for i in range(1, k + 1):
                df = abs(fsim[i] - fsim[0])
                if df > fspread:
                    fspread = df
                for j in range(k):
                    dx = abs(sim[i, j] - sim[0, j])
                    if dx > xspread:
                        xspread = dx
            if xspread <= xatol and fspread <= fatol:
                break
            nit += 1
            xbar = np.zeros(k)
            for i in range(k):
                for j in range(k):
                    xbar[j] += sim[i, j]
            for j in range(k):
                xbar[j] /= k
            xr = 2.0 * xbar - sim[k]
            fr = _kernel_value(kind, cdata, ii, jj, xr, n, dim, dkeep, alpha, mu, s_avg)
            nfev += 1
            if fr < fsim[0]:
                xe = 3.0 * xbar - 2.0 * sim[k]
                fe = _kernel_value(kind, cdata, ii, jj, xe, n, dim, dkeep, alpha, mu, s_avg)
                nfev += 1
                if fe < fr:
                    sim[k] = xe
                    fsim[k] = fe
                else:
                    sim[k] = xr
                    fsim[k] = fr
            elif fr < fsim[k - 1]:
                sim[k] = xr
                fsim[k] = fr
            else:
                if fr < fsim[k]:
                    xc = 1.5 * xbar - 0.5 * sim[k]
                    fc = _kernel_value(kind, cdata, ii, jj, xc, n, dim, dkeep, alpha, mu, s_avg)
                    nfev += 1
                    if fc <= fr:
                        sim[k] = xc
                        fsim[k] = fc
                    else:
                        for i in range(1, k + 1):
                            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                            fsim[i] = _kernel_value(kind, cdata, ii, jj, sim[i], n, dim, dkeep, alpha, mu, s_avg)
                        nfev += k
                else:
                    xcc = 0.5 * (xbar + sim[k])
                    fcc = _kernel_value(kind, cdata, ii, jj, xcc, n, dim, dkeep, alpha, mu, s_avg)
                    nfev += 1
                    if fcc < fsim[k]:
                        sim[k] = xcc
                        fsim[k] = fcc
                    else:
                        for i in range(1, k + 1):
                            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                            fsim[i] = _kernel_value(kind, cdata, ii, jj, sim[i], n, dim, dkeep, alpha, mu, s_avg)
                        nfev += k
        best = 0
        for i in range(1, k + 1):
            if fsim[i] < fsim[best]:
                best = i
        return fsim[best], sim[best], nit, nfev

    @njit(cache=True, nogil=True)
    def _chain_nb(kind, cdata, ii, jj, xstart, n, dim, dkeep, alpha, mu, s_avg,
                  budget, scale0, rounds, fatol):  # pragma: no cover - jitted
        x = xstart.copy()
        fx = _kernel_value(kind, cdata, ii, jj, x, n, dim, dkeep, alpha, mu, s_avg)
        nfev = 1
        used = 0
        scale = scale0
        for _ in range(rounds):
            if used >= budget:
                break
            fv, xv, nit, ne = _nm_descent_nb(
                kind, cdata, ii, jj, x, n, dim, dkeep, alpha, mu, s_avg,
                scale, budget - used, 1e-9, fatol,
            )
            used += nit
            nfev += ne
            if fv < fx:
                x = xv
                fx = fv
            scale *= 0.25
        return fx, x, used, nfev

    @njit(cache=True, nogil=True)
    def _anneal_restart_nb(kind, cdata, ii, jj, x0, noise, mus, n, dim, dkeep,
                           alpha, s_avg, b_init, b_stage, b_shop, b_final,
                           b_fhop, max_total, scale_init, fatol, tol):  # pragma: no cover - jitted
        used = 0
        nfev = 0
        budget = min(b_init, max_total - used)
        fx, x, u, ne = _chain_nb(kind, cdata, ii, jj, x0, n, dim, dkeep, alpha,
                                 mus[0], s_avg, budget, scale_init, 8, fatol)
        used += u
        nfev += ne
        nstages = mus.size - 1
        for st in range(nstages):
            if used >= max_total:
                break
            mu = mus[st + 1]
            budget = min(b_stage, max_total - used)
            fx, x, u, ne = _chain_nb(kind, cdata, ii, jj, x, n, dim, dkeep,
                                     alpha, mu, s_avg, budget, 0.1, 3, fatol)
            used += u
            nfev += ne
            for h in range(_STAGE_HOPS):
                if used >= max_total:
                    break
                xt = x + 0.15 * noise[st * _STAGE_HOPS + h]
                budget = min(b_shop, max_total - used)
                f2, x2, u, ne = _chain_nb(kind, cdata, ii, jj, xt, n, dim, dkeep,
                                          alpha, mu, s_avg, budget, 0.06, 2, fatol)
                used += u
                nfev += ne
                if f2 < fx:
                    x = x2
                    fx = f2
        budget = min(b_final, max_total - used)
        fx, x, u, ne = _chain_nb(kind, cdata, ii, jj, x, n, dim, dkeep, alpha,
                                 0.0, s_avg, budget, 0.05, 5, fatol)
        used += u
        nfev += ne
        last_gain = 1.0
        for h in range(_FINAL_HOPS):
            if used >= max_total:
                break
            sigma = 0.2 if h % 2 == 0 else 0.08
            xt = x + sigma * noise[nstages * _STAGE_HOPS + h]
            budget = min(b_fhop, max_total - used)
            f2, x2, u, ne = _chain_nb(kind, cdata, ii, jj, xt, n, dim, dkeep,
                                      alpha, 0.0, s_avg, budget, 0.05, 3, fatol)
            used += u
            nfev += ne
            if f2 < fx:
                last_gain = fx - f2
                x = x2
                fx = f2
        converged = 1 if last_gain < tol else 0
        return fx, x, used, nfev, converged


def _kernel_restart(kernel: SearchKernel, r: int, cfg: OptimizerConfig,
                    param_count: int):
    """One compiled-lane restart; same seeding contract as the generic lane."""
    rng = np.random.default_rng(np.random.SeedSequence((cfg.master_seed, r)))
    x0 = rng.uniform(-math.pi, math.pi, param_count)
    hop_rows = (_MU_STAGES - 1) * _STAGE_HOPS + _FINAL_HOPS
    noise = rng.standard_normal((hop_rows, param_count))
    ii, jj = _rotation_pairs(kernel.n_vec, kernel.dim)
    mi = cfg.max_iters
    fx, x, used, nfev, conv = _anneal_restart_nb(
        kernel.kind, kernel.cdata, ii, jj, x0, noise,
        np.array([_MU_TOP * _MU_RATIO**j for j in range(_MU_STAGES)]),
        kernel.n_vec, kernel.dim, kernel.d_keep, kernel.alpha, kernel.s_avg,
        max(100, 3 * mi // 32), max(60, mi // 44), max(40, mi // 64),
        max(100, 5 * mi // 64), max(60, mi // 32), mi,
        cfg.simplex_init_scale, cfg.objective_tol, cfg.objective_tol,
    )
    return fx, x, nfev, bool(conv)


def optimize_scalar(
    objective,
    param_count: int,
    direction: str,
    config: OptimizerConfig | None = None,
    kernel: SearchKernel | None = None,
) -> OptReport:
    """Maximize or minimize a scalar objective over param_count free angles.

    When a SearchKernel describes the objective, restarts run on the
    compiled annealed lane instead of calling the python objective; the
    callers that use kernels re-evaluate their witnesses through public
    code paths, which keeps the two lanes honest against each other.
    """
    if param_count < 1:
        raise ValidationError(f"param_count must be >= 1, got {param_count}")
    if direction not in ("max", "min"):
        raise ValidationError(f"direction must be 'max' or 'min', got {direction!r}")
    cfg = config if config is not None else OptimizerConfig()
    sign = -1.0 if direction == "max" else 1.0

    def f(x):
        v = sign * float(objective(x))
        if not math.isfinite(v):
            raise NonFiniteObjective(f"objective returned {v} at |x| = {np.abs(x).max():.3g}")
        return v

    use_kernel = kernel is not None and _HAVE_NUMBA
    if use_kernel:
        def run(r: int):
            return _kernel_restart(kernel, r, cfg, param_count)
    else:
        def run(r: int):
            rng = np.random.default_rng(np.random.SeedSequence((cfg.master_seed, r)))
            x0 = rng.uniform(-math.pi, math.pi, param_count)
            return _one_restart(f, x0, cfg)

    if cfg.parallel and cfg.restarts > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(run, range(cfg.restarts)))
    else:
        results = [run(r) for r in range(cfg.restarts)]

    values = np.array([sign * v for v, _, _, _ in results])
    best = 0
    for r in range(1, cfg.restarts):
        if direction == "max":
            if values[r] > values[best]:
                best = r
        elif values[r] < values[best]:
            best = r
    return OptReport(
        best_value=float(values[best]),
        best_params=results[best][1],
        per_restart_values=values,
        evaluations=sum(n for _, _, n, _ in results),
        converged=results[best][3],
    )
