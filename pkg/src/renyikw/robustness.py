"""Robustness of entanglement for pure states, state discrimination, and
the half-order entropy bounds that tie the two together.

The log-robustness of a pure state coincides with the half-order entropy
of its reduced state, giving two independent closed-form routes to the
same number; the discrimination bounds are checked by explicit POVM
optimization against the ensemble's success probability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .correlations import _child_seeds, c_alpha, eof_alpha
from .entropy import Ensemble, renyi_quantum
from .errors import DimMismatch, SingletonEnsemble
from .measurements import (
    Povm,
    _isometry,
    general_povm_from_blocks,
    isometry_param_count,
    measure_local,
)
from .optimize import OptimizerConfig, OptReport, optimize_scalar
from .states import DensityMatrix, PureState, ZERO_CUTOFF, partial_trace, purify, schmidt


@dataclass(frozen=True, eq=False)
class RobustnessValue:
    r_g: float
    lr_g: float


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    p_success: float
    optimal_povm: Povm
    opt_report: OptReport
    helstrom_value: float | None


def robustness_pure(psi_ab: PureState) -> RobustnessValue:
    """Generalized robustness of a bipartite pure state from its Schmidt data."""
    if len(psi_ab.dims) != 2:
        raise DimMismatch(f"need a bipartite pure state, got dims {psi_ab.dims}")
    c = schmidt(psi_ab, 1).coefficients
    r_g = max(float(c.sum()) ** 2 - 1.0, 0.0)
    return RobustnessValue(r_g=r_g, lr_g=math.log2(1.0 + r_g))


def check_half_lemma(psi_ab: PureState) -> tuple[float, float, float]:
    """Half-order reduced entropy vs log-robustness, by independent routes."""
    s_half = renyi_quantum(partial_trace(psi_ab.density(), (0,)), 0.5)
    lr_g = robustness_pure(psi_ab).lr_g
    return s_half, lr_g, s_half - lr_g


def eof_half_roof_check(
    rho_ab: DensityMatrix, config: OptimizerConfig | None = None,
    n_members: int | None = None,
) -> tuple[float, float, float]:
    """Half-order roof vs the log-robustness roof, two separate searches.

    The second search reuses the decomposition steering but scores each
    member by its log-robustness through the singular-value route.
    """
    if len(rho_ab.dims) != 2:
        raise DimMismatch(f"need a bipartite state, got dims {rho_ab.dims}")
    cfg = config if config is not None else OptimizerConfig()
    seed_eof, seed_roof = _child_seeds(cfg.master_seed, 2)
    eof_half = eof_alpha(rho_ab, 0.5, replace(cfg, master_seed=seed_eof), n_members).value

    da, db = rho_ab.dims
    psi = purify(rho_ab)
    rank = psi.dims[-1]
    m = n_members if n_members is not None else rank * rank
    psimat = psi.amplitudes.reshape(da * db, rank)

    def objective(angles):
        v = _isometry(m, rank, angles)
        phi = (psimat @ v.T).T.reshape(m, da, db)
        s = np.linalg.svd(phi, compute_uv=False)
        q = (s * s).sum(axis=1)
        mask = q > ZERO_CUTOFF
        qm = q[mask]
        # member log-robustness: 2 log2(sum of normalized Schmidt coefficients)
        lr = 2.0 * np.log2(s[mask].sum(axis=1)) - np.log2(qm)
        return float(qm @ lr)

    report = optimize_scalar(objective, isometry_param_count(m, rank), "min",
                             replace(cfg, master_seed=seed_roof))
    lgr_roof = report.best_value
    return eof_half, lgr_roof, eof_half - lgr_roof


def _trivial_guess_povm(ensemble: Ensemble) -> Povm:
    m = len(ensemble)
    d = ensemble.states[0].dim
    best = int(np.argmax(ensemble.probabilities))
    effects = [np.zeros((d, d), dtype=np.complex128) for _ in range(m)]
    effects[best] = np.eye(d, dtype=np.complex128)
    return Povm(tuple(effects))


def _povm_success(povm: Povm, weighted: np.ndarray) -> float:
    return float(
        sum(np.einsum("ij,ji->", e, w) for e, w in zip(povm.effects, weighted)).real
    )


def p_success(
    xi: Ensemble, config: OptimizerConfig | None = None
) -> DiscriminationResult:
    """Best probability of naming the ensemble member, weighted by priors.

    Optimizes over general POVMs with one effect per member. For
    two-member ensembles the closed-form optimum is attached as
    helstrom_value.
    """
    m = len(xi)
    if m < 2:
        raise SingletonEnsemble("discrimination needs at least two members")
    cfg = config if config is not None else OptimizerConfig()
    d = xi.states[0].dim
    weighted = np.stack(
        [p * s.matrix for p, s in zip(xi.probabilities, xi.states)]
    )

    def objective(params):
        blk = params.reshape(m, 2, d, d)
        b = blk[:, 0] + 1j * blk[:, 1]
        raw = np.einsum("xij,xik->xjk", b.conj(), b)
        w, v = np.linalg.eigh(raw.sum(axis=0))
        w = np.maximum(w, ZERO_CUTOFF)
        t = (v / np.sqrt(w)) @ v.conj().T
        eff = t[None] @ raw @ t[None]
        return float(np.einsum("xij,xji->", eff, weighted).real)

    report = optimize_scalar(objective, 2 * m * d * d, "max", cfg)
    blk = report.best_params.reshape(m, 2, d, d)
    povm = general_povm_from_blocks(blk[:, 0] + 1j * blk[:, 1])
    value = _povm_success(povm, weighted)
    trivial = _trivial_guess_povm(xi)
    trivial_value = _povm_success(trivial, weighted)
    if trivial_value > value:
        povm, value = trivial, trivial_value

    helstrom = None
    if m == 2:
        diff = weighted[0] - weighted[1]
        helstrom = 0.5 * (1.0 + float(np.abs(np.linalg.eigvalsh(diff)).sum()))
    return DiscriminationResult(
        p_success=value, optimal_povm=povm, opt_report=report, helstrom_value=helstrom
    )


def check_psuc_bound(
    xi: Ensemble, config: OptimizerConfig | None = None
) -> tuple[float, float, float]:
    """Half-order entropy of the average vs the discrimination bound.

    slack = S_half(average) + log2 P_suc; the claimed inequality is
    slack >= 0.
    """
    s_half_avg = renyi_quantum(xi.average(), 0.5)
    result = p_success(xi, config)
    neg_log_psuc = -math.log2(result.p_success)
    return s_half_avg, neg_log_psuc, s_half_avg - neg_log_psuc


def check_single_copy_capacity_bound(
    psi_abe: PureState,
    config: OptimizerConfig | None = None,
    n_outcomes: int | None = None,
) -> tuple[float, float, float]:
    """Single-copy distillation-style bound assembled from the balance identity.

    Computes the measured correlation across (first, third), discriminates
    the witness ensemble it induces, and subtracts the convex roof on
    (first, second); slack = c_half - (-log2 P_suc - roof).
    """
    if len(psi_abe.dims) != 3:
        raise DimMismatch(f"need a tripartite pure state, got dims {psi_abe.dims}")
    cfg = config if config is not None else OptimizerConfig()
    seed_c, seed_p, seed_e = _child_seeds(cfg.master_seed, 3)
    rho = psi_abe.density()
    rho_ae = partial_trace(rho, (0, 2))
    rho_ab = partial_trace(rho, (0, 1))

    c_val = c_alpha(rho_ae, "B", 0.5, replace(cfg, master_seed=seed_c), n_outcomes)
    ens, _ = measure_local(rho_ae, "B", c_val.witness)
    if len(ens) < 2:
        psuc = 1.0
    else:
        psuc = p_success(ens, replace(cfg, master_seed=seed_p)).p_success
    eof_half = eof_alpha(rho_ab, 0.5, replace(cfg, master_seed=seed_e), n_outcomes).value
    rhs = -math.log2(psuc) - eof_half
    return c_val.value, rhs, c_val.value - rhs
