"""Measurement-induced correlation measures and the entropy-balance checker.

C_alpha maximizes the ensemble divergence over rank-1 local measurements;
the alpha entanglement of formation minimizes average reduced entropy
over decompositions, searched through rank-1 measurements on a purifying
system (every decomposition arises that way). The two searches are built
on the same isometry parametrization but walk independent code paths, so
the balance identity between them is a real cross-check rather than a
tautology.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .entropy import (
    Ensemble,
    _power_entropies,
    _validate_alpha_mixture,
    qjsd,
    renyi_quantum,
)
from .errors import DimMismatch
from .measurements import (
    IsometryParams,
    _isometry,
    isometry_param_count,
    measure_local,
    povm_from_isometry,
)
from .optimize import OptimizerConfig, OptReport, SearchKernel, optimize_scalar
from .states import DensityMatrix, PureState, ZERO_CUTOFF, partial_trace, purify


@dataclass(frozen=True, eq=False)
class CorrelationValue:
    """Optimized correlation quantity plus the witness that attains it."""

    value: float
    witness: object
    opt_report: OptReport


@dataclass(frozen=True, eq=False)
class KwReport:
    """Both sides of the entropy balance for one tripartite pure state."""

    alpha: float
    c_alpha_ae: float
    s_alpha_a: float
    eof_alpha_ab: float
    gap: float
    c_report: OptReport
    eof_report: OptReport


def _child_seeds(master_seed: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(master_seed).generate_state(count)]


def _require_bipartite(rho: DensityMatrix):
    if len(rho.dims) != 2:
        raise DimMismatch(f"need a bipartite state, got dims {rho.dims}")


def c_alpha(
    rho_ab: DensityMatrix,
    measured_side: str = "B",
    alpha: float = 0.5,
    config: OptimizerConfig | None = None,
    n_outcomes: int | None = None,
) -> CorrelationValue:
    """Best ensemble divergence over rank-1 measurements on one side.

    The returned value is re-evaluated from the witness POVM through the
    public measurement path; opt_report carries the raw search metadata.
    """
    a = _validate_alpha_mixture(alpha)
    _require_bipartite(rho_ab)
    if measured_side not in ("A", "B"):
        raise DimMismatch(f"measured_side must be 'A' or 'B', got {measured_side!r}")
    cfg = config if config is not None else OptimizerConfig()
    da, db = rho_ab.dims
    d_meas, d_keep = (da, db) if measured_side == "A" else (db, da)
    n = n_outcomes if n_outcomes is not None else d_meas * d_meas

    r4 = rho_ab.matrix.reshape(da, db, da, db)
    perm = (0, 2, 1, 3) if measured_side == "A" else (1, 3, 0, 2)
    rflat = np.ascontiguousarray(r4.transpose(perm)).reshape(
        d_meas * d_meas, d_keep * d_keep
    )
    keep_index = (1,) if measured_side == "A" else (0,)
    s_avg = renyi_quantum(partial_trace(rho_ab, keep_index), a)

    def objective(angles):
        v = _isometry(n, d_meas, angles)
        m = (v[:, :, None] * v.conj()[:, None, :]).reshape(n, d_meas * d_meas)
        sig = (m @ rflat).reshape(n, d_keep, d_keep)
        p = np.einsum("xii->x", sig).real
        mask = p > ZERO_CUTOFF
        sigm = sig[mask] / p[mask, None, None]
        w = np.clip(np.linalg.eigvalsh(sigm), 0.0, None)
        return s_avg - float(p[mask] @ _power_entropies(w, a))

    kern = SearchKernel(kind=0, cdata=rflat, n_vec=n, dim=d_meas,
                        d_keep=d_keep, alpha=a, s_avg=s_avg)
    report = optimize_scalar(
        objective, isometry_param_count(n, d_meas), "max", cfg, kernel=kern
    )
    witness = povm_from_isometry(IsometryParams(n, d_meas, report.best_params))
    ens, _ = measure_local(rho_ab, measured_side, witness)
    return CorrelationValue(qjsd(ens, a), witness, report)


def eof_alpha(
    rho_ab: DensityMatrix,
    alpha: float = 0.5,
    config: OptimizerConfig | None = None,
    n_members: int | None = None,
) -> CorrelationValue:
    """Convex-roof entanglement: least average reduced entropy over decompositions.

    Decompositions with n_members terms are steered by rank-1 measurements
    on the purifying system; n_members defaults to rank squared.
    """
    a = _validate_alpha_mixture(alpha)
    _require_bipartite(rho_ab)
    cfg = config if config is not None else OptimizerConfig()
    da, db = rho_ab.dims
    psi = purify(rho_ab)
    rank = psi.dims[-1]
    m = n_members if n_members is not None else rank * rank
    psimat = psi.amplitudes.reshape(da * db, rank)

    def objective(angles):
        v = _isometry(m, rank, angles)
        phi = (psimat @ v.T).T.reshape(m, da, db)
        red = np.einsum("xab,xcb->xac", phi, phi.conj())
        q = np.einsum("xaa->x", red).real
        mask = q > ZERO_CUTOFF
        redm = red[mask] / q[mask, None, None]
        w = np.clip(np.linalg.eigvalsh(redm), 0.0, None)
        return float(q[mask] @ _power_entropies(w, a))

    kern = SearchKernel(kind=1, cdata=np.ascontiguousarray(psimat),
                        n_vec=m, dim=rank, d_keep=da, alpha=a)
    report = optimize_scalar(
        objective, isometry_param_count(m, rank), "min", cfg, kernel=kern
    )
    v = _isometry(m, rank, report.best_params)
    phi = psimat @ v.T
    q = np.einsum("ix,ix->x", phi, phi.conj()).real
    kept = q > ZERO_CUTOFF
    weights = q[kept] / q[kept].sum()
    vecs = phi[:, kept] / np.sqrt(q[kept])
    members = tuple(
        PureState(vecs[:, x], (da, db)).density() for x in range(vecs.shape[1])
    )
    witness = Ensemble(weights, members)
    value = float(
        sum(
            w_x * renyi_quantum(partial_trace(s, (0,)), a)
            for w_x, s in zip(weights, members)
        )
    )
    return CorrelationValue(value, witness, report)


def mutual_information(rho_ab: DensityMatrix) -> float:
    """S(A) + S(B) - S(AB) in bits."""
    _require_bipartite(rho_ab)
    s_a = renyi_quantum(partial_trace(rho_ab, (0,)), 1.0)
    s_b = renyi_quantum(partial_trace(rho_ab, (1,)), 1.0)
    return s_a + s_b - renyi_quantum(rho_ab, 1.0)


def quantum_discord(
    rho_ab: DensityMatrix,
    measured_side: str = "B",
    config: OptimizerConfig | None = None,
) -> float:
    """Mutual information minus the best measured correlation at order 1."""
    j = c_alpha(rho_ab, measured_side, 1.0, config)
    return mutual_information(rho_ab) - j.value


def kw_verify(
    psi_abe: PureState,
    alpha: float = 0.5,
    config: OptimizerConfig | None = None,
    n_outcomes: int | None = None,
) -> KwReport:
    """Check the entropy balance on a tripartite pure state.

    Measures the third subsystem to maximize correlations with the first,
    and independently minimizes the convex roof on the first two; the gap
    between C, S, and the roof is the report's headline number. Passing
    n_outcomes fixes the same search cardinality on both sides.
    """
    if len(psi_abe.dims) != 3:
        raise DimMismatch(f"need a tripartite pure state, got dims {psi_abe.dims}")
    a = _validate_alpha_mixture(alpha)
    cfg = config if config is not None else OptimizerConfig()
    seed_c, seed_e = _child_seeds(cfg.master_seed, 2)
    rho = psi_abe.density()
    rho_ae = partial_trace(rho, (0, 2))
    rho_ab = partial_trace(rho, (0, 1))

    c_val = c_alpha(rho_ae, "B", a, replace(cfg, master_seed=seed_c), n_outcomes)
    s_a = renyi_quantum(partial_trace(rho, (0,)), a)
    e_val = eof_alpha(rho_ab, a, replace(cfg, master_seed=seed_e), n_outcomes)
    gap = c_val.value - (s_a - e_val.value)
    return KwReport(
        alpha=a,
        c_alpha_ae=c_val.value,
        s_alpha_a=s_a,
        eof_alpha_ab=e_val.value,
        gap=gap,
        c_report=c_val.opt_report,
        eof_report=e_val.opt_report,
    )


def check_monotonicity(
    rho_ab: DensityMatrix,
    alpha: float,
    channel_a,
    channel_b,
    config: OptimizerConfig | None = None,
) -> tuple[float, float]:
    """Correlation before and after a product channel acts on both sides.

    Both searches run under the same seeds, so a channel that leaves the
    state unchanged reproduces the before value exactly.
    """
    from .states import apply_channel, product_channel

    cfg = config if config is not None else OptimizerConfig()
    before = c_alpha(rho_ab, "B", alpha, cfg)
    mapped = apply_channel(
        product_channel(channel_a, channel_b),
        rho_ab,
        out_dims=(channel_a.out_dim, channel_b.out_dim),
    )
    after = c_alpha(mapped, "B", alpha, cfg)
    return before.value, after.value
