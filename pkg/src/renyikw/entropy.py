"""Renyi entropies of order alpha, classical and quantum, plus ensemble divergence.

All logarithms are base 2. The alpha -> 1 limit is taken explicitly:
orders within 1e-6 of 1 evaluate the Shannon / von Neumann branch.
Zero probabilities contribute nothing at any order, consistent with the
conventions 0^alpha = 0 and 0 log 0 = 0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, InvalidAlpha, InvalidState
from .states import DensityMatrix, ZERO_CUTOFF

ALPHA_ONE_WINDOW = 1e-6


def _validate_alpha_entropy(alpha: float) -> float:
    a = float(alpha)
    if not (0.0 < a <= 2.0) or not np.isfinite(a):
        raise InvalidAlpha(f"entropy order must lie in (0, 2], got {alpha}")
    return a


def _validate_alpha_mixture(alpha: float) -> float:
    """Orders where the ensemble divergence is guaranteed nonnegative."""
    a = float(alpha)
    if not np.isfinite(a):
        raise InvalidAlpha(f"mixture order must be finite, got {alpha}")
    if abs(a - 1.0) <= ALPHA_ONE_WINDOW:
        return a
    if not (0.0 < a < 1.0):
        raise InvalidAlpha(f"mixture order must lie in (0, 1) or be 1, got {alpha}")
    return a


def _spectrum_entropy(p: np.ndarray, alpha: float) -> float:
    p = p[p > ZERO_CUTOFF]
    if p.size == 0:
        return 0.0
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        return float(-(p * np.log2(p)).sum())
    return float(np.log2((p**alpha).sum()) / (1.0 - alpha))


def _power_entropies(w: np.ndarray, alpha: float) -> np.ndarray:
    """Row-wise entropies of a stack of nonnegative spectra."""
    wz = np.where(w > ZERO_CUTOFF, w, 0.0)
    if abs(alpha - 1.0) <= ALPHA_ONE_WINDOW:
        safe = np.where(w > ZERO_CUTOFF, w, 1.0)
        return -(wz * np.log2(safe)).sum(axis=-1)
    return np.log2((wz**alpha).sum(axis=-1)) / (1.0 - alpha)


def renyi_classical(probs, alpha: float) -> float:
    """H_alpha of a probability vector."""
    a = _validate_alpha_entropy(alpha)
    p = np.array(probs, dtype=float).ravel()
    if p.size == 0 or np.any(p < -1e-12):
        raise InvalidState("probabilities must be nonnegative")
    if abs(p.sum() - 1.0) > 1e-10:
        raise InvalidState(f"probabilities sum to {p.sum():.12g}, not 1")
    return _spectrum_entropy(np.clip(p, 0.0, None), a)


def renyi_quantum(rho: DensityMatrix, alpha: float) -> float:
    """S_alpha of a density matrix, evaluated on its spectrum."""
    a = _validate_alpha_entropy(alpha)
    return _spectrum_entropy(rho.spectrum, a)


def renyi_conditional(table, alpha: float) -> float:
    """Conditional entropy H_alpha(X|Y) of a joint table p(x, y).

    Rows index X, columns index Y. Away from order 1 this is the
    p_y-weighted average of the per-column entropies,
    (1/(1-alpha)) sum_y p_y log2 sum_x p(x|y)^alpha;
    at order 1 it is the Shannon conditional entropy H(X,Y) - H(Y).
    """
    a = _validate_alpha_entropy(alpha)
    t = np.array(table, dtype=float)
    if t.ndim != 2:
        raise InvalidState(f"joint table must be 2d, got shape {t.shape}")
    if np.any(t < -1e-12):
        raise InvalidState("joint table entries must be nonnegative")
    t = np.clip(t, 0.0, None)
    if abs(t.sum() - 1.0) > 1e-10:
        raise InvalidState(f"joint table sums to {t.sum():.12g}, not 1")
    p_y = t.sum(axis=0)
    if abs(a - 1.0) <= ALPHA_ONE_WINDOW:
        return _spectrum_entropy(t.ravel(), a) - _spectrum_entropy(p_y, a)
    total = 0.0
    for y in range(t.shape[1]):
        if p_y[y] <= ZERO_CUTOFF:
            continue
        cond = t[:, y] / p_y[y]
        cond = cond[cond > ZERO_CUTOFF]
        total += p_y[y] * np.log2((cond**a).sum())
    return float(total / (1.0 - a))


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Probability-weighted collection of density matrices on a common space."""

    probabilities: np.ndarray
    states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float).ravel()
        states = tuple(self.states)
        if p.size != len(states) or p.size == 0:
            raise DimMismatch(
                f"{p.size} probabilities for {len(states)} states"
            )
        if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
            raise InvalidState("ensemble weights must be a probability vector")
        d = states[0].dim
        dims = states[0].dims
        if any(s.dim != d or s.dims != dims for s in states):
            raise DimMismatch("ensemble members must share one space")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    def average(self) -> DensityMatrix:
        m = sum(
            q * s.matrix for q, s in zip(self.probabilities, self.states)
        )
        return DensityMatrix(0.5 * (m + m.conj().T), self.states[0].dims)


def qjsd(ensemble: Ensemble, alpha: float) -> float:
    """Entropy of the average minus the average member entropy.

    Nonnegative for orders in (0, 1) and at 1, where S_alpha is concave;
    zero for a singleton ensemble.
    """
    a = _validate_alpha_mixture(alpha)
    if len(ensemble) == 1:
        return 0.0
    avg = renyi_quantum(ensemble.average(), a)
    parts = sum(
        q * renyi_quantum(s, a)
        for q, s in zip(ensemble.probabilities, ensemble.states)
        if q > ZERO_CUTOFF
    )
    return avg - parts


def schatten_norm(matrix, p: float) -> float:
    """Schatten p-norm for p >= 1."""
    if not p >= 1.0:
        raise InvalidAlpha(f"norm order must be >= 1, got {p}")
    s = np.linalg.svd(np.asarray(matrix, dtype=np.complex128), compute_uv=False)
    return float((s**p).sum() ** (1.0 / p))


def schatten_quasi(matrix, p: float) -> float:
    """Schatten quasi-norm for 0 < p < 1, same power-sum formula."""
    if not 0.0 < p < 1.0:
        raise InvalidAlpha(f"quasi-norm order must lie in (0, 1), got {p}")
    s = np.linalg.svd(np.asarray(matrix, dtype=np.complex128), compute_uv=False)
    s = s[s > ZERO_CUTOFF]
    return float((s**p).sum() ** (1.0 / p))
