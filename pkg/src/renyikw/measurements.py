"""POVMs, their smooth parametrizations, and local measurement of bipartite states.

Rank-1 POVMs with n outcomes on a dim-level system are generated from
n x dim isometries, which in turn come from an unconstrained real angle
vector (Givens rotations with phases). That keeps every search an
unconstrained optimization over a box of angles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .entropy import Ensemble
from .errors import DimMismatch, InvalidState, SingularNormalizer, TooFewOutcomes
from .states import DensityMatrix, ZERO_CUTOFF

POVM_TOL = 1e-9

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False


@dataclass(frozen=True, eq=False)
class Povm:
    """Measurement: PSD effects on a common space summing to the identity."""

    effects: tuple[np.ndarray, ...]
    rank_one: bool = False

    def __post_init__(self):
        effects = tuple(np.array(e, dtype=np.complex128) for e in self.effects)
        if not effects:
            raise InvalidState("a POVM needs at least one effect")
        d = effects[0].shape[0]
        total = np.zeros((d, d), dtype=np.complex128)
        for e in effects:
            if e.ndim != 2 or e.shape != (d, d):
                raise DimMismatch("effects must be square on a common space")
            if np.abs(e - e.conj().T).max() > POVM_TOL:
                raise InvalidState("effect is not Hermitian")
            w = np.linalg.eigvalsh(e)
            if w[0] < -POVM_TOL:
                raise InvalidState(f"effect has negative eigenvalue {w[0]:.3e}")
            if self.rank_one and (w > POVM_TOL).sum() > 1:
                raise InvalidState("rank-1 flag set but effect has rank > 1")
            total += e
        if np.abs(total - np.eye(d)).max() > POVM_TOL:
            raise InvalidState("effects do not sum to the identity")
        for e in effects:
            e.setflags(write=False)
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)


@lru_cache(maxsize=None)
def _rotation_pairs(n: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Row pairs touched by the truncated Givens product, in application order.

    Elimination order is column-major on the first dim columns; applying
    the inverse rotations in reverse order reconstructs any isometry, so
    the application order below is that reverse.
    """
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, n)]
    pairs.reverse()
    ii = np.array([p[0] for p in pairs], dtype=np.int64)
    jj = np.array([p[1] for p in pairs], dtype=np.int64)
    return ii, jj


def isometry_param_count(n_outcomes: int, dim: int) -> int:
    """Angles needed for an n_outcomes x dim isometry."""
    if n_outcomes < dim:
        raise TooFewOutcomes(
            f"{n_outcomes} outcomes cannot resolve a dim {dim} system"
        )
    n_pairs = dim * n_outcomes - dim * (dim + 1) // 2
    return 2 * n_pairs + dim


def _rotate_py(x, thetas, phis, ii, jj):
    for k in range(thetas.size):
        c = math.cos(thetas[k])
        s = math.sin(thetas[k])
        e = complex(math.cos(phis[k]), math.sin(phis[k]))
        i = ii[k]
        j = jj[k]
        a = x[i].copy()
        b = x[j]
        x[i] = c * a - s * e * b
        x[j] = s * e.conjugate() * a + c * b


if _HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _rotate_nb(x, thetas, phis, ii, jj):  # pragma: no cover - jitted
        d = x.shape[1]
        for k in range(thetas.size):
            c = math.cos(thetas[k])
            s = math.sin(thetas[k])
            e = complex(math.cos(phis[k]), math.sin(phis[k]))
            i = ii[k]
            j = jj[k]
            for col in range(d):
                a = x[i, col]
                b = x[j, col]
                x[i, col] = c * a - s * e * b
                x[j, col] = s * np.conj(e) * a + c * b

    _rotate = _rotate_nb
else:
    _rotate = _rotate_py


def _isometry(n: int, dim: int, angles: np.ndarray) -> np.ndarray:
    """n x dim isometry from the angle layout (thetas, phis, column phases)."""
    ii, jj = _rotation_pairs(n, dim)
    npairs = ii.size
    thetas = np.ascontiguousarray(angles[:npairs])
    phis = np.ascontiguousarray(angles[npairs : 2 * npairs])
    chis = angles[2 * npairs :]
    x = np.zeros((n, dim), dtype=np.complex128)
    x[np.arange(dim), np.arange(dim)] = np.exp(1j * chis)
    _rotate(x, thetas, phis, ii, jj)
    return x


@dataclass(frozen=True, eq=False)
class IsometryParams:
    """Angle vector determining an n_outcomes x dim isometry."""

    n_outcomes: int
    dim: int
    angles: np.ndarray

    def __post_init__(self):
        count = isometry_param_count(self.n_outcomes, self.dim)
        a = np.array(self.angles, dtype=float).ravel()
        if a.size != count:
            raise DimMismatch(
                f"expected {count} angles for {self.n_outcomes}x{self.dim}, got {a.size}"
            )
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)


def isometry_from_angles(params: IsometryParams) -> np.ndarray:
    return _isometry(params.n_outcomes, params.dim, params.angles)


def povm_from_isometry(params: IsometryParams) -> Povm:
    """Rank-1 POVM whose effects are the outer products of the isometry rows."""
    v = isometry_from_angles(params)
    effects = tuple(np.outer(v[x].conj(), v[x]) for x in range(params.n_outcomes))
    return Povm(effects, rank_one=True)


def general_povm_from_blocks(blocks) -> Povm:
    """POVM from arbitrary square blocks B_x via the whitening S^-1/2 B_x^dag B_x S^-1/2."""
    bs = [np.array(b, dtype=np.complex128) for b in blocks]
    if not bs:
        raise InvalidState("need at least one block")
    d = bs[0].shape[0]
    if any(b.shape != (d, d) for b in bs):
        raise DimMismatch("blocks must be square on a common space")
    raw = [b.conj().T @ b for b in bs]
    s = sum(raw)
    w, v = np.linalg.eigh(s)
    if w[0] < ZERO_CUTOFF:
        raise SingularNormalizer(
            f"block gram matrix has eigenvalue {w[0]:.3e} below {ZERO_CUTOFF}"
        )
    t = (v / np.sqrt(w)) @ v.conj().T
    effects = []
    for r in raw:
        e = t @ r @ t
        effects.append(0.5 * (e + e.conj().T))
    return Povm(tuple(effects))


@dataclass(frozen=True, eq=False)
class MeasurementRecord:
    """Outcome statistics of one local measurement: probabilities and the
    original outcome indices that survived pruning."""

    probabilities: np.ndarray
    kept: tuple[int, ...]


def _psd_member(matrix: np.ndarray, dim: int) -> DensityMatrix:
    # Small-probability outcomes accumulate eigen-dirt beyond the state
    # floor; project back onto the PSD cone before handing the state out.
    m = 0.5 * (matrix + matrix.conj().T)
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    w /= w.sum()
    return DensityMatrix((v * w) @ v.conj().T, (dim,))


def measure_local(rho_ab: DensityMatrix, side: str, povm: Povm):
    """Measure one side of a bipartite state.

    Returns the ensemble conditionally steered on the unmeasured side plus
    a record of the outcome probabilities. Outcomes below the pruning
    threshold are dropped and the rest renormalized.
    """
    if len(rho_ab.dims) != 2:
        raise DimMismatch(f"need a bipartite state, got dims {rho_ab.dims}")
    da, db = rho_ab.dims
    if side not in ("A", "B"):
        raise DimMismatch(f"side must be 'A' or 'B', got {side!r}")
    d_meas, d_keep = (da, db) if side == "A" else (db, da)
    if povm.dim != d_meas:
        raise DimMismatch(
            f"POVM dim {povm.dim} does not match side {side} dim {d_meas}"
        )
    r4 = rho_ab.matrix.reshape(da, db, da, db)
    spec = "abcd,ca->bd" if side == "A" else "abcd,db->ac"
    raw = [np.einsum(spec, r4, e) for e in povm.effects]
    probs = np.array([m.trace().real for m in raw])
    kept = tuple(int(x) for x in np.nonzero(probs >= ZERO_CUTOFF)[0])
    if not kept:
        raise InvalidState("every outcome fell below the pruning threshold")
    p = probs[list(kept)]
    p = p / p.sum()
    members = tuple(_psd_member(raw[x], d_keep) for x in kept)
    return Ensemble(p, members), MeasurementRecord(p, kept)


def qc_state(ensemble: Ensemble) -> DensityMatrix:
    """Embed an ensemble as a block-diagonal state on system x classical register."""
    m = len(ensemble)
    d = ensemble.states[0].dim
    out = np.zeros((d * m, d * m), dtype=np.complex128)
    for x, (q, s) in enumerate(zip(ensemble.probabilities, ensemble.states)):
        reg = np.zeros((m, m))
        reg[x, x] = 1.0
        out += q * np.kron(s.matrix, reg)
    return DensityMatrix(out, (d, m))
