"""Finite-dimensional quantum states and the linear algebra beneath them.

Density matrices and pure states carry an explicit tuple of subsystem
dimensions so tensor-product structure never has to be guessed. All
operators are dense complex numpy arrays; validation happens once at
construction and results are immutable afterwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimMismatch,
    IncompleteKraus,
    InvalidAlpha,
    InvalidRank,
    InvalidState,
    NonHermitian,
)

# Construction tolerances for states.
HERMITIAN_STATE_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-8
# Hermiticity tolerance for generic operators handed to eig_hermitian.
HERMITIAN_OP_TOL = 1e-8
# Eigenvalues and Schmidt coefficients at or below this count as exact zeros.
ZERO_CUTOFF = 1e-12


def _prod(dims) -> int:
    out = 1
    for d in dims:
        out *= int(d)
    return out


def _as_square(matrix) -> np.ndarray:
    a = np.array(matrix, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidState(f"expected a square matrix, got shape {a.shape}")
    return a


def _normalize_dims(dims, size: int) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims) if dims else (size,)
    if any(d < 1 for d in out):
        raise DimMismatch(f"subsystem dimensions must be positive, got {out}")
    if _prod(out) != size:
        raise DimMismatch(f"dims {out} do not multiply to the size {size}")
    return out


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace operator with declared dims."""

    matrix: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        m = _as_square(self.matrix)
        dims = _normalize_dims(self.dims, m.shape[0])
        dev = np.abs(m - m.conj().T).max()
        if dev > HERMITIAN_STATE_TOL:
            raise InvalidState(f"state deviates from Hermitian by {dev:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidState(f"state trace {tr:.12g} is not 1")
        w = np.linalg.eigvalsh(m)
        if w[0] < EIGENVALUE_FLOOR:
            raise InvalidState(f"state has eigenvalue {w[0]:.3e} below the floor")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "_spectrum", np.clip(w[::-1], 0.0, None))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues sorted descending, sub-floor negatives clipped to zero."""
        return self._spectrum

    def reshaped(self, dims) -> "DensityMatrix":
        """Same operator with a different subsystem grouping."""
        return DensityMatrix(self.matrix, tuple(int(d) for d in dims))

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector with declared subsystem dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128).ravel()
        dims = _normalize_dims(self.dims, a.size)
        nrm = np.linalg.norm(a)
        if abs(nrm * nrm - 1.0) > HERMITIAN_STATE_TOL:
            raise InvalidState(f"squared norm {nrm * nrm:.12g} is not 1")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def __repr__(self):
        return f"PureState(dim={self.dim}, dims={self.dims})"


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """Schmidt data for one bipartition: descending coefficients and bases."""

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.size == 0 or np.any(np.diff(c) > 0) or c[-1] < 0:
            raise InvalidState("coefficients must be nonnegative and descending")
        if abs((c * c).sum() - 1.0) > 1e-10:
            raise InvalidState("squared coefficients must sum to 1")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    def reconstruct(self) -> np.ndarray:
        """Amplitude vector on the flattened left x right space."""
        m = (self.left_basis * self.coefficients) @ self.right_basis.T
        return m.reshape(-1)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=np.complex128) for k in self.operators)
        if not ops:
            raise IncompleteKraus("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise DimMismatch("Kraus operators must share one shape")
        comp = sum(k.conj().T @ k for k in ops)
        dev = np.abs(comp - np.eye(shape[1])).max()
        if dev > 1e-9:
            raise IncompleteKraus(f"sum K^dag K deviates from identity by {dev:.3e}")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "operators", ops)

    @property
    def in_dim(self) -> int:
        return self.operators[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.operators[0].shape[0]


def eig_hermitian(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and matching eigenvector columns of a Hermitian matrix."""
    a = _as_square(matrix)
    dev = np.abs(a - a.conj().T).max()
    if dev > HERMITIAN_OP_TOL:
        raise NonHermitian(f"matrix deviates from Hermitian by {dev:.3e}")
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def mat_power(rho: DensityMatrix, alpha: float) -> np.ndarray:
    """Spectral power rho^alpha with 0^alpha = 0."""
    if not alpha > 0:
        raise InvalidAlpha(f"matrix power needs alpha > 0, got {alpha}")
    w, v = np.linalg.eigh(rho.matrix)
    w = np.clip(w, 0.0, None)
    out = (v * w**alpha) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two operators."""
    return np.kron(np.asarray(a), np.asarray(b))


def tensor_states(rho_a: DensityMatrix, rho_b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(rho_a.matrix, rho_b.matrix), rho_a.dims + rho_b.dims)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in keep.

    keep is a collection of subsystem indices into rho.dims; the kept
    subsystems stay in their original order.
    """
    dims = rho.dims
    n = len(dims)
    kept = tuple(sorted({int(k) for k in keep}))
    if not kept or kept[0] < 0 or kept[-1] >= n:
        raise DimMismatch(f"keep {kept} is not a valid subset of {n} subsystems")
    tens = rho.matrix.reshape(dims + dims)
    row, col, out = [], [], []
    for i in range(n):
        if i in kept:
            row.append(i)
            col.append(n + i)
        else:
            row.append(2 * n + i)
            col.append(2 * n + i)
    for i in kept:
        out.append(i)
    for i in kept:
        out.append(n + i)
    red = np.einsum(tens, row + col, out)
    d_keep = _prod(dims[i] for i in kept)
    m = red.reshape(d_keep, d_keep)
    return DensityMatrix(0.5 * (m + m.conj().T), tuple(dims[i] for i in kept))


def purify(rho: DensityMatrix) -> PureState:
    """Pure state on system x environment whose reduction is rho.

    The environment dimension equals the numerical rank of rho
    (eigenvalues above ZERO_CUTOFF) and is appended as the last subsystem.
    """
    w, v = np.linalg.eigh(rho.matrix)
    w = w[::-1]
    v = v[:, ::-1]
    sel = w > ZERO_CUTOFF
    w = w[sel]
    v = v[:, sel]
    amp = (v * np.sqrt(w)).reshape(-1)
    amp = amp / np.linalg.norm(amp)
    return PureState(amp, rho.dims + (int(w.size),))


def schmidt(psi: PureState, cut: int = 1) -> SchmidtDecomposition:
    """Schmidt decomposition across the bipartition after the first cut subsystems."""
    dims = psi.dims
    if not 1 <= cut <= len(dims) - 1:
        raise DimMismatch(f"cut {cut} does not bipartition dims {dims}")
    d_left = _prod(dims[:cut])
    d_right = _prod(dims[cut:])
    m = psi.amplitudes.reshape(d_left, d_right)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    sel = s > ZERO_CUTOFF
    return SchmidtDecomposition(s[sel], u[:, sel], vh[sel].T)


def random_state(kind: str, dims, rank: int | None = None, seed: int = 0):
    """Seeded random state: 'haar_pure' gives a PureState, 'ginibre_mixed' a DensityMatrix."""
    dims = tuple(int(d) for d in dims)
    d = _prod(dims)
    rng = np.random.default_rng(seed)
    if kind == "haar_pure":
        v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        return PureState(v / np.linalg.norm(v), dims)
    if kind == "ginibre_mixed":
        r = d if rank is None else int(rank)
        if not 1 <= r <= d:
            raise InvalidRank(f"rank {r} outside [1, {d}]")
        g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
        m = g @ g.conj().T
        m /= m.trace().real
        return DensityMatrix(0.5 * (m + m.conj().T), dims)
    raise InvalidState(f"unknown random state kind {kind!r}")


def haar_unitary(dim: int, seed=0) -> np.ndarray:
    """Haar-distributed unitary via QR with the standard phase fix."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((np.asarray(u, dtype=np.complex128),))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=np.complex128),))


def random_channel(dim: int, kraus_count: int, seed=0) -> KrausChannel:
    """Random CPTP map from a Haar isometry into system x environment."""
    if kraus_count < 1:
        raise InvalidRank(f"kraus_count must be >= 1, got {kraus_count}")
    u = haar_unitary(dim * kraus_count, seed)
    v = u[:, :dim]
    return KrausChannel(tuple(v[e::kraus_count, :] for e in range(kraus_count)))


def product_channel(ch_a: KrausChannel, ch_b: KrausChannel) -> KrausChannel:
    """Tensor product channel acting independently on two subsystems."""
    return KrausChannel(
        tuple(np.kron(a, b) for a in ch_a.operators for b in ch_b.operators)
    )


def apply_channel(channel: KrausChannel, rho: DensityMatrix, out_dims=None) -> DensityMatrix:
    """Apply a Kraus channel to a state."""
    if channel.in_dim != rho.dim:
        raise DimMismatch(
            f"channel input dim {channel.in_dim} does not match state dim {rho.dim}"
        )
    out = sum(k @ rho.matrix @ k.conj().T for k in channel.operators)
    out = 0.5 * (out + out.conj().T)
    if out_dims is not None:
        dims = tuple(int(d) for d in out_dims)
    elif channel.out_dim == rho.dim:
        dims = rho.dims
    else:
        dims = (channel.out_dim,)
    return DensityMatrix(out, dims)
