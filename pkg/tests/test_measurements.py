import numpy as np
import pytest

from renyikw import (
    DensityMatrix,
    Ensemble,
    IsometryParams,
    DimMismatch,
    InvalidState,
    Povm,
    PureState,
    SingularNormalizer,
    TooFewOutcomes,
    general_povm_from_blocks,
    isometry_from_angles,
    isometry_param_count,
    measure_local,
    partial_trace,
    povm_from_isometry,
    qc_state,
    random_state,
    tensor_states,
)
from renyikw.measurements import _isometry


def computational_povm(d: int) -> Povm:
    eye = np.eye(d)
    return Povm(tuple(np.outer(eye[k], eye[k]) for k in range(d)), rank_one=True)


def test_povm_accepts_projective():
    p = computational_povm(3)
    assert len(p.effects) == 3
    assert p.dim == 3


def test_povm_rejects_incomplete_or_negative():
    eye = np.eye(2)
    half = (np.outer(eye[0], eye[0]) * 0.5, np.outer(eye[1], eye[1]))
    with pytest.raises(InvalidState):
        Povm(half)
    neg = (np.diag([1.5, 0.0]), np.diag([-0.5, 1.0]))
    with pytest.raises(InvalidState):
        Povm(neg)


def test_povm_rank_one_flag_enforced():
    with pytest.raises(InvalidState):
        Povm((np.eye(2) * 0.5, np.eye(2) * 0.5), rank_one=True)


def test_param_count_examples():
    # full flexibility for n rank-1 outcomes on dim d costs 2nd - d^2 angles
    assert isometry_param_count(2, 2) == 4
    assert isometry_param_count(4, 2) == 12
    assert isometry_param_count(4, 4) == 16
    with pytest.raises(TooFewOutcomes):
        isometry_param_count(1, 2)


def test_isometry_columns_orthonormal():
    rng = np.random.default_rng(17)
    for n, dim in ((2, 2), (4, 2), (5, 3), (4, 4)):
        k = isometry_param_count(n, dim)
        for _ in range(5):
            v = _isometry(n, dim, rng.uniform(-np.pi, np.pi, size=k))
            np.testing.assert_allclose(
                v.conj().T @ v, np.eye(dim), atol=1e-12
            )


def test_isometry_zero_angles_is_identity_embedding():
    v = _isometry(4, 2, np.zeros(isometry_param_count(4, 2)))
    np.testing.assert_allclose(v[:2, :], np.eye(2), atol=1e-12)
    np.testing.assert_allclose(v[2:, :], 0, atol=1e-12)


def test_isometry_params_checks_length():
    with pytest.raises(DimMismatch):
        IsometryParams(4, 2, np.zeros(3))
    good = IsometryParams(4, 2, np.zeros(isometry_param_count(4, 2)))
    v = isometry_from_angles(good)
    assert v.shape == (4, 2)


def test_povm_from_isometry_is_valid_rank_one():
    rng = np.random.default_rng(3)
    for n, dim in ((3, 2), (4, 2), (6, 3)):
        k = isometry_param_count(n, dim)
        povm = povm_from_isometry(
            IsometryParams(n, dim, rng.uniform(-np.pi, np.pi, size=k))
        )
        assert povm.rank_one
        assert len(povm.effects) == n
        total = sum(povm.effects)
        np.testing.assert_allclose(total, np.eye(dim), atol=1e-9)


def test_general_povm_from_blocks_whitens():
    rng = np.random.default_rng(9)
    d, n = 3, 4
    blocks = (
        rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    )
    povm = general_povm_from_blocks(blocks)
    total = sum(povm.effects)
    np.testing.assert_allclose(total, np.eye(d), atol=1e-9)
    for e in povm.effects:
        assert np.linalg.eigvalsh(e)[0] > -1e-10


def test_general_povm_from_blocks_rejects_degenerate():
    blocks = np.zeros((3, 2, 2), dtype=complex)
    with pytest.raises(SingularNormalizer):
        general_povm_from_blocks(blocks)


def test_measure_local_product_state_steers_nothing():
    a = random_state("ginibre_mixed", (2,), seed=1)
    b = random_state("ginibre_mixed", (2,), seed=2)
    joint = tensor_states(a, b)
    ens, record = measure_local(joint, "B", computational_povm(2))
    for member in ens.states:
        np.testing.assert_allclose(member.matrix, a.matrix, atol=1e-10)
    np.testing.assert_allclose(
        record.probabilities, np.diag(b.matrix).real, atol=1e-10
    )


def test_measure_local_bell_steers_perfectly():
    bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2)).density()
    ens, record = measure_local(bell, "B", computational_povm(2))
    np.testing.assert_allclose(record.probabilities, [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(ens.states[0].matrix, np.diag([1.0, 0.0]), atol=1e-10)
    np.testing.assert_allclose(ens.states[1].matrix, np.diag([0.0, 1.0]), atol=1e-10)


def test_measure_local_side_a():
    bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2)).density()
    ens, record = measure_local(bell, "A", computational_povm(2))
    np.testing.assert_allclose(record.probabilities, [0.5, 0.5], atol=1e-12)
    np.testing.assert_allclose(ens.states[0].matrix, np.diag([1.0, 0.0]), atol=1e-10)


def test_measure_local_average_is_marginal():
    """Mixing the steered ensemble back recovers the unmeasured marginal."""
    rng = np.random.default_rng(23)
    for seed in range(10):
        rho = random_state("ginibre_mixed", (2, 3), seed=seed)
        n = int(rng.integers(3, 6))
        k = isometry_param_count(n, 3)
        povm = povm_from_isometry(
            IsometryParams(n, 3, rng.uniform(-np.pi, np.pi, size=k))
        )
        ens, record = measure_local(rho, "B", povm)
        avg = ens.average()
        np.testing.assert_allclose(
            avg.matrix, partial_trace(rho, (0,)).matrix, atol=1e-8
        )
        assert abs(sum(record.probabilities) - 1) < 1e-9


def test_measure_local_prunes_zero_outcomes():
    # measuring |0> against the computational basis never yields outcome 1
    rho = tensor_states(
        random_state("ginibre_mixed", (2,), seed=4),
        PureState(np.array([1.0, 0.0]), (2,)).density(),
    )
    ens, record = measure_local(rho, "B", computational_povm(2))
    assert len(ens.states) == 1
    assert record.kept == (0,)


def test_measure_local_rejects_non_bipartite():
    rho = random_state("ginibre_mixed", (2, 2, 2), seed=0)
    with pytest.raises(DimMismatch):
        measure_local(rho, "B", computational_povm(2))
    flat = random_state("ginibre_mixed", (4,), seed=0)
    with pytest.raises(DimMismatch):
        measure_local(flat, "A", computational_povm(2))


def test_measure_local_dim_mismatch():
    rho = random_state("ginibre_mixed", (2, 3), seed=0)
    with pytest.raises(DimMismatch):
        measure_local(rho, "B", computational_povm(2))


def test_qc_state_shape_and_marginals():
    members = tuple(random_state("ginibre_mixed", (2,), seed=s) for s in (1, 2, 3))
    probs = (0.5, 0.3, 0.2)
    rho = qc_state(Ensemble(probs, members))
    assert rho.dims == (2, 3)
    flag = partial_trace(rho, (1,))
    np.testing.assert_allclose(np.diag(flag.matrix).real, probs, atol=1e-12)
    # measuring the flag register in its basis recovers the members exactly
    ens, record = measure_local(rho, "B", computational_povm(3))
    np.testing.assert_allclose(record.probabilities, probs, atol=1e-10)
    for member, original in zip(ens.states, members):
        np.testing.assert_allclose(member.matrix, original.matrix, atol=1e-10)
