import numpy as np
import pytest

from matgrav import (BipartiteSpace, DensityOperator, DimensionMismatchError, PureState,
                     UnitaryOperator, ValidationError, commutator_norm, haar_random_unitary,
                     partial_trace, tensor_state, trace_distance)

from conftest import make_rng, random_density, random_pure


# ---------------------------------------------------------------------------
# type invariants

def test_space_requires_positive_dims():
    with pytest.raises(ValidationError):
        BipartiteSpace(0, 2)
    assert BipartiteSpace(3, 4).total == 12


def test_pure_state_rejects_unnormalized():
    space = BipartiteSpace(2, 2)
    with pytest.raises(ValidationError):
        PureState(np.array([1.0, 1.0, 0.0, 0.0]), space)
    with pytest.raises(DimensionMismatchError):
        PureState(np.array([1.0, 0.0]), space)


def test_density_operator_invariants():
    with pytest.raises(ValidationError):
        DensityOperator(np.array([[0.5, 0.2], [0.1, 0.5]]))  # not Hermitian
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([0.7, 0.7]))  # trace 1.4
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.5, -0.5]))  # negative eigenvalue
    rho = DensityOperator(np.diag([0.5, 0.5]).astype(complex))
    assert rho.dimension == 2
    assert rho.matrix.flags.writeable is False


def test_unitary_operator_invariant():
    with pytest.raises(ValidationError):
        UnitaryOperator(np.array([[1.0, 0.0], [0.0, 2.0]]))
    UnitaryOperator(np.array([[0.0, 1.0], [1.0, 0.0]]))


# ---------------------------------------------------------------------------
# tensor_state

def test_tensor_state_basis_products():
    space = BipartiteSpace(2, 2)
    psi = tensor_state([1, 0], [0, 1], space)
    assert np.allclose(psi.amplitudes, [0, 1, 0, 0])
    psi = tensor_state([1, 0], [1, 0], space)
    assert np.allclose(psi.amplitudes, [1, 0, 0, 0])


def test_tensor_state_hand_expansion():
    # (1,1)/sqrt2 x (1,-1)/sqrt2 expanded entrywise by hand
    space = BipartiteSpace(2, 2)
    psi = tensor_state([1, 1], [1, -1], space)
    assert np.allclose(psi.amplitudes, [0.5, -0.5, 0.5, -0.5], atol=1e-15)


def test_tensor_state_normalizes_inputs():
    space = BipartiteSpace(2, 3)
    psi = tensor_state([2, 0], [0, 3, 0], space)
    assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-12
    assert abs(psi.amplitudes[1] - 1.0) < 1e-12


def test_tensor_state_errors():
    space = BipartiteSpace(2, 2)
    with pytest.raises(DimensionMismatchError):
        tensor_state([1, 0, 0], [1, 0], space)
    with pytest.raises(ValidationError):
        tensor_state([0, 0], [1, 0], space)


# ---------------------------------------------------------------------------
# partial_trace

def test_partial_trace_bell_state():
    space = BipartiteSpace(2, 2)
    bell = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), space)
    for side in ("matter", "gravity"):
        assert np.allclose(partial_trace(bell, space, side).matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product_state():
    space = BipartiteSpace(2, 2)
    psi = tensor_state([1, 0], [0, 1], space)
    rho_m = partial_trace(psi, space, "matter")
    assert np.allclose(rho_m.matrix, np.diag([1.0, 0.0]), atol=1e-12)


def test_partial_trace_spectra_agree_with_padding():
    space = BipartiteSpace(3, 4)
    psi = random_pure(3, 4, seed=21)
    em = np.linalg.eigvalsh(partial_trace(psi, space, "matter").matrix)
    eg = np.linalg.eigvalsh(partial_trace(psi, space, "gravity").matrix)
    padded = np.sort(np.concatenate([em, np.zeros(1)]))
    assert np.abs(np.sort(eg) - padded).max() < 1e-9


def test_partial_trace_density_input_and_linearity():
    space = BipartiteSpace(2, 3)
    rho = random_density(6, seed=3)
    sigma = random_density(6, seed=4)
    a, b = 0.3, 0.7
    mixed = DensityOperator(a * rho.matrix + b * sigma.matrix)
    for side in ("matter", "gravity"):
        lhs = partial_trace(mixed, space, side).matrix
        rhs = (a * partial_trace(rho, space, side).matrix
               + b * partial_trace(sigma, space, side).matrix)
        assert np.abs(lhs - rhs).max() < 1e-12


def test_partial_trace_pure_matches_density_route():
    space = BipartiteSpace(3, 2)
    psi = random_pure(3, 2, seed=8)
    via_vector = partial_trace(psi, space, "matter").matrix
    via_density = partial_trace(psi.density(), space, "matter").matrix
    assert np.abs(via_vector - via_density).max() < 1e-12


def test_partial_trace_dimension_mismatch():
    space = BipartiteSpace(2, 2)
    with pytest.raises(DimensionMismatchError):
        partial_trace(random_pure(2, 3, seed=1), space, "matter")


# ---------------------------------------------------------------------------
# trace_distance

def test_trace_distance_identity_and_orthogonal():
    rho = random_density(3, seed=11)
    assert trace_distance(rho, rho) == 0.0
    p0 = DensityOperator(np.diag([1.0, 0.0]))
    p1 = DensityOperator(np.diag([0.0, 1.0]))
    assert abs(trace_distance(p0, p1) - 1.0) < 1e-12


def test_trace_distance_hand_value():
    # 0.5 * (|1/2 - 3/4| + |1/2 - 1/4|) = 1/4
    a = DensityOperator(np.diag([0.5, 0.5]))
    b = DensityOperator(np.diag([0.75, 0.25]))
    assert abs(trace_distance(a, b) - 0.25) < 1e-12


def test_trace_distance_metric_properties():
    for seed in range(6):
        r1 = random_density(4, seed=3 * seed + 1)
        r2 = random_density(4, seed=3 * seed + 2)
        r3 = random_density(4, seed=3 * seed + 3)
        d12 = trace_distance(r1, r2)
        assert abs(d12 - trace_distance(r2, r1)) < 1e-10
        assert d12 <= trace_distance(r1, r3) + trace_distance(r3, r2) + 1e-10
        assert -1e-12 <= d12 <= 1.0 + 1e-12


def test_trace_distance_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        trace_distance(random_density(2, seed=1), random_density(3, seed=1))


# ---------------------------------------------------------------------------
# haar_random_unitary

def test_haar_n1_is_a_phase():
    u = haar_random_unitary(1, make_rng(0)).matrix
    assert abs(abs(u[0, 0]) - 1.0) < 1e-12


def test_haar_unitarity():
    u = haar_random_unitary(4, make_rng(5)).matrix
    assert np.linalg.norm(u.conj().T @ u - np.eye(4)) < 1e-9


def test_haar_deterministic_for_fixed_seed():
    a = haar_random_unitary(5, make_rng(77)).matrix
    b = haar_random_unitary(5, make_rng(77)).matrix
    assert np.array_equal(a, b)


def test_haar_rejects_bad_dimension():
    with pytest.raises(ValidationError):
        haar_random_unitary(0, make_rng(0))


def test_haar_mean_projector_is_maximally_mixed():
    # E[U |0><0| U^dag] = I/n under the Haar measure
    n, samples = 3, 10_000
    g = make_rng(2024)
    acc = np.zeros((n, n), dtype=complex)
    for _ in range(samples):
        u = haar_random_unitary(n, g).matrix
        acc += np.outer(u[:, 0], u[:, 0].conj())
    acc /= samples
    assert np.abs(acc - np.eye(n) / n).max() < 5.0 / np.sqrt(samples)


# ---------------------------------------------------------------------------
# commutator_norm

def test_commutator_norm_trivial_cases():
    a = make_rng(1).standard_normal((3, 3))
    assert commutator_norm(a, a) == 0.0
    assert commutator_norm(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])) == 0.0


def test_commutator_norm_pauli_pair():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    assert abs(commutator_norm(sx, sz) - 2 * np.sqrt(2)) < 1e-12


def test_commutator_norm_accepts_wrappers():
    rho = DensityOperator(np.diag([0.6, 0.4]))
    sz = np.diag([1.0, -1.0])
    assert commutator_norm(sz, rho) < 1e-15


def test_commutator_norm_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        commutator_norm(np.eye(2), np.eye(3))
