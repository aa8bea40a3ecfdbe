import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ortho_group

from qrgxy import linalg
from qrgxy.errors import LinalgError
from qrgxy.linalg import SIGMA_X, SIGMA_Z

from oracles import kron_loop, partial_trace_loop

H34 = 0.8112781244591328  # h(3/4), mpmath


def random_density(rng, nqubits, terms=3):
    dim = 2**nqubits
    p = rng.dirichlet(np.ones(terms))
    rho = np.zeros((dim, dim))
    for w in p:
        v = rng.normal(size=dim)
        v /= np.linalg.norm(v)
        rho += w * np.outer(v, v)
    return (rho + rho.T) / 2


def random_symmetric(rng, dim):
    a = rng.normal(size=(dim, dim))
    return (a + a.T) / 2


def test_kron_identity_and_zz():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(linalg.kron(SIGMA_Z, SIGMA_Z), np.diag([1.0, -1, -1, 1]))


def test_kron_matches_loop_oracle():
    rng = np.random.default_rng(0)
    a, b = random_symmetric(rng, 4), random_symmetric(rng, 8)
    assert np.array_equal(linalg.kron(a, b), kron_loop(a, b))
    assert np.array_equal(linalg.kron(SIGMA_X, SIGMA_X), kron_loop(SIGMA_X, SIGMA_X))


def test_kron_rejects_oversize():
    with pytest.raises(LinalgError):
        linalg.kron(np.eye(2**6), np.eye(2**5))


def test_partial_trace_examples():
    up_up = np.zeros(4)
    up_up[0] = 1
    assert np.array_equal(linalg.partial_trace(np.outer(up_up, up_up), 2, {1}), np.diag([1.0, 0.0]))
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(linalg.partial_trace(np.outer(bell, bell), 2, {1}), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_edge_cases():
    rho = random_density(np.random.default_rng(1), 3)
    assert linalg.partial_trace(rho, 3, {1, 2, 3}) is rho
    with pytest.raises(LinalgError):
        linalg.partial_trace(rho, 3, set())
    with pytest.raises(LinalgError):
        linalg.partial_trace(rho, 3, {4})


@pytest.mark.parametrize("keep", [{1}, {2}, {3}, {1, 3}, {2, 3}, {1, 2}])
def test_partial_trace_matches_loop_oracle(keep):
    rho = random_density(np.random.default_rng(2), 3)
    assert np.allclose(linalg.partial_trace(rho, 3, keep), partial_trace_loop(rho, 3, keep), atol=1e-15)


def test_partial_trace_of_pure_state_matches_reduced_state():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=32)
    psi /= np.linalg.norm(psi)
    for keep in ({1}, {1, 5}, {2, 3, 4}):
        assert np.allclose(linalg.partial_trace(np.outer(psi, psi), 5, keep), linalg.reduced_state(psi, keep), atol=1e-14)


def test_partial_trace_preserves_trace_on_1000_states():
    rng = np.random.default_rng(4)
    for k in range(1000):
        n = 2 + k % 4
        rho = random_density(rng, n)
        keep = set(rng.choice(np.arange(1, n + 1), size=1 + k % n, replace=False).tolist())
        red = linalg.partial_trace(rho, n, keep)
        assert abs(np.trace(red) - np.trace(rho)) <= 1e-12
        assert np.array_equal(red, red.T)


def test_partial_trace_composes():
    rho = random_density(np.random.default_rng(5), 3)
    step = linalg.partial_trace(linalg.partial_trace(rho, 3, {1, 2}), 2, {1})
    assert np.allclose(step, linalg.partial_trace(rho, 3, {1}), atol=1e-12, rtol=0)


def test_eigh_examples():
    assert np.allclose(linalg.eigh(np.diag([3.0, 1.0, 2.0])).eigenvalues, [1, 2, 3])
    assert np.allclose(linalg.eigh(SIGMA_X).eigenvalues, [-1, 1])


def test_eigh_rejects_asymmetric():
    with pytest.raises(LinalgError):
        linalg.eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))


@pytest.mark.parametrize("dim", [2, 4, 8, 16, 32])
def test_eigh_spectrum_invariants(dim):
    a = random_symmetric(np.random.default_rng(dim), dim)
    w, v = linalg.eigh(a)
    assert np.all(np.diff(w) >= 0)
    for k in range(dim):
        assert np.abs(a @ v[:, k] - w[k] * v[:, k]).max() <= 1e-10 * max(1, abs(w[k]))
    assert np.abs(v.T @ v - np.eye(dim)).max() <= 1e-10
    assert np.abs(v @ np.diag(w) @ v.T - a).max() <= 1e-10
    w2, v2 = linalg.eigh(a)
    assert np.array_equal(w, w2) and np.array_equal(v, v2)


def test_trace_norm_examples():
    assert linalg.trace_norm(np.diag([3.0, -4.0])) == pytest.approx(7.0, abs=1e-15)
    assert linalg.trace_norm(np.zeros((4, 4))) == 0.0


@pytest.mark.parametrize("dim", [2, 4, 8, 16, 32])
def test_trace_norm_orthogonal_invariance(dim):
    rng = np.random.default_rng(10 + dim)
    a = random_symmetric(rng, dim)
    q = ortho_group.rvs(dim, random_state=rng) if dim > 1 else np.eye(1)
    b = q.T @ a @ q
    b = (b + b.T) / 2
    assert abs(linalg.trace_norm(b) - linalg.trace_norm(a)) <= 1e-10
    assert linalg.trace_norm(a) == pytest.approx(np.abs(linalg.eigh(a).eigenvalues).sum(), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), nqubits=st.integers(1, 4))
def test_trace_norm_of_density_difference_is_at_most_two(seed, nqubits):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, nqubits), random_density(rng, nqubits)
    assert 0 <= linalg.trace_norm(a - b) <= 2 + 1e-12


def test_entropy_examples():
    assert linalg.von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert linalg.von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-15)
    assert linalg.von_neumann_entropy(np.diag([0.75, 0.25])) == pytest.approx(H34, abs=1e-14)


def test_entropy_rejects_invalid_density_matrices():
    with pytest.raises(LinalgError):
        linalg.von_neumann_entropy(np.eye(2))
    with pytest.raises(LinalgError):
        linalg.von_neumann_entropy(np.diag([1.5, -0.5]))


@pytest.mark.parametrize("nqubits", [1, 2, 3, 5])
def test_entropy_bounds_and_invariance(nqubits):
    rng = np.random.default_rng(20 + nqubits)
    dim = 2**nqubits
    for _ in range(20):
        rho = random_density(rng, nqubits)
        s = linalg.von_neumann_entropy(rho)
        assert 0 <= s <= nqubits + 1e-9
        q = ortho_group.rvs(dim, random_state=rng) if dim > 1 else np.eye(1)
        r2 = q.T @ rho @ q
        assert abs(linalg.von_neumann_entropy((r2 + r2.T) / 2) - s) <= 1e-10


def test_binary_entropy():
    assert linalg.binary_entropy(0.5) == 1.0
    assert linalg.binary_entropy(0.0) == 0.0
    assert linalg.binary_entropy(1.0) == 0.0
    assert linalg.binary_entropy(0.75) == pytest.approx(H34, abs=1e-15)
    for p in np.linspace(0, 1, 21):
        assert linalg.binary_entropy(p) == pytest.approx(linalg.binary_entropy(1 - p), abs=1e-15)
    with pytest.raises(LinalgError):
        linalg.binary_entropy(1.1)


def test_pure_state_validation():
    with pytest.raises(LinalgError):
        linalg.pure_state([1.0, 1.0])
    with pytest.raises(LinalgError):
        linalg.pure_state([1.0, 0.0, 0.0])
    assert linalg.basis_index("udd") == 0b011


def test_permute_qubits_round_trip():
    rng = np.random.default_rng(30)
    a, b, c = (random_symmetric(rng, 2) for _ in range(3))
    # operator ordered (2, 3, 1) relabelled to 1,2,3
    op = linalg.kron(linalg.kron(b, c), a)
    assert np.allclose(linalg.permute_qubits(op, [2, 3, 1]), linalg.kron(linalg.kron(a, b), c), atol=1e-15)
