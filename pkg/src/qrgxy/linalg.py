"""Dense real linear algebra for small qubit registers.

Matrices are plain ``numpy`` arrays. Qubits are labelled ``1..n`` with qubit 1
the most significant bit of the basis index, and ``|0> = |up>``,
``|1> = |down>`` in the sigma-z basis.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .errors import LinalgError

MAX_DIM = 2**10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
# i * sigma_y, which is real; sigma_y (x) sigma_y = -(i sigma_y) (x) (i sigma_y)
I_SIGMA_Y = np.array([[0.0, 1.0], [-1.0, 0.0]])
IDENTITY_2 = np.eye(2)


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def symmetric(a, *, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a float array after checking it is square and exactly symmetric."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinalgError(f"{name} must be square, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise LinalgError(f"{name} is not symmetric")
    return a


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise LinalgError(f"dimension {dim} is not a power of two")
    return n


def pure_state(amplitudes, *, atol: float = 1e-12) -> np.ndarray:
    """Validate a real state vector: power-of-two length, unit norm within ``atol``."""
    psi = np.asarray(amplitudes, dtype=float)
    if psi.ndim != 1:
        raise LinalgError("state vector must be one-dimensional")
    num_qubits(psi.size)
    norm2 = float(psi @ psi)
    if abs(norm2 - 1.0) > atol:
        raise LinalgError(f"state is not normalized (norm^2 = {norm2!r})")
    return psi


def basis_index(label: str) -> int:
    """Basis index of a product state written with ``u``/``d`` (or ``0``/``1``) per qubit."""
    bits = label.translate(str.maketrans("ud", "01"))
    if not bits or set(bits) - {"0", "1"}:
        raise LinalgError(f"bad basis label {label!r}")
    return int(bits, 2)


def kron(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise LinalgError(f"Kronecker product dimension exceeds {MAX_DIM}")
    return np.kron(a, b)


def embed(ops: dict[int, np.ndarray], nqubits: int) -> np.ndarray:
    """Tensor product with ``ops[k]`` on qubit ``k`` and identities elsewhere."""
    out = np.ones((1, 1))
    for k in range(1, nqubits + 1):
        out = kron(out, ops.get(k, IDENTITY_2))
    return out


def _check_labels(keep: Iterable[int], nqubits: int) -> tuple[int, ...]:
    keep = tuple(sorted(set(keep)))
    if not keep:
        raise LinalgError("keep set must be nonempty")
    if keep[0] < 1 or keep[-1] > nqubits:
        raise LinalgError(f"qubit labels {keep} outside 1..{nqubits}")
    return keep


def partial_trace(rho, nqubits: int, keep: Iterable[int]) -> np.ndarray:
    """Reduce ``rho`` to the qubits in ``keep``; the result keeps their ascending order."""
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (2**nqubits, 2**nqubits):
        raise LinalgError(f"rho has shape {rho.shape}, expected {2**nqubits} qubits")
    keep = _check_labels(keep, nqubits)
    if len(keep) == nqubits:
        return rho
    traced = [q for q in range(1, nqubits + 1) if q not in keep]
    t = rho.reshape([2] * (2 * nqubits))
    # einsum labels: row index q-1, column index nqubits+q-1; traced pairs share a label
    letters = [chr(ord("a") + i) for i in range(2 * nqubits)]
    for q in traced:
        letters[nqubits + q - 1] = letters[q - 1]
    out = [letters[q - 1] for q in keep] + [letters[nqubits + q - 1] for q in keep]
    reduced = np.einsum("".join(letters) + "->" + "".join(out), t)
    d = 2 ** len(keep)
    reduced = reduced.reshape(d, d)
    return (reduced + reduced.T) / 2


def reduced_state(psi, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of the pure state ``psi`` on the qubits in ``keep``."""
    psi = np.asarray(psi, dtype=float)
    n = num_qubits(psi.size)
    keep = _check_labels(keep, n)
    m = split_state(psi, keep)
    r = m @ m.T
    return (r + r.T) / 2


def split_state(psi, keep: Iterable[int]) -> np.ndarray:
    """Reshape ``psi`` to a matrix with rows indexed by ``keep`` and columns by the rest."""
    psi = np.asarray(psi, dtype=float)
    n = num_qubits(psi.size)
    keep = _check_labels(keep, n)
    rest = [q for q in range(1, n + 1) if q not in keep]
    t = psi.reshape([2] * n).transpose([q - 1 for q in keep] + [q - 1 for q in rest])
    return t.reshape(2 ** len(keep), -1)


def permute_qubits(op, order: list[int]) -> np.ndarray:
    """Relabel an operator whose tensor factors are ordered as ``order`` back to ``1..n``.

    ``op`` acts on qubits listed in ``order`` (first factor = ``order[0]``).
    """
    op = np.asarray(op, dtype=float)
    n = num_qubits(op.shape[0])
    if sorted(order) != list(range(1, n + 1)):
        raise LinalgError(f"order {order} is not a permutation of 1..{n}")
    inv = list(np.argsort(order))
    t = op.reshape([2] * (2 * n)).transpose(inv + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


def eigh(a) -> Spectrum:
    """Eigendecomposition of a real symmetric matrix, eigenvalues ascending."""
    a = symmetric(a)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure on tiny matrices
        raise LinalgError(f"eigensolver failed: {exc}") from exc
    return Spectrum(w, v)


def eigvalsh(a) -> np.ndarray:
    return np.linalg.eigvalsh(symmetric(a))


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a symmetric matrix."""
    return float(np.abs(eigvalsh(a)).sum())


def binary_entropy(p: float) -> float:
    if p < -1e-12 or p > 1 + 1e-12:
        raise LinalgError(f"probability {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def check_density_matrix(rho, *, atol: float = 1e-10) -> np.ndarray:
    """Return the eigenvalues of ``rho`` after checking unit trace and positivity."""
    rho = symmetric(rho, name="density matrix")
    tr = float(np.trace(rho))
    if abs(tr - 1.0) > atol:
        raise LinalgError(f"density matrix has trace {tr!r}")
    w = eigvalsh(rho)
    if w[0] < -atol:
        raise LinalgError(f"density matrix has negative eigenvalue {w[0]!r}")
    return w


def von_neumann_entropy(rho) -> float:
    """Entropy in bits, ``-sum p log2 p`` over the spectrum of ``rho``."""
    p = check_density_matrix(rho)
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())
