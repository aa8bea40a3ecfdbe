"""Anisotropic XY chain: three-spin blocks and their coupling recursion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ModelError
from .linalg import I_SIGMA_Y, SIGMA_X, basis_index, eigh, embed

BLOCK_QUBITS = 3
# bonds inside one block, as (left, right) qubit labels
BLOCK_BONDS = ((1, 2), (2, 3))
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class Couplings:
    lam: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.gamma)):
            raise ValueError(f"couplings must be finite, got {self}")


@dataclass(frozen=True)
class BlockGroundPair1D:
    phi0: np.ndarray
    phi1: np.ndarray
    energy: float


@lru_cache(maxsize=None)
def _pauli_pair(i: int, j: int, nqubits: int) -> tuple[np.ndarray, np.ndarray]:
    xx = embed({i: SIGMA_X, j: SIGMA_X}, nqubits)
    yy = -embed({i: I_SIGMA_Y, j: I_SIGMA_Y}, nqubits)
    xx.flags.writeable = False
    yy.flags.writeable = False
    return xx, yy


def xy_bond(i: int, j: int, nqubits: int, lam: float, gamma: float) -> np.ndarray:
    """(lam/4) [(1+gamma) sx_i sx_j + (1-gamma) sy_i sy_j] on ``nqubits`` qubits."""
    xx, yy = _pauli_pair(i, j, nqubits)
    return lam / 4 * ((1 + gamma) * xx + (1 - gamma) * yy)


def block_hamiltonian_1d(c: Couplings) -> np.ndarray:
    return sum(xy_bond(i, j, BLOCK_QUBITS, c.lam, c.gamma) for i, j in BLOCK_BONDS)


def _amplitudes(gamma: float) -> tuple[np.ndarray, np.ndarray]:
    a = math.sqrt(1 + gamma * gamma)
    r2 = math.sqrt(2.0)
    phi0 = np.zeros(8)
    phi0[basis_index("uud")] = -a
    phi0[basis_index("udu")] = r2
    phi0[basis_index("duu")] = -a
    phi0[basis_index("ddd")] = r2 * gamma
    phi1 = np.zeros(8)
    phi1[basis_index("uuu")] = -r2 * gamma
    phi1[basis_index("udd")] = a
    phi1[basis_index("dud")] = -r2
    phi1[basis_index("ddu")] = a
    norm = 2 * a
    return phi0 / norm, phi1 / norm


def ground_pair_1d(c: Couplings) -> BlockGroundPair1D:
    """Closed-form degenerate ground states of the three-spin block.

    Both vectors are checked against the block Hamiltonian's ground energy; a
    residual above ``RESIDUAL_TOL * max(1, |lam|)`` raises ``ModelError``.
    """
    phi0, phi1 = _amplitudes(c.gamma)
    h = block_hamiltonian_1d(c)
    e0 = float(eigh(h).eigenvalues[0])
    tol = RESIDUAL_TOL * max(1.0, abs(c.lam))
    for name, v in (("phi0", phi0), ("phi1", phi1)):
        res = float(np.abs(h @ v - e0 * v).max())
        if res > tol:
            raise ModelError(f"{name} at gamma={c.gamma!r} is not a ground state (residual {res:.3e})")
    return BlockGroundPair1D(phi0, phi1, e0)


def ground_state_1d(gamma: float, which: int = 0) -> np.ndarray:
    """One of the two closed-form block ground states, without the eigensolver check."""
    return _amplitudes(gamma)[which]


def rg_gamma_1d(gamma: float) -> float:
    return (gamma**3 + 3 * gamma) / (3 * gamma**2 + 1)


def rg_step_1d(c: Couplings) -> Couplings:
    g = c.gamma
    lam = c.lam * (3 * g * g + 1) / (2 * (1 + g * g))
    return Couplings(lam, rg_gamma_1d(g))


def rg_step_derivative_1d(gamma: float) -> float:
    """d(gamma')/d(gamma) of the one-dimensional recursion."""
    g2 = gamma * gamma
    den = 3 * g2 + 1
    return ((3 * g2 + 3) * den - 6 * gamma * (gamma**3 + 3 * gamma)) / (den * den)
