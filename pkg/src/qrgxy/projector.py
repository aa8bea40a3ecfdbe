"""Renormalised couplings read off a numerically projected two-block Hamiltonian.

These rebuild the coupling recursions from scratch: assemble two blocks plus
one inter-block bond, project each block onto its ground doublet, and read the
``sx sx`` and ``sy sy`` coefficients of the resulting 4x4 operator. They are
independent of the closed-form recursions and serve as a cross-check.
"""

from __future__ import annotations

import numpy as np

from . import model1d, model2d
from .linalg import I_SIGMA_Y, SIGMA_X, kron
from .model1d import Couplings


def _read_couplings(m: np.ndarray, multiplicity: int) -> Couplings:
    xx = kron(SIGMA_X, SIGMA_X)
    yy = -kron(I_SIGMA_Y, I_SIGMA_Y)
    # tr(P P) = 4 for Pauli products
    cx = multiplicity * float(np.trace(m @ xx)) / 4
    cy = multiplicity * float(np.trace(m @ yy)) / 4
    # cx = lam' (1 + gamma') / 4, cy = lam' (1 - gamma') / 4
    lam = 2 * (cx + cy)
    gamma = (cx - cy) / (cx + cy)
    return Couplings(lam, gamma)


def _project(block_h: np.ndarray, doublet: np.ndarray, bond: np.ndarray) -> np.ndarray:
    d = block_h.shape[0]
    eye = np.eye(d)
    h = kron(block_h, eye) + kron(eye, block_h) + bond
    p = kron(doublet, doublet)
    return p @ h @ p.T


def projected_couplings_1d(c: Couplings) -> Couplings:
    """Two three-spin blocks (6 qubits) joined by the bond (block 1, spin 3)-(block 2, spin 1)."""
    pair = model1d.ground_pair_1d(c)
    doublet = np.stack([pair.phi0, pair.phi1])
    bond = model1d.xy_bond(3, 4, 6, c.lam, c.gamma)
    m = _project(model1d.block_hamiltonian_1d(c), doublet, bond)
    return _read_couplings(m, 1)


def projected_couplings_2d(c: Couplings) -> Couplings:
    """Two five-spin blocks (10 qubits) joined by the corner bond (L, 2)-(L+1, 3).

    Every inter-block bond contributes the same projected coefficient, so the
    single bond is scaled by ``BOND_MULTIPLICITY``.
    """
    pair = model2d.ground_pair_2d(c.gamma, c.lam)
    doublet = np.stack([pair.upsilon0, pair.upsilon1])
    bond = model1d.xy_bond(2, 5 + 3, 10, c.lam, c.gamma)
    m = _project(model2d.block_hamiltonian_2d(c), doublet, bond)
    return _read_couplings(m, model2d.BOND_MULTIPLICITY)
