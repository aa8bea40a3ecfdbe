"""Trace distance to the product of marginals and residual entanglement.

Entanglement quantities are in bits. Pairwise entanglement of formation uses
the two-qubit concurrence; the one-versus-rest cut of a pure state uses the
entropy of the single-qubit marginal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import LinalgError, QRGError
from .linalg import (
    I_SIGMA_Y,
    binary_entropy,
    check_density_matrix,
    kron,
    num_qubits,
    permute_qubits,
    pure_state,
    reduced_state,
    split_state,
    trace_norm,
    von_neumann_entropy,
)

# sigma_y (x) sigma_y, real
YY = -kron(I_SIGMA_Y, I_SIGMA_Y)
MONOGAMY_SLACK = 1e-9


@dataclass(frozen=True)
class Bipartition:
    nqubits: int
    part_a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(sorted(set(self.part_a)))
        if not a or len(a) >= self.nqubits or a[0] < 1 or a[-1] > self.nqubits:
            raise LinalgError(f"{self.part_a} is not a proper nonempty subset of 1..{self.nqubits}")
        object.__setattr__(self, "part_a", a)

    @property
    def part_b(self) -> tuple[int, ...]:
        return tuple(q for q in range(1, self.nqubits + 1) if q not in self.part_a)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.nqubits, self.part_b)


@dataclass(frozen=True)
class EntanglementReport:
    ef_global: float
    ef_pairs: dict[int, float]
    tau: float


def _cut(psi: np.ndarray, cut) -> Bipartition:
    if isinstance(cut, Bipartition):
        return cut
    return Bipartition(num_qubits(psi.size), tuple(cut))


def trace_distance_to_marginals(psi, cut: Bipartition | Iterable[int]) -> float:
    """``0.5 * || |psi><psi| - rho_A (x) rho_B ||_1`` for the bipartition ``cut``."""
    psi = pure_state(psi, atol=1e-10)
    cut = _cut(psi, cut)
    rho_a = reduced_state(psi, cut.part_a)
    rho_b = reduced_state(psi, cut.part_b)
    product = permute_qubits(kron(rho_a, rho_b), list(cut.part_a + cut.part_b))
    diff = np.outer(psi, psi) - product
    diff = (diff + diff.T) / 2
    return 0.5 * trace_norm(diff)


def concurrence(rho) -> float:
    """Two-qubit concurrence of a real density matrix.

    The square roots of the eigenvalues of ``rho YY rho YY`` are taken as the
    absolute eigenvalues of ``sqrt(rho) YY sqrt(rho)``, which is symmetric.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (4, 4):
        raise LinalgError(f"concurrence needs a 4x4 density matrix, got {rho.shape}")
    w = check_density_matrix(rho)
    _, v = np.linalg.eigh(rho)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    m = root @ YY @ root
    lam = np.sort(np.abs(np.linalg.eigvalsh((m + m.T) / 2)))[::-1]
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def concurrence_from_ensemble(vectors) -> float:
    """Concurrence of ``rho = W W^T`` given the (unnormalised) ensemble columns ``W``.

    The square roots of the eigenvalues of ``rho YY rho YY`` are the singular
    values of ``W^T YY W``; this avoids square roots of tiny eigenvalues.
    """
    w = np.asarray(vectors, dtype=float)
    sv = np.linalg.svd(w.T @ YY @ w, compute_uv=False)
    sv = np.concatenate([sv, np.zeros(max(0, 4 - sv.size))])
    return float(min(1.0, max(0.0, sv[0] - sv[1:].sum())))


def eof_from_concurrence(c: float) -> float:
    c = min(max(c, 0.0), 1.0)
    return binary_entropy((1 + math.sqrt(1 - c * c)) / 2)


def eof_two_qubit(rho) -> float:
    return eof_from_concurrence(concurrence(rho))


def eof_pure_cut(psi, cut: Bipartition | Iterable[int]) -> float:
    psi = pure_state(psi, atol=1e-10)
    cut = _cut(psi, cut)
    # the smaller side gives the cheaper spectrum; both sides share it
    side = min((cut.part_a, cut.part_b), key=len)
    return von_neumann_entropy(reduced_state(psi, side))


def pair_eof(psi, pair: tuple[int, int]) -> float:
    """Entanglement of formation of the two-qubit marginal of a pure state."""
    return eof_from_concurrence(concurrence_from_ensemble(split_state(psi, pair)))


def residual_entanglement(psi, focus: int = 1) -> EntanglementReport:
    """Squared-EoF monogamy deficit of qubit ``focus`` against every other qubit."""
    psi = pure_state(psi, atol=1e-10)
    n = num_qubits(psi.size)
    ef_global = eof_pure_cut(psi, Bipartition(n, (focus,)))
    pairs = {k: pair_eof(psi, (focus, k)) for k in range(1, n + 1) if k != focus}
    tau = ef_global**2 - sum(e * e for e in pairs.values())
    if tau < 0:
        if tau < -MONOGAMY_SLACK:
            raise QRGError(f"monogamy violated: tau = {tau!r}")
        tau = 0.0
    return EntanglementReport(ef_global, pairs, tau)


def tau_1d(psi) -> EntanglementReport:
    psi = np.asarray(psi, dtype=float)
    if psi.size != 8:
        raise LinalgError("tau_1d expects a three-qubit state")
    return residual_entanglement(psi, 1)


def tau_2d(psi) -> EntanglementReport:
    psi = np.asarray(psi, dtype=float)
    if psi.size != 32:
        raise LinalgError("tau_2d expects a five-qubit state")
    return residual_entanglement(psi, 1)


def trace_distance_1d(psi) -> float:
    return trace_distance_to_marginals(psi, Bipartition(3, (1,)))


def trace_distance_2d(psi) -> float:
    return trace_distance_to_marginals(psi, Bipartition(5, (1, 2, 3, 4)))
