"""Anisotropic XY model on the square lattice with five-spin star blocks.

Qubit 1 is the block centre, qubits 2-5 the corners. The closed-form ground
states are parametrised by ten amplitudes ``zeta[1..10]``; the coupling
recursion is built from three quadratic forms ``xi0, xi1, xi2`` of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError
from .linalg import basis_index, eigh
from .model1d import Couplings, xy_bond

BLOCK_QUBITS = 5
CENTRE = 1
CORNERS = (2, 3, 4, 5)
# closed forms are 0/0 at gamma = 0; below this the limiting values are used
ZERO_BRANCH = 1e-8
RESIDUAL_TOL = 1e-8
DEGENERACY_GAP = 1e-9
# the renormalised bond collects this many microscopic inter-block bonds
BOND_MULTIPLICITY = 6

# basis states multiplying each amplitude, in |s1 s2 s3 s4 s5>
UPSILON0_TERMS = {
    1: ("uuuud", "uuudu", "uuduu", "uduuu"),
    2: ("uuddd", "ududd", "uddud", "udddu"),
    3: ("duuuu",),
    4: ("duudd", "dudud", "duddu", "dduud", "ddudu", "ddduu"),
    5: ("ddddd",),
}
UPSILON1_TERMS = {
    6: ("uuuuu",),
    7: ("uuudd", "uudud", "uuddu", "uduud", "ududu", "udduu"),
    8: ("udddd",),
    9: ("duuud", "duudu", "duduu", "dduuu"),
    10: ("duddd", "ddudd", "dddud", "ddddu"),
}


@dataclass(frozen=True)
class ZetaSet:
    zeta: tuple[float, ...]  # zeta[0] is unused padding so zeta[k] matches the usual labels
    varsigma: float
    eta1: float
    eta2: float

    def __getitem__(self, k: int) -> float:
        if not 1 <= k <= 10:
            raise IndexError(k)
        return self.zeta[k]

    def norms(self) -> tuple[float, float]:
        z = self.zeta
        n0 = 4 * z[1] ** 2 + 4 * z[2] ** 2 + z[3] ** 2 + 6 * z[4] ** 2 + z[5] ** 2
        n1 = z[6] ** 2 + 6 * z[7] ** 2 + z[8] ** 2 + 4 * z[9] ** 2 + 4 * z[10] ** 2
        return n0, n1


@dataclass(frozen=True)
class XiSet:
    xi0: float
    xi1: float
    xi2: float


@dataclass(frozen=True)
class BlockGroundPair2D:
    upsilon0: np.ndarray
    upsilon1: np.ndarray
    energy: float
    analytic: bool = True


def block_hamiltonian_2d(c: Couplings) -> np.ndarray:
    return sum(xy_bond(CENTRE, m, BLOCK_QUBITS, c.lam, c.gamma) for m in CORNERS)


def _sqrt(x: float, gamma: float, what: str) -> float:
    if x < 0:
        if x < -1e-12:
            raise ModelError(f"negative radicand {x!r} in {what} at gamma={gamma!r}")
        return 0.0
    return math.sqrt(x)


def zeta_set(gamma: float) -> ZetaSet:
    """Ground-state amplitudes of the five-spin block.

    The closed forms are evaluated with ``varsigma - 1`` rewritten as
    ``(g^4 + 34 g^2) / (varsigma + 1)``, which avoids the O(g^2) cancellation
    near ``g = 0``; the expressions are otherwise identical.
    """
    g = float(gamma)
    if abs(g) < ZERO_BRANCH:
        z = [0.0] * 11
        z[2] = -math.sqrt(2) / 4
        z[9] = math.sqrt(2) / 4
        z[4] = math.sqrt(3) / 6
        z[7] = -math.sqrt(3) / 6
        return ZetaSet(tuple(z), 1.0, 2.0, 6.0)
    g2 = g * g
    g4 = g2 * g2
    g6 = g4 * g2
    sign = 1.0 if g > 0 else -1.0
    s = math.sqrt(g4 + 34 * g2 + 1)
    s_minus_1 = (g4 + 34 * g2) / (s + 1)
    eta1 = 2 * s - g4 * (104 + 3 * s) - g2 * (71 + 17 * s)
    eta2 = g4 * (71 - 2 * s) + g2 * (104 + 17 * s) + 3 * (s + 1)
    # 4 + 6 g^6 - 2 eta1, with 4 - 4 s folded into -4 (s - 1)
    a = 6 * g6 - 4 * s_minus_1 + 2 * g4 * (104 + 3 * s) + 2 * g2 * (71 + 17 * s)
    b = 4 * g6 + 2 * eta2
    ra = _sqrt(a, g, "zeta3..zeta5")
    rb = _sqrt(b, g, "zeta6..zeta8")
    rs = math.sqrt(s)

    z = [0.0] * 11
    z[1] = -_sqrt(s_minus_1 + g2, g, "zeta1") / (4 * rs)
    z[2] = -sign * _sqrt(s - g2 + 1, g, "zeta2") / (4 * rs)
    z[3] = (g2 + s_minus_1) / ra
    z[4] = g * (5 + g2 + s) / (2 * ra)
    z[5] = 3 * math.sqrt(2) * g2 / (ra / math.sqrt(2))
    z[6] = abs(g) * (g2 - 1 - s) / rb
    z[7] = -sign * (1 + 5 * g2 + s) / (2 * rb)
    z[8] = -3 * math.sqrt(2) * abs(g) / (rb / math.sqrt(2))
    # gamma * sqrt(x / gamma^2) = sign(gamma) * sqrt(x)
    z[9] = sign / 4 * _sqrt((1 - g2 + s) / s, g, "zeta9")
    z[10] = _sqrt((g2 + s_minus_1) / s, g, "zeta10") / 4
    if any(math.isnan(v) for v in z):
        raise ModelError(f"NaN amplitude at gamma={g!r}")
    return ZetaSet(tuple(z), s, eta1, eta2)


def _index_map(terms: dict[int, tuple[str, ...]]) -> tuple[np.ndarray, np.ndarray]:
    idx = [basis_index(label) for labels in terms.values() for label in labels]
    which = [k for k, labels in terms.items() for _ in labels]
    return np.array(idx), np.array(which)


_UPSILON0_INDEX = _index_map(UPSILON0_TERMS)
_UPSILON1_INDEX = _index_map(UPSILON1_TERMS)


def assemble_states(zs: ZetaSet) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(zs.zeta)
    out = []
    for idx, which in (_UPSILON0_INDEX, _UPSILON1_INDEX):
        v = np.zeros(2**BLOCK_QUBITS)
        v[idx] = z[which]
        out.append(v)
    return out[0], out[1]


def ground_state_2d(gamma: float, which: int = 0) -> np.ndarray:
    """One of the closed-form block ground states, without the eigensolver check."""
    return assemble_states(zeta_set(gamma))[which]


def _down_parity(nqubits: int) -> np.ndarray:
    return np.array([bin(b).count("1") % 2 for b in range(2**nqubits)])


def numeric_ground_pair(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ground-space basis split into odd and even down-spin-count sectors.

    Each vector is sign-fixed so its largest-magnitude amplitude is positive.
    """
    spec = eigh(h)
    v = spec.eigenvectors[:, :2]
    parity = _down_parity(BLOCK_QUBITS)
    out = []
    for sector in (1, 0):
        m = v * (parity == sector)[:, None]
        u, sv, _ = np.linalg.svd(m, full_matrices=False)
        vec = u[:, 0]
        vec = vec / np.linalg.norm(vec)
        k = int(np.argmax(np.abs(vec)))
        if vec[k] < 0:
            vec = -vec
        out.append(vec)
    return out[0], out[1]


def ground_pair_2d(gamma: float, lam: float = 1.0) -> BlockGroundPair2D:
    """Closed-form ground states, checked against the 32x32 block spectrum.

    Falls back to parity-split numeric vectors (``analytic=False``) if the
    closed forms fail the residual check.
    """
    h = block_hamiltonian_2d(Couplings(lam, gamma))
    w = eigh(h).eigenvalues
    if w[2] - w[1] < DEGENERACY_GAP * max(1.0, abs(lam)):
        raise ModelError(f"ground space at gamma={gamma!r} is more than two-fold degenerate")
    e0 = float(w[0])
    u0, u1 = assemble_states(zeta_set(gamma))
    tol = RESIDUAL_TOL * max(1.0, abs(lam))
    ok = all(
        abs(float(v @ v) - 1.0) <= 1e-10 and float(np.abs(h @ v - e0 * v).max()) <= tol
        for v in (u0, u1)
    ) and abs(float(u0 @ u1)) <= 1e-10
    if ok:
        return BlockGroundPair2D(u0, u1, e0, analytic=True)
    u0, u1 = numeric_ground_pair(h)
    return BlockGroundPair2D(u0, u1, e0, analytic=False)


def xi_set(gamma: float) -> XiSet:
    g = float(gamma)
    z = zeta_set(g).zeta
    z1, z2, z3, z4, z5, z6, z7, z8, z9, z10 = z[1:]
    xi1 = (3 * z4 * z10 + 3 * z1 * z7 + z2 * z8 + z3 * z9) * (
        z5 * z10 + z1 * z6 + 3 * z2 * z7 + 3 * z4 * z9
    )
    xi2 = (
        z10**2 * (9 * z4**2 + z5**2)
        + z1**2 * (z6**2 + 9 * z7**2)
        + z2**2 * (9 * z7**2 + z8**2)
        + 2 * z2 * z9 * (9 * z4 * z7 + z3 * z8)
        + z9**2 * (z3**2 + 9 * z4**2)
        + 2 * z10 * (
            z1 * z5 * z6 + 9 * z1 * z4 * z7 + 3 * z2 * z5 * z7
            + 3 * z2 * z4 * z8 + 3 * z3 * z4 * z9 + 3 * z4 * z5 * z9
        )
        + 6 * z1 * (z2 * z6 * z7 + z2 * z7 * z8 + z4 * z6 * z9 + z3 * z7 * z9)
    )
    xi0 = (
        z10**2 * (9 * z4**2 + 6 * g * z4 * z5 + z5**2)
        + z1**2 * (z6**2 + 6 * g * z6 * z7 + 9 * z7**2)
        + z2**2 * (9 * z7**2 + 6 * g * z7 * z8 + z8**2)
        + 2 * z2 * z9 * (3 * g * z3 * z7 + 9 * z4 * z7 + z3 * z8 + 3 * g * z4 * z8)
        + z9**2 * (z3**2 + 6 * g * z3 * z4 + 9 * z4**2)
        + 2 * z1 * (
            z2 * (3 * z6 * z7 + 9 * g * z7**2 + g * z6 * z8 + 3 * z7 * z8)
            + z9 * (g * z3 * z6 + 3 * z4 * z6 + 3 * z3 * z7 + 9 * g * z4 * z7)
        )
        + 2 * z10 * (
            z1 * z5 * z6 + 9 * z1 * z4 * z7 + 3 * z2 * z5 * z7
            + 3 * z2 * z4 * z8 + 3 * z3 * z4 * z9 + 3 * z4 * z5 * z9
            + g * (
                3 * z1 * z4 * z6 + 9 * z2 * z4 * z7 + 3 * z1 * z5 * z7
                + z2 * z5 * z8 + 9 * z4**2 * z9 + z3 * z5 * z9
            )
        )
    )
    if not xi0 > 0:
        raise ModelError(f"xi0 = {xi0!r} is not positive at gamma={g!r}")
    return XiSet(xi0, xi1, xi2)


def rg_gamma_2d(gamma: float) -> float:
    xi = xi_set(gamma)
    return (2 * xi.xi1 + gamma * xi.xi2) / xi.xi0


def rg_step_2d(c: Couplings) -> Couplings:
    xi = xi_set(c.gamma)
    return Couplings(6 * c.lam * xi.xi0, (2 * xi.xi1 + c.gamma * xi.xi2) / xi.xi0)


def rg_step_derivative_2d(gamma: float, h: float = 1e-6) -> float:
    """Central-difference slope of the two-dimensional gamma recursion."""
    return (rg_gamma_2d(gamma + h) - rg_gamma_2d(gamma - h)) / (2 * h)
