import math

import numpy as np
import pytest

from qrgxy import model1d, projector
from qrgxy.errors import ModelError
from qrgxy.linalg import basis_index, eigh
from qrgxy.model1d import Couplings

from oracles import xy_hamiltonian

GAMMAS = np.linspace(-1.5, 1.5, 200)


def test_block_hamiltonian_matches_complex_assembly():
    for g in (-1.2, 0.0, 0.37, 1.0):
        ref = xy_hamiltonian([(1, 2), (2, 3)], 3, 1.3, g)
        assert np.abs(model1d.block_hamiltonian_1d(Couplings(1.3, g)) - ref).max() <= 1e-15


def test_two_block_bond_matches_complex_assembly():
    ref = xy_hamiltonian([(3, 4)], 6, 0.7, -0.4)
    assert np.abs(model1d.xy_bond(3, 4, 6, 0.7, -0.4) - ref).max() <= 1e-15


@pytest.mark.parametrize("g", GAMMAS)
def test_ground_pair_is_degenerate_ground_space(g):
    c = Couplings(1.0, float(g))
    pair = model1d.ground_pair_1d(c)
    h = model1d.block_hamiltonian_1d(c)
    w = eigh(h).eigenvalues
    assert abs(w[1] - w[0]) <= 1e-9
    assert abs(pair.energy - w[0]) <= 1e-12
    for v in (pair.phi0, pair.phi1):
        assert abs(v @ v - 1) <= 1e-12
        assert np.abs(h @ v - w[0] * v).max() <= 1e-9
    assert abs(pair.phi0 @ pair.phi1) <= 1e-12


def test_ground_state_examples():
    phi0 = model1d.ground_state_1d(0.0)
    assert phi0[basis_index("uud")] == pytest.approx(-0.5, abs=1e-15)
    assert phi0[basis_index("udu")] == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    assert phi0[basis_index("duu")] == pytest.approx(-0.5, abs=1e-15)
    assert phi0[basis_index("ddd")] == 0.0
    phi1 = model1d.ground_state_1d(1.0, which=1)
    r2 = math.sqrt(2)
    assert phi1[basis_index("uuu")] == pytest.approx(-r2 / (2 * r2), abs=1e-15)
    assert phi1[basis_index("udd")] == pytest.approx(0.5, abs=1e-15)


def test_ground_pair_raises_on_broken_amplitudes(monkeypatch):
    def bad(gamma):
        phi0, phi1 = np.zeros(8), np.zeros(8)
        phi0[0] = phi1[7] = 1.0
        return phi0, phi1

    monkeypatch.setattr(model1d, "_amplitudes", bad)
    with pytest.raises(ModelError):
        model1d.ground_pair_1d(Couplings(1.0, 0.3))


def test_couplings_must_be_finite():
    with pytest.raises(ValueError):
        Couplings(float("nan"), 0.0)
    with pytest.raises(ValueError):
        Couplings(1.0, float("inf"))


def test_recursion_examples():
    assert model1d.rg_gamma_1d(0.0) == 0.0
    assert model1d.rg_gamma_1d(1.0) == 1.0
    assert model1d.rg_gamma_1d(-1.0) == -1.0
    assert model1d.rg_gamma_1d(0.5) == pytest.approx(13 / 14, abs=1e-15)
    assert model1d.rg_gamma_1d(13 / 14) == pytest.approx(9841 / 9842, abs=1e-15)
    c = model1d.rg_step_1d(Couplings(1.0, 0.0))
    assert c.lam == pytest.approx(0.5, abs=1e-15) and c.gamma == 0.0
    c = model1d.rg_step_1d(Couplings(2.0, 1.0))
    assert c.lam == pytest.approx(2.0, abs=1e-15)


def test_recursion_is_odd():
    for g in GAMMAS:
        assert model1d.rg_gamma_1d(-g) == -model1d.rg_gamma_1d(g)


def test_recursion_derivative():
    assert model1d.rg_step_derivative_1d(0.0) == 3.0
    assert model1d.rg_step_derivative_1d(1.0) == 0.0
    assert model1d.rg_step_derivative_1d(-1.0) == 0.0
    h = 1e-6
    for g in GAMMAS[::7]:
        fd = (model1d.rg_gamma_1d(g + h) - model1d.rg_gamma_1d(g - h)) / (2 * h)
        assert model1d.rg_step_derivative_1d(g) == pytest.approx(fd, abs=1e-8)


def test_flow_converges_to_stable_points():
    for g in GAMMAS:
        if abs(g) < 0.05:
            continue
        x = float(g)
        for _ in range(60):
            x = model1d.rg_gamma_1d(x)
        assert abs(x - math.copysign(1.0, g)) <= 1e-12


@pytest.mark.parametrize("g", np.linspace(-1.5, 1.5, 31))
@pytest.mark.parametrize("lam", [1.0, 0.4])
def test_projector_reproduces_recursion(g, lam):
    c = Couplings(lam, float(g))
    a = model1d.rg_step_1d(c)
    b = projector.projected_couplings_1d(c)
    assert abs(a.lam - b.lam) <= 1e-8
    assert abs(a.gamma - b.gamma) <= 1e-8
