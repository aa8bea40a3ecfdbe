"""Self-checks run by ``qrgxy validate``."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import flow, model1d, model2d, observables, projector
from .errors import QRGError
from .model1d import Couplings

SAMPLE_GAMMAS = tuple(float(g) for g in np.linspace(-1.5, 1.5, 100))


@dataclass
class CheckResult:
    name: str
    passed: bool
    failures: list = field(default_factory=list)
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "failures": self.failures, "detail": self.detail}


def _check(name: str, items, test) -> CheckResult:
    failures = []
    for item in items:
        try:
            ok = test(item)
        except QRGError as exc:
            ok = False
            item = f"{item} ({exc})"
        if not ok:
            failures.append(item)
    return CheckResult(name, not failures, failures)


def check_ground_pair_1d() -> CheckResult:
    def test(g):
        pair = model1d.ground_pair_1d(Couplings(1.0, g))
        return abs(float(pair.phi0 @ pair.phi1)) <= 1e-12

    return _check("ground_pair_1d", SAMPLE_GAMMAS, test)


def check_ground_pair_2d() -> CheckResult:
    def test(g):
        pair = model2d.ground_pair_2d(g)
        if not pair.analytic:
            return False
        v = model2d.numeric_ground_pair(model2d.block_hamiltonian_2d(Couplings(1.0, g)))
        basis = np.stack(v, axis=1)
        defect = max(np.linalg.norm(u - basis @ (basis.T @ u)) for u in (pair.upsilon0, pair.upsilon1))
        return defect <= 1e-8

    return _check("ground_pair_2d", SAMPLE_GAMMAS, test)


def check_zeta_normalization() -> CheckResult:
    def test(g):
        n0, n1 = model2d.zeta_set(g).norms()
        return abs(n0 - 1) <= 1e-10 and abs(n1 - 1) <= 1e-10

    return _check("zeta_normalization", SAMPLE_GAMMAS, test)


def check_monogamy(samples: int = 200, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    states = []
    for n in (3, 5):
        for _ in range(samples):
            v = rng.normal(size=2**n)
            states.append(v / np.linalg.norm(v))

    def test(k):
        return observables.residual_entanglement(states[k]).tau >= -observables.MONOGAMY_SLACK

    return _check("monogamy", range(len(states)), test)


def _coupling_gap(a: Couplings, b: Couplings) -> float:
    return max(abs(a.lam - b.lam), abs(a.gamma - b.gamma))


def check_projector_1d() -> CheckResult:
    def test(g):
        c = Couplings(1.0, g)
        return _coupling_gap(model1d.rg_step_1d(c), projector.projected_couplings_1d(c)) <= 1e-8

    return _check("projector_1d", SAMPLE_GAMMAS[::5], test)


def check_projector_2d() -> CheckResult:
    def test(g):
        c = Couplings(1.0, g)
        return _coupling_gap(model2d.rg_step_2d(c), projector.projected_couplings_2d(c)) <= 1e-6

    return _check("projector_2d", SAMPLE_GAMMAS[::10], test)


def check_fixed_points() -> CheckResult:
    expected = [(-1.0, True), (0.0, False), (1.0, True)]

    def test(model):
        found = flow.fixed_points(model)
        if len(found) != len(expected):
            return False
        return all(abs(r - er) <= 1e-10 and st == es for (r, _, st), (er, es) in zip(found, expected))

    return _check("fixed_points", ("1d", "2d"), test)


def check_plateaus() -> CheckResult:
    """Fixed-point values that only hold with bits as the entropy unit."""
    cases = {
        "tau_1d(gamma=1)": (lambda: observables.tau_1d(model1d.ground_state_1d(1.0)).tau, 1.0, 1e-9),
        "tau_2d(gamma=1)": (lambda: observables.tau_2d(model2d.ground_state_2d(1.0)).tau, 1.0, 1e-9),
        "D_1d(gamma=1)": (lambda: observables.trace_distance_1d(model1d.ground_state_1d(1.0)), 0.75, 1e-9),
        "D_2d(gamma=1)": (lambda: observables.trace_distance_2d(model2d.ground_state_2d(1.0)), 0.75, 1e-9),
        "D_2d(gamma=0)": (lambda: observables.trace_distance_2d(model2d.ground_state_2d(0.0)), 0.718, 5e-3),
    }

    def test(key):
        fn, target, tol = cases[key]
        return abs(fn() - target) <= tol

    return _check("plateaus", list(cases), test)


CHECKS = (
    check_ground_pair_1d,
    check_ground_pair_2d,
    check_zeta_normalization,
    check_monogamy,
    check_projector_1d,
    check_projector_2d,
    check_fixed_points,
    check_plateaus,
)


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
