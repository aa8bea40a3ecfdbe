import math

from qrgxy import linalg, model2d, observables, validation


def by_name(results):
    return {r.name: r for r in results}


def test_all_checks_pass():
    results = by_name(validation.run_all())
    assert all(r.passed for r in results.values()), [r.as_dict() for r in results.values() if not r.passed]


def test_flipped_amplitude_sign_is_caught(monkeypatch):
    real = model2d.zeta_set

    def flipped(g):
        zs = real(g)
        z = list(zs.zeta)
        z[4] = -z[4]
        return model2d.ZetaSet(tuple(z), zs.varsigma, zs.eta1, zs.eta2)

    monkeypatch.setattr(model2d, "zeta_set", flipped)
    result = validation.check_ground_pair_2d()
    assert not result.passed
    assert len(result.failures) == len(validation.SAMPLE_GAMMAS)


def test_natural_log_entropy_is_caught(monkeypatch):
    def entropy_nats(p):
        if p <= 0 or p >= 1:
            return 0.0
        return -p * math.log(p) - (1 - p) * math.log(1 - p)

    monkeypatch.setattr(observables, "binary_entropy", entropy_nats)
    monkeypatch.setattr(linalg, "binary_entropy", entropy_nats)
    real_vn = observables.von_neumann_entropy
    monkeypatch.setattr(observables, "von_neumann_entropy", lambda rho: real_vn(rho) * math.log(2))
    result = validation.check_plateaus()
    assert not result.passed
    assert any("tau" in str(f) for f in result.failures)
