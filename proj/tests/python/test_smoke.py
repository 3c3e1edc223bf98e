import math

import numpy as np
import pytest

import risrelay as rr


@pytest.fixture(scope="module")
def channels():
    return rr.generate_scenario(rr.SystemGeometry.make(5, 5, 4, 16), seed=3)


def sinr(rows, P, noise, k):
    g = np.abs(rows.conj().T @ P) ** 2
    return g[k, k] / (noise + g[k].sum() - g[k, k])


def test_scenario_shapes(channels):
    assert channels.H_TR.shape == (5, 5)
    assert channels.H_TI.shape == (16, 5)
    assert channels.h_I.shape == (16, 4)
    dead = channels.without_ris()
    assert not np.any(dead.h_I)


def test_waterfilling_meets_rate():
    rng = np.random.default_rng(0)
    H = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    wf = rr.svd_waterfilling(H, 0.1, 12.0, 4)
    assert rr.relay_rate(H, wf.W, 0.1) == pytest.approx(12.0, abs=1e-9)
    assert min(wf.powers) >= 0.0


def test_duality_hits_targets():
    rng = np.random.default_rng(1)
    rows = rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
    targets = [1.0, 2.0, 3.0, 4.0]
    U = rr.duality_beamforming(rows, [1.0] * 4, targets)
    for k, t in enumerate(targets):
        assert sinr(rows, U, 1.0, k) == pytest.approx(t, rel=1e-6)
    Z = rr.zero_forcing(rows, targets, [1.0] * 4)
    assert np.linalg.norm(Z) ** 2 >= np.linalg.norm(U) ** 2 * (1 - 1e-9)


def test_solvers(channels):
    fd = rr.solve_full_duplex(channels, 2.0)
    hd = rr.solve_half_duplex(channels, 2.0)
    ris = rr.solve_ris_only(channels, 2.0)
    assert fd.converged and hd.converged
    assert min(fd.user_rates) >= 2.0 - 1e-6
    assert min(hd.user_rates) >= 4.0 - 1e-6
    assert min(ris.user_rates) >= 2.0 - 1e-6
    assert all(b <= a * (1 + 1e-9) for a, b in zip(fd.power_history, fd.power_history[1:]))
    assert np.allclose(np.abs(fd.theta.reflection()), 1.0)
    assert fd.total_power < hd.total_power


def test_discrete(channels):
    small = rr.generate_scenario(rr.SystemGeometry.make(5, 5, 4, 3), seed=2)
    best = rr.brute_force_oracle(small, rr.Scheme.FullDuplex, 1.0, 1)
    assert best.evaluations == 8
    ref = rr.successive_refinement(small, rr.Scheme.FullDuplex, 1.0, 1, [0, 0, 0])
    assert best.total_power <= ref.total_power
    assert rr.quantize_levels([0.9 * math.pi / 2], 2) == [1]
    with pytest.raises(rr.SearchSpaceError):
        rr.brute_force_oracle(channels, rr.Scheme.HalfDuplex, 1.0, 4)


def test_experiment_is_deterministic():
    cfg = {"mode": "fd", "rth": [1, 2], "L": 8, "trials": 2, "seed": 5}
    a = rr.run_experiment(cfg)
    b = rr.run_experiment(cfg)
    assert a == b
    assert len(a) == 4
    assert all(r["converged"] for r in a)
    assert rr.normalize_config(cfg)["sweep_values"] == [1.0, 2.0]
    with pytest.raises(rr.DomainError):
        rr.run_experiment({"colour": "blue"})
