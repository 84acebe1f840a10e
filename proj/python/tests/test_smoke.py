# SPDX-License-Identifier: Apache-2.0
import math

import pytest

import mmuplink as mu


def test_noise_only_outage():
    p = mu.InterferenceProfile(gamma0=10.0, m0=1, beta=2.0)
    # 1 - e^{-x}(1 + x), x = 2 m0 beta / gamma0 = 0.4
    x = 0.4
    assert mu.outage_probability(p) == pytest.approx(1 - math.exp(-x) * (1 + x), abs=1e-12)
    assert mu.outage_probability_no_hopping(p) == pytest.approx(1 - math.exp(-0.2), abs=1e-12)


def test_closed_form_against_simulation():
    i = mu.Interferer(omega=0.5, m=1.5, q=[0.3] * 4, c=[0.1, 0.4, 0.1, 0.4])
    p = mu.InterferenceProfile(gamma0=100.0, m0=2, beta=1.5, interferers=[i])
    eps = mu.outage_probability(p)
    est, se = mu.outage_monte_carlo(p, 200000, seed=3)
    assert abs(est - eps) <= 4 * math.sqrt(eps * (1 - eps) / 200000)


def test_propagation_presets():
    ny = mu.PropagationParams.preset("newyork")
    assert mu.path_loss_exponent(0.05, ny) == pytest.approx(
        2.3 + 2.4 * math.tanh(1.0), rel=1e-12)
    assert mu.path_loss(0.001, ny) == 1.0
    assert mu.PropagationParams.preset("nowhere") is None


def test_config_round_trip_and_errors():
    cfg = mu.RunConfig.from_text("[link]\nbeta_db = 6\n")
    again = mu.RunConfig.from_text(cfg.to_text())
    assert again == cfg
    assert again.hash() == cfg.hash()
    with pytest.raises(ValueError, match="delta"):
        mu.RunConfig.from_text("delta: 1.5\n")


def test_code_rate():
    assert mu.code_rate(1.0, 1.0) == pytest.approx(1.0)
    assert mu.code_rate(10 ** 0.3) == pytest.approx(1.3698, abs=1e-4)


def test_small_campaign_is_deterministic():
    cfg = mu.RunConfig()
    cfg.trials = 8
    cfg.threads = 1
    a = mu.campaign(cfg, c_over_m=1.0)
    cfg.threads = 2
    b = mu.campaign(cfg, c_over_m=1.0)
    assert a["epsilon"] == b["epsilon"]
    h = a["hopping"]
    assert h["ase"] == 100.0 * h["code_rate"] * (1.0 - h["epsilon_bar"])
    assert 0.0 <= h["epsilon_bar"] <= 1.0


def test_topology_and_validate():
    pts = mu.topology(mu.RunConfig())
    assert len(pts) == 132
    r = mu.validate(profiles=3, samples=20000, seed=5)
    assert r["total"] == 3
