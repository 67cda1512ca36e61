import dataclasses
import math

import numpy as np
import pytest

from wegnerlab.errors import InvalidInterval, SymbolVanishes
from wegnerlab.experiments import (IdsCurve, estimate_ids, estimate_wegner, lipschitz_check,
                                   realization_hamiltonian, self_averaging_check)
from wegnerlab.model import AndersonConfig, DensityBV, SingleSiteProfile, rescale_kappa
from wegnerlab.symbols import CoefficientField


def test_one_site_wegner(one_site):
    rep = estimate_wegner(one_site, 0.2, 0.5, 4000, seed=3)
    assert abs(rep.mean_count - 0.3) <= 3 * rep.std_error
    assert rep.c_w == pytest.approx(2.0)
    assert rep.passed
    # single site: N(E) = 1{omega <= E}
    assert set(np.unique(rep.counts)) <= {0.0, 1.0}


def test_interval_outside_support_counts_zero(one_site):
    rep = estimate_wegner(one_site, 2.0, 3.0, 50, seed=0)
    assert rep.mean_count == 0.0 and rep.std_error == 0.0
    assert rep.passed and math.isinf(rep.slack_sigmas)
    assert rep.to_dict()["slack_sigmas"] is None


def test_wegner_rejects_bad_arguments(one_site):
    with pytest.raises(InvalidInterval):
        estimate_wegner(one_site, 0.5, 0.5, 10, seed=0)
    with pytest.raises(ValueError):
        estimate_wegner(one_site, 0.0, 0.5, 1, seed=0)


def test_wegner_deterministic(sign_changing):
    a = estimate_wegner(sign_changing, 0.0, 0.5, 40, seed=11)
    b = estimate_wegner(sign_changing, 0.0, 0.5, 40, seed=11)
    assert a == b and np.array_equal(a.counts, b.counts)
    c = estimate_wegner(sign_changing, 0.0, 0.5, 40, seed=12)
    assert not np.array_equal(a.counts, c.counts)


def test_workers_do_not_change_results(sign_changing):
    a = estimate_wegner(sign_changing, 0.0, 0.5, 24, seed=5)
    b = estimate_wegner(sign_changing, 0.0, 0.5, 24, seed=5, workers=2)
    assert a == b and np.array_equal(a.counts, b.counts)


def test_report_dict_fields(one_site):
    d = estimate_wegner(one_site, 0.2, 0.5, 20, seed=1).to_dict()
    assert {"config_digest", "e1", "e2", "realizations", "seed", "mean_count", "std_error",
            "volume", "ratio", "c_w", "slack_sigmas", "pass"} == set(d)


def test_vanishing_symbol_propagates():
    cfg = AndersonConfig(d=1, l=4, alpha=CoefficientField({0: 1.0, 1: -1.0}),
                         v=SingleSiteProfile.indicator(), f=DensityBV.uniform(0, 1))
    with pytest.raises(SymbolVanishes):
        estimate_wegner(cfg, 0.0, 0.1, 10, seed=0)


def test_realization_hamiltonian_is_symmetric(sign_changing):
    H = realization_hamiltonian(sign_changing, 0, 3).toarray()
    assert H.shape == (21, 21)
    assert np.array_equal(H, H.T)


def test_ids_one_site_matches_cdf(one_site):
    E = np.array([-0.5, 0.1, 0.4, 0.75, 1.5])
    curve = estimate_ids(one_site, E, 3000, seed=2)
    exact = one_site.f.cdf(E)
    assert curve.mean[0] == 0.0 and curve.mean[-1] == 1.0
    assert np.all(np.abs(curve.mean - exact) <= 3 * curve.std_error + 1e-15)
    assert curve.in_unit_interval() and curve.monotone()


def test_ids_counts_are_nondecreasing_per_realization(sign_changing):
    curve = estimate_ids(sign_changing, np.linspace(-3, 3, 13), 20, seed=4)
    assert np.all(np.diff(curve.samples, axis=1) >= 0)
    assert curve.samples[:, 0].max() == 0.0 or curve.energies[0] > -3
    assert curve.realizations == 20


def test_ids_rejects_unsorted(one_site):
    with pytest.raises(ValueError):
        estimate_ids(one_site, [0.5, 0.1], 10, seed=0)


def test_lipschitz_flat_curve():
    samples = np.full((10, 4), 0.5)
    curve = IdsCurve(np.linspace(0, 1, 4), samples.mean(0), np.zeros(4), (1,), samples)
    verdicts = lipschitz_check(curve, c_w=0.0)
    assert len(verdicts) == 3
    assert all(v.slope == 0.0 and v.passed for v in verdicts)


def test_lipschitz_single_point():
    samples = np.ones((5, 1))
    curve = IdsCurve(np.array([0.0]), np.ones(1), np.zeros(1), (1,), samples)
    assert lipschitz_check(curve, 1.0) == []


def test_lipschitz_one_site_slope(one_site):
    curve = estimate_ids(one_site, np.linspace(0.1, 0.9, 5), 3000, seed=8)
    for v in lipschitz_check(curve, c_w=2.0):
        # density is 1 on [0,1], so the slope estimates 1
        assert abs(v.slope - 1.0) <= 3 * v.sigma + 1e-12
        assert v.passed


def test_lipschitz_detects_steep_curve():
    rng = np.random.default_rng(0)
    samples = (rng.uniform(size=(400, 1)) <= np.array([[0.0, 1.0]])).astype(float)
    curve = IdsCurve(np.array([0.0, 0.01]), samples.mean(0), samples.std(0), (0,), samples)
    assert not lipschitz_check(curve, c_w=2.0)[0].passed


def test_self_averaging_degenerate(one_site):
    table = self_averaging_check(one_site, [0], E=5.0, M=20, seed=0)
    assert table.rows[0].variance == 0.0 and table.rows[0].mean == 1.0


def test_self_averaging_one_site_variance(one_site):
    table = self_averaging_check(one_site, [0], E=0.3, M=4000, seed=1)
    p = 0.3
    row = table.rows[0]
    assert row.variance == pytest.approx(p * (1 - p), abs=0.02)


def test_self_averaging_decreasing(sign_changing):
    # very small boxes have quantized counts and are excluded
    table = self_averaging_check(sign_changing, [10, 20, 40], E=0.5, M=150, seed=6)
    v = [r.variance for r in table.rows]
    assert table.non_increasing
    assert v[2] < v[1] < v[0]
    assert [r.volume for r in table.rows] == [21, 41, 81]


def test_self_averaging_rejects_unsorted(one_site):
    with pytest.raises(ValueError):
        self_averaging_check(one_site, [3, 1], E=0.0, M=5, seed=0)


def test_kappa_rescaled_reports_identical():
    alpha = CoefficientField({0: 1.0, 1: -0.5})
    base = AndersonConfig(d=1, l=6, alpha=alpha, v=SingleSiteProfile({0: 2.0, 1: 0.5}),
                          f=DensityBV.uniform(0, 1))
    v1, h = rescale_kappa(base.v, base.f)
    scaled = AndersonConfig(d=1, l=6, alpha=alpha, v=v1, f=h)
    a = estimate_wegner(base, 0.5, 1.0, 60, seed=9).to_dict()
    b = estimate_wegner(scaled, 0.5, 1.0, 60, seed=9).to_dict()
    assert a.pop("config_digest") != b.pop("config_digest")
    assert a == b
