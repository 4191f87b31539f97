import math
from itertools import product

import numpy as np
import pytest

from cayley_cutoff import lemmas
from cayley_cutoff.groups import make_group, replicate_rng
from cayley_cutoff.lemmas import (cos_taylor_check, dirichlet_rate_check,
                                  divisibility_check, eigenvalue_tail_probe,
                                  exit_interval_check, gcd_expectation_probe,
                                  lclt_scan, level_set_count_check,
                                  modified_l2_probe, run_all,
                                  set_probability_check, tail_ratio_check,
                                  unimodality_check, vz_uniform_check,
                                  _survival_series)


def test_vz_uniform_examples():
    rep = vz_uniform_check([6], (2, 4), 2)
    assert rep.passed
    assert rep.details["support_size"] == 3  # {0, 2, 4}
    assert rep.details["gcds"] == [2]

    for V in [(1,), (2,), (1, 3), (4, 2)]:
        rep = vz_uniform_check([5], V, len(V))
        assert rep.passed and rep.details["support_size"] == 5

    for m in range(2, 13):
        rep = vz_uniform_check([m], (1,), 1)
        assert rep.passed and rep.details["support_size"] == m


def test_vz_uniform_support_size_formula():
    for m, V in [(12, (2, 4)), (12, (3,)), (8, (2, 6)), (9, (3, 3))]:
        rep = vz_uniform_check([m], V, len(V))
        g = math.gcd(math.gcd(*(abs(v) for v in V)) if len(V) > 1 else abs(V[0]), m)
        assert rep.details["support_size"] == m // g


def test_vz_uniform_rejects_degenerate_v():
    with pytest.raises(ValueError):
        vz_uniform_check([6], (6,), 1)
    with pytest.raises(ValueError):
        vz_uniform_check([10], (1, 2), 1)


def test_divisibility_examples():
    # uniform mixture fact underlying the lemma
    for y in range(1, 10 ** 4 + 1):
        assert (y // 2) / y <= 0.5
    rep = divisibility_check("undirected", 3.0, 10, 2)
    assert rep.passed and rep.details["probability"] <= 0.5
    for s, r in ((0.5, 5), (3.0, 10), (20.0, 25)):
        rep = divisibility_check("undirected", s, r, 7)
        assert rep.passed and rep.details["probability"] <= 1.0 / 7 + 1e-12
    with pytest.raises(ValueError):
        divisibility_check("undirected", 1.0, 1, 1)


def test_unimodality():
    assert unimodality_check(0.0, 60).passed
    assert unimodality_check(2.5, 60).passed
    assert unimodality_check(400.0, 200).passed


def test_cos_taylor():
    rep = cos_taylor_check(10 ** 6)
    assert rep.passed
    # chain at theta = 1/2
    sq = (math.pi / 2) ** 2
    chain = (2 * sq, 2.0, 2 * math.exp(-7 * math.pi ** 2 / 72) * sq, 2 * sq / 3)
    assert abs(chain[0] - 4.9348) < 1e-4
    assert abs(chain[3] - 1.6449) < 1e-4
    assert chain[0] >= chain[1] >= chain[2] >= chain[3]
    with pytest.raises(ValueError):
        cos_taylor_check(10)


def test_exit_interval_exponential_case():
    # ell = 1: exit time is Exponential(1)
    for s in (0.1, 1.0, 5.0):
        assert abs(_survival_series(1, s) - math.exp(-s)) < 1e-12
    assert exit_interval_check(1, (0.1, 1.0, 5.0)).passed


def test_exit_interval_floor_and_quasi_stationary():
    rep = exit_interval_check(5, (0.1, 1.0, 10.0))
    assert rep.passed
    assert _survival_series(5, 10.0) >= math.exp(-10.0 * (1 - math.cos(math.pi / 10)))
    assert rep.details["quasi_stationary_residual"] <= 1e-12
    with pytest.raises(ValueError):
        exit_interval_check(0, (1.0,))


def test_exit_interval_survival_monotone():
    surv = [_survival_series(6, s) for s in (0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(surv, surv[1:]))
    by_ell = [_survival_series(ell, 3.0) for ell in (2, 4, 8)]
    assert all(a < b for a, b in zip(by_ell, by_ell[1:]))


def test_dirichlet_rate():
    rep = dirichlet_rate_check(1)
    assert rep.passed and abs(rep.details["lambda_A"] - 1.0) < 1e-12
    rep = dirichlet_rate_check(8)
    assert rep.passed
    assert abs(rep.details["lambda_A"] - (1 - math.cos(math.pi / 16))) < 1e-10
    # longer horizon tightens the rate estimate
    lam = rep.details["lambda_A"]
    rep_long = dirichlet_rate_check(8, t_max=10 ** 3 / lam)
    assert rep_long.details["relative_gap"] < 1e-3
    with pytest.raises(ValueError):
        dirichlet_rate_check(8, t_max=1.0)


def test_tail_ratio_bands():
    rep = tail_ratio_check("poisson", (100.0,), (10, 30))
    assert rep.passed and rep.details["checked"] > 0
    assert tail_ratio_check("srw", (25.0, 100.0), (5, 10, 25)).passed
    with pytest.raises(ValueError):
        tail_ratio_check("poisson", (100.0,), (1,))  # r < sqrt(s) everywhere
    with pytest.raises(ValueError):
        tail_ratio_check("bogus", (100.0,), (10,))


def test_tail_ratio_single_term_regime():
    # r >> s: the tail is dominated by its first term
    from scipy import stats
    s, r = 2.0, 40
    x = int(s + r)
    ratio = stats.poisson.sf(x - 1, s) / stats.poisson.pmf(x, s)
    assert abs(ratio - 1.0) < 0.1


def test_lclt_scan():
    assert lclt_scan("directed", (10 ** 2, 10 ** 4)).passed
    assert lclt_scan("undirected", (10 ** 2, 10 ** 4)).passed
    with pytest.raises(ValueError):
        lclt_scan("directed", (5.0,))


def _lclt_max_error(model, s):
    from cayley_cutoff import entropic
    dist = entropic.step_distribution(model, s)
    centered = dist.support - dist.mean
    bulk = np.abs(centered) <= s ** (7.0 / 12.0)
    p = dist.pmf[bulk]
    c = centered[bulk]
    return float(np.abs(np.log(p) + 0.5 * math.log(2 * math.pi * s)
                        + c ** 2 / (2 * s)).max())


def test_lclt_error_decays_with_s():
    for model in ("directed", "undirected"):
        assert _lclt_max_error(model, 10 ** 4) < _lclt_max_error(model, 10 ** 2)
    assert _lclt_max_error("directed", 10 ** 4) <= 0.2


def test_level_set_census_cyclic_prime():
    rep = level_set_count_check(make_group([101]))
    assert rep.passed
    assert rep.details["census"] == {1: 1, 101: 100}


def test_level_set_census_totients():
    rep = level_set_count_check(make_group([12]))
    census = rep.details["census"]
    # |A(s)| = phi(s) for each divisor s of 12
    phi = {1: 1, 2: 1, 3: 2, 4: 2, 6: 2, 12: 4}
    assert census == phi
    assert sum(census.values()) == 12
    assert level_set_count_check(make_group([6, 4])).passed


def test_gcd_expectation_probe():
    rng = replicate_rng(40, 0)
    # d=0: E[g^0] = 1 exactly
    rep = gcd_expectation_probe(0, 2, 10, 5000, rng)
    assert rep.passed and rep.details["estimate"] == 1.0
    # |I| = d+2: bound 1 + 3*2^{-2} = 1.75
    rep = gcd_expectation_probe(1, 3, 10, 40000, rng)
    assert rep.passed and rep.details["estimate"] <= 1.75
    # harmonic case |I| = d+1: 2 ln(2r) enforced as well
    rep = gcd_expectation_probe(1, 2, 10, 40000, rng)
    assert rep.passed
    assert "harmonic" in rep.worst_case
    assert rep.details["estimate"] <= 2 * math.log(20)
    with pytest.raises(ValueError):
        gcd_expectation_probe(1, 0, 10, 100, rng)


def test_modified_l2_negative_control_tiny_k():
    # k=1 cannot satisfy the global typicality ceiling: the rejection collapse
    # is surfaced, not silently averaged over.
    with pytest.raises(RuntimeError):
        modified_l2_probe(make_group([13]), 1, "undirected", 0.0, 1, 5000,
                          replicate_rng(41, 0))
    # k=3 accepts a sliver of samples and reports a large collision excess
    rep = modified_l2_probe(make_group([13]), 3, "undirected", 0.0, 2, 20000,
                            replicate_rng(5, 0))
    assert not rep.passed and rep.details["d_estimate"] > 0.5
    assert rep.details["rejection_efficiency"] < 0.05


def test_modified_l2_acceptance_scale():
    rep = modified_l2_probe(make_group([10007]), 200, "undirected", 0.0, 3,
                            200000, replicate_rng(20260825, 0))
    assert rep.passed
    assert rep.details["d_estimate"] - 3 * rep.details["stderr"] <= 0.5
    assert rep.details["empty_contribution"] <= rep.details["empty_budget"]
    with pytest.raises(ValueError):
        modified_l2_probe(make_group([100003]), 10, "undirected", 0.0, 1, 100,
                          replicate_rng(41, 0))


def test_set_probability_check():
    rng = replicate_rng(20260826, 0)
    rep = set_probability_check(10 ** 4, 20, "undirected", 0.0, range(19),
                                40000, rng)
    assert rep.passed
    # full index set: weakest bound, sanity only
    rep = set_probability_check(10 ** 4, 10, "undirected", 0.0, range(10),
                                5000, replicate_rng(42, 0))
    assert rep.passed
    with pytest.raises(ValueError):
        set_probability_check(10 ** 4, 5, "undirected", 0.0, range(6), 1000,
                              replicate_rng(42, 0))


def test_eigenvalue_tail_probe():
    rng = replicate_rng(20260827, 0)
    rep = eigenvalue_tail_probe(make_group([101]), 12, 101, 20000, rng)
    assert rep.passed
    assert abs(rep.details["bound"] - 2.0 ** -12 / 101) < 1e-12
    rep = eigenvalue_tail_probe(make_group([36]), 9, 6, 20000, rng)
    assert rep.passed
    with pytest.raises(ValueError):
        eigenvalue_tail_probe(make_group([101]), 12, 7, 100, rng)


def test_run_all_default_suite_passes():
    reports = run_all()
    assert len(reports) == len(lemmas.DEFAULT_CHECKS)
    failures = [r.name for r in reports if not r.passed]
    assert failures == []


def test_run_all_only_filter():
    reports = run_all(only="cos_taylor")
    assert len(reports) == 1 and reports[0].name == "cos_taylor"
    with pytest.raises(KeyError):
        run_all(only="nonexistent")
