import pytest

from simplexwidth.suites import SUITES, run_suite


def test_shear_suite_small():
    rep = run_suite("shear", seed=1, d=3, trials=500, n_mc=50_000)
    assert rep.ok, rep.to_dict()
    assert {c.name for c in rep.checks} >= {"group_law", "inverse", "pole_transport", "jacobian_finite_difference"}


def test_lemma_suite_small():
    rep = run_suite("lemma", seed=2, trials=20_000)
    assert rep.ok
    assert len(rep.checks) == 4


def test_lemma_suite_reports_injected_counterexample():
    # an injected tuple that meets the hypothesis still cannot break the lemma
    rep = run_suite("lemma", seed=2, trials=100, tuple_values=[0.1, 0.5, 0.2, 1.5, 1, 1, 1, 2])
    assert rep.ok


def test_spl_suite_small():
    assert run_suite("spl", seed=3, trials=5, resolution=256).ok


def test_switch_suite_small():
    rep = run_suite("switch", seed=4, trials=30, n=2000)
    assert rep.ok
    assert rep.to_dict()["violations"] == 0


def test_unknown_suite():
    assert "shear" in SUITES
    with pytest.raises(ValueError):
        run_suite("nope")
