"""Acceptance criteria, one test per criterion.

Each test carries ``@pytest.mark.criterion(k, title)``; the hook in
``conftest.py`` prints one PASS/FAIL line per criterion after the run.
Run directly with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time
from math import factorial

import pytest

from opfunctors.operads import LEIB_TEXT, LIE_TEXT, build_operad, parse_presentation


def failing(result: dict) -> list[str]:
    return [k for k, v in result.items() if not v["pass"]]


@pytest.mark.criterion(1, "operad engine: dims by free-operad quotient, axioms")
def test_operad_engine(suite_results):
    t0 = time.perf_counter()
    lie = build_operad(parse_presentation(LIE_TEXT, nmax=5, name="Lie"))
    leib = build_operad(parse_presentation(LEIB_TEXT, nmax=5, name="Leib"))
    dims = [(lie.dim(n), leib.dim(n)) for n in range(1, 6)]
    elapsed = time.perf_counter() - t0
    assert dims == [(factorial(n - 1), factorial(n)) for n in range(1, 6)]
    assert elapsed < 60
    res = suite_results("operads")
    assert failing(res) == []
    assert all(res[f"axioms_{n}"]["nmax"] == 4 for n in ("lie", "leib", "assu", "comu"))


@pytest.mark.criterion(2, "right Leibniz checker: Lie, Leib hold; AssU fails; modes agree")
def test_leibniz_checker(suite_results):
    res = suite_results("leibniz")
    assert failing(res) == []
    assert res["lie_generators"]["holds"] and res["leib_generators"]["holds"]
    assert not res["assu_generators"]["holds"] and res["assu_generators"]["witness"]
    for name in ("lie", "leib", "assu"):
        assert res[f"{name}_modes_agree"]["max_arity"] == 5


@pytest.mark.criterion(3, "mu-tilde naturality dichotomy")
def test_mu_tilde_dichotomy(suite_results):
    res = suite_results("naturality")
    assert failing(res) == []
    assert res["mu_tilde_natural_random"]["modules"] == 20
    bad = res["assu_raw_maps_not_natural"]
    assert bad["lhs"] != bad["rhs"]


@pytest.mark.criterion(4, "shift of free modules: explicit decomposition iso, m <= 4")
def test_delta_proj(suite_results):
    res = suite_results("delta-proj")
    assert failing(res) == []
    for m in range(1, 5):
        assert res[f"m{m}"]["source_dims"] == res[f"m{m}"]["target_dims"]


@pytest.mark.criterion(5, "reflection suite: coker, adjunction, closure, six-term")
def test_reflection(suite_results):
    res = suite_results("reflection")
    assert failing(res) == []
    for key in ("coker_in_subcategory", "adjunction_factorization", "closure_sub_quotient_sum",
                "six_term_exact"):
        assert res[key]["pass"]
    assert res["coker_in_subcategory"]["modules"] == 20


@pytest.mark.criterion(6, "change of operad along Leib -> Lie")
def test_operad_change(suite_results):
    res = suite_results("operad-change")
    assert failing(res) == []
    assert res["membership_equivalent"]["modules"] == 13


@pytest.mark.criterion(7, "convolution: shift iso, sum rule, monoidal reflection")
def test_convolution(suite_results):
    res = suite_results("convolution")
    assert failing(res) == []
    assert res["reflection_monoidal"]["pairs"] == 10
    assert res["reflection_monoidal"]["max_bound"] <= 4


@pytest.mark.criterion(8, "derived functors: two methods, projectives, support")
def test_homology(suite_results):
    res = suite_results("homology")
    assert failing(res) == []
    assert res["methods_agree"]["modules"] == 10


@pytest.mark.criterion(9, "group side: Hopf, conjugation, psi/rho, PBW, gamma-tbar")
def test_group_side(suite_results):
    res = suite_results("group")
    assert failing(res) == []
    for key in ("hopf_tensor", "primitive_conjugation", "psi_rho_composites",
                "pbw_matches_cat_ass", "gamma_tbar_dims"):
        assert res[key]["pass"]


@pytest.mark.criterion(10, "reproducibility: verify all, exit 0, byte-stable, < 10 min")
def test_reproducible():
    cmd = [sys.executable, "-m", "opfunctors", "verify", "all"]
    runs = []
    t0 = time.perf_counter()
    for _ in range(2):
        runs.append(subprocess.run(cmd, capture_output=True, timeout=600))
    elapsed = (time.perf_counter() - t0) / 2
    assert all(r.returncode == 0 for r in runs)
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout
    assert elapsed < 600


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
