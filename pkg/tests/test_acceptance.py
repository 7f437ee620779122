"""Acceptance battery: one test per criterion, each printing a pass/fail line.

Criterion 8 runs its stated constants (K = 4 inside a window of 5000) and is
expected red: the staged thresholds of the construction provably exceed what
any small-Gevrey parametrisation can deliver in that window (each stage k
needs (1 - a_k)(B(j_{k+1}) - B(j_k)) > 2 ln k with B(j) = ln(j!)/j, and the
accumulated demand exceeds B(5000) = 7.52 for every order ladder).  The same
construction completes at feasible windows, which
test_weights.py::test_uniform_bound_k3_succeeds_at_5000 and
test_uniform_bound_k4_succeeds_at_200k demonstrate.
"""

from weightseq import acceptance as acc


def _check(cid, **kwargs):
    result = acc.run_criterion(cid, **kwargs)
    print(result.line())
    assert result.passed, f"criterion {cid} failed: {result.details}"


def test_criterion_01_conjugate_algebra():
    _check("1")


def test_criterion_02_conjugate_moderate_growth():
    _check("2")


def test_criterion_03_dual_structure():
    _check("3")


def test_criterion_04_index_reciprocity():
    _check("4")


def test_criterion_05_weight_machinery():
    _check("5", seed=0)


def test_criterion_06_regularization():
    _check("6", seed=20260810)


def test_criterion_07_extension_bounds():
    _check("7")


def test_criterion_08_uniform_bound():
    # expected red: see the module docstring; the mixed-scaling half holds
    # and the construction half cannot fit the stated window
    _check("8")


def test_criterion_09_boundedness_demonstration():
    _check("9", n_terms=120)


def test_criterion_10_bounded_case_solutions():
    _check("10")


def test_criterion_11_predicate_fixtures():
    _check("11")
