import math

import mpmath as mp
import numpy as np
import pytest

from weightseq import operator_lab as ol
from weightseq import seqcore as sc
from weightseq import weights as wt
from weightseq.errors import (InvalidSequenceError, PreconditionError,
                              UntrustedEvaluationError)


@pytest.fixture(scope="module")
def gauge():
    return wt.build_gauge(wt.markin_bound(512),
                          [sc.gevrey(a) for a in (0.1, 0.5, 0.9)])


@pytest.fixture(scope="module")
def minimal_model(gauge):
    return ol.build_counterexample(gauge, n_terms=12)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def test_counterexample_structure(gauge, minimal_model):
    model, vec = minimal_model
    n = np.arange(1, 13)
    assert np.all(np.diff(model.logk) > 0)          # k strictly increasing
    assert np.all(model.logk >= np.log(n) - 1e-12)  # k(n) >= n
    assert np.all(model.log_g_at_k >= np.log(n) - 1e-9)  # g(k(n)) >= n
    # eps: eps_1 = 1/4, halving rule below min(1/n, prev)
    assert model.eps[0] == 0.25
    for i in range(1, 12):
        assert model.eps[i] == pytest.approx(
            min(1.0 / (i + 1), model.eps[i - 1]) / 2.0)
    assert np.all(model.eps < 0.5)  # lambda = k + 1/2 sits inside every ring
    # small thresholds solve to exact integers
    assert model.integral_k[:3].all()
    assert not model.integral_k[5:].any()
    assert vec.l2_report()["summable"]


def test_counterexample_minimal_thresholds(gauge, minimal_model):
    model, _ = minimal_model
    # minimality at n = 1: a unit step in k still moves g measurably there
    k1 = round(math.exp(model.logk[0]))
    assert gauge.log_g(math.log(k1)) >= -1e-12
    assert gauge.log_g(math.log(k1 - 1)) < 0.0
    # at larger n the threshold is only resolvable at scale; half of k(2)
    # must sit clearly under the target
    assert gauge.log_g(model.logk[1] - math.log(2)) < math.log(2)
    assert gauge.log_g(model.logk[1]) >= math.log(2) - 1e-9


def test_counterexample_requires_decay(minimal_model):
    ones = sc.custom(np.zeros(65), name="ones")
    flat = wt.build_gauge(ones)
    with pytest.raises(PreconditionError):
        ol.build_counterexample(flat, n_terms=4)
    with pytest.raises(InvalidSequenceError):
        ol.build_counterexample(wt.build_gauge(wt.markin_bound(128)), n_terms=0)


# ---------------------------------------------------------------------------
# spectral sums
# ---------------------------------------------------------------------------

def test_exponential_sum_certificates(minimal_model):
    model, vec = minimal_model
    for t in (0.5, 1.0, 2.0):
        rep = ol.exponential_class_sum(model, vec, t)
        assert rep.certificate == "converged"
        assert float(rep.max_tail_log_ratio) <= -math.log(2)
    # once ln g(k(n)) exceeds t the terms must decrease
    rep = ol.exponential_class_sum(model, vec, 1.5)
    lng = model.log_g_at_k
    for i in range(1, model.n_terms):
        if lng[i] > 1.5 and lng[i - 1] > 1.5:
            assert rep.term_logs[i] < rep.term_logs[i - 1]


def test_weighted_sum_divergence(minimal_model):
    model, vec = minimal_model
    rep = ol.weighted_class_sum(model, vec, sc.gevrey(0.5), 1.0)
    assert rep.certificate == "diverged"
    assert rep.diverged_from is not None
    with pytest.raises(UntrustedEvaluationError):
        ol.weighted_class_sum(model, vec, sc.gevrey(0), 1.0)
    with pytest.raises(InvalidSequenceError):
        ol.weighted_class_sum(model, vec, sc.gevrey(0.5), 0.0)


def test_floored_construction_full_grid(gauge):
    model, vec = ol.build_counterexample(gauge, n_terms=40, log_g_floor=11.0,
                                         log_g_slope=0.05)
    for t in (0.5, 2.0, 10.0):
        assert ol.exponential_class_sum(model, vec, t).certificate == "converged"
    for a in (0.1, 0.9):
        rep = ol.weighted_class_sum(model, vec, sc.gevrey(a), 2.0)
        assert rep.certificate == "diverged" and rep.diverged_from == 1
    assert vec.l2_report()["summable"]


def test_scaling_leaves_verdicts(minimal_model):
    model, vec = minimal_model
    scaled = vec.scaled(123.5)
    a = ol.exponential_class_sum(model, vec, 1.0)
    b = ol.exponential_class_sum(model, scaled, 1.0)
    assert a.certificate == b.certificate
    assert float(b.log_partial_sum - a.log_partial_sum) == pytest.approx(
        2 * math.log(123.5), abs=1e-9)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def test_membership_desk_model():
    lam = np.arange(1.0, 25.0)
    model, vec = ol.from_floats(lam, -lam**3)  # decay beats any power-type weight
    v = ol.membership_verdict(model, vec, sc.gevrey(0.5), "beurling",
                              [0.5, 1.0, 2.0, 4.0])
    assert v.status == "holds"
    v = ol.membership_verdict(model, vec, sc.gevrey(0.5), "roumieu", [1.0])
    assert v.status == "holds"


def test_membership_counterexample_fails(minimal_model):
    model, vec = minimal_model
    v = ol.membership_verdict(model, vec, sc.gevrey(0.3), "roumieu", [1.0, 2.0])
    assert v.status == "fails"
    assert v.mode == "roumieu"


def test_membership_finite_support_always_holds():
    lam = np.arange(1.0, 13.0)
    logc = np.concatenate([[-1.0, -2.0, -3.0], np.full(9, -np.inf)])
    model, vec = ol.from_floats(lam, logc)
    for M in (sc.gevrey(0.2), sc.gevrey(0.8)):
        for mode in ("roumieu", "beurling"):
            assert ol.membership_verdict(model, vec, M, mode,
                                         [0.5, 1.0, 3.0]).status == "holds"


def test_membership_monotone_in_sequence():
    lam = np.arange(1.0, 25.0)
    model, vec = ol.from_floats(lam, -lam**3)
    small = ol.membership_verdict(model, vec, sc.gevrey(0.4), "roumieu", [1.0])
    large = ol.membership_verdict(model, vec, sc.gevrey(0.6), "roumieu", [1.0])
    assert not (small.status == "holds" and large.status == "fails")


def test_membership_mode_validation(minimal_model):
    model, vec = minimal_model
    with pytest.raises(InvalidSequenceError):
        ol.membership_verdict(model, vec, sc.gevrey(0.5), "sideways", [1.0])


# ---------------------------------------------------------------------------
# bounded case
# ---------------------------------------------------------------------------

def test_bounded_solution_identity_case():
    rep = ol.bounded_solution_check([1.0, -1.0], [1.0, 0.0], 0.0, n_max=12)
    assert rep.max_rel_err <= 1e-12
    assert rep.exp_type_constant == 1.0
    assert rep.exp_type_margin <= 1.0 + 1e-12


def test_bounded_solution_scalar_example():
    # y(t) = e^{2t}: third derivative at t = 1 is 8 e^2
    lam = np.array([2.0])
    y1 = math.exp(2.0)
    d3 = (lam**3 * np.exp(lam * 1.0) * np.array([1.0]))[0]
    assert d3 == pytest.approx(8 * math.exp(2.0), rel=1e-12)
    rep = ol.bounded_solution_check(lam, [1.0], 1.0, n_max=12)
    assert rep.max_rel_err <= 1e-12


def test_bounded_solution_random_diag():
    rng = np.random.default_rng(11)
    eigs = np.sort(rng.uniform(-2, 2, 8))
    y0 = rng.normal(size=8)
    for t in (0.0, 0.3, 1.0):
        rep = ol.bounded_solution_check(eigs, y0, t, n_max=12, grid_points=100)
        assert rep.max_rel_err <= 1e-9
        assert rep.exp_type_margin <= 1.0 + 1e-9
    with pytest.raises(InvalidSequenceError):
        ol.bounded_solution_check([1.0], [1.0, 2.0], 0.0)


# ---------------------------------------------------------------------------
# scenario runner
# ---------------------------------------------------------------------------

def test_run_scenario_smoke():
    out = ol.run_scenario({
        "gauge": {"type": "markin", "P": 256},
        "n_terms": 20, "log_g_floor": 4.0,
        "t_grid": [0.5, 1.0, 2.0],
        "members": ["gevrey:0.5"], "member_t_grid": [1.0]})
    assert set(out["exponential"].values()) == {"converged"}
    assert out["weighted"]["gevrey:0.5"]["1"] == "diverged"
    assert out["rows"][0] == ("n", "log_k", "eps", "log_g", "log_c")
    assert len(out["rows"]) == 21
    with pytest.raises(InvalidSequenceError):
        ol.run_scenario({"gauge": {"type": "wavelet"}})
