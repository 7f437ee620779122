import math

import numpy as np
import pytest

from weightseq import seqcore as sc
from weightseq import transforms as tr
from weightseq import weights as wt
from weightseq.errors import (CensoredWindowError, PreconditionError,
                              UntrustedEvaluationError)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def test_counting_examples():
    assert wt.counting(sc.gevrey(1), 7.3) == 7
    assert wt.counting(sc.gevrey(2), 10.0) == 3  # {1, 4, 9}
    assert wt.counting(sc.gevrey(2), 0.5) == 0   # below mu_1
    with pytest.raises(CensoredWindowError):
        wt.counting(sc.gevrey(1, P=16), 17.0)


def test_counting_step_structure():
    M = sc.gevrey(2)
    mu = np.exp(sc.quotients(M).logmu)
    for p in (3, 10, 20):
        eps = 1e-6
        assert wt.counting(M, mu[p] + eps) == p
        assert wt.counting(M, mu[p + 1] - eps) == p


# ---------------------------------------------------------------------------
# omega
# ---------------------------------------------------------------------------

def test_omega_zero_region_and_zero_arg():
    M = sc.gevrey(2)
    assert wt.omega(M, 0.0).value == 0.0
    mu1 = float(np.exp(sc.quotients(M).logmu[1]))
    for t in np.linspace(0, mu1, 7):
        assert wt.omega(M, float(t)).value == 0.0


def test_omega_untrusted_flat_sequence():
    r = wt.omega(sc.gevrey(0), 2.0)
    assert not r.trusted
    assert r.argmax == 512


def test_omega_brute_force_oracle():
    # sup_p (p ln 100 - 2 ln p!) scanned far beyond the window
    M = sc.gevrey(2)
    p = np.arange(0, 10_001, dtype=float)
    from scipy.special import gammaln
    oracle = float(np.max(p * math.log(100.0) - 2 * gammaln(p + 1)))
    got = wt.omega(M, 100.0)
    assert got.trusted
    assert got.value == pytest.approx(oracle, abs=1e-12)
    assert got.value == pytest.approx(15.8429, abs=1e-3)  # frozen


def test_omega_monotone_and_logconvex():
    M = sc.gevrey(1.5)
    grid = wt.default_t_grid(M, t_min=1.0)
    vals = np.array([wt.omega(M, float(t)).value for t in grid])
    assert np.all(np.diff(vals) >= -1e-12)
    u = np.log(grid)
    pos = vals > 0
    d2 = vals[pos][:-2] + vals[pos][2:] - 2 * vals[pos][1:-1]
    # convex in log t on the positive part (uniform geometric grid)
    assert np.all(d2 >= -1e-8)


def test_omega_step_identity():
    for M in (sc.gevrey(1), sc.gevrey(2)):
        logmu = sc.quotients(M).logmu
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = int(rng.integers(1, M.P // 2))
            lo, hi = logmu[p], logmu[p + 1]
            if hi - lo < 1e-9:
                continue
            r = math.exp(rng.uniform(lo, hi))
            w = wt.omega(M, r)
            assert abs(w.value - (p * math.log(r) - M.logM[p])) <= 1e-9


def test_valid_to_matches_last_quotient_for_lc():
    M = sc.gevrey(2)
    assert wt.valid_to(M) == pytest.approx(float(M.P) ** 2, rel=1e-9)


def test_omega_extended():
    M = sc.gevrey(0.5)
    t = 97.3  # far past valid_to = sqrt(512); argmax floor(t^2) = 9467
    r = wt.omega_extended(M, t)
    assert r.trusted and r.argmax == 9467
    assert r.value == pytest.approx(
        r.argmax * math.log(t) - 0.5 * math.lgamma(r.argmax + 1), rel=1e-12)
    with pytest.raises(UntrustedEvaluationError):
        wt.omega_extended(sc.gevrey(0), 2.0)


def test_omega_mp_agrees_with_extended():
    import mpmath as mp
    M = sc.gevrey(0.5)
    for t in (50.0, 1e4):
        a = wt.omega_extended(M, t)
        b = wt.omega_mp(M, math.log(t))
        assert abs(float(b) - a.value) <= 1e-6 * max(1.0, a.value)
    with pytest.raises(UntrustedEvaluationError):
        wt.omega_mp(sc.gevrey(0), 1.0)


# ---------------------------------------------------------------------------
# integral representation and counting scaling
# ---------------------------------------------------------------------------

def test_integral_representation():
    for M, t in ((sc.gevrey(2), 50.0), (sc.gevrey(1), 20.0)):
        assert wt.integral_representation_residual(M, t) <= 1e-9
    M = sc.gevrey(2)
    mu1 = float(np.exp(sc.quotients(M).logmu[1]))
    assert wt.integral_representation_residual(M, 0.5 * mu1) == 0.0
    grid = wt.default_t_grid(M, t_min=1.05)
    worst = max(wt.integral_representation_residual(M, float(t))
                for t in grid[grid < wt.valid_to(M) * 0.9])
    assert worst <= 1e-9


def test_counting_scaling():
    rep = wt.counting_scaling_residual(sc.gevrey(1), 2, 1.0,
                                       np.geomspace(1, 200, 25))
    assert rep.D <= 2.0 and rep.liminf_margin >= -1e-9
    rep2 = wt.counting_scaling_residual(sc.gevrey(2), 2, 1.9,
                                        np.geomspace(1, 5e4, 25))
    assert np.isfinite(rep2.D) and rep2.liminf_margin > 0
    # below mu_1 / k^beta both counts vanish
    rep3 = wt.counting_scaling_residual(sc.gevrey(2), 2, 1.0, [0.2])
    assert rep3.D == 0.0


# ---------------------------------------------------------------------------
# growth gauge
# ---------------------------------------------------------------------------

def test_gauge_constant_bound_fixture():
    ones = sc.custom(np.zeros(65), name="ones")
    gauge = wt.build_gauge(ones)
    assert not gauge.decay_certified
    for t in (1.0, 4.0, 20.0):
        assert gauge.h(t) == pytest.approx(t / 2, abs=1e-9)
        assert gauge.f(t) == pytest.approx(0.25, abs=1e-9)
        assert gauge.g(t) == pytest.approx(0.5, abs=1e-9)


def test_markin_gauge_growth_and_members():
    members = [sc.gevrey(a) for a in (0.1, 0.5, 0.9)]
    gauge = wt.build_gauge(wt.markin_bound(512), members)
    assert gauge.decay_certified
    assert gauge.g(1e3) < gauge.g(1e4) < gauge.g(1e5)
    assert set(gauge.D_map) == {m.name for m in members}
    assert all(rec["certified"] for rec in gauge.D_map.values())
    # the 0.9-member peak sits far beyond any window
    assert gauge.D_map["gevrey(0.9)"]["argmax_j"] > 1e12
    # log-domain evaluation is consistent with the direct one
    for t in (200.0, 2000.0):
        assert gauge.log_g(math.log(t)) == pytest.approx(math.log(gauge.g(t)),
                                                         abs=5e-2)


def test_gauge_rejects_unbounded_member():
    with pytest.raises(PreconditionError):
        wt.build_gauge(wt.markin_bound(512), [sc.qgevrey(2)])


def test_gauge_dump_rows():
    gauge = wt.build_gauge(wt.markin_bound(64))
    rows = gauge.dump_rows(16)
    assert rows[0] == (0, 0.0)
    assert rows[2][1] == pytest.approx(-2 * math.log(math.log(2.0)), abs=1e-12)
    assert len(rows) == 17


def test_divergence_margin():
    gauge = wt.build_gauge(wt.markin_bound(512), [sc.gevrey(0.5)])
    grid = np.geomspace(1e2, 1e5, 16)
    rep = wt.divergence_margin(sc.gevrey(0.5), gauge, 1.0, 1.0, grid)
    assert rep.margins[-1] > 0
    tail = rep.margins[len(rep.margins) // 2:]
    assert np.all(np.diff(tail) > 0)
    # doubling d leaves the divergence intact
    rep2 = wt.divergence_margin(sc.gevrey(0.5), gauge, 1.0, 2.0, grid)
    assert rep2.margins[-1] > 0
    # inside the zero region of omega the margin is plainly negative
    rep3 = wt.divergence_margin(sc.gevrey(0.5), gauge, 1.0, 1.0, [1.2])
    assert rep3.margins[0] < 0


# ---------------------------------------------------------------------------
# uniform bound construction
# ---------------------------------------------------------------------------

def direct_family(P):
    return sc.small_gevrey_family(alpha_of_beta=lambda b: b, P=P,
                                  name="small-gevrey-direct")


def test_uniform_bound_k3_succeeds_at_5000():
    res = wt.uniform_bound_construct(direct_family(5000), K=3, P=5000,
                                     params=[0.05, 0.08, 0.28, 0.50])
    assert res.j_breaks[0] == 1 and res.j_breaks[1] == 2
    assert res.j_breaks[-1] <= 5000
    assert res.roots_nonincreasing
    assert res.roots_final <= 0.2
    j = np.arange(1, 5001, dtype=float)
    roots_a = res.a.logM[1:] / j
    for k in range(1, 4):
        n_k = sc.little_m(direct_family(5000).member([0.05, 0.08, 0.28, 0.50][k - 1]))
        ratio = roots_a - n_k.logM[1:] / j
        assert np.all(ratio[res.ratio_indices[k] - 1:] >= math.log(k) - 1e-9)
    assert abs(res.a.logM[0]) == 0.0  # a_0 = 1


def test_uniform_bound_k4_succeeds_at_200k():
    res = wt.uniform_bound_construct(direct_family(200_000), K=4, P=200_000,
                                     params=[0.01, 0.02, 0.24, 0.42, 0.56])
    assert res.roots_nonincreasing
    assert res.j_breaks == sorted(res.j_breaks)
    assert len(res.j_breaks) == 5


def test_uniform_bound_window_exhaustion_at_stated_constants():
    # K = 4 inside a 5000 window is infeasible for any small-Gevrey orders:
    # each stage needs (1 - a_k)(B(j_{k+1}) - B(j_k)) > 2 ln k and the
    # accumulated demand exceeds B(5000) = 7.52
    for params in ([0.05, 0.08, 0.28, 0.50, 0.70],
                   [0.01, 0.02, 0.24, 0.42, 0.56],
                   [0.2, 0.4, 0.6, 0.8, 0.95]):
        with pytest.raises(CensoredWindowError):
            wt.uniform_bound_construct(direct_family(5000), K=4, P=5000,
                                       params=params)


def test_uniform_bound_hypothesis_failures_are_named():
    fam_bad = sc.SequenceFamily(
        "shifted", lambda b, P: sc.factorial_shift(sc.gevrey(b), 0.0 * b + 0.0)
        if False else sc.custom(np.full(P + 1, 0.1) * b, name="x"), P=64)
    with pytest.raises(PreconditionError, match=r"\(i\)"):
        wt.uniform_bound_construct(fam_bad, K=1, P=64, params=[0.3, 0.6])
    fam_disord = sc.SequenceFamily(
        "disordered", lambda b, P: sc.gevrey(1.0 - b, P), P=64)
    with pytest.raises(PreconditionError, match=r"\(ii\)"):
        wt.uniform_bound_construct(fam_disord, K=1, P=64, params=[0.3, 0.6])
    fam_big = sc.SequenceFamily("big", lambda b, P: sc.gevrey(1.0 + b, P), P=64)
    with pytest.raises(PreconditionError, match=r"\(iii\)|\(iv\)"):
        wt.uniform_bound_construct(fam_big, K=1, P=64, params=[0.3, 0.6])
