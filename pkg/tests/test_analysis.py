
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightseq import analysis as an
from weightseq import seqcore as sc
from weightseq import transforms as tr
from weightseq.errors import InvalidSequenceError, PreconditionError


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------

def test_lc_matches_quotient_monotonicity():
    assert an.check_property(sc.gevrey(1), "lc").holds
    bumps = sc.custom([0, 1, 0, 3, 4, 5, 6, 7, 8, 9])
    v = an.check_property(bumps, "lc")
    assert v.fails and v.witness["p"] == 1  # M_1^2 > M_0 M_2


@given(st.lists(st.floats(min_value=-20, max_value=20, allow_nan=False),
                min_size=10, max_size=40))
@settings(max_examples=60)
def test_lc_verdict_iff_nondecreasing_quotients(logs):
    M = sc.custom(logs)
    v = an.check_property(M, "lc")
    assert v.holds == sc.quotients(M).is_nondecreasing(1e-12)


def test_mg_fixtures():
    v = an.check_property(sc.qgevrey(2), "mg")
    assert v.fails and "p" in v.witness
    v = an.check_property(sc.gevrey(2), "mg")
    assert v.holds and v.witness["C"] < 8.0


def test_quotient_ratio_bound_qgevrey():
    v = an.check_property(sc.qgevrey(2), "quotient-ratio-bound")
    assert v.holds
    assert v.witness["A"] == pytest.approx(4.0, abs=1e-6)


def test_dc_and_quotient_ratio_mg_chain():
    # window mg certificate implies the conjugate's dc-window certificate
    for M in (sc.gevrey(0.25), sc.gevrey(0.75), sc.gevrey(1)):
        if an.check_property(M, "mg").holds:
            assert not an.check_property(tr.conjugate(M), "dc").fails


def test_gamma1_fixtures():
    assert an.check_property(sc.gevrey(2), "gamma1").holds
    assert an.check_property(sc.gevrey(1), "gamma1").fails
    assert an.check_property(sc.gevrey(0.5), "gamma1").fails
    assert an.check_property(sc.qgevrey(2), "gamma1").holds


def test_beta_conditions():
    assert an.check_property(sc.gevrey(2), "beta1").holds
    assert an.check_property(sc.qgevrey(2), "beta1").holds
    assert an.check_property(sc.gevrey(2), "beta3").holds
    assert an.check_property(sc.gevrey(1), "beta1").fails  # ratio = Q exactly


def test_om1_and_momega1():
    for M in (sc.gevrey(0.5), sc.gevrey(2), sc.qgevrey(2)):
        assert an.check_property(M, "momega1").holds
        assert an.check_property(M, "om1").holds
    D = tr.dual(sc.gevrey(2), P_out=4096)
    assert an.check_property(D, "om1").holds
    D3 = tr.dual(sc.gevrey(3), P_out=4096)
    assert an.check_property(D3, "om1").holds


def test_log_concave_m_iff_conjugate_lc():
    fixtures = [sc.gevrey(0), sc.gevrey(0.25), sc.gevrey(0.5), sc.gevrey(1),
                sc.gevrey(2), sc.qgevrey(2)]
    for M in fixtures:
        assert (an.check_property(M, "log-concave-m").holds
                == an.check_property(tr.conjugate(M), "lc").holds)


def test_unknown_property():
    with pytest.raises(InvalidSequenceError):
        an.check_property(sc.gevrey(1), "frobnication")


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------

def test_relation_basics():
    G1, G2 = sc.gevrey(1), sc.gevrey(2)
    assert an.relation(G1, G2, "le").holds
    assert an.relation(G1, G2, "preceq").holds
    assert an.relation(G1, G2, "triangle").holds
    assert an.relation(G2, G1, "preceq").fails
    assert an.relation(G2, G2, "approx").holds
    assert an.relation(G2, G2, "approx").witness["sup_fwd"] == 0.0


def test_relation_conjugate_pairing():
    v = an.relation(sc.gevrey(0.75), tr.conjugate(sc.gevrey(0.25)), "approx")
    assert v.holds


def test_relation_symmetry_reflexivity():
    fams = [sc.gevrey(0.5), sc.gevrey(2), sc.qgevrey(2)]
    for M in fams:
        assert an.relation(M, M, "approx").holds
    for M in fams:
        for N in fams:
            assert (an.relation(M, N, "approx").status
                    == an.relation(N, M, "approx").status)


def test_relation_order_reversal_under_conjugation():
    pairs = [(sc.gevrey(0.25), sc.gevrey(0.5)),
             (sc.gevrey(1), sc.gevrey(2)),
             (sc.gevrey(0.5), sc.gevrey(0.5))]
    for M, N in pairs:
        fwd = an.relation(M, N, "preceq").holds
        rev = an.relation(tr.conjugate(N), tr.conjugate(M), "preceq").holds
        assert fwd == rev


def test_fixed_point_battery():
    half = sc.gevrey(0.5)
    for a in (0.2, 0.5, 0.8):
        M = sc.gevrey(a)
        to_conj = an.relation(M, tr.conjugate(M), "preceq")
        to_half = an.relation(M, half, "preceq")
        assert to_conj.status == to_half.status
        if a <= 0.5:
            assert to_conj.holds
        else:
            assert to_conj.fails
    both = (an.relation(half, tr.conjugate(half), "le").holds
            and an.relation(tr.conjugate(half), half, "le").holds)
    assert both


# ---------------------------------------------------------------------------
# Matuszewska estimation
# ---------------------------------------------------------------------------

def test_matuszewska_exact_powers():
    e = an.matuszewska(sc.quotients(sc.gevrey(2)))
    assert e.lo == pytest.approx(2.0, abs=1e-9)
    assert e.hi == pytest.approx(2.0, abs=1e-9)
    assert not e.unbounded_flag
    # direct array input: a_p = p^s
    p = np.arange(0, 257, dtype=float)
    loga = np.concatenate([[0.0], 1.5 * np.log(p[1:])])
    e = an.matuszewska(loga, "lower")
    assert e.value == pytest.approx(1.5, abs=1e-12)


def test_matuszewska_unbounded_and_conjugate_reciprocity():
    e = an.matuszewska(sc.quotients(sc.qgevrey(2)))
    assert e.unbounded_flag
    for a in (0.25, 0.5, 0.75):
        e = an.matuszewska(sc.quotients(tr.conjugate(sc.gevrey(a))))
        assert e.lo == pytest.approx(1 - a, abs=1e-9)
        assert e.hi == pytest.approx(1 - a, abs=1e-9)
    with pytest.raises(InvalidSequenceError):
        an.matuszewska(sc.quotients(sc.gevrey(1, P=12)), p0=8)


# ---------------------------------------------------------------------------
# derived reports
# ---------------------------------------------------------------------------

def test_mixed_om1():
    fam = sc.small_gevrey_family(alpha_of_beta=lambda b: b, P=1024)
    v = an.mixed_om1_check(fam, [(0.3, 0.6), (0.1, 0.9)])
    assert v.holds
    v_eq = an.mixed_om1_check(fam, [(0.4, 0.4)])
    assert v_eq.fails  # 2^j cannot be absorbed without a growth gap
    # duals of large Gevrey orders, reparametrised so members grow with the
    # parameter (dualisation reverses the pointwise order)
    dual_fam = sc.SequenceFamily(
        "dual-gevrey", lambda b, P: tr.dual(sc.gevrey(5.0 - b, P=256), P_out=2048))
    v2 = an.mixed_om1_check(dual_fam, [(2.0, 3.0)])
    assert v2.holds


def test_index_reciprocity():
    rep = an.index_reciprocity_report(sc.gevrey(2, P=10**4))
    assert rep.alpha_nu.hi == pytest.approx(2.0, abs=1e-9)
    assert abs(rep.alpha_nu.hi * rep.beta_delta.lo - 1.0) <= 0.15
    rep1 = an.index_reciprocity_report(sc.gevrey(1, P=4096))
    assert rep1.residual_upper <= 0.05 and rep1.residual_lower <= 0.05
    # quotient-ratio bound is a hard precondition
    p = np.arange(1, 65, dtype=float)
    wild = sc.from_quotients(np.concatenate([[0.0], np.log(2.0) * 2.0**p]))
    with pytest.raises(PreconditionError):
        an.index_reciprocity_report(wild)


def test_root_vs_quotient():
    for M in (sc.gevrey(0.5), sc.gevrey(2)):
        rep = an.root_vs_quotient_lower_index(M)
        assert rep.ordered
    D = tr.dual(sc.gevrey(2), P_out=2048)
    assert an.root_vs_quotient_lower_index(D).ordered
    # q-Gevrey: both sides grow beyond any power
    e_mu = an.matuszewska(sc.quotients(sc.qgevrey(2)))
    e_rho = an.matuszewska(sc.quotients(sc.root_sequence(sc.qgevrey(2))))
    assert e_mu.unbounded_flag and e_rho.unbounded_flag


def test_verdict_serialization():
    v = an.check_property(sc.gevrey(2), "gamma1")
    d = v.to_dict()
    assert d["status"] == "holds" and "witness" in d and "window" in d
