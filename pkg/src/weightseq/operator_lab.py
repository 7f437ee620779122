"""Diagonal-operator spectral sums at desk scale.

A normal operator with unbounded spectrum admits a vector f whose spectral
sums against every exponential weight e^(2t|lambda|) converge while the
sums against each associated weight e^(2 omega_M(t|lambda|)) of a family of
small sequences diverge.  The construction picks eigenvalues lambda_n =
k(n) + 1/2 inside disjoint rings, with k(n) chosen so the growth gauge g
satisfies g(k(n)) >= n, and coefficients

    c_n = g(k(n))^(-(k(n) + 1 - eps_n)).

The gauge grows like sqrt(ln t), so k(n) explodes doubly-exponentially in
n; all ring data is therefore kept in log domain and the spectral sums run
in arbitrary-precision (mpmath) arithmetic, where magnitudes like
exp(exp(57600)) are representable exactly as scaled powers of two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath as mp
import numpy as np

from .errors import (InvalidSequenceError, PreconditionError,
                     UntrustedEvaluationError)
from .seqcore import WeightSequence
from .weights import GrowthGauge, omega, omega_mp, valid_to

MP_DPS = 50
INTEGER_EXACT_LIMIT = 2.0**53


@dataclass(frozen=True)
class DiagonalOperatorModel:
    """Eigenvalue list of a diagonal normal operator, log domain.

    loglam[i] = ln lambda_{i+1}.  For ring-constructed models the ring data
    (ln k(n), eps_n, ln g(k(n))) is carried along; k(n) values at or below
    2^53 are exact integers, larger ones are real solutions of the gauge
    threshold (flagged by ``integral_k``).
    """

    loglam: np.ndarray
    logk: Optional[np.ndarray] = None
    eps: Optional[np.ndarray] = None
    log_g_at_k: Optional[np.ndarray] = None
    integral_k: Optional[np.ndarray] = None

    @property
    def n_terms(self) -> int:
        return self.loglam.size

    def lambdas_mp(self) -> list:
        return [mp.exp(mp.mpf(float(v))) for v in self.loglam]


@dataclass(frozen=True)
class SpectralVector:
    """Coefficients of a vector in the eigenbasis, logs as mpf values."""

    logc: tuple  # tuple of mpf

    @property
    def n_terms(self) -> int:
        return len(self.logc)

    def scaled(self, factor: float) -> "SpectralVector":
        lf = mp.log(mp.mpf(factor))
        return SpectralVector(tuple(c + lf for c in self.logc))

    def l2_report(self) -> dict:
        """Partial sum of |c_n|^2 (log) and the largest successive term ratio."""
        logs = [2 * c for c in self.logc]
        total = _lse(logs)
        ratios = [_ratio(logs[i], logs[i + 1]) for i in range(len(logs) - 1)]
        worst = max(ratios) if ratios else mp.mpf(-mp.inf)
        return {"log_sum": total, "max_log_ratio": worst,
                "summable": bool(worst < 0)}


_LSE_GAP = mp.mpf(-10000)  # exp of anything below this cannot move the sum


def _lse(logs) -> mp.mpf:
    m = max(logs)
    if m == -mp.inf:
        return mp.mpf(-mp.inf)
    # exponent integers of exp(x - m) grow linearly with the gap value; a
    # gap of -1e15 would need terabytes, so hopeless contributions are dropped
    acc = mp.fsum(mp.exp(x - m) for x in logs if (x - m) >= _LSE_GAP)
    return m + mp.log(acc)


def from_floats(lambdas, coeff_logs) -> tuple:
    """Desk-scale model from plain eigenvalues and ln|c_n| floats."""
    lam = np.asarray(lambdas, dtype=float)
    if np.any(lam <= 0) or not np.all(np.diff(lam) > 0):
        raise InvalidSequenceError("eigenvalues must be positive and increasing")
    model = DiagonalOperatorModel(loglam=np.log(lam))
    vec = SpectralVector(tuple(mp.mpf(float(v)) for v in coeff_logs))
    if vec.n_terms != model.n_terms:
        raise InvalidSequenceError("coefficient count differs from eigenvalue count")
    return model, vec


# ---------------------------------------------------------------------------
# ring construction
# ---------------------------------------------------------------------------

def build_counterexample(gauge: GrowthGauge, n_terms: int = 120,
                         log_g_floor: float = 0.0,
                         log_g_slope: float = 0.0,
                         search_cap: float = 1e16) -> tuple:
    """Ring eigenvalues and coefficient vector from an unbounded gauge.

    k(n) is the threshold where the gauge reaches max(n, exp(floor+slope*n));
    with floor = slope = 0 this is the minimal choice g(k(n)) >= n.  A
    positive floor makes the gauge overshoot the tested exponential rates,
    which is what a finite-term demonstration of the convergence side needs
    (any k(n) with g(k(n)) >= n is admissible for the construction).
    """
    if not gauge.decay_certified:
        raise PreconditionError(
            "counterexample needs a gauge with certified a_k^(1/k) decay")
    if n_terms < 1 or n_terms > 200:
        raise InvalidSequenceError("n_terms must be in 1..200")
    logk = np.empty(n_terms)
    eps = np.empty(n_terms)
    lng = np.empty(n_terms)
    integral = np.zeros(n_terms, dtype=bool)
    prev = 0.0
    for i in range(n_terms):
        n = i + 1
        target = max(math.log(n), log_g_floor + log_g_slope * n)
        lo = max(prev + 1e-9, math.log(n), 1.0)
        # ln g ~ sqrt(ln k)/2 asymptotically, so ln k ~ 4 exp(2 ln g)
        hi = max(lo + 4.0, 8.0, 5.0 * math.exp(2.0 * target))
        while gauge.log_g(hi) < target:
            lo = hi
            hi *= 2.0
            if hi > search_cap:
                raise PreconditionError(
                    f"gauge never reaches ln g = {target:.3g} within the search "
                    f"horizon (needed for n = {n})")
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if gauge.log_g(mid) >= target:
                hi = mid
            else:
                lo = mid
        lk = hi
        if lk < math.log(INTEGER_EXACT_LIMIT):
            k_int = max(int(math.ceil(math.exp(lk) - 1e-9)), n)
            if i and logk[i - 1] < math.log(INTEGER_EXACT_LIMIT):
                k_int = max(k_int, int(round(math.exp(logk[i - 1]))) + 1)
            while gauge.log_g(math.log(k_int)) < target:
                k_int += 1
            lk = math.log(k_int)
            integral[i] = True
        logk[i] = lk
        lng[i] = gauge.log_g(lk)
        eps[i] = 0.25 if i == 0 else min(1.0 / n, eps[i - 1]) / 2.0
        prev = lk
    loglam = logk + np.log1p(0.5 * np.exp(-np.clip(logk, None, 700.0)))
    model = DiagonalOperatorModel(loglam=loglam, logk=logk, eps=eps,
                                  log_g_at_k=lng, integral_k=integral)
    with mp.workdps(MP_DPS):
        logc = []
        for i in range(n_terms):
            k = mp.exp(mp.mpf(float(logk[i])))
            logc.append(-(k + 1 - mp.mpf(float(eps[i]))) * mp.mpf(float(lng[i])))
    return model, SpectralVector(tuple(logc))


# ---------------------------------------------------------------------------
# spectral sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralSumReport:
    log_partial_sum: object        # mpf
    term_logs: tuple               # mpf per n
    converged: bool                # tail log-ratio <= -ln 2 on the last quartile
    max_tail_log_ratio: object     # mpf
    diverged_from: Optional[int]   # 1-based index past which all terms >= 1
    t: float

    @property
    def certificate(self) -> str:
        if self.converged:
            return "converged"
        if self.diverged_from is not None:
            return "diverged"
        return "inconclusive"


def _ratio(a, b):
    """Successive log-ratio b - a with -inf terms treated as fully decayed."""
    if b == -mp.inf:
        return mp.mpf(-mp.inf)
    if a == -mp.inf:
        return mp.mpf(+mp.inf)
    return b - a


def _certify(term_logs, t: float) -> SpectralSumReport:
    n = len(term_logs)
    q = max(2, (3 * n) // 4)
    tail_ratios = [_ratio(term_logs[i], term_logs[i + 1]) for i in range(q - 1, n - 1)]
    max_ratio = max(tail_ratios) if tail_ratios else mp.mpf(-mp.inf)
    converged = bool(max_ratio <= -mp.log(2) + mp.mpf("1e-12"))
    diverged_from = None
    for start in range(n):
        if all(term_logs[m] >= 0 for m in range(start, n)):
            diverged_from = start + 1
            break
    if diverged_from is not None and diverged_from >= n:
        diverged_from = None
    if converged:
        diverged_from = None
    return SpectralSumReport(
        log_partial_sum=_lse(list(term_logs)),
        term_logs=tuple(term_logs),
        converged=converged,
        max_tail_log_ratio=max_ratio,
        diverged_from=diverged_from,
        t=t)


def exponential_class_sum(model: DiagonalOperatorModel, f: SpectralVector,
                          t: float) -> SpectralSumReport:
    """sum_n |c_n|^2 e^(2 t lambda_n) in log domain with a tail certificate."""
    if t < 0:
        raise InvalidSequenceError("t must be >= 0")
    if f.n_terms != model.n_terms:
        raise InvalidSequenceError("vector/model size mismatch")
    with mp.workdps(MP_DPS):
        tt = mp.mpf(t)
        lams = model.lambdas_mp()
        terms = [2 * f.logc[i] + 2 * tt * lams[i] for i in range(model.n_terms)]
        return _certify(terms, t)


def weighted_class_sum(model: DiagonalOperatorModel, f: SpectralVector,
                       M: WeightSequence, t: float) -> SpectralSumReport:
    """sum_n |c_n|^2 e^(2 omega_M(t lambda_n)) with per-term certificates.

    The weight is evaluated through the generator-backed step search, which
    stays trusted at arbitrarily large arguments; window-only sequences are
    accepted only while t*lambda_n stays inside their trusted range.
    """
    if t <= 0:
        raise InvalidSequenceError("t must be > 0")
    if f.n_terms != model.n_terms:
        raise InvalidSequenceError("vector/model size mismatch")
    log_t = math.log(t)
    trust = valid_to(M)
    with mp.workdps(MP_DPS):
        terms = []
        for i in range(model.n_terms):
            log_arg = log_t + float(model.loglam[i])
            if M.generator_mp is not None:
                w = omega_mp(M, log_arg)
            elif log_arg <= math.log(trust):
                w = mp.mpf(omega(M, math.exp(log_arg)).value)
            else:
                raise UntrustedEvaluationError(
                    f"omega of {M.name} untrusted at ln(t*lambda)={log_arg:.3g}; "
                    f"enlarge P beyond {M.P} or provide a generator",
                    required_P=4 * M.P)
            terms.append(2 * f.logc[i] + 2 * w)
        return _certify(terms, t)


@dataclass(frozen=True)
class MembershipVerdict:
    status: str           # holds | fails | inconclusive
    mode: str
    per_t: dict           # t -> certificate string


def membership_verdict(model: DiagonalOperatorModel, f: SpectralVector,
                       M: WeightSequence, mode: str,
                       t_grid: Sequence[float]) -> MembershipVerdict:
    """Class membership against the weight of M over a grid of scalings.

    Roumieu asks for some t with a converged sum, Beurling for all t.
    Mixed certificates stay inconclusive.
    """
    if mode not in ("roumieu", "beurling"):
        raise InvalidSequenceError("mode must be roumieu or beurling")
    per_t = {}
    for t in t_grid:
        per_t[float(t)] = weighted_class_sum(model, f, M, float(t)).certificate
    certs = list(per_t.values())
    if mode == "roumieu":
        if any(c == "converged" for c in certs):
            status = "holds"
        elif all(c == "diverged" for c in certs):
            status = "fails"
        else:
            status = "inconclusive"
    else:
        if all(c == "converged" for c in certs):
            status = "holds"
        elif any(c == "diverged" for c in certs):
            status = "fails"
        else:
            status = "inconclusive"
    return MembershipVerdict(status=status, mode=mode, per_t=per_t)


# ---------------------------------------------------------------------------
# bounded-case solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundedSolutionReport:
    max_rel_err: float        # worst ||y^(n)(t)|| vs ||A^n y(t)|| mismatch
    exp_type_constant: float  # max |lambda|
    exp_type_margin: float    # max over grid of ||y(z)|| / (||y0|| e^(C|z|))
    n_max: int


def bounded_solution_check(eigs, y0, t: float, n_max: int = 12,
                           grid_points: int = 100,
                           seed: int = 0) -> BoundedSolutionReport:
    """Flow y(t) = e^(tA) y0 of a finite diagonal A.

    Derivatives are computed two ways: componentwise lambda^n e^(lambda t) y0
    and by n-fold application of A to y(t); the norms must agree.  The
    exponential-type bound ||y(z)|| <= ||y0|| e^(C|z|) with C = max|lambda|
    is sampled on a complex grid.
    """
    lam = np.asarray(eigs, dtype=float)
    y0 = np.asarray(y0, dtype=complex)
    if lam.size != y0.size or lam.size == 0:
        raise InvalidSequenceError("eigenvalue/vector size mismatch")
    yt = np.exp(lam * t) * y0
    worst = 0.0
    v = yt.copy()
    for n in range(0, n_max + 1):
        direct = np.linalg.norm(lam**n * yt)
        iterated = np.linalg.norm(v)
        denom = max(direct, iterated, 1e-300)
        worst = max(worst, abs(direct - iterated) / denom)
        v = lam * v
    C = float(np.max(np.abs(lam)))
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.05, 3.0, grid_points)
    angles = rng.uniform(0.0, 2.0 * math.pi, grid_points)
    zs = radii * np.exp(1j * angles)
    ny0 = np.linalg.norm(y0)
    margin = 0.0
    for z in zs:
        yz = np.exp(lam * z) * y0
        bound = ny0 * math.exp(C * abs(z))
        margin = max(margin, np.linalg.norm(yz) / bound)
    return BoundedSolutionReport(max_rel_err=float(worst),
                                 exp_type_constant=C,
                                 exp_type_margin=float(margin),
                                 n_max=n_max)


# ---------------------------------------------------------------------------
# scenario runner (JSON config in, report rows out)
# ---------------------------------------------------------------------------

def run_scenario(config: dict) -> dict:
    """Execute a ring-construction scenario described by a config dict.

    Keys: gauge {type: markin, P}, n_terms, log_g_floor, log_g_slope,
    t_grid (exponential sums), members (sequence specs for weighted sums),
    member_t_grid.
    """
    from .seqcore import make_family
    from .weights import build_gauge, markin_bound

    gspec = config.get("gauge", {"type": "markin", "P": 512})
    if gspec.get("type") != "markin":
        raise InvalidSequenceError(f"unknown gauge type {gspec.get('type')!r}")
    member_names = config.get("members", [])
    members = [make_family(s) for s in member_names]
    gauge = build_gauge(markin_bound(int(gspec.get("P", 512))), members)
    model, vec = build_counterexample(
        gauge,
        n_terms=int(config.get("n_terms", 120)),
        log_g_floor=float(config.get("log_g_floor", 0.0)),
        log_g_slope=float(config.get("log_g_slope", 0.0)))
    out = {"n_terms": model.n_terms,
           "l2": {k: str(v) for k, v in vec.l2_report().items()},
           "exponential": {}, "weighted": {}}
    with mp.workdps(MP_DPS):
        for t in config.get("t_grid", [1.0]):
            rep = exponential_class_sum(model, vec, float(t))
            out["exponential"][f"{t:g}"] = rep.certificate
        for spec, member in zip(member_names, members):
            per = {}
            for t in config.get("member_t_grid", [1.0]):
                per[f"{t:g}"] = weighted_class_sum(model, vec, member,
                                                   float(t)).certificate
            out["weighted"][spec] = per
    rows = [("n", "log_k", "eps", "log_g", "log_c")]
    for i in range(model.n_terms):
        rows.append((i + 1, float(model.logk[i]), float(model.eps[i]),
                     float(model.log_g_at_k[i]), mp.nstr(vec.logc[i], 8)))
    out["rows"] = rows
    return out
