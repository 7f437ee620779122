"""Sequence-to-sequence constructions.

conjugate          M*_p = p!/M_p, the involution exchanging large and small
                   sequences (fixed point: Gevrey order 1/2).
dual               D with quotients delta_{p+1} = Sigma_N(p), the count of
                   quotients of N not exceeding p.
bidual             dual of the dual; recovers the input up to equivalence.
regularize_almost_decreasing
                   replaces quotients mu by lambda_p = H^{-1} p sup_{q>=p} mu_q/q
                   so that lambda_p/p is non-increasing.
normalize_head     flattens an initial dip of the quotients to 1, making the
                   sequence normalized without changing its tail.
log_convex_minorant
                   lower convex hull of p -> ln M_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (CensoredWindowError, InconclusiveTailError,
                     PreconditionError)
from .seqcore import (WeightSequence, from_quotients, in_lc_window,
                      is_log_convex, log_factorial, quotients)

# default ceiling for materialised dual windows (entries, not values)
DUAL_WINDOW_CAP = 200_000


def conjugate(M: WeightSequence) -> WeightSequence:
    """Conjugate sequence M*_p = p!/M_p (log domain: ln p! - logM[p])."""
    logMstar = log_factorial(np.arange(M.P + 1)) - M.logM
    gen = None
    gen_mp = None
    quot_mp = None
    if M.generator is not None:
        gen = lambda p, _g=M.generator: log_factorial(p) - _g(p)
    if M.generator_mp is not None:
        def gen_mp(p, _g=M.generator_mp):
            import mpmath as mp
            return mp.loggamma(p + 1) - _g(p)
    if M.generator_quot_mp is not None:
        def quot_mp(p, _q=M.generator_quot_mp):
            import mpmath as mp
            return mp.log(p) - _q(p)   # mu*_p = p / mu_p
    return WeightSequence(f"conj[{M.name}]", logMstar, gen, gen_mp, quot_mp,
                          provenance=f"transform:conjugate({M.provenance})")


# ---------------------------------------------------------------------------
# dual / bidual
# ---------------------------------------------------------------------------

def _counting_all(nu_values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Sigma(t) = #{j >= 1 : nu_j <= t} for each target, nu non-decreasing.

    Ties are counted inclusively.  Quotients that are integers in exact
    arithmetic (Gevrey order 1, dual sequences) come back from the log
    domain with last-bit noise, so values within relative 1e-9 of an
    integer are snapped before comparing against the integer targets.
    """
    with np.errstate(over="ignore"):
        nearest = np.rint(nu_values)
        snapped = np.where(
            np.abs(nu_values - nearest) <= 1e-9 * np.maximum(1.0, np.abs(nearest)),
            nearest, nu_values)
    return np.searchsorted(snapped, targets, side="right")


def dual(N: WeightSequence, P_out: int | None = None) -> WeightSequence:
    """Dual sequence of N defined through its quotients.

    delta_{p+1} = Sigma_N(p) for p >= nu_1 and delta_{p+1} = 1 for integer
    p with -1 <= p < nu_1; D_p is the product of the deltas.  The output
    window is chosen so every count uses only quotients whose values fit
    inside N's window (no truncation censoring).
    """
    if not is_log_convex(N):
        raise PreconditionError(f"dual: {N.name} is not log-convex on its window")
    if not in_lc_window(N):
        raise PreconditionError(
            f"dual: {N.name} is not normalized with diverging quotients on its window")
    lognu = quotients(N).logmu
    nu = np.exp(lognu[1:])  # nu_1..nu_P, non-decreasing
    nu_max = nu[-1]
    # counts Sigma_N(p) are uncensored only for p <= nu_P
    hard_cap = int(min(nu_max, 2**62)) if math.isfinite(nu_max) else 2**62
    if P_out is None:
        P_out = min(hard_cap, DUAL_WINDOW_CAP)
    if P_out > hard_cap:
        raise CensoredWindowError(
            f"dual: requested window {P_out} exceeds counting range "
            f"(largest usable p = {hard_cap}); enlarge {N.name}'s window",
            required_P=P_out)
    if P_out < 8:
        raise CensoredWindowError(
            f"dual: counting range of {N.name} supports only p <= {P_out}; "
            "enlarge the input window", required_P=P_out)
    ps = np.arange(1, P_out, dtype=float)  # p = 1..P_out-1 feeds delta_{p+1}
    counts = _counting_all(nu, ps).astype(float)
    logdelta = np.zeros(P_out + 1)
    nu1 = nu[0]
    active = ps >= nu1
    logdelta[2:][active] = np.log(np.maximum(counts[active], 1.0))
    # delta_0 = delta_1 = 1 and delta_{p+1} = 1 below nu_1 already zeros
    logD = np.concatenate([[0.0], np.cumsum(logdelta[1:])])
    return WeightSequence(f"dual[{N.name}]", logD,
                          provenance=f"transform:dual({N.provenance})")


def bidual(N: WeightSequence, P_out: int | None = None) -> WeightSequence:
    """Dual applied twice, with window bookkeeping.

    epsilon_{p+1} = Sigma_D(p) for p >= delta_1 = 1, epsilon_0 = epsilon_1 = 1.
    The inner dual window is grown until its quotients exceed the requested
    output range, so every count is uncensored.
    """
    if P_out is None:
        P_out = min(N.P, 2000)
    # need delta values beyond P_out: delta_j = Sigma_N(j-1) > P_out requires
    # j - 1 > nu_{P_out + 1}, so the inner window must reach past that value.
    M = N
    if M.P < P_out + 1:
        M = M.extended(P_out + 1)
    if P_out + 1 > M.P:
        raise CensoredWindowError("bidual: input window too short", required_P=P_out + 1)
    lim = quotients(M).logmu[P_out + 1]
    if lim > math.log(50_000_000):
        raise CensoredWindowError(
            f"bidual: inner dual window would need ~e^{lim:.1f} entries")
    P_inner = int(math.floor(math.exp(lim))) + 2
    # grow the input window until its counting range covers the inner dual
    for _ in range(24):
        last = quotients(M).logmu[-1]
        if math.exp(min(last, 700.0)) >= P_inner:
            break
        if M.generator is None:
            raise CensoredWindowError(
                f"bidual: counting range of {M.name} stops below {P_inner}",
                required_P=2 * M.P)
        M = M.extended(2 * M.P)
    D = dual(M, P_out=P_inner)
    logdelta = quotients(D).logmu
    delta = np.exp(logdelta[1:])  # non-decreasing
    if delta[-1] <= P_out:
        raise CensoredWindowError(
            f"bidual: dual quotients reach only {delta[-1]:.0f} <= {P_out}")
    ps = np.arange(1, P_out, dtype=float)
    counts = _counting_all(delta, ps).astype(float)
    logeps = np.zeros(P_out + 1)
    logeps[2:] = np.log(np.maximum(counts, 1.0))
    logE = np.concatenate([[0.0], np.cumsum(logeps[1:])])
    return WeightSequence(f"bidual[{N.name}]", logE,
                          provenance=f"transform:bidual({N.provenance})")


# ---------------------------------------------------------------------------
# almost-decreasing regularization and head normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularizationResult:
    L: WeightSequence
    H: float                # window value; lower bound for the true constant
    tail_certified: bool    # block envelope of mu_q/q decreasing at the end


def _tail_sup_resolvable(ratio: np.ndarray, n_blocks: int = 8) -> bool:
    """Certify that sup_{q>=p} mu_q/q is determined by the window.

    True when the running envelope over the last half of the window decays:
    block maxima over dyadic-ish blocks must be non-increasing.
    """
    tail = ratio[len(ratio) // 2:]
    blocks = np.array_split(tail, n_blocks)
    maxima = [b.max() for b in blocks if b.size]
    return all(maxima[i] >= maxima[i + 1] - 1e-12 for i in range(len(maxima) - 1))


def regularize_almost_decreasing(M: WeightSequence,
                                 max_extension: int = 8) -> RegularizationResult:
    """Replace quotients mu by lambda_p = H^{-1} p sup_{q>=p} mu_q/q.

    The output satisfies lambda_p/p non-increasing and
    H^{-1} mu_p <= lambda_p <= mu_p pointwise on the window; lambda_0 = 1.
    H is computed on the window and reported as a lower bound for the true
    asymptotic constant.
    """
    work = M
    for attempt in range(max_extension + 1):
        logmu = quotients(work).logmu
        p = np.arange(1, work.P + 1, dtype=float)
        log_ratio = logmu[1:] - np.log(p)     # ln(mu_q / q)
        if _tail_sup_resolvable(log_ratio):
            break
        if work.generator is None or attempt == max_extension:
            raise InconclusiveTailError(
                f"regularize: tail sup of mu_q/q unresolved within window of {M.name}")
        work = work.extended(work.P * 2)
    # running sup from the right of ln(mu_q/q)
    log_sup = np.maximum.accumulate(log_ratio[::-1])[::-1]
    # H = sup_{p<=q} (mu_q/q) / (mu_p/p)
    running_min = np.minimum.accumulate(log_ratio)
    logH = float(np.max(log_sup - running_min))
    logH = max(logH, 0.0)
    loglam = np.empty(work.P + 1)
    loglam[0] = 0.0
    loglam[1:] = np.log(p) + log_sup - logH
    L = from_quotients(loglam, name=f"reg[{M.name}]")
    L = WeightSequence(L.name, L.logM,
                       provenance=f"transform:regularize({M.provenance})")
    return RegularizationResult(L=L, H=float(math.exp(logH)),
                                tail_certified=True)


@dataclass(frozen=True)
class HeadNormalization:
    L: WeightSequence
    p0: int        # last index whose quotient was forced to 1
    log_c: float   # L <= Lnorm <= c L with c = prod_{p<=p0} max(1, 1/lambda_p)


def normalize_head(L: WeightSequence) -> HeadNormalization:
    """Force an initial run of quotients to 1 so that 1 = L_0 = L_1.

    Requires log-convex input whose quotients eventually reach 1 inside the
    window.  p0 is the minimal index with lambda_p >= 1 for all p > p0; the
    result keeps the tail unchanged and satisfies L <= Lnorm <= c L.
    """
    if not is_log_convex(L):
        raise PreconditionError("normalize_head: input is not log-convex")
    loglam = quotients(L).logmu
    if loglam[1] >= 0.0:
        # already normalized: no modification required
        out = WeightSequence(L.name, L.logM, L.generator, L.generator_mp,
                             L.generator_quot_mp,
                             provenance=f"transform:normalize_head({L.provenance})")
        return HeadNormalization(L=out, p0=0, log_c=0.0)
    below = np.flatnonzero(loglam < 0.0)
    p0 = int(below[-1])
    if p0 >= L.P:
        raise PreconditionError(
            "normalize_head: quotients never reach 1 inside the window")
    newlog = loglam.copy()
    newlog[: p0 + 1] = 0.0
    log_c = float(-np.sum(np.minimum(loglam[1 : p0 + 1], 0.0)))
    out = from_quotients(newlog, name=f"norm[{L.name}]")
    out = WeightSequence(out.name, out.logM,
                         provenance=f"transform:normalize_head({L.provenance})")
    return HeadNormalization(L=out, p0=p0, log_c=log_c)


# ---------------------------------------------------------------------------
# log-convex minorant
# ---------------------------------------------------------------------------

def log_convex_minorant(M: WeightSequence) -> WeightSequence:
    """Lower convex hull of the points (p, ln M_p), evaluated at 0..P.

    Monotone-chain construction; collinear points are harmless.  The output
    is pointwise <= M, log-convex, and equals M wherever M already is.
    """
    y = M.logM
    n = y.size
    hull = []  # indices of lower-hull vertices
    for i in range(n):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # pop i1 if it lies on or above the chord i0 -> i
            if (y[i1] - y[i0]) * (i - i0) >= (y[i] - y[i0]) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(i)
    hx = np.array(hull, dtype=float)
    hy = y[hull]
    out = np.interp(np.arange(n, dtype=float), hx, hy)
    out = np.minimum(out, y)  # guard interpolation round-off
    return WeightSequence(f"lcm[{M.name}]", out,
                          provenance=f"transform:log_convex_minorant({M.provenance})")
