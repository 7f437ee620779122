#!/usr/bin/env python3
"""Boundedness-detection demonstration on the diagonal operator model.

Builds the growth gauge from the log-power bound a_j = 1/ln(j)^j, places
ring eigenvalues where the gauge crosses its thresholds, and prints the
certificate table: spectral sums against exponential weights e^(2t|lambda|)
converge for every tested t while the sums against each small-Gevrey
associated weight diverge term-by-term.  Run with --minimal-k for the
threshold-exact variant (its scale parameters reach ln k ~ 4 n^2, which is
why everything is carried in log domain).

Usage:
    python scripts/markin_demo.py [--terms 120] [--minimal-k] [--csv out.csv]
"""

import argparse
import csv
import sys

import mpmath as mp

from weightseq import gevrey, markin_bound
from weightseq.operator_lab import (build_counterexample,
                                    exponential_class_sum,
                                    weighted_class_sum)
from weightseq.weights import build_gauge

T_EXP = (0.5, 1.0, 2.0, 5.0, 10.0)
T_WEIGHTED = (1.0, 2.0)
ALPHAS = tuple(round(0.1 * i, 1) for i in range(1, 10))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--terms", type=int, default=120)
    ap.add_argument("--minimal-k", action="store_true",
                    help="threshold-exact rings g(k(n)) = n (converges only "
                         "for t below ln of the last ring index)")
    ap.add_argument("--csv", default=None)
    args = ap.parse_args(argv)

    members = [gevrey(a) for a in ALPHAS]
    gauge = build_gauge(markin_bound(512), members)
    floor, slope = (0.0, 0.0) if args.minimal_k else (11.0, 0.05)
    model, vec = build_counterexample(gauge, n_terms=args.terms,
                                      log_g_floor=floor, log_g_slope=slope)
    print(f"rings: {args.terms}, ln k(n) in "
          f"[{model.logk[0]:.4g}, {model.logk[-1]:.4g}]")
    l2 = vec.l2_report()
    print(f"coefficients square-summable: {l2['summable']} "
          f"(log sum {mp.nstr(l2['log_sum'], 6)})")

    print("\nexponential weights  e^(2t|lambda|):")
    for t in T_EXP:
        rep = exponential_class_sum(model, vec, t)
        print(f"  t = {t:5.1f}: {rep.certificate}")

    print("\nassociated weights of small Gevrey sequences:")
    for member in members:
        certs = []
        for t in T_WEIGHTED:
            rep = weighted_class_sum(model, vec, member, t)
            tag = rep.certificate
            if rep.diverged_from is not None:
                tag += f" (terms >= 1 from n = {rep.diverged_from})"
            certs.append(f"t={t:g}: {tag}")
        print(f"  {member.name:14s} {' | '.join(certs)}")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("n", "log_k", "eps", "log_g", "log_c"))
            for i in range(model.n_terms):
                w.writerow((i + 1, f"{model.logk[i]:.17g}",
                            f"{model.eps[i]:.17g}",
                            f"{model.log_g_at_k[i]:.17g}",
                            mp.nstr(vec.logc[i], 10)))
        print(f"\nwrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
