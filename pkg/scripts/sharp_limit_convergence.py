#!/usr/bin/env python3
"""Convergence of the regularized rho*|grad rho| pairing to its sharp limit.

Compares the symmetric (tanh) and asymmetric (skew) families in planar and
spherical geometry; the symmetric family is second order, the skewed one
first order.
"""

import argparse
import sys

from capillarity import RegularizedFamily, TestFunction, coexistence, convergence_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=0.9)
    ap.add_argument("--epsilons", type=float, nargs="+",
                    default=[0.4, 0.2, 0.1, 0.05, 0.025])
    ap.add_argument("--radius", type=float, default=20.0,
                    help="spherical interface radius")
    args = ap.parse_args()

    coex = coexistence(args.T)
    cases = []
    for family in ("tanh", "skew"):
        cases.append((f"planar {family}, offset bump phi",
                      RegularizedFamily(epsilon=1.0, center=0.0,
                                        rho_v=coex.rho_v, rho_l=coex.rho_l,
                                        family=family),
                      TestFunction.bump(center=2.0, halfwidth=18.0)))
        R = args.radius
        cases.append((f"spherical {family}, phi = 1",
                      RegularizedFamily(epsilon=1.0, center=R,
                                        rho_v=coex.rho_v, rho_l=coex.rho_l,
                                        geometry="spherical", family=family),
                      TestFunction.one(R - 15.0, R + 15.0)))

    for label, template, phi in cases:
        print(label)
        for eps, pairing, exact, err, order in convergence_table(
                template, phi, args.epsilons):
            tag = "      -" if order != order else f"{order:7.3f}"
            print(f"  eps = {eps:7.4f}  pairing = {pairing:.10g}  "
                  f"err = {err:.3e}  order = {tag}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
