"""Weyl classification and local exponents of the radial equation.

The radial Sturm-Liouville equation degenerates at both ends of (0, 1); how
badly depends on the sphere dimension k.  This script prints the endpoint
classification table (regular / limit circle / limit point), the Frobenius
indicial exponents with their logarithmic-case flags, and the local
exponents of the Liouville-form effective potential.
"""

import math

from loopsphere import manifold, radial


def main():
    print(f"{'k':>2} {'t=0':>14} {'exps@0':>16} {'log':>4} "
          f"{'t=1':>14} {'exps@1':>16} {'log':>4}")
    for k in range(2, 9):
        params = manifold.ModelParams(k=k)
        reports = radial.classify_endpoints(params)
        r0, r1 = reports[0.0], reports[1.0]

        def fmt(rep):
            mu = sorted(rep.exponents)
            return (rep.kind.value, f"{{{mu[0]:.2f}, {mu[1]:.2f}}}",
                    "yes" if rep.log_case else "no")

        k0, e0, l0 = fmt(r0)
        k1, e1, l1 = fmt(r1)
        print(f"{k:>2} {k0:>14} {e0:>16} {l0:>4} {k1:>14} {e1:>16} {l1:>4}")
    print()
    print("Closed forms: exponents {0, (3-k)/2} at t=0 and {0, 2-k} at t=1;")
    print("boundary conditions are needed exactly at regular and")
    print("limit-circle endpoints.")
    print()
    print("Liouville-form potential exponents (V ~ c/d^2 with c from the")
    print("indicial data):")
    for k in (2, 5):
        params = manifold.ModelParams(k=k)
        at0 = radial.veff_exponents(params, 0.0)
        at1 = radial.veff_exponents(params, math.pi / 2.0)
        print(f"  k={k}: at tau=0 {tuple(round(v, 3) for v in sorted(at0))}, "
              f"at tau=pi R/2 {tuple(round(v, 3) for v in sorted(at1))}")


if __name__ == "__main__":
    main()
