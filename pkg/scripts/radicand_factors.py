"""Which quadratic-irrational radicands pick up the factor 1 - q + q^2.

For each sqrt(n), and for a few purely periodic expansions, print the
radicand P, whether 1 - q + q^2 divides it, and the quotient when it does.
"""

import argparse
import math

from qdeform.lab import divisibility_report
from qdeform.polycore import parse_poly
from qdeform.qquadratic import Surd, prs, q_quadratic

CYCLO6 = parse_poly("1 - q + q^2")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=30)
    args = ap.parse_args()

    targets = {}
    for n in range(2, args.nmax + 1):
        if math.isqrt(n) ** 2 != n:
            targets[f"sqrt({n})"] = q_quadratic(Surd(0, 1, n, 1)).P
    for period in [(3,), (4,), (5,), (2, 3), (2, 4), (3, 3, 4), (2, 2, 5)]:
        targets[f"period {list(period)}"] = prs(period).P

    for row in divisibility_report(targets, {"1-q+q^2": CYCLO6}):
        quot = str(row.quotient) if row.divides else "-"
        print(f"{row.target:<16} divides={str(row.divides):<5} quotient={quot}")


if __name__ == "__main__":
    main()
