"""Exhaustive trace scan, reporting the non-unimodal traces.

The palindrome, reversal and positivity checks are theorems and abort the
run if they fail. Unimodality is only a conjecture, so its failures are
listed together with whether the word is a proper power of a shorter word.
"""

import argparse

from qdeform.lab import ScanSpec, scan_traces


def primitive_root(word):
    k = len(word)
    for d in range(1, k):
        if k % d == 0 and word == word[:d] * (k // d):
            return word[:d]
    return word


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=6)
    ap.add_argument("--cmin", type=int, default=2)
    ap.add_argument("--cmax", type=int, default=5)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    spec = ScanSpec(k_range=(1, args.kmax), coeff_range=(args.cmin, args.cmax), workers=args.workers)
    report = scan_traces(spec)
    print(report.to_text().split("\n  ")[0])
    print()
    for v in report.violations:
        if v.check != "unimodal":
            continue
        root = primitive_root(v.word)
        kind = "parabolic" if set(v.word) == {2} else ("power of " + str(list(root)) if root != v.word else "primitive")
        print(f"{str(list(v.word)):<22} {kind:<22} {v.poly}")
    print(f"\nelapsed {report.elapsed:.2f}s")


if __name__ == "__main__":
    main()
