"""Recompute every reference table and print one line per check.

Usage: python3 scripts/repro_all.py [table ...]
Exits 1 if any check mismatches.
"""

import sys

from qdeform.repro import TABLES, run_table


def main(names):
    names = names or list(TABLES)
    bad = 0
    for name in names:
        rows = run_table(name)
        print(f"== {name}: {sum(r.ok for r in rows)}/{len(rows)} ok")
        for r in rows:
            tag = "ok      " if r.ok else "MISMATCH"
            print(f"  {tag} {r.label}: {r.got}" + (f"  [{r.note}]" if r.note else ""))
            if not r.ok:
                print(f"           expected {r.expected}")
        bad += sum(not r.ok for r in rows)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
