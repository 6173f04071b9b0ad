#!/usr/bin/env python3
"""Census of quasi-probability negativity over the stabilizer states.

Classifies every two-qubit stabilizer state under the restricted rebit
construction by (X/Z-split?, real amplitudes?, non-negative?, support
size), prints the census and the three headline facts:

  * split states are exactly the sharp non-negative cosets,
  * among real-amplitude states, negativity appears iff the state is
    not split (the discrete Hudson dichotomy for rebits),
  * complex stabilizer states coarse-grain onto non-negative mixture
    tables with doubled support (their Y-structure is invisible).

Usage: python3 scripts/negativity_census.py [--n 2]
"""

import argparse
import collections
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from spektoy import subtheory as stt  # noqa: E402
from spektoy import wigner as wg  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2, choices=(1, 2))
    args = ap.parse_args()
    n = args.n

    spec = wg.delfosse_rebit_spec(n)
    states = stt.all_stabilizer_states(2, n)
    census = collections.Counter()
    for psi in states:
        table = wg.wigner_of_state(psi, spec)
        nonneg, _ = wg.is_nonnegative(table)
        census[
            (
                "split" if stt.is_css(psi, n) else "non-split",
                "real" if stt.is_real_state(psi) else "complex",
                "nonneg" if nonneg else "NEGATIVE",
                f"supp={len(table.support())}",
            )
        ] += 1

    print(f"n={n}: {len(states)} stabilizer states")
    for key, count in sorted(census.items()):
        print(f"  {count:3d}  " + "  ".join(key))

    sharp = sum(
        c for (split, _, nn, supp), c in census.items()
        if nn == "nonneg" and supp == f"supp={2**n}"
    )
    split = sum(c for (s, _, _, _), c in census.items() if s == "split")
    print(f"\nsharp non-negative cosets: {sharp}  |  split states: {split}")
    real_neg = [
        (k, c) for k, c in census.items() if k[1] == "real" and k[2] == "NEGATIVE"
    ]
    print("negative real-amplitude classes:", real_neg or "none")


if __name__ == "__main__":
    main()
