"""Block counting and entropy estimates on the bundled fixtures.

Block counts on trees grow doubly exponentially in height, so the entropy
estimate uses a double logarithm: e_n = ln(ln |B_n|) / n.  This script prints
the count table for small heights and the estimate column for each fixture.
"""

from treeshift.decision import count_blocks
from treeshift.entropy import entropy_estimate
from treeshift.fixtures import (
    full_shift,
    golden_mean_shift,
    sibling_distinct_shift,
    swap_both_shift,
)

FIXTURES = [
    ("full binary shift", full_shift()),
    ("golden mean", golden_mean_shift()),
    ("sibling distinct", sibling_distinct_shift()),
    ("swap both directions", swap_both_shift()),
]


def main():
    for name, shift in FIXTURES:
        counts = [count_blocks(shift, n).total for n in range(1, 6)]
        print(f"{name}: |B_1..5| = {counts}")

    print()
    for name, shift in FIXTURES:
        est = entropy_estimate(shift, 20)
        tail = ", ".join(
            f"e_{n}={e:.4f}" for n, _, e in est.rows[-3:] if e is not None
        )
        print(f"{name}: estimate {est.estimate:.4f}  ({tail or 'degenerate'})")


if __name__ == "__main__":
    main()
