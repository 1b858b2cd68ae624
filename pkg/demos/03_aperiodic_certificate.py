"""A nonempty tree-shift with no periodic point.

A labeling is periodic with respect to a complete prefix code P when the
subtree shift at every word of P reproduces the whole labeling; it is then
determined by finitely many labels (the proper prefixes of P) with
wrap-around constraints.  When every allowed parent-children cell has two
differing sibling labels, no such wrap-around assignment can exist: some
pair of siblings inside the quotient must carry equal labels.  The
sibling-distinct shift therefore has no periodic point at all, even though
it is nonempty.
"""

from treeshift.decision import is_empty
from treeshift.fixtures import full_shift, sibling_distinct_shift
from treeshift.periodic import (
    periodic_from_cpc,
    search_periodic,
    sibling_distinct_certificate,
)
from treeshift.patterns import uniform_code


def main():
    sd = sibling_distinct_shift()
    empty, _ = is_empty(sd)
    print("sibling-distinct shift empty:", empty)
    print("certificate holds:", sibling_distinct_certificate(sd).holds)
    print("search up to 8-leaf codes:", search_periodic(sd, 8))

    print()
    spec = periodic_from_cpc(full_shift(), uniform_code(2, 2))
    print("full shift, depth-2 uniform code:",
          {w: spec.label_at(w) for w in ["", "0", "1", "00"]})
    from treeshift.decision import locally_admissible

    block = spec.unfold(6)
    print("depth-6 unfolding admissible:",
          locally_admissible(block, full_shift()))


if __name__ == "__main__":
    main()
