"""The even tree-shift as a sliding-block image of the golden-mean shift.

The even shift is not of finite type, but it is the image of a finite-type
shift under a window-2 block code.  Questions about the image are answered
by solving for preimages in the base; because the base constraints and the
code windows bind the same parent-children triples, the preimage search is
an exact tree-structured dynamic program rather than a backtracking hunt.
"""

from treeshift.decision import count_blocks, enumerate_blocks
from treeshift.fixtures import even_shift_image
from treeshift.mixing import verify_even_treeshift_usi
from treeshift.shifts import apply_block_map


def main():
    even = even_shift_image()
    print("image block counts:",
          [count_blocks(even, n).total for n in range(1, 4)])

    base_blocks = enumerate_blocks(even.base, 3)[:3]
    for b in base_blocks:
        print(f"base {b} -> image {apply_block_map(even.code, b)}")

    verdict = verify_even_treeshift_usi(even, pattern_height_bound=2)
    print("uniform strong irreducibility:", verdict.status,
          "with code", verdict.witness_code)


if __name__ == "__main__":
    main()
