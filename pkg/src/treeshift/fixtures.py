"""Named shifts used across the test-suite, demos, and documentation."""

from __future__ import annotations

import itertools

from .patterns import Pattern
from .shifts import (
    LevelConstantShift,
    OneStepTSFT,
    SlidingBlockCode,
    SoficImageShift,
    VertexTreeShift,
)


def full_shift(kappa: int = 2, arity: int = 2) -> VertexTreeShift:
    """Every labeling is allowed."""
    alphabet = tuple(str(i) for i in range(kappa))
    ones = tuple(tuple(1 for _ in alphabet) for _ in alphabet)
    return VertexTreeShift(arity=arity, alphabet=alphabet,
                           matrices=tuple(ones for _ in range(arity)))


def golden_mean_shift() -> OneStepTSFT:
    """Binary shift forbidding a 1 whose both children are 1."""
    return OneStepTSFT(
        arity=2,
        alphabet=("0", "1"),
        allowed=frozenset({("0", "0", "0"), ("0", "1", "1"), ("1", "0", "0")}),
    )


def sibling_distinct_shift() -> VertexTreeShift:
    """Left matrix swaps, right matrix is the identity.

    Every allowed parent-children cell has distinct children, which rules
    out periodic points for every complete prefix code.
    """
    return VertexTreeShift(
        arity=2,
        alphabet=("0", "1"),
        matrices=(((0, 1), (1, 0)), ((1, 0), (0, 1))),
    )


def swap_both_shift() -> VertexTreeShift:
    """Both matrices swap: exactly two points, both level-alternating."""
    return VertexTreeShift(
        arity=2,
        alphabet=("0", "1"),
        matrices=(((0, 1), (1, 0)), ((0, 1), (1, 0))),
    )


def no_constant_cell_shift() -> OneStepTSFT:
    """Binary shift forbidding the two constant parent-children cells."""
    cells = frozenset(
        c for c in itertools.product("01", repeat=3)
        if not (c[0] == c[1] == c[2])
    )
    return OneStepTSFT(arity=2, alphabet=("0", "1"), allowed=cells)


def level_constant_shift(kappa: int = 2, arity: int = 2) -> LevelConstantShift:
    """Labels depend only on the depth; any depth-sequence occurs."""
    alphabet = tuple(str(i) for i in range(kappa))
    return LevelConstantShift(arity=arity, alphabet=alphabet)


def even_shift_image() -> SoficImageShift:
    """Image of the golden-mean shift under the 2-block parity map.

    A cell maps to "0" exactly when parent and both children are 0; runs of
    zeros between ones along any ray have even length in the image.
    """
    base = golden_mean_shift()
    table = {}
    for cell in sorted(base.allowed):
        block = Pattern(2, {"": cell[0], "0": cell[1], "1": cell[2]})
        out = "0" if cell == ("0", "0", "0") else "1"
        table[block] = out
    code = SlidingBlockCode(window=2, base=base,
                            output_alphabet=("0", "1"), table=table)
    return SoficImageShift(base=base, code=code)
