"""Essential core, emptiness, local admissibility, extension, block counting."""

import itertools
import random

import pytest

from treeshift.decision import (
    count_blocks,
    enumerate_blocks,
    essential_core,
    extend_pattern,
    is_empty,
    locally_admissible,
    solve_labeling,
)
from treeshift.errors import NotLocallyAdmissible, OutsideEssentialCore
from treeshift.fixtures import (
    even_shift_image,
    full_shift,
    golden_mean_shift,
    level_constant_shift,
    sibling_distinct_shift,
)
from treeshift.patterns import Pattern, block_from_levels
from treeshift.shifts import OneStepTSFT, VertexTreeShift
from treeshift.words import words_of_length


# ---------------------------------------------------------------------------
# Independent oracle: raw depth-first fill over the FULL alphabet, height h.
# It never consults the essential core, so agreement with the library is a
# genuine cross-check of the core-based emptiness test.
# ---------------------------------------------------------------------------

def raw_block_exists(shift: OneStepTSFT, height: int) -> bool:
    nodes = [w for n in range(height) for w in words_of_length(shift.arity, n)]

    def fill(i: int, labels: dict[str, str]) -> bool:
        if i == len(nodes):
            return True
        x = nodes[i]
        for s in shift.alphabet:
            if x:
                parent, d = x[:-1], int(x[-1])
                trial = dict(labels)
                trial[x] = s
                sibs = [parent + str(j) for j in range(shift.arity)]
                if all(y in trial for y in sibs):
                    cell = (trial[parent],) + tuple(trial[y] for y in sibs)
                    if cell not in shift.allowed:
                        continue
                labels[x] = s
            else:
                labels[x] = s
            if fill(i + 1, labels):
                return True
            del labels[x]
        return False

    return fill(0, {})


def random_onestep(rng: random.Random, kappa: int) -> OneStepTSFT:
    alphabet = tuple(str(i) for i in range(kappa))
    cells = [
        (p, a, b)
        for p in alphabet
        for a in alphabet
        for b in alphabet
    ]
    chosen = frozenset(c for c in cells if rng.random() < 0.25)
    return OneStepTSFT(2, alphabet, chosen)


def test_emptiness_matches_raw_backtracking_on_random_shifts():
    rng = random.Random(20260826)
    for _ in range(120):
        kappa = rng.randint(1, 4)
        shift = random_onestep(rng, kappa)
        empty, report = is_empty(shift, witness_height=5)
        assert empty == (not raw_block_exists(shift, 5))
        if not empty:
            assert report["core"]


def test_core_drops_symbol_without_outgoing_cell():
    shift = VertexTreeShift(
        arity=2,
        alphabet=("0", "1"),
        matrices=(((1, 0), (0, 0)), ((1, 0), (0, 0))),
    )
    core = essential_core(shift)
    assert core.symbols == ("0",)


def test_extend_rejects_root_label_outside_core():
    shift = VertexTreeShift(
        arity=2,
        alphabet=("0", "1"),
        matrices=(((1, 0), (0, 0)), ((1, 0), (0, 0))),
    )
    with pytest.raises(OutsideEssentialCore):
        extend_pattern(shift, Pattern(2, {"": "1"}), height=2)


def test_locally_admissible_examples():
    gm = golden_mean_shift()
    good = block_from_levels(2, [["0"], ["1", "1"], ["0", "0", "0", "0"]])
    assert locally_admissible(good, gm)
    bad = block_from_levels(2, [["1"], ["1", "0"]])
    assert not locally_admissible(bad, gm)
    sd = sibling_distinct_shift()
    assert locally_admissible(block_from_levels(2, [["0"], ["1", "0"]]), sd)
    assert not locally_admissible(block_from_levels(2, [["0"], ["0", "1"]]), sd)


def test_extend_pattern_is_sound_and_agrees_with_input():
    rng = random.Random(7)
    gm = golden_mean_shift()
    for _ in range(40):
        root = rng.choice(gm.alphabet)
        u = extend_pattern(gm, Pattern(2, {"": root}), height=4)
        assert u.height == 4
        assert u[""] == root
        assert locally_admissible(u, gm)
        deeper = extend_pattern(gm, u, height=6)
        assert all(deeper[x] == u[x] for x in u.support)
        assert locally_admissible(deeper, gm)


def test_extend_inadmissible_pattern_raises():
    gm = golden_mean_shift()
    bad = block_from_levels(2, [["1"], ["1", "0"]])
    with pytest.raises(NotLocallyAdmissible):
        extend_pattern(gm, bad, height=4)


@pytest.mark.parametrize(
    "make,expected",
    [
        (full_shift, [2, 8, 128, 32768, 2147483648]),
        (golden_mean_shift, [2, 3, 9, 66, 3987]),
        (sibling_distinct_shift, [2, 2, 2, 2, 2]),
        (lambda: level_constant_shift(2), [2, 4, 8, 16, 32]),
    ],
)
def test_block_counts_against_enumeration(make, expected):
    shift = make()
    for n, want in enumerate(expected, start=1):
        assert count_blocks(shift, n).total == want
        if want <= 5000:
            blocks = enumerate_blocks(shift, n)
            assert len(blocks) == want
            assert len(set(blocks)) == want
            for b in blocks[:50]:
                assert locally_admissible(b, shift)


def test_sofic_counts_match_image_enumeration():
    ev = even_shift_image()
    for n in range(1, 4):
        assert count_blocks(ev, n).total == len(enumerate_blocks(ev, n))


def test_solve_labeling_respects_pins():
    gm = golden_mean_shift()
    support = {"", "0", "1", "00", "01", "10", "11"}
    out = solve_labeling(gm, support, {"": "1", "00": "1"})
    assert out is not None
    assert out[""] == "1" and out["00"] == "1"
    assert out["0"] == "0" and out["1"] == "0"
    assert solve_labeling(gm, support, {"": "1", "0": "1"}) is None


def test_empty_shift_reports_empty_core():
    shift = OneStepTSFT(2, ("0", "1"), frozenset({("0", "0", "1")}))
    empty, report = is_empty(shift)
    assert empty
    assert report["trace"]
