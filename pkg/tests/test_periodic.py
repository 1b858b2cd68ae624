"""Periodic labelings from complete prefix codes and the aperiodicity certificate."""

import itertools
import random

import pytest

from treeshift.decision import essential_core, locally_admissible
from treeshift.fixtures import (
    full_shift,
    golden_mean_shift,
    sibling_distinct_shift,
    swap_both_shift,
)
from treeshift.patterns import CompletePrefixCode, uniform_code
from treeshift.periodic import (
    NoneUpToBound,
    PeriodicSpec,
    periodic_from_cpc,
    search_periodic,
    sibling_distinct_certificate,
)
from treeshift.shifts import OneStepTSFT, one_step_view
from treeshift.words import words_of_length


def unfolds_admissibly(spec: PeriodicSpec, shift) -> bool:
    depth = 2 * len(spec.code.elements) + 2
    return locally_admissible(spec.unfold(depth), shift)


def overlap_consistent(spec: PeriodicSpec) -> bool:
    # sigma_x(label) agrees with reading the periodic labeling shifted to x,
    # checked over every node of a deep unfolding.
    depth = 2 * len(spec.code.elements) + 3
    deep = spec.unfold(depth)
    for x in deep.support:
        for d in ("0", "1"):
            if x + d in deep.support and deep[x + d] != spec.label_at(x + d):
                return False
    return True


def test_full_shift_trivial_code_constant_point():
    spec = periodic_from_cpc(full_shift(), uniform_code(2, 1))
    assert spec is not None
    assert spec.label_at("") == "0"
    assert unfolds_admissibly(spec, full_shift())


def test_swap_shift_periodic_point_alternates():
    # no fixed point exists (a label can never be its own child), so the
    # one-leaf code fails and the depth-two code yields the 2-periodic point
    assert periodic_from_cpc(swap_both_shift(), uniform_code(2, 1)) is None
    spec = periodic_from_cpc(swap_both_shift(), uniform_code(2, 2))
    assert spec is not None
    labels = {x: spec.label_at(x) for x in ["", "0", "1", "00", "01"]}
    assert labels[""] != labels["0"]
    assert labels["0"] == labels["1"]
    assert labels[""] == labels["00"]
    assert unfolds_admissibly(spec, swap_both_shift())


def test_golden_mean_sigma2_constant_zero():
    gm = golden_mean_shift()
    spec = periodic_from_cpc(gm, uniform_code(2, 2))
    assert spec is not None
    assert all(spec.label_at(x) == "0" for x in ["", "0", "1", "00", "0101"])
    assert unfolds_admissibly(spec, gm)


def test_sibling_distinct_has_no_periodic_points():
    sd = sibling_distinct_shift()
    out = search_periodic(sd, 8)
    assert isinstance(out, NoneUpToBound)
    assert out.codes_exhausted > 0


def test_certificate_on_fixtures():
    assert sibling_distinct_certificate(sibling_distinct_shift()).holds
    assert not sibling_distinct_certificate(full_shift()).holds
    assert not sibling_distinct_certificate(golden_mean_shift()).holds


def test_certificate_dominates_search():
    # certificate => no periodic point up to any bound
    rng = random.Random(99)
    alphabet = ("0", "1", "2")
    for _ in range(60):
        cells = frozenset(
            c
            for c in itertools.product(alphabet, repeat=3)
            if rng.random() < 0.3
        )
        shift = OneStepTSFT(2, alphabet, cells)
        if not essential_core(shift).symbols:
            continue
        if sibling_distinct_certificate(shift).holds:
            assert isinstance(search_periodic(shift, 4), NoneUpToBound)


def brute_force_periodic(shift, code: CompletePrefixCode):
    """Independent oracle: exhaustive assignment over the quotient nodes."""
    view = one_step_view(shift)
    nodes = sorted(code.interior(), key=lambda w: (len(w), w))

    def wrap(w: str) -> str:
        for e in code.elements:
            if w == e:
                return ""
        return w

    for combo in itertools.product(view.alphabet, repeat=len(nodes)):
        labels = dict(zip(nodes, combo))

        def val(w):
            return labels[wrap(w)] if wrap(w) in labels else None

        ok = True
        for x in nodes:
            children = [val(x + str(j)) for j in range(view.arity)]
            if any(c is None for c in children):
                ok = False
                break
            if (labels[x], *children) not in view.allowed:
                ok = False
                break
        if ok:
            return labels
    return None


def test_search_agrees_with_brute_force_on_random_shifts():
    rng = random.Random(4242)
    codes = [uniform_code(2, 1), CompletePrefixCode(2, ("0", "10", "11")),
             CompletePrefixCode(2, ("1", "00", "01")), uniform_code(2, 2)]
    for _ in range(40):
        kappa = rng.randint(2, 3)
        alphabet = tuple(str(i) for i in range(kappa))
        cells = frozenset(
            c for c in itertools.product(alphabet, repeat=3) if rng.random() < 0.3
        )
        shift = OneStepTSFT(2, alphabet, cells)
        for code in codes:
            spec = periodic_from_cpc(shift, code)
            oracle = brute_force_periodic(shift, code)
            assert (spec is None) == (oracle is None)
            if spec is not None:
                assert unfolds_admissibly(spec, shift)
                assert overlap_consistent(spec)


def test_unfold_depth_and_labels():
    spec = periodic_from_cpc(full_shift(), uniform_code(2, 2))
    pat = spec.unfold(3)
    assert pat.height == 4
    assert set(pat.support) == {
        w for n in range(4) for w in words_of_length(2, n)
    }
