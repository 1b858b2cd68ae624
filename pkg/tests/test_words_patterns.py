"""Words, patterns, codes, and the truncated tree metric."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeshift import words as W
from treeshift.errors import (
    ContainsEmptyWord,
    Incomplete,
    NotPrefixFree,
    SchemaError,
)
from treeshift.patterns import (
    CompletePrefixCode,
    Pattern,
    block_from_levels,
    cpc_from_document,
    dumps_canonical,
    leaves_of,
    pattern_from_document,
    subtree_at,
    truncated_distance,
    uniform_code,
    validate_cpc,
)


# --- words ---------------------------------------------------------------


def test_canonical_order_is_length_then_lex():
    ws = ["10", "0", "", "1", "00", "11", "01"]
    assert W.sort_words(ws) == ["", "0", "1", "00", "01", "10", "11"]


def test_words_of_length_and_prefix_utilities():
    assert list(W.words_of_length(2, 2)) == ["00", "01", "10", "11"]
    assert W.words_up_to(2, 1) == ["", "0", "1"]
    assert list(W.proper_prefixes("011")) == ["", "0", "01"]
    assert W.is_prefix_closed({"", "0", "01"})
    assert not W.is_prefix_closed({"", "01"})


def test_validate_word_rejects_foreign_digits():
    with pytest.raises(ValueError):
        W.validate_word("02", 2)


# --- patterns ------------------------------------------------------------


def test_pattern_equality_ignores_insertion_order():
    p = Pattern(2, {"": "0", "0": "1", "1": "0"})
    q = Pattern(2, {"1": "0", "0": "1", "": "0"})
    assert p == q
    assert hash(p) == hash(q)
    assert str(p) == "(0,1,0)"


def test_pattern_requires_prefix_closed_support():
    with pytest.raises(SchemaError):
        Pattern(2, {"": "0", "01": "1"})


def test_block_from_levels_round_trip():
    b = block_from_levels(2, [["0"], ["1", "0"]])
    assert b.is_block()
    assert b.height == 2
    assert b[""] == "0" and b["0"] == "1" and b["1"] == "0"


def test_leaves_and_subtrees():
    p = Pattern(2, {"": "0", "0": "1", "1": "0", "00": "0", "01": "0"})
    assert leaves_of(p) == {"1", "00", "01"}
    sub = subtree_at(p, "0")
    assert sub == Pattern(2, {"": "1", "0": "0", "1": "0"})


def test_restrict_keeps_labels():
    b = block_from_levels(2, [["0"], ["1", "0"]])
    assert b.restrict({"", "1"}) == Pattern(2, {"": "0", "1": "0"})


# --- truncated metric ----------------------------------------------------


def test_distance_zero_on_equal_restrictions():
    p = block_from_levels(2, [["0"], ["1", "0"]])
    q = block_from_levels(2, [["0"], ["1", "0"]])
    d = truncated_distance(p, q, 1)
    assert d.is_bound and d.value == Fraction(1, 4)


def test_distance_detects_first_disagreement_depth():
    p = block_from_levels(2, [["0"], ["1", "0"]])
    q = block_from_levels(2, [["0"], ["1", "1"]])
    d = truncated_distance(p, q, 1)
    assert not d.is_bound and d.value == Fraction(1, 2)


@settings(max_examples=100)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3),
       st.data())
def test_ultrametric_inequality(h1, h2, h3, data):
    def rand_block(h):
        levels = [
            [data.draw(st.sampled_from("01")) for _ in range(2**k)]
            for k in range(h)
        ]
        return block_from_levels(2, levels)

    x, y, z = rand_block(h1), rand_block(h2), rand_block(h3)
    depth = min(h1, h2, h3) - 1
    dxz = truncated_distance(x, z, depth).value
    dxy = truncated_distance(x, y, depth).value
    dyz = truncated_distance(y, z, depth).value
    assert dxz <= max(dxy, dyz)


# --- complete prefix codes -----------------------------------------------


def test_uniform_code_is_valid():
    code = uniform_code(2, 3)
    assert len(code.elements) == 8
    assert code.length == 3
    validate_cpc(code.elements, 2)


def test_validate_cpc_rejects_prefix_overlap():
    with pytest.raises(NotPrefixFree):
        validate_cpc(["0", "01", "1"], 2)


def test_validate_cpc_rejects_incomplete_cover():
    with pytest.raises(Incomplete):
        validate_cpc(["0", "10"], 2)


def test_validate_cpc_rejects_empty_word():
    with pytest.raises(ContainsEmptyWord):
        validate_cpc(["", "0", "1"], 2)


def test_interior_is_proper_prefix_set():
    code = CompletePrefixCode(2, ("0", "10", "11"))
    assert code.interior() == ["", "1"]
    assert code.length == 2


@st.composite
def binary_antichains(draw):
    """Leaf sets of random full binary trees, occasionally corrupted."""

    def grow(prefix, depth):
        if depth == 0 or draw(st.booleans()):
            return [prefix]
        return grow(prefix + "0", depth - 1) + grow(prefix + "1", depth - 1)

    words = grow("0", 3) + grow("1", 3)
    if draw(st.booleans()):
        return words, True
    # corrupt: drop one word (breaks the cover) unless that empties a side
    if len(words) > 2:
        idx = draw(st.integers(0, len(words) - 1))
        return words[:idx] + words[idx + 1:], False
    return words, True


@settings(max_examples=200)
@given(binary_antichains())
def test_kraft_equality_matches_cover_scan(case):
    words, complete = case
    if complete:
        code = validate_cpc(words, 2)
        assert sum(Fraction(1, 2 ** len(x)) for x in code.elements) == 1
    else:
        with pytest.raises((Incomplete, NotPrefixFree)):
            validate_cpc(words, 2)


# --- serialization -------------------------------------------------------


def test_pattern_document_round_trip():
    p = Pattern(2, {"": "0", "0": "1", "1": "0"})
    assert pattern_from_document(p.to_document()) == p


def test_cpc_document_round_trip():
    code = CompletePrefixCode(2, ("0", "10", "11"))
    assert cpc_from_document(code.to_document()) == code


def test_dumps_canonical_is_deterministic():
    doc = {"b": 1, "a": [2, 3]}
    s = dumps_canonical(doc)
    assert s == dumps_canonical(json.loads(s))
    assert s.endswith("\n")
