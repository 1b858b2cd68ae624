"""Periodic points through complete prefix codes and the aperiodicity
certificate.

A point t with sigma_x t = t for every x in a code P is determined by its
labels on the proper prefixes of P: every other node resolves to an
interior node by stripping code words from the front.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import words as W
from .decision import FINITE_TYPE_KINDS, essential_core
from .errors import SchemaError
from .mixing import enumerate_cpcs
from .patterns import CompletePrefixCode, Pattern
from .shifts import ForbiddenSetShift, one_step_view, recode_to_vertex


@dataclass(frozen=True)
class PeriodicSpec:
    """A code P plus labels on its proper prefixes (the quotient tree)."""

    code: CompletePrefixCode
    interior_labels: dict[str, str]

    def to_document(self) -> dict:
        return {
            "code": list(self.code.elements),
            "interior_labels": {
                w: self.interior_labels[w]
                for w in W.sort_words(self.interior_labels)
            },
        }

    def label_at(self, word: str) -> str:
        """Label of the unfolded point at ``word`` (strip code prefixes)."""
        w = word
        stripped = True
        while stripped:
            stripped = False
            for x in self.code.elements:
                if w.startswith(x):
                    w = w[len(x):]
                    stripped = True
                    break
        return self.interior_labels[w]

    def unfold(self, depth: int) -> Pattern:
        """The height-(depth+1) block of the unfolded periodic point."""
        arity = self.code.arity
        labels = {w: self.label_at(w) for w in W.words_up_to(arity, depth)}
        return Pattern(arity, labels)


def _quotient_child(code: CompletePrefixCode, word: str) -> str:
    """Interior node that the child ``word`` wraps to ('' for code words)."""
    if word in code.elements:
        return ""
    return word


def periodic_from_cpc(shift, P: CompletePrefixCode) -> Optional[PeriodicSpec]:
    """First (canonical-order) labeling of the quotient tree whose every
    wrapped parent-children cell is allowed, or None."""
    if isinstance(shift, ForbiddenSetShift):
        vertex, code = recode_to_vertex(shift)
        rec = periodic_from_cpc(vertex, P)
        if rec is None:
            return None
        # recoded symbols are m-blocks; the conjugacy reads off root labels
        root_of = {name: blk.labels[""] for blk, name in _block_names(code)}
        return PeriodicSpec(P, {w: root_of[s]
                                for w, s in rec.interior_labels.items()})
    if not isinstance(shift, FINITE_TYPE_KINDS):
        raise SchemaError(
            "periodic search is defined for finite-type kinds only"
        )
    core = essential_core(one_step_view(shift))
    if not core.symbols:
        return None
    interior = P.interior()
    d = shift.arity
    labels: dict[str, str] = {}

    def cell_ready(y: str) -> Optional[tuple]:
        if y not in labels:
            return None
        kids = []
        for i in range(d):
            q = _quotient_child(P, y + str(i))
            if q not in labels:
                return None
            kids.append(labels[q])
        return (labels[y], *kids)

    def consistent(last: str) -> bool:
        # check every quotient cell that just became fully resolved
        for y in interior:
            cell = cell_ready(y)
            if cell is not None and cell not in core.cells:
                return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(interior):
            return True
        y = interior[i]
        for s in core.symbols:
            labels[y] = s
            if consistent(y) and backtrack(i + 1):
                return True
            del labels[y]
        return False

    if backtrack(0):
        return PeriodicSpec(P, dict(labels))
    return None


def _block_names(code) -> list[tuple[Pattern, str]]:
    return [(blk, name) for blk, name in code.table.items()]


@dataclass(frozen=True)
class NoneUpToBound:
    """Negative search result carrying the number of codes exhausted."""

    codes_exhausted: int

    def to_document(self) -> dict:
        return {"found": False, "codes_exhausted": self.codes_exhausted}


def search_periodic(shift, max_leaves: int):
    """First periodic point over the canonical code stream, else
    NoneUpToBound."""
    if max_leaves < 2:
        raise ValueError("max_leaves must be >= 2")
    tried = 0
    for P in enumerate_cpcs(shift.arity, max_leaves):
        spec = periodic_from_cpc(shift, P)
        tried += 1
        if spec is not None:
            return P, spec
    return NoneUpToBound(tried)


@dataclass(frozen=True)
class CertificateReport:
    """Sibling-distinctness certificate outcome with its inspection trace."""

    holds: bool
    direction_pair: Optional[tuple[int, int]]
    cells: tuple
    extension_beyond_binary: bool

    def to_document(self) -> dict:
        return {
            "holds": self.holds,
            "direction_pair": list(self.direction_pair)
            if self.direction_pair
            else None,
            "cells_inspected": [list(c) for c in self.cells],
            "extension_beyond_binary": self.extension_beyond_binary,
        }


def sibling_distinct_certificate(shift) -> CertificateReport:
    """True when some fixed pair of sibling directions differs in every
    allowed cell over the essential core.

    Any complete prefix code contains a full sibling family w0..w(d-1); a
    periodic point would have to repeat its root label on two of those
    siblings, so the certificate rules out periodic points for every code.
    The argument is stated for binary shifts; for larger arity the analogous
    direction-pair rule is applied and flagged as an extension.
    """
    if not isinstance(shift, FINITE_TYPE_KINDS):
        raise SchemaError(
            "the certificate is defined for finite-type kinds only"
        )
    core = essential_core(one_step_view(shift))
    cells = tuple(sorted(core.cells))
    d = shift.arity
    for i in range(d):
        for j in range(i + 1, d):
            if all(cell[1 + i] != cell[1 + j] for cell in cells):
                return CertificateReport(True, (i, j), cells, d > 2)
    return CertificateReport(False, None, cells, d > 2)
