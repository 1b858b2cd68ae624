"""Tree-shift definitions, higher-block recoding, and sliding block codes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Optional

from . import words as W
from .errors import (
    EmptyRecodedAlphabet,
    HeightTooSmall,
    InadmissibleInput,
    LimitExceeded,
    NonBinaryMatrixEntry,
    NonPrefixClosedForbiddenPattern,
    SchemaError,
    UnknownSymbol,
)
from .patterns import Pattern, pattern_from_document, subtree_at


def _check_alphabet(alphabet: Iterable[str]) -> tuple[str, ...]:
    symbols = tuple(str(a) for a in alphabet)
    if not symbols:
        raise SchemaError("alphabet must be nonempty")
    if len(set(symbols)) != len(symbols):
        raise SchemaError("alphabet symbols must be distinct")
    return symbols


@dataclass(frozen=True)
class TreeShift:
    """Common surface of the five definition kinds."""

    arity: int
    alphabet: tuple[str, ...]

    kind = "abstract"

    def __post_init__(self):
        if self.arity < 2:
            raise SchemaError("arity must be at least 2")
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} is not in the alphabet") from None

    def to_document(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class VertexTreeShift(TreeShift):
    """One 0-1 transition matrix per child direction.

    ``matrices[i][p][q]`` allows child symbol q in direction i under parent
    symbol p (row = parent, column = child).
    """

    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    kind = "vertex"

    def __post_init__(self):
        super().__post_init__()
        k = len(self.alphabet)
        mats = tuple(tuple(tuple(int(e) for e in row) for row in m) for m in self.matrices)
        if len(mats) != self.arity:
            raise SchemaError(f"expected {self.arity} matrices, got {len(mats)}")
        for m in mats:
            if len(m) != k or any(len(row) != k for row in m):
                raise SchemaError(f"matrices must be {k}x{k}")
            for row in m:
                for e in row:
                    if e not in (0, 1):
                        raise NonBinaryMatrixEntry(f"matrix entry {e} is not 0/1")
        object.__setattr__(self, "matrices", mats)

    def edge_ok(self, direction: int, parent: str, child: str) -> bool:
        return self.matrices[direction][self.index(parent)][self.index(child)] == 1

    def to_document(self) -> dict:
        return {
            "kind": "vertex",
            "arity": self.arity,
            "alphabet": list(self.alphabet),
            "matrices": [[list(row) for row in m] for m in self.matrices],
        }


@dataclass(frozen=True)
class OneStepTSFT:
    """Finite type with window two: a set of allowed (parent; children) cells."""

    arity: int
    alphabet: tuple[str, ...]
    allowed: frozenset[tuple[str, ...]]

    kind = "one_step"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))
        cells = frozenset(tuple(str(s) for s in t) for t in self.allowed)
        symbols = set(self.alphabet)
        for cell in cells:
            if len(cell) != self.arity + 1:
                raise SchemaError(f"cell {cell} must have {self.arity + 1} entries")
            for s in cell:
                if s not in symbols:
                    raise UnknownSymbol(f"symbol {s!r} is not in the alphabet")
        object.__setattr__(self, "allowed", cells)

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} is not in the alphabet") from None

    def cells_from(self, parent: str) -> list[tuple[str, ...]]:
        return sorted(c for c in self.allowed if c[0] == parent)

    def to_document(self) -> dict:
        return {
            "kind": "one_step",
            "arity": self.arity,
            "alphabet": list(self.alphabet),
            "allowed": sorted(list(c) for c in self.allowed),
        }


@dataclass(frozen=True)
class ForbiddenSetShift:
    """Finite forbidden pattern list; height-1 bans are folded into the alphabet."""

    arity: int
    alphabet: tuple[str, ...]
    forbidden: tuple[Pattern, ...]

    kind = "forbidden"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))
        symbols = set(self.alphabet)
        pats = []
        banned: set[str] = set()
        for p in self.forbidden:
            if not isinstance(p, Pattern):
                raise SchemaError("forbidden entries must be patterns")
            if p.arity != self.arity:
                raise SchemaError("forbidden pattern arity mismatch")
            for s in p.labels.values():
                if s not in symbols:
                    raise UnknownSymbol(f"symbol {s!r} is not in the alphabet")
            if p.height == 1:
                banned.add(p[W.EPSILON])
            else:
                pats.append(p)
        if banned:
            remaining = tuple(a for a in self.alphabet if a not in banned)
            if not remaining:
                raise SchemaError("height-1 forbidden patterns ban the whole alphabet")
            object.__setattr__(self, "alphabet", remaining)
            pats = [p for p in pats if not set(p.labels.values()) & banned]
        object.__setattr__(self, "forbidden", tuple(pats))

    @property
    def window(self) -> int:
        """Max forbidden height; at least 2 by normalization."""
        return max([p.height for p in self.forbidden], default=2)

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} is not in the alphabet") from None

    def to_document(self) -> dict:
        return {
            "kind": "forbidden",
            "arity": self.arity,
            "alphabet": list(self.alphabet),
            "patterns": [p.to_document() for p in self.forbidden],
        }


@dataclass(frozen=True)
class LevelConstantShift:
    """Built-in rule: a pattern is admissible iff labels agree per depth."""

    arity: int
    alphabet: tuple[str, ...]

    kind = "level_constant"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} is not in the alphabet") from None

    def to_document(self) -> dict:
        return {
            "kind": "level_constant",
            "arity": self.arity,
            "alphabet": list(self.alphabet),
        }


@dataclass(frozen=True, eq=False)
class SlidingBlockCode:
    """A window height m and a total table from admissible m-blocks to symbols."""

    window: int
    base: object
    output_alphabet: tuple[str, ...]
    table: Mapping[Pattern, str]

    def __post_init__(self):
        if self.window < 1:
            raise SchemaError("window height must be >= 1")
        object.__setattr__(self, "output_alphabet", _check_alphabet(self.output_alphabet))
        tbl = dict(self.table)
        out = set(self.output_alphabet)
        for blk, sym in tbl.items():
            if blk.height != self.window or not blk.is_block():
                raise SchemaError("table keys must be blocks of the window height")
            if sym not in out:
                raise UnknownSymbol(f"output symbol {sym!r} not in the output alphabet")
        object.__setattr__(self, "table", tbl)

    def __call__(self, block: Pattern) -> str:
        try:
            return self.table[block]
        except KeyError:
            raise InadmissibleInput(f"no table entry for block {block}") from None


@dataclass(frozen=True, eq=False)
class SoficImageShift:
    """Image of a base shift under a sliding block code (explicit presentation)."""

    base: object
    code: SlidingBlockCode

    kind = "sofic_image"

    def __post_init__(self):
        if self.code.base is not self.base:
            raise SchemaError("the code must be defined on the base shift")

    @property
    def arity(self) -> int:
        return self.base.arity

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.code.output_alphabet

    def index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise UnknownSymbol(f"symbol {symbol!r} is not in the alphabet") from None

    def to_document(self) -> dict:
        return {
            "kind": "sofic_image",
            "arity": self.arity,
            "alphabet": list(self.alphabet),
            "base": self.base.to_document(),
            "window": self.code.window,
            "table": [
                {"block": blk.to_document(), "out": self.code.table[blk]}
                for blk in sorted(self.code.table, key=lambda b: str(b))
            ],
        }


TreeShiftDefinition = (
    VertexTreeShift | OneStepTSFT | ForbiddenSetShift | LevelConstantShift | SoficImageShift
)


# ---------------------------------------------------------------------------
# Parsing


def parse_shift(doc: dict) -> TreeShiftDefinition:
    """Validate a shift definition document (see the JSON file formats)."""
    if not isinstance(doc, dict):
        raise SchemaError("shift document must be a JSON object")
    kind = doc.get("kind")
    arity = int(doc.get("arity", 2))
    alphabet = tuple(str(a) for a in doc.get("alphabet", ()))
    if kind == "vertex":
        mats = doc.get("matrices")
        if not isinstance(mats, list):
            raise SchemaError("vertex document needs a 'matrices' array")
        return VertexTreeShift(arity, alphabet, tuple(tuple(tuple(row) for row in m) for m in mats))
    if kind == "one_step":
        allowed = doc.get("allowed")
        if not isinstance(allowed, list):
            raise SchemaError("one_step document needs an 'allowed' array")
        return OneStepTSFT(arity, alphabet, frozenset(tuple(c) for c in allowed))
    if kind == "forbidden":
        pats = doc.get("patterns")
        if not isinstance(pats, list):
            raise SchemaError("forbidden document needs a 'patterns' array")
        try:
            parsed = tuple(pattern_from_document(p) for p in pats)
        except SchemaError as exc:
            if "prefix-closed" in str(exc):
                raise NonPrefixClosedForbiddenPattern(str(exc)) from exc
            raise
        return ForbiddenSetShift(arity, alphabet, parsed)
    if kind == "level_constant":
        return LevelConstantShift(arity, alphabet)
    if kind == "sofic_image":
        base = parse_shift(doc.get("base"))
        window = int(doc.get("window", 1))
        entries = doc.get("table")
        if not isinstance(entries, list):
            raise SchemaError("sofic_image document needs a 'table' array")
        table = {
            pattern_from_document(e["block"]): str(e["out"]) for e in entries
        }
        out_alpha = alphabet or tuple(sorted(set(table.values())))
        code = SlidingBlockCode(window, base, out_alpha, table)
        return SoficImageShift(base, code)
    raise SchemaError(f"unknown shift kind {kind!r}")


# ---------------------------------------------------------------------------
# One-step views and higher-block recoding


def as_one_step(shift: VertexTreeShift) -> OneStepTSFT:
    """Expand per-direction matrices into the allowed parent-children cells."""
    cells = set()
    for a in shift.alphabet:
        per_dir = [
            [b for b in shift.alphabet if shift.edge_ok(i, a, b)]
            for i in range(shift.arity)
        ]
        for combo in product(*per_dir):
            cells.add((a, *combo))
    return OneStepTSFT(shift.arity, shift.alphabet, frozenset(cells))


def one_step_view(shift) -> OneStepTSFT:
    """A one-step cell relation for any finite-type kind (vertex stays intact)."""
    if isinstance(shift, OneStepTSFT):
        return shift
    if isinstance(shift, VertexTreeShift):
        return as_one_step(shift)
    raise SchemaError(f"no one-step view for kind {shift.kind!r}")


def _truncate_block(block: Pattern, height: int) -> Pattern:
    return block.restrict(w for w in block.support if len(w) < height)


@lru_cache(maxsize=None)
def recode_to_vertex(shift) -> tuple[VertexTreeShift, SlidingBlockCode]:
    """Higher-block recoding: one vertex-shift symbol per admissible m-block.

    ``A_i(U, V) = 1`` iff the height-(m-1) truncation of V equals the direction-i
    subtree of U.  Returns the vertex shift together with the m-block map that
    realizes the conjugacy; block counts satisfy
    ``|B_{n+m-1}(shift)| == |B_n(vertex)|``.
    """
    from .decision import enumerate_blocks  # local import to avoid a cycle

    if isinstance(shift, (OneStepTSFT, VertexTreeShift)):
        m = 2
    elif isinstance(shift, ForbiddenSetShift):
        m = shift.window
    else:
        raise SchemaError(f"cannot recode kind {shift.kind!r}")

    m_blocks = enumerate_blocks(shift, m, core_only=False)
    if not m_blocks:
        raise EmptyRecodedAlphabet("no admissible window block: the shift is empty")
    names = [str(b) for b in m_blocks]
    name_of = dict(zip(m_blocks, names))
    d = shift.arity
    size = len(m_blocks)
    mats = [[[0] * size for _ in range(size)] for _ in range(d)]
    for p, u in enumerate(m_blocks):
        for i in range(d):
            sub = subtree_at(u, str(i))
            for q, v in enumerate(m_blocks):
                if _truncate_block(v, m - 1) == sub:
                    mats[i][p][q] = 1
    vertex = VertexTreeShift(
        d, tuple(names), tuple(tuple(tuple(row) for row in m_) for m_ in mats)
    )
    code = SlidingBlockCode(m, shift, tuple(names), {b: name_of[b] for b in m_blocks})
    return vertex, code


# ---------------------------------------------------------------------------
# Block maps and sofic images


def apply_block_map(code: SlidingBlockCode, u: Pattern) -> Pattern:
    """Slide the window over a block: v_x = table(window block of u at x)."""
    m = code.window
    if not u.is_block():
        raise InadmissibleInput("block map input must be a block")
    n = u.height
    if n < m:
        raise HeightTooSmall(f"need a block of height >= {m}, got {n}")
    labels = {}
    window_support = W.words_up_to(u.arity, m - 1)
    for x in W.words_up_to(u.arity, n - m):
        rooted = Pattern(u.arity, {w: u[x + w] for w in window_support})
        labels[x] = code(rooted)
    return Pattern(u.arity, labels)


def image_blocks(code: SlidingBlockCode, n: int, limit: Optional[int] = None) -> list[Pattern]:
    """B_n of the sofic image: deduplicated images of the base (n+m-1)-blocks."""
    from .decision import enumerate_blocks  # local import to avoid a cycle

    if n < 1:
        raise SchemaError("height must be >= 1")
    base_blocks = enumerate_blocks(code.base, n + code.window - 1, limit=limit)
    seen: dict[Pattern, None] = {}
    for b in base_blocks:
        seen.setdefault(apply_block_map(code, b))
    if limit is not None and len(seen) > limit:
        raise LimitExceeded(f"more than {limit} image blocks at height {n}")
    order = {a: i for i, a in enumerate(code.output_alphabet)}
    return sorted(seen, key=lambda p: [order[p[w]] for w in p.support])
