"""Emptiness, admissibility, pattern extension, and block enumeration/counting."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

from . import words as W
from .errors import (
    AlphabetMismatch,
    CapExceeded,
    EmptyRecodedAlphabet,
    LimitExceeded,
    NotLocallyAdmissible,
    OutsideEssentialCore,
    SchemaError,
)
from .patterns import Pattern
from .shifts import (
    ForbiddenSetShift,
    LevelConstantShift,
    OneStepTSFT,
    SoficImageShift,
    VertexTreeShift,
    image_blocks,
    one_step_view,
    recode_to_vertex,
)

FINITE_TYPE_KINDS = (VertexTreeShift, OneStepTSFT)


@dataclass(frozen=True)
class EssentialCore:
    """Greatest symbol subset on which every direction keeps a continuation."""

    symbols: tuple[str, ...]
    trace: tuple[dict, ...]
    cells: frozenset[tuple[str, ...]]

    def __contains__(self, symbol: str) -> bool:
        return symbol in self.symbols


@lru_cache(maxsize=None)
def essential_core(shift) -> EssentialCore:
    """Delete symbols with no surviving continuation until stable.

    A symbol survives a round when some allowed cell keeps all its children
    among the survivors.  The deletion trace is the emptiness certificate.
    """
    if not isinstance(shift, FINITE_TYPE_KINDS):
        raise SchemaError("essential core is defined for vertex/one-step kinds")
    view = one_step_view(shift)
    alive = list(shift.alphabet)
    trace: list[dict] = []
    round_no = 0
    changed = True
    while changed:
        changed = False
        round_no += 1
        survivors = set(alive)
        for a in list(alive):
            if not any(
                cell[0] == a and all(b in survivors for b in cell[1:])
                for cell in view.allowed
            ):
                alive.remove(a)
                trace.append(
                    {
                        "round": round_no,
                        "symbol": a,
                        "reason": "no allowed cell with all children surviving",
                    }
                )
                changed = True
    core = tuple(a for a in shift.alphabet if a in alive)
    kept = frozenset(
        cell
        for cell in view.allowed
        if cell[0] in alive and all(b in alive for b in cell[1:])
    )
    return EssentialCore(core, tuple(trace), kept)


def core_symbols(shift) -> tuple[str, ...]:
    """Extensible symbols for any definition kind."""
    if isinstance(shift, FINITE_TYPE_KINDS):
        return essential_core(shift).symbols
    if isinstance(shift, LevelConstantShift):
        return shift.alphabet
    if isinstance(shift, ForbiddenSetShift):
        vertex, code = recode_to_vertex(shift)
        roots = {blk[W.EPSILON] for blk, name in code.table.items()
                 if name in essential_core(vertex)}
        return tuple(a for a in shift.alphabet if a in roots)
    if isinstance(shift, SoficImageShift):
        ones = image_blocks(shift.code, 1)
        roots = {b[W.EPSILON] for b in ones}
        return tuple(a for a in shift.alphabet if a in roots)
    raise SchemaError(f"unknown shift kind {shift.kind!r}")


def is_empty(shift, witness_height: int = 3) -> tuple[bool, dict]:
    """Emptiness with a certificate: deletion trace or a witness block."""
    if isinstance(shift, ForbiddenSetShift):
        try:
            vertex, _ = recode_to_vertex(shift)
        except EmptyRecodedAlphabet:
            return True, {"trace": [{"reason": "no admissible window block"}]}
        empty, cert = is_empty(vertex, witness_height)
        return empty, cert
    if isinstance(shift, LevelConstantShift):
        block = extend_pattern(shift, Pattern(shift.arity, {"": shift.alphabet[0]}),
                               witness_height)
        return False, {"witness": block.to_document()}
    if isinstance(shift, SoficImageShift):
        empty, _ = is_empty(shift.base, witness_height)
        if empty:
            return True, {"trace": [{"reason": "empty base shift"}]}
        one = image_blocks(shift.code, 1)
        block = extend_pattern(shift, one[0], witness_height)
        return False, {"witness": block.to_document()}
    core = essential_core(shift)
    if not core.symbols:
        return True, {"trace": list(core.trace)}
    seed = Pattern(shift.arity, {"": core.symbols[0]})
    block = extend_pattern(shift, seed, witness_height)
    return False, {"core": list(core.symbols), "witness": block.to_document()}


# ---------------------------------------------------------------------------
# Local admissibility


def _check_symbols(u: Pattern, alphabet) -> None:
    extra = set(u.labels.values()) - set(alphabet)
    if extra:
        raise AlphabetMismatch(f"labels {sorted(extra)} are not in the alphabet")


def _cell_feasible(cells, parent_label, child_labels) -> bool:
    """Does some allowed cell match the parent and every known child?"""
    return any(
        cell[0] == parent_label
        and all(cl is None or cl == cell[1 + i] for i, cl in enumerate(child_labels))
        for cell in cells
    )


def _onestep_admissible(view: OneStepTSFT, labels: dict[str, str]) -> bool:
    d = view.arity
    for w, a in labels.items():
        kids = [labels.get(w + str(i)) for i in range(d)]
        if all(k is None for k in kids):
            continue  # no child present: the cell is unconstrained
        if not _cell_feasible(view.allowed, a, kids):
            return False
    return True


def _forbidden_embeds(shift: ForbiddenSetShift, labels: dict[str, str]) -> bool:
    for f in shift.forbidden:
        f_support = f.support
        for anchor in labels:
            ok = True
            for y in f_support:
                got = labels.get(anchor + y)
                if got is None or got != f[y]:
                    ok = False
                    break
            if ok:
                return True
    return False


def locally_admissible(u: Pattern, shift) -> bool:
    """No forbidden configuration occurs inside the support.

    Children outside the support are unconstrained (existentially completed);
    nodes with no in-support child impose nothing.
    """
    _check_symbols(u, shift.alphabet)
    if u.arity != shift.arity:
        raise AlphabetMismatch("pattern arity differs from the shift arity")
    labels = dict(u.labels)
    if isinstance(shift, FINITE_TYPE_KINDS):
        return _onestep_admissible(one_step_view(shift), labels)
    if isinstance(shift, LevelConstantShift):
        per_depth: dict[int, str] = {}
        for w, a in labels.items():
            if per_depth.setdefault(len(w), a) != a:
                return False
        return True
    if isinstance(shift, ForbiddenSetShift):
        return not _forbidden_embeds(shift, labels)
    if isinstance(shift, SoficImageShift):
        return solve_labeling(shift, set(labels), labels) is not None
    raise SchemaError(f"unknown shift kind {shift.kind!r}")


# ---------------------------------------------------------------------------
# Generic labeling search (the fill engine behind extension and gluing)


def _solve_onestep(view, cells, symbols, support, fixed):
    d = view.arity
    nodes = W.sort_words(support)
    labels: dict[str, str] = dict(fixed)

    def kids_of(w):
        return [w + str(i) for i in range(d)]

    def node_ok(w):
        a = labels.get(w)
        if a is None:
            return True
        kids = [labels.get(c) if c in support else None for c in kids_of(w)]
        if all(labels.get(c) is None for c in kids_of(w) if c in support) and all(
            c not in support for c in kids_of(w)
        ):
            return True  # no in-support child at all
        return _cell_feasible(cells, a, kids)

    # The constraint graph over a prefix-closed support is a tree, so a
    # bottom-up feasible-set pass decides satisfiability exactly and a
    # top-down greedy pass recovers the lexicographically least labeling.
    rank = {s: i for i, s in enumerate(symbols)}
    feas: dict[str, set[str]] = {}
    for w in reversed(nodes):
        cand = {fixed[w]} if w in fixed else set(symbols)
        kids = kids_of(w)
        present = [c for c in kids if c in support]
        if present:
            cand = {
                a
                for a in cand
                if any(
                    cell[0] == a
                    and all(
                        kids[j] not in support or cell[1 + j] in feas[kids[j]]
                        for j in range(d)
                    )
                    for cell in cells
                )
            }
        if not cand:
            return None
        feas[w] = cand

    labels[""] = fixed.get("", min(feas[""], key=rank.get))
    for w in nodes:
        a = labels[w]
        kids = kids_of(w)
        if not any(c in support for c in kids):
            continue
        best = None
        for cell in cells:
            if cell[0] != a:
                continue
            if any(
                kids[j] in support and cell[1 + j] not in feas[kids[j]]
                for j in range(d)
            ):
                continue
            key = tuple(
                rank[cell[1 + j]] for j in range(d) if kids[j] in support
            )
            if best is None or key < best[0]:
                best = (key, cell)
        _, cell = best
        for j in range(d):
            if kids[j] in support:
                labels[kids[j]] = cell[1 + j]
    return labels


def _solve_level_constant(shift, support, fixed):
    per_depth: dict[int, str] = {}
    for w, a in fixed.items():
        if per_depth.setdefault(len(w), a) != a:
            return None
    labels = dict(fixed)
    for w in support:
        if w not in labels:
            labels[w] = per_depth.setdefault(len(w), shift.alphabet[0])
    return labels


def _solve_forbidden(shift, support, fixed):
    nodes = W.sort_words(support)
    labels = dict(fixed)
    if _forbidden_embeds(shift, labels):
        return None
    unknown = [w for w in nodes if w not in labels]

    def backtrack(i):
        if i == len(unknown):
            return True
        w = unknown[i]
        for a in shift.alphabet:
            labels[w] = a
            if not _forbidden_embeds(shift, labels) and backtrack(i + 1):
                return True
            del labels[w]
        return False

    return labels if backtrack(0) else None


def _solve_sofic_dp(shift: SoficImageShift, support, fixed):
    """Exact feasible-set sweep for window-2 codes over one-step bases.

    Both the base cell relation and the image window at a node constrain
    the same (parent; children) base triple, so the constraint graph is a
    tree and a bottom-up sweep of feasible base symbols is exact; a
    canonical top-down pass reconstructs one witness.
    """
    code = shift.code
    d = shift.arity
    closure: set[str] = {""}
    for x in support:
        closure.add(x)
        for i in range(d):
            closure.add(x + str(i))
    core = essential_core(shift.base)
    cell_out = {}
    for blk, out in code.table.items():
        cell = (blk[""], *(blk[str(i)] for i in range(d)))
        cell_out[cell] = out
    nodes = W.sort_words(closure)
    # feasible symbol -> canonical witness cell (None at unconstrained tips)
    feas: dict[str, dict[str, Optional[tuple]]] = {}
    for w in reversed(nodes):
        kids = [w + str(i) if w + str(i) in closure else None for i in range(d)]
        target = fixed.get(w)
        if all(k is None for k in kids) and target is None:
            feas[w] = {s: None for s in core.symbols}
            continue
        table: dict[str, tuple] = {}
        for cell in sorted(core.cells):
            if cell[0] in table:
                continue
            if any(k is not None and cell[1 + i] not in feas[k]
                   for i, k in enumerate(kids)):
                continue
            if target is not None and cell_out.get(cell) != target:
                continue
            table[cell[0]] = cell
        feas[w] = table
    if not feas[""]:
        return None
    base_labels: dict[str, str] = {}
    root = min(feas[""])
    stack = [("", root)]
    while stack:
        w, s = stack.pop()
        base_labels[w] = s
        cell = feas[w][s]
        if cell is None:
            continue
        for i in range(d):
            child = w + str(i)
            if child in closure:
                stack.append((child, cell[1 + i]))
    labels = dict(fixed)
    win = W.words_up_to(d, 1)
    for x in support:
        block = Pattern(d, {y: base_labels[x + y] for y in win})
        labels[x] = code(block)
    return labels


def _solve_sofic(shift: SoficImageShift, support, fixed):
    """Search a base preimage whose image matches the fixed labels.

    The base labeling runs over the window closure of the support, restricted
    to the base core; free image nodes are read back from the found preimage.
    """
    code = shift.code
    base = shift.base
    if not isinstance(base, FINITE_TYPE_KINDS):
        raise SchemaError("sofic images are supported over finite-type bases only")
    if code.window == 2:
        return _solve_sofic_dp(shift, support, fixed)
    m = code.window
    closure: set[str] = set()
    win = W.words_up_to(shift.arity, m - 1)
    for x in support:
        closure.update(x + y for y in win)

    view = one_step_view(base)
    core = essential_core(base)
    by_out: dict[str, list[Pattern]] = {}
    for blk, out in code.table.items():
        by_out.setdefault(out, []).append(blk)

    nodes = W.sort_words(closure)
    base_labels: dict[str, str] = {}

    def window_ok(x):
        """Partial match of the image constraint at a fixed image node."""
        target = fixed.get(x)
        if target is None:
            return True
        blocks = by_out.get(target, ())
        return any(
            all(
                base_labels.get(x + y) in (None, blk[y])
                for y in win
            )
            for blk in blocks
        )

    def checks(w):
        parent = w[:-1] if w else None
        if parent is not None and parent in base_labels:
            kids = [base_labels.get(parent + str(i)) for i in range(shift.arity)]
            if not _cell_feasible(core.cells, base_labels[parent], kids):
                return False
        anchors = [w[:k] for k in range(max(0, len(w) - m + 1), len(w) + 1)]
        return all(window_ok(x) for x in anchors if x in fixed)

    choice_stack: list[list[str]] = []
    i = 0
    solved = False
    while True:
        if i == len(nodes):
            solved = True
            break
        if len(choice_stack) == i:
            choice_stack.append(list(core.symbols))
        w = nodes[i]
        while choice_stack[i]:
            b = choice_stack[i].pop(0)
            base_labels[w] = b
            if checks(w):
                i += 1
                break
            del base_labels[w]
        else:
            choice_stack.pop()
            if i == 0:
                break
            i -= 1
            del base_labels[nodes[i]]
    if not solved:
        return None
    labels = dict(fixed)
    for x in support:
        block = Pattern(shift.arity, {y: base_labels[x + y] for y in win})
        labels[x] = code(block)
    return labels


def solve_labeling(shift, support: set[str], fixed: dict[str, str],
                   core_only: bool = True) -> Optional[dict[str, str]]:
    """First (canonical-order) admissible completion of ``fixed`` on ``support``.

    Deterministic: unknown nodes are filled in canonical word order with
    symbols tried in alphabet order.  Returns None when no completion exists.
    """
    if not support >= set(fixed):
        raise ValueError("fixed labels must lie inside the support")
    if not W.is_prefix_closed(set(support)):
        raise ValueError("support must be prefix-closed")
    if isinstance(shift, FINITE_TYPE_KINDS):
        view = one_step_view(shift)
        if core_only:
            core = essential_core(shift)
            return _solve_onestep(view, core.cells, list(core.symbols), support, fixed)
        return _solve_onestep(view, view.allowed, list(shift.alphabet), support, fixed)
    if isinstance(shift, LevelConstantShift):
        return _solve_level_constant(shift, support, fixed)
    if isinstance(shift, ForbiddenSetShift):
        return _solve_forbidden(shift, support, fixed)
    if isinstance(shift, SoficImageShift):
        return _solve_sofic(shift, support, fixed)
    raise SchemaError(f"unknown shift kind {shift.kind!r}")


def extend_pattern(shift, u: Pattern, height: int) -> Pattern:
    """Deterministic completion of a local pattern to a full block."""
    if height < u.height:
        raise ValueError("target height is below the pattern height")
    if not locally_admissible(u, shift):
        raise NotLocallyAdmissible(f"pattern {u} is not locally admissible")
    syms = set(core_symbols(shift))
    outside = set(u.labels.values()) - syms
    if outside:
        raise OutsideEssentialCore(
            f"labels {sorted(outside)} were deleted by the essential-core fixed point"
        )
    support = set(W.words_up_to(shift.arity, height - 1)) | set(u.support)
    solution = solve_labeling(shift, support, dict(u.labels))
    if solution is None:
        raise OutsideEssentialCore("no core completion exists for this pattern")
    return Pattern(shift.arity, solution)


# ---------------------------------------------------------------------------
# Block enumeration and exact counting


def _levels_to_pattern(arity: int, levels: tuple[tuple[str, ...], ...]) -> Pattern:
    labels: dict[str, str] = {}
    for k, row in enumerate(levels):
        for w, sym in zip(W.words_of_length(arity, k), row):
            labels[w] = sym
    return Pattern(arity, labels)


def _merge_levels(root: str, children: tuple, height: int) -> tuple:
    levels = [(root,)]
    for k in range(height - 1):
        row: list[str] = []
        for ch in children:
            row.extend(ch[k])
        levels.append(tuple(row))
    return tuple(levels)


def _finite_type_blocks(shift, n: int, core_only: bool) -> list[tuple]:
    view = one_step_view(shift)
    if core_only:
        core = essential_core(shift)
        cells, symbols = core.cells, list(core.symbols)
    else:
        cells, symbols = view.allowed, list(shift.alphabet)
    cells_by_parent: dict[str, list] = {a: [] for a in symbols}
    for c in sorted(cells):
        cells_by_parent[c[0]].append(c)

    memo: dict[tuple[str, int], list[tuple]] = {}

    def blocks_rooted(a: str, h: int) -> list[tuple]:
        key = (a, h)
        if key in memo:
            return memo[key]
        if h == 1:
            out = [((a,),)]
        else:
            out = []
            for cell in cells_by_parent[a]:
                for combo in product(*(blocks_rooted(b, h - 1) for b in cell[1:])):
                    out.append(_merge_levels(a, combo, h))
        memo[key] = out
        return out

    result: list[tuple] = []
    for a in symbols:
        result.extend(blocks_rooted(a, n))
    return result


def _unfold_recoded_block(shift, code, rec_block: Pattern, n: int) -> Pattern:
    m = code.window
    name_to_block = {name: blk for blk, name in code.table.items()}
    labels: dict[str, str] = {}
    for w in rec_block.support:
        window_block = name_to_block[rec_block[w]]
        for y in window_block.support:
            labels.setdefault(w + y, window_block[y])
    keep = {w: labels[w] for w in labels if len(w) <= n - 1}
    return Pattern(shift.arity, keep)


def enumerate_blocks(shift, n: int, limit: Optional[int] = None,
                     core_only: bool = True) -> list[Pattern]:
    """All admissible height-n blocks, canonically ordered.

    With ``core_only`` (the default) every label lies in the essential core,
    so the list matches the true block set of the shift; without it the list
    is the locally admissible blocks (used by the higher-block recoding).
    """
    if n < 1:
        raise ValueError("height must be >= 1")
    if isinstance(shift, FINITE_TYPE_KINDS):
        raw = _finite_type_blocks(shift, n, core_only)
        if limit is not None and len(raw) > limit:
            raise LimitExceeded(f"{len(raw)} blocks exceed the cap {limit}")
        order = {a: i for i, a in enumerate(shift.alphabet)}
        raw.sort(key=lambda lv: [order[s] for row in lv for s in row])
        return [_levels_to_pattern(shift.arity, lv) for lv in raw]
    if isinstance(shift, LevelConstantShift):
        if limit is not None and len(shift.alphabet) ** n > limit:
            raise LimitExceeded("level-word count exceeds the cap")
        out = []
        for seq in product(shift.alphabet, repeat=n):
            levels = tuple(
                tuple(seq[k] for _ in range(shift.arity**k)) for k in range(n)
            )
            out.append(_levels_to_pattern(shift.arity, levels))
        return out
    if isinstance(shift, ForbiddenSetShift):
        return _forbidden_blocks(shift, n, limit, core_only)
    if isinstance(shift, SoficImageShift):
        return image_blocks(shift.code, n, limit=limit)
    raise SchemaError(f"unknown shift kind {shift.kind!r}")


def _raw_window_blocks(shift: ForbiddenSetShift, m: int) -> list[Pattern]:
    """Locally admissible m-blocks by direct backtracking (recoding alphabet)."""
    support = W.words_up_to(shift.arity, m - 1)
    out: list[Pattern] = []
    labels: dict[str, str] = {}

    def backtrack(i):
        if i == len(support):
            out.append(Pattern(shift.arity, dict(labels)))
            return
        w = support[i]
        for a in shift.alphabet:
            labels[w] = a
            if not _forbidden_embeds(shift, labels):
                backtrack(i + 1)
            del labels[w]

    backtrack(0)
    return out


def _forbidden_blocks(shift, n, limit, core_only):
    if not core_only:
        if n == shift.window:
            return _raw_window_blocks(shift, n)
        raise SchemaError("raw enumeration of forbidden-set shifts is window-height only")
    vertex, code = recode_to_vertex(shift)
    m = code.window
    if n >= m:
        rec = enumerate_blocks(vertex, n - m + 1, limit=limit)
        blocks = [_unfold_recoded_block(shift, code, rb, n) for rb in rec]
    else:
        rec = enumerate_blocks(vertex, 1, limit=limit)
        seen: dict[Pattern, None] = {}
        for rb in rec:
            seen.setdefault(_unfold_recoded_block(shift, code, rb, n))
        blocks = list(seen)
    order = {a: i for i, a in enumerate(shift.alphabet)}
    blocks.sort(key=lambda p: [order[p[w]] for w in p.support])
    if limit is not None and len(blocks) > limit:
        raise LimitExceeded(f"{len(blocks)} blocks exceed the cap {limit}")
    return blocks


@dataclass(frozen=True)
class BlockCount:
    per_root: dict[str, int]
    total: int


def count_blocks(shift, n: int, sofic_cap: int = 200_000) -> BlockCount:
    """Exact per-root-symbol block counts via the product recurrence."""
    if n < 1:
        raise ValueError("height must be >= 1")
    if isinstance(shift, FINITE_TYPE_KINDS):
        core = essential_core(shift)
        counts = {a: 1 for a in core.symbols}
        for _ in range(n - 1):
            nxt = {a: 0 for a in core.symbols}
            for cell in core.cells:
                term = 1
                for b in cell[1:]:
                    term *= counts[b]
                nxt[cell[0]] += term
            counts = nxt
        per_root = {a: counts.get(a, 0) for a in shift.alphabet}
        return BlockCount(per_root, sum(per_root.values()))
    if isinstance(shift, LevelConstantShift):
        k = len(shift.alphabet)
        per_root = {a: k ** (n - 1) for a in shift.alphabet}
        return BlockCount(per_root, k**n)
    if isinstance(shift, ForbiddenSetShift):
        vertex, code = recode_to_vertex(shift)
        m = code.window
        if n >= m:
            rec = count_blocks(vertex, n - m + 1)
            roots = {name: blk[W.EPSILON] for blk, name in code.table.items()}
            per_root = {a: 0 for a in shift.alphabet}
            for name, cnt in rec.per_root.items():
                per_root[roots[name]] += cnt
            return BlockCount(per_root, sum(per_root.values()))
        blocks = enumerate_blocks(shift, n)
        per_root = {a: 0 for a in shift.alphabet}
        for b in blocks:
            per_root[b[W.EPSILON]] += 1
        return BlockCount(per_root, len(blocks))
    if isinstance(shift, SoficImageShift):
        try:
            blocks = image_blocks(shift.code, n, limit=sofic_cap)
        except LimitExceeded as exc:
            raise CapExceeded(str(exc)) from exc
        per_root = {a: 0 for a in shift.alphabet}
        for b in blocks:
            per_root[b[W.EPSILON]] += 1
        return BlockCount(per_root, len(blocks))
    raise SchemaError(f"unknown shift kind {shift.kind!r}")
