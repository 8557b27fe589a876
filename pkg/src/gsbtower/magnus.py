"""Constructors that turn one-relator parameters into stable-letter towers
with embedding maps, plus the two-generator embedding theorems.

The common mechanism is conjugate-generator rewriting: mapping
x -> a b^-q, y -> b^p (exponent sums divided by their gcd) kills the
b-exponent of the relator, which then rewrites over the conjugates
a_i = b^i a b^-i.  A conjugate occurring exactly once is eliminated by
solving the relator for it, leaving a free base; b becomes a stable
letter whose relations are the links a_{i+1} b = b a_i, with the solved
word substituted at the eliminated index.  Depth 2 and 3 iterate the idea
through the conjugates y_i = x^i y x^-i.

Left-side families that absorb a power of the stable letter in front of a
variable subword cannot be derived by the generic pipeline (their fixed
part would cross the slot); those interleaved schemas are built here from
the conjugation tables of the level below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .group import Presentation
from .orders import DegLex, FirstTower
from .rewrite import Rule, RuleSchema, RewriteSystem, Slot, SlotGen, is_gsb
from .tower import (BaseLevel, EmbeddingMap, StableRelation, Tower,
                    TowerError, TowerLevel)
from .words import (EMPTY, Letter, Symbol, Word, free_reduce, inverse, neg,
                    pos, power, signed_letters, substitute, sym)


class UnsupportedCase(ValueError):
    """The parameter pattern falls outside the covered constructions."""


# --- parameters and case analysis ------------------------------------------

@dataclass(frozen=True)
class DepthParams:
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if not 1 <= len(self.pairs) <= 3:
            raise UnsupportedCase("depth must be 1, 2 or 3")
        for n, m in self.pairs:
            if n == 0 or m == 0:
                raise UnsupportedCase("exponents must be nonzero")

    @property
    def depth(self) -> int:
        return len(self.pairs)

    @property
    def alpha(self) -> int:
        return sum(n for n, _ in self.pairs)

    @property
    def beta(self) -> int:
        return sum(m for _, m in self.pairs)

    def relator(self, x: Symbol, y: Symbol) -> Word:
        w: Word = EMPTY
        for n, m in self.pairs:
            w = w + power((pos(x),), n) + power((pos(y),), m)
        return free_reduce(w)

    def conjugate_indices(self, reduce_gcd: bool = True) -> List[Tuple[int, int]]:
        """The relator rewritten over a_i = b^i a b^-i after the zero-sum
        substitution x -> a b^-q, y -> b^p: a list of (index, sign)."""
        a, b = self.alpha, self.beta
        if a == 0:
            raise UnsupportedCase("x-exponent sum vanishes; no "
                                  "conjugate rewriting of this form")
        d = math.gcd(abs(a), abs(b)) if reduce_gcd else 1
        p, q = a // d, b // d
        out: List[Tuple[int, int]] = []
        cum = 0
        for n, m in self.pairs:
            step = 1 if n > 0 else -1
            for _ in range(abs(n)):
                if step < 0:
                    cum += q
                out.append((cum, step))
                if step > 0:
                    cum -= q
            cum += p * m
        if cum != 0:
            raise AssertionError("conjugate rewriting left a b-power")
        return out

    def index_sets(self, reduce_gcd: bool = True) -> List[List[int]]:
        """Per-block index lists of the rewritten relator."""
        idx = self.conjugate_indices(reduce_gcd)
        sets: List[List[int]] = []
        i = 0
        for n, _ in self.pairs:
            sets.append([c for c, _ in idx[i:i + abs(n)]])
            i += abs(n)
        return sets

    @property
    def low(self) -> int:
        return min(c for c, _ in self.conjugate_indices())

    @property
    def high(self) -> int:
        return max(c for c, _ in self.conjugate_indices())


@dataclass(frozen=True)
class CaseTag:
    kind: str
    data: tuple = ()
    explanation: str = ""

    def __str__(self):
        return self.kind + (f" ({self.explanation})" if self.explanation else "")


def classify(params: DepthParams) -> CaseTag:
    """Deterministic case analysis; unsupported tags explain themselves."""
    if params.depth == 1:
        return CaseTag("depth1")
    if params.alpha == 0:
        return CaseTag("zero_sum")
    if params.beta == 0:
        return CaseTag("unsupported", (),
                       "y-exponent sum vanishes while the x-sum does not; "
                       "swap the generators and retry")
    idx = [c for c, _ in params.conjugate_indices()]
    counts: Dict[int, int] = {}
    for c in idx:
        counts[c] = counts.get(c, 0) + 1
    singletons = sorted(c for c, k in counts.items() if k == 1)
    if singletons:
        lo, hi = min(idx), max(idx)
        s = lo if lo in singletons else (hi if hi in singletons
                                         else singletons[0])
        return CaseTag("free_base", (s,),
                       f"conjugate index {s} occurs once in the relator")
    if params.depth == 2:
        (n1, m1), (n2, m2) = params.pairs
        if n1 == n2 and m1 == m2 and n1 > 0 and m1 > 0:
            return CaseTag("square", (), "the rewritten relator is a square")
        return CaseTag("unsupported", (),
                       "no conjugate occurs exactly once and the relator "
                       "is not the covered square shape")
    sub = _abuc_subcase(params)
    if sub is not None:
        return sub
    return CaseTag("unsupported", (),
                   "no conjugate occurs exactly once and the index sets "
                   "are not the covered A = B u C shape")


def _abuc_subcase(params: DepthParams) -> Optional[CaseTag]:
    if any(n <= 0 for n, _ in params.pairs) or \
       any(m <= 0 for _, m in params.pairs):
        return CaseTag("unsupported", (),
                       "the A = B u C construction assumes positive powers")
    A, B, C = params.index_sets(reduce_gcd=False)
    if set(A) != set(B) | set(C):
        return None
    n1 = len(A)
    step = params.beta
    if A != [-j * step for j in range(n1)]:
        return None
    for s in range(1, n1):
        if B == [-j * step for j in range(s, n1)] and \
           C == [-j * step for j in range(0, s)]:
            return CaseTag("a_equals_b_union_c", (1, s), f"split at s = {s}")
    return CaseTag("unsupported", (),
                   "A = B u C holds but not in the first covered form; "
                   "the remaining subcases are not constructed")


# --- shared machinery -------------------------------------------------------

def _a(i: int) -> Symbol:
    return sym("a", i)


def _flip(w: Word, s: Symbol) -> Word:
    return tuple(l.inverse() if l.sym == s else l for l in w)


def _solve_once(relator: Word, target: Symbol) -> Word:
    """Solve relator = 1 for its unique occurrence of target."""
    hits = [k for k, l in enumerate(relator) if l.sym == target]
    if len(hits) != 1:
        raise TowerError(f"{target} does not occur exactly once")
    k = hits[0]
    w = free_reduce(inverse(relator[:k]) + inverse(relator[k + 1:]))
    return w if relator[k].sign > 0 else inverse(w)


def _occurrence(w: Word, s: Symbol) -> int:
    for k, l in enumerate(w):
        if l.sym == s:
            return k
    raise TowerError(f"no occurrence of {s} for a distinguishing letter")


def _chain_relations(lo: int, hi: int, s: int, w_s: Word,
                     b: Letter) -> List[StableRelation]:
    """The links a_{i+1} b = b a_i for lo <= i < hi with the solved word
    substituted for the eliminated conjugate a_s.  A side carrying the
    solved word takes its a_lo (left) or a_hi (right) occurrence as the
    distinguishing letter, the only symbols not used by the plain links."""
    def img(i: int) -> Word:
        return w_s if i == s else (pos(_a(i)),)

    rels = []
    for i in range(lo, hi):
        aw, bw = img(i + 1), img(i)
        xpos = _occurrence(aw, _a(lo)) if i + 1 == s else 0
        ypos = _occurrence(bw, _a(hi)) if i == s else 0
        rels.append(StableRelation(b, aw, bw, xpos, ypos))
    return rels


def _conjugation_tables(relations: Sequence[StableRelation]):
    """Letter-level conjugation tables of a stable letter p from its
    relations A_i p = p B_i: down(u) = p^-1 u p, up(u) = p u p^-1.

    Single-letter sides give direct entries; a composite side is solved
    for a single unknown letter when possible, and otherwise its unknown
    prefix becomes a composite generator carried with its image."""
    down: Dict[Letter, Word] = {}
    up: Dict[Letter, Word] = {}
    comp_down: List[Tuple[Word, Word]] = []
    comp_up: List[Tuple[Word, Word]] = []

    def enter(table, l: Letter, image: Word):
        if l.sign < 0:
            l, image = l.inverse(), inverse(image)
        table.setdefault(l, image)

    for rel in relations:
        if len(rel.a) == 1:
            enter(down, rel.a[0], rel.b)
        if len(rel.b) == 1:
            enter(up, rel.b[0], rel.a)
    for _ in range(4):
        progress = False
        for rel in relations:
            for table, comp, src, val in ((down, comp_down, rel.a, rel.b),
                                          (up, comp_up, rel.b, rel.a)):
                if len(src) > 1:
                    progress |= _solve_composite(table, comp, src, val)
        if not progress:
            break
    return down, up, comp_down, comp_up


def _solve_composite(table, comp, src: Word, val: Word) -> bool:
    def known(l: Letter) -> bool:
        return (l if l.sign > 0 else l.inverse()) in table

    unknown = [k for k, l in enumerate(src) if not known(l)]
    if not unknown:
        return False
    if len(unknown) == 1:
        k = unknown[0]
        pre = substitute(src[:k], table)
        post = substitute(src[k + 1:], table)
        if pre is None or post is None:
            return False
        img = free_reduce(inverse(pre) + val + inverse(post))
        l = src[k]
        if l.sign < 0:
            l, img = l.inverse(), inverse(img)
        table[l] = img
        return True
    for cand, v in ((src, val), (inverse(src), inverse(val))):
        cut = len(cand)
        while cut > 0 and known(cand[cut - 1]):
            cut -= 1
        if cut == len(cand):
            continue
        gamma, tail = cand[:cut], cand[cut:]
        tail_img = substitute(tail, table)
        if tail_img is None:
            continue
        if not any(g == gamma for g, _ in comp):
            comp.append((gamma, free_reduce(v + inverse(tail_img))))
            return True
    return False


def _iterate_image(first: Word, letter_table, times: int) -> Optional[Word]:
    w: Optional[Word] = first
    for _ in range(times):
        if w is None:
            return None
        w = substitute(w, letter_table)
    return w


def _interleaved_schema(head: Letter, j: int, tail_base: Word, p: Letter,
                        rhs_fix: Word, gens: Sequence[Tuple[Word, Word]],
                        letter_table, context, tag: str) -> RuleSchema:
    """The absorbed form of a left side headed by a power of a stable
    letter: head V1 head V2 ... head V_{j+1} tail p.  Slot number s only
    admits generators whose conjugation image survives s iterations and
    maps through exactly s of them on the right."""
    slots = []
    for s in range(1, j + 2):
        slotgens = []
        for g, img1 in gens:
            img = _iterate_image(img1, letter_table, s - 1)
            if img is None:
                continue
            slotgens.append(SlotGen(g, img, free_reduce(g),
                                    free_reduce(inverse(g))))
        slots.append(Slot(f"V{s}", tuple(slotgens)))
    fixed = [(head,)] * (j + 1) + [tail_base + (p,)]
    rfixed = [EMPTY] * (j + 1) + [free_reduce(rhs_fix)]
    return RuleSchema(fixed=tuple(fixed), slots=tuple(slots),
                      rfixed=tuple(rfixed), rslots=tuple(range(j + 1)),
                      tag=tag, context=context)


def _xy() -> Tuple[Symbol, Symbol]:
    return sym("x"), sym("y")


def _a_ranking(lo: int, hi: int, skip=()) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for i in range(hi, lo - 1, -1):
        if i in skip:
            continue
        out.extend((pos(_a(i)), neg(_a(i))))
    return tuple(out)


def _finish_map(src, tower, assignment, section, flips, notes,
                degenerate=False, source_rules=None) -> EmbeddingMap:
    for s in flips:
        assignment[s] = inverse(assignment[s])
        if section:
            section = {k: _flip(w, s) for k, w in section.items()}
    return EmbeddingMap(src, tower, dict(assignment), section,
                        source_rules=source_rules, notes=tuple(notes),
                        degenerate=degenerate)


# --- depth 1 ----------------------------------------------------------------

def embed_depth1(n1: int, m1: int) -> Tuple[Tower, EmbeddingMap]:
    """The tower of gp< x, y | x^n1 y^m1 = 1 >.

    Exponents are normalized positive by inverting generators (recorded);
    the pair is then divided by its gcd, which keeps the conjugate
    alphabet as small as the worked normal-form examples use.  n1 = 1
    degenerates: the relator eliminates x and the group is free of rank
    one, returned as a bare base level flagged degenerate."""
    x, y = _xy()
    src = Presentation((x, y), (DepthParams(((n1, m1),)).relator(x, y),))
    notes: List[str] = []
    flips: List[Symbol] = []
    if n1 < 0:
        n1 = -n1
        flips.append(x)
        notes.append("normalized n1 > 0 by inverting x")
    if m1 < 0:
        m1 = -m1
        flips.append(y)
        notes.append("normalized m1 > 0 by inverting y")
    b = sym("b")
    B = pos(b)
    if n1 == 1:
        tower = Tower(BaseLevel((b,), signed_letters((b,))), (),
                      name="depth1-degenerate")
        notes.append("n1 = 1: the relator eliminates x; free of rank one")
        return tower, _finish_map(src, tower,
                                  {x: power((B,), -m1), y: (B,)},
                                  {b: (pos(y),)}, flips, notes,
                                  degenerate=True)
    g = math.gcd(n1, m1)
    q, t = m1 // g, n1 // g
    if g > 1:
        notes.append(f"divided (n1, m1) by gcd {g}: x -> a_0 b^-{q}, "
                     f"y -> b^{t}")
    lo = -(n1 - 1) * q
    w_s = inverse(tuple(pos(_a(-k * q)) for k in range(n1 - 1)))
    rels = _chain_relations(lo, 0, lo, w_s, B)
    base = BaseLevel(tuple(_a(i) for i in range(lo + 1, 1)),
                     _ranking_ascending(lo + 1, 0))
    level = TowerLevel((b,), tuple(rels), "first", (B.inverse(), B))
    tower = Tower(base, (level,), name=f"depth1({n1},{m1})")
    assignment = {x: (pos(_a(0)),) + power((B,), -q), y: power((B,), t)}
    section = None
    if t == 1:
        section = {b: (pos(y),)}
        for i in range(lo + 1, 1):
            section[_a(i)] = free_reduce(power((pos(y),), i) + (pos(x),)
                                         + power((pos(y),), q - i))
    return tower, _finish_map(src, tower, assignment, section, flips, notes)


def _ranking_ascending(lo: int, hi: int, skip=()) -> Tuple[Letter, ...]:
    out: List[Letter] = []
    for i in range(lo, hi + 1):
        if i in skip:
            continue
        out.extend((pos(_a(i)), neg(_a(i))))
    return tuple(out)


# --- depth 2 / 3 dispatch ---------------------------------------------------

def embed_depth2(params: DepthParams) -> Tuple[Tower, EmbeddingMap]:
    if params.depth != 2:
        raise UnsupportedCase("embed_depth2 wants depth-2 parameters")
    params, flips, notes = _normalize_head(params)
    tag = classify(params)
    if tag.kind == "zero_sum":
        return _embed_zero_sum2(params, flips, notes)
    if tag.kind == "free_base":
        return _embed_free_base(params, tag.data[0], flips, notes)
    if tag.kind == "square":
        return _embed_square(params, flips, notes)
    raise UnsupportedCase(str(tag))


def embed_depth3(params: DepthParams) -> Tuple[Tower, EmbeddingMap]:
    if params.depth != 3:
        raise UnsupportedCase("embed_depth3 wants depth-3 parameters")
    if params.alpha == 0:
        return _embed_zero_sum3(params)
    params, flips, notes = _normalize_head(params)
    tag = classify(params)
    if tag.kind == "free_base":
        return _embed_free_base(params, tag.data[0], flips, notes)
    if tag.kind == "a_equals_b_union_c":
        return _embed_abuc(params, tag.data[1], flips, notes)
    raise UnsupportedCase(str(tag))


def _normalize_head(params: DepthParams):
    x, _ = _xy()
    notes: List[str] = []
    flips: List[Symbol] = []
    if params.pairs[0][0] < 0:
        params = DepthParams(tuple((-n, m) for n, m in params.pairs))
        flips.append(x)
        notes.append("normalized n1 > 0 by inverting x")
    return params, flips, notes


# --- the free-base construction (singleton conjugate) -----------------------

def _embed_free_base(params: DepthParams, s: int, flips, notes):
    x, y = _xy()
    src = Presentation((x, y), (params.relator(x, y),))
    d = math.gcd(abs(params.alpha), abs(params.beta))
    p, q = params.alpha // d, params.beta // d
    if d > 1:
        notes.append(f"divided (alpha, beta) by gcd {d}")
    idx = params.conjugate_indices()
    relator_a = tuple(Letter(_a(c), sg) for c, sg in idx)
    lo, hi = params.low, params.high
    w_s = _solve_once(relator_a, _a(s))
    notes.append(f"eliminated the conjugate a_{s}, which occurs once")
    B = pos(sym("b"))
    rels = _chain_relations(lo, hi, s, w_s, B)
    base = BaseLevel(tuple(_a(i) for i in range(lo, hi + 1) if i != s),
                     _ranking_ascending(lo, hi, skip=(s,)))
    level = TowerLevel((B.sym,), tuple(rels), "first", (B.inverse(), B))
    tower = Tower(base, (level,), name=f"free-base-depth{params.depth}")
    img_a0 = w_s if s == 0 else (pos(_a(0)),)
    assignment = {x: free_reduce(img_a0 + power((B,), -q)),
                  y: power((B,), p)}
    return tower, _finish_map(src, tower, assignment, None, flips, notes)


# --- the zero-sum constructions ----------------------------------------------

def _pair_magnus(blocks: Sequence[Tuple[Letter, int]], u: Symbol, z: Symbol):
    """Rewrite a relator given as letter blocks over the conjugates of a
    fresh generator a with respect to a fresh stable letter b, after
    u -> a b^-q, z -> b^p.  Spectator letters must sit at b-offset zero,
    which they do here because the spectator block leads the relator."""
    e_u = sum(e for l, e in blocks if l.sym == u)
    e_z = sum(e for l, e in blocks if l.sym == z)
    g = math.gcd(abs(e_u), abs(e_z))
    p, q = e_u // g, e_z // g
    b = pos(sym("b"))
    out: List[Letter] = []
    cum = 0
    for l, e in blocks:
        if l.sym == u:
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                if step < 0:
                    cum += q
                out.append(Letter(_a(cum), step))
                if step > 0:
                    cum -= q
        elif l.sym == z:
            cum += p * e
        else:
            if cum != 0:
                raise TowerError("spectator letter at nonzero b-offset")
            out.extend(power((l,), e))
    if cum != 0:
        raise AssertionError("pair rewriting left a b-power")
    return tuple(out), p, q, (pos(_a(0)),) + power((b,), -q), power((b,), p)


def _embed_zero_sum2(params: DepthParams, flips, notes):
    x, y = _xy()
    src = Presentation((x, y), (params.relator(x, y),))
    (n1, m1), (_, m2) = params.pairs
    yblocks = [(pos(sym("y", n1)), m1), (pos(sym("y", 0)), m2)]
    tower, y_img = _zero_sum_tower(n1, yblocks, notes,
                                   name=f"depth2-zero-sum{params.pairs}")
    assignment = {x: (pos(sym("x")),), y: y_img}
    return tower, _finish_map(src, tower, assignment, None, flips, notes)


def _embed_zero_sum3(params: DepthParams):
    x, y = _xy()
    src = Presentation((x, y), (params.relator(x, y),))
    blocks = list(params.pairs)
    flips: List[Symbol] = []
    notes: List[str] = []
    arranged = _arrange_blocks(blocks)
    if arranged is None:
        blocks = [(-n, m) for n, m in blocks]
        flips.append(x)
        notes.append("inverted x to reach an arrangeable block pattern")
        arranged = _arrange_blocks(blocks)
        if arranged is None:
            raise UnsupportedCase("no block arrangement with two leading "
                                  "positive x-runs exists")
    blocks, how = arranged
    if how:
        notes.append(how)
    (n1, m1), (n2, m2), (_, m3) = blocks
    k = n1 + n2
    yblocks = [(pos(sym("y", n1)), m1), (pos(sym("y", k)), m2),
               (pos(sym("y", 0)), m3)]
    tower, y_img = _zero_sum_tower(k, yblocks, notes,
                                   name=f"depth3-zero-sum{tuple(blocks)}")
    assignment = {x: (pos(sym("x")),), y: y_img}
    return tower, _finish_map(src, tower, assignment, None, flips, notes)


def _arrange_blocks(blocks):
    """Rotate (and possibly invert) the relator so the first two x-runs
    are positive; rotations and inversion present the same group."""
    for r in range(3):
        cand = blocks[r:] + blocks[:r]
        if cand[0][0] > 0 and cand[0][0] + cand[1][0] > 0:
            how = f"rotated the relator by {r} blocks" if r else ""
            return cand, how
    inv = [(-blocks[2][0], -blocks[1][1]),
           (-blocks[1][0], -blocks[0][1]),
           (-blocks[0][0], -blocks[2][1])]
    for r in range(3):
        cand = inv[r:] + inv[:r]
        if cand[0][0] > 0 and cand[0][0] + cand[1][0] > 0:
            return cand, f"inverted the relator and rotated by {r} blocks"
    return None


def _zero_sum_tower(k: int, yblocks, notes, name: str):
    """The shared zero-sum machinery over the conjugates y_i = x^i y x^-i:
    the top conjugate y_k and y_0 go through the pair rewriting (or the
    relator solves y_k outright when its exponent has modulus one), then
    x is adjoined with the link relations y_{i+1} x = x y_i."""
    X = pos(sym("x"))
    yk, y0 = sym("y", k), sym("y", 0)
    spectators = tuple(sym("y", i) for i in range(k - 1, 0, -1))
    e_top = next(e for l, e in yblocks if l.sym == yk)

    if abs(e_top) == 1:
        relator_y = free_reduce(
            sum((power((l,), e) for l, e in yblocks), EMPTY))
        img_top = _solve_once(relator_y, yk)
        img_bot: Word = (pos(y0),)
        notes.append("the top conjugate solves outright; no b level needed")
        base_syms = spectators + (y0,)
        base = BaseLevel(base_syms, signed_letters(base_syms))
        levels: List[TowerLevel] = []
        tables = None
    else:
        relator_a, p, q, img_top, img_bot = _pair_magnus(yblocks, yk, y0)
        a_idx = [l.sym.indices[0] for l in relator_a if l.sym.name == "a"]
        lo, hi = min(a_idx), max(a_idx)
        w_s = _solve_once(relator_a, _a(lo))
        B = pos(sym("b"))
        rels = _chain_relations(lo, hi, lo, w_s, B)
        base_syms = spectators + tuple(_a(i) for i in range(hi, lo, -1))
        # the solved word mixes spectators into the conjugate letters, so
        # base words compare by their conjugate-letter count first
        base_order = FirstTower(DegLex(signed_letters(spectators)),
                                _ranking_ascending(lo + 1, hi))
        base = BaseLevel(base_syms,
                         signed_letters(spectators)
                         + _ranking_ascending(lo + 1, hi),
                         order=base_order)
        levels = [TowerLevel((B.sym,), tuple(rels), "second",
                             (B.inverse(), B))]
        tables = _conjugation_tables(rels)

    def img(i: int) -> Word:
        if i == k:
            return img_top
        if i == 0 and tables is not None:
            return img_bot
        return (pos(sym("y", i)),)

    xrels: List[StableRelation] = []
    for i in range(0, k):
        aw, bw = img(i + 1), img(i)
        if i + 1 == k:
            xpos = (len(aw) - 1) if tables is not None \
                else _occurrence(aw, y0)
        else:
            xpos = 0
        xrels.append(StableRelation(X, aw, bw, xpos, 0))

    schemas: List[RuleSchema] = []
    if tables is not None:
        down, up, comp_down, comp_up = tables
        gens_up = [((l,), im) for l, im in up.items()] + comp_up
        gens_down = [((l,), im) for l, im in down.items()] + comp_down
        context = Tower(base, levels, name=name + "-partial").system()
        top, bot = xrels[-1], xrels[0]
        # absorbed family for the top link: head = (A-dist)^-1, tail A'^-1
        head = top.a[-1].inverse()
        tail = free_reduce(inverse(top.a[:-1]))
        j = _leading_power(tail, head)
        if j > 0:
            gens, table = (gens_up, up) if head.sign > 0 else (gens_down, down)
            schemas.append(_interleaved_schema(
                head, j, tail[j:], X, (X,) + inverse(top.b),
                gens, table, context, tag="absorbed-top"))
        # absorbed family for the bottom link: head = B-dist, tail B''
        head = bot.b[0]
        tail = bot.b[1:]
        j = _leading_power(tail, head)
        if j > 0:
            gens, table = (gens_up, up) if head.sign > 0 else (gens_down, down)
            schemas.append(_interleaved_schema(
                head, j, tail[j:], X.inverse(), (X.inverse(),) + bot.a,
                gens, table, context, tag="absorbed-bottom"))
    xlevel = TowerLevel((X.sym,), tuple(xrels), "first", (X.inverse(), X),
                        tuple(schemas))
    tower = Tower(base, levels + [xlevel], name=name)
    return tower, img(0)


def _leading_power(w: Word, head: Letter) -> int:
    j = 0
    while j < len(w) and w[j] == head:
        j += 1
    return j


# --- depth 2, square relator -------------------------------------------------

def _embed_square(params: DepthParams, flips, notes):
    x, y = _xy()
    src = Presentation((x, y), (params.relator(x, y),))
    d = math.gcd(abs(params.alpha), abs(params.beta))
    alpha, step = params.alpha // d, params.beta // d
    if d > 1:
        notes.append(f"divided (alpha, beta) by gcd {d}")
    n1 = params.pairs[0][0]
    A = {-j * step for j in range(n1)}
    lo, hi = -(n1 - 1) * step, 0
    c = sym("c", involutory=True)
    ds = {i: sym("d", i) for i in range(1, n1)}
    C = pos(c)

    def phi(i: int) -> Word:
        if i == 0:
            return (C,) + tuple(neg(ds[j]) for j in range(n1 - 1, 0, -1))
        if i in A:
            return (pos(ds[-i // step]),)
        return (pos(_a(i)),)

    B = pos(sym("b"))
    rels = [StableRelation(B, phi(i + 1), phi(i), 0, 0)
            for i in range(lo, hi)]
    a_syms = tuple(_a(i) for i in range(hi, lo - 1, -1) if i not in A)
    base_syms = (c,) + tuple(ds[i] for i in range(n1 - 1, 0, -1)) + a_syms
    ranking = (C,) + sum((
        (neg(ds[i]), pos(ds[i])) for i in range(n1 - 1, 0, -1)), ()) + \
        sum(((pos(s), neg(s)) for s in a_syms), ())
    base = BaseLevel(base_syms, ranking)
    level = TowerLevel((B.sym,), tuple(rels), "first", (B.inverse(), B))
    tower = Tower(base, (level,), name=f"depth2-square{params.pairs}")
    notes.append("the rewritten relator is a square; its root becomes an "
                 "involutory generator")
    assignment = {x: free_reduce(phi(0) + power((B,), -step)),
                  y: power((B,), alpha)}
    return tower, _finish_map(src, tower, assignment, None, flips, notes)


# --- depth 3, A = B u C first form -------------------------------------------

def _embed_abuc(params: DepthParams, s: int, flips, notes):
    x, y = _xy()
    src = Presentation((x, y), (params.relator(x, y),))
    alpha, step = params.alpha, params.beta
    n1 = params.pairs[0][0]
    A = {-j * step for j in range(n1)}
    lo, hi = -(n1 - 1) * step, 0
    c, d = sym("c"), sym("d")
    ds = {i: sym("d", i) for i in range(1, n1 - 1)}
    C, D = pos(c), pos(d)

    def phi(i: int) -> Word:
        if i == 0:
            return (C, D.inverse()) + tuple(neg(ds[j])
                                            for j in range(s - 1, 0, -1))
        if i == -s * step:
            return (D,) + tuple(neg(ds[j]) for j in range(n1 - 2, s - 1, -1))
        if i in A:
            j = -i // step
            return (pos(ds[j]),) if j <= s - 1 else (pos(ds[j - 1]),)
        return (pos(_a(i)),)

    B = pos(sym("b"))
    rels = []
    for i in range(lo, hi):
        aw, bw = phi(i + 1), phi(i)
        xpos = _occurrence(aw, d) if i + 1 == 0 else 0
        ypos = _occurrence(bw, d) if i == -s * step else 0
        if i + 1 == -s * step:
            # the natural link would head with d and collide with the
            # c-link; the composite relation below replaces it
            continue
        rels.append(StableRelation(B, aw, bw, xpos, ypos))
    if s <= n1 - 2:
        aw = (C,) + tuple(neg(ds[j]) for j in range(n1 - 2, s - 1, -1))
        bw = tuple(pos(_a(-j * step - 1)) for j in range(0, s + 1))
        rels.append(StableRelation(B, aw, bw, 1, len(bw) - 1))

    a_syms = tuple(_a(i) for i in range(hi, lo - 1, -1) if i not in A)
    base_syms = tuple(ds[i] for i in range(n1 - 2, 0, -1)) + a_syms + (c,)
    ranking = sum(((pos(ds[i]), neg(ds[i]))
                   for i in range(n1 - 2, 0, -1)), ()) + \
        sum(((pos(sm), neg(sm)) for sm in a_syms), ()) + (C, C.inverse())
    base = BaseLevel(base_syms, ranking)
    dlevel = TowerLevel((d,), (StableRelation(D, (C,), (C.inverse(),), 0, 0),),
                        "first", (D.inverse(), D))
    blevel = TowerLevel((B.sym,), tuple(rels), "first", (B.inverse(), B))
    tower = Tower(base, (dlevel, blevel), name=f"depth3-abuc{params.pairs}")
    assignment = {x: free_reduce(phi(0) + power((B,), -step)),
                  y: power((B,), alpha)}
    return tower, _finish_map(src, tower, assignment, None, flips, notes)


# --- the two-generator embedding theorems ------------------------------------

def _checked_source(src: Presentation, src_rules: Sequence[Rule]):
    system = RewriteSystem(list(src_rules), src.default_order())
    verdict = is_gsb(system)
    if not verdict.is_basis:
        raise UnsupportedCase(
            "the source rule set is not a verified basis: " + verdict.status)
    return system


def embed_two_gen_nn(src: Presentation,
                     src_rules: Sequence[Rule]) -> Tuple[Tower, EmbeddingMap]:
    """Embed gp< X | S > into the two-generator group built from a and b
    through the tower with stable letters t_i (the odd conjugates of a)
    and t; the generator x_i maps to the commutator of a_0 with t_i."""
    _checked_source(src, src_rules)
    n = len(src.generators)
    if n == 0:
        raise UnsupportedCase("the source needs at least one generator")
    a_syms = tuple(_a(-2 * i + 2) for i in range(1, n + 1))
    t_syms = tuple(sym("t", i) for i in range(1, n + 1))
    t = sym("t")
    T = pos(t)
    base = BaseLevel(a_syms + src.generators,
                     signed_letters(a_syms) + signed_letters(src.generators),
                     rules=tuple(src_rules))
    lvl1 = TowerLevel(
        t_syms,
        tuple(StableRelation(pos(t_syms[i - 1]), (pos(_a(0)),),
                             (pos(_a(0)), pos(src.generators[i - 1])), 0, 0)
              for i in range(1, n + 1)),
        "first", signed_letters(t_syms))
    rels2 = [StableRelation(T, (pos(a_syms[i - 1]),), (pos(t_syms[i - 1]),),
                            0, 0) for i in range(1, n + 1)]
    rels2 += [StableRelation(T, (pos(t_syms[i - 1]),), (pos(_a(-2 * i)),),
                             0, 0) for i in range(1, n)]
    lvl2 = TowerLevel((t,), tuple(rels2), "first", (T, T.inverse()))
    tower = Tower(base, (lvl1, lvl2), name=f"two-gen-nn(n={n})")
    assignment = {}
    for i, g in enumerate(src.generators, start=1):
        ti = pos(t_syms[i - 1])
        a0 = pos(_a(0))
        assignment[g] = (a0.inverse(), ti.inverse(), a0, ti)
    emb = EmbeddingMap(src, tower, assignment, None,
                       source_rules=tuple(src_rules),
                       notes=("generators map to commutators of a_0 with "
                              "the odd conjugates",))
    return tower, emb


def embed_two_gen_hnn(src: Presentation,
                      src_rules: Sequence[Rule]) -> Tuple[Tower, EmbeddingMap]:
    """Embed gp< X | S > into the two-generator group with three nested
    stable letters; the generator x_i maps to the commutator of t_3 with
    the conjugate b_(1,-i)."""
    _checked_source(src, src_rules)
    n = len(src.generators)
    if n == 0:
        raise UnsupportedCase("the source needs at least one generator")
    b_syms = tuple(sym("b", 1, -j) for j in range(0, n + 1))
    t1, t2, t3 = sym("t", 1), sym("t", 2), sym("t", 3)
    T1, T2, T3 = pos(t1), pos(t2), pos(t3)
    base = BaseLevel(b_syms + src.generators,
                     signed_letters(b_syms) + signed_letters(src.generators),
                     rules=tuple(src_rules))
    lvl_t3 = TowerLevel(
        (t3,),
        tuple(StableRelation(T3, (neg(b_syms[i]),),
                             (pos(src.generators[i - 1]), neg(b_syms[i])),
                             0, 1)
              for i in range(1, n + 1)),
        "first", (T3, T3.inverse()))
    lvl_t2 = TowerLevel(
        (t2,),
        tuple(StableRelation(T2, (neg(b_syms[i - 1]),), (neg(b_syms[i]),),
                             0, 0)
              for i in range(1, n + 1)),
        "first", (T2, T2.inverse()))
    lvl_t1 = TowerLevel(
        (t1,),
        (StableRelation(T1, (pos(b_syms[0]),), (T2,), 0, 0),
         StableRelation(T1, (T2,), (T3,), 0, 0)),
        "first", (T1, T1.inverse()))
    tower = Tower(base, (lvl_t3, lvl_t2, lvl_t1), name=f"two-gen-hnn(n={n})")
    assignment = {}
    for i, g in enumerate(src.generators, start=1):
        bi = pos(b_syms[i])
        assignment[g] = (T3.inverse(), bi.inverse(), T3, bi)
    emb = EmbeddingMap(src, tower, assignment, None,
                       source_rules=tuple(src_rules),
                       notes=("generators map to commutators of t_3 with "
                              "the b conjugates",))
    return tower, emb
