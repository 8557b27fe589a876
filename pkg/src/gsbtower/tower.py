"""Stable-letter towers of groups and their standard rewriting systems.

A tower starts from a base group (free, or presented by an already
verified rule set) and adjoins levels; each level introduces stable
letters p with relations A p = p B whose sides live in the alphabet
below.  Every relation designates a distinguishing letter occurrence on
each side.  From those choices the four standard rule shapes are derived
mechanically; when a distinguishing letter is itself a stable letter of a
lower level, its corresponding words form a variable slot and the rule
becomes a schema.

The derivation pipeline:

1. raw shapes, writing x for the A-side and y for the B-side letter,
   and V for a product of corresponding words of the head letter:

       x  V[B-words of x]  A'' p    ->  V'[A-words]  A'^-1  p  B
       x^-1 V[A-words of x] A'^-1 p ->  V'[B-words]  A''    p  B^-1
       y  V[B-words of y]  B'' p^-1 ->  V'[A-words]  B'^-1  p^-1 A
       y^-1 V[A-words of y] B'^-1 p^-1 -> V'[B-words] B''   p^-1 A^-1

2. the fixed part between slot and p is rewritten to canonical position
   with the other rules; factors that cross p move to the right side,

3. right sides are reduced.

A shape whose fixed part would have to cross its own slot (stable letters
of the slot's system sitting between slot and p) is not derivable this
way; constructors supply those families as explicit schemas, and the
tower refuses to verify if a shape is left uncovered.

Tower structures are immutable after construction.  Verification work
(pairwise composition checks, slot instantiation) is independent per pair
and could be distributed; this implementation runs it sequentially.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .group import Presentation, trivial_rules
from .orders import DegLex, FirstTower, SecondTower
from .poly import Polynomial
from .rewrite import (DEFAULT_MAX_STEPS, GsbVerdict, LimitExceeded, Rule,
                      RuleError, RuleSchema, RewriteSystem, Slot, SlotGen,
                      find_redex, is_gsb, is_irreducible, irr_enumerate,
                      normal_form)
from .words import (EMPTY, Letter, Symbol, Word, format_word, free_reduce,
                    inverse, signed_letters)


class TowerError(ValueError):
    pass


@dataclass(frozen=True)
class BaseLevel:
    symbols: Tuple[Symbol, ...]
    ranking: Tuple[Letter, ...]            # deg-lex ranking on signed letters
    rules: Tuple[Rule, ...] = ()           # presented base; () means free
    cyclic: Tuple[Tuple[Letter, int], ...] = ()   # (letter, r) power families
    order: object = None                   # overrides DegLex(ranking)


@dataclass(frozen=True)
class StableRelation:
    """A p = p B with distinguishing occurrences A[xpos], B[ypos]."""
    p: Letter
    a: Word
    b: Word
    xpos: int
    ypos: int

    def __post_init__(self):
        if self.p.sign != 1:
            raise TowerError("stable letter must be given positively")
        if not self.a or not self.b:
            raise TowerError("relation sides must be nonempty")
        if not (0 <= self.xpos < len(self.a)) or not (0 <= self.ypos < len(self.b)):
            raise TowerError("distinguishing position out of range")

    @property
    def x(self) -> Letter:
        return self.a[self.xpos]

    @property
    def y(self) -> Letter:
        return self.b[self.ypos]

    def __str__(self):
        def mark(w, k):
            toks = [(f"[{l}]" if i == k else str(l)) for i, l in enumerate(w)]
            return " ".join(toks)
        return (f"{mark(self.a, self.xpos)} {self.p} = "
                f"{self.p} {mark(self.b, self.ypos)}")


@dataclass(frozen=True)
class TowerLevel:
    stables: Tuple[Symbol, ...]
    relations: Tuple[StableRelation, ...]
    ordertype: str                         # "first" | "second"
    zranking: Tuple[Letter, ...]
    extra_schemas: Tuple[RuleSchema, ...] = ()


def cyclic_family(letter: Letter, r: int) -> List[Tuple[int, List[Tuple[Word, Word]]]]:
    """The power identities of an order-r generator, indexed by i from 0 to
    ceil(r/2): the word a^((r-i)e) equals a^(-ie) for both signs e.

    Entries are (i, equations); orientation and deduplication happen when
    the equations become rules.
    """
    if r < 2:
        raise TowerError("cyclic family needs r >= 2")
    out = []
    for i in range(0, -(-r // 2) + 1):
        eqs = []
        for e in (1, -1):
            l = letter if e > 0 else letter.inverse()
            lhs = (l,) * (r - i)
            rhs = (l.inverse(),) * i
            eqs.append((lhs, rhs))
        out.append((i, eqs))
    return out


def cyclic_rules(letter: Letter, r: int, order) -> List[Rule]:
    rules: List[Rule] = []
    seen = set()
    for _, eqs in cyclic_family(letter, r):
        for lhs, rhs in eqs:
            if order.cmp(lhs, rhs) < 0:
                lhs, rhs = rhs, lhs
            if lhs == rhs or (lhs, rhs) in seen:
                continue
            seen.add((lhs, rhs))
            rules.append(Rule.binomial(lhs, rhs, tag=f"power({letter.sym})"))
    return rules


class Tower:
    def __init__(self, base: BaseLevel, levels: Sequence[TowerLevel],
                 name: str = "tower"):
        self.base = base
        self.levels = tuple(levels)
        self.name = name
        self.verified_bound: Optional[int] = None
        self._system_cache: Dict[Optional[int], RewriteSystem] = {}
        self._level_rules_cache: Dict[int, tuple] = {}
        self._validate_structure()
        self.order = self._build_order()

    # --- structure -----------------------------------------------------

    def _validate_structure(self):
        self.level_of: Dict[Symbol, int] = {}
        for r in self.base.rules:
            if r.rhs_word is None:
                raise TowerError(f"base rule {r} is not binomial")
        for s in self.base.symbols:
            if s in self.level_of:
                raise TowerError(f"duplicate generator {s}")
            self.level_of[s] = 0
        for i, lv in enumerate(self.levels, start=1):
            if lv.ordertype not in ("first", "second"):
                raise TowerError(f"unknown order type {lv.ordertype!r}")
            if lv.ordertype == "second" and len(lv.stables) != 1:
                raise TowerError("the second tower order takes a single "
                                 "stable letter")
            for s in lv.stables:
                if s in self.level_of:
                    raise TowerError(f"duplicate generator {s}")
                self.level_of[s] = i
            for rel in lv.relations:
                if self.level_of.get(rel.p.sym) != i:
                    raise TowerError(f"relation {rel} names a stable letter "
                                     f"outside its level")
                for l in rel.a + rel.b:
                    if self.level_of.get(l.sym, 99) >= i:
                        raise TowerError(
                            f"relation side of {rel} leaves the base alphabet")
            for side in ("x", "y"):
                seen = set()
                for rel in lv.relations:
                    d = rel.x if side == "x" else rel.y
                    key = (rel.p.sym, d.sym)
                    if key in seen:
                        raise TowerError(
                            f"distinguishing letters for "
                            f"{rel.p}{'' if side == 'x' else '^-1'} repeat "
                            f"symbol {d.sym} at level {i}")
                    seen.add(key)
                for rel in lv.relations:
                    d = rel.x if side == "x" else rel.y
                    w = rel.a if side == "x" else rel.b
                    top = max(self.level_of[l.sym] for l in w)
                    if self.level_of[d.sym] != top:
                        raise TowerError(
                            f"distinguishing letter {d} of {rel} does not "
                            f"carry the highest weight on its side")

    def _build_order(self):
        order = self.base.order or DegLex(self.base.ranking)
        for lv in self.levels:
            if lv.ordertype == "first":
                order = FirstTower(order, lv.zranking)
            else:
                t = Letter(lv.stables[0], 1)
                order = SecondTower(order, t, lv.zranking)
        return order

    def symbols(self) -> Tuple[Symbol, ...]:
        out = list(self.base.symbols)
        for lv in self.levels:
            out.extend(lv.stables)
        return tuple(out)

    def letters(self) -> Tuple[Letter, ...]:
        return signed_letters(self.symbols())

    def alphabet(self) -> dict:
        from .words import alphabet_of
        return alphabet_of(self.symbols())

    def weight(self, s: Symbol) -> int:
        return self.level_of[s]

    # --- corresponding words --------------------------------------------

    def relation_pairs(self, s: Symbol) -> List[Tuple[Word, Word]]:
        i = self.level_of.get(s)
        if not i:
            return []
        return [(rel.a, rel.b) for rel in self.levels[i - 1].relations
                if rel.p.sym == s]

    def corresponding_word(self, t: Letter, w: Word) -> Word:
        """Factor w over the A-side words of t (B-side for t^-1) and return
        the matching product on the other side."""
        pairs = self.relation_pairs(t.sym)
        if not pairs:
            if free_reduce(w):
                raise TowerError(f"{t} has no defining relations; only the "
                                 "empty word corresponds")
            return EMPTY
        if t.sign > 0:
            gens = [(a, b) for a, b in pairs]
        else:
            gens = [(b, a) for a, b in pairs]
        res = self._factor(tuple(w), gens)
        if res is None:
            raise TowerError(
                f"cannot factor {format_word(w)} over the corresponding "
                f"system of {t}")
        out: Word = EMPTY
        for gi, sg in res:
            img = gens[gi][1]
            out = free_reduce(out + (img if sg > 0 else inverse(img)))
        return out

    @staticmethod
    def _factor(w: Word, gens) -> Optional[Tuple[Tuple[int, int], ...]]:
        if not w:
            return ()
        for gi, (src, _) in enumerate(gens):
            for sg in (1, -1):
                t = src if sg > 0 else inverse(src)
                if t and w[:len(t)] == t:
                    rest = Tower._factor(w[len(t):], gens)
                    if rest is not None:
                        return ((gi, sg),) + rest
        return None

    # --- rule derivation --------------------------------------------------

    def _slot_for(self, head: Letter, level: int, which: str,
                  context: RewriteSystem) -> Optional[Slot]:
        """The slot matched after `head`: its corresponding-word system.

        which = "B" builds products of the far-side words of head (the
        pattern side); "A" the near side.  For head = t^-1 the sides swap.
        Returns None when head is a base letter (empty slot).
        """
        pairs = self.relation_pairs(head.sym)
        if not pairs:
            return None
        swap = (head.sign < 0)
        if which == "B":
            gens = [(b, a) if not swap else (a, b) for a, b in pairs]
        else:
            gens = [(a, b) if not swap else (b, a) for a, b in pairs]
        slotgens = []
        for src, img in gens:
            pos_text = self._canonicalize_in(src, context)
            neg_text = self._canonicalize_in(inverse(src), context)
            slotgens.append(SlotGen(src, img, pos_text, neg_text))
        return Slot(f"V({head})", tuple(slotgens))

    @staticmethod
    def _canonicalize_in(w: Word, context: Optional[RewriteSystem]) -> Word:
        w = free_reduce(w)
        if context is None:
            return w
        return normal_form(w, context)

    def _raw_shapes(self, rel: StableRelation):
        p = rel.p
        a, b = rel.a, rel.b
        ap, app = a[:rel.xpos], a[rel.xpos + 1:]
        bp, bpp = b[:rel.ypos], b[rel.ypos + 1:]
        x, y = rel.x, rel.y
        pi = p.inverse()
        return [
            # (head, slot side, tail, p letter, rhs image side, rhs fixed)
            ("R1", x, "B", app, p, free_reduce(inverse(ap)) + (p,) + b),
            ("R2", x.inverse(), "A", free_reduce(inverse(ap)), p,
             app + (p,) + inverse(b)),
            ("R3", y, "B", bpp, pi, free_reduce(inverse(bp)) + (pi,) + a),
            ("R4", y.inverse(), "A", free_reduce(inverse(bp)), pi,
             bpp + (pi,) + inverse(a)),
        ]

    def level_rules(self, i: int) -> Tuple[List[Rule], List[RuleSchema]]:
        """Plain rules and schemas of level i (1-based), derived from the
        relations plus any constructor-supplied schema families."""
        if i in self._level_rules_cache:
            plain, schemas = self._level_rules_cache[i]
            return list(plain), list(schemas)
        lv = self.levels[i - 1]
        context = self._partial_system(i)
        plain: List[Rule] = []
        schemas: List[RuleSchema] = list(lv.extra_schemas)
        skipped: List[str] = []
        for rel in lv.relations:
            for tag, head, side, tail, pl, rfix in self._raw_shapes(rel):
                slot = self._slot_for(head, i, side, context)
                if slot is None:
                    lhs = (head,) + tail + (pl,)
                    plain.append(Rule.binomial(free_reduce(lhs),
                                               free_reduce(rfix),
                                               tag=f"{tag}[{rel.p}]"))
                    continue
                if any(l.sym == head.sym for l in tail):
                    # the fixed part would have to cross its own slot;
                    # such families must arrive via extra_schemas
                    skipped.append(f"{tag} of {rel}")
                    continue
                schemas.append(RuleSchema(
                    fixed=((head,), tail + (pl,)),
                    slots=(slot,),
                    rfixed=(EMPTY, free_reduce(rfix)),
                    rslots=(0,),
                    tag=f"{tag}[{rel.p}]",
                    context=context,
                ))
        if len(skipped) > len(lv.extra_schemas):
            raise TowerError(
                "level %d has underivable rule shapes not covered by "
                "supplied schemas: %s" % (i, "; ".join(skipped)))
        plain, schemas = self._simplify_level(i, plain, schemas, context)
        schemas = [_absorb_schema_tail(sc) for sc in schemas]
        plain = _dedup_rules(plain)
        for r in plain:
            r.validate(self.order)
        for sc in schemas:
            for inst in sc.instances(1):
                inst.validate(self.order)
        self._level_rules_cache[i] = (list(plain), list(schemas))
        return list(plain), list(schemas)

    def _simplify_level(self, i, plain, schemas, context):
        """Rewrite fixed parts into canonical position (factors crossing the
        stable letter move to the right side), then reduce right sides.

        Freshly derived rules may be transiently mis-oriented until their
        sides are simplified, so reduction contexts keep only the currently
        decreasing rules; that guarantees every pass terminates."""
        stables = {s for s in self.levels[i - 1].stables}

        def oriented(r: Rule) -> bool:
            try:
                r.validate(self.order)
                return True
            except RuleError:
                return False

        for _ in range(8):
            changed = False
            for k, r in enumerate(plain):
                sysk = self._context_plus(
                    context,
                    [q for q in plain if q is not r and oriented(q)],
                    schemas)
                nl, extra = self._reduce_tail(r.lhs, stables, sysk)
                if nl is not None and (nl != r.lhs or extra):
                    rhs = free_reduce((r.rhs_word or EMPTY) + inverse(extra))
                    plain[k] = Rule.binomial(nl, rhs, tag=r.tag)
                    changed = True
            for k, sc in enumerate(schemas):
                sysk = self._context_plus(
                    context, [q for q in plain if oriented(q)],
                    [s for s in schemas if s is not sc])
                tail = sc.fixed[-1]
                nl, extra = self._reduce_tail(tail, stables, sysk)
                if nl is not None and (nl != tail or extra):
                    rfixed = list(sc.rfixed)
                    rfixed[-1] = free_reduce(rfixed[-1] + inverse(extra))
                    schemas[k] = replace(sc, fixed=sc.fixed[:-1] + (nl,),
                                         rfixed=tuple(rfixed))
                    changed = True
            if not changed:
                break
        # right sides: plain rules fully, schema fixed segments standalone
        full = self._context_plus(context,
                                  [q for q in plain if oriented(q)], schemas)
        for k, r in enumerate(plain):
            w = r.rhs_word
            if w is not None:
                nw = normal_form(w, full, max_steps=4000)
                if nw != w:
                    plain[k] = Rule.binomial(r.lhs, nw, tag=r.tag)
        for k, sc in enumerate(schemas):
            rfixed = tuple(normal_form(f, full, max_steps=4000)
                           for f in sc.rfixed)
            if rfixed != sc.rfixed:
                schemas[k] = replace(sc, rfixed=rfixed)
        return plain, schemas

    def _reduce_tail(self, lhs: Word, stables, system):
        """Reduce everything after the head letter of `lhs` (which ends in a
        stable letter of the level); returns (new tail ending at the stable
        letter, transferred factor) or (None, ()) when not applicable."""
        head, tail = lhs[:1], lhs[1:]
        if not tail:
            return None, ()
        try:
            red = normal_form(tail, system, max_steps=4000)
        except LimitExceeded:
            return None, ()
        pos = [k for k, l in enumerate(red) if l.sym in stables]
        if len(pos) != 1:
            return None, ()
        cut = pos[0] + 1
        return head + red[:cut], red[cut:]

    def _context_plus(self, context, plain, schemas) -> RewriteSystem:
        return RewriteSystem(context.rules + list(plain), self.order,
                             schemas=context.schemas + list(schemas),
                             validate=False)

    def _partial_system(self, upto_level: int) -> RewriteSystem:
        """Trivial rules, base rules and all rules of levels < upto_level."""
        rules = trivial_rules(self.symbols())
        rules += list(self.base.rules)
        for l, r in self.base.cyclic:
            rules += cyclic_rules(l, r, self.order)
        schemas: List[RuleSchema] = []
        for j in range(1, upto_level):
            pl, sc = self.level_rules(j)
            rules += pl
            schemas += sc
        return RewriteSystem(rules, self.order, schemas=schemas, validate=False)

    def schema_rules(self, i: int) -> list:
        """Level i's standard rewriting data: schemas for the variable
        families, plain Rules for the fixed ones."""
        plain, schemas = self.level_rules(i)
        return plain + schemas

    def forbidden_subwords(self, i: int) -> list:
        """Left-side patterns of level i: plain words and schema patterns."""
        plain, schemas = self.level_rules(i)
        return [r.lhs for r in plain] + list(schemas)

    def instantiate_schema(self, schema: RuleSchema, v) -> Rule:
        """Instantiate with concrete slot words (a word, or one word per
        slot); slot words are factored over the slot generators."""
        if isinstance(v, tuple) and v and isinstance(v[0], tuple) and (
                not v[0] or isinstance(v[0][0], Letter)):
            vs = list(v)
        else:
            vs = [v]
        if len(vs) != len(schema.slots):
            raise RuleError(f"schema expects {len(schema.slots)} slot words")
        svs = []
        for slot, wv in zip(schema.slots, vs):
            gens = [(g.word, g.image) for g in slot.gens]
            sv = Tower._factor(tuple(wv), gens)
            if sv is None:
                raise RuleError(
                    f"{format_word(wv)} is not a product of the slot "
                    f"generators of {slot.name}")
            svs.append(sv)
        return schema.instantiate(svs, self.order)

    # --- full system, canonical forms, verification -----------------------

    def system(self, v_bound: Optional[int] = None) -> RewriteSystem:
        """The tower's rewriting system.  Schemas always participate in
        reduction by exact matching; with v_bound set, their instances up
        to that slot length are also materialized as plain rules (the form
        pairwise composition checks need)."""
        if v_bound in self._system_cache:
            return self._system_cache[v_bound]
        rules = trivial_rules(self.symbols())
        rules += list(self.base.rules)
        for l, r in self.base.cyclic:
            rules += cyclic_rules(l, r, self.order)
        schemas: List[RuleSchema] = []
        for i in range(1, len(self.levels) + 1):
            pl, sc = self.level_rules(i)
            rules += pl
            schemas += sc
        if v_bound:
            for sc in schemas:
                rules += sc.instances(v_bound, self.order)
        rules = _dedup_rules(rules)
        system = RewriteSystem(rules, self.order, schemas=schemas)
        self._system_cache[v_bound] = system
        return system

    def canonical_form(self, w: Word, max_steps: int = DEFAULT_MAX_STEPS) -> Word:
        """Reduce level by level: canonicalize the segments between stable
        letters of the top level, cancel stable letters freely, then
        eliminate the pattern at the leftmost eliminable stable occurrence
        and start over."""
        budget = [max_steps]
        return self._canon(tuple(w), len(self.levels), budget)

    def _canon(self, w: Word, i: int, budget) -> Word:
        if i == 0:
            base = self._base_system()
            return normal_form(free_reduce(w), base)
        stables = {s for s in self.levels[i - 1].stables}
        plain, schemas = self.level_rules(i)
        level_sys = RewriteSystem(plain, self.order, schemas=schemas,
                                  validate=False)
        while True:
            # (a) canonicalize the segments between stable letters and
            # (b) cancel stable letters, repeating until stable: a stable
            # cancellation can merge segments and expose new redexes below
            while True:
                segs, zs = [], []
                cur: list = []
                for l in w:
                    if l.sym in stables:
                        zs.append(l)
                        segs.append(tuple(cur))
                        cur = []
                    else:
                        cur.append(l)
                segs.append(tuple(cur))
                segs = [self._canon(s, i - 1, budget) for s in segs]
                out = list(segs[0])
                for z, seg in zip(zs, segs[1:]):
                    out.append(z)
                    out.extend(seg)
                w2 = free_reduce(tuple(out))
                if w2 == w:
                    break
                w = w2
            # (c) eliminate at the leftmost eliminable stable occurrence,
            # then (d) return to (a)
            red = self._leftmost_level_redex(w, level_sys, stables)
            if red is None:
                return w
            if budget[0] <= 0:
                raise LimitExceeded("canonical_form budget exhausted", w)
            budget[0] -= 1
            a, b, rule = red
            w = w[:a] + rule.rhs_word + w[b:]

    def _leftmost_level_redex(self, w: Word, level_sys: RewriteSystem, stables):
        occ = [k for k, l in enumerate(w) if l.sym in stables]
        for k in occ:
            for idx, r in enumerate(level_sys.rules):
                m = len(r.lhs)
                if m <= k + 1 and w[k + 1 - m:k + 1] == r.lhs:
                    return k + 1 - m, k + 1, r
            for sc in level_sys.schemas:
                for start in range(max(0, k + 1 - 64), k + 1):
                    res = sc.match_end_at(w, start)
                    if res is not None and res[0] == k + 1:
                        return start, k + 1, sc.instantiate(res[1])
        return None

    def _base_system(self) -> RewriteSystem:
        rules = trivial_rules(self.base.symbols)
        rules += list(self.base.rules)
        for l, r in self.base.cyclic:
            rules += cyclic_rules(l, r, self.order)
        return RewriteSystem(rules, self.order, validate=False)

    def verify_standard_gsb(self, v_bound: int = 3,
                            max_steps: int = DEFAULT_MAX_STEPS) -> GsbVerdict:
        """Instantiate every schema up to the slot-length bound, add the
        plain and trivial rules, and run the pairwise composition check.
        A "basis" verdict certifies the standard basis property at this
        instantiation bound."""
        system = self.system(v_bound if v_bound > 0 else None)
        verdict = is_gsb(system, max_steps)
        verdict.v_bound = v_bound
        if v_bound == 0 and any(True for _ in system.schemas):
            verdict.note = ("schema instantiation bound 0: no schema pair "
                            "was checked")
        if verdict.is_basis:
            self.verified_bound = v_bound
        return verdict


def _dedup_rules(rules: Iterable[Rule]) -> List[Rule]:
    seen = set()
    out = []
    for r in rules:
        key = (r.lhs, r.rhs)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


# --- embeddings -----------------------------------------------------------

class EmbeddingError(RuntimeError):
    pass


@dataclass
class EmbeddingMap:
    source: Presentation
    tower: Tower
    assignment: Dict[Symbol, Word]
    section: Optional[Dict[Symbol, Word]] = None
    source_rules: Optional[Tuple[Rule, ...]] = None
    notes: Tuple[str, ...] = ()
    degenerate: bool = False

    def apply(self, w: Word) -> Word:
        out: Word = EMPTY
        for l in w:
            img = self.assignment[l.sym]
            out = out + (img if l.sign > 0 else inverse(img))
        return free_reduce(out)

    def pull_back(self, w: Word) -> Word:
        if self.section is None:
            raise EmbeddingError("this embedding has no section")
        out: Word = EMPTY
        for l in w:
            img = self.section[l.sym]
            out = out + (img if l.sign > 0 else inverse(img))
        return free_reduce(out)

    def injectivity_families(self, bound: int) -> List[List[Word]]:
        """Families of source words that are pairwise distinct in the
        source group, certified independently of the tower:

        * with a verified source rule set, its irreducible words;
        * otherwise, free words with pairwise distinct images in the
          abelianization of the source (a one-relator group quotient).
        """
        if self.source_rules is not None:
            order = self.source.default_order()
            src_sys = RewriteSystem(list(self.source_rules), order)
            return [irr_enumerate(src_sys, signed_letters(self.source.generators),
                                  bound)]
        return [self._abelian_family(bound)]

    def _abelian_family(self, bound: int) -> List[Word]:
        """Free words with pairwise distinct images in the abelianization
        of a one-relator source: distinct classes there certify distinct
        group elements.  With several relators (no verified rule set and
        no exact class computation) no family is offered."""
        gens = self.source.generators
        idx = {s: k for k, s in enumerate(gens)}
        if len(self.source.relators) != 1:
            return []
        vec = [0] * len(gens)
        for l in self.source.relators[0]:
            vec[idx[l.sym]] += l.sign
        pivots = [k for k, c in enumerate(vec) if c != 0]
        if not pivots:
            return []
        k0, m = pivots[0], abs(vec[pivots[0]])

        def ab(w):
            v = [0] * len(gens)
            for l in w:
                v[idx[l.sym]] += l.sign
            return tuple(v)

        def canon_class(v):
            # unique representative of v + Z*vec with entry k0 in [0, m)
            c = (v[k0] - (v[k0] % m)) // vec[k0]
            return tuple(a - c * b for a, b in zip(v, vec))

        seen = {}
        out: List[Word] = []
        frontier: List[Word] = [EMPTY]
        for _ in range(bound + 1):
            nxt = []
            for w in frontier:
                cls = canon_class(ab(w))
                if cls not in seen:
                    seen[cls] = w
                    out.append(w)
                for l in signed_letters(gens):
                    if not w or w[-1] != l.inverse():
                        nxt.append(w + (l,))
            frontier = [w for w in nxt if len(w) <= bound]
        return out


def check_embedding(emb: EmbeddingMap, len_bound: int = 3,
                    max_steps: int = DEFAULT_MAX_STEPS) -> dict:
    """The two-sided evidence that the map embeds:

    1. every source relator's image canonicalizes to the identity (the
       map is a homomorphism), and
    2. families of source words known to be pairwise distinct keep
       pairwise distinct canonical images;
    3. when a section is attached, the canonical words of the tower pull
       back and push forward to themselves.

    Violations raise EmbeddingError; the report records what was checked.
    """
    tower = emb.tower
    report = {"relators": 0, "families": [], "section_roundtrips": 0}
    for r in emb.source.relators:
        img = tower.canonical_form(emb.apply(r), max_steps)
        if img != EMPTY:
            raise EmbeddingError(
                f"relator {format_word(r)} maps to {format_word(img)}, "
                "not to the identity")
        report["relators"] += 1
    for family in emb.injectivity_families(len_bound):
        images = {}
        for w in family:
            c = tower.canonical_form(emb.apply(w), max_steps)
            if c in images and images[c] != w:
                raise EmbeddingError(
                    f"injectivity violated: {format_word(images[c])} and "
                    f"{format_word(w)} share the image {format_word(c)}")
            images[c] = w
        report["families"].append(len(family))
    if emb.section is not None:
        system = tower.system()
        for w in irr_enumerate(system, tower.letters(), len_bound):
            back = emb.pull_back(w)
            again = tower.canonical_form(emb.apply(back), max_steps)
            if again != w:
                raise EmbeddingError(
                    f"section roundtrip failed at {format_word(w)}: "
                    f"returned {format_word(again)}")
            report["section_roundtrips"] += 1
    return report
