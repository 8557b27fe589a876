"""Rewriting engine for the free associative algebra.

The engine works with two kinds of rewriting data:

* Rule -- a monic polynomial split as lhs (the leading word) and rhs (the
  lower terms), used as the directed rewrite lhs -> rhs.  Group relations
  are binomial rules whose rhs is a single word (or empty).

* RuleSchema -- a rule family with variable subword slots.  The left
  pattern alternates fixed words and slots; a slot matches a product of
  designated generator words (each with a canonical spelling for either
  sign), and the right template re-emits each matched slot through a
  substitution map.  Schemas describe the infinite standard rule families
  of stable-letter towers; matching is exact, so reduction never needs a
  pre-instantiated finite approximation.

Reduction eliminates leading words: the compare-greatest reducible term is
rewritten at its leftmost redex by the lowest-index rule, which makes
normal forms and failure certificates reproducible.  A composition of two
rules reduces either to zero (trivial) or to an irreducible nonzero
remainder; the latter is a proof that the set is not a Groebner-Shirshov
basis, independent of reduction strategy, since a nonzero irreducible
member of the ideal contradicts the Composition-Diamond lemma.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import Polynomial, poly_combine, word_mul
from .words import (EMPTY, Letter, Word, find_factor, format_word,
                    free_reduce, inverse, is_freely_reduced)

DEFAULT_MAX_STEPS = 10 ** 6
DEFAULT_MAX_RULES = 10 ** 4


class LimitExceeded(RuntimeError):
    """A step or rule budget ran out; carries whatever partial data exists."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class RuleError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Polynomial
    tag: str = ""

    @classmethod
    def binomial(cls, lhs: Word, rhs: Word, tag: str = "") -> "Rule":
        # the empty right side is the identity word, not the zero polynomial
        return cls(lhs, Polynomial.from_word(rhs), tag)

    @property
    def rhs_word(self) -> Optional[Word]:
        """The rhs as a word, when the rule is binomial (or rhs = 0 -> 1)."""
        if self.rhs.is_zero():
            return EMPTY
        if len(self.rhs.terms) == 1:
            (w, c), = self.rhs.terms.items()
            if c == 1:
                return w
        return None

    def polynomial(self) -> Polynomial:
        return poly_combine(1, Polynomial.from_word(self.lhs), -1, self.rhs)

    def validate(self, order):
        for w in self.rhs.terms:
            if order.cmp(self.lhs, w) <= 0:
                raise RuleError(
                    f"rule {self} is not decreasing: term {format_word(w)} "
                    f"is not below the left side")

    def __str__(self):
        return f"{format_word(self.lhs)} -> {self.rhs}"


@dataclass(frozen=True)
class SlotGen:
    """One slot generator: a word, its canonical spellings for both signs,
    and the image word it maps to on the right side."""
    word: Word
    image: Word
    pos_text: Word = None
    neg_text: Word = None

    def text(self, sign: int) -> Word:
        if sign > 0:
            return self.pos_text if self.pos_text is not None else self.word
        if self.neg_text is not None:
            return self.neg_text
        return inverse(self.pos_text if self.pos_text is not None else self.word)


@dataclass(frozen=True)
class Slot:
    name: str
    gens: Tuple[SlotGen, ...]

    def expand(self, sv: Tuple[Tuple[int, int], ...]) -> Word:
        """Spell out a slot word (sequence of (gen index, sign))."""
        out: Word = EMPTY
        for gi, sg in sv:
            out = out + self.gens[gi].text(sg)
        return out

    def image(self, sv: Tuple[Tuple[int, int], ...]) -> Word:
        out: list = []
        for gi, sg in sv:
            img = self.gens[gi].image
            for l in (img if sg > 0 else inverse(img)):
                if out and out[-1] == l.inverse():
                    out.pop()
                else:
                    out.append(l)
        return tuple(out)


SlotWord = Tuple[Tuple[int, int], ...]  # ((gen index, sign), ...)


@dataclass(frozen=True)
class RuleSchema:
    """lhs = fixed[0] slot[0] fixed[1] ... slot[k-1] fixed[k],
    rhs = rfixed[0] image(slot[rslots[0]]) rfixed[1] ...

    Slot occurrences on the right follow `rslots` (indices into `slots`).
    `context` holds the rewriting data admissible slot words must be
    irreducible against (the levels below the schema's own level).
    """
    fixed: Tuple[Word, ...]
    slots: Tuple[Slot, ...]
    rfixed: Tuple[Word, ...]
    rslots: Tuple[int, ...]
    tag: str = ""
    context: tuple = ()

    def __post_init__(self):
        if len(self.fixed) != len(self.slots) + 1:
            raise RuleError("schema needs k+1 fixed segments for k slots")
        if len(self.rfixed) != len(self.rslots) + 1:
            raise RuleError("schema right side is misaligned")

    def min_len(self) -> int:
        return sum(len(f) for f in self.fixed)

    def admissible(self, svs: Sequence[SlotWord]) -> bool:
        """A slot assignment is admissible when it is reduced as a product
        of slot generators and the whole instantiated left side is in
        canonical position: freely reduced and without redexes of the
        levels below (so the pattern only ever matches canonical text)."""
        for slot, sv in zip(self.slots, svs):
            for (g1, s1), (g2, s2) in zip(sv, sv[1:]):
                if g1 == g2 and s1 != s2:
                    return False
        text: Word = self.fixed[0]
        for slot, sv, f in zip(self.slots, svs, self.fixed[1:]):
            text = text + slot.expand(sv) + f
        if not is_freely_reduced(text):
            return False
        if self.context is not None and self.context != () and \
                _has_redex(text, self.context):
            return False
        return True

    def instantiate(self, svs: Sequence[SlotWord], order=None) -> Rule:
        svs = tuple(tuple(sv) for sv in svs)
        if len(svs) != len(self.slots):
            raise RuleError(f"schema {self.tag} expects {len(self.slots)} slot words")
        if not self.admissible(svs):
            raise RuleError(f"inadmissible slot words for schema {self.tag}")
        lhs: Word = self.fixed[0]
        for slot, sv, f in zip(self.slots, svs, self.fixed[1:]):
            lhs = lhs + slot.expand(sv) + f
        rhs: Word = self.rfixed[0]
        for si, f in zip(self.rslots, self.rfixed[1:]):
            rhs = free_reduce(rhs + self.slots[si].image(svs[si]) + f)
        rule = Rule.binomial(lhs, rhs, tag=self.tag or "schema")
        if order is not None:
            rule.validate(order)
        return rule

    def slot_words_upto(self, bound: int) -> Iterable[Tuple[SlotWord, ...]]:
        """All admissible slot-word tuples with every slot length <= bound."""
        per_slot: List[List[SlotWord]] = []
        for slot in self.slots:
            words: List[SlotWord] = [()]
            frontier: List[SlotWord] = [()]
            for _ in range(bound):
                nxt = []
                for sv in frontier:
                    for gi in range(len(slot.gens)):
                        for sg in (1, -1):
                            if sv and sv[-1][0] == gi and sv[-1][1] != sg:
                                continue
                            nxt.append(sv + ((gi, sg),))
                words.extend(nxt)
                frontier = nxt
            per_slot.append(words)
        for combo in itertools.product(*per_slot):
            if self.admissible(combo):
                yield combo

    def instances(self, bound: int, order=None) -> List[Rule]:
        out = []
        for combo in self.slot_words_upto(bound):
            out.append(self.instantiate(combo, order))
        return out

    def match_end_at(self, w: Word, start: int):
        """Match the pattern in w beginning at `start`; returns
        (end, slot words) for the first (shortest-slots) match, or None."""
        return self._match_seg(w, start, 0, ())

    def _match_seg(self, w: Word, i: int, seg: int, acc):
        f = self.fixed[seg]
        if w[i:i + len(f)] != f:
            return None
        i += len(f)
        if seg == len(self.slots):
            if self.admissible(acc):
                return i, acc
            return None
        slot = self.slots[seg]
        # shortest slot word first, for deterministic matching
        queue: List[Tuple[int, SlotWord]] = [(i, ())]
        seen = set()
        while queue:
            j, sv = queue.pop(0)
            res = self._match_seg(w, j, seg + 1, acc + (sv,))
            if res is not None:
                return res
            for gi, g in enumerate(slot.gens):
                for sg in (1, -1):
                    if sv and sv[-1][0] == gi and sv[-1][1] != sg:
                        continue
                    t = g.text(sg)
                    if t and w[j:j + len(t)] == t:
                        key = (j + len(t), sv + ((gi, sg),))
                        if key not in seen:
                            seen.add(key)
                            queue.append(key)
        return None

    def __str__(self):
        parts = []
        for k, f in enumerate(self.fixed):
            if f:
                parts.append(format_word(f))
            if k < len(self.slots):
                parts.append(f"[{self.slots[k].name}]")
        rparts = []
        for k, f in enumerate(self.rfixed):
            if f:
                rparts.append(format_word(f))
            if k < len(self.rslots):
                rparts.append(f"[{self.slots[self.rslots[k]].name}']")
        return " ".join(parts) + " -> " + (" ".join(rparts) or "1")


def _has_redex(w: Word, system) -> bool:
    return find_redex(w, system) is not None


class RewriteSystem:
    """A list of rules plus a list of schemas under one monomial order.

    Rules are immutable during verification; pairwise composition checks
    are independent of each other and could run concurrently, though this
    implementation keeps them sequential.
    """

    def __init__(self, rules: Sequence[Rule], order,
                 schemas: Sequence[RuleSchema] = (), validate: bool = True):
        self.rules = list(rules)
        self.schemas = list(schemas)
        self.order = order
        self._by_first: Dict[Letter, List[Tuple[int, Rule]]] = {}
        for i, r in enumerate(self.rules):
            if not r.lhs:
                raise RuleError("empty left side")
            self._by_first.setdefault(r.lhs[0], []).append((i, r))
        if validate:
            for r in self.rules:
                r.validate(order)

    def __iter__(self):
        return iter(self.rules)

    def candidates(self, first: Letter):
        return self._by_first.get(first, ())


def find_redex(w: Word, system):
    """Leftmost redex: (start, end, rule) with lowest rule index at a tie;
    plain rules are tried before schemas at each position."""
    if isinstance(system, RewriteSystem):
        rules_at = system.candidates
        schemas = system.schemas
    else:  # bare rule list, used for admissibility contexts
        table: Dict[Letter, list] = {}
        for i, r in enumerate(system):
            table.setdefault(r.lhs[0], []).append((i, r))
        rules_at = lambda l: table.get(l, ())
        schemas = ()
    n = len(w)
    for i in range(n):
        best = None
        for idx, r in rules_at(w[i]):
            m = len(r.lhs)
            if i + m <= n and w[i:i + m] == r.lhs:
                best = (i, i + m, r)
                break
        if best is None:
            for sc in schemas:
                if sc.min_len() + i <= n:
                    m = sc.match_end_at(w, i)
                    if m is not None:
                        end, svs = m
                        best = (i, end, sc.instantiate(svs))
                        break
        if best is not None:
            return best
    return None


def is_irreducible(w: Word, system) -> bool:
    """True iff no rule left side (or schema pattern) occurs as a factor."""
    return find_redex(w, system) is None


def reduce(p: Polynomial, system, max_steps: int = DEFAULT_MAX_STEPS,
           ceiling: Word = None) -> Polynomial:
    """Eliminate leading words until no term is reducible.

    Terminates because each step replaces a term by strictly smaller ones
    under a monomial (hence well-founded) order; the step cap is defensive.
    With `ceiling` set, every rewritten term is checked to lie below it,
    which audits the "below w" condition of composition triviality.
    """
    order = system.order
    steps = 0
    while True:
        target = None
        for w in sorted(p.terms, key=_cmp_key(order), reverse=True):
            red = find_redex(w, system)
            if red is not None:
                target = (w, red)
                break
        if target is None:
            return p
        if steps >= max_steps:
            raise LimitExceeded(f"reduction exceeded {max_steps} steps", p)
        steps += 1
        w, (i, j, rule) = target
        if ceiling is not None and order.cmp(w, ceiling) >= 0:
            raise RuleError(
                f"elimination at {format_word(w)} does not act below "
                f"{format_word(ceiling)}")
        c = p.terms[w]
        # replace c * a lhs b by c * a rhs b
        p = poly_combine(1, p, -c, Polynomial.from_word(w))
        p = poly_combine(1, p, c, word_mul(w[:i], rule.rhs, w[j:]))


def _cmp_key(order):
    import functools
    return functools.cmp_to_key(order.cmp)


def normal_form(w: Word, system, max_steps: int = DEFAULT_MAX_STEPS) -> Word:
    """Word-to-word rewriting; every rule must be binomial."""
    for r in system.rules:
        if r.rhs_word is None:
            raise RuleError(f"normal_form needs binomial rules, got {r}")
    steps = 0
    while True:
        red = find_redex(w, system)
        if red is None:
            return w
        if steps >= max_steps:
            raise LimitExceeded(f"rewriting exceeded {max_steps} steps", w)
        steps += 1
        i, j, rule = red
        w = w[:i] + rule.rhs_word + w[j:]


def normal_form_random(w: Word, system, rng,
                       max_steps: int = DEFAULT_MAX_STEPS) -> Word:
    """Like normal_form but picks a random redex each step; used to check
    that verified systems are strategy independent."""
    steps = 0
    while True:
        reds = _all_redexes(w, system)
        if not reds:
            return w
        if steps >= max_steps:
            raise LimitExceeded("random rewriting exceeded budget", w)
        steps += 1
        i, j, rule = reds[rng.randrange(len(reds))]
        w = w[:i] + rule.rhs_word + w[j:]


def _all_redexes(w: Word, system: RewriteSystem):
    out = []
    n = len(w)
    for i in range(n):
        for _, r in system.candidates(w[i]):
            m = len(r.lhs)
            if i + m <= n and w[i:i + m] == r.lhs:
                out.append((i, i + m, r))
        for sc in system.schemas:
            if sc.min_len() + i <= n:
                m = sc.match_end_at(w, i)
                if m is not None:
                    end, svs = m
                    out.append((i, end, sc.instantiate(svs)))
    return out


# --- compositions and the basis test --------------------------------------

@dataclass(frozen=True)
class Composition:
    kind: str              # "intersection" | "inclusion"
    w: Word                # the overlap word
    value: Polynomial      # (f, g)_w
    left: Rule
    right: Rule

    def __str__(self):
        return f"{self.kind} at {format_word(self.w)}: {self.value}"


def compositions(f: Rule, g: Rule, order) -> List[Composition]:
    """All intersection and inclusion compositions of f with g.

    Intersection overlaps are proper (0 < overlap < min length), exactly
    the configurations where deg(f.lhs) + deg(g.lhs) exceeds deg(w);
    inclusion covers every occurrence of g.lhs inside f.lhs (for f == g,
    only proper occurrences, which cannot exist, so none).
    """
    out = []
    fw, gw = f.lhs, g.lhs
    fp, gp = f.polynomial(), g.polynomial()
    for o in range(1, min(len(fw), len(gw))):
        if fw[len(fw) - o:] == gw[:o]:
            b = gw[o:]
            a = fw[:len(fw) - o]
            w = fw + b
            val = poly_combine(1, word_mul(EMPTY, fp, b), -1, word_mul(a, gp, EMPTY))
            out.append(Composition("intersection", w, val, f, g))
    if f is not g and f != g:
        start = 0
        while True:
            i = find_factor(fw, gw, start)
            if i < 0:
                break
            a, b = fw[:i], fw[i + len(gw):]
            val = poly_combine(1, fp, -1, word_mul(a, gp, b))
            out.append(Composition("inclusion", fw, val, f, g))
            start = i + 1
    return out


def is_trivial(c: Composition, system, max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    """Triviality modulo (S, w), checked by reduction to zero with every
    elimination step audited to act below w."""
    return reduce(c.value, system, max_steps, ceiling=c.w).is_zero()


@dataclass
class GsbVerdict:
    status: str                       # "basis" | "fails" | "limit"
    checked_pairs: int = 0
    composition_count: int = 0
    certificate: Optional[dict] = None
    v_bound: Optional[int] = None
    note: str = ""

    @property
    def is_basis(self):
        return self.status == "basis"

    def to_record(self) -> dict:
        rec = {"status": self.status,
               "checked_pairs": self.checked_pairs,
               "compositions": self.composition_count}
        if self.v_bound is not None:
            rec["v_bound"] = self.v_bound
        if self.note:
            rec["note"] = self.note
        if self.certificate is not None:
            cert = self.certificate
            rec["certificate"] = {
                "kind": cert["kind"],
                "left_index": cert["left_index"],
                "right_index": cert["right_index"],
                "left": str(cert["left"]),
                "right": str(cert["right"]),
                "overlap": format_word(cert["overlap"]),
                "remainder": str(cert["remainder"]),
            }
        return rec


def is_gsb(system, max_steps: int = DEFAULT_MAX_STEPS) -> GsbVerdict:
    """Check every pairwise composition; the first nonzero irreducible
    remainder is returned as a certificate of failure."""
    rules = system.rules
    n = len(rules)
    checked = comps = 0
    budget = max_steps
    for i in range(n):
        for j in range(n):
            checked += 1
            for c in compositions(rules[i], rules[j], system.order):
                comps += 1
                try:
                    rem = reduce(c.value, system, budget, ceiling=c.w)
                except LimitExceeded:
                    return GsbVerdict("limit", checked, comps,
                                      note=f"step budget {max_steps} exhausted")
                if not rem.is_zero():
                    return GsbVerdict("fails", checked, comps, certificate={
                        "kind": c.kind, "left_index": i, "right_index": j,
                        "left": rules[i], "right": rules[j],
                        "overlap": c.w, "remainder": rem,
                    })
    return GsbVerdict("basis", checked, comps)


def complete(rules: Sequence[Rule], order,
             max_steps: int = DEFAULT_MAX_STEPS,
             max_rules: int = DEFAULT_MAX_RULES):
    """Naive completion: keep adjoining reduced nontrivial compositions as
    new monic rules until the set closes or a budget runs out.

    Returns (status, rules) with status "basis" or "limit"; the returned
    set generates the same ideal as the input in either case.
    """
    work = list(rules)
    steps = 0
    while True:
        system = RewriteSystem(_interreduce(work, order, max_steps), order)
        work = system.rules
        if len(work) > max_rules:
            return "limit", work
        new: List[Rule] = []
        for i in range(len(work)):
            for j in range(len(work)):
                for c in compositions(work[i], work[j], order):
                    steps += 1
                    if steps > max_rules * 64:
                        return "limit", work
                    try:
                        rem = reduce(c.value, system, max_steps)
                    except LimitExceeded:
                        return "limit", work
                    if not rem.is_zero():
                        new.append(_to_rule(rem, order))
        if not new:
            return "basis", work
        seen = {(r.lhs, r.rhs) for r in work}
        for r in new:
            if (r.lhs, r.rhs) not in seen:
                seen.add((r.lhs, r.rhs))
                work.append(r)
        if len(work) > max_rules:
            return "limit", work


def _to_rule(p: Polynomial, order) -> Rule:
    p = p.monic(order)
    lw = p.leading_word(order)
    rhs = poly_combine(-1, p, 1, Polynomial.from_word(lw))
    return Rule(lw, rhs, tag="completion")


def _interreduce(rules: Sequence[Rule], order, max_steps) -> List[Rule]:
    """Reduce every rule against the others; drop rules that collapse."""
    work = list(rules)
    changed = True
    rounds = 0
    while changed and rounds < 50:
        changed = False
        rounds += 1
        out: List[Rule] = []
        for k, r in enumerate(work):
            others = out + work[k + 1:]
            if not others:
                out.append(r)
                continue
            system = RewriteSystem(others, order, validate=False)
            rem = reduce(r.polynomial(), system, max_steps)
            if rem.is_zero():
                changed = True
                continue
            nr = _to_rule(rem, order)
            if nr != r:
                changed = True
            out.append(nr)
        work = out
    # deduplicate, keep first occurrences
    seen = set()
    dedup = []
    for r in work:
        key = (r.lhs, r.rhs)
        if key not in seen:
            seen.add(key)
            dedup.append(r)
    return dedup


def irr_enumerate(system, alphabet: Sequence[Letter], max_len: int) -> List[Word]:
    """All irreducible words of length <= max_len, shortest first, words of
    equal length listed in decreasing order.

    Extending an irreducible word only ever creates redexes that end at
    the final letter, so the enumeration grows irreducible prefixes.
    """
    out: List[Word] = [EMPTY]
    layer: List[Word] = [EMPTY]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for l in alphabet:
                cand = w + (l,)
                if _redex_ending_at_last(cand, system) is None:
                    nxt.append(cand)
        nxt = _sorted_desc(nxt, system.order)
        out.extend(nxt)
        layer = nxt
    return out


def _sorted_desc(ws, order):
    import functools
    return sorted(ws, key=functools.cmp_to_key(order.cmp), reverse=True)


def _redex_ending_at_last(w: Word, system: RewriteSystem):
    n = len(w)
    for i in range(n):
        for _, r in system.candidates(w[i]):
            if i + len(r.lhs) == n and w[i:] == r.lhs:
                return r
        for sc in system.schemas:
            m = sc.match_end_at(w, i)
            if m is not None and m[0] == n:
                return sc
    return None
