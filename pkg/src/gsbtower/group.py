"""Group presentations as binomial rewriting systems.

A presentation is written  gp< x, y | x^2 y^2 = 1, ... >  with relators in
word literal syntax.  Relators are stored freely reduced; a relator that
reduces to the empty word is rejected rather than silently dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .orders import DegLex
from .rewrite import Rule, RewriteSystem, normal_form
from .words import (EMPTY, Letter, Symbol, Word, WordSyntaxError,
                    alphabet_of, format_word, free_reduce, inverse,
                    parse_word, signed_letters)


class PresentationError(ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


@dataclass
class Presentation:
    generators: Tuple[Symbol, ...]
    relators: Tuple[Word, ...]

    def alphabet(self) -> dict:
        return alphabet_of(self.generators)

    def letters(self) -> Tuple[Letter, ...]:
        return signed_letters(self.generators)

    def default_order(self) -> DegLex:
        return DegLex(self.letters())

    def __str__(self):
        gens = ", ".join(str(g) for g in self.generators)
        rels = ", ".join(format_word(r) + " = 1" for r in self.relators)
        return f"gp< {gens} | {rels} >"


_SHELL = re.compile(r"^\s*gp\s*<(.*)>\s*$", re.DOTALL)


def parse_presentation(text: str) -> Presentation:
    """Parse `gp< g1, g2, ... | w1 = w2, ... >`; round-trips with str()."""
    m = _SHELL.match(text)
    if not m:
        raise PresentationError("expected gp< generators | relations >",
                                text.find("gp") if "gp" in text else 0)
    inner = m.group(1)
    if "|" in inner:
        gen_part, rel_part = inner.split("|", 1)
    else:
        gen_part, rel_part = inner, ""
    generators: List[Symbol] = []
    seen = set()
    for tok in gen_part.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            w = parse_word(tok)
        except WordSyntaxError as e:
            raise PresentationError(f"bad generator {tok!r}: {e}",
                                    text.find(tok))
        if len(w) != 1 or w[0].sign != 1:
            raise PresentationError(f"generator {tok!r} must be a single "
                                    "positive letter", text.find(tok))
        s = w[0].sym
        if s in seen:
            raise PresentationError(f"duplicate generator {tok!r}",
                                    text.find(tok))
        seen.add(s)
        generators.append(s)
    alphabet = alphabet_of(generators)
    relators: List[Word] = []
    for chunk in rel_part.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        sides = chunk.split("=")
        if len(sides) > 2:
            raise PresentationError(f"relation {chunk!r} has more than one =",
                                    text.find(chunk))
        try:
            lhs = parse_word(sides[0], alphabet)
            rhs = parse_word(sides[1], alphabet) if len(sides) == 2 else EMPTY
        except WordSyntaxError as e:
            raise PresentationError(f"in relation {chunk!r}: {e}",
                                    text.find(chunk))
        rel = free_reduce(lhs + inverse(rhs))
        if not rel:
            raise PresentationError(
                f"relation {chunk!r} freely reduces to the identity",
                text.find(chunk))
        relators.append(rel)
    return Presentation(tuple(generators), tuple(relators))


def trivial_rules(generators: Sequence[Symbol]) -> List[Rule]:
    """The free-cancellation rules g g^-1 -> 1 and g^-1 g -> 1 for every
    generator; an involutory generator contributes the single rule
    g g -> 1."""
    out: List[Rule] = []
    for s in generators:
        g = Letter(s, 1)
        if s.involutory:
            out.append(Rule.binomial((g, g), EMPTY, tag="trivial"))
        else:
            out.append(Rule.binomial((g, g.inverse()), EMPTY, tag="trivial"))
            out.append(Rule.binomial((g.inverse(), g), EMPTY, tag="trivial"))
    return out


def presentation_rules(pres: Presentation) -> List[Rule]:
    """Trivial rules plus one rule r -> 1 per relator (a starting set for
    completion, not yet confluent in general)."""
    rules = trivial_rules(pres.generators)
    for r in pres.relators:
        rules.append(Rule.binomial(r, EMPTY, tag="relator"))
    return rules


class UnverifiedBasisError(RuntimeError):
    pass


def word_problem(u: Word, v: Word, system: RewriteSystem, *,
                 verified: bool = False, unchecked: bool = False) -> bool:
    """Decide u = v in the quotient group via unique normal forms.

    The answer is only meaningful when the system is a verified
    Groebner-Shirshov basis; callers assert that via `verified`, or pass
    `unchecked=True` to take the result as heuristic.
    """
    if not verified and not unchecked:
        raise UnverifiedBasisError(
            "word_problem needs a verified basis (or unchecked=True)")
    return normal_form(u, system) == normal_form(v, system)
