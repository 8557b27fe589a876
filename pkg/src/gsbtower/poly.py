"""Polynomials in the free associative algebra over the rationals.

A polynomial is a finite map from words to nonzero Fraction coefficients.
Coefficients are exact, so deciding whether a composition reduces to zero
is exact as well.  Instances are treated as immutable values; all
operations return fresh polynomials.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .orders import sort_words
from .words import Word, format_word


class ZeroPolynomialError(ValueError):
    pass


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Word, Fraction] = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def from_word(cls, w: Word, coeff=1) -> "Polynomial":
        return cls({w: Fraction(coeff)})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls({})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), format_word(w))):
            c = self.terms[w]
            parts.append(f"{c} {format_word(w)}" if c != 1 else format_word(w))
        return " + ".join(parts)

    def leading_word(self, order) -> Word:
        if not self.terms:
            raise ZeroPolynomialError("the zero polynomial has no leading word")
        it = iter(self.terms)
        best = next(it)
        for w in it:
            if order.cmp(w, best) > 0:
                best = w
        return best

    def coeff(self, w: Word) -> Fraction:
        return self.terms.get(w, Fraction(0))

    def monic(self, order) -> "Polynomial":
        lw = self.leading_word(order)
        c = self.terms[lw]
        if c == 1:
            return self
        return self.scale(Fraction(1) / c)

    def scale(self, a) -> "Polynomial":
        a = Fraction(a)
        if a == 0:
            return Polynomial.zero()
        return Polynomial({w: c * a for w, c in self.terms.items()})

    def sorted_terms(self, order) -> Iterable[Tuple[Word, Fraction]]:
        for w in sort_words(self.terms, order, reverse=True):
            yield w, self.terms[w]


def poly_combine(a, p: Polynomial, b, q: Polynomial) -> Polynomial:
    """a*p + b*q with exact rational arithmetic; zero terms dropped."""
    a, b = Fraction(a), Fraction(b)
    terms = {}
    if a != 0:
        for w, c in p.terms.items():
            terms[w] = a * c
    if b != 0:
        for w, c in q.terms.items():
            nc = terms.get(w, Fraction(0)) + b * c
            if nc == 0:
                terms.pop(w, None)
            else:
                terms[w] = nc
    return Polynomial(terms)


def word_mul(left: Word, p: Polynomial, right: Word) -> Polynomial:
    """The two-sided product left * p * right in the free algebra."""
    return Polynomial({left + w + right: c for w, c in p.terms.items()})


def leading_word(p: Polynomial, order) -> Word:
    return p.leading_word(order)
