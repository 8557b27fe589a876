"""Words over signed alphabets.

A generator symbol may carry an integer index vector (so conjugate families
like a_-3 or b_(1,2,0,-1,0,0,0,0,0,0) are first-class letters).  A letter is
a symbol with a sign; a word is a tuple of letters, the empty tuple being the
group identity, printed "1".  Everything here is immutable and hashable, so
words can be shared freely and used as dictionary keys in polynomials.

Symbols may be declared involutory (their own inverse); such a generator has
no separate negative letter and its square freely cancels.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple


class Symbol(NamedTuple):
    name: str
    indices: Tuple[int, ...] = ()
    involutory: bool = False

    def __str__(self):
        if not self.indices:
            return self.name
        if len(self.indices) == 1:
            return f"{self.name}_{self.indices[0]}"
        return f"{self.name}_({','.join(str(i) for i in self.indices)})"


class Letter(NamedTuple):
    sym: Symbol
    sign: int = 1

    def inverse(self) -> "Letter":
        if self.sym.involutory:
            return self
        return Letter(self.sym, -self.sign)

    def __str__(self):
        return str(self.sym) + ("^-1" if self.sign < 0 else "")


Word = Tuple[Letter, ...]

EMPTY: Word = ()


def sym(name: str, *indices: int, involutory: bool = False) -> Symbol:
    return Symbol(name, tuple(indices), involutory)


def pos(symbol: Symbol) -> Letter:
    return Letter(symbol, 1)


def neg(symbol: Symbol) -> Letter:
    if symbol.involutory:
        return Letter(symbol, 1)
    return Letter(symbol, -1)


def word(*letters: Letter) -> Word:
    return tuple(letters)


def concat(u: Word, v: Word) -> Word:
    """Free-monoid product; no cancellation happens here."""
    return u + v


def inverse(w: Word) -> Word:
    return tuple(l.inverse() for l in reversed(w))


def power(w: Word, n: int) -> Word:
    if n < 0:
        return inverse(w) * (-n)
    return w * n


def free_reduce(w: Word) -> Word:
    """The unique freely reduced form of w (no l * inverse(l) factor)."""
    out: list = []
    for l in w:
        if out and out[-1] == l.inverse():
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def is_freely_reduced(w: Word) -> bool:
    return all(w[i + 1] != w[i].inverse() for i in range(len(w) - 1))


def cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == w[-1].inverse():
        w = free_reduce(w[1:-1])
    return w


def find_factor(w: Word, f: Word, start: int = 0) -> int:
    """Index of the first occurrence of f in w at or after start, or -1."""
    n, m = len(w), len(f)
    if m == 0:
        return start if start <= n else -1
    for i in range(start, n - m + 1):
        if w[i:i + m] == f:
            return i
    return -1


def substitute(w: Word, table) -> Optional[Word]:
    """Apply a letter substitution, freely reducing the result.

    `table` maps positive letters to words; a negative letter maps to the
    inverse of its positive image.  Returns None when some letter of w has
    no image (partial substitutions arise from iterated conjugation maps).
    """
    out: list = []
    for l in w:
        base = l if l.sign > 0 else l.inverse()
        img = table.get(base)
        if img is None:
            return None
        for m in (img if l.sign > 0 else inverse(img)):
            if out and out[-1] == m.inverse():
                out.pop()
            else:
                out.append(m)
    return tuple(out)


# --- word literal syntax -------------------------------------------------
#
# Space separated letters; "1" is the empty word.  A letter is NAME, or
# NAME_k (integer index), or NAME_(i,j,...) (index vector), optionally
# followed by ^e for an integer exponent (|e| repetitions, negative e for
# the inverse letter), e.g.  "a_0 b^-1 a_0^-1"  or  "t_4^2 c_(0,1)".

_TOKEN = re.compile(
    r"""(?P<name>[A-Za-z][A-Za-z0-9']*)
        (?:_(?P<idx>-?\d+)|_\((?P<vec>-?\d+(?:,-?\d+)*)\))?
        (?:\^(?P<exp>-?\d+))?$""",
    re.VERBOSE,
)


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(message)
        self.position = position


def parse_word(text: str, alphabet: Optional[dict] = None) -> Word:
    """Parse a word literal.

    `alphabet` maps symbol keys (the printed symbol, e.g. "a_0") to Symbol;
    when given, unknown symbols are rejected, and involutory symbols are
    honoured.  Without it, plain non-involutory symbols are created.
    """
    letters: list = []
    col = 0
    for tok in text.split():
        col = text.find(tok, col)
        if tok == "1":
            col += len(tok)
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise WordSyntaxError(f"bad letter token {tok!r}", col)
        if m.group("idx") is not None:
            indices: Tuple[int, ...] = (int(m.group("idx")),)
        elif m.group("vec") is not None:
            indices = tuple(int(s) for s in m.group("vec").split(","))
        else:
            indices = ()
        key = str(Symbol(m.group("name"), indices))
        if alphabet is not None:
            if key not in alphabet:
                raise WordSyntaxError(f"unknown generator {key!r}", col)
            s = alphabet[key]
        else:
            s = Symbol(m.group("name"), indices)
        exp = int(m.group("exp")) if m.group("exp") else 1
        if exp == 0:
            col += len(tok)
            continue
        l = Letter(s, 1) if exp > 0 else neg(s)
        if s.involutory and exp < 0:
            l = Letter(s, 1)
        letters.extend([l] * abs(exp))
        col += len(tok)
    return tuple(letters)


def format_word(w: Word) -> str:
    """Inverse of parse_word, with runs of a letter collapsed into powers."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        n = (j - i) * (1 if w[i].sign > 0 else -1)
        if n == 1:
            parts.append(str(w[i].sym))
        elif n == -1:
            parts.append(f"{w[i].sym}^-1")
        else:
            parts.append(f"{w[i].sym}^{n}")
        i = j
    return " ".join(parts)


def alphabet_of(symbols: Iterable[Symbol]) -> dict:
    """Key symbols by their printed form, for parse_word."""
    return {str(s): s for s in symbols}


def signed_letters(symbols: Sequence[Symbol]) -> Tuple[Letter, ...]:
    """All letters over the symbols: x, x^-1 pairs, involutory once."""
    out = []
    for s in symbols:
        out.append(Letter(s, 1))
        if not s.involutory:
            out.append(Letter(s, -1))
    return tuple(out)
