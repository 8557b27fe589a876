"""Monomial orders on words: deg-lex and the two tower orders.

A monomial order is a well order on the free monoid compatible with
concatenation on both sides.  Besides plain deg-lex we implement the two
tower orders used for stable-letter extensions:

* first tower order -- the alphabet splits as Y (inner letters) and Z
  (stable letters).  A word factors uniquely as u0 z1 u1 ... zk uk with
  zi in Z, ui in Y*; its weight is (k, z1..zk, u0..uk), and words compare
  by weight: the Z-letter count first, then the Z letters positionally,
  then the Y* segments positionally by the inner order.

* second tower order -- Z = {t, t^-1} for a single stable letter t, and
  the weight is (k1, k2, signs..., segments...) where k1 counts t^-1 and
  k2 counts t.  Counting inverse occurrences first is what lets a rule
  trade one t^-1 for many t's and still decrease.

Weights of different arities compare by their count components first, so
no explicit padding is ever needed.  Orders may be nested: the Y* order of
either tower order can itself be a tower order.
"""

from __future__ import annotations

from typing import Sequence, Tuple

from .words import Letter, Word


class OrderDomainError(KeyError):
    """A word contains a letter the order is not defined over."""


def _rank_table(ranking: Sequence[Letter]) -> dict:
    return {l: i for i, l in enumerate(ranking)}


class DegLex:
    """Compare by length, then lexicographically by an explicit letter
    ranking (earlier in the ranking = greater letter)."""

    __slots__ = ("ranking", "_rank")

    def __init__(self, ranking: Sequence[Letter]):
        self.ranking = tuple(ranking)
        self._rank = _rank_table(self.ranking)

    def letters(self) -> Tuple[Letter, ...]:
        return self.ranking

    def cmp(self, u: Word, v: Word) -> int:
        if len(u) != len(v):
            return 1 if len(u) > len(v) else -1
        rank = self._rank
        for a, b in zip(u, v):
            if a != b:
                try:
                    ra, rb = rank[a], rank[b]
                except KeyError as e:
                    raise OrderDomainError(f"letter {e.args[0]} not ranked")
                return 1 if ra < rb else -1
        return 0

    def describe(self) -> str:
        return "deglex(" + " ".join(str(l) for l in self.ranking) + ")"


def _split(w: Word, zset: frozenset):
    """Factor w as u0 z1 u1 ... zk uk; returns (z letters, segments)."""
    zs = []
    segs = []
    cur: list = []
    for l in w:
        if l in zset:
            zs.append(l)
            segs.append(tuple(cur))
            cur = []
        else:
            cur.append(l)
    segs.append(tuple(cur))
    return zs, segs


class FirstTower:
    __slots__ = ("inner", "zranking", "_zrank", "_zset")

    def __init__(self, inner, zranking: Sequence[Letter]):
        self.inner = inner
        self.zranking = tuple(zranking)
        self._zrank = _rank_table(self.zranking)
        self._zset = frozenset(self.zranking)

    def letters(self) -> Tuple[Letter, ...]:
        return self.inner.letters() + self.zranking

    def cmp(self, u: Word, v: Word) -> int:
        zu, su = _split(u, self._zset)
        zv, sv = _split(v, self._zset)
        if len(zu) != len(zv):
            return 1 if len(zu) > len(zv) else -1
        zrank = self._zrank
        for a, b in zip(zu, zv):
            if a != b:
                return 1 if zrank[a] < zrank[b] else -1
        for a, b in zip(su, sv):
            c = self.inner.cmp(a, b)
            if c:
                return c
        return 0

    def describe(self) -> str:
        return ("first(" + self.inner.describe() + "; "
                + " ".join(str(l) for l in self.zranking) + ")")


class SecondTower:
    """Tower order for a single stable letter t, comparing the number of
    t^-1 occurrences, then of t, then the sign pattern, then segments."""

    __slots__ = ("inner", "t", "zranking", "_zrank", "_zset")

    def __init__(self, inner, t: Letter, zranking: Sequence[Letter] = None):
        if t.sign < 0:
            t = t.inverse()
        self.inner = inner
        self.t = t
        self.zranking = tuple(zranking) if zranking else (t.inverse(), t)
        self._zrank = _rank_table(self.zranking)
        self._zset = frozenset((t, t.inverse()))

    def letters(self) -> Tuple[Letter, ...]:
        return self.inner.letters() + (self.t, self.t.inverse())

    def cmp(self, u: Word, v: Word) -> int:
        zu, su = _split(u, self._zset)
        zv, sv = _split(v, self._zset)
        tinv = self.t.inverse()
        k1u = sum(1 for l in zu if l == tinv)
        k1v = sum(1 for l in zv if l == tinv)
        if k1u != k1v:
            return 1 if k1u > k1v else -1
        k2u, k2v = len(zu) - k1u, len(zv) - k1v
        if k2u != k2v:
            return 1 if k2u > k2v else -1
        zrank = self._zrank
        for a, b in zip(zu, zv):
            if a != b:
                return 1 if zrank[a] < zrank[b] else -1
        for a, b in zip(su, sv):
            c = self.inner.cmp(a, b)
            if c:
                return c
        return 0

    def describe(self) -> str:
        return ("second(" + self.inner.describe() + "; "
                + " ".join(str(l) for l in self.zranking) + ")")


def compare(u: Word, v: Word, order) -> int:
    """Total comparison: 1 if u > v, -1 if u < v, 0 iff u == v."""
    return order.cmp(u, v)


def greater(u: Word, v: Word, order) -> bool:
    return order.cmp(u, v) > 0


def sort_words(ws, order, reverse: bool = False):
    import functools
    return sorted(ws, key=functools.cmp_to_key(order.cmp), reverse=reverse)
