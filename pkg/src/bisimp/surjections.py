"""Monotone surjections [n] -> [n-r] and pairs of them.

A surjection is stored by the set of its collapse points
``{i : a(i) = a(i+1)}``, kept increasing.  It is shown as the decreasing
tuple ``(i_r, ..., i_1)``; as a function it equals the composite
``a_{i_1} o a_{i_2} o ... o a_{i_r}`` of elementary maps
``a_i(j) = j if j <= i else j - 1``.  The matching degeneracy composite is
``s_{i_r} o ... o s_{i_1}`` (``s_{i_1}`` applied first).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class SurjectionError(ValueError):
    pass


class InvalidWord(SurjectionError):
    pass


class LevelMismatch(SurjectionError):
    pass


class ParseError(SurjectionError):
    pass


def elementary(i: int, j: int) -> int:
    return j if j <= i else j - 1


@dataclass(frozen=True, order=True)
class SurjectionTuple:
    n: int
    indices: tuple  # increasing collapse points i_1 < ... < i_r

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if self.n < 0:
            raise SurjectionError("negative level")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise SurjectionError(f"indices not strictly increasing: {idx}")
        if idx and (idx[0] < 0 or idx[-1] > self.n - 1):
            raise SurjectionError(f"index out of range for n={self.n}: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def empty(cls, n):
        return cls(n, ())

    @classmethod
    def from_display(cls, n, display: Sequence[int]):
        """From the decreasing display form ``(i_r, ..., i_1)``."""
        disp = tuple(display)
        if any(b >= a for a, b in zip(disp, disp[1:])):
            raise SurjectionError(f"display tuple must be strictly decreasing: {disp}")
        return cls(n, tuple(reversed(disp)))

    @property
    def r(self):
        return len(self.indices)

    @property
    def target(self):
        """``b(a) = n - r``."""
        return self.n - self.r

    @property
    def display(self):
        return tuple(reversed(self.indices))

    @property
    def is_identity(self):
        return not self.indices

    def __call__(self, j: int) -> int:
        if not 0 <= j <= self.n:
            raise ValueError(f"{j} outside [0, {self.n}]")
        return j - sum(1 for i in self.indices if i < j)

    def as_function(self):
        return tuple(self(j) for j in range(self.n + 1))

    def application_order(self):
        """Degeneracy indices in the order they are applied (``s_{i_1}`` first)."""
        return self.indices

    def __str__(self):
        return format_tuple(self.display)

    def __repr__(self):
        return f"S{self.n}{self}"


def format_tuple(display):
    return "(" + ",".join(str(i) for i in display) + ")"


def enumerate_S(n: int, r: int | None = None):
    """All of S(n) (or S(n, n-r)), ordered by r then by display tuple descending."""
    if n < 0:
        raise SurjectionError("negative level")
    rs = range(n + 1) if r is None else [r]
    out = []
    for rr in rs:
        subsets = itertools.combinations(range(n), rr)
        group = [SurjectionTuple(n, s) for s in subsets]
        group.sort(key=lambda a: a.display, reverse=True)
        out.extend(group)
    return out


def compose_word(word: Sequence[int], n: int):
    """Evaluate ``a_{w_0} o a_{w_1} o ... o a_{w_last}`` on [n] as a value tuple."""
    level = n
    values = list(range(n + 1))
    for i in reversed(list(word)):
        if not 0 <= i <= level - 1:
            raise InvalidWord(f"a_{i} is not defined on [{level}]")
        values = [elementary(i, v) for v in values]
        level -= 1
    return tuple(values), level


def canonicalize(word: Iterable[int], n: int) -> SurjectionTuple:
    """Normal form of the composite ``a_{w_0} o ... o a_{w_last}`` (rightmost first).

    The rewriting ``a_b a_a -> a_a a_{b+1}`` for ``b >= a`` sorts the word
    into strictly increasing order.
    """
    word = [int(i) for i in word]
    compose_word(word, n)  # validity
    w = list(word)
    changed = True
    while changed:
        changed = False
        for k in range(len(w) - 1):
            if w[k] >= w[k + 1]:
                w[k], w[k + 1] = w[k + 1], w[k] + 1
                changed = True
    return SurjectionTuple(n, tuple(w))


def from_function(values: Sequence[int]) -> SurjectionTuple:
    """Recover the tuple from a monotone surjection given by its values on [n]."""
    values = list(values)
    n = len(values) - 1
    if values[0] != 0 or any(b - a not in (0, 1) for a, b in zip(values, values[1:])):
        raise SurjectionError(f"not a monotone surjection onto an initial segment: {values}")
    return SurjectionTuple(n, tuple(i for i in range(n) if values[i] == values[i + 1]))


def leq(s: SurjectionTuple, t: SurjectionTuple) -> bool:
    """``s <= t`` iff ``s(i) >= t(i)`` for every i in [n]."""
    if s.n != t.n:
        raise LevelMismatch(f"levels differ: {s.n} vs {t.n}")
    return all(a >= b for a, b in zip(s.as_function(), t.as_function()))


@dataclass(frozen=True, order=True)
class PairIndex:
    first: SurjectionTuple
    second: SurjectionTuple

    @property
    def level(self):
        return (self.first.n, self.second.n)

    @property
    def target(self):
        return (self.first.target, self.second.target)

    @property
    def sizes(self):
        return (self.first.r, self.second.r)

    def leq(self, other: "PairIndex") -> bool:
        return leq(self.first, other.first) and leq(self.second, other.second)

    def __str__(self):
        return f"({self.first},{self.second})"


def enumerate_pairs_S(k1: int, k2: int):
    return [PairIndex(a, b) for a in enumerate_S(k1) for b in enumerate_S(k2)]


_TOKEN = re.compile(r"\s*([()∅,]|\d+)")


def _tokens(text):
    pos = 0
    text = text.strip()
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _parse_node(toks, k):
    """A node is ``∅``, an int, or a parenthesized list of nodes."""
    t = toks[k]
    if t == "∅":
        return (), k + 1
    if t.isdigit():
        return int(t), k + 1
    if t != "(":
        raise ParseError(f"unexpected token {t!r}")
    items = []
    k += 1
    if toks[k] == ")":
        return tuple(items), k + 1
    while True:
        item, k = _parse_node(toks, k)
        items.append(item)
        if k >= len(toks):
            raise ParseError("unbalanced parentheses")
        if toks[k] == ")":
            return tuple(items), k + 1
        if toks[k] != ",":
            raise ParseError(f"expected ',' got {toks[k]!r}")
        k += 1


def _parse(text):
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty input")
    try:
        node, k = _parse_node(toks, 0)
    except IndexError:
        raise ParseError(f"truncated input {text!r}") from None
    if k != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return node


def _as_display(node):
    if isinstance(node, int):
        return (node,)
    if all(isinstance(x, int) for x in node):
        return tuple(node)
    raise ParseError(f"not a flat index tuple: {node!r}")


def parse_tuple(text: str, n: int) -> SurjectionTuple:
    """Parse ``()``, ``∅``, ``(0)`` or ``(2,0)`` as an element of S(n)."""
    return SurjectionTuple.from_display(n, _as_display(_parse(text)))


def parse_pair(text: str, k1: int, k2: int) -> PairIndex:
    """Parse ``((1),(1,0))`` or ``(∅,(0))`` as an element of S(k1) x S(k2)."""
    node = _parse(text)
    if not isinstance(node, tuple) or len(node) != 2:
        raise ParseError(f"expected a pair, got {text!r}")
    return PairIndex(SurjectionTuple.from_display(k1, _as_display(node[0])),
                     SurjectionTuple.from_display(k2, _as_display(node[1])))


__all__ = [
    "SurjectionTuple", "PairIndex", "enumerate_S", "enumerate_pairs_S", "canonicalize",
    "compose_word", "from_function", "leq", "parse_tuple", "parse_pair",
    "SurjectionError", "InvalidWord", "LevelMismatch", "ParseError",
]
