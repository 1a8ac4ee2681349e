"""Canonical hereditarily finite sets and the executable set operations.

Every value is an immutable, canonically ordered tree: children are
deduplicated and sorted rank-first (then by cardinality, then lexicographically
on children), so extensional equality coincides with structural equality and
each set has exactly one literal rendering.  Nodes are hash-consed through a
weak intern table purely as an optimization; equality is content-based and
never depends on sharing.

The literal grammar is ``set := '{' (set (',' set)*)? '}'`` with insignificant
whitespace.  The empty set prints as ``{}``; emission always uses canonical
child order.
"""

from __future__ import annotations

import weakref
from typing import Iterable, Iterator, NamedTuple

from .errors import CapExceeded, NotAPair, ParseError

__all__ = [
    "DEFAULT_POWERSET_CAP",
    "EMPTY",
    "HfSet",
    "OrderedPairView",
    "canonical_compare",
    "canonical_key",
    "cartesian",
    "hfs_literal",
    "is_member",
    "iter_hfs_by_rank",
    "make_set",
    "ordered_pair",
    "parse_hfs",
    "powerset",
    "union_family",
    "unpair",
    "von_neumann",
]

DEFAULT_POWERSET_CAP = 20


class HfSet:
    """A hereditarily finite set in canonical form.

    ``children`` is the tuple of member sets, duplicate-free and sorted under
    :func:`canonical_compare`; ``rank`` is the nesting depth (0 for the empty
    set).  Instances come from the module factories (:func:`make_set`,
    :func:`parse_hfs`, the set-forming operations), never from direct
    construction, and are immutable value objects.
    """

    __slots__ = ("children", "rank", "_hash", "_key", "_members", "_pair", "__weakref__")

    def __init__(self, children, rank, key, hashed):
        self.children = children
        self.rank = rank
        self._key = key
        self._hash = hashed
        self._members = None  # lazy frozenset of children
        self._pair = None     # lazy ordered-pair decode: view or _NOT_A_PAIR

    # Equality is extensional.  Interned values usually short-circuit on
    # identity; the structural fallback keeps equality correct regardless.
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, HfSet):
            return NotImplemented
        return self._hash == other._hash and self.children == other.children

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def __len__(self) -> int:
        return len(self.children)

    def __iter__(self) -> Iterator["HfSet"]:
        return iter(self.children)

    def __contains__(self, x) -> bool:
        return is_member(x, self)

    def __repr__(self) -> str:
        return hfs_literal(self)


class OrderedPairView(NamedTuple):
    """Decoded view of an encoded ordered pair."""

    first: HfSet
    second: HfSet


_NOT_A_PAIR = object()

_intern: "weakref.WeakValueDictionary[tuple, HfSet]" = weakref.WeakValueDictionary()


def _node(children: tuple) -> HfSet:
    """Intern a children tuple that is already sorted and duplicate-free."""
    node = _intern.get(children)
    if node is None:
        rank = 1 + max((c.rank for c in children), default=-1)
        key = (rank, len(children), tuple(c._key for c in children))
        hashed = hash((rank, len(children)) + tuple(c._hash for c in children))
        node = _intern.setdefault(children, HfSet(children, rank, key, hashed))
    return node


def canonical_key(s: HfSet):
    """Opaque sort key realizing the canonical total order on sets."""
    return s._key


def make_set(elems: Iterable[HfSet] = ()) -> HfSet:
    """The set of the given elements, deduplicated and canonically ordered."""
    items = sorted(elems, key=canonical_key)
    out = []
    for x in items:
        if not out or x is not out[-1] and x != out[-1]:
            out.append(x)
    return _node(tuple(out))


def _from_sorted(children: tuple) -> HfSet:
    # Fast path for callers that hold an already-canonical children tuple.
    return _node(children)


EMPTY = make_set(())


def canonical_compare(a: HfSet, b: HfSet) -> int:
    """-1/0/1 ordering: rank first, then cardinality, then children."""
    if a is b or a._key == b._key:
        return 0
    return -1 if a._key < b._key else 1


def _members(a: HfSet) -> frozenset:
    m = a._members
    if m is None:
        m = frozenset(a.children)
        a._members = m
    return m


def is_member(x: HfSet, a: HfSet) -> bool:
    """Membership x in a."""
    return x in _members(a)


def union_family(s: HfSet) -> HfSet:
    """Union of the members of ``s`` (sets of sets)."""
    return make_set(x for child in s.children for x in child.children)


def powerset(a: HfSet, cap: int = DEFAULT_POWERSET_CAP) -> HfSet:
    """The set of all subsets of ``a``.

    Guarded: |a| must not exceed ``cap`` (2**cap subsets would follow).
    """
    n = len(a.children)
    if n > cap:
        raise CapExceeded(f"powerset of {n} elements exceeds cap {cap}")
    children = a.children
    subsets = []
    for mask in range(1 << n):
        picked = tuple(children[i] for i in range(n) if mask >> i & 1)
        subsets.append(_from_sorted(picked))  # subsequence of sorted is sorted
    return make_set(subsets)


def ordered_pair(x: HfSet, y: HfSet) -> HfSet:
    """The pair-set encoding {{x},{x,y}}; collapses to {{x}} when x = y."""
    sx = _from_sorted((x,))
    if x is y or x == y:
        return _from_sorted((sx,))
    sxy = make_set((x, y))
    return make_set((sx, sxy))


def unpair(p: HfSet) -> OrderedPairView:
    """Decode an encoded ordered pair; NotAPair if ``p`` has no such shape."""
    view = p._pair
    if view is None:
        view = _decode_pair(p)
        p._pair = view
    if view is _NOT_A_PAIR:
        raise NotAPair(f"{p!r} is not an ordered-pair encoding")
    return view


def _decode_pair(p: HfSet):
    cs = p.children
    if len(cs) == 1:
        (inner,) = cs
        if len(inner.children) == 1:
            x = inner.children[0]
            return OrderedPairView(x, x)
        return _NOT_A_PAIR
    if len(cs) == 2:
        # Canonical order puts {x} before {x,y}: equal or lower rank, lower
        # cardinality.
        small, big = cs
        if len(small.children) == 1 and len(big.children) == 2:
            x = small.children[0]
            u, v = big.children
            if x == u:
                return OrderedPairView(x, v)
            if x == v:
                return OrderedPairView(x, u)
        return _NOT_A_PAIR
    return _NOT_A_PAIR


def cartesian(a: HfSet, b: HfSet) -> HfSet:
    """The set of encoded pairs (x, y) for x in a, y in b."""
    return make_set(ordered_pair(x, y) for x in a.children for y in b.children)


def hfs_literal(s: HfSet) -> str:
    """Canonical literal text for ``s``."""
    return "{" + ",".join(hfs_literal(c) for c in s.children) + "}"


def parse_hfs(text: str) -> HfSet:
    """Parse a set literal; whitespace is insignificant."""
    value, pos = _parse_set(text, _skip_ws(text, 0))
    pos = _skip_ws(text, pos)
    if pos != len(text):
        raise ParseError("trailing input after set literal", pos)
    return value


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_set(text: str, pos: int) -> tuple[HfSet, int]:
    if pos >= len(text) or text[pos] != "{":
        raise ParseError("expected '{'", pos)
    pos = _skip_ws(text, pos + 1)
    elems = []
    if pos < len(text) and text[pos] == "}":
        return make_set(elems), pos + 1
    while True:
        elem, pos = _parse_set(text, pos)
        elems.append(elem)
        pos = _skip_ws(text, pos)
        if pos >= len(text):
            raise ParseError("unterminated set literal", pos)
        if text[pos] == ",":
            pos = _skip_ws(text, pos + 1)
            continue
        if text[pos] == "}":
            return make_set(elems), pos + 1
        raise ParseError("expected ',' or '}'", pos)


_naturals: list[HfSet] = [EMPTY]


def von_neumann(n: int) -> HfSet:
    """The n-th von Neumann natural: 0 = {} and k+1 = k U {k}."""
    if n < 0:
        raise ValueError("natural expected")
    while len(_naturals) <= n:
        # Ranks strictly increase along the naturals, so the prefix tuple is
        # already in canonical order.
        _naturals.append(_from_sorted(tuple(_naturals)))
    return _naturals[n]


def iter_hfs_by_rank(max_rank: int, cap: int = DEFAULT_POWERSET_CAP) -> list[HfSet]:
    """All sets of rank <= max_rank, in canonical order."""
    universe = [EMPTY]
    for _ in range(max_rank):
        universe = list(powerset(make_set(universe), cap=cap).children)
    return universe
