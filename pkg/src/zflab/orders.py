"""Finite relations over a carrier set and the three order disciplines.

A Relation pairs a carrier with a set of encoded ordered pairs; the set of
pairs is the source of truth and a dense boolean matrix indexed by canonical
carrier order is kept alongside for fast property checks.  The three order
kinds deliberately follow three different defining conditions and are not
harmonized:

* WellOrder: total (diagonal included), antisymmetric, transitive; on finite
  carriers this coincides with the subset-least formulation that
  :func:`well_order_literal` checks by enumerating every nonempty subset.
* PartialOrderWithLeast: reflexive, antisymmetric, transitive, and a least
  element whenever the carrier is nonempty.
* UniqueUniversal: exactly one element related to everything, with no other
  requirement.

The checkers answer exactly these conditions; on the empty carrier the first
two hold vacuously while the third fails, and that asymmetry is preserved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping, Optional

from .errors import (
    CapExceeded,
    NoLeast,
    NotAPair,
    NotLiftShaped,
    NotUniquelySatisfied,
    PairOutOfCarrier,
    UnboundVariable,
)
from .formula import Formula, _eval, free_vars
from .hfs import (
    DEFAULT_POWERSET_CAP,
    HfSet,
    canonical_key,
    cartesian,
    make_set,
    ordered_pair,
    unpair,
)

__all__ = [
    "OrderKind", "PropertyReport", "Relation", "enumerate_orders",
    "least_element", "lift_order", "order_from_formula", "project_order",
    "properties_from_rows", "relation_over", "relation_properties",
    "satisfies", "well_order_literal",
]


class OrderKind(Enum):
    WELL_ORDER = "wellorder"
    PARTIAL_ORDER_WITH_LEAST = "pol"
    UNIQUE_UNIVERSAL = "unique-universal"


@dataclass(frozen=True)
class PropertyReport:
    """Structural facts about a finite relation.

    ``least`` is the unique element related to every element when exactly one
    such element exists, else None.  ``total`` includes the diagonal: every
    pair of elements, equal or not, must be related one way or the other.
    """

    reflexive: bool
    antisymmetric: bool
    transitive: bool
    total: bool
    least: Optional[Any]


class Relation:
    """A set of encoded pairs over a fixed carrier, with a matrix view."""

    __slots__ = ("carrier", "pairs", "elements", "rows")

    def __init__(self, carrier: HfSet, pairs: HfSet, elements: tuple, rows: tuple):
        self.carrier = carrier
        self.pairs = pairs
        self.elements = elements  # carrier children, canonical order
        self.rows = rows          # rows[i] bit j set iff (e_i, e_j) in pairs

    @property
    def matrix(self) -> tuple:
        n = len(self.elements)
        return tuple(
            tuple(bool(self.rows[i] >> j & 1) for j in range(n)) for i in range(n)
        )

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.carrier == other.carrier and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.carrier, self.pairs))

    def __repr__(self):
        return f"Relation(carrier={self.carrier!r}, pairs={self.pairs!r})"


def relation_over(carrier: HfSet, pairs: HfSet) -> Relation:
    """Build a Relation, validating every pair decodes into the carrier."""
    elements = carrier.children
    index = {e: i for i, e in enumerate(elements)}
    rows = [0] * len(elements)
    for p in pairs.children:
        try:
            x, y = unpair(p)
        except NotAPair:
            raise PairOutOfCarrier(f"{p!r} is not an encoded pair") from None
        i = index.get(x)
        j = index.get(y)
        if i is None or j is None:
            raise PairOutOfCarrier(f"pair {p!r} has a component outside the carrier")
        rows[i] |= 1 << j
    return Relation(carrier, pairs, elements, tuple(rows))


def _rows_reflexive(rows) -> bool:
    return all(r >> i & 1 for i, r in enumerate(rows))


def _rows_total(rows) -> bool:
    n = len(rows)
    for i in range(n):
        for j in range(i, n):
            if not (rows[i] >> j & 1 or rows[j] >> i & 1):
                return False
    return True


def _rows_antisymmetric(rows) -> bool:
    n = len(rows)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i] >> j & 1 and rows[j] >> i & 1:
                return False
    return True


def _rows_transitive(rows) -> bool:
    n = len(rows)
    for i in range(n):
        ri = rows[i]
        for j in range(n):
            if ri >> j & 1 and rows[j] & ~ri:
                return False
    return True


def _universal_indices(rows) -> list:
    full = (1 << len(rows)) - 1
    return [i for i, r in enumerate(rows) if r == full]


def properties_from_rows(rows, elements) -> PropertyReport:
    """Property report for a dense relation over an indexed element tuple."""
    universal = _universal_indices(rows)
    return PropertyReport(
        reflexive=_rows_reflexive(rows),
        antisymmetric=_rows_antisymmetric(rows),
        transitive=_rows_transitive(rows),
        total=_rows_total(rows),
        least=elements[universal[0]] if len(universal) == 1 else None,
    )


def relation_properties(r: Relation) -> PropertyReport:
    return properties_from_rows(r.rows, r.elements)


def _rows_satisfy(rows, kind: OrderKind) -> bool:
    if kind is OrderKind.WELL_ORDER:
        return _rows_total(rows) and _rows_antisymmetric(rows) and _rows_transitive(rows)
    if kind is OrderKind.PARTIAL_ORDER_WITH_LEAST:
        return (
            _rows_reflexive(rows)
            and _rows_antisymmetric(rows)
            and _rows_transitive(rows)
            and (len(rows) == 0 or bool(_universal_indices(rows)))
        )
    if kind is OrderKind.UNIQUE_UNIVERSAL:
        return len(_universal_indices(rows)) == 1
    raise TypeError(f"unknown order kind: {kind!r}")


def satisfies(r: Relation, kind: OrderKind) -> bool:
    """Does the relation meet the defining condition of ``kind``?"""
    return _rows_satisfy(r.rows, kind)


def _rows_well_order_literal(rows) -> bool:
    # The subset clause spelled out: every nonempty subset of the carrier has
    # a member related to all members of the subset.
    n = len(rows)
    for i in range(n):
        for j in range(n):
            if not (rows[i] >> j & 1 or rows[j] >> i & 1):
                return False
            if i != j and rows[i] >> j & 1 and rows[j] >> i & 1:
                return False
            for k in range(n):
                if rows[i] >> j & 1 and rows[j] >> k & 1 and not rows[i] >> k & 1:
                    return False
    for subset in range(1, 1 << n):
        if not any(
            subset >> m & 1 and rows[m] & subset == subset for m in range(n)
        ):
            return False
    return True


def well_order_literal(r: Relation, cap: int = DEFAULT_POWERSET_CAP) -> bool:
    """Well-order check with the least-element clause enumerated verbatim."""
    if len(r.elements) > cap:
        raise CapExceeded(f"subset enumeration over {len(r.elements)} elements exceeds cap {cap}")
    return _rows_well_order_literal(r.rows)


def least_element(r: Relation) -> HfSet:
    """The unique element related to every element; NoLeast otherwise."""
    universal = _universal_indices(r.rows)
    if len(universal) != 1:
        raise NoLeast(f"{len(universal)} universal elements over {r.carrier!r}")
    return r.elements[universal[0]]


def order_from_formula(a: HfSet, phi: Formula, env: Mapping = (), var: str | None = None) -> Relation:
    """Order ``a`` by a formula that picks out exactly one element.

    The relation holds between x1 and x2 when x1 = x2 or the formula holds at
    x1; when the formula holds at exactly one element the result is a partial
    order whose least element is that witness.  The element variable is
    ``var`` or, by default, the unique free variable not bound by ``env``.
    """
    scope = dict(env)
    if var is None:
        unbound = sorted(free_vars(phi) - scope.keys())
        if len(unbound) != 1:
            raise UnboundVariable(
                f"cannot infer the element variable from free variables {unbound}"
            )
        var = unbound[0]
    holds = []
    for x in a.children:
        scope[var] = x
        holds.append(_eval(phi, scope))
    if sum(holds) != 1:
        raise NotUniquelySatisfied(
            f"formula holds at {sum(holds)} elements of {a!r}, need exactly 1"
        )
    pairs = []
    for i, x1 in enumerate(a.children):
        for x2 in a.children:
            if x1 == x2 or holds[i]:
                pairs.append(ordered_pair(x1, x2))
    return relation_over(a, make_set(pairs))


_enum_cache: dict = {}


def _pair_table(a: HfSet) -> list:
    # enc[i][j] is the encoded pair (e_i, e_j); shared across enumerations.
    elements = a.children
    return [[ordered_pair(x, y) for y in elements] for x in elements]


def enumerate_orders(a: HfSet, kind: OrderKind, cross_check: bool = False) -> tuple:
    """All relations over ``a`` of the given kind, canonically ordered.

    Exhaustive over the 2**(n*n) subsets of a x a, so the carrier is capped at
    4 elements.  Well-orders are generated from permutations (n! witnesses);
    ``cross_check=True`` re-derives them from the brute-force filter for
    carriers of at most 3 elements and asserts agreement.
    """
    key = (a, kind)
    cached = _enum_cache.get(key)
    if cached is not None and not cross_check:
        return cached
    n = len(a.children)
    if n > 4:
        raise CapExceeded(f"order enumeration over {n} elements exceeds cap 4")
    enc = _pair_table(a)
    found = []
    if kind is OrderKind.WELL_ORDER:
        for perm in itertools.permutations(range(n)):
            pairs = [
                enc[perm[i]][perm[j]] for i in range(n) for j in range(i, n)
            ]
            found.append(relation_over(a, make_set(pairs)))
    else:
        for rows in itertools.product(range(1 << n), repeat=n):
            if _rows_satisfy(rows, kind):
                pairs = [
                    enc[i][j] for i in range(n) for j in range(n) if rows[i] >> j & 1
                ]
                found.append(relation_over(a, make_set(pairs)))
    result = tuple(sorted(found, key=lambda r: canonical_key(r.pairs)))
    if cross_check and kind is OrderKind.WELL_ORDER and n <= 3:
        brute = []
        for rows in itertools.product(range(1 << n), repeat=n):
            if _rows_satisfy(rows, kind):
                pairs = [
                    enc[i][j] for i in range(n) for j in range(n) if rows[i] >> j & 1
                ]
                brute.append(relation_over(a, make_set(pairs)))
        assert set(brute) == set(result), "permutation route disagrees with subset filter"
    _enum_cache[key] = result
    return result


def lift_order(r: Relation, a: HfSet | None = None) -> Relation:
    """Transport a relation over A to its copy over {A} x A via tagging."""
    if a is None:
        a = r.carrier
    elif a != r.carrier:
        raise ValueError("carrier mismatch in lift")
    tag = make_set((a,))
    carrier = cartesian(tag, a)
    tagged = {x: ordered_pair(a, x) for x in a.children}
    pairs = []
    for p in r.pairs.children:
        x, y = unpair(p)
        pairs.append(ordered_pair(tagged[x], tagged[y]))
    return relation_over(carrier, make_set(pairs))


def project_order(q: Relation, a: HfSet) -> Relation:
    """Inverse of :func:`lift_order`: strip the {A} tag off both components."""
    expected_carrier = cartesian(make_set((a,)), a)
    if q.carrier != expected_carrier:
        raise NotLiftShaped(f"carrier is not the tagged copy of {a!r}")
    pairs = []
    for p in q.pairs.children:
        left, right = unpair(p)
        _, x = unpair(left)
        _, y = unpair(right)
        pairs.append(ordered_pair(x, y))
    return relation_over(a, make_set(pairs))
