"""Independent brute-force oracle for the pipeline's end results.

Everything here is computed directly from set membership: choice functions by
taking one element per member, order counts by filtering every subset of
A x A.  The module deliberately shares only the set kernel with the pipeline,
so agreement between the two routes is evidence rather than tautology.  Kinds
are addressed by their serialized names ("wellorder", "pol",
"unique-universal"); enum values from other modules are accepted and read via
their ``.value``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceeded, EmptyFamily
from .hfs import HfSet, canonical_key, hfs_literal, is_member, make_set, ordered_pair

__all__ = [
    "DEFAULT_PRODUCT_CAP",
    "EquivalenceVerdict",
    "count_orders",
    "enumerate_choice_functions",
    "verify_equivalence",
]

DEFAULT_PRODUCT_CAP = 10**6

_KINDS = ("wellorder", "pol", "unique-universal")


def _kind_name(kind) -> str:
    name = getattr(kind, "value", kind)
    if name not in _KINDS:
        raise ValueError(f"unknown order kind: {kind!r}")
    return name


def _family_members(family) -> tuple:
    members = getattr(family, "members", family)
    if not isinstance(members, HfSet):
        raise TypeError("expected a family of sets")
    if len(members) == 0:
        raise EmptyFamily("family has no members")
    return members.children


def enumerate_choice_functions(family, cap: int = DEFAULT_PRODUCT_CAP) -> tuple:
    """Graphs of all functions picking one element from each member.

    Returns canonically sorted pair-set graphs; empty when any member is
    empty.  The member-size product must stay within ``cap``.
    """
    members = _family_members(family)
    count = 1
    for a in members:
        count *= len(a)
    if count > cap:
        raise CapExceeded(f"{count} choice functions exceed cap {cap}")
    graphs = []
    for picks in itertools.product(*[a.children for a in members]):
        graphs.append(make_set(ordered_pair(a, x) for a, x in zip(members, picks)))
    return tuple(sorted(graphs, key=canonical_key))


def _relation_holds(kind_name: str, elements, rel: HfSet) -> bool:
    # Property checks phrased directly over set membership.
    def related(x, y):
        return is_member(ordered_pair(x, y), rel)

    if kind_name == "wellorder":
        for x in elements:
            for y in elements:
                if not (related(x, y) or related(y, x)):
                    return False
                if x != y and related(x, y) and related(y, x):
                    return False
                for z in elements:
                    if related(x, y) and related(y, z) and not related(x, z):
                        return False
        return True
    if kind_name == "pol":
        for x in elements:
            if not related(x, x):
                return False
            for y in elements:
                if x != y and related(x, y) and related(y, x):
                    return False
                for z in elements:
                    if related(x, y) and related(y, z) and not related(x, z):
                        return False
        if elements and not any(
            all(related(m, b) for b in elements) for m in elements
        ):
            return False
        return True
    if kind_name == "unique-universal":
        universal = [
            m for m in elements if all(related(m, b) for b in elements)
        ]
        return len(universal) == 1
    raise ValueError(kind_name)


def _count_on_carrier(elements, kind_name: str) -> int:
    n = len(elements)
    count = 0
    all_pairs = [(x, y) for x in elements for y in elements]
    for mask in range(1 << (n * n)):
        rel = make_set(
            ordered_pair(x, y)
            for bit, (x, y) in enumerate(all_pairs)
            if mask >> bit & 1
        )
        if _relation_holds(kind_name, elements, rel):
            count += 1
    return count


def _nested_singletons(n: int) -> list:
    out = []
    current = make_set(())
    for _ in range(n):
        out.append(current)
        current = make_set((current,))
    return out


def _von_neumann_chain(n: int) -> list:
    out = []
    for _ in range(n):
        out.append(make_set(out))
    return out


def count_orders(n: int, kind) -> int:
    """Number of relations of the given kind over an n-element set.

    Brute force over all 2**(n*n) pair subsets, n at most 4.  For n <= 3 the
    count is computed over two structurally different carriers and must agree,
    making it independent of which n-set is used.
    """
    if n > 4:
        raise CapExceeded(f"order counting over {n} elements exceeds cap 4")
    kind_name = _kind_name(kind)
    count = _count_on_carrier(_von_neumann_chain(n), kind_name)
    if n <= 3:
        other = _count_on_carrier(_nested_singletons(n), kind_name)
        assert other == count, "order count depends on the carrier"
    return count


@dataclass(frozen=True)
class EquivalenceVerdict:
    """Both sides of the choice/order equivalence, computed independently."""

    fingerprint: str
    has_choice: bool
    all_members_have_pol: bool

    @property
    def agree(self) -> bool:
        return self.has_choice == self.all_members_have_pol


def _pol_exists(elements) -> bool:
    # Early-exit scan for any reflexive antisymmetric transitive relation
    # with a least element.  Only needed for carriers small enough to scan.
    n = len(elements)
    if n == 0:
        return False
    if n * n > 25:
        raise CapExceeded(f"order search over {n} elements is out of scan range")
    all_pairs = [(x, y) for x in elements for y in elements]
    for mask in range(1 << (n * n)):
        rel = make_set(
            ordered_pair(x, y)
            for bit, (x, y) in enumerate(all_pairs)
            if mask >> bit & 1
        )
        if _relation_holds("pol", elements, rel):
            return True
    return False


def verify_equivalence(family) -> EquivalenceVerdict:
    """Check that a choice function exists iff every member admits an order
    with a least element; both sides are brute-forced separately."""
    members = _family_members(family)
    # has_choice by actual enumeration, not by the member-size shortcut.
    graphs = enumerate_choice_functions(make_set(members), cap=DEFAULT_PRODUCT_CAP)
    has_choice = len(graphs) > 0
    all_pol = all(len(a) > 0 and _pol_exists(a.children) for a in members)
    return EquivalenceVerdict(
        fingerprint=hfs_literal(make_set(members)),
        has_choice=has_choice,
        all_members_have_pol=all_pol,
    )
