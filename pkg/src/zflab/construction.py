"""The choice-function pipeline: from a family of sets to its choice set.

Starting from a family, every member A is tagged into P_A = {A} x A, each
member's admissible orders are transported onto its tagged copy, and a
combined relation Q collects one transported order per member.  The set Q_S
of all such combined relations is carved out of a universe of candidate
relations by the per-member order condition; each Q then yields one choice
function by taking the least element of every member's restriction, and F_c
collects them all.

The candidate universe U2 is deliberately built in two inequivalent ways:

* ``Literal``: the union over members of the powerset of P_A x P_A.  Every
  candidate covers a single member, so for families with two or more distinct
  nonempty members the filtered Q_S is empty.  That emptiness is a reportable
  finding, not an error.
* ``UnionOfProducts``: the powerset of the union over members of P_A x P_A.
  Candidates here can combine pairs from all members, and Q_S is exactly the
  product of the per-member order sets.  The pipeline enumerates that product
  directly and, at micro scale, re-derives it from the subset filter and
  asserts agreement.

Orders participate only when they have a least element, since the choice
extraction takes exactly that least; on nonempty carriers every admissible
order qualifies, while the vacuous orders on an empty member qualify never,
which is why a family containing the empty set ends with Q_S and F_c empty.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import CapExceeded, EmptyFamily, NoLeast, NotAPair
from .hfs import (
    DEFAULT_POWERSET_CAP,
    EMPTY,
    HfSet,
    canonical_key,
    cartesian,
    hfs_literal,
    is_member,
    make_set,
    ordered_pair,
    powerset,
    union_family,
    unpair,
)
from .orders import (
    OrderKind,
    Relation,
    _rows_satisfy,
    _universal_indices,
    enumerate_orders,
    lift_order,
    relation_over,
)

__all__ = [
    "ChoiceFunction", "DEFAULT_PRODUCT_CAP", "Family", "PipelineReport",
    "U2Variant", "build_Fc", "build_Fc_literal", "build_PA", "build_QS",
    "build_U2_base", "build_universes", "choice_from_Q", "phi1_holds",
    "phi3_holds", "restrict_Q", "run_pipeline", "theorem4_order_from_choice",
]

DEFAULT_PRODUCT_CAP = 10**6


class U2Variant(Enum):
    LITERAL = "literal"
    UNION_OF_PRODUCTS = "union"


class Family:
    """A nonempty set of sets, with its union cached."""

    __slots__ = ("members", "union")

    def __init__(self, members: HfSet):
        if len(members) == 0:
            raise EmptyFamily("a family needs at least one member")
        self.members = members
        self.union = union_family(members)

    @classmethod
    def of(cls, sets: Iterable[HfSet]) -> "Family":
        return cls(make_set(sets))

    @property
    def has_empty_member(self) -> bool:
        return any(len(a) == 0 for a in self.members.children)

    def __eq__(self, other):
        if not isinstance(other, Family):
            return NotImplemented
        return self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __iter__(self):
        return iter(self.members.children)

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"Family({self.members!r})"


class ChoiceFunction:
    """A function graph assigning to each member one of its own elements."""

    __slots__ = ("graph", "_mapping")

    def __init__(self, graph: HfSet):
        mapping = {}
        for p in graph.children:
            try:
                a, x = unpair(p)
            except NotAPair:
                raise ValueError(f"graph element {p!r} is not a pair") from None
            if a in mapping:
                raise ValueError(f"two pairs for member {a!r}")
            if not is_member(x, a):
                raise ValueError(f"chosen element {x!r} is outside {a!r}")
            mapping[a] = x
        self.graph = graph
        self._mapping = mapping

    def __call__(self, a: HfSet) -> HfSet:
        return self._mapping[a]

    @property
    def domain(self) -> tuple:
        return tuple(sorted(self._mapping, key=canonical_key))

    def is_valid_for(self, family: Family) -> bool:
        """Exactly one selection for each family member, nothing else."""
        return set(self._mapping) == set(family.members.children)

    def __eq__(self, other):
        if not isinstance(other, ChoiceFunction):
            return NotImplemented
        return self.graph == other.graph

    def __hash__(self):
        return hash(self.graph)

    def __repr__(self):
        return f"ChoiceFunction({self.graph!r})"


def build_PA(a: HfSet) -> HfSet:
    """The tagged copy {A} x A of a member."""
    return cartesian(make_set((a,)), a)


def build_universes(family: Family, powerset_cap: int = DEFAULT_POWERSET_CAP) -> tuple:
    """The union of the family and the first candidate universe U1.

    U1 unions, over the members, the powerset of A x A: it houses every
    relation over any single member.
    """
    subsets = []
    for a in family.members.children:
        subsets.extend(powerset(cartesian(a, a), cap=powerset_cap).children)
    return family.union, make_set(subsets)


def _member_products(family: Family) -> list:
    return [
        (a, cartesian(build_PA(a), build_PA(a))) for a in family.members.children
    ]


def build_U2_base(family: Family, variant: U2Variant,
                  powerset_cap: int = DEFAULT_POWERSET_CAP) -> HfSet:
    """The second candidate universe U2, materialized.

    Literal unions the per-member powersets of P_A x P_A; UnionOfProducts
    takes the powerset of the union of the P_A x P_A themselves.  The two
    coincide exactly on singleton families.
    """
    if variant is U2Variant.LITERAL:
        subsets = []
        for _, product in _member_products(family):
            subsets.extend(powerset(product, cap=powerset_cap).children)
        return make_set(subsets)
    if variant is U2Variant.UNION_OF_PRODUCTS:
        base = make_set(
            p for _, product in _member_products(family) for p in product.children
        )
        return powerset(base, cap=powerset_cap)
    raise TypeError(f"unknown variant: {variant!r}")


# --- per-member order machinery, cached --------------------------------------

# The pipeline admits an order only when it has a least element (the choice
# extraction needs one).  On nonempty carriers this filters nothing.
_eligible_cache: dict = {}
# (member, kind) -> tuple of (relation, lifted pair-node tuple, least element)
_lift_index_cache: dict = {}
# (member, kind) -> set of lifted pair-node tuples, for the separation test
_enc_cache: dict = {}
# member -> ({m: (A,m) node}, {(m, b): ((A,m),(A,b)) node})


def _eligible_orders(a: HfSet, kind: OrderKind) -> tuple:
    key = (a, kind)
    cached = _eligible_cache.get(key)
    if cached is None:
        entries = []
        for r in enumerate_orders(a, kind):
            universal = _universal_indices(r.rows)
            if len(universal) != 1:
                continue
            lifted = lift_order(r)
            entries.append((r, lifted.pairs.children, r.elements[universal[0]]))
        cached = tuple(entries)
        _eligible_cache[key] = cached
    return cached


def _lift_index(a: HfSet, kind: OrderKind) -> set:
    key = (a, kind)
    cached = _lift_index_cache.get(key)
    if cached is None:
        cached = {children for _, children, _ in _eligible_orders(a, kind)}
        _lift_index_cache[key] = cached
    return cached


def _enc_tables(a: HfSet) -> tuple:
    cached = _enc_cache.get(a)
    if cached is None:
        tag = {m: ordered_pair(a, m) for m in a.children}
        enc = {
            (m, b): ordered_pair(tag[m], tag[b])
            for m in a.children
            for b in a.children
        }
        cached = (tag, enc)
        _enc_cache[a] = cached
    return cached


def phi1_holds(q: HfSet, family: Family, kind: OrderKind) -> bool:
    """The separation condition: for every member A there is an admissible
    order whose tagged copy is exactly the A-part of ``q``.

    Pairs of ``q`` that are not tagged with a single family member constrain
    nothing and are ignored, mirroring the quantifier structure.
    """
    members = family.members.children
    buckets = {a: [] for a in members}
    for p in q.children:
        try:
            left, right = unpair(p)
            x_tag, _ = unpair(left)
            y_tag, _ = unpair(right)
        except NotAPair:
            continue
        if x_tag != y_tag:
            continue
        bucket = buckets.get(x_tag)
        if bucket is not None:
            bucket.append(p)
    return all(
        tuple(buckets[a]) in _lift_index(a, kind) for a in members
    )


def build_QS(family: Family, variant: U2Variant, kind: OrderKind,
             powerset_cap: int = DEFAULT_POWERSET_CAP,
             product_cap: int = DEFAULT_PRODUCT_CAP) -> HfSet:
    """The set of combined relations selected by the separation condition.

    Literal filters the materialized U2; UnionOfProducts enumerates the
    product of per-member admissible orders directly, and when the union base
    has at most 12 elements the powerset filter is re-run and must agree.
    """
    if variant is U2Variant.LITERAL:
        u2 = build_U2_base(family, variant, powerset_cap)
        return make_set(q for q in u2.children if phi1_holds(q, family, kind))
    if variant is not U2Variant.UNION_OF_PRODUCTS:
        raise TypeError(f"unknown variant: {variant!r}")

    members = family.members.children
    per_member = [_eligible_orders(a, kind) for a in members]
    count = 1
    for entries in per_member:
        count *= len(entries)
    if count > product_cap:
        raise CapExceeded(f"{count} combined relations exceed cap {product_cap}")
    combos = []
    for picks in itertools.product(*per_member):
        merged = []
        for _, children, _ in picks:
            merged.extend(children)
        merged.sort(key=canonical_key)
        combos.append(make_set(merged))
    qs = make_set(combos)
    base_size = sum(len(a) ** 2 for a in members)
    if base_size <= 12:
        _cross_check_qs(family, kind, qs)
    return qs


def _slice_validity(a: HfSet, kind: OrderKind) -> dict:
    # Lazily filled: submask over the member's product pairs -> is it the
    # tagged copy of an admissible order with a least element?
    key = (a, kind, "slices")
    cached = _lift_index_cache.get(key)
    if cached is None:
        cached = {}
        _lift_index_cache[key] = cached
    return cached


def _cross_check_qs(family: Family, kind: OrderKind, qs: HfSet) -> None:
    """Re-derive Q_S by filtering every subset of the union base."""
    members = family.members.children
    offsets = []
    position_maps = []
    total = 0
    for a in members:
        product = cartesian(build_PA(a), build_PA(a)).children
        index = {e: i for i, e in enumerate(a.children)}
        coords = []
        for p in product:
            left, right = unpair(p)
            _, x = unpair(left)
            _, y = unpair(right)
            coords.append((index[x], index[y]))
        offsets.append(total)
        position_maps.append((a, product, coords))
        total += len(product)

    def slice_ok(a, coords, n, submask, memo):
        ok = memo.get(submask)
        if ok is None:
            rows = [0] * n
            for bit, (i, j) in enumerate(coords):
                if submask >> bit & 1:
                    rows[i] |= 1 << j
            ok = _rows_satisfy(tuple(rows), kind) and len(_universal_indices(rows)) == 1
            memo[submask] = ok
        return ok

    filtered = set()
    memos = [
        (a, coords, len(a.children), _slice_validity(a, kind))
        for a, _, coords in position_maps
    ]
    for mask in range(1 << total):
        good = True
        for offset, (a, coords, n, memo) in zip(offsets, memos):
            width = len(coords)
            if not slice_ok(a, coords, n, (mask >> offset) & ((1 << width) - 1), memo):
                good = False
                break
        if good:
            filtered.add(mask)

    # Express the enumerated Q_S in the same mask coordinates.
    bit_of = {}
    for offset, (_, product, _) in zip(offsets, position_maps):
        for i, p in enumerate(product):
            bit_of[p] = offset + i
    enumerated = set()
    for q in qs.children:
        mask = 0
        for p in q.children:
            mask |= 1 << bit_of[p]
        enumerated.add(mask)
    assert enumerated == filtered, (
        "product enumeration disagrees with the subset filter"
    )


def restrict_Q(q: HfSet, a: HfSet) -> HfSet:
    """The pairs of ``q`` whose two components are both tagged with ``a``."""
    kept = []
    for p in q.children:
        try:
            left, right = unpair(p)
            x_tag, _ = unpair(left)
            y_tag, _ = unpair(right)
        except NotAPair:
            continue
        if x_tag == a and y_tag == a:
            kept.append(p)
    return make_set(kept)


def choice_from_Q(q: HfSet, family: Family) -> ChoiceFunction:
    """Extract the choice function of a combined relation.

    For each member the unique element whose tagged pairs to all of the
    member sit in ``q`` is selected; NoLeast if no member element (or more
    than one) qualifies.
    """
    present = frozenset(q.children)
    graph = []
    for a in family.members.children:
        tag, enc = _enc_tables(a)
        winners = [
            m
            for m in a.children
            if all(enc[m, b] in present for b in a.children)
        ]
        if len(winners) != 1:
            raise NoLeast(
                f"{len(winners)} least candidates for member {a!r}"
            )
        graph.append(ordered_pair(a, winners[0]))
    return ChoiceFunction(make_set(graph))


def _choices_from_qs(qs: HfSet, family: Family) -> tuple:
    seen = {}
    for q in qs.children:
        cf = choice_from_Q(q, family)
        seen[cf.graph] = cf
    return tuple(seen[g] for g in sorted(seen, key=canonical_key))


def build_Fc(family: Family, variant: U2Variant, kind: OrderKind,
             powerset_cap: int = DEFAULT_POWERSET_CAP,
             product_cap: int = DEFAULT_PRODUCT_CAP) -> tuple:
    """All choice functions harvested from Q_S, canonically ordered."""
    qs = build_QS(family, variant, kind, powerset_cap, product_cap)
    return _choices_from_qs(qs, family)


def build_Fc_literal(family: Family, variant: U2Variant, kind: OrderKind,
                     powerset_cap: int = DEFAULT_POWERSET_CAP,
                     product_cap: int = DEFAULT_PRODUCT_CAP) -> tuple:
    """The choice set separated literally from the powerset of A_S x A_U.

    Every subset of A_S x A_U is tested: it belongs iff some combined
    relation Q makes the subset's pairs exactly the tagged-least pairs of Q.
    Must coincide with :func:`build_Fc`; exponential in |A_S| * |A_U|.
    """
    candidates = cartesian(family.members, family.union).children
    k = len(candidates)
    if k > powerset_cap:
        raise CapExceeded(f"separation over {k} candidate pairs exceeds cap {powerset_cap}")
    qs = build_QS(family, variant, kind, powerset_cap, product_cap)
    bit_of = {p: i for i, p in enumerate(candidates)}

    valid_masks = set()
    for q in qs.children:
        present = frozenset(q.children)
        mask = 0
        for a in family.members.children:
            for m in family.union.children:
                if all(
                    ordered_pair(ordered_pair(a, m), ordered_pair(a, b)) in present
                    for b in a.children
                ):
                    mask |= 1 << bit_of[ordered_pair(a, m)]
        valid_masks.add(mask)

    found = []
    for mask in range(1 << k):
        if mask in valid_masks:
            graph = make_set(
                candidates[i] for i in range(k) if mask >> i & 1
            )
            found.append(ChoiceFunction(graph))
    return tuple(sorted(found, key=lambda cf: canonical_key(cf.graph)))


def theorem4_order_from_choice(a: HfSet, f: ChoiceFunction) -> Relation:
    """The order a choice function induces on one member: the chosen element
    below everything, all else incomparable."""
    m = f(a)
    pairs = [ordered_pair(x, x) for x in a.children]
    pairs.extend(ordered_pair(m, b) for b in a.children)
    return relation_over(a, make_set(pairs))


def phi3_holds(r: Relation, a: HfSet, f: ChoiceFunction) -> bool:
    """Is ``r`` exactly the identity plus rows from the chosen element?"""
    m = f(a)
    index = {e: i for i, e in enumerate(r.elements)}
    if r.carrier != a:
        return False
    for x in a.children:
        for y in a.children:
            related = bool(r.rows[index[x]] >> index[y] & 1)
            if related != (x == y or x == m):
                return False
    return True


@dataclass(frozen=True)
class PipelineReport:
    """Flat, serialization-ready summary of one pipeline run."""

    variant: str
    kind: str
    family: str
    u1_size: int
    u2_base_size: int
    u2_size: int
    qs_size: int
    fc_size: int
    q_s_empty: bool
    f_c_all_valid: bool
    witnesses: dict

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "kind": self.kind,
            "family": self.family,
            "u1_size": self.u1_size,
            "u2_base_size": self.u2_base_size,
            "u2_size": self.u2_size,
            "qs_size": self.qs_size,
            "fc_size": self.fc_size,
            "q_s_empty": self.q_s_empty,
            "f_c_all_valid": self.f_c_all_valid,
            "witnesses": self.witnesses,
        }


def run_pipeline(family: Family, variant: U2Variant, kind: OrderKind,
                 powerset_cap: int = DEFAULT_POWERSET_CAP,
                 product_cap: int = DEFAULT_PRODUCT_CAP) -> PipelineReport:
    """Run the whole construction and report sizes and witnesses."""
    _, u1 = build_universes(family, powerset_cap)
    base = make_set(
        p for _, product in _member_products(family) for p in product.children
    )
    if variant is U2Variant.LITERAL:
        u2_size = len(build_U2_base(family, variant, powerset_cap))
    else:
        u2_size = 2 ** len(base)
    qs = build_QS(family, variant, kind, powerset_cap, product_cap)
    fcs = _choices_from_qs(qs, family)
    witnesses = {
        "choice_functions": [hfs_literal(cf.graph) for cf in fcs[:3]],
        "combined_relations": [hfs_literal(q) for q in qs.children[:1]],
    }
    return PipelineReport(
        variant=variant.value,
        kind=kind.value,
        family=hfs_literal(family.members),
        u1_size=len(u1),
        u2_base_size=len(base),
        u2_size=u2_size,
        qs_size=len(qs),
        fc_size=len(fcs),
        q_s_empty=len(qs) == 0,
        f_c_all_valid=all(cf.is_valid_for(family) for cf in fcs),
        witnesses=witnesses,
    )
