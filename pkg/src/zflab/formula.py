"""Bounded first-order formulas over hereditarily finite sets.

The language has set-membership and equality atoms, the usual connectives,
and quantifiers bounded by a set-denoting term.  Evaluation is classical over
the finite domain named by each quantifier bound: a universal over the empty
set is true, an existential false.  The unique-existence quantifier is a
primitive, not sugar.

Concrete syntax::

    formula := quant | iff
    quant   := ('forall' | 'exists' | 'exists!') IDENT 'in' term '.' formula
    iff     := imp ('<->' imp)*
    imp     := or ('->' or)*
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '!' unary | atom
    atom    := term 'in' term | term '=' term | '(' formula ')'
             | 'true' | 'false'
    term    := IDENT | setlit | '(' term ',' term ')'
    setlit  := '{' (term (',' term)*)? '}'

'&' , '|' and '<->' chains associate left, '->' associates right, and a
quantifier body extends as far right as possible.  Pair terms denote the
pair-set encoding {{x},{x,y}}.  A set literal whose elements are all ground
parses to a Literal; one containing variables stays symbolic (SetTerm).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .errors import ParseError, UnboundVariable
from .hfs import EMPTY, HfSet, is_member, make_set, ordered_pair

__all__ = [
    "And", "BoolConst", "Equals", "ExistsIn", "ExistsUniqueIn", "ForallIn",
    "Formula", "Iff", "Implies", "Literal", "MemberOf", "Not", "Or",
    "PairTerm", "SetTerm", "Term", "Var", "eval_formula", "eval_term",
    "format_formula", "format_term", "free_vars", "parse_formula",
    "separation",
]

Env = Mapping[str, HfSet]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Literal:
    value: HfSet


@dataclass(frozen=True)
class PairTerm:
    first: "Term"
    second: "Term"


@dataclass(frozen=True)
class SetTerm:
    elems: tuple


Term = Union[Var, Literal, PairTerm, SetTerm]


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class MemberOf:
    item: Term
    container: Term


@dataclass(frozen=True)
class Equals:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForallIn:
    var: str
    domain: Term
    body: "Formula"


@dataclass(frozen=True)
class ExistsIn:
    var: str
    domain: Term
    body: "Formula"


@dataclass(frozen=True)
class ExistsUniqueIn:
    var: str
    domain: Term
    body: "Formula"


Formula = Union[
    BoolConst, MemberOf, Equals, Not, And, Or, Implies, Iff,
    ForallIn, ExistsIn, ExistsUniqueIn,
]

_MISSING = object()


def eval_term(t: Term, env: Env) -> HfSet:
    """Denotation of a term under the environment."""
    return _eval_term(t, dict(env))


def _eval_term(t, env) -> HfSet:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(f"variable {t.name!r} is not bound") from None
    if isinstance(t, Literal):
        return t.value
    if isinstance(t, PairTerm):
        return ordered_pair(_eval_term(t.first, env), _eval_term(t.second, env))
    if isinstance(t, SetTerm):
        return make_set(_eval_term(e, env) for e in t.elems)
    raise TypeError(f"not a term: {t!r}")


def eval_formula(f: Formula, env: Env) -> bool:
    """Truth value of ``f`` under ``env``; every free variable must be bound."""
    return _eval(f, dict(env))


def _eval(f, env) -> bool:
    if isinstance(f, BoolConst):
        return f.value
    if isinstance(f, MemberOf):
        return is_member(_eval_term(f.item, env), _eval_term(f.container, env))
    if isinstance(f, Equals):
        return _eval_term(f.left, env) == _eval_term(f.right, env)
    if isinstance(f, Not):
        return not _eval(f.body, env)
    if isinstance(f, And):
        return _eval(f.left, env) and _eval(f.right, env)
    if isinstance(f, Or):
        return _eval(f.left, env) or _eval(f.right, env)
    if isinstance(f, Implies):
        return not _eval(f.left, env) or _eval(f.right, env)
    if isinstance(f, Iff):
        return _eval(f.left, env) == _eval(f.right, env)
    if isinstance(f, (ForallIn, ExistsIn, ExistsUniqueIn)):
        domain = _eval_term(f.domain, env)
        old = env.get(f.var, _MISSING)
        try:
            if isinstance(f, ForallIn):
                for x in domain.children:
                    env[f.var] = x
                    if not _eval(f.body, env):
                        return False
                return True
            if isinstance(f, ExistsIn):
                for x in domain.children:
                    env[f.var] = x
                    if _eval(f.body, env):
                        return True
                return False
            hits = 0
            for x in domain.children:
                env[f.var] = x
                if _eval(f.body, env):
                    hits += 1
                    if hits > 1:
                        return False
            return hits == 1
        finally:
            if old is _MISSING:
                env.pop(f.var, None)
            else:
                env[f.var] = old
    raise TypeError(f"not a formula: {f!r}")


def free_vars(f) -> frozenset:
    """Free variable names of a formula or term."""
    if isinstance(f, Var):
        return frozenset((f.name,))
    if isinstance(f, (Literal, BoolConst)):
        return frozenset()
    if isinstance(f, PairTerm):
        return free_vars(f.first) | free_vars(f.second)
    if isinstance(f, SetTerm):
        out = frozenset()
        for e in f.elems:
            out |= free_vars(e)
        return out
    if isinstance(f, MemberOf):
        return free_vars(f.item) | free_vars(f.container)
    if isinstance(f, Equals):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (ForallIn, ExistsIn, ExistsUniqueIn)):
        return free_vars(f.domain) | (free_vars(f.body) - {f.var})
    raise TypeError(f"not a formula or term: {f!r}")


def separation(a: HfSet, var: str, f: Formula, env: Env = ()) -> HfSet:
    """The subset of ``a`` whose elements satisfy ``f`` with ``var`` bound."""
    scope = dict(env)
    kept = []
    for x in a.children:
        scope[var] = x
        if _eval(f, scope):
            kept.append(x)
    return make_set(kept)


# --- concrete syntax ---------------------------------------------------------

_TOKEN_RE = re.compile(r"<->|->|[(){},.=&|!]|[A-Za-z_][A-Za-z0-9_]*")
_KEYWORDS = {"forall", "exists", "in", "true", "false"}

_QUANT_NODES = {"forall": ForallIn, "exists": ExistsIn, "exists!": ExistsUniqueIn}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(), pos))
        pos = m.end()
    tokens.append(("", n))  # end marker
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            raise ParseError(f"expected {tok!r}", self.pos())
        self.i += 1

    def ident(self) -> str:
        tok = self.peek()
        if not tok or not (tok[0].isalpha() or tok[0] == "_") or tok in _KEYWORDS:
            raise ParseError("expected identifier", self.pos())
        return self.take()

    # formula := quant | iff
    def formula(self):
        tok = self.peek()
        if tok in ("forall", "exists"):
            self.take()
            kw = tok
            if tok == "exists" and self.peek() == "!":
                self.take()
                kw = "exists!"
            var = self.ident()
            self.expect("in")
            domain = self.term()
            self.expect(".")
            body = self.formula()
            return _QUANT_NODES[kw](var, domain, body)
        return self.iff()

    def iff(self):
        node = self.imp()
        while self.peek() == "<->":
            self.take()
            node = Iff(node, self.imp())
        return node

    def imp(self):
        parts = [self.or_()]
        while self.peek() == "->":
            self.take()
            parts.append(self.or_())
        node = parts[-1]
        for left in reversed(parts[:-1]):
            node = Implies(left, node)
        return node

    def or_(self):
        node = self.and_()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.and_())
        return node

    def and_(self):
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self):
        if self.peek() == "!":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "true":
            self.take()
            return BoolConst(True)
        if tok == "false":
            self.take()
            return BoolConst(False)
        if tok == "(":
            # Ambiguous: pair term or parenthesized formula.  Try the term
            # reading first and fall back on failure.
            saved = self.i
            try:
                return self.term_atom()
            except ParseError:
                self.i = saved
            self.take()
            node = self.formula()
            self.expect(")")
            return node
        if tok == "{" or (tok and (tok[0].isalpha() or tok[0] == "_") and tok not in _KEYWORDS):
            return self.term_atom()
        raise ParseError("expected a formula atom", self.pos())

    def term_atom(self):
        left = self.term()
        tok = self.peek()
        if tok == "in":
            self.take()
            return MemberOf(left, self.term())
        if tok == "=":
            self.take()
            return Equals(left, self.term())
        raise ParseError("expected 'in' or '='", self.pos())

    # term := IDENT | setlit | '(' term ',' term ')'
    def term(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            first = self.term()
            self.expect(",")
            second = self.term()
            self.expect(")")
            return PairTerm(first, second)
        if tok == "{":
            return self.setlit()
        if tok and (tok[0].isalpha() or tok[0] == "_") and tok not in _KEYWORDS:
            return Var(self.take())
        raise ParseError("expected a term", self.pos())

    def setlit(self):
        self.expect("{")
        elems = []
        if self.peek() == "}":
            self.take()
            return Literal(EMPTY)
        while True:
            elems.append(self.term())
            tok = self.peek()
            if tok == ",":
                self.take()
                continue
            if tok == "}":
                self.take()
                break
            raise ParseError("expected ',' or '}'", self.pos())
        if all(isinstance(e, Literal) for e in elems):
            return Literal(make_set(e.value for e in elems))
        return SetTerm(tuple(elems))


def parse_formula(text: str) -> Formula:
    """Parse formula text; raises ParseError with an offset on bad input."""
    p = _Parser(text)
    node = p.formula()
    if p.peek() != "":
        raise ParseError("trailing input after formula", p.pos())
    return node


# Printer precedence levels; children printed at a minimum level get
# parenthesized when they bind more loosely.
_QUANT, _IFF, _IMP, _OR, _AND, _UNARY, _ATOM = range(7)

_QUANT_KW = {ForallIn: "forall", ExistsIn: "exists", ExistsUniqueIn: "exists!"}


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Literal):
        return repr(t.value)
    if isinstance(t, PairTerm):
        return f"({format_term(t.first)},{format_term(t.second)})"
    if isinstance(t, SetTerm):
        return "{" + ",".join(format_term(e) for e in t.elems) + "}"
    raise TypeError(f"not a term: {t!r}")


def format_formula(f: Formula) -> str:
    """Text whose parse is structurally equal to ``f``."""
    return _fmt(f, _QUANT)


def _level(f) -> int:
    if isinstance(f, (ForallIn, ExistsIn, ExistsUniqueIn)):
        return _QUANT
    if isinstance(f, Iff):
        return _IFF
    if isinstance(f, Implies):
        return _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    if isinstance(f, Not):
        return _UNARY
    return _ATOM


def _fmt(f, min_level: int) -> str:
    if isinstance(f, BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, MemberOf):
        return f"{format_term(f.item)} in {format_term(f.container)}"
    if isinstance(f, Equals):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, (ForallIn, ExistsIn, ExistsUniqueIn)):
        kw = _QUANT_KW[type(f)]
        text = f"{kw} {f.var} in {format_term(f.domain)} . {_fmt(f.body, _QUANT)}"
    elif isinstance(f, Iff):
        text = f"{_fmt(f.left, _IFF)} <-> {_fmt(f.right, _IFF + 1)}"
    elif isinstance(f, Implies):
        text = f"{_fmt(f.left, _IMP + 1)} -> {_fmt(f.right, _IMP)}"
    elif isinstance(f, Or):
        text = f"{_fmt(f.left, _OR)} | {_fmt(f.right, _OR + 1)}"
    elif isinstance(f, And):
        text = f"{_fmt(f.left, _AND)} & {_fmt(f.right, _AND + 1)}"
    elif isinstance(f, Not):
        text = f"!{_fmt(f.body, _UNARY)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    if _level(f) < min_level:
        return f"({text})"
    return text
