"""Finite algebras, terms, quantifier-free formulas and their evaluation.

Elements of an algebra are the integers 0..n-1; human-readable element
names are an optional alias table kept for printing only.  Operation
tables are dense row-major tuples, so evaluation is pure indexing.
Arity-0 symbols are rewritten at construction time into unary constant
operations (the rewrite is recorded so printing can restore the bare
constant symbol).
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

class Term:
    """Base class for term syntax trees.  Immutable and hashable."""

    __slots__ = ()


class Var(Term):
    __slots__ = ("index", "depth", "_hash")

    def __init__(self, index: int):
        if index < 0:
            raise ValueError(f"variable index must be >= 0, got {index}")
        self.index = index
        self.depth = 0
        self._hash = hash(("var", index))

    def __eq__(self, other):
        return type(other) is Var and other.index == self.index

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Var({self.index})"

    def __str__(self):
        return f"x{self.index}"


class App(Term):
    __slots__ = ("symbol", "args", "depth", "_hash")

    def __init__(self, symbol: str, args: Sequence[Term] = ()):
        self.symbol = symbol
        self.args = tuple(args)
        self.depth = 1 + max((t.depth for t in self.args), default=-1)
        self._hash = hash(("app", symbol, self.args))

    def __eq__(self, other):
        return (
            type(other) is App
            and other._hash == self._hash
            and other.symbol == self.symbol
            and other.args == self.args
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"App({self.symbol!r}, {list(self.args)!r})"

    def __str__(self):
        return format_term(self)


def term_variables(t: Term) -> set[int]:
    if isinstance(t, Var):
        return {t.index}
    out: set[int] = set()
    for s in t.args:
        out |= term_variables(s)
    return out


# ---------------------------------------------------------------------------
# Quantifier-free formulas
# ---------------------------------------------------------------------------

class QfFormula:
    """Boolean combination of term equations.  Immutable and hashable."""

    __slots__ = ()


class TrueFormula(QfFormula):
    __slots__ = ()

    def __eq__(self, other):
        return type(other) is TrueFormula

    def __hash__(self):
        return hash("true")

    def __repr__(self):
        return "TRUE"


class FalseFormula(QfFormula):
    __slots__ = ()

    def __eq__(self, other):
        return type(other) is FalseFormula

    def __hash__(self):
        return hash("false")

    def __repr__(self):
        return "FALSE"


TRUE = TrueFormula()
FALSE = FalseFormula()


class Eq(QfFormula):
    __slots__ = ("lhs", "rhs", "_hash")

    def __init__(self, lhs: Term, rhs: Term):
        self.lhs = lhs
        self.rhs = rhs
        self._hash = hash(("eq", lhs, rhs))

    def __eq__(self, other):
        return type(other) is Eq and other.lhs == self.lhs and other.rhs == self.rhs

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Eq({self.lhs!r}, {self.rhs!r})"


class Not(QfFormula):
    __slots__ = ("inner", "_hash")

    def __init__(self, inner: QfFormula):
        self.inner = inner
        self._hash = hash(("not", inner))

    def __eq__(self, other):
        return type(other) is Not and other.inner == self.inner

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Not({self.inner!r})"


class And(QfFormula):
    __slots__ = ("children", "_hash")

    def __init__(self, children: Sequence[QfFormula]):
        self.children = tuple(children)
        if not self.children:
            raise ValueError("And needs at least one child")
        self._hash = hash(("and", self.children))

    def __eq__(self, other):
        return type(other) is And and other.children == self.children

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"And({list(self.children)!r})"


class Or(QfFormula):
    __slots__ = ("children", "_hash")

    def __init__(self, children: Sequence[QfFormula]):
        self.children = tuple(children)
        if not self.children:
            raise ValueError("Or needs at least one child")
        self._hash = hash(("or", self.children))

    def __eq__(self, other):
        return type(other) is Or and other.children == self.children

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Or({list(self.children)!r})"


def formula_variables(phi: QfFormula) -> set[int]:
    if isinstance(phi, (TrueFormula, FalseFormula)):
        return set()
    if isinstance(phi, Eq):
        return term_variables(phi.lhs) | term_variables(phi.rhs)
    if isinstance(phi, Not):
        return formula_variables(phi.inner)
    if isinstance(phi, (And, Or)):
        out: set[int] = set()
        for c in phi.children:
            out |= formula_variables(c)
        return out
    raise TypeError(f"not a formula: {phi!r}")


def substitute_term(t: Term, mapping: dict[int, int]) -> Term:
    """Rename variables of `t` according to index mapping."""
    if isinstance(t, Var):
        return Var(mapping[t.index]) if t.index in mapping else t
    return App(t.symbol, tuple(substitute_term(s, mapping) for s in t.args))


def substitute_formula(phi: QfFormula, mapping: dict[int, int]) -> QfFormula:
    if isinstance(phi, (TrueFormula, FalseFormula)):
        return phi
    if isinstance(phi, Eq):
        return Eq(substitute_term(phi.lhs, mapping), substitute_term(phi.rhs, mapping))
    if isinstance(phi, Not):
        return Not(substitute_formula(phi.inner, mapping))
    if isinstance(phi, And):
        return And(tuple(substitute_formula(c, mapping) for c in phi.children))
    if isinstance(phi, Or):
        return Or(tuple(substitute_formula(c, mapping) for c in phi.children))
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Algebras and relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Operation:
    """One fundamental operation: dense row-major table over 0..size-1."""

    symbol: str
    arity: int
    size: int
    table: tuple[int, ...]

    def value(self, args: Sequence[int]) -> int:
        i = 0
        for v in args:
            i = i * self.size + v
        return self.table[i]


class Algebra:
    """A finite algebra: universe 0..size-1 plus ordered named operations.

    The declared operation order is fixed at construction and drives every
    canonical enumeration downstream, so two algebras with the same tables
    but different symbol order are deliberately distinct.
    """

    __slots__ = ("size", "ops", "element_names", "constants", "_by_symbol", "_by_arity", "arities")

    def __init__(
        self,
        size: int,
        ops: Iterable[tuple[str, int, Sequence[int]]],
        element_names: Sequence[str] | None = None,
    ):
        if size < 1:
            raise ValueError(f"algebra size must be >= 1, got {size}")
        self.size = size
        normalized: list[Operation] = []
        constants: set[str] = set()
        for symbol, arity, table in ops:
            if arity < 0:
                raise ValueError(f"operation {symbol!r} has negative arity")
            table = tuple(table)
            if len(table) != size**arity:
                raise ValueError(
                    f"operation {symbol!r} table has {len(table)} entries, expected {size**arity}"
                )
            if any(not (0 <= v < size) for v in table):
                raise ValueError(f"operation {symbol!r} table has out-of-range values")
            if arity == 0:
                # constants become unary constant operations; remember the
                # rewrite so the printer can restore the bare symbol
                constants.add(symbol)
                arity, table = 1, (table[0],) * size
            normalized.append(Operation(symbol, arity, size, table))
        self.ops: tuple[Operation, ...] = tuple(normalized)
        if len({op.symbol for op in self.ops}) != len(self.ops):
            raise ValueError("duplicate operation symbols")
        self.constants = frozenset(constants)
        self._by_symbol = {op.symbol: op for op in self.ops}
        by_arity: dict[int, list[Operation]] = {}
        for op in self.ops:
            by_arity.setdefault(op.arity, []).append(op)
        self._by_arity = by_arity
        self.arities: tuple[int, ...] = tuple(sorted(by_arity))
        if element_names is not None:
            element_names = tuple(element_names)
            if len(element_names) != size:
                raise ValueError("element_names length must equal size")
            if len(set(element_names)) != size:
                raise ValueError("element_names must be distinct")
        self.element_names = element_names

    def op(self, symbol: str) -> Operation:
        try:
            return self._by_symbol[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in algebra") from None

    def ops_of_arity(self, arity: int) -> list[Operation]:
        return self._by_arity.get(arity, [])

    def name(self, element: int) -> str:
        if self.element_names is not None:
            return self.element_names[element]
        return str(element)

    def element(self, name: str) -> int:
        """Resolve an element given by alias name or decimal index."""
        if self.element_names is not None and name in self.element_names:
            return self.element_names.index(name)
        try:
            e = int(name)
        except ValueError:
            raise ValueError(f"unknown element name {name!r}") from None
        if not (0 <= e < self.size):
            raise ValueError(f"element {e} out of range 0..{self.size - 1}")
        return e

    def __repr__(self):
        syms = ",".join(f"{op.symbol}/{op.arity}" for op in self.ops)
        return f"Algebra(size={self.size}, ops=[{syms}])"


@dataclass(frozen=True)
class Relation:
    """A k-ary relation: a set of k-tuples over the universe."""

    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"relation arity must be >= 1, got {self.arity}")
        for t in self.tuples:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} does not have arity {self.arity}")

    @classmethod
    def of(cls, arity: int, tuples: Iterable[Sequence[int]]) -> "Relation":
        return cls(arity, frozenset(tuple(t) for t in tuples))

    def check_over(self, alg: Algebra) -> None:
        for t in self.tuples:
            for v in t:
                if not (0 <= v < alg.size):
                    raise ValueError(f"tuple {t} has entry {v} outside 0..{alg.size - 1}")

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_term(alg: Algebra, t: Term, a: Sequence[int]) -> int:
    """Value of `t` under the assignment x_i -> a[i]."""
    if isinstance(t, Var):
        if t.index >= len(a):
            raise ValueError(f"variable x{t.index} out of range for a tuple of length {len(a)}")
        return a[t.index]
    op = alg.op(t.symbol)
    if len(t.args) != op.arity:
        if not t.args and t.symbol in alg.constants:
            return op.table[0]
        raise ValueError(
            f"symbol {t.symbol!r} applied to {len(t.args)} arguments, arity is {op.arity}"
        )
    return op.value([eval_term(alg, s, a) for s in t.args])


def eval_formula(alg: Algebra, phi: QfFormula, a: Sequence[int]) -> bool:
    if isinstance(phi, TrueFormula):
        return True
    if isinstance(phi, FalseFormula):
        return False
    if isinstance(phi, Eq):
        return eval_term(alg, phi.lhs, a) == eval_term(alg, phi.rhs, a)
    if isinstance(phi, Not):
        return not eval_formula(alg, phi.inner, a)
    if isinstance(phi, And):
        return all(eval_formula(alg, c, a) for c in phi.children)
    if isinstance(phi, Or):
        return any(eval_formula(alg, c, a) for c in phi.children)
    raise TypeError(f"not a formula: {phi!r}")


def extension(alg: Algebra, phi: QfFormula, k: int) -> Relation:
    """The relation {a in A^k : phi holds at a}."""
    if k < 1:
        raise ValueError(f"arity must be >= 1, got {k}")
    bad = [i for i in formula_variables(phi) if i >= k]
    if bad:
        raise ValueError(f"formula uses x{max(bad)} but arity is {k}")
    hits = [
        a for a in itertools.product(range(alg.size), repeat=k) if eval_formula(alg, phi, a)
    ]
    return Relation(k, frozenset(hits))


def sg(alg: Algebra, a: Sequence[int]) -> frozenset[int]:
    """Subuniverse generated by the entries of `a` (least closed superset)."""
    if not a:
        raise ValueError("cannot generate a subuniverse from an empty tuple")
    closure = set(a)
    frontier = set(a)
    while frontier:
        base = sorted(closure)
        new: set[int] = set()
        for op in alg.ops:
            for args in itertools.product(base, repeat=op.arity):
                if not any(x in frontier for x in args):
                    continue
                v = op.value(args)
                if v not in closure:
                    new.add(v)
        closure |= new
        frontier = new
    return frozenset(closure)


# ---------------------------------------------------------------------------
# Text grammar: parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


_TOKEN = re.compile(r"(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<punct>!=|[()=,&|!])|(?P<bad>\S)")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    for m in _TOKEN.finditer(text):
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", m.start())
        kind = m.lastgroup
        word = m.group()
        if kind == "name" and re.fullmatch(r"x\d+", word):
            kind = "var"
        tokens.append((kind, word, m.start()))
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, word: str) -> None:
        kind, got, at = self.next()
        if got != word:
            raise ParseError(f"expected {word!r}, found {got or 'end of input'!r}", at)

    def term(self) -> Term:
        kind, word, at = self.next()
        if kind == "var":
            return Var(int(word[1:]))
        if kind == "name":
            if word in ("true", "false"):
                raise ParseError(f"{word!r} is not a term", at)
            if self.peek()[1] == "(":
                self.next()
                args = [self.term()]
                while self.peek()[1] == ",":
                    self.next()
                    args.append(self.term())
                self.expect(")")
                return App(word, tuple(args))
            # a bare symbol reads as a constant
            return App(word, ())
        raise ParseError(f"expected a term, found {word or 'end of input'!r}", at)

    def atom(self) -> QfFormula:
        lhs = self.term()
        kind, word, at = self.next()
        if word == "=":
            return Eq(lhs, self.term())
        if word == "!=":
            return Not(Eq(lhs, self.term()))
        raise ParseError(f"expected '=' or '!=', found {word or 'end of input'!r}", at)

    def primary(self) -> QfFormula:
        kind, word, at = self.peek()
        if word == "true":
            self.next()
            return TRUE
        if word == "false":
            self.next()
            return FALSE
        if word == "(":
            self.next()
            phi = self.disjunction()
            self.expect(")")
            return phi
        return self.atom()

    def negation(self) -> QfFormula:
        if self.peek()[1] == "!":
            self.next()
            return Not(self.negation())
        return self.primary()

    def conjunction(self) -> QfFormula:
        items = [self.negation()]
        while self.peek()[1] == "&":
            self.next()
            items.append(self.negation())
        return items[0] if len(items) == 1 else And(tuple(items))

    def disjunction(self) -> QfFormula:
        items = [self.conjunction()]
        while self.peek()[1] == "|":
            self.next()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    kind, word, at = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected trailing input {word!r}", at)
    return t


def parse_formula(text: str) -> QfFormula:
    p = _Parser(text)
    phi = p.disjunction()
    kind, word, at = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected trailing input {word!r}", at)
    return phi


# ---------------------------------------------------------------------------
# Text grammar: printing
# ---------------------------------------------------------------------------

def format_term(t: Term, constants: frozenset[str] | set[str] = frozenset()) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if not t.args or t.symbol in constants:
        return t.symbol
    return t.symbol + "(" + ",".join(format_term(s, constants) for s in t.args) + ")"


def _flatten(phi: QfFormula, cls) -> list[QfFormula]:
    out: list[QfFormula] = []
    stack = [phi]
    while stack:
        f = stack.pop()
        if type(f) is cls:
            stack.extend(reversed(f.children))
        else:
            out.append(f)
    return out


def format_formula(phi: QfFormula, constants: frozenset[str] | set[str] = frozenset()) -> str:
    """Canonical text: And/Or flattened, '!=' restored, minimal parentheses."""
    if isinstance(phi, TrueFormula):
        return "true"
    if isinstance(phi, FalseFormula):
        return "false"
    if isinstance(phi, Eq):
        return f"{format_term(phi.lhs, constants)}={format_term(phi.rhs, constants)}"
    if isinstance(phi, Not):
        if isinstance(phi.inner, Eq):
            e = phi.inner
            return f"{format_term(e.lhs, constants)}!={format_term(e.rhs, constants)}"
        if isinstance(phi.inner, (And, Or)):
            return "!(" + format_formula(phi.inner, constants) + ")"
        return "!" + format_formula(phi.inner, constants)
    if isinstance(phi, And):
        parts = []
        for c in _flatten(phi, And):
            text = format_formula(c, constants)
            parts.append(f"({text})" if isinstance(c, Or) else text)
        return "&".join(parts)
    if isinstance(phi, Or):
        return "|".join(format_formula(c, constants) for c in _flatten(phi, Or))
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# JSON file formats
# ---------------------------------------------------------------------------

def algebra_to_json(alg: Algebra) -> dict:
    operations = {}
    for op in alg.ops:
        if op.symbol in alg.constants:
            operations[op.symbol] = {"arity": 0, "table": [op.table[0]]}
        else:
            operations[op.symbol] = {"arity": op.arity, "table": list(op.table)}
    doc: dict = {"size": alg.size, "operations": operations}
    if alg.element_names is not None:
        doc["elements"] = list(alg.element_names)
    return doc


def algebra_from_json(doc: dict) -> Algebra:
    try:
        size = doc["size"]
        operations = doc["operations"]
    except (TypeError, KeyError) as e:
        raise ValueError(f"malformed algebra document: missing {e}") from None
    ops = [(sym, spec["arity"], spec["table"]) for sym, spec in operations.items()]
    return Algebra(size, ops, element_names=doc.get("elements"))


def load_algebra(path: str) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh))


def save_algebra(alg: Algebra, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(algebra_to_json(alg), fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def relation_to_json(rel: Relation) -> dict:
    return {"arity": rel.arity, "tuples": sorted(list(t) for t in rel.tuples)}


def relation_from_json(doc: dict) -> Relation:
    try:
        return Relation.of(doc["arity"], doc["tuples"])
    except (TypeError, KeyError) as e:
        raise ValueError(f"malformed relation document: missing {e}") from None


def load_relation(path: str) -> Relation:
    with open(path, encoding="utf-8") as fh:
        return relation_from_json(json.load(fh))


def save_relation(rel: Relation, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(relation_to_json(rel), fh, indent=2)
        fh.write("\n")
