"""Object language: terms, formulas, their concrete syntax, and knowledge bases.

Formulas are immutable dataclasses.  ``~p`` is kept as a :class:`Not` node by
the parser so text round-trips, but every consumer works on the kernel-normal
form produced by :func:`normalize`, where ``~p`` has become ``p -> #``.

Knowledge-base files look like::

    dict bounded
    c1 : cell(X) -> growthLtd(X)        [+]
    t1 : tumourCell(X) -> cell(X)       [++]
    t2 : tumourCell(X) -> ~growthLtd(X) [++]
    f1 : tumourCell(someX)              [++]   % a fact
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from . import dictionaries
from .errors import DatabaseError, ParseError, SignError, UnboundVariableError


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self):
        return self.name


Term = Union[Const, Var]


# -- formulas --------------------------------------------------------------

class Formula:
    """Base class; use the concrete node types below."""

    __slots__ = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    predicate: str
    args: tuple = ()


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    antecedent: Formula
    consequent: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class _Falsum(Formula):
    def __str__(self):
        return "#"

    def __repr__(self):
        return "FALSUM"


FALSUM = _Falsum()


def atom(predicate: str, *args: str) -> Atom:
    """Convenience constructor: upper-case initials become variables."""
    return Atom(predicate, tuple(Var(a) if a[:1].isupper() else Const(a) for a in args))


def neg(f: Formula) -> Implies:
    """Kernel-normal negation."""
    return Implies(f, FALSUM)


# -- printing --------------------------------------------------------------

# binding strength; higher binds tighter
_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}


def _prec(f):
    return _PREC.get(type(f), 5)


def render(f: Formula) -> str:
    """Canonical concrete syntax; ``parse_formula(render(f)) == f``."""
    if isinstance(f, Atom):
        if not f.args:
            return f.predicate
        return f"{f.predicate}({', '.join(map(str, f.args))})"
    if isinstance(f, _Falsum):
        return "#"
    if isinstance(f, Not):
        inner = render(f.body)
        return "~" + (f"({inner})" if _prec(f.body) < _prec(f) else inner)
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        p = _prec(f)
        # left-associative: the right operand needs parens at equal strength
        left = _wrap(f.left, _prec(f.left) < p)
        right = _wrap(f.right, _prec(f.right) <= p)
        return left + op + right
    if isinstance(f, Implies):
        p = _prec(f)
        left = _wrap(f.antecedent, _prec(f.antecedent) <= p)
        right = _wrap(f.consequent, _prec(f.consequent) < p)
        return f"{left} -> {right}"
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f, paren):
    text = render(f)
    return f"({text})" if paren else text


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z][A-Za-z0-9_]*)|([()~&|#,]))")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", column=col)
        kind = "->" if m.group(1) else ("ident" if m.group(2) else m.group(3))
        tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex) + 1))
        pos = m.end()
    tokens.append(("eof", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            found = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {found}", column=tok[2])
        self.i += 1
        return tok

    def formula(self):
        f = self.implication()
        self.take("eof")
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, value, col = self.tokens[self.i]
        if kind == "~":
            self.take()
            return Not(self.unary())
        if kind == "#":
            self.take()
            return FALSUM
        if kind == "(":
            self.take()
            f = self.implication()
            self.take(")")
            return f
        if kind == "ident":
            if not value[0].islower():
                raise ParseError(f"predicate {value!r} must start lower-case", column=col)
            self.take()
            args = []
            if self.peek() == "(":
                self.take()
                args.append(self.term())
                while self.peek() == ",":
                    self.take()
                    args.append(self.term())
                self.take(")")
            return Atom(value, tuple(args))
        found = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected a formula, found {found}", column=col)

    def term(self):
        _, value, _ = self.take("ident")
        return Var(value) if value[0].isupper() else Const(value)


def parse_formula(text: str) -> Formula:
    """Parse the concrete syntax: ``~`` binds tightest, then ``&``, ``|``, ``->``.

    ``->`` associates to the right, ``&`` and ``|`` to the left.  ``#`` is falsum.
    """
    return _Parser(text).formula()


# -- structural operations -------------------------------------------------

def normalize(f: Formula) -> Formula:
    """Rewrite every ``~p`` as ``p -> #``."""
    if isinstance(f, Not):
        return Implies(normalize(f.body), FALSUM)
    if isinstance(f, (And, Or)):
        return type(f)(normalize(f.left), normalize(f.right))
    if isinstance(f, Implies):
        return Implies(normalize(f.antecedent), normalize(f.consequent))
    return f


def is_negation(f: Formula) -> bool:
    f = normalize(f)
    return isinstance(f, Implies) and f.consequent == FALSUM


def complement(f: Formula) -> Formula:
    """The complementation operator: ``-(~q) = q`` and ``-p = ~p`` otherwise."""
    f = normalize(f)
    if isinstance(f, Implies) and f.consequent == FALSUM:
        return f.antecedent
    return Implies(f, FALSUM)


def variables(f: Formula) -> list[Var]:
    """Variables in order of first occurrence."""
    seen: dict[Var, None] = {}
    for a in atoms(f):
        for t in a.args:
            if isinstance(t, Var):
                seen.setdefault(t)
    return list(seen)


def constants(f: Formula) -> set[Const]:
    return {t for a in atoms(f) for t in a.args if isinstance(t, Const)}


def is_ground(f: Formula) -> bool:
    return not variables(f)


def atoms(f: Formula) -> Iterator[Atom]:
    for g in subformulas(f):
        if isinstance(g, Atom):
            yield g


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, ``f`` itself first."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (And, Or)):
            stack += [g.right, g.left]
        elif isinstance(g, Implies):
            stack += [g.consequent, g.antecedent]
        elif isinstance(g, Not):
            stack.append(g.body)


def substitute(f: Formula, binding: Mapping[Var, Const], partial: bool = False) -> Formula:
    """Instantiate the variables of ``f``.

    Raises :class:`UnboundVariableError` if a variable is left over, unless
    ``partial`` is set.
    """
    if isinstance(f, Atom):
        args = []
        for t in f.args:
            if isinstance(t, Var):
                if t in binding:
                    t = binding[t]
                elif not partial:
                    raise UnboundVariableError(f"variable {t} is not bound in {render(f)}")
            args.append(t)
        return Atom(f.predicate, tuple(args))
    if isinstance(f, (And, Or)):
        return type(f)(substitute(f.left, binding, partial), substitute(f.right, binding, partial))
    if isinstance(f, Implies):
        return Implies(substitute(f.antecedent, binding, partial),
                       substitute(f.consequent, binding, partial))
    if isinstance(f, Not):
        return Not(substitute(f.body, binding, partial))
    return f


def match(pattern: Formula, ground: Formula, binding: dict | None = None) -> dict | None:
    """One-way unification of a schema against a ground formula.

    Returns the extended binding, or ``None`` when they do not match.
    """
    binding = {} if binding is None else dict(binding)
    stack = [(pattern, ground)]
    while stack:
        p, g = stack.pop()
        if type(p) is not type(g):
            return None
        if isinstance(p, Atom):
            if p.predicate != g.predicate or len(p.args) != len(g.args):
                return None
            for s, t in zip(p.args, g.args):
                if isinstance(s, Var):
                    bound = binding.setdefault(s, t)
                    if bound != t:
                        return None
                elif s != t:
                    return None
        elif isinstance(p, (And, Or)):
            stack += [(p.left, g.left), (p.right, g.right)]
        elif isinstance(p, Implies):
            stack += [(p.antecedent, g.antecedent), (p.consequent, g.consequent)]
        elif isinstance(p, Not):
            stack.append((p.body, g.body))
    return binding


# -- knowledge bases -------------------------------------------------------

@dataclass(frozen=True, order=True)
class GroundLabel:
    """An axiom label plus the constants its schema variables were bound to."""

    label: str
    binding: tuple = ()  # ((var_name, const_name), ...) in schema variable order

    def __str__(self):
        if not self.binding:
            return self.label
        return f"{self.label}({', '.join(c for _, c in self.binding)})"

    def as_mapping(self) -> dict[Var, Const]:
        return {Var(v): Const(c) for v, c in self.binding}


@dataclass(frozen=True)
class AxiomEntry:
    label: str
    formula: Formula
    sign: object

    @property
    def variables(self) -> list[Var]:
        return variables(self.formula)


@dataclass(frozen=True)
class Database:
    dictionary: dictionaries.Dictionary
    entries: tuple = ()
    constants: frozenset = field(default=frozenset())

    def __post_init__(self):
        labels = set()
        for e in self.entries:
            if e.label in labels:
                raise DatabaseError(f"duplicate label {e.label!r}")
            labels.add(e.label)
            if not self.dictionary.contains(e.sign):
                raise DatabaseError(
                    f"sign {e.sign!r} of {e.label!r} is not in the {self.dictionary.name} dictionary")
        found = frozenset(c for e in self.entries for c in constants(e.formula))
        object.__setattr__(self, "constants", frozenset(self.constants) | found)
        object.__setattr__(self, "_by_label", {e.label: e for e in self.entries})

    @classmethod
    def build(cls, dictionary, axioms):
        """``axioms`` is an iterable of ``(label, formula-or-text, sign)``."""
        d = dictionaries.get(dictionary) if isinstance(dictionary, str) else dictionary
        entries = []
        for label, f, sign in axioms:
            if isinstance(f, str):
                f = parse_formula(f)
            if isinstance(sign, str):
                sign = d.parse_sign(sign)
            entries.append(AxiomEntry(label, f, sign))
        return cls(d, tuple(entries))

    def __getitem__(self, label: str) -> AxiomEntry:
        return self._by_label[label]

    def __contains__(self, label):
        return label in self._by_label

    def __len__(self):
        return len(self.entries)

    def with_axiom(self, label, f, sign) -> "Database":
        if isinstance(f, str):
            f = parse_formula(f)
        return Database(self.dictionary, self.entries + (AxiomEntry(label, f, sign),))

    def positive_form(self, entry: AxiomEntry) -> tuple[Formula, object]:
        """The normalized formula and positive sign the prover uses for ``entry``.

        A negatively signed axiom ``(p, a, -)`` is read as ``(-p, a, +)``.
        """
        d = self.dictionary
        if d.is_negative(entry.sign):
            return complement(entry.formula), d.flip(entry.sign)
        return normalize(entry.formula), entry.sign

    def sorted_constants(self) -> list[Const]:
        return sorted(self.constants)

    def instances(self, entry: AxiomEntry) -> Iterator[tuple[GroundLabel, Formula, object]]:
        """Every ground instance of ``entry`` over the database's constants."""
        f, sign = self.positive_form(entry)
        vs = entry.variables
        for combo in itertools.product(self.sorted_constants(), repeat=len(vs)):
            binding = dict(zip(vs, combo))
            yield ground_label(entry, binding), substitute(f, binding), sign

    def render(self) -> str:
        lines = [f"dict {self.dictionary.name}"]
        for e in self.entries:
            lines.append(f"{e.label} : {render(e.formula)} [{self.dictionary.format_sign(e.sign)}]")
        return "\n".join(lines) + "\n"


def ground_label(entry: AxiomEntry, binding: Mapping[Var, Const]) -> GroundLabel:
    return GroundLabel(entry.label, tuple((v.name, binding[v].name) for v in entry.variables))


_AXIOM_LINE = re.compile(r"^\s*([A-Za-z0-9_]+)\s*:\s*(.*?)\s*\[\s*([^\]]*?)\s*\]\s*$")


def parse_database(text: str) -> Database:
    """Parse a knowledge base in the line-oriented format shown in the module docstring."""
    dictionary = None
    entries = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0]
        if not line.strip():
            continue
        if dictionary is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dict":
                raise ParseError("first line must be 'dict <name>'", line=lineno)
            try:
                dictionary = dictionaries.get(parts[1])
            except KeyError as exc:
                raise ParseError(str(exc.args[0]), line=lineno) from None
            continue
        m = _AXIOM_LINE.match(line)
        if not m:
            raise ParseError("expected '<label> : <formula> [<sign>]'", line=lineno)
        label, ftext, stext = m.groups()
        if label in seen:
            raise DatabaseError(f"duplicate label {label!r} on line {lineno} "
                                f"(first defined on line {seen[label]})")
        seen[label] = lineno
        try:
            f = parse_formula(ftext)
        except ParseError as exc:
            col = None if exc.column is None else exc.column + m.start(2)
            raise ParseError(exc.message, line=lineno, column=col) from None
        try:
            sign = dictionary.parse_sign(stext)
        except SignError as exc:
            raise SignError(f"line {lineno}: {exc}") from None
        entries.append(AxiomEntry(label, f, sign))
    if dictionary is None:
        raise ParseError("missing 'dict <name>' declaration", line=1)
    return Database(dictionary, tuple(entries))


def load_database(path) -> Database:
    with open(path, encoding="utf-8") as fh:
        return parse_database(fh.read())
