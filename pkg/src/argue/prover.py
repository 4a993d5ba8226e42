"""Argument construction and proof checking for the logic of argumentation.

An argument is a triple (formula, grounds, sign) together with a proof term.
Grounds are the instantiated axiom labels at the proof's leaves, the sign is
the dictionary combination of the leaf signs.

Search
------
:func:`find_arguments` enumerates every triple that has a proof of height at
most ``limits.depth`` built from Axiom, ∧I, ∧E, →E, and →I on implication
goals, where every formula in the proof is a subformula of the goal or of a
ground instance of an axiom.  It is goal-directed: starting from the query it
collects the subgoals each rule could need (implications whose consequent
unifies with the goal, conjunctions containing it, ...), then evaluates all of
them level by level, stopping as soon as a level adds nothing.  That early
stop is what makes cyclic rule sets terminate at large depth bounds.

With ``minimal=True`` a sub-result dominated by another (smaller-or-equal
grounds and at least the same sign) is discarded as soon as it appears; the
returned set keeps, for each subset-minimal grounds set, its strongest sign.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .errors import FragmentError, ProofError
from .kernel import (
    FALSUM, And, Atom, Database, Formula, GroundLabel, Implies, Not, Or, complement,
    ground_label, is_ground, match, normalize, parse_formula, render, subformulas,
    substitute, variables,
)

RULES = {
    # rule: number of children
    "axiom": 0, "hyp": 0,
    "and_i": 2, "and_e_left": 1, "and_e_right": 1,
    "imp_i": 1, "imp_e": 2,
    "or_i_left": 1, "or_i_right": 1, "or_e": 3,
    "not_i": 1, "not_e": 2,
}


@dataclass(frozen=True)
class Proof:
    """A node of a proof term.  ``sign`` is the sign of the sub-argument it concludes."""

    rule: str
    conclusion: Formula
    children: tuple = ()
    label: GroundLabel | None = None
    sign: object = None

    def nodes(self) -> Iterator["Proof"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def height(self) -> int:
        return 1 + max((c.height() for c in self.children), default=0)

    def leaves(self) -> Iterator["Proof"]:
        return (n for n in self.nodes() if not n.children)

    def to_json(self, dictionary=None) -> dict:
        out = {"rule": self.rule, "conclusion": render(self.conclusion)}
        if self.label is not None:
            out["label"] = str(self.label)
        if self.sign is not None:
            out["sign"] = _json_sign(self.sign, dictionary)
        out["children"] = [c.to_json(dictionary) for c in self.children]
        return out


def _json_sign(sign, dictionary=None):
    if isinstance(sign, str):
        return sign
    return float(sign)


def proof_from_json(data: dict, db: Database) -> Proof:
    """Rebuild a proof term from its JSON form; labels are resolved against ``db``."""
    try:
        rule = data["rule"]
        conclusion = parse_formula(data["conclusion"])
        children = tuple(proof_from_json(c, db) for c in data.get("children", []))
    except (KeyError, TypeError) as exc:
        raise ProofError(f"malformed proof node: {exc}") from None
    label = _parse_label(data["label"], db) if "label" in data else None
    sign = data.get("sign")
    if sign is not None and db.dictionary.numeric:
        from fractions import Fraction
        sign = Fraction(str(sign))
    return Proof(rule, conclusion, children, label, sign)


def _parse_label(text: str, db: Database) -> GroundLabel:
    name, _, rest = text.partition("(")
    name = name.strip()
    args = [a.strip() for a in rest.rstrip(")").split(",")] if rest else []
    if name not in db:
        raise ProofError(f"unknown axiom label {name!r}")
    vs = db[name].variables
    if len(vs) != len(args):
        raise ProofError(f"label {text!r} binds {len(args)} constants, "
                         f"axiom {name} has {len(vs)} variables")
    return GroundLabel(name, tuple((v.name, a) for v, a in zip(vs, args)))


@dataclass(frozen=True)
class Argument:
    formula: Formula
    grounds: frozenset
    sign: object
    proof: Proof | None = field(default=None, compare=False, repr=False)

    @property
    def triple(self):
        return (self.formula, self.grounds, self.sign)

    def sorted_grounds(self) -> list[str]:
        return sorted({str(g) for g in self.grounds})

    def sort_key(self):
        return (self.sorted_grounds(), render(self.formula), str(self.sign))

    def render(self, dictionary=None) -> str:
        sign = dictionary.format_sign(self.sign) if dictionary else str(self.sign)
        return f"({render(self.formula)}, {{{', '.join(self.sorted_grounds())}}}, {sign})"

    def to_json(self, dictionary=None, with_proof=False) -> dict:
        out = {
            "formula": render(self.formula),
            "grounds": self.sorted_grounds(),
            "sign": _json_sign(self.sign, dictionary),
        }
        if with_proof and self.proof is not None:
            out["proof"] = self.proof.to_json(dictionary)
        return out


@dataclass(frozen=True)
class SearchLimits:
    depth: int = 8
    max_args: int = 1000
    minimal: bool = True

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if self.max_args < 1:
            raise ValueError("max_args must be at least 1")


DEFAULT_LIMITS = SearchLimits()


# -- search ----------------------------------------------------------------

def _check_goal(goal: Formula) -> Formula:
    goal = normalize(goal)
    if not is_ground(goal):
        raise FragmentError(f"goal {render(goal)} is not ground")
    if any(isinstance(f, Or) for f in subformulas(goal)):
        raise FragmentError(f"goal {render(goal)} contains a disjunction; "
                            "search covers the ∧, → fragment only")
    return goal


class _Schemas:
    """Per-database index of axiom schemas and their compound subformulas."""

    def __init__(self, db: Database):
        self.db = db
        self.constants = db.sorted_constants()
        self.axioms = []  # (entry, formula, sign)
        self.implications = []  # (pattern, entry)
        self.conjunctions = []
        for entry in db.entries:
            if entry.variables and not self.constants:
                continue  # a schema with nothing to instantiate it over
            f, sign = db.positive_form(entry)
            self.axioms.append((entry, f, sign))
            for g in subformulas(f):
                if isinstance(g, Implies):
                    self.implications.append(g)
                elif isinstance(g, And):
                    self.conjunctions.append(g)

    def known(self, binding) -> bool:
        return all(c in self.db.constants for c in binding.values())

    def completions(self, pattern: Formula, binding: dict) -> Iterator[Formula]:
        """Ground instances of ``pattern`` extending ``binding`` over the constants."""
        free = [v for v in variables(pattern) if v not in binding]
        for combo in itertools.product(self.constants, repeat=len(free)):
            yield substitute(pattern, {**binding, **dict(zip(free, combo))})


class _Search:
    def __init__(self, db: Database, goal: Formula, limits: SearchLimits):
        self.db = db
        self.d = db.dictionary
        self.goal = goal
        self.limits = limits
        self.schemas = _Schemas(db)
        # ground compound subformulas of the goal join the search space
        self.goal_impls = [g for g in subformulas(goal) if isinstance(g, Implies)]
        self.goal_conjs = [g for g in subformulas(goal) if isinstance(g, And)]
        self._candidates: dict[Formula, tuple] = {}

    # candidate generation by matching against schemas
    def candidates(self, g: Formula):
        if g in self._candidates:
            return self._candidates[g]
        s = self.schemas
        leaves = []
        for entry, f, sign in s.axioms:
            theta = match(f, g)
            if theta is not None and s.known(theta):
                leaves.append((ground_label(entry, theta), sign))
        antecedents = {}
        for pattern in s.implications:
            theta = match(pattern.consequent, g)
            if theta is not None and s.known(theta):
                for a in s.completions(pattern.antecedent, theta):
                    antecedents[a] = None
        for pattern in self.goal_impls:
            if pattern.consequent == g:
                antecedents[pattern.antecedent] = None
        left, right = {}, {}  # conjunctions with g on the left / right
        for pattern in s.conjunctions:
            theta = match(pattern.left, g)
            if theta is not None and s.known(theta):
                for b in s.completions(pattern.right, theta):
                    left[And(g, b)] = None
            theta = match(pattern.right, g)
            if theta is not None and s.known(theta):
                for b in s.completions(pattern.left, theta):
                    right[And(b, g)] = None
        for pattern in self.goal_conjs:
            if pattern.left == g:
                left[pattern] = None
            if pattern.right == g:
                right[pattern] = None
        result = (
            sorted(leaves),
            sorted(antecedents, key=render),
            sorted(left, key=render),
            sorted(right, key=render),
        )
        self._candidates[g] = result
        return result

    def expand(self, node):
        """Rule applications available for ``node = (goal, hypotheses)``."""
        g, hyps = node
        _, antecedents, left, right = self.candidates(g)
        apps = []
        if isinstance(g, And):
            apps.append(("and_i", ((g.left, hyps), (g.right, hyps))))
        for x in left:
            apps.append(("and_e_left", ((x, hyps),)))
        for x in right:
            apps.append(("and_e_right", ((x, hyps),)))
        for a in antecedents:
            apps.append(("imp_e", ((a, hyps), (Implies(a, g), hyps))))
        if isinstance(g, Implies):
            apps.append(("imp_i", ((g.consequent, hyps | {g.antecedent}),)))
        return apps

    def run(self) -> dict:
        depth = self.limits.depth
        root = (self.goal, frozenset())
        dist = {root: 0}
        apps = {}
        queue = deque([root])
        order = []
        while queue:
            node = queue.popleft()
            order.append(node)
            if dist[node] >= depth - 1:
                apps[node] = []
                continue
            apps[node] = self.expand(node)
            for _, kids in apps[node]:
                for kid in kids:
                    if kid not in dist:
                        dist[kid] = dist[node] + 1
                        queue.append(kid)

        table = {node: {} for node in order}
        for _ in range(depth):
            new = {node: self._level(node, apps[node], table) for node in order}
            if all(new[n].keys() == table[n].keys() for n in order):
                break
            table = new
        return table[root]

    def _level(self, node, node_apps, prev):
        g, hyps = node
        d = self.d
        items = dict(prev[node])

        def add(grounds, sign, proof):
            key = (grounds, sign)
            if key not in items:
                items[key] = proof

        leaves, _, _, _ = self.candidates(g)
        for label, sign in leaves:
            add(frozenset([label]), sign, Proof("axiom", g, (), label, sign))
        if g in hyps:
            add(frozenset(), d.top, Proof("hyp", g, (), None, d.top))
        for rule, kids in node_apps:
            tables = [prev.get(k, {}) for k in kids]
            if len(kids) == 1:
                for (grounds, sign), p in tables[0].items():
                    add(grounds, sign, Proof(rule, g, (p,), None, sign))
            else:
                for (ga, sa), pa in tables[0].items():
                    for (gb, sb), pb in tables[1].items():
                        sign = d.combine(sa, sb)
                        add(ga | gb, sign, Proof(rule, g, (pa, pb), None, sign))
        if self.limits.minimal:
            items = _undominated(items, d)
        return items


def _undominated(items: dict, d) -> dict:
    keys = list(items)
    keep = {}
    for key in keys:
        grounds, sign = key
        dominated = any(
            other != key and other[0] <= grounds and d.leq(sign, other[1])
            for other in keys
        )
        if not dominated:
            keep[key] = items[key]
    return keep


def _minimal(items: dict, d) -> dict:
    """Subset-minimal grounds; the strongest sign for each."""
    best = {}
    for (grounds, sign), proof in items.items():
        cur = best.get(grounds)
        if cur is None or (d.leq(cur[0], sign) and cur[0] != sign):
            best[grounds] = (sign, proof)
    out = {}
    for grounds, (sign, proof) in best.items():
        if not any(other < grounds for other in best):
            out[(grounds, sign)] = proof
    return out


def find_arguments(db: Database, goal: Formula | str,
                   limits: SearchLimits = DEFAULT_LIMITS) -> list[Argument]:
    """All arguments for ``goal`` within ``limits``, sorted by rendered grounds."""
    if isinstance(goal, str):
        goal = parse_formula(goal)
    goal = _check_goal(goal)
    items = _Search(db, goal, limits).run()
    if limits.minimal:
        items = _minimal(items, db.dictionary)
    args = [Argument(goal, grounds, sign, proof) for (grounds, sign), proof in items.items()]
    args.sort(key=Argument.sort_key)
    return args[: limits.max_args]


# -- proof checking --------------------------------------------------------

def check_proof(db: Database, proof: Proof) -> Argument:
    """Validate ``proof`` rule by rule and return the argument it establishes.

    Raises :class:`ProofError` naming the offending node's path.
    """
    grounds, sign, annotated = _check(db, proof, frozenset(), ())
    return Argument(normalize(proof.conclusion), frozenset(grounds), sign, annotated)


def _check(db, node, hyps, path):
    d = db.dictionary
    if node.rule not in RULES:
        raise ProofError(f"unknown rule {node.rule!r}", path)
    if len(node.children) != RULES[node.rule]:
        raise ProofError(f"{node.rule} takes {RULES[node.rule]} premises, "
                         f"got {len(node.children)}", path)
    c = normalize(node.conclusion)
    rule = node.rule

    def sub(i, extra=()):
        return _check(db, node.children[i], hyps | frozenset(extra), path + (i,))

    def concl(i):
        return normalize(node.children[i].conclusion)

    def mismatch(why):
        return ProofError(f"{rule}: {why}", path)

    if rule == "axiom":
        if node.label is None:
            raise mismatch("missing label")
        if node.label.label not in db:
            raise ProofError(f"unknown axiom label {node.label.label!r}", path)
        entry = db[node.label.label]
        if [v.name for v in entry.variables] != [v for v, _ in node.label.binding]:
            raise mismatch(f"label {node.label} does not bind the variables of {entry.label}")
        f, sign = db.positive_form(entry)
        instance = substitute(f, node.label.as_mapping())
        if instance != c:
            raise mismatch(f"{node.label} yields {render(instance)}, not {render(c)}")
        if not d.contains(sign):
            raise ProofError(f"sign {sign!r} outside the {d.name} dictionary", path)
        return {node.label}, sign, _annotate(node, path, c, (), sign)

    if rule == "hyp":
        if c not in hyps:
            raise ProofError(f"undischarged hypothesis {render(c)}", path)
        return set(), d.top, _annotate(node, path, c, (), d.top)

    if rule in ("imp_i", "not_i"):
        if not (isinstance(c, Implies)):
            raise mismatch(f"conclusion {render(c)} is not an implication")
        if rule == "not_i" and c.consequent != FALSUM:
            raise mismatch(f"conclusion {render(c)} is not a negation")
        if concl(0) != c.consequent:
            raise mismatch(f"premise {render(concl(0))} is not {render(c.consequent)}")
        g, s, p = sub(0, [c.antecedent])
        return g, s, _annotate(node, path, c, (p,), s)

    if rule == "or_e":
        major = concl(0)
        if not isinstance(major, Or):
            raise mismatch(f"major premise {render(major)} is not a disjunction")
        if concl(1) != c or concl(2) != c:
            raise mismatch(f"both cases must conclude {render(c)}")
        ga, sa, pa = sub(0)
        gb, sb, pb = sub(1, [major.left])
        gc, sc, pc = sub(2, [major.right])
        s = d.combine(sa, d.combine(sb, sc))
        return ga | gb | gc, s, _annotate(node, path, c, (pa, pb, pc), s)

    results = [sub(i) for i in range(len(node.children))]
    kids = tuple(p for _, _, p in results)

    if rule == "and_i":
        if c != And(concl(0), concl(1)):
            raise mismatch(f"{render(c)} is not the conjunction of the premises")
    elif rule in ("and_e_left", "and_e_right"):
        prem = concl(0)
        if not isinstance(prem, And):
            raise mismatch(f"premise {render(prem)} is not a conjunction")
        part = prem.left if rule == "and_e_left" else prem.right
        if part != c:
            raise mismatch(f"{render(c)} is not the {rule[-4:].strip('_')} conjunct of {render(prem)}")
    elif rule in ("or_i_left", "or_i_right"):
        if not isinstance(c, Or):
            raise mismatch(f"conclusion {render(c)} is not a disjunction")
        part = c.left if rule == "or_i_left" else c.right
        if part != concl(0):
            raise mismatch(f"premise {render(concl(0))} is not a disjunct of {render(c)}")
    elif rule in ("imp_e", "not_e"):
        minor, major = concl(0), concl(1)
        if not isinstance(major, Implies) or major.antecedent != minor:
            raise mismatch(f"{render(major)} does not take {render(minor)} to a conclusion")
        if rule == "not_e" and major.consequent != FALSUM:
            raise mismatch(f"{render(major)} is not the negation of {render(minor)}")
        if major.consequent != c:
            raise mismatch(f"{render(major)} does not conclude {render(c)}")

    grounds = set().union(*(g for g, _, _ in results))
    sign = results[0][1]
    for _, s, _ in results[1:]:
        sign = d.combine(sign, s)
    return grounds, sign, _annotate(node, path, c, kids, sign)


def _same_sign(x, y):
    if isinstance(x, str) or isinstance(y, str):
        return x == y
    return abs(x - y) <= 1e-12


def _annotate(node, path, conclusion, children, sign):
    if node.sign is not None and not _same_sign(node.sign, sign):
        raise ProofError(f"node states sign {node.sign!r} but derives {sign!r}", path)
    return Proof(node.rule, conclusion, tuple(children), node.label, sign)


# -- dependency ------------------------------------------------------------

def _open_hypotheses(node: Proof) -> frozenset:
    if node.rule == "hyp":
        return frozenset([normalize(node.conclusion)])
    if node.rule in ("imp_i", "not_i"):
        return _open_hypotheses(node.children[0]) - {normalize(node.conclusion).antecedent}
    if node.rule == "or_e":
        major = normalize(node.children[0].conclusion)
        return (_open_hypotheses(node.children[0])
                | (_open_hypotheses(node.children[1]) - {major.left})
                | (_open_hypotheses(node.children[2]) - {major.right}))
    return frozenset().union(*(_open_hypotheses(c) for c in node.children))


def dependency_nodes(arg: Argument, q: Formula) -> list[Proof]:
    """Nodes of ``arg``'s proof that establish ``q`` outright.

    Hypothesis leaves, and sub-conclusions that still rest on a hypothesis
    discharged further down, are conditional and do not count.
    """
    if arg.proof is None:
        return []
    q = normalize(q)
    return [n for n in arg.proof.nodes()
            if n.rule != "hyp" and normalize(n.conclusion) == q and not _open_hypotheses(n)]


def depends_on(arg: Argument, q: Formula) -> bool:
    return bool(dependency_nodes(arg, q))
