"""Con arguments, defeat and selective aggregation (bounded-delta calculus).

The prover only ever produces positively signed arguments.  Signed closure
adds, for every pro argument ``(p, a, s)``, the con argument
``(-p, a, flip(s))``, plus the strengthened arguments ``(~~q, a, s)`` required
for negated formulas ``~q`` with an argument for ``q``.

A con argument ``(Q, b, m)`` attacks a pro argument ``(P, a, l)``

* by rebutting it when ``P = Q`` and either ``m = --`` or ``m = -`` and ``l = +``;
* by discounting it when the proof of ``(P, a, l)`` establishes ``Q`` at some
  node, with the same strength condition applied to that node's sign.

A con argument is attacked exactly when the pro argument it was derived from
is.  Labels are the least fixpoint of: IN when every attacker is OUT, OUT
when some attacker is IN; everything left over is UNDEC.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .aggregation import Flattener, flatten, get_flattener
from .dictionaries import MINUS, MINUSMINUS, PLUS, PLUSPLUS, get as get_dictionary
from .errors import SignError
from .kernel import (
    FALSUM, Database, Formula, Implies, Or, complement, is_negation, normalize,
    parse_formula, render, subformulas,
)
from .prover import DEFAULT_LIMITS, Argument, Proof, SearchLimits, dependency_nodes, find_arguments

IN, OUT, UNDEC = "IN", "OUT", "UNDEC"


@dataclass(frozen=True)
class ConArgument:
    """A negatively signed argument, derived from the pro argument ``origin``."""

    formula: Formula
    grounds: frozenset
    sign: str
    origin: Argument

    @property
    def triple(self):
        return (self.formula, self.grounds, self.sign)

    def sorted_grounds(self):
        return sorted({str(g) for g in self.grounds})

    def sort_key(self):
        return (self.sorted_grounds(), render(self.formula), self.sign,
                render(self.origin.formula))

    def render(self, dictionary=None):
        return f"({render(self.formula)}, {{{', '.join(self.sorted_grounds())}}}, {self.sign})"


def _dual(arg: Argument, dictionary) -> ConArgument:
    return ConArgument(complement(arg.formula), arg.grounds, dictionary.flip(arg.sign), arg)


@dataclass
class SignedArgumentPool:
    dictionary: object
    pro: list = field(default_factory=list)
    con: list = field(default_factory=list)
    formulas: list = field(default_factory=list)  # the formulas queried for pro arguments

    def pro_for(self, p) -> list:
        p = normalize(p)
        return [a for a in self.pro if a.formula == p]

    def con_for(self, p) -> list:
        p = normalize(p)
        return [c for c in self.con if c.formula == p]


def close(pro_args, dictionary, formulas=()) -> SignedArgumentPool:
    """Pool of ``pro_args`` and their duals, de-duplicated and sorted."""
    dictionary = get_dictionary(dictionary)
    pro = {}
    for a in pro_args:
        pro.setdefault(a.triple, a)
    con = {}
    for a in pro.values():
        c = _dual(a, dictionary)
        con.setdefault((c.triple, a.triple), c)
    return SignedArgumentPool(
        dictionary,
        sorted(pro.values(), key=Argument.sort_key),
        sorted(con.values(), key=ConArgument.sort_key),
        list(formulas),
    )


def pool_from_arguments(args, dictionary="bounded-delta") -> SignedArgumentPool:
    """Pool over a free-standing argument set that may already contain con arguments.

    A con argument ``(q, a, m)`` gets as origin the pro argument
    ``(-q, a, flip(m))``, which joins the pool.
    """
    d = get_dictionary(dictionary)
    pro = []
    given_con = []
    for a in args:
        if d.is_negative(a.sign):
            origin_formula = complement(a.formula)
            origin_sign = d.flip(a.sign)
            origin = Argument(origin_formula, a.grounds, origin_sign,
                              Proof("axiom", origin_formula, (), None, origin_sign))
            pro.append(origin)
            given_con.append(ConArgument(normalize(a.formula), a.grounds, a.sign, origin))
        else:
            pro.append(a)
    pool = close(pro, d)
    known = {(c.triple, c.origin.triple) for c in pool.con}
    for c in given_con:
        if (c.triple, c.origin.triple) not in known:
            pool.con.append(c)
    pool.con.sort(key=ConArgument.sort_key)
    return pool


def _searchable(f: Formula) -> bool:
    return not any(isinstance(g, Or) for g in subformulas(f))


def closure_formulas(db: Database, goals=()) -> list[Formula]:
    """Ground subformulas of the axioms (and the goals), plus their complements."""
    base = {}
    for entry in db.entries:
        for _, f, _ in db.instances(entry):
            for g in subformulas(f):
                base.setdefault(g)
    for goal in goals:
        for g in subformulas(normalize(goal)):
            base.setdefault(g)
    out = dict(base)
    for g in base:
        out.setdefault(complement(g))
    return sorted((f for f in out if _searchable(f)), key=render)


def strengthen(arg: Argument, dictionary) -> Argument:
    """``(q, a, s)`` to ``(~~q, a, s)`` with its minimal-logic proof."""
    q = arg.formula
    nq = Implies(q, FALSUM)
    bottom = Proof("imp_e", FALSUM, (arg.proof, Proof("hyp", nq, (), None, dictionary.top)),
                   None, arg.sign)
    nnq = Implies(nq, FALSUM)
    return Argument(nnq, arg.grounds, arg.sign, Proof("imp_i", nnq, (bottom,), None, arg.sign))


def _require_delta(db: Database):
    if not db.dictionary.has_flip:
        raise SignError(f"signed closure needs a delta or bounded-delta database, "
                        f"not {db.dictionary.name}")


def signed_closure(db: Database, limits: SearchLimits = DEFAULT_LIMITS, goals=()) -> SignedArgumentPool:
    """Pro arguments for every formula the database talks about, closed under duality."""
    _require_delta(db)
    goals = [parse_formula(g) if isinstance(g, str) else g for g in goals]
    formulas = closure_formulas(db, goals)
    pro = {f: find_arguments(db, f, limits) for f in formulas}
    extra = []
    for f in formulas:
        if is_negation(f):
            # f = ~q and -f = q: each argument for q yields one for ~f
            for a in pro.get(complement(f), []):
                extra.append(strengthen(a, db.dictionary))
    every = [a for f in formulas for a in pro[f]] + extra
    return close(every, db.dictionary, formulas)


# -- attacks ---------------------------------------------------------------

def _strong_enough(attacker_sign, target_sign) -> bool:
    return attacker_sign == MINUSMINUS or (attacker_sign == MINUS and target_sign == PLUS)


def _signs_ok(attacker, target):
    return attacker.sign in (MINUS, MINUSMINUS) and target.sign in (PLUS, PLUSPLUS)


def rebuts(attacker, target) -> bool:
    if not _signs_ok(attacker, target):
        return False
    return (normalize(attacker.formula) == normalize(target.formula)
            and _strong_enough(attacker.sign, target.sign))


def discounts(attacker, target) -> bool:
    if not _signs_ok(attacker, target):
        return False
    return any(_strong_enough(attacker.sign, node.sign)
               for node in dependency_nodes(target, attacker.formula))


def attacks(pool: SignedArgumentPool) -> list[tuple]:
    """``(con, pro, kind)`` for every attack, kind ``"rebut"`` or ``"discount"``."""
    by_node_formula = {}
    for a in pool.pro:
        if a.proof is None:
            continue
        for node in a.proof.nodes():
            by_node_formula.setdefault(normalize(node.conclusion), []).append(a)
    out = []
    for c in pool.con:
        seen = set()
        for a in by_node_formula.get(c.formula, []):
            if id(a) in seen:
                continue
            seen.add(id(a))
            if rebuts(c, a):
                out.append((c, a, "rebut"))
            elif discounts(c, a):
                out.append((c, a, "discount"))
    return out


@dataclass
class Labelling:
    pool: SignedArgumentPool
    labels: dict  # keyed by argument triple (pro) or (triple, origin triple) (con)
    edges: list

    def __getitem__(self, arg):
        return self.labels[_key(arg)]

    def label(self, arg):
        return self[arg]

    def of(self, formula, grounds=None, sign=None, side="pro"):
        """Look up labels by triple components; returns a list."""
        formula = normalize(parse_formula(formula) if isinstance(formula, str) else formula)
        items = self.pool.pro if side == "pro" else self.pool.con
        out = []
        for a in items:
            if a.formula != formula:
                continue
            if grounds is not None and set(a.sorted_grounds()) != set(grounds):
                continue
            if sign is not None and a.sign != sign:
                continue
            out.append(self[a])
        return out

    def attackers(self, arg):
        k = _key(arg)
        if isinstance(arg, ConArgument):
            k = _key(arg.origin)
        return [c for c, a, _ in self.edges if _key(a) == k]

    def to_json(self) -> dict:
        d = self.pool.dictionary
        ids = {}
        nodes = []
        for side, items in (("pro", self.pool.pro), ("con", self.pool.con)):
            for a in items:
                ids[_key(a)] = f"{side[0]}{len([n for n in nodes if n['side'] == side]) + 1}"
                node = {
                    "id": ids[_key(a)], "side": side, "formula": render(a.formula),
                    "grounds": a.sorted_grounds(), "sign": d.format_sign(a.sign),
                    "label": self[a],
                }
                if side == "con":
                    node["origin"] = ids[_key(a.origin)]
                nodes.append(node)
        edges = [{"source": ids[_key(c)], "target": ids[_key(a)], "kind": kind}
                 for c, a, kind in self.edges]
        edges.sort(key=lambda e: (e["source"], e["target"]))
        return {"nodes": nodes, "edges": edges}


def _key(arg):
    if isinstance(arg, ConArgument):
        return ("con", arg.triple, arg.origin.triple)
    return ("pro", arg.triple)


def grounded_labelling(pool: SignedArgumentPool) -> Labelling:
    edges = attacks(pool)
    # a con argument stands or falls with its origin, so attacks lift to pro-on-pro
    attackers = {_key(a): set() for a in pool.pro}
    for c, a, _ in edges:
        attackers[_key(a)].add(_key(c.origin))
    label = {}
    changed = True
    while changed:
        changed = False
        for k, atts in attackers.items():
            if k in label:
                continue
            if all(label.get(x) == OUT for x in atts):
                label[k] = IN
                changed = True
            elif any(label.get(x) == IN for x in atts):
                label[k] = OUT
                changed = True
    labels = {k: label.get(k, UNDEC) for k in attackers}
    for c in pool.con:
        labels[_key(c)] = labels[_key(c.origin)]
    return Labelling(pool, labels, edges)


# -- selective aggregation -------------------------------------------------

def selective_aggregate(db: Database, p, f: Flattener | str | None = None,
                        limits: SearchLimits = DEFAULT_LIMITS):
    """Aggregate only those arguments for ``p`` that are undefeated (IN).

    Databases without con arguments (no polarity flip) reduce to plain flattening.
    """
    from .aggregation import DEFAULT_FLATTENER
    p = parse_formula(p) if isinstance(p, str) else p
    f = get_flattener(f or DEFAULT_FLATTENER[db.dictionary.name])
    if not db.dictionary.has_flip:
        return flatten(find_arguments(db, p, limits), f)
    pool = signed_closure(db, limits, goals=[p])
    labelling = grounded_labelling(pool)
    # the same arguments plain aggregation sees, so filtering can only lower the value;
    # strengthened ~~q arguments from the closure act as attackers only
    return flatten([a for a in find_arguments(db, p, limits) if labelling[a] == IN], f)


def selective(base: Flattener | str = "bnd") -> Flattener:
    """A flattener that first discards every argument not labelled IN.

    Works on free-standing argument sets (see :func:`pool_from_arguments`),
    which is how the criteria harness exercises the bounded-delta pipeline.
    """
    base = get_flattener(base)

    def rule(args):
        formulas = {normalize(a.formula) for a in args}
        pool = pool_from_arguments(args, "bounded-delta")
        labelling = grounded_labelling(pool)
        winners = [a for p in formulas for a in pool.pro_for(p)
                   if labelling[a] == IN and a.sign in (PLUS, PLUSPLUS)]
        return base.rule(winners) if winners else base.bottom

    def project(sign, rng):
        return sign

    return Flattener(
        name=f"selective-{base.name}", source="bounded-delta", codomain=base.codomain,
        rule=rule, accepts=lambda s: s in (PLUS, PLUSPLUS, MINUS, MINUSMINUS),
        leq=base.leq, bottom=base.bottom, project=project,
    )
