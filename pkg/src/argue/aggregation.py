"""Flattening: collapsing the arguments for one proposition into a confidence.

Three flatteners are built in:

``bnd``
    ``++`` if some argument is confirming, otherwise the number of arguments.
    Co-domain Nat ∪ {++} with every natural below ``++``.
``num``
    Bernoulli's rule, ``1 - prod(1 - c_i)``, treating arguments as independent.
``count``
    The number of positive arguments, whatever their sign.

All of them only aggregate positive support; negatively signed arguments are
skipped.  Conflicting evidence is handled by selective aggregation in
:mod:`argue.defeat`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .dictionaries import PLUS, PLUSPLUS, MINUS, MINUSMINUS, boundednat_leq
from .errors import AggregationError, SignError
from .kernel import Database, Formula, normalize, parse_formula, render
from .prover import DEFAULT_LIMITS, Argument, SearchLimits, find_arguments

# projection outcomes for abstract signs that a flattener cannot take
IGNORED = object()
UNREPRESENTABLE = object()


class OverlappingGroundsWarning(UserWarning):
    """Bernoulli aggregation over arguments that share axioms."""


def _symbolic(s):
    return isinstance(s, str)


def _numeric(s):
    return not isinstance(s, (str, bool)) and isinstance(s, (int, float, Fraction)) and 0 <= s <= 1


@dataclass(frozen=True)
class Flattener:
    """An aggregation function plus what the criteria harness needs to know about it.

    ``rule`` receives the de-duplicated arguments for one proposition.
    ``project`` maps an abstract sign (``+``, ``++``, ``-``, ``--``) to a
    concrete one for this flattener, or to ``IGNORED`` / ``UNREPRESENTABLE``.
    """

    name: str
    source: str
    codomain: str
    rule: Callable
    accepts: Callable
    leq: Callable
    bottom: object
    project: Callable

    def __call__(self, args):
        return flatten(args, self)

    def __repr__(self):
        return f"<Flattener {self.name}>"


def _positive_symbolic(args):
    return [a.sign for a in args if a.sign in (PLUS, PLUSPLUS)]


def _bnd_rule(args):
    signs = _positive_symbolic(args)
    return PLUSPLUS if PLUSPLUS in signs else len(signs)


def bernoulli(coefficients: Iterable) -> float:
    """``1 - prod(1 - c)``; exact when every coefficient is a Fraction."""
    cs = list(coefficients)
    if all(isinstance(c, (Fraction, int)) for c in cs):
        rest = Fraction(1)
        for c in cs:
            rest *= 1 - c
        return float(1 - rest)
    return 1.0 - math.prod(1.0 - float(c) for c in cs)


def _num_rule(args):
    return bernoulli(a.sign for a in args)


def _count_rule(args):
    return len([a for a in args if a.sign not in (MINUS, MINUSMINUS)])


def _float_leq(x, y):
    return x <= y


def _project_symbolic(sign, rng):
    return sign if sign in (PLUS, PLUSPLUS) else IGNORED


def _project_num(sign, rng):
    if sign == PLUSPLUS:
        return 1.0
    if sign == PLUS:
        return rng.uniform(0.01, 0.99)
    return IGNORED


def _project_count(sign, rng):
    if sign == PLUS:
        return PLUS
    if sign == PLUSPLUS:
        return UNREPRESENTABLE
    return IGNORED


BND = Flattener(
    name="bnd", source="bounded", codomain="Nat ∪ {++}", rule=_bnd_rule,
    accepts=_symbolic, leq=boundednat_leq, bottom=0, project=_project_symbolic,
)
NUM = Flattener(
    name="num", source="numeric", codomain="[0, 1]", rule=_num_rule,
    accepts=_numeric, leq=_float_leq, bottom=0.0, project=_project_num,
)
COUNT = Flattener(
    name="count", source="generic", codomain="Nat", rule=_count_rule,
    accepts=_symbolic, leq=lambda x, y: x <= y, bottom=0, project=_project_count,
)

FLATTENERS = {"bnd": BND, "num": NUM, "count": COUNT}

# which flattener a dictionary gets when none is asked for
DEFAULT_FLATTENER = {
    "bounded": "bnd", "bounded-delta": "bnd", "numeric": "num",
    "generic": "count", "delta": "count",
}
# which dictionaries each flattener can read
COMPATIBLE = {
    "bnd": {"bounded", "bounded-delta"},
    "num": {"numeric"},
    "count": {"generic", "bounded", "delta", "bounded-delta"},
}


def get_flattener(name) -> Flattener:
    if isinstance(name, Flattener):
        return name
    try:
        return FLATTENERS[name]
    except KeyError:
        raise KeyError(f"unknown flattener {name!r}; expected one of {', '.join(FLATTENERS)}") from None


def flatten(args: Iterable[Argument], f: Flattener | str):
    """Aggregate arguments that all conclude the same proposition."""
    f = get_flattener(f)
    unique = {}
    for a in args:
        unique.setdefault((normalize(a.formula), a.grounds, a.sign), a)
    args = list(unique.values())
    conclusions = {k[0] for k in unique}
    if len(conclusions) > 1:
        raise AggregationError("arguments for different propositions: "
                               + ", ".join(sorted(render(c) for c in conclusions)))
    kinds = {_symbolic(a.sign) for a in args}
    if len(kinds) > 1:
        raise AggregationError("arguments mix symbolic and numeric signs")
    for a in args:
        if not f.accepts(a.sign):
            raise SignError(f"flattener {f.name} cannot read sign {a.sign!r}")
    if not args:
        return f.bottom
    return f.rule(args)


def _require(db: Database, names, what):
    if db.dictionary.name not in names:
        raise SignError(f"{what} needs a {' or '.join(sorted(names))} database, "
                        f"not {db.dictionary.name}")


def _goal(p):
    return parse_formula(p) if isinstance(p, str) else p


def agg_bnd(db: Database, p: Formula | str, limits: SearchLimits = DEFAULT_LIMITS):
    """``++`` if a confirming argument for ``p`` exists, else the number of arguments."""
    _require(db, COMPATIBLE["bnd"], "agg_bnd")
    return flatten(find_arguments(db, _goal(p), limits), BND)


def agg_num(db: Database, p: Formula | str, limits: SearchLimits = DEFAULT_LIMITS) -> float:
    """Bernoulli combination of the arguments for ``p``.

    Arguments are treated as independent; shared grounds only raise an
    :class:`OverlappingGroundsWarning`.
    """
    _require(db, COMPATIBLE["num"], "agg_num")
    args = find_arguments(db, _goal(p), limits)
    for i, a in enumerate(args):
        for b in args[i + 1:]:
            if a.grounds & b.grounds:
                warnings.warn(
                    f"arguments {a.render(db.dictionary)} and {b.render(db.dictionary)} "
                    "share grounds; Bernoulli's rule assumes independence",
                    OverlappingGroundsWarning, stacklevel=2)
                break
    return flatten(args, NUM)


def aggregate(db: Database, p, f: Flattener | str | None = None,
              limits: SearchLimits = DEFAULT_LIMITS):
    """Dispatch to the flattener (default: the one matching the database's dictionary)."""
    f = get_flattener(f or DEFAULT_FLATTENER[db.dictionary.name])
    if f is BND:
        return agg_bnd(db, p, limits)
    if f is NUM:
        return agg_num(db, p, limits)
    if f.name in COMPATIBLE:
        _require(db, COMPATIBLE[f.name], f"flattener {f.name}")
    return flatten(find_arguments(db, _goal(p), limits), f)
