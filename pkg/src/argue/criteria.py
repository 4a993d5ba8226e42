"""Mechanical checks of the aggregation criteria F1-F4 and the ACR criteria C1-C4.

Flattening criteria are evaluated on cases ``(Arg, extra)`` drawn over the
abstract bounded-delta dictionary.  For each case the extra argument's
grounds are reused with the sign each criterion prescribes::

    F1  flat(Arg) <= flat(Arg + {(p, a, +)})
    F2  flat({(p, a, ++)}) == flat(Arg + {(p, a, ++)})
    F3  flat(Arg) >= flat(Arg + {(p, a, -)})
    F4  flat({(p, a, --)}) == flat(Arg + {(p, a, --)}), unless Arg has a ++ argument

For flatteners that read ``--`` (the selective pipeline), F2 likewise skips
cases where Arg already holds a ``--`` argument.

Signs are projected onto the flattener's own dictionary first.  Positive-only
flatteners drop ``-`` and ``--``, which makes F3 hold by equality; F4 is not
applicable to them.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .aggregation import IGNORED, UNREPRESENTABLE, Flattener, flatten, get_flattener
from .dictionaries import MINUS, MINUSMINUS, PLUS, PLUSPLUS
from .kernel import (
    FALSUM, Atom, Database, GroundLabel, Implies, complement, is_negation, neg, normalize, render,
)
from .prover import DEFAULT_LIMITS, Argument, Proof, SearchLimits, find_arguments

PASS, FAIL, NA = "pass", "fail", "not-applicable"

FLATTENING = ("F1", "F2", "F3", "F4")
ACR = ("C1", "C2", "C3", "C4")


@dataclass
class CriterionResult:
    criterion: str
    status: str
    checked: int = 0
    counterexample: dict | None = None
    note: str | None = None
    scope: str | None = None

    def to_json(self) -> dict:
        out = {"criterion": self.criterion, "status": self.status}
        if self.scope:
            out["scope"] = self.scope
        out["checked"] = self.checked
        if self.note:
            out["note"] = self.note
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class CriteriaReport:
    results: list = field(default_factory=list)

    def get(self, criterion, scope=None) -> CriterionResult:
        for r in self.results:
            if r.criterion == criterion and (scope is None or r.scope == scope):
                return r
        raise KeyError(criterion)

    def status(self, criterion, scope=None) -> str:
        return self.get(criterion, scope).status

    def ok(self, scope=None) -> bool:
        return not any(r.status == FAIL for r in self.results
                       if scope is None or r.scope == scope)

    def select(self, scope) -> "CriteriaReport":
        return CriteriaReport([r for r in self.results if r.scope == scope])

    def to_json(self) -> list:
        return [r.to_json() for r in self.results]

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            name = f"{r.criterion}[{r.scope}]" if r.scope else r.criterion
            line = f"{name}: {r.status} ({r.checked} checked)"
            if r.note:
                line += f" - {r.note}"
            out.append(line)
            if r.counterexample is not None:
                out.append(f"  counterexample: {r.counterexample}")
        return out


# -- flattening criteria ---------------------------------------------------

P = Atom("p")


@dataclass(frozen=True)
class Case:
    args: tuple
    extra: Argument


def abstract_argument(formula, labels, sign) -> Argument:
    grounds = frozenset(GroundLabel(x) for x in labels)
    return Argument(formula, grounds, sign, Proof("axiom", formula, (), None, sign))


def _resign(a: Argument, sign) -> Argument:
    # the proof's root carries the sign too; defeat reads it when discounting
    proof = replace(a.proof, sign=sign) if a.proof is not None else None
    return replace(a, sign=sign, proof=proof)


def random_cases(n: int = 1000, seed: int = 0, max_size: int = 6, labels: int = 8) -> list[Case]:
    """``n`` reproducible cases over the proposition ``p``."""
    rng = random.Random(seed)
    pool = [f"a{i}" for i in range(labels)]
    signs = [PLUS, PLUSPLUS, MINUS, MINUSMINUS]
    weights = [4, 1, 2, 1]
    cases = []
    for _ in range(n):
        size = rng.randint(0, max_size)
        args = {}
        for _ in range(size):
            ls = rng.sample(pool, rng.randint(1, 2))
            a = abstract_argument(P, ls, rng.choices(signs, weights)[0])
            args.setdefault(a.triple, a)
        extra = abstract_argument(P, [f"x{rng.randint(0, 3)}"], PLUS)
        cases.append(Case(tuple(args.values()), extra))
    return cases


def _concretize(f, args, rng):
    out = []
    for a in args:
        s = f.project(a.sign, rng)
        if s is UNREPRESENTABLE:
            return None
        if s is not IGNORED:
            out.append(_resign(a, s))
    return out


def _close(x, y):
    if isinstance(x, float) or isinstance(y, float):
        return not isinstance(x, str) and not isinstance(y, str) and abs(x - y) <= 1e-12
    return x == y


def _arg_json(a):
    return {"formula": render(a.formula), "grounds": a.sorted_grounds(), "sign": a.sign}


def check_flattening_criteria(f: Flattener | str, cases=None, seed: int = 0) -> CriteriaReport:
    """Evaluate F1-F4 for ``f`` on every case; a failure keeps its first counterexample."""
    f = get_flattener(f)
    cases = random_cases(1000, seed) if cases is None else list(cases)
    rng = random.Random(seed)
    results = {c: CriterionResult(c, PASS) for c in FLATTENING}
    representable = {}
    for crit, sign in zip(FLATTENING, (PLUS, PLUSPLUS, MINUS, MINUSMINUS)):
        representable[crit] = f.project(sign, random.Random(0))
    ignores_negatives = representable["F3"] is IGNORED

    for case in cases:
        arg = _concretize(f, case.args, rng)
        if arg is None:
            continue
        for crit, sign in zip(FLATTENING, (PLUS, PLUSPLUS, MINUS, MINUSMINUS)):
            r = results[crit]
            if representable[crit] is UNREPRESENTABLE:
                continue
            if crit == "F4" and (ignores_negatives or any(a.sign == PLUSPLUS for a in case.args)):
                continue
            # mirror image of F4's exception: ++ against -- is a flat contradiction
            if crit == "F2" and not ignores_negatives and any(a.sign == MINUSMINUS for a in case.args):
                continue
            extra = _concretize(f, [_resign(case.extra, sign)], rng)
            if extra is None:
                continue
            with_extra = arg + [e for e in extra if e.triple not in {a.triple for a in arg}]
            if crit == "F1":
                lhs, rhs = flatten(arg, f), flatten(with_extra, f)
                ok = f.leq(lhs, rhs) or _close(lhs, rhs)
            elif crit == "F3":
                lhs, rhs = flatten(arg, f), flatten(with_extra, f)
                ok = f.leq(rhs, lhs) or _close(lhs, rhs)
            else:
                lhs, rhs = flatten(extra, f), flatten(with_extra, f)
                ok = _close(lhs, rhs)
            r.checked += 1
            if not ok and r.status != FAIL:
                r.status = FAIL
                r.counterexample = {
                    "proposition": render(P),
                    "arguments": [_arg_json(a) for a in arg],
                    "extra": _arg_json(extra[0]) if extra else None,
                    "lhs": lhs, "rhs": rhs,
                }

    for crit in FLATTENING:
        r = results[crit]
        if representable[crit] is UNREPRESENTABLE:
            r.status, r.note = NA, f"{f.name} has no counterpart of the criterion's sign"
        elif crit == "F4" and ignores_negatives:
            r.status, r.note = NA, f"{f.name} ignores negative arguments"
        elif r.checked == 0:
            r.status, r.note = NA, "no applicable case"
        elif crit == "F3" and ignores_negatives and r.status == PASS:
            r.note = "holds by equality: negative arguments are ignored"
    return CriteriaReport([results[c] for c in FLATTENING])


# -- ACR criteria ----------------------------------------------------------

def _pro_index(args):
    return {(a.formula, a.grounds, a.sign) for a in args}


def check_acr_criteria(db: Database, limits: SearchLimits = DEFAULT_LIMITS,
                       closure: bool = True, native: bool = True) -> CriteriaReport:
    """Check C1-C4 on the signed closure and/or on the bare prover.

    Results carry ``scope="closed"`` or ``scope="native"``.
    """
    from .defeat import _require_delta, signed_closure

    _require_delta(db)
    d = db.dictionary
    bounded = PLUSPLUS in d.elements
    pool = signed_closure(db, limits)
    formulas = pool.formulas
    results = []

    if closure:
        pro = _pro_index(pool.pro)
        con = {(c.formula, c.grounds, c.sign) for c in pool.con}
        results += _acr_checks(
            "closed", formulas, bounded, d,
            has_pro=lambda f, g, s: (f, g, s) in pro,
            has_con=lambda f, g, s: (f, g, s) in con,
            pro_args=pool.pro, con_args=pool.con)
    if native:
        by_formula = {}

        def native_pro(f):
            if f not in by_formula:
                try:
                    by_formula[f] = find_arguments(db, f, limits)
                except Exception:
                    by_formula[f] = []
            return by_formula[f]

        native_args = [a for f in formulas for a in native_pro(f)]
        results += _acr_checks(
            "native", formulas, bounded, d,
            has_pro=lambda f, g, s: (f, g, s) in _pro_index(native_pro(f)),
            has_con=lambda f, g, s: False,
            pro_args=native_args, con_args=[])
    return CriteriaReport(results)


def _acr_checks(scope, formulas, bounded, d, has_pro, has_con, pro_args, con_args):
    out = []
    pairs = [("C1", PLUS, "C2"), ("C3", PLUSPLUS, "C4")]
    for dual_name, sign, strong_name in pairs:
        if sign not in d.elements:
            out.append(CriterionResult(dual_name, NA, note=f"no {sign} in {d.name}", scope=scope))
            out.append(CriterionResult(strong_name, NA, note=f"no {sign} in {d.name}", scope=scope))
            continue
        flipped = d.flip(sign)

        # duality: (p, a, s) iff (-p, a, flip(s))
        r = CriterionResult(dual_name, PASS, scope=scope)
        for a in pro_args:
            if a.sign != sign:
                continue
            r.checked += 1
            if not has_con(complement(a.formula), a.grounds, flipped):
                r.status = FAIL
                r.counterexample = {
                    "argument": _arg_json(a),
                    "missing": _arg_json(replace(a, formula=complement(a.formula), sign=flipped)),
                }
                break
        if r.status == PASS:
            for c in con_args:
                if c.sign != flipped:
                    continue
                r.checked += 1
                # complement is not injective (-p = -~~p), so any preimage will do
                if not any(has_pro(x, c.grounds, sign) for x in _preimages(c.formula)):
                    r.status = FAIL
                    r.counterexample = {
                        "argument": _arg_json(c),
                        "missing": _arg_json(replace(c.origin, formula=complement(c.formula))),
                    }
                    break
        out.append(r)

        # strengthening: (-p, a, s) implies (~p, a, s)
        r = CriterionResult(strong_name, PASS, scope=scope)
        for p in formulas:
            if not is_negation(p):
                continue  # -p is ~p already: nothing to check
            q = complement(p)
            for a in pro_args:
                if a.formula != q or a.sign != sign:
                    continue
                r.checked += 1
                target = neg(p)
                if not has_pro(target, a.grounds, sign):
                    r.status = FAIL
                    r.counterexample = {
                        "argument": _arg_json(a),
                        "missing": _arg_json(replace(a, formula=target)),
                    }
                    break
            if r.status == FAIL:
                break
        out.append(r)
    return out


def _preimages(q):
    out = [complement(q)]
    if isinstance(q, Implies) and q.consequent == FALSUM:
        out.append(Implies(q, FALSUM))  # -(~~x) = ~x as well
    return out
