import json
import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from argue import (
    Database, Proof, SearchLimits, check_proof, depends_on, find_arguments, parse_database,
    parse_formula, proof_from_json,
)
from argue.errors import FragmentError, ProofError
from argue.kernel import GroundLabel

import oracle
from kbgen import random_kb

TUMOUR = """dict bounded
c1 : cell(X) -> growthLtd(X)        [+]
t1 : tumourCell(X) -> cell(X)       [++]
t2 : tumourCell(X) -> ~growthLtd(X) [++]
f1 : tumourCell(someX)              [++]
"""
ALL = SearchLimits(depth=8, max_args=10**6, minimal=False)


@pytest.fixture
def tumour():
    return parse_database(TUMOUR)


def triples(args):
    return {(a.formula, a.grounds, a.sign) for a in args}


def node(rule, conclusion, *children, label=None):
    lab = None if label is None else GroundLabel(label)
    return Proof(rule, parse_formula(conclusion), tuple(children), lab)


def test_tumour_arguments(tumour):
    (arg,) = find_arguments(tumour, parse_formula("growthLtd(someX)"))
    assert arg.sorted_grounds() == ["c1(someX)", "f1", "t1(someX)"]
    assert arg.sign == "+"
    (con,) = find_arguments(tumour, parse_formula("~growthLtd(someX)"))
    assert con.sorted_grounds() == ["f1", "t2(someX)"]
    assert con.sign == "++"


def test_goal_must_be_ground_and_disjunction_free(tumour):
    with pytest.raises(FragmentError):
        find_arguments(tumour, parse_formula("cell(X)"))
    with pytest.raises(FragmentError):
        find_arguments(tumour, parse_formula("cell(someX) | growthLtd(someX)"))


def test_no_arguments_is_empty(tumour):
    assert find_arguments(tumour, parse_formula("cell(other)")) == []


def test_implication_goal_uses_hypothesis():
    db = parse_database("dict bounded\nr1 : a -> b [+]\nr2 : b -> c [++]\n")
    (arg,) = find_arguments(db, parse_formula("a -> c"))
    assert arg.sorted_grounds() == ["r1", "r2"] and arg.sign == "+"
    (taut,) = find_arguments(db, parse_formula("a -> a"))
    assert taut.grounds == frozenset() and taut.sign == "++"


def test_conjunction_rules():
    db = parse_database("dict bounded\nf1 : a & b [++]\nf2 : c [+]\n")
    assert [a.sorted_grounds() for a in find_arguments(db, parse_formula("b"))] == [["f1"]]
    (both,) = find_arguments(db, parse_formula("b & c"))
    assert both.sorted_grounds() == ["f1", "f2"] and both.sign == "+"


def test_depth_is_proof_height():
    db = parse_database("dict generic\nf : a [+]\nr1 : a -> b [+]\nr2 : b -> c [+]\n")
    c = parse_formula("c")
    assert find_arguments(db, c, SearchLimits(depth=2)) == []
    assert len(find_arguments(db, c, SearchLimits(depth=3))) == 1


def test_minimal_keeps_incomparable_grounds():
    db = parse_database("dict bounded\nf1 : a [+]\nf2 : a -> b [++]\nf3 : b [++]\n")
    minimal = find_arguments(db, parse_formula("b"))
    assert [(a.sorted_grounds(), a.sign) for a in minimal] == [(["f1", "f2"], "+"), (["f3"], "++")]
    every = find_arguments(db, parse_formula("b"), ALL)
    # f3 proves a -> b vacuously, which then fires on f1
    assert [(a.sorted_grounds(), a.sign) for a in every] == [
        (["f1", "f2"], "+"), (["f1", "f3"], "+"), (["f3"], "++")]


def test_minimal_drops_superset_grounds():
    db = parse_database("dict bounded\nf1 : a [++]\nr1 : a -> a [++]\n")
    assert [a.sorted_grounds() for a in find_arguments(db, parse_formula("a"))] == [["f1"]]
    assert [a.sorted_grounds() for a in find_arguments(db, parse_formula("a"), ALL)] == [
        ["f1"], ["f1", "r1"]]


def test_cycle_terminates_at_large_depth():
    db = parse_database("dict generic\nr1 : a -> b [+]\nr2 : b -> a [+]\nf : a [+]\n")
    args = find_arguments(db, parse_formula("b"), SearchLimits(depth=200, minimal=False))
    assert [a.sorted_grounds() for a in args] == [["f", "r1"], ["f", "r1", "r2"]]


def test_max_args_caps_the_result():
    db = parse_database("dict generic\n" + "".join(f"r{i} : a{i} -> g [+]\nf{i} : a{i} [+]\n"
                                                      for i in range(5)))
    assert len(find_arguments(db, parse_formula("g"))) == 5
    assert len(find_arguments(db, parse_formula("g"), SearchLimits(max_args=2))) == 2


def test_numeric_signs_multiply():
    db = parse_database("dict numeric\nf : a [0.5]\nr : a -> b [0.4]\n")
    (arg,) = find_arguments(db, parse_formula("b"))
    assert float(arg.sign) == pytest.approx(0.2, abs=1e-12)


def test_negative_axiom_read_as_complement():
    db = parse_database("dict delta\nf : a [-]\n")
    (arg,) = find_arguments(db, parse_formula("~a"))
    assert arg.sign == "+"


def test_search_limits_validated():
    with pytest.raises(ValueError):
        SearchLimits(depth=0)


# -- proof checking --------------------------------------------------------

def test_check_found_proofs(tumour):
    for goal in ["growthLtd(someX)", "~growthLtd(someX)", "cell(someX)"]:
        for arg in find_arguments(tumour, parse_formula(goal)):
            assert check_proof(tumour, arg.proof).triple == arg.triple


def test_proof_json_roundtrip(tumour):
    (arg,) = find_arguments(tumour, parse_formula("growthLtd(someX)"))
    data = json.loads(json.dumps(arg.proof.to_json(tumour.dictionary)))
    assert check_proof(tumour, proof_from_json(data, tumour)).triple == arg.triple


def test_or_elimination_grounds_include_major():
    db = parse_database("dict bounded\nf1 : a | b [++]\nr1 : a -> c [++]\nr2 : b -> c [+]\n")
    left = node("imp_e", "c", node("hyp", "a"), node("axiom", "a -> c", label="r1"))
    right = node("imp_e", "c", node("hyp", "b"), node("axiom", "b -> c", label="r2"))
    p = node("or_e", "c", node("axiom", "a | b", label="f1"), left, right)
    arg = check_proof(db, p)
    assert arg.sorted_grounds() == ["f1", "r1", "r2"] and arg.sign == "+"


def test_or_and_not_rules():
    db = parse_database("dict bounded\nf1 : a [++]\nf2 : ~a [+]\n")
    p = node("or_i_right", "b | a", node("axiom", "a", label="f1"))
    assert check_proof(db, p).sorted_grounds() == ["f1"]
    bottom = node("not_e", "#", node("axiom", "a", label="f1"), node("axiom", "~a", label="f2"))
    assert check_proof(db, bottom).sign == "+"
    ni = node("not_i", "~b", node("not_e", "#", node("axiom", "a", label="f1"),
                                  node("axiom", "~a", label="f2")))
    assert check_proof(db, ni).sorted_grounds() == ["f1", "f2"]


@pytest.mark.parametrize("bad,path", [
    (node("imp_e", "b", node("axiom", "a", label="f1"), node("axiom", "a -> c", label="r1")), "root"),
    (node("imp_e", "b", node("hyp", "a"), node("axiom", "a -> b", label="r1")), "root/0"),
    (node("and_e_left", "a", node("axiom", "a", label="f1")), "root"),
    (node("axiom", "b", label="f1"), "root"),
    (node("imp_i", "a -> b", node("axiom", "b", label="nope")), "root/0"),
    (node("imp_e", "b", node("axiom", "a", label="f1")), "root"),
])
def test_invalid_proofs_name_the_node(bad, path):
    db = parse_database("dict bounded\nf1 : a [+]\nr1 : a -> b [+]\nr2 : a -> c [+]\n")
    with pytest.raises(ProofError) as info:
        check_proof(db, bad)
    assert path in str(info.value)


def test_stated_sign_must_agree():
    db = parse_database("dict bounded\nf1 : a [+]\n")
    p = Proof("axiom", parse_formula("a"), (), GroundLabel("f1"), "++")
    with pytest.raises(ProofError):
        check_proof(db, p)


def test_numeric_stated_sign_tolerance():
    db = parse_database("dict numeric\nf : a [0.1]\nr : a -> b [0.3]\n")
    (arg,) = find_arguments(db, parse_formula("b"))
    data = arg.proof.to_json(db.dictionary)
    data["sign"] = 0.1 * 0.3  # 0.030000000000000002
    assert check_proof(db, proof_from_json(data, db)).triple == arg.triple


def test_depends_on_ignores_hypothetical_nodes():
    db = parse_database("dict bounded\nf1 : a [+]\nr1 : a -> b [+]\nr2 : b -> c [+]\n")
    (arg,) = find_arguments(db, parse_formula("c"))
    assert depends_on(arg, parse_formula("b"))
    assert depends_on(arg, parse_formula("a"))
    (imp,) = find_arguments(db, parse_formula("a -> c"))
    # b is only derived under the hypothesis a
    assert not depends_on(imp, parse_formula("b"))
    assert depends_on(imp, parse_formula("b -> c"))


# -- properties over random databases --------------------------------------

kb_seeds = st.integers(min_value=0, max_value=10**6)
slow = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _goals(db, depth):
    found, universe = oracle.closure(db, depth)
    return sorted(universe, key=str)


@slow
@given(kb_seeds, st.integers(1, 4))
def test_soundness_roundtrip(seed, depth):
    db = random_kb(random.Random(seed))
    limits = SearchLimits(depth=depth, max_args=10**6, minimal=False)
    for goal in _goals(db, depth):
        for arg in find_arguments(db, goal, limits):
            assert arg.proof.height() <= depth
            assert check_proof(db, arg.proof).triple == arg.triple
            leaves = list(arg.proof.leaves())
            assert arg.grounds == {n.label for n in leaves if n.rule == "axiom"}
            sign = db.dictionary.top
            for n in leaves:
                sign = db.dictionary.combine(sign, n.sign)
            assert sign == arg.sign
            assert all(n.sign == db.dictionary.top for n in leaves if n.rule == "hyp")


@slow
@given(kb_seeds, st.integers(1, 3))
def test_monotone_in_depth(seed, depth):
    db = random_kb(random.Random(seed))
    lo = SearchLimits(depth=depth, max_args=10**6, minimal=False)
    hi = SearchLimits(depth=depth + 1, max_args=10**6, minimal=False)
    for goal in _goals(db, depth):
        assert triples(find_arguments(db, goal, lo)) <= triples(find_arguments(db, goal, hi))


@slow
@given(kb_seeds, st.integers(1, 4))
def test_monotone_in_axioms(seed, depth):
    rng = random.Random(seed)
    db = random_kb(rng, max_axioms=5)
    extra = random_kb(rng, max_axioms=1).entries[0]
    bigger = db.with_axiom("extra", extra.formula, extra.sign)
    limits = SearchLimits(depth=depth, max_args=10**6, minimal=False)
    for goal in _goals(db, depth):
        assert triples(find_arguments(db, goal, limits)) <= triples(find_arguments(bigger, goal, limits))


@slow
@given(kb_seeds, st.integers(1, 4))
def test_minimal_is_the_antichain_of_all(seed, depth):
    db = random_kb(random.Random(seed))
    every = SearchLimits(depth=depth, max_args=10**6, minimal=False)
    minimal = SearchLimits(depth=depth, max_args=10**6, minimal=True)
    for goal in _goals(db, depth):
        full = find_arguments(db, goal, every)
        got = triples(find_arguments(db, goal, minimal))
        grounds = {a.grounds for a in full}
        least = {g for g in grounds if not any(h < g for h in grounds)}
        expected = set()
        for g in least:
            signs = [a.sign for a in full if a.grounds == g]
            best = max(signs, key=lambda s: db.dictionary.elements.index(s))
            expected.add((goal, g, best))
        assert got == expected


@slow
@given(kb_seeds, st.integers(1, 4))
def test_matches_oracle(seed, depth):
    db = random_kb(random.Random(seed))
    found, universe = oracle.closure(db, depth)
    limits = SearchLimits(depth=depth, max_args=10**6, minimal=False)
    for goal in universe:
        got = {(frozenset(map(str, a.grounds)), a.sign) for a in find_arguments(db, goal, limits)}
        assert got == found.get(goal, set()), goal


def test_numeric_kbs_match_oracle():
    rng = random.Random(3)
    for _ in range(30):
        db = random_kb(rng, dictionary="numeric")
        found, universe = oracle.closure(db, 3)
        limits = SearchLimits(depth=3, max_args=10**6, minimal=False)
        for goal in universe:
            got = {(frozenset(map(str, a.grounds)), a.sign) for a in find_arguments(db, goal, limits)}
            assert got == found.get(goal, set())


def test_deterministic_order(tumour):
    a = find_arguments(tumour, parse_formula("growthLtd(someX)"), ALL)
    b = find_arguments(parse_database(TUMOUR), parse_formula("growthLtd(someX)"), ALL)
    assert [x.render() for x in a] == [x.render() for x in b]
    assert [x.sort_key() for x in a] == sorted(x.sort_key() for x in a)
