"""Small random knowledge bases for the property and acceptance tests."""
import random

from argue import Database

SIGNS = ["--", "-", "+", "++"]
UNARY = ["p", "q", "r"]
PROPS = ["a", "b", "c"]
CONSTS = ["k1", "k2"]


def _lit(rng, var):
    if rng.random() < 0.5:
        return rng.choice(PROPS)
    return f"{rng.choice(UNARY)}({var})"


def _body(rng, var):
    kind = rng.randrange(7)
    x, y, z = _lit(rng, var), _lit(rng, var), _lit(rng, var)
    if kind == 0:
        return x
    if kind == 1:
        return f"{x} -> {y}"
    if kind == 2:
        return f"{x} & {y} -> {z}"
    if kind == 3:
        return f"{x} -> #"
    if kind == 4:
        return f"{x} -> ~{y}"
    if kind == 5:
        return f"({x} -> {y}) -> {z}"
    return f"{x} & {y}"


def random_kb(rng: random.Random, max_axioms=6, n_consts=2, dictionary="bounded-delta"):
    consts = CONSTS[:n_consts]
    axioms = []
    for i in range(rng.randint(1, max_axioms)):
        if rng.random() < 0.4:
            text = _body(rng, "X")  # schema
        else:
            text = _body(rng, rng.choice(consts))
        if dictionary == "numeric":
            sign = str(rng.choice([0.2, 0.5, 0.7, 0.9, 1.0]))
        elif dictionary == "bounded-delta":
            sign = rng.choices(SIGNS, [1, 1, 4, 2])[0]
        else:
            sign = rng.choice(["+", "++"])
        axioms.append((f"x{i}", text, sign))
    db = Database.build(dictionary, axioms)
    if not db.constants:
        # schemas need something to range over
        db = Database.build(dictionary, axioms + [(f"x{len(axioms)}", f"p({consts[0]})", "1.0" if dictionary == "numeric" else "+")])
    return db


def random_kbs(n, seed=0, **kw):
    rng = random.Random(seed)
    return [random_kb(rng, **kw) for _ in range(n)]
