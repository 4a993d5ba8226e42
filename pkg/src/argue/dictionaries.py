"""Sign dictionaries: an element domain, a total order, the combination
operator used when arguments are chained, a top element and, for the delta
dictionaries, the polarity flip ``+ <-> -``, ``++ <-> --``.

Symbolic signs are the strings ``"+"``, ``"++"``, ``"-"``, ``"--"``.  Numeric
signs are numbers in [0, 1]; the parser produces :class:`fractions.Fraction`
so products of coefficients are exact and argument identity never depends on
the order in which a proof multiplied them.
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Real

from .errors import SignError

PLUS, PLUSPLUS, MINUS, MINUSMINUS = "+", "++", "-", "--"

# ascending: -- < - < + < ++
_RANK = {MINUSMINUS: 0, MINUS: 1, PLUS: 2, PLUSPLUS: 3}
_FLIP = {PLUS: MINUS, MINUS: PLUS, PLUSPLUS: MINUSMINUS, MINUSMINUS: PLUSPLUS}

_DECIMAL = re.compile(r"^(?:\d+(?:\.\d*)?|\.\d+)$")


class Dictionary:
    """A finite symbolic dictionary.  See :class:`NumericDictionary` for [0, 1]."""

    numeric = False

    def __init__(self, name, elements):
        self.name = name
        self.elements = tuple(sorted(elements, key=_RANK.__getitem__))
        self.positive_elements = tuple(e for e in self.elements if e in (PLUS, PLUSPLUS))
        self.top = self.elements[-1]
        self.has_flip = MINUS in self.elements

    def __repr__(self):
        return f"<Dictionary {self.name}>"

    def __eq__(self, other):
        return isinstance(other, Dictionary) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def contains(self, s) -> bool:
        return isinstance(s, str) and s in self.elements

    def is_positive(self, s) -> bool:
        return s in self.positive_elements

    def is_negative(self, s) -> bool:
        return isinstance(s, str) and s in (MINUS, MINUSMINUS) and s in self.elements

    def _check(self, *signs):
        for s in signs:
            if not self.contains(s):
                raise SignError(f"{s!r} is not a sign of the {self.name} dictionary")

    def leq(self, l, m) -> bool:
        self._check(l, m)
        return _RANK[l] <= _RANK[m]

    def combine(self, l, m):
        """Minimal support: the weaker of two positive signs."""
        self._check(l, m)
        for s in (l, m):
            if s not in self.positive_elements:
                raise SignError(f"{s!r}: only positive signs are combined inside proofs")
        return l if _RANK[l] <= _RANK[m] else m

    def flip(self, s):
        if not self.has_flip:
            raise SignError(f"the {self.name} dictionary has no polarity flip")
        self._check(s)
        return _FLIP[s]

    def parse_sign(self, text: str):
        text = text.strip()
        if text not in self.elements:
            raise SignError(f"{text!r} is not a sign of the {self.name} dictionary")
        return text

    def format_sign(self, s) -> str:
        return s


class NumericDictionary(Dictionary):
    """Coefficients in [0, 1] under multiplication, with top 1."""

    numeric = True

    def __init__(self):
        self.name = "numeric"
        self.elements = None
        self.positive_elements = None
        self.top = Fraction(1)
        self.has_flip = False

    def contains(self, s) -> bool:
        return isinstance(s, Real) and not isinstance(s, bool) and 0 <= s <= 1

    def is_positive(self, s) -> bool:
        return self.contains(s)

    def is_negative(self, s) -> bool:
        return False

    def leq(self, l, m) -> bool:
        self._check(l, m)
        return l <= m

    def combine(self, l, m):
        self._check(l, m)
        return l * m

    def parse_sign(self, text: str):
        text = text.strip()
        if not _DECIMAL.match(text):
            raise SignError(f"{text!r} is not a decimal coefficient")
        value = Fraction(text)
        if value > 1:
            raise SignError(f"{text} lies outside [0, 1]")
        return value

    def format_sign(self, s) -> str:
        return repr(float(s))


DICTIONARIES = {
    "generic": Dictionary("generic", [PLUS]),
    "bounded": Dictionary("bounded", [PLUS, PLUSPLUS]),
    "delta": Dictionary("delta", [PLUS, MINUS]),
    "bounded-delta": Dictionary("bounded-delta", [PLUSPLUS, PLUS, MINUS, MINUSMINUS]),
    "numeric": NumericDictionary(),
}


def get(name) -> Dictionary:
    if isinstance(name, Dictionary):
        return name
    try:
        return DICTIONARIES[name]
    except KeyError:
        raise KeyError(f"unknown dictionary {name!r}; expected one of "
                       f"{', '.join(DICTIONARIES)}") from None


def combine(d, l, m):
    return get(d).combine(l, m)


def leq(d, l, m) -> bool:
    return get(d).leq(l, m)


def top(d):
    return get(d).top


def flip(d, s):
    return get(d).flip(s)


# -- Nat ∪ {++}: the co-domain of counting aggregation ----------------------

def boundednat_key(x):
    """Sort key for Nat ∪ {++}: naturals in their usual order, all below ``++``."""
    if x == PLUSPLUS:
        return (1, 0)
    if isinstance(x, int) and not isinstance(x, bool) and x >= 0:
        return (0, x)
    raise SignError(f"{x!r} is not in Nat ∪ {{++}}")


def boundednat_leq(x, y) -> bool:
    return boundednat_key(x) <= boundednat_key(y)


def format_confidence(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (Fraction, float)):
        return repr(float(x))
    return str(x)
