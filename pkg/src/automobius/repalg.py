"""Representation expressions and their exact Satake-exponent semantics.

Since alpha_f(p) beta_f(p) = 1, every local parameter of an expression built
from symmetric powers is a monomial prod_f alpha_f^{v_f}.  An expression is
therefore described exactly by a multiset of integer vectors v, one
coordinate per base form, and isomorphism questions reduce to comparing
multisets of integer tuples.

Grammar (whitespace insensitive)::

    expr := prod ("(+)" prod)*
    prod := atom ("x" atom)*
    atom := "sym" INT "(" FORMID ")" | "zeta" | "(" expr ")"
"""
from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import RepSyntaxError, UnknownFormError
from .qseries import EIGENFORMS

HOLOMORPHIC_IDS = tuple(EIGENFORMS)


class RepExpr:
    def __str__(self):
        return self.to_dsl()

    def forms(self):
        """Form ids referenced by the expression, in canonical order."""
        return canonical_form_order(self._forms())


@dataclass(frozen=True, eq=True)
class Zeta(RepExpr):
    def to_dsl(self):
        return "zeta"

    def _forms(self):
        return set()


@dataclass(frozen=True, eq=True)
class Sym(RepExpr):
    m: int
    form: str

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"symmetric power must be >= 0, got {self.m}")

    def to_dsl(self):
        return f"sym{self.m}({self.form})"

    def _forms(self):
        return {self.form}


@dataclass(frozen=True, eq=True)
class Tensor(RepExpr):
    left: RepExpr
    right: RepExpr

    def to_dsl(self):
        # the parser is left-associative, so a nested right operand needs parentheses
        return f"{_wrap(self.left, Isobaric)} x {_wrap(self.right, (Isobaric, Tensor))}"

    def _forms(self):
        return self.left._forms() | self.right._forms()


@dataclass(frozen=True, eq=True)
class Isobaric(RepExpr):
    left: RepExpr
    right: RepExpr

    def to_dsl(self):
        return f"{self.left.to_dsl()} (+) {_wrap(self.right, Isobaric)}"

    def _forms(self):
        return self.left._forms() | self.right._forms()


def _wrap(e, kind):
    return f"({e.to_dsl()})" if isinstance(e, kind) else e.to_dsl()


def canonical_form_order(forms: Iterable[str]):
    def key(f):
        if f in HOLOMORPHIC_IDS:
            return (0, HOLOMORPHIC_IDS.index(f), f)
        return (1, 0, f)

    return tuple(sorted(set(forms), key=key))


def _balanced(items, node):
    # balanced tree keeps recursion depth logarithmic for long sums
    items = list(items)
    if not items:
        raise ValueError("empty expression list")
    while len(items) > 1:
        paired = [node(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            paired.append(items[-1])
        items = paired
    return items[0]


def tensor_product(factors):
    return _balanced(factors, Tensor)


def isobaric_sum(terms):
    return _balanced(terms, Isobaric)


def repeat(e, times):
    """Isobaric sum of ``times`` copies of ``e``."""
    return isobaric_sum([e] * times)


def tensor_power(e, times):
    return tensor_product([e] * times)


# ---------------------------------------------------------------- parsing

_FORMID = re.compile(r"[A-Za-z0-9_.:\-]+")
_INT = re.compile(r"-?\d+")
_ISOBARIC = re.compile(r"\(\s*\+\s*\)")


class _Parser:
    def __init__(self, text, known_forms):
        self.text = text
        self.pos = 0
        self.known = known_forms

    def offset(self, pos=None):
        pos = self.pos if pos is None else pos
        return len(self.text[:pos].encode("utf-8"))

    def fail(self, message, pos=None):
        raise RepSyntaxError(message, self.offset(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def literal(self, s):
        self.skip()
        if self.text.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s):
        if not self.literal(s):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            self.fail(f"expected {s!r}, found {found!r}")

    def parse(self):
        e = self.expr()
        self.skip()
        if self.pos != len(self.text):
            self.fail(f"unexpected {self.text[self.pos]!r}")
        return e

    def expr(self):
        e = self.prod()
        while True:
            self.skip()
            m = _ISOBARIC.match(self.text, self.pos)
            if not m:
                return e
            self.pos = m.end()
            e = Isobaric(e, self.prod())

    def prod(self):
        e = self.atom()
        while True:
            self.skip()
            if self.text.startswith("x", self.pos):
                self.pos += 1
                e = Tensor(e, self.atom())
            else:
                return e

    def atom(self):
        self.skip()
        start = self.pos
        if self.text.startswith("zeta", self.pos):
            self.pos += 4
            return Zeta()
        if self.text.startswith("sym", self.pos):
            self.pos += 3
            m = _INT.match(self.text, self.pos)
            if not m:
                self.fail("expected symmetric power exponent after 'sym'")
            if m.group().startswith("-"):
                self.fail("symmetric power must be nonnegative")
            self.pos = m.end()
            power = int(m.group())
            self.expect("(")
            self.skip()
            fid = _FORMID.match(self.text, self.pos)
            if not fid:
                self.fail("expected form id")
            if self.known is not None and fid.group() not in self.known:
                raise UnknownFormError(f"unknown form id {fid.group()!r}", self.offset())
            self.pos = fid.end()
            self.expect(")")
            return Sym(power, fid.group())
        if self.text.startswith("(", self.pos) and not _ISOBARIC.match(self.text, self.pos):
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if self.pos >= len(self.text):
            self.fail("unexpected end of input")
        self.fail(f"unexpected {self.text[start]!r}")


def parse_rep(text: str, known_forms=HOLOMORPHIC_IDS) -> RepExpr:
    """Parse the DSL.  ``known_forms=None`` accepts any form id."""
    known = None if known_forms is None else frozenset(known_forms)
    return _Parser(text, known).parse()


# -------------------------------------------------------------- semantics

class ExponentMultiset:
    """Multiset of integer exponent vectors over an ordered list of base forms.

    Stored run-length encoded as a sorted tuple of (vector, multiplicity).
    """

    __slots__ = ("base_forms", "entries")

    def __init__(self, base_forms, counts):
        self.base_forms = tuple(base_forms)
        c = counts if isinstance(counts, Counter) else Counter(counts)
        self.entries = tuple(sorted((v, k) for v, k in c.items() if k))

    @property
    def degree(self):
        return sum(k for _, k in self.entries)

    def counter(self):
        return Counter(dict(self.entries))

    def elements(self):
        return [v for v, k in self.entries for _ in range(k)]

    def align(self, forms):
        forms = tuple(forms)
        missing = set(self.base_forms) - set(forms)
        if missing:
            raise ValueError(f"cannot drop base forms {sorted(missing)}")
        idx = [self.base_forms.index(f) if f in self.base_forms else None for f in forms]
        out = Counter()
        for v, k in self.entries:
            out[tuple(0 if i is None else v[i] for i in idx)] += k
        return ExponentMultiset(forms, out)

    def negate(self):
        return ExponentMultiset(self.base_forms, Counter({tuple(-x for x in v): k for v, k in self.entries}))

    def is_self_dual(self):
        return self.negate().entries == self.entries

    def __eq__(self, other):
        if not isinstance(other, ExponentMultiset):
            return NotImplemented
        forms = canonical_form_order(self.base_forms + other.base_forms)
        return self.align(forms).entries == other.align(forms).entries

    def __hash__(self):
        # coordinates that vanish identically do not affect equality
        keep = [f for i, f in enumerate(self.base_forms) if any(v[i] for v, _ in self.entries)]
        return hash((tuple(keep), self._restrict(keep).entries))

    def _restrict(self, forms):
        idx = [self.base_forms.index(f) for f in forms]
        out = Counter()
        for v, k in self.entries:
            out[tuple(v[i] for i in idx)] += k
        return ExponentMultiset(forms, out)

    def __repr__(self):
        return f"ExponentMultiset({self.base_forms}, degree={self.degree})"

    def multiplicity(self, v):
        return self.counter().get(tuple(v), 0)

    def decompose(self):
        """Irreducible constituents as {highest weight vector: multiplicity}.

        Per coordinate the weights of Sym^a are a, a-2, ..., -a, so the
        multiplicity of the product of Sym^{a_f} is the alternating sum of
        weight multiplicities at a + 2*eps, eps in {0,1}^k.
        """
        c = self.counter()
        dims = len(self.base_forms)
        out = {}
        for v in c:
            if any(x < 0 for x in v):
                continue
            mult = 0
            for eps in itertools.product((0, 1), repeat=dims):
                w = tuple(x + 2 * e for x, e in zip(v, eps))
                mult += (-1) ** sum(eps) * c.get(w, 0)
            if mult:
                out[v] = mult
        return out

    def trivial_multiplicity(self):
        return self.decompose().get((0,) * len(self.base_forms), 0)


def _exponent_counter(e, forms):
    if isinstance(e, Zeta):
        return Counter({(0,) * len(forms): 1})
    if isinstance(e, Sym):
        i = forms.index(e.form)
        out = Counter()
        for k in range(e.m + 1):
            v = [0] * len(forms)
            v[i] = 2 * k - e.m
            out[tuple(v)] += 1
        return out
    left = _exponent_counter(e.left, forms)
    right = _exponent_counter(e.right, forms)
    if isinstance(e, Isobaric):
        return left + right
    out = Counter()
    for u, a in left.items():
        for v, b in right.items():
            out[tuple(x + y for x, y in zip(u, v))] += a * b
    return out


def exponents(e: RepExpr, base_forms=None) -> ExponentMultiset:
    forms = tuple(base_forms) if base_forms is not None else e.forms()
    return ExponentMultiset(forms, _exponent_counter(e, forms))


def degree(e: RepExpr) -> int:
    if isinstance(e, Zeta):
        return 1
    if isinstance(e, Sym):
        return e.m + 1
    if isinstance(e, Tensor):
        return degree(e.left) * degree(e.right)
    return degree(e.left) + degree(e.right)


def evaluate(e: RepExpr, sym_values):
    """lambda_pi(p) from per-atom values, using lambda of a product = product
    of lambdas and lambda of an isobaric sum = sum.

    ``sym_values(m, form)`` returns lambda_{Sym^m(form)}(p) (scalar or array).
    """
    if isinstance(e, Zeta):
        return 1.0
    if isinstance(e, Sym):
        return sym_values(e.m, e.form)
    left = evaluate(e.left, sym_values)
    right = evaluate(e.right, sym_values)
    return left * right if isinstance(e, Tensor) else left + right


# ------------------------------------------------------------- identities

def sym_or_zeta(m, form):
    return Zeta() if m == 0 else Sym(m, form)


def check_decomposition(m: int, r: int, form="f") -> bool:
    """Sym^m x Sym^(m+r) equals the isobaric sum of Sym^(2i+r), i = 0..m."""
    if m < 0 or r < 0:
        raise ValueError("m and r must be nonnegative")
    lhs = exponents(Tensor(Sym(m, form), Sym(m + r, form)), (form,))
    rhs = exponents(isobaric_sum(Sym(2 * i + r, form) for i in range(m + 1)), (form,))
    return lhs == rhs


@dataclass(frozen=True)
class IdentityResult:
    name: str
    lhs: str
    rhs: str
    lhs_degree: int
    rhs_degree: int
    passed: bool


def _identity(name, lhs, rhs):
    forms = canonical_form_order(lhs.forms() + rhs.forms())
    a, b = exponents(lhs, forms), exponents(rhs, forms)
    return IdentityResult(name, lhs.to_dsl(), rhs.to_dsl(), a.degree, b.degree, a == b)


def check_power_identities(form="phi"):
    """Power identities for a degree-2 representation sigma = Sym^1."""
    s = Sym(1, form)
    s2, s3, s4 = Sym(2, form), Sym(3, form), Sym(4, form)
    z = Zeta()
    return [
        _identity("square", tensor_power(s, 2), Isobaric(z, s2)),
        _identity("fourth", tensor_power(s, 4), isobaric_sum([repeat(z, 2), repeat(s2, 3), s4])),
        _identity(
            "sixth",
            tensor_power(s, 6),
            isobaric_sum([repeat(z, 5), repeat(s2, 8), repeat(s4, 4), Tensor(s2, s4)]),
        ),
        _identity("sym3_square", Tensor(s3, s3), Isobaric(z, Tensor(s2, s4))),
    ]


def theorem_rep(m1, m2, f="f12", g="f16"):
    """Sym^m1(f) x Sym^m2(g)."""
    return Tensor(Sym(m1, f), Sym(m2, g))


def pi_times_pi_decomposition(m1: int, m2: int, f="f12", g="f16") -> RepExpr:
    """Isobaric sum over i <= m1, j <= m2 of Sym^2i(f) x Sym^2j(g)."""
    if f == g:
        raise ValueError("the decomposition needs two distinct forms")
    terms = []
    for i in range(m1 + 1):
        for j in range(m2 + 1):
            a, b = sym_or_zeta(2 * i, f), sym_or_zeta(2 * j, g)
            if isinstance(a, Zeta):
                terms.append(b)
            elif isinstance(b, Zeta):
                terms.append(a)
            else:
                terms.append(Tensor(a, b))
    return isobaric_sum(terms)


def fourth_power_decomposition(m1: int, m2: int, f="f12", g="f16") -> RepExpr:
    """Constituents of (pi x pi) x (pi x pi) for pi = Sym^m1(f) x Sym^m2(g).

    Runs over i1, i2 <= m1, j1, j2 <= m2, k <= min(2 i1, 2 i2),
    l <= min(2 j1, 2 j2) with terms Sym^(2k+2|i1-i2|)(f) x Sym^(2l+2|j1-j2|)(g).
    """
    if f == g:
        raise ValueError("the decomposition needs two distinct forms")
    terms = []
    for i1, i2 in itertools.product(range(m1 + 1), repeat=2):
        for j1, j2 in itertools.product(range(m2 + 1), repeat=2):
            for k in range(min(2 * i1, 2 * i2) + 1):
                for l in range(min(2 * j1, 2 * j2) + 1):
                    a = 2 * k + 2 * abs(i1 - i2)
                    b = 2 * l + 2 * abs(j1 - j2)
                    terms.append(Tensor(Sym(a, f), Sym(b, g)))
    return isobaric_sum(terms)


def fourth_power_trivial_count(m1, m2):
    """Number of trivial constituents in the fourth-power decomposition."""
    count = 0
    for i1, i2 in itertools.product(range(m1 + 1), repeat=2):
        for j1, j2 in itertools.product(range(m2 + 1), repeat=2):
            count += (i1 == i2) and (j1 == j2)
    return count
