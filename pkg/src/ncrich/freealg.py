"""Noncommutative polynomials over the rationals.

A polynomial in the free associative algebra Q<X1, ..., Xm> is stored as a map
from words (tuples of 1-based variable indices) to nonzero ``Fraction``
coefficients. The empty word is the unit monomial.

Example:
    >>> f = parse("X1*X2 - X2*X1", 2)
    >>> str(f)
    'X1*X2 - X2*X1'
    >>> degrees(f)
    ((1, 1), 2)
"""

from __future__ import annotations

import re
from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Word = tuple  # tuple[int, ...]

MULTILINEAR = "multilinear"
COMPLETELY_HOMOGENEOUS = "completely_homogeneous"
GENERAL = "general"


class ParseError(ValueError):
    """Raised for malformed polynomial text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _word_key(word: Word):
    return (len(word), word)


class NcPoly:
    """Immutable noncommutative polynomial in ``m`` variables."""

    __slots__ = ("m", "_terms", "_hash")

    def __init__(self, m: int, terms: Mapping[Word, object] | None = None):
        if m < 1:
            raise ValueError("variable count must be positive")
        clean: dict[Word, Fraction] = {}
        for word, c in (terms or {}).items():
            word = tuple(int(x) for x in word)
            for x in word:
                if not 1 <= x <= m:
                    raise ValueError(f"variable index {x} out of range 1..{m}")
            c = Fraction(c)
            if c:
                clean[word] = clean.get(word, Fraction(0)) + c
                if not clean[word]:
                    del clean[word]
        self.m = m
        self._terms = dict(sorted(clean.items(), key=lambda kv: _word_key(kv[0])))
        self._hash = None

    # construction helpers
    @classmethod
    def var(cls, i: int, m: int) -> "NcPoly":
        return cls(m, {(i,): 1})

    @classmethod
    def const(cls, c, m: int) -> "NcPoly":
        return cls(m, {(): c})

    @classmethod
    def standard(cls, k: int, m: int | None = None) -> "NcPoly":
        """Standard polynomial s_k: signed sum of X_{p1}...X_{pk} over all orderings."""
        from itertools import permutations

        terms = {}
        for perm in permutations(range(1, k + 1)):
            inversions = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
            terms[perm] = -1 if inversions % 2 else 1
        return cls(m or k, terms)

    @property
    def terms(self) -> dict[Word, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def words(self) -> list[Word]:
        return list(self._terms)

    def coefficient(self, word: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def without_constant(self) -> "NcPoly":
        return NcPoly(self.m, {w: c for w, c in self._terms.items() if w})

    def filter(self, keep) -> "NcPoly":
        return NcPoly(self.m, {w: c for w, c in self._terms.items() if keep(w)})

    # arithmetic
    def _coerce(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            if other.m != self.m:
                raise ValueError("variable counts differ")
            return other
        if isinstance(other, (int, Fraction)):
            return NcPoly.const(other, self.m)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for w, c in other._terms.items():
            terms[w] = terms.get(w, 0) + c
        return NcPoly(self.m, terms)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly(self.m, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Word, Fraction] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                terms[w] = terms.get(w, 0) + c1 * c2
        return NcPoly(self.m, terms)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = NcPoly.const(1, self.m)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NcPoly.const(other, self.m)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self.m == other.m and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"NcPoly({self.m}, {str(self)!r})"

    def __str__(self):
        return to_string(self)


def _format_word(word: Word) -> str:
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(f"X{word[i]}" + (f"^{run}" if run > 1 else ""))
        i = j
    return "*".join(parts)


def to_string(f: NcPoly) -> str:
    """Canonical text: terms in (length, lexicographic) word order."""
    if f.is_zero():
        return "0"
    out = []
    for k, (word, c) in enumerate(f.items()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not word:
            body = str(mag)
        elif mag == 1:
            body = _format_word(word)
        else:
            body = f"{mag}*{_format_word(word)}"
        if k == 0:
            out.append(("-" if sign == "-" else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[xX]\d+)|(?P<op>[-+*^/()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = mt.lastgroup
        tokens.append((kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, m: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.m = m

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, got {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self) -> NcPoly:
        f = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return f

    def expr(self) -> NcPoly:
        f = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> NcPoly:
        f = self.unary()
        while True:
            tok = self.peek()
            if tok[1] == "*":
                self.take()
                f = f * self.unary()
            elif tok[0] in ("num", "var") or tok[1] == "(":
                raise ParseError("juxtaposition is not multiplication; use '*'", tok[2])
            else:
                return f

    def unary(self) -> NcPoly:
        tok = self.peek()
        if tok[1] == "-":
            self.take()
            return -self.unary()
        if tok[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> NcPoly:
        f = self.atom()
        while self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[1] == "-":
                raise ParseError("negative exponent", tok[2])
            if tok[0] != "num":
                raise ParseError("exponent must be a nonnegative integer literal", tok[2])
            f = f ** int(tok[1])
        return f

    def atom(self) -> NcPoly:
        tok = self.take()
        kind, value, pos = tok
        if kind == "num":
            c = Fraction(int(value))
            if self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "num":
                    raise ParseError("expected integer denominator", den[2])
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2])
                c = Fraction(int(value), int(den[1]))
            return NcPoly.const(c, self.m)
        if kind == "var":
            idx = int(value[1:])
            if not 1 <= idx <= self.m:
                raise ParseError(f"variable {value} out of range 1..{self.m}", pos)
            return NcPoly.var(idx, self.m)
        if value == "(":
            f = self.expr()
            self.expect(")")
            return f
        raise ParseError(f"unexpected token {value or 'end of input'!r}", pos)


def parse(text: str, variable_count: int) -> NcPoly:
    """Parse polynomial text such as ``"(X1*X2)^2 + 3/2"`` in ``variable_count`` variables."""
    return _Parser(text, variable_count).parse()


# --- structural queries ------------------------------------------------------


def letter_counts(word: Word, m: int) -> tuple[int, ...]:
    c = Counter(word)
    return tuple(c.get(i, 0) for i in range(1, m + 1))


def degrees(f: NcPoly) -> tuple[tuple[int, ...], int]:
    """Per-variable degrees (d_1, ..., d_m) and the total degree."""
    per = [0] * f.m
    total = 0
    for word in f.words():
        for i, c in enumerate(letter_counts(word, f.m)):
            per[i] = max(per[i], c)
        total = max(total, len(word))
    return tuple(per), total


def classify(f: NcPoly) -> tuple[str, bool]:
    """Return (kind, has_constant_term) with kind the most specific class."""
    has_const = bool(f.constant_term())
    words = f.words()
    if not words:
        return GENERAL, False
    full = tuple(range(1, f.m + 1))
    if all(tuple(sorted(w)) == full for w in words):
        return MULTILINEAR, has_const
    counts = {letter_counts(w, f.m) for w in words}
    if len(counts) == 1:
        return COMPLETELY_HOMOGENEOUS, has_const
    return GENERAL, has_const


def specialize_to_zero(f: NcPoly, keep: int) -> NcPoly:
    """Set every variable except ``X_keep`` to zero."""
    if not 1 <= keep <= f.m:
        raise ValueError(f"keep={keep} out of range 1..{f.m}")
    return f.filter(lambda w: all(x == keep for x in w))


def restrict_to(f: NcPoly, variables: Iterable[int]) -> NcPoly:
    """Set every variable outside ``variables`` to zero."""
    allowed = set(variables)
    return f.filter(lambda w: all(x in allowed for x in w))


# --- evaluation --------------------------------------------------------------


def evaluate(f: NcPoly, matrices: Sequence):
    """Evaluate ``f`` on a tuple of equally sized square ``RingMatrix`` values.

    Word products share prefixes through a cache, so standard polynomials cost
    roughly one multiplication per node of their prefix tree.
    """
    from .ring.matrix import RingMatrix

    if len(matrices) != f.m:
        raise ValueError(f"expected {f.m} matrices, got {len(matrices)}")
    if not matrices:
        raise ValueError("no matrices given")
    n = matrices[0].n
    ring = matrices[0].ring
    for a in matrices:
        if a.n != n:
            raise ValueError("dimension mismatch")
    one = matrices[0].one()
    cache: dict[Word, RingMatrix] = {}

    def product(word: Word) -> RingMatrix:
        if word in cache:
            return cache[word]
        if len(word) == 1:
            p = matrices[word[0] - 1]
        else:
            p = product(word[:-1]) @ matrices[word[-1] - 1]
        cache[word] = p
        return p

    total = RingMatrix.zero(n, ring)
    for word, c in f.items():
        if not word:
            term = RingMatrix.identity(n, one, ring)
        else:
            term = product(word)
        total = total + (term if c == 1 else term.scale(c.numerator if c.denominator == 1 else c))
    return total
