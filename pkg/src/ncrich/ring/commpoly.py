"""Sparse multivariate commutative polynomials with rational coefficients.

Symbols are plain tuples whose first element names the family, e.g.
``("mu", 1, 2)`` for mu(1,2) or ``("nu", 3)``. Monomials are sorted tuples of
``(symbol, exponent)`` pairs; the empty tuple is the constant monomial.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Symbol = tuple


def mu(i: int, j: int) -> Symbol:
    return ("mu", i, j)


def nu(j: int) -> Symbol:
    return ("nu", j)


def xi(ell: int, i: int, j: int) -> Symbol:
    return ("xi", ell, i, j)


def beta(j: int) -> Symbol:
    return ("beta", j)


def symbol_name(sym: Symbol) -> str:
    return f"{sym[0]}({','.join(str(x) for x in sym[1:])})"


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for s, e in b:
        out[s] = out.get(s, 0) + e
    return tuple(sorted(out.items()))


class MissingSymbolError(KeyError):
    pass


class CommPoly:
    """Immutable polynomial; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, object] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[mono] = c if isinstance(c, Fraction) else Fraction(c)
        self._terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "CommPoly":
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def symbol(cls, sym: Symbol) -> "CommPoly":
        return cls._raw({((sym, 1),): Fraction(1)})

    @classmethod
    def constant(cls, c) -> "CommPoly":
        return cls({(): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def symbols(self) -> set:
        return {s for mono in self._terms for s, _ in mono}

    def is_constant(self) -> bool:
        return all(not mono for mono in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def degree_in(self, sym: Symbol) -> int:
        return max((dict(mono).get(sym, 0) for mono in self._terms), default=0)

    def coefficients_in(self, sym: Symbol) -> dict[int, "CommPoly"]:
        """Split as a polynomial in ``sym``: exponent -> coefficient polynomial."""
        out: dict[int, dict] = {}
        for mono, c in self._terms.items():
            d = dict(mono)
            e = d.pop(sym, 0)
            rest = tuple(sorted(d.items()))
            bucket = out.setdefault(e, {})
            bucket[rest] = bucket.get(rest, 0) + c
        return {e: CommPoly(t) for e, t in out.items()}

    # arithmetic
    @staticmethod
    def _lift(other) -> "CommPoly":
        if isinstance(other, CommPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return CommPoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for mono, c in other._terms.items():
            v = terms.get(mono, 0) + c
            if v:
                terms[mono] = v
            else:
                terms.pop(mono, None)
        return CommPoly._raw(terms)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return CommPoly._raw({})
            return CommPoly._raw({m: c * other for m, c in self._terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return CommPoly({m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, e: int):
        result = CommPoly.constant(1)
        for _ in range(e):
            result = result * self
        return result

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # evaluation
    def subs(self, point: Mapping[Symbol, object]) -> "CommPoly":
        """Partially specialize the symbols present in ``point`` (rational values only)."""
        out: dict = {}
        for mono, c in self._terms.items():
            keep = []
            for s, e in mono:
                if s in point:
                    c = c * Fraction(point[s]) ** e
                else:
                    keep.append((s, e))
            if c:
                k = tuple(keep)
                out[k] = out.get(k, 0) + c
        return CommPoly(out)

    def __call__(self, point: Mapping[Symbol, object]):
        return commpoly_eval(self, point)

    def __repr__(self):
        return f"CommPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in sorted(self._terms.items()):
            factors = [symbol_name(s) + (f"^{e}" if e > 1 else "") for s, e in mono]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def commpoly_eval(p: CommPoly, point: Mapping[Symbol, object]):
    """Evaluate at a full point; values may be rationals or mpmath complex numbers.

    Rational points give exact ``Fraction`` results.
    """
    total = 0
    for mono, c in p._terms.items():
        term = c
        for s, e in mono:
            try:
                v = point[s]
            except KeyError:
                raise MissingSymbolError(f"no value for {symbol_name(s)}") from None
            if isinstance(v, int):
                v = Fraction(v)
            term = term * v**e
        total = total + term
    if isinstance(total, int):
        total = Fraction(total)
    return total


def symbols_of(polys: Iterable[CommPoly]) -> set:
    out = set()
    for p in polys:
        out |= p.symbols()
    return out
