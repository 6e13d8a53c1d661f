"""Exact forward-mode dual numbers with a sparse gradient."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping


class DualVector:
    """value + sum_s gradient[s] * eps_s with eps_s * eps_t = 0."""

    __slots__ = ("value", "gradient")

    def __init__(self, value, gradient: Mapping | None = None):
        self.value = Fraction(value)
        self.gradient = {s: Fraction(g) for s, g in (gradient or {}).items() if g}

    @classmethod
    def _raw(cls, value, gradient):
        d = cls.__new__(cls)
        d.value = value
        d.gradient = gradient
        return d

    @classmethod
    def variable(cls, value, sym) -> "DualVector":
        return cls(value, {sym: 1})

    @staticmethod
    def _lift(other):
        if isinstance(other, DualVector):
            return other
        if isinstance(other, (int, Fraction)):
            return DualVector._raw(Fraction(other), {})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        grad = dict(self.gradient)
        for s, g in other.gradient.items():
            v = grad.get(s, 0) + g
            if v:
                grad[s] = v
            else:
                grad.pop(s, None)
        return DualVector._raw(self.value + other.value, grad)

    __radd__ = __add__

    def __neg__(self):
        return DualVector._raw(-self.value, {s: -g for s, g in self.gradient.items()})

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
                return DualVector._raw(Fraction(0), {})
            return DualVector._raw(self.value * other, {s: g * other for s, g in self.gradient.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.value, other.value
        grad = {}
        if b:
            for s, g in self.gradient.items():
                grad[s] = g * b
        if a:
            for s, g in other.gradient.items():
                v = grad.get(s, 0) + a * g
                if v:
                    grad[s] = v
                else:
                    grad.pop(s, None)
        return DualVector._raw(a * b, grad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __bool__(self):
        return bool(self.value) or bool(self.gradient)

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.value == other.value and self.gradient == other.gradient

    def __hash__(self):
        return hash((self.value, frozenset(self.gradient.items())))

    def __repr__(self):
        return f"DualVector({self.value}, {self.gradient})"
