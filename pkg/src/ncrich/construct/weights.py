"""Graded weights for matrix-unit substitutions and the leading part of a polynomial."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..freealg import COMPLETELY_HOMOGENEOUS, MULTILINEAR, NcPoly, classify, degrees

MODES = ("multilinear", "homogeneous", "general")


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightVector:
    """Signed steps per variable: x_i moves a row index j to column j + q[i-1].

    Non-pivot variables ascend (q > 0, or 0 for a diagonal matrix); the pivot
    descends so that the words driving the diagonal close their circuits.
    ``doubled`` marks the pivot-only case where x_pivot is a product of an
    ascending and a descending matrix and every other variable is zero.
    """

    q: tuple[int, ...]
    m_prime: int
    pivot: int
    doubled: bool = False

    @property
    def descent(self) -> int:
        return -self.q[self.pivot - 1]

    def step(self, letter: int) -> int:
        return self.q[letter - 1]

    def net(self, word) -> int:
        return sum(self.q[x - 1] for x in word)


@dataclass(frozen=True)
class LeadingPart:
    phi_f: Fraction | float
    f_bar: NcPoly
    discarded: NcPoly
    phi: dict  # word -> Fraction or math.inf
    degenerate: bool  # some nonconstant word uses only the pivot
    infinite: bool  # some word omits the pivot


def word_phi(word, pivot: int):
    """(letters other than the pivot) / (pivot letters); inf when the pivot is absent."""
    d_pivot = sum(1 for x in word if x == pivot)
    d_rest = len(word) - d_pivot
    if d_pivot == 0:
        return math.inf
    return Fraction(d_rest, d_pivot)


def leading_part(f: NcPoly, pivot: int) -> LeadingPart:
    if not 1 <= pivot <= f.m:
        raise WeightError(f"pivot {pivot} out of range 1..{f.m}")
    nonconst = [w for w in f.words() if w]
    if not nonconst:
        raise WeightError("polynomial has no nonconstant monomial")
    phi = {w: word_phi(w, pivot) for w in nonconst}
    top = max(phi.values())
    bar = {w: f.coefficient(w) for w in nonconst if phi[w] == top}
    rest = {w: c for w, c in f.items() if w not in bar}
    return LeadingPart(
        phi_f=top,
        f_bar=NcPoly(f.m, bar),
        discarded=NcPoly(f.m, rest),
        phi=phi,
        degenerate=any(v == 0 for v in phi.values()),
        infinite=top == math.inf,
    )


def _require_pivot(f: NcPoly, pivot: int):
    if not 1 <= pivot <= f.m:
        raise WeightError(f"pivot {pivot} out of range 1..{f.m}")
    if not any(pivot in w for w in f.words()):
        raise WeightError(f"pivot variable X{pivot} does not occur in f")


def choose_weights(f: NcPoly, mode: str, pivot: int | None = None) -> WeightVector:
    """Weight vector for ``mode`` in {"multilinear", "homogeneous", "general"}.

    Homogeneous: with D the summed degrees of the non-pivot variables and
    L = lcm(d_pivot, D), non-pivots ascend by L/D and the pivot descends by
    L/d_pivot; m' = L. General: weights come from the leading part so that its
    words close their circuits, and m' is the largest ascent such a circuit makes.
    """
    m = f.m
    pivot = m if pivot is None else pivot
    kind, _ = classify(f)
    if mode == "multilinear":
        if kind != MULTILINEAR:
            raise WeightError("multilinear mode needs a multilinear polynomial")
        _require_pivot(f, pivot)
        if m == 1:
            return WeightVector((0,), 0, 1)
        return WeightVector(tuple(-(m - 1) if i == pivot else 1 for i in range(1, m + 1)), m - 1, pivot)
    if mode == "homogeneous":
        if kind not in (MULTILINEAR, COMPLETELY_HOMOGENEOUS) or f.constant_term():
            raise WeightError("homogeneous mode needs a completely homogeneous polynomial")
        _require_pivot(f, pivot)
        d, _ = degrees(f)
        d_pivot = d[pivot - 1]
        rest = sum(d) - d_pivot
        lcm = math.lcm(d_pivot, rest)
        up = lcm // rest if rest else 0
        q = tuple(-(lcm // d_pivot) if i == pivot else up for i in range(1, m + 1))
        return WeightVector(q, lcm, pivot)
    if mode == "general":
        f0 = f.without_constant()
        _require_pivot(f0, pivot)
        lp = leading_part(f0, pivot)
        if lp.degenerate:
            return WeightVector(tuple(0 for _ in range(m)), 1, pivot, doubled=True)
        if lp.infinite:
            raise WeightError(f"a monomial of f omits the pivot X{pivot} (phi = inf)")
        ratio = Fraction(lp.phi_f)
        up, down = ratio.denominator, ratio.numerator
        q = tuple(-down if i == pivot else up for i in range(1, m + 1))
        m_prime = max(up * (len(w) - w.count(pivot)) for w in lp.f_bar.words())
        return WeightVector(q, m_prime, pivot)
    raise WeightError(f"unknown mode {mode!r}")

