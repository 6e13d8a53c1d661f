"""Univariate root finding: exact rational roots and Durand-Kerner over mpmath.

Coefficient lists are in ascending order: ``coeffs[k]`` multiplies ``x**k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .bigcomplex import DEFAULT_PRECISION, context, to_complex


class RootFindingError(ArithmeticError):
    """Durand-Kerner did not reach the residual tolerance; retry at higher precision."""


@dataclass(frozen=True)
class RationalRoots:
    roots: tuple[Fraction, ...]
    irrational_remainder: bool  # some root of the input is not rational


def _trim(coeffs: Sequence) -> list:
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return c


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    while len(num) >= len(den) and any(num):
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        q[shift] = factor
        for k, d in enumerate(den):
            num[k + shift] -= factor * d
        num = _trim(num)
    return q, num


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, _trim(r)
    return [x / a[-1] for x in a]


def _horner(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _primitive_int(coeffs: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in coeffs:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g else ints


def _convergents(x: Fraction, max_den: int):
    """Continued-fraction convergents of ``x`` with denominators up to ``max_den``."""
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = x.numerator // x.denominator
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return
        yield Fraction(h1, k1)
        frac = x - a
        if not frac:
            return
        x = 1 / frac


def rational_roots(coeffs: Sequence) -> RationalRoots:
    """All distinct rational roots of a nonzero rational polynomial of degree >= 1.

    Any rational root p/q of an integer polynomial has q dividing the leading
    coefficient a_d. The squarefree part is solved numerically to better than
    1/(2 a_d^2); by Legendre's theorem each rational root then shows up as a
    continued-fraction convergent of a numerical root, and candidates are
    confirmed by exact evaluation.
    """
    c = _trim([Fraction(x) for x in coeffs])
    if len(c) < 2:
        raise ValueError("polynomial must have degree >= 1")
    degree = len(c) - 1
    found: list[Fraction] = []
    if not c[0]:
        found.append(Fraction(0))
        while not c[0]:
            c = c[1:]
    if len(c) >= 2:
        deriv = [k * c[k] for k in range(1, len(c))]
        g = _poly_gcd(c, deriv)
        sqfree, _ = _poly_divmod(c, g)
        ints = _primitive_int(_trim(sqfree))
        lead = abs(ints[-1])
        bound = 1 + max(abs(Fraction(a, ints[-1])) for a in ints[:-1])
        bits = 2 * lead.bit_length() + int(bound).bit_length() + 4 * len(ints) + 96
        bits = max(bits, DEFAULT_PRECISION)
        ctx = context(bits)
        approx = durand_kerner(ints, bits)
        for z in approx:
            if abs(z.imag) > ctx.mpf(2) ** (-bits // 4) * max(1, abs(z)):
                continue
            re = ctx.mpf(z.real)
            mant, exp = re.man_exp
            x = Fraction(int(mant)) * (Fraction(2) ** int(exp))
            if re < 0:
                x = -x
            for cand in _convergents(x, lead):
                if cand not in found and _horner(ints, cand) == 0:
                    found.append(cand)
    found.sort()
    distinct_total = _distinct_root_count(coeffs)
    return RationalRoots(tuple(found), len(found) < distinct_total or degree < 1)


def _distinct_root_count(coeffs) -> int:
    c = _trim([Fraction(x) for x in coeffs])
    deriv = [k * c[k] for k in range(1, len(c))]
    g = _poly_gcd(c, deriv) if any(deriv) else [Fraction(1)]
    return (len(c) - 1) - (len(g) - 1)


def durand_kerner(coeffs: Sequence, precision: int = DEFAULT_PRECISION, max_iter: int | None = None, ctx=None):
    """All ``deg`` complex roots by Weierstrass/Durand-Kerner simultaneous iteration."""
    ctx = ctx or context(precision)
    c = [to_complex(ctx, x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    degree = len(c) - 1
    if degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    lead = c[-1]
    monic = [x / lead for x in c]
    radius = 1 + max(abs(x) for x in monic[:-1])
    seed = ctx.mpc("0.4", "0.9")
    z = [radius * seed**k / abs(seed) ** k for k in range(degree)]
    if degree == 1:
        return [-monic[0]]
    eps = ctx.mpf(2) ** (-ctx.prec + 10)
    max_iter = max_iter or 50 + 4 * ctx.prec
    for _ in range(max_iter):
        biggest = 0
        new = []
        for i, zi in enumerate(z):
            denom = ctx.mpc(1)
            for j, zj in enumerate(z):
                if j != i:
                    denom *= zi - zj
            if denom == 0:
                denom = eps
            step = _horner(monic, zi) / denom
            new.append(zi - step)
            biggest = max(biggest, abs(step) / max(1, abs(zi)))
        z = new
        if biggest <= eps:
            break
    tol = residual_tolerance(ctx.prec)
    for zi in z:
        if _relative_residual(monic, zi) > tol:
            raise RootFindingError(f"Durand-Kerner did not converge at {ctx.prec} bits")
    return z


def residual_tolerance(precision: int) -> float:
    return 2.0 ** -max(precision // 2 - 8, 16)


def _relative_residual(coeffs, z):
    scale = _horner([abs(x) for x in coeffs], abs(z))
    r = abs(_horner(coeffs, z))
    return r / scale if scale else r


def select_root(roots, precision: int = DEFAULT_PRECISION):
    """Largest modulus, then largest real part, then largest imaginary part."""
    tie = 2 ** (-(precision // 2))

    def better(a, b):
        for key in (abs, lambda v: v.real, lambda v: v.imag):
            ka, kb = key(a), key(b)
            if abs(ka - kb) > tie * max(1, abs(ka), abs(kb)):
                return ka > kb
        return False

    best = roots[0]
    for r in roots[1:]:
        if better(r, best):
            best = r
    return best


def univariate_roots(coeffs: Sequence, mode: str = "numeric", precision: int = DEFAULT_PRECISION):
    """Roots of ``sum coeffs[k] x**k``.

    ``mode="exact"`` returns a :class:`RationalRoots`; ``mode="numeric"`` returns
    all ``deg`` complex roots as ``mpc`` values.
    """
    c = _trim(coeffs)
    if len(c) < 2:
        raise ValueError("polynomial must have degree >= 1 with nonzero leading coefficient")
    if mode == "exact":
        return rational_roots(c)
    if mode == "numeric":
        return durand_kerner(c, precision)
    raise ValueError(f"unknown mode {mode!r}")
