"""Sparse square matrices over a pluggable commutative ring.

Entries live in a row-major ``{row: {col: value}}`` map with 1-based indices and
no explicit zeros. The ring tag is one of ``"rational"`` (``Fraction``/``int``),
``"poly"`` (``CommPoly``), ``"dual"`` (``DualVector``) or ``"complex"``
(mpmath ``mpc``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .bigcomplex import format_complex, parse_complex, to_complex
from .commpoly import CommPoly
from .dual import DualVector

RINGS = ("rational", "poly", "dual", "complex")


def _is_zero(v) -> bool:
    return not v


class RingMatrix:
    __slots__ = ("n", "ring", "_rows")

    def __init__(self, n: int, entries: Mapping[tuple[int, int], object] | None = None, ring: str = "rational"):
        if n < 1:
            raise ValueError("matrix size must be positive")
        if ring not in RINGS:
            raise ValueError(f"unknown ring {ring!r}")
        self.n = n
        self.ring = ring
        rows: dict[int, dict[int, object]] = {}
        for (i, j), v in (entries or {}).items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise IndexError(f"entry ({i},{j}) outside a {n}x{n} matrix")
            if not _is_zero(v):
                rows.setdefault(i, {})[j] = v
        self._rows = rows

    @classmethod
    def _from_rows(cls, n, rows, ring) -> "RingMatrix":
        m = cls.__new__(cls)
        m.n, m.ring, m._rows = n, ring, rows
        return m

    @classmethod
    def zero(cls, n: int, ring: str = "rational") -> "RingMatrix":
        return cls._from_rows(n, {}, ring)

    @classmethod
    def identity(cls, n: int, one=Fraction(1), ring: str = "rational") -> "RingMatrix":
        return cls._from_rows(n, {i: {i: one} for i in range(1, n + 1)}, ring)

    @classmethod
    def diag(cls, values: Iterable, ring: str = "rational") -> "RingMatrix":
        values = list(values)
        return cls(len(values), {(i, i): v for i, v in enumerate(values, 1)}, ring)

    @classmethod
    def from_dense(cls, rows: Iterable[Iterable], ring: str = "rational") -> "RingMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        return cls(n, {(i + 1, j + 1): v for i, r in enumerate(rows) for j, v in enumerate(r)}, ring)

    def one(self):
        if self.ring == "poly":
            return CommPoly.constant(1)
        if self.ring == "dual":
            return DualVector(1)
        if self.ring == "complex":
            for row in self._rows.values():
                for v in row.values():
                    return v.context.mpc(1)
        return Fraction(1)

    def zero_value(self):
        return self.one() * 0

    # access
    @property
    def entries(self) -> dict[tuple[int, int], object]:
        return {(i, j): v for i, row in self._rows.items() for j, v in row.items()}

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, self.zero_value())

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def diagonal(self) -> list:
        z = self.zero_value()
        return [self._rows.get(i, {}).get(i, z) for i in range(1, self.n + 1)]

    def trace(self):
        total = self.zero_value()
        for v in self.diagonal():
            total = total + v
        return total

    def graded_support(self) -> set[int]:
        """Set of graded degrees i - j carrying a nonzero entry."""
        return {i - j for i, row in self._rows.items() for j in row}

    def is_diagonal(self) -> bool:
        return self.graded_support() <= {0}

    def triangular_side(self) -> str:
        """``"diagonal"``, ``"upper"``, ``"lower"`` or ``"none"`` from the off-diagonal support."""
        off = self.graded_support() - {0}
        if not off:
            return "diagonal"
        if all(d < 0 for d in off):
            return "upper"
        if all(d > 0 for d in off):
            return "lower"
        return "none"

    def to_dense(self) -> list[list]:
        z = self.zero_value()
        return [[self._rows.get(i, {}).get(j, z) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def map(self, fn, ring: str | None = None) -> "RingMatrix":
        return RingMatrix(self.n, {ij: fn(v) for ij, v in self.entries.items()}, ring or self.ring)

    # arithmetic
    def _check(self, other: "RingMatrix"):
        if not isinstance(other, RingMatrix):
            raise TypeError("expected a RingMatrix")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        rows = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            target = rows.setdefault(i, {})
            for j, v in r.items():
                s = target[j] + v if j in target else v
                if _is_zero(s):
                    target.pop(j, None)
                else:
                    target[j] = s
            if not target:
                del rows[i]
        return RingMatrix._from_rows(self.n, rows, _join(self.ring, other.ring))

    def __neg__(self) -> "RingMatrix":
        return self.scale(-1)

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return self + (-other)

    def scale(self, c) -> "RingMatrix":
        rows = {}
        for i, r in self._rows.items():
            nr = {}
            for j, v in r.items():
                s = v * c
                if not _is_zero(s):
                    nr[j] = s
            if nr:
                rows[i] = nr
        return RingMatrix._from_rows(self.n, rows, self.ring)

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        self._check(other)
        rows = {}
        orows = other._rows
        for i, r in self._rows.items():
            acc: dict[int, object] = {}
            for k, a in r.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    p = a * b
                    acc[j] = acc[j] + p if j in acc else p
            acc = {j: v for j, v in acc.items() if not _is_zero(v)}
            if acc:
                rows[i] = acc
        return RingMatrix._from_rows(self.n, rows, _join(self.ring, other.ring))

    def __mul__(self, other):
        if isinstance(other, RingMatrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.n == other.n and self._rows == other._rows

    def __hash__(self):
        return hash((self.n, frozenset(self.entries.items())))

    def __repr__(self):
        body = ", ".join(f"({i},{j}): {v}" for (i, j), v in sorted(self.entries.items()))
        return f"RingMatrix(n={self.n}, ring={self.ring}, {{{body}}})"


def _join(a: str, b: str) -> str:
    if a == b:
        return a
    for r in ("poly", "dual", "complex"):
        if r in (a, b):
            return r
    return a


def matrix_unit(n: int, i: int, j: int, coefficient=Fraction(1), ring: str | None = None) -> RingMatrix:
    """``coefficient * e_{i,j}``; graded support is ``{i - j}``."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"matrix unit ({i},{j}) outside 1..{n}")
    if ring is None:
        ring = ring_of(coefficient)
    return RingMatrix(n, {(i, j): coefficient}, ring)


def ring_of(value) -> str:
    if isinstance(value, CommPoly):
        return "poly"
    if isinstance(value, DualVector):
        return "dual"
    if isinstance(value, (int, Fraction)):
        return "rational"
    return "complex"


# --- linear algebra ----------------------------------------------------------


def char_coeffs(m: RingMatrix) -> list:
    """Elementary symmetric functions c_1..c_n of the characteristic values.

    Faddeev-LeVerrier: N_1 = M, c_k = tr(N_k)/k, N_{k+1} = M (c_k I - N_k).
    Only division by the integers 1..n is needed, so any commutative Q-algebra works.
    """
    n = m.n
    one = m.one()
    ident = RingMatrix.identity(n, one, m.ring)
    coeffs = []
    power = m
    for k in range(1, n + 1):
        a_k = power.trace() * Fraction(1, k)
        coeffs.append(a_k)
        if k < n:
            power = m @ (ident.scale(a_k) - power)
    return coeffs


def rank_exact(m: RingMatrix | list) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination. Accepts rectangular dense lists."""
    rows = m.to_dense() if isinstance(m, RingMatrix) else [list(r) for r in m]
    rows = [[_as_int_row_value(v) for v in r] for r in rows]
    rows = [_clear_denominators(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            a = rows[r][col]
            rows[r] = [(p * rows[r][c] - a * rows[rank][c]) // prev for c in range(ncols)]
        prev = p
        rank += 1
        if rank == len(rows):
            break
    return rank


def _as_int_row_value(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"rank_exact needs rational entries, got {type(v).__name__}")


def _clear_denominators(row: list[Fraction]) -> list[int]:
    from math import lcm

    den = 1
    for v in row:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in row]


def rank_numeric(m: RingMatrix, tol) -> int:
    """Rank of a complex matrix by partially pivoted elimination with threshold ``tol``."""
    a = [list(r) for r in m.to_dense()]
    n = m.n
    rank = 0
    for col in range(n):
        best = max(range(rank, n), key=lambda r: abs(a[r][col]), default=None)
        if best is None or abs(a[best][col]) <= tol:
            continue
        a[rank], a[best] = a[best], a[rank]
        for r in range(rank + 1, n):
            factor = a[r][col] / a[rank][col]
            a[r] = [x - factor * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def rank(m: RingMatrix, tol=None) -> int:
    if m.ring == "rational":
        return rank_exact(m)
    if m.ring == "complex":
        return rank_numeric(m, tol)
    raise TypeError(f"rank undefined for ring {m.ring}")


# --- JSON --------------------------------------------------------------------


def format_value(v, ctx=None) -> str:
    if isinstance(v, (int, Fraction)):
        return str(Fraction(v))
    return format_complex(ctx or v.context, v)


def matrix_to_json(m: RingMatrix) -> dict:
    if m.ring not in ("rational", "complex"):
        raise TypeError(f"no JSON form for ring {m.ring}")
    return {
        "n": m.n,
        "ring": m.ring,
        "entries": [[i, j, format_value(v)] for (i, j), v in sorted(m.entries.items())],
    }


def matrix_from_json(data: dict, ctx=None) -> RingMatrix:
    ring = data["ring"]
    if ring == "rational":
        conv = Fraction
    elif ring == "complex":
        if ctx is None:
            raise ValueError("complex matrices need an mpmath context")
        conv = lambda s: parse_complex(ctx, s)  # noqa: E731
    else:
        raise ValueError(f"unknown ring {ring!r}")
    return RingMatrix(int(data["n"]), {(int(i), int(j)): conv(s) for i, j, s in data["entries"]}, ring)


def to_complex_matrix(m: RingMatrix, ctx) -> RingMatrix:
    return RingMatrix(m.n, {ij: to_complex(ctx, v) for ij, v in m.entries.items()}, "complex")
