"""Symbolic graded matrix-unit substitutions and their diagonals."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from ..freealg import MULTILINEAR, NcPoly, classify, evaluate
from ..ring import CommPoly, RingMatrix, mu, nu
from .weights import WeightVector


class SubstitutionError(ValueError):
    pass


class NonDiagonalImageError(ArithmeticError):
    """The symbolic image is not one-sided triangular (or not diagonal when it must be)."""


@dataclass(frozen=True)
class SymbolicSubstitution:
    n: int
    weights: WeightVector
    matrices: tuple[RingMatrix, ...]
    nu_symbols: dict  # target position j -> symbol
    free_symbols: tuple
    top_height: int  # ascent reached before the descent that carries nu_j
    entry_symbols: dict = field(default_factory=dict)  # (variable, row) -> symbol
    offset: int = 0  # solved positions are offset+1 .. offset+targets

    @property
    def targets(self) -> int:
        return self.n - self.weights.m_prime


def top_height(f: NcPoly, w: WeightVector) -> int:
    """Largest height reached just before a pivot letter, over the words of f."""
    best = None
    for word in f.words():
        h = 0
        for x in word:
            if x == w.pivot:
                best = h if best is None else max(best, h)
            h += w.step(x)
    if best is None:
        raise SubstitutionError(f"pivot X{w.pivot} does not occur in f")
    return best


def window_offset(f: NcPoly, w: WeightVector) -> int:
    """How far every word's index path dips below its start (minimum over words).

    Diagonal positions 1..offset are identically zero under the substitution,
    so the solvable window starts at offset + 1.
    """
    best = None
    for word in f.words():
        if not word:
            continue
        h, low = 0, 0
        for x in word:
            h += w.step(x)
            low = min(low, h)
        best = -low if best is None else min(best, -low)
    return best or 0


def build_substitution(f: NcPoly, w: WeightVector, n: int) -> SymbolicSubstitution:
    """Graded substitution x_i = sum_j mu(i,j) e_{j, j+q_i}.

    With s from :func:`window_offset` and H from :func:`top_height`, the pivot
    entry in row ``s + j + H`` is named nu(j) for every target j <= n - m';
    remaining entries are free mu symbols.
    """
    if n < w.m_prime + 1:
        raise SubstitutionError(f"n={n} too small: need n >= m' + 1 = {w.m_prime + 1}")
    if w.doubled:
        return _build_doubled(f, w, n)
    m = f.m
    height = top_height(f, w)
    offset = window_offset(f, w)
    targets = n - w.m_prime
    matrices = []
    nu_symbols = {}
    free = []
    entry_symbols = {}
    for i in range(1, m + 1):
        step = w.step(i)
        entries = {}
        for row in range(1, n + 1):
            col = row + step
            if not 1 <= col <= n:
                continue
            j = row - height - offset
            if i == w.pivot and 1 <= j <= targets:
                sym = nu(j)
                nu_symbols[j] = sym
            else:
                sym = mu(i, row)
                free.append(sym)
            entry_symbols[(i, row)] = sym
            entries[(row, col)] = CommPoly.symbol(sym)
        matrices.append(RingMatrix(n, entries, "poly"))
    missing = [j for j in range(1, targets + 1) if j not in nu_symbols]
    if missing:
        raise SubstitutionError(f"no pivot entry available for positions {missing}")
    return SymbolicSubstitution(n, w, tuple(matrices), nu_symbols, tuple(sorted(free)), height, entry_symbols, offset)


def _build_doubled(f: NcPoly, w: WeightVector, n: int) -> SymbolicSubstitution:
    """x_pivot = (sum mu e_{j,j+1})(sum nu e_{j+1,j}); all other variables are zero."""
    p = w.pivot
    up = RingMatrix(n, {(j, j + 1): CommPoly.symbol(mu(p, j)) for j in range(1, n)}, "poly")
    down = RingMatrix(n, {(j + 1, j): CommPoly.symbol(nu(j)) for j in range(1, n)}, "poly")
    matrices = [RingMatrix.zero(n, "poly") for _ in range(f.m)]
    matrices[p - 1] = up @ down
    nu_symbols = {j: nu(j) for j in range(1, n)}
    free = [mu(p, j) for j in range(1, n)]
    return SymbolicSubstitution(n, w, tuple(matrices), nu_symbols, tuple(sorted(free)), 0, {})


def kosher_circuits(f: NcPoly, w: WeightVector, n: int, j: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Orderings of the m variables whose index path from j stays inside 1..n.

    Returns ``(order, path)`` pairs where path[k] is the row index at which the
    k-th factor is applied.
    """
    kind, _ = classify(f)
    if kind != MULTILINEAR:
        raise ValueError("kosher circuits are defined for multilinear polynomials")
    out = []
    for order in permutations(range(1, f.m + 1)):
        idx = j
        path = []
        ok = 1 <= j <= n
        for x in order:
            path.append(idx)
            idx += w.step(x)
            if not 1 <= idx <= n:
                ok = False
                break
        if ok:
            out.append((order, tuple(path)))
    return out


def symbolic_diagonal(f: NcPoly, s: SymbolicSubstitution, method: str = "auto") -> list[CommPoly]:
    """Diagonal of f(x_1, ..., x_m) as polynomials in the substitution symbols.

    ``method="circuits"`` sums the kosher circuit monomials (multilinear f);
    ``method="product"`` multiplies the sparse symbolic matrices.
    """
    if method == "auto":
        method = "circuits" if classify(f)[0] == MULTILINEAR and not s.weights.doubled else "product"
    if method == "circuits":
        diag = []
        for j in range(1, s.n + 1):
            total = CommPoly()
            for order, path in kosher_circuits(f, s.weights, s.n, j):
                c = f.coefficient(order)
                if not c:
                    continue
                term = CommPoly.constant(c)
                for x, row in zip(order, path):
                    term = term * CommPoly.symbol(s.entry_symbols[(x, row)])
                total = total + term
            diag.append(total)
        if f.constant_term():
            diag = [d + f.constant_term() for d in diag]
        return diag
    if method != "product":
        raise ValueError(f"unknown method {method!r}")
    value = evaluate(f, s.matrices)
    side = value.triangular_side()
    balanced = all(s.weights.net(word) == 0 for word in f.words()) or s.weights.doubled
    if side == "none" or (balanced and side != "diagonal"):
        raise NonDiagonalImageError(f"symbolic image has graded support {sorted(value.graded_support())}")
    return value.diagonal()
