"""Characteristic coefficients of f on generic matrices.

The transcendence degree of F(c_1, ..., c_n) over F is estimated by the rank of
the Jacobian of (c_1, ..., c_n) with respect to the generic entries xi(l,i,j),
taken at a random rational point with exact dual-number arithmetic. Any rank
observed there is a lower bound for the generic rank, hence for the degree.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .freealg import NcPoly, degrees, evaluate
from .ring import DualVector, RingMatrix, char_coeffs, rank_exact, xi

DEFAULT_BOX = 1000
DEFAULT_TRIALS = 50


class GenericityError(ArithmeticError):
    """c_n vanished at every sampled point."""


@dataclass(frozen=True)
class GenericFamily:
    """m generic n x n matrices Y_l = (xi(l,i,j)) with a rational sample point."""

    m: int
    n: int
    point: dict

    @property
    def symbols(self) -> list:
        return [xi(ell, i, j) for ell in range(1, self.m + 1) for i in range(1, self.n + 1) for j in range(1, self.n + 1)]

    def masked(self) -> "GenericFamily":
        """Send the last row and column of every Y_l to zero."""
        n = self.n
        point = {s: (0 if s[2] == n or s[3] == n else v) for s, v in self.point.items()}
        return GenericFamily(self.m, n, point)

    def truncated(self) -> "GenericFamily":
        """The (n-1)-sized family at the induced point."""
        n = self.n - 1
        point = {s: v for s, v in self.point.items() if s[2] <= n and s[3] <= n}
        return GenericFamily(self.m, n, point)

    def matrices(self) -> list[RingMatrix]:
        return [
            RingMatrix(self.n, {(i, j): self.point[xi(ell, i, j)] for i in range(1, self.n + 1) for j in range(1, self.n + 1)})
            for ell in range(1, self.m + 1)
        ]

    def dual_matrices(self, directions) -> list[RingMatrix]:
        directions = set(directions)
        out = []
        for ell in range(1, self.m + 1):
            entries = {}
            for i in range(1, self.n + 1):
                for j in range(1, self.n + 1):
                    s = xi(ell, i, j)
                    entries[(i, j)] = DualVector(self.point[s], {s: 1} if s in directions else None)
            out.append(RingMatrix(self.n, entries, "dual"))
        return out


def generic_family(m: int, n: int, rng: random.Random, box: int = DEFAULT_BOX) -> GenericFamily:
    point = {}
    for ell in range(1, m + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                point[xi(ell, i, j)] = rng.randint(1, box) * rng.choice((1, -1))
    return GenericFamily(m, n, point)


def _random_tuple(m: int, k: int, rng: random.Random, box: int) -> list[RingMatrix]:
    return [RingMatrix(k, {(i, j): rng.randint(-box, box) for i in range(1, k + 1) for j in range(1, k + 1)}) for _ in range(m)]


@dataclass
class PIVerdict:
    """Outcome of random evaluation on k x k matrices.

    ``holds_probably`` is True when every trial satisfied the property tested
    (vanishing for :func:`pi_test`, scalar value for :func:`centrality_test`).
    ``error_bound`` bounds the chance of that verdict being wrong for a
    property that actually fails.
    """

    holds_probably: bool
    witness: tuple | None
    trials_run: int
    error_bound: float


def _error_bound(f: NcPoly, box: int, trials: int) -> float:
    _, total = degrees(f)
    return min(1.0, total / (2 * box + 1)) ** trials


def pi_test(f: NcPoly, k: int, trials: int = DEFAULT_TRIALS, seed: int = 0, box: int = DEFAULT_BOX) -> PIVerdict:
    """Is f (probably) a polynomial identity of k x k matrices?"""
    if k < 1 or trials < 1:
        raise ValueError("need k >= 1 and trials >= 1")
    rng = random.Random(seed)
    for t in range(1, trials + 1):
        mats = _random_tuple(f.m, k, rng, box)
        if evaluate(f, mats).nnz():
            return PIVerdict(False, tuple(mats), t, 0.0)
    return PIVerdict(True, None, trials, _error_bound(f, box, trials))


def centrality_test(f: NcPoly, k: int, trials: int = DEFAULT_TRIALS, seed: int = 0, box: int = DEFAULT_BOX) -> PIVerdict:
    """Is f (probably) central on k x k matrices, i.e. always a scalar matrix?"""
    if k < 1 or trials < 1:
        raise ValueError("need k >= 1 and trials >= 1")
    if k == 1:
        return PIVerdict(True, None, 0, 0.0)
    rng = random.Random(seed)
    for t in range(1, trials + 1):
        mats = _random_tuple(f.m, k, rng, box)
        value = evaluate(f, mats)
        scalar = RingMatrix.identity(k, value.trace() / k)
        if (value - scalar).nnz():
            return PIVerdict(False, tuple(mats), t, 0.0)
    return PIVerdict(True, None, trials, _error_bound(f, box, trials))


@dataclass
class TransdegReport:
    n: int
    k: int | None
    c: list
    t_hat: int
    seed: int
    trials: int
    pi_on_k: bool | None = None
    central_on_k: bool | None = None
    jacobian: list = field(default_factory=list, repr=False)
    family: GenericFamily | None = field(default=None, repr=False)

    @property
    def bound(self) -> int | None:
        return None if self.k is None else self.n - self.k

    @property
    def bound_holds(self) -> bool | None:
        return None if self.k is None else self.t_hat >= self.n - self.k

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "t_hat": self.t_hat,
            "bound": self.bound,
            "c": [str(Fraction(v)) for v in self.c],
            "pi_on_k": self.pi_on_k,
            "central_on_k": self.central_on_k,
            "seed": self.seed,
            "trials": self.trials,
        }


def char_coeff_jacobian(
    f: NcPoly,
    n: int,
    k: int | None = None,
    *,
    seed: int = 0,
    retries: int = 5,
    box: int = DEFAULT_BOX,
    trials: int = DEFAULT_TRIALS,
    batch: int = 1,
    threads: int = 1,
) -> TransdegReport:
    """Jacobian rank of (c_1, ..., c_n) of f(Y_1, ..., Y_m) in the m n^2 generic entries.

    ``batch`` directions are differentiated per evaluation pass; with a given
    ``k`` the PI and centrality verdicts on k x k matrices are attached.
    """
    f0 = f.without_constant()
    if f0.is_zero():
        raise ValueError("f must be nonconstant")
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    for _ in range(retries + 1):
        fam = generic_family(f.m, n, rng, box)
        c = char_coeffs(evaluate(f0, fam.matrices()))
        if c[-1]:
            break
    else:
        raise GenericityError(f"c_n vanished at {retries + 1} sample points")
    syms = fam.symbols
    chunks = [syms[i : i + batch] for i in range(0, len(syms), max(batch, 1))]

    def pass_(chunk):
        coeffs = char_coeffs(evaluate(f0, fam.dual_matrices(chunk)))
        return [[cv.gradient.get(s, Fraction(0)) for s in chunk] for cv in coeffs]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(pass_, chunks))
    else:
        blocks = [pass_(ch) for ch in chunks]
    jac = [[v for block in blocks for v in block[row]] for row in range(n)]
    report = TransdegReport(n=n, k=k, c=[Fraction(v) for v in c], t_hat=rank_exact(jac), seed=seed, trials=trials, jacobian=jac, family=fam)
    if k is not None:
        report.pi_on_k = pi_test(f0, k, trials, seed).holds_probably
        report.central_on_k = centrality_test(f, k, trials, seed).holds_probably
    return report


@dataclass
class SpecializationReport:
    n: int
    c_masked: list
    c_smaller: list
    last_vanishes: bool
    prefix_matches: bool

    @property
    def ok(self) -> bool:
        return self.last_vanishes and self.prefix_matches


def specialization_check(f: NcPoly, n: int, seed: int = 0, box: int = DEFAULT_BOX) -> SpecializationReport:
    """Zero the last row/column of every generic matrix and compare with the (n-1)-family."""
    if n < 2:
        raise ValueError("n must be at least 2")
    f0 = f.without_constant()
    fam = generic_family(f.m, n, random.Random(seed), box)
    masked = char_coeffs(evaluate(f0, fam.masked().matrices()))
    smaller = char_coeffs(evaluate(f0, fam.truncated().matrices()))
    return SpecializationReport(
        n=n,
        c_masked=masked,
        c_smaller=smaller,
        last_vanishes=masked[-1] == 0,
        prefix_matches=list(masked[:-1]) == list(smaller),
    )
