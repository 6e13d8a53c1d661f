"""Triangular solves that realize prescribed diagonals in the image of f."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from ..freealg import COMPLETELY_HOMOGENEOUS, MULTILINEAR, NcPoly, classify, evaluate, restrict_to
from ..ring import (
    DEFAULT_PRECISION,
    CommPoly,
    RingMatrix,
    RootFindingError,
    commpoly_eval,
    context,
    rank,
    select_root,
    to_complex,
    univariate_roots,
)
from .substitution import (
    NonDiagonalImageError,
    SubstitutionError,
    SymbolicSubstitution,
    build_substitution,
    symbolic_diagonal,
)
from .weights import LeadingPart, WeightError, WeightVector, choose_weights, leading_part

log = logging.getLogger(__name__)

DEFAULT_BOX = 100
DEFAULT_RETRIES = 20
DEFAULT_TOLERANCE = 1e-20


class SolveError(ArithmeticError):
    pass


@dataclass
class Plan:
    """A substitution that passed the structural checks, ready for specialization."""

    f: NcPoly
    mode: str
    weights: WeightVector
    substitution: SymbolicSubstitution
    driver: NcPoly  # nonconstant part whose diagonal is solved (f-bar in general mode)
    diagonal: list[CommPoly]
    leading: LeadingPart | None = None


@dataclass
class RealizationResult:
    f: NcPoly
    mode: str
    weights: WeightVector
    n: int
    targets: tuple
    matrices: tuple[RingMatrix, ...]
    value: RingMatrix
    achieved_diagonal: list
    max_residual: object
    rank: int
    seed: int
    precision: int
    ring: str
    nu_values: dict = field(default_factory=dict)
    root_degrees: dict = field(default_factory=dict)
    ctx: object = None
    offset: int = 0  # targets sit at diagonal positions offset+1 .. offset+len(targets)

    @property
    def m_prime(self) -> int:
        return self.weights.m_prime

    @property
    def exact(self) -> bool:
        return self.ring == "rational"


def _check_targets(plan: Plan, targets: Sequence) -> tuple:
    expected = plan.substitution.targets
    if len(targets) != expected:
        raise ValueError(f"expected {expected} targets (n - m' = {plan.substitution.n} - {plan.weights.m_prime}), got {len(targets)}")
    return tuple(Fraction(t) for t in targets)


def make_plan(f: NcPoly, mode: str, n: int, pivot: int | None = None) -> Plan:
    """Choose weights, build the substitution and check it is triangular.

    Without an explicit pivot, X_m is tried first and then X_{m-1}, ..., X_1.
    """
    if f.without_constant().is_zero():
        raise ValueError("f must be nonconstant")
    candidates = [pivot] if pivot is not None else list(range(f.m, 0, -1))
    errors = []
    for p in candidates:
        try:
            plan = _plan_for_pivot(f, mode, n, p)
        except (WeightError, SubstitutionError, NonDiagonalImageError, SolveError) as exc:
            errors.append(f"X{p}: {exc}")
            continue
        if pivot is None and p != f.m:
            log.info("pivot X%d unusable, using X%d", f.m, p)
        return plan
    raise SolveError("no usable pivot; " + "; ".join(errors))


def _plan_for_pivot(f: NcPoly, mode: str, n: int, pivot: int) -> Plan:
    w = choose_weights(f, mode, pivot)
    f0 = f.without_constant()
    lp = None
    driver = f0
    if mode == "general":
        lp = leading_part(f0, pivot)
        if w.doubled:
            driver = restrict_to(f0, [pivot])
        else:
            driver = lp.f_bar
    sub = build_substitution(driver, w, n)
    diag = symbolic_diagonal(driver, sub)
    nus = set(sub.nu_symbols.values())
    for j in range(1, sub.targets + 1):
        present = diag[sub.offset + j - 1].symbols() & nus
        if sub.nu_symbols[j] not in present:
            raise SolveError(f"position {j} does not involve its solve symbol")
        later = [s for s in present if s[1] > j]
        if later:
            raise SolveError(f"position {j} involves later symbols {sorted(later)}")
    return Plan(f, mode, w, sub, driver, diag, lp)


def _sample(rng: random.Random, box: int) -> int:
    return rng.randint(1, box) * rng.choice((1, -1))


def solve_plan(
    plan: Plan,
    targets: Sequence,
    *,
    seed: int = 0,
    precision: int = DEFAULT_PRECISION,
    box: int = DEFAULT_BOX,
    retries: int = DEFAULT_RETRIES,
    mu: Mapping | int | None = None,
) -> RealizationResult:
    """Specialize free symbols, then solve positions 1..n-m' in increasing order."""
    betas = _check_targets(plan, targets)
    sub = plan.substitution
    gamma = plan.f.constant_term()
    rng = random.Random(seed)
    if isinstance(mu, Mapping):
        values = {s: Fraction(mu[s]) if s in mu else Fraction(_sample(rng, box)) for s in sub.free_symbols}
    elif mu is not None:
        values = {s: Fraction(mu) for s in sub.free_symbols}
    else:
        values = {s: Fraction(_sample(rng, box)) for s in sub.free_symbols}
    ctx = context(precision)
    for _attempt in range(retries + 1):
        outcome = _triangular_solve(plan, betas, gamma, values, ctx)
        if isinstance(outcome, dict):
            break
        offending = outcome
        if mu is not None and not isinstance(mu, Mapping):
            raise SolveError("vanishing leading coefficient with fixed mu values")
        for s in sorted(offending):
            values[s] = Fraction(_sample(rng, box))
    else:
        raise SolveError(f"leading coefficient kept vanishing after {retries} retries")
    point = dict(values)
    point.update(outcome["nu"])
    numeric = outcome["numeric"]
    if numeric:
        point = {s: to_complex(ctx, v) for s, v in point.items()}
    matrices = tuple(_specialize(x, point, numeric, ctx) for x in sub.matrices)
    return _assemble(plan, betas, matrices, seed, precision, outcome, ctx)


def _triangular_solve(plan: Plan, betas, gamma, values, ctx):
    """Return the solved nu values, or the set of symbols to resample."""
    sub = plan.substitution
    point: dict = dict(values)
    nu_values = {}
    degrees = {}
    numeric = False
    for j in range(1, sub.targets + 1):
        sym = sub.nu_symbols[j]
        entry = plan.diagonal[sub.offset + j - 1]
        split = entry.coefficients_in(sym)
        d = max(split)
        degrees[j] = d
        coeffs = []
        for e in range(d + 1):
            c = split.get(e)
            coeffs.append(commpoly_eval(c, point) if c is not None else Fraction(0))
        coeffs[0] = coeffs[0] - (betas[j - 1] - gamma)
        if not coeffs[d]:
            lead_syms = {s for s in split[d].symbols() if s[0] == "mu"}
            return lead_syms or {s for s in entry.symbols() if s[0] == "mu"}
        exact = all(isinstance(c, Fraction) for c in coeffs)
        if exact and d == 1:
            root = -coeffs[0] / coeffs[1]
        elif exact:
            found = univariate_roots(coeffs, "exact")
            if found.roots:
                root = max(found.roots, key=lambda r: (abs(r), r))
            else:
                root = _numeric_root(coeffs, ctx)
        elif d == 1:
            root = -coeffs[0] / coeffs[1]
        else:
            root = _numeric_root(coeffs, ctx)
        if not isinstance(root, Fraction):
            numeric = True
        point[sym] = root
        nu_values[j] = root
    return {"nu": {sub.nu_symbols[j]: v for j, v in nu_values.items()}, "by_position": nu_values, "degrees": degrees, "numeric": numeric}


def _numeric_root(coeffs, ctx):
    try:
        roots = univariate_roots(coeffs, "numeric", ctx.prec)
    except RootFindingError as exc:
        raise SolveError(str(exc)) from exc
    return to_complex(ctx, select_root(roots, ctx.prec))


def _specialize(x: RingMatrix, point, numeric: bool, ctx) -> RingMatrix:
    entries = {ij: commpoly_eval(v, point) for ij, v in x.entries.items()}
    if numeric:
        return RingMatrix(x.n, {ij: to_complex(ctx, v) for ij, v in entries.items()}, "complex")
    return RingMatrix(x.n, entries, "rational")


def window_to_front(n: int, offset: int, size: int) -> list[int]:
    """Old positions listed in their new order: the solved window first, order kept."""
    window = list(range(offset + 1, offset + size + 1))
    return window + list(range(1, offset + 1)) + list(range(offset + size + 1, n + 1))


def permute(m: RingMatrix, order: Sequence[int]) -> RingMatrix:
    """P^T M P where new position t+1 holds old position order[t]."""
    new = {old: t + 1 for t, old in enumerate(order)}
    return RingMatrix(m.n, {(new[i], new[j]): v for (i, j), v in m.entries.items()}, m.ring)


def _assemble(plan: Plan, betas, matrices, seed, precision, outcome, ctx) -> RealizationResult:
    offset = plan.substitution.offset
    value = evaluate(plan.f, matrices)
    if offset:
        # f(P^T A P) = P^T f(A) P: a similarity moves the solved window to the top-left
        order = window_to_front(plan.substitution.n, offset, len(betas))
        moved = permute(value, order)
        if moved.triangular_side() != "none" or value.triangular_side() == "none":
            matrices = tuple(permute(a, order) for a in matrices)
            value = moved
            offset = 0
        else:
            log.info("keeping solved window at offset %d to preserve triangularity", offset)
    ring = matrices[0].ring if matrices else "rational"
    if any(a.ring == "complex" for a in matrices):
        ring = "complex"
    diag = value.diagonal()
    if ring == "complex":
        diag = [to_complex(ctx, v) for v in diag]
        residual = max((abs(diag[offset + j] - to_complex(ctx, b)) for j, b in enumerate(betas)), default=ctx.mpf(0))
        tol = ctx.mpf(2) ** (-precision // 2)
        r = rank(value, tol)
    else:
        residual = max((abs(diag[offset + j] - b) for j, b in enumerate(betas)), default=Fraction(0))
        r = rank(value)
    return RealizationResult(
        f=plan.f,
        mode=_mode_tag(plan),
        weights=plan.weights,
        n=plan.substitution.n,
        targets=betas,
        matrices=matrices,
        value=value,
        achieved_diagonal=diag,
        max_residual=residual,
        rank=r,
        seed=seed,
        precision=precision,
        ring=ring,
        nu_values=outcome["by_position"],
        root_degrees=outcome["degrees"],
        ctx=ctx if ring == "complex" else None,
        offset=offset,
    )


def _mode_tag(plan: Plan) -> str:
    if plan.mode == "general" and plan.weights.doubled:
        return "general-doubled"
    return plan.mode


def solve_multilinear(f: NcPoly, n: int, targets: Sequence, seed: int = 0, **kw) -> RealizationResult:
    """Realize ``targets`` on the first n - m + 1 diagonal entries (multilinear f)."""
    kind, _ = classify(f)
    if f.is_zero():
        raise ValueError("zero polynomial")
    if kind != MULTILINEAR:
        raise ValueError("solve_multilinear needs a multilinear polynomial")
    pivot = kw.pop("pivot", None)
    plan = make_plan(f, "multilinear", n, pivot)
    return solve_plan(plan, targets, seed=seed, **kw)


def solve_homogeneous(f: NcPoly, n: int, targets: Sequence, pivot: int | None = None, precision: int = DEFAULT_PRECISION, seed: int = 0, **kw) -> RealizationResult:
    kind, _ = classify(f)
    if kind not in (MULTILINEAR, COMPLETELY_HOMOGENEOUS) or f.constant_term():
        raise ValueError("solve_homogeneous needs a completely homogeneous polynomial")
    plan = make_plan(f, "homogeneous", n, pivot)
    return solve_plan(plan, targets, seed=seed, precision=precision, **kw)


def solve_general(f: NcPoly, n: int, targets: Sequence, pivot: int | None = None, precision: int = DEFAULT_PRECISION, seed: int = 0, **kw) -> RealizationResult:
    plan = make_plan(f, "general", n, pivot)
    return solve_plan(plan, targets, seed=seed, precision=precision, **kw)


def auto_mode(f: NcPoly) -> str:
    kind, _ = classify(f)
    return {MULTILINEAR: "multilinear", COMPLETELY_HOMOGENEOUS: "homogeneous"}.get(kind, "general")


def realize(f: NcPoly, n: int, targets: Sequence, mode: str = "auto", pivot: int | None = None, **kw) -> RealizationResult:
    """Dispatch to the solver matching ``mode`` (``"auto"`` classifies f)."""
    if mode == "auto":
        mode = auto_mode(f)
    plan = make_plan(f, mode, n, pivot)
    return solve_plan(plan, targets, **kw)


def low_rank_witness(
    f: NcPoly,
    n: int,
    *,
    seed: int = 0,
    precision: int = DEFAULT_PRECISION,
    box: int = DEFAULT_BOX,
    shift: bool = False,
) -> RealizationResult:
    """Matrices with rank f(A) <= m', obtained by solving for an all-zero diagonal prefix.

    A triangular (general mode) image need not have small rank, so only
    diagonal images are accepted. If f itself does not admit one, variables are
    set to zero (largest remaining sets first) until the restriction does.
    """
    gamma = f.constant_term()
    if gamma:
        if not shift:
            raise ValueError("f has a nonzero constant term; subtract it first (shift=True)")
        log.info("subtracting constant term %s", gamma)
        f = f.without_constant()
    if f.is_zero():
        raise ValueError("f must be nonconstant")
    from itertools import combinations

    tried = []
    subsets = [tuple(c) for size in range(f.m, 0, -1) for c in combinations(range(1, f.m + 1), size)]
    for keep in subsets:
        g = restrict_to(f, keep)
        if g.is_zero():
            continue
        try:
            plan = make_plan(g, auto_mode(g), n)
        except (SolveError, ValueError) as exc:
            tried.append(f"{keep}: {exc}")
            continue
        if plan.mode == "general" and not plan.weights.doubled and any(plan.weights.net(w) for w in g.words()):
            tried.append(f"{keep}: triangular image only")
            continue
        r = solve_plan(plan, [0] * plan.substitution.targets, seed=seed, precision=precision, box=box)
        if len(keep) < f.m:
            r = _zero_outside(f, r, keep)
        else:
            r.f = f
        if r.rank > r.m_prime:
            raise SolveError(f"rank {r.rank} exceeds m' = {r.m_prime}")
        return r
    raise SolveError("no diagonal-image substitution found; " + "; ".join(tried))


def _zero_outside(f: NcPoly, r: RealizationResult, keep) -> RealizationResult:
    matrices = tuple(a if i in keep else RingMatrix.zero(a.n, a.ring) for i, a in enumerate(r.matrices, 1))
    value = evaluate(f, matrices)
    r.f = f
    r.matrices = matrices
    r.value = value
    r.achieved_diagonal = value.diagonal() if r.ring == "rational" else [to_complex(r.ctx, v) for v in value.diagonal()]
    r.rank = rank(value) if r.ring == "rational" else rank(value, r.ctx.mpf(2) ** (-r.precision // 2))
    return r
