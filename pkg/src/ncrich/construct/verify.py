"""Independent re-verification of realizations and their JSON certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..freealg import evaluate, parse
from ..ring import context, format_complex, matrix_from_json, matrix_to_json, rank, to_complex, to_complex_matrix
from ..ring.matrix import format_value
from .solve import DEFAULT_TOLERANCE, RealizationResult
from .weights import WeightVector, leading_part


@dataclass
class VerificationReport:
    diagonal: bool
    triangular_side: str
    prefix_match: bool
    residual: object
    rank: int
    rank_bound: bool
    leading_match: bool | None = None

    @property
    def ok(self) -> bool:
        return self.prefix_match and self.triangular_side != "none" and self.leading_match is not False


def verify_realization(f, r: RealizationResult, tolerance: float = DEFAULT_TOLERANCE) -> VerificationReport:
    """Recompute f(A) from the matrices alone and check the claimed properties.

    Exact results must match the targets exactly. Complex results are
    re-evaluated at twice the working precision and compared within ``tolerance``.
    """
    targets = list(r.targets)
    k = len(targets)
    off = r.offset
    gamma = f.constant_term()
    if r.ring == "complex":
        ctx = context(2 * r.precision)
        mats = [to_complex_matrix(a, ctx) for a in r.matrices]
        value = evaluate(f, mats)
        diag = [to_complex(ctx, v) for v in value.diagonal()]
        residual = max((abs(diag[off + j] - to_complex(ctx, t)) for j, t in enumerate(targets)), default=ctx.mpf(0))
        prefix = residual <= tolerance
        rk = rank(value, ctx.mpf(2) ** (-r.precision // 2))
    else:
        mats = list(r.matrices)
        value = evaluate(f, mats)
        diag = value.diagonal()
        residual = max((abs(diag[off + j] - t) for j, t in enumerate(targets)), default=Fraction(0))
        prefix = residual == 0
        rk = rank(value)
    side = value.triangular_side()
    leading_ok = None
    if r.mode == "general":
        f_bar = leading_part(f.without_constant(), r.weights.pivot).f_bar
        bar_diag = evaluate(f_bar, mats).diagonal()
        if r.ring == "complex":
            leading_ok = all(abs(a - (to_complex(ctx, b) + gamma)) <= tolerance for a, b in zip(diag, bar_diag))
        else:
            leading_ok = all(a == b + gamma for a, b in zip(diag, bar_diag))
    if r.mode != "general" and side != "diagonal":
        side_ok = "none"
    else:
        side_ok = side
    return VerificationReport(
        diagonal=side == "diagonal",
        triangular_side=side_ok,
        prefix_match=bool(prefix) and len(diag) >= off + k,
        residual=residual,
        rank=rk,
        rank_bound=rk <= r.weights.m_prime,
        leading_match=leading_ok,
    )


# --- JSON --------------------------------------------------------------------


def _format_residual(r: RealizationResult) -> str:
    if r.ring == "complex":
        return r.ctx.nstr(r.max_residual, 6)
    return str(r.max_residual)


def result_to_json(r: RealizationResult) -> dict:
    ctx = r.ctx
    return {
        "mode": r.mode,
        "poly": str(r.f),
        "m": r.f.m,
        "pivot": r.weights.pivot,
        "q": list(r.weights.q),
        "m_prime": r.weights.m_prime,
        "doubled": r.weights.doubled,
        "n": r.n,
        "targets": [str(t) for t in r.targets],
        "offset": r.offset,
        "matrices": [matrix_to_json(a) for a in r.matrices],
        "value": matrix_to_json(r.value),
        "achieved_diagonal": [format_complex(ctx, v) if r.ring == "complex" else format_value(v) for v in r.achieved_diagonal],
        "max_residual": _format_residual(r),
        "rank": r.rank,
        "seed": r.seed,
        "precision": r.precision,
    }


def result_from_json(data: dict) -> RealizationResult:
    """Rebuild a result from its certificate; ``value`` is recomputed, not trusted."""
    f = parse(data["poly"], int(data["m"]))
    precision = int(data.get("precision", 256))
    ctx = context(precision)
    matrices = tuple(matrix_from_json(a, ctx) for a in data["matrices"])
    ring = "complex" if any(a.ring == "complex" for a in matrices) else "rational"
    if ring == "complex":
        matrices = tuple(to_complex_matrix(a, ctx) for a in matrices)
    weights = WeightVector(tuple(data["q"]), int(data["m_prime"]), int(data["pivot"]), bool(data.get("doubled", False)))
    value = evaluate(f, matrices)
    return RealizationResult(
        f=f,
        mode=data["mode"],
        weights=weights,
        n=int(data["n"]),
        targets=tuple(Fraction(t) for t in data["targets"]),
        matrices=matrices,
        value=value,
        achieved_diagonal=value.diagonal(),
        max_residual=None,
        rank=int(data["rank"]),
        seed=int(data["seed"]),
        precision=precision,
        ring=ring,
        ctx=ctx if ring == "complex" else None,
        offset=int(data.get("offset", 0)),
    )


def verify_json(data: dict, tolerance: float = DEFAULT_TOLERANCE) -> VerificationReport:
    r = result_from_json(data)
    return verify_realization(r.f, r, tolerance)
