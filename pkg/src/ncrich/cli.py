"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 hypothesis failure,
3 solver failure, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from .construct import (
    DEFAULT_TOLERANCE,
    SolveError,
    SubstitutionError,
    WeightError,
    auto_mode,
    choose_weights,
    leading_part,
    low_rank_witness,
    realize,
    result_to_json,
    verify_json,
)
from .freealg import ParseError, classify, degrees, parse
from .ring import DEFAULT_PRECISION, RootFindingError, matrix_to_json
from .transdeg import DEFAULT_BOX as SAMPLING_BOX
from .transdeg import DEFAULT_TRIALS, GenericityError, centrality_test, char_coeff_jacobian, pi_test

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

MODES = ("auto", "multilinear", "homogeneous", "general")

log = logging.getLogger("ncrich")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    poly: str | None
    m: int | None
    n: int | None
    targets: list | None
    mode: str
    pivot: int | None
    precision: int
    tolerance: float
    seed: int
    box: int | None
    k: int | None
    trials: int
    json_path: str | None
    threads: int
    batch: int
    shift: bool

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        cfg = cls(
            command=ns.command,
            poly=ns.poly,
            m=ns.m,
            n=ns.n,
            targets=parse_targets(ns.targets) if ns.targets is not None else None,
            mode=ns.mode,
            pivot=ns.pivot,
            precision=ns.precision,
            tolerance=ns.tolerance,
            seed=ns.seed,
            box=ns.box,
            k=ns.k,
            trials=ns.trials,
            json_path=ns.json,
            threads=ns.threads,
            batch=ns.batch,
            shift=ns.shift,
        )
        if cfg.precision < 64:
            raise UsageError("--precision must be at least 64 bits")
        if cfg.tolerance < 2.0 ** (-cfg.precision + 8):
            raise UsageError(f"--tolerance below 2^-(precision-8) = {2.0 ** (-cfg.precision + 8):g}")
        if cfg.box is not None and cfg.box < 1:
            raise UsageError("--box must be positive")
        if cfg.trials < 1 or cfg.threads < 1 or cfg.batch < 1:
            raise UsageError("--trials, --threads and --batch must be positive")
        return cfg

    def polynomial(self):
        if not self.poly:
            raise UsageError("--poly is required")
        m = self.m
        if m is None:
            indices = [int(x) for x in re.findall(r"[xX](\d+)", self.poly)]
            m = max(indices, default=1)
        f = parse(self.poly, m)
        if f.without_constant().is_zero():
            raise UsageError("polynomial must be nonconstant")
        return f

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise UsageError(f"--{name} is required for {self.command}")


def parse_targets(text: str) -> list[Fraction]:
    if not text.strip():
        return []
    try:
        return [Fraction(t.strip()) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --targets value: {exc}") from None


def write_json(path: str, data: dict) -> None:
    """Write once: a temp file in the target directory, then an atomic rename."""
    text = json.dumps(data, indent=2) + "\n"
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".ncrich-", suffix=".json", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, data: dict) -> None:
    if cfg.json_path:
        write_json(cfg.json_path, data)


# --- commands ----------------------------------------------------------------


def _weights_for_info(f, mode: str, pivot):
    pivots = [pivot] if pivot else range(f.m, 0, -1)
    errors = []
    for p in pivots:
        try:
            return choose_weights(f, mode, p), None
        except WeightError as exc:
            errors.append(f"pivot X{p}: {exc}")
    return None, "; ".join(errors)


def cmd_info(cfg: RunConfig) -> int:
    f = cfg.polynomial()
    kind, has_const = classify(f)
    d, total = degrees(f)
    mode = auto_mode(f) if cfg.mode == "auto" else cfg.mode
    w, err = _weights_for_info(f, mode, cfg.pivot)
    data = {
        "poly": str(f),
        "m": f.m,
        "class": kind,
        "constant_term": str(f.constant_term()),
        "degrees": list(d),
        "total_degree": total,
        "mode": mode,
    }
    if w is not None:
        data.update(pivot=w.pivot, q=list(w.q), m_prime=w.m_prime, doubled=w.doubled)
        if mode == "general":
            lp = leading_part(f.without_constant(), w.pivot)
            data["phi"] = {str(parse_word(word, f.m)): str(v) for word, v in lp.phi.items()}
            data["phi_f"] = str(lp.phi_f)
            data["leading_part"] = str(lp.f_bar)
    else:
        data["weight_error"] = err
    print(f"polynomial : {data['poly']}")
    print(f"class      : {kind}{' (with constant term)' if has_const else ''}")
    print(f"degrees    : {list(d)} total {total}")
    print(f"mode       : {mode}")
    if w is not None:
        print(f"pivot      : X{w.pivot}")
        print(f"weights q  : {list(w.q)}{' (doubled)' if w.doubled else ''}")
        print(f"m'         : {w.m_prime}")
        if mode == "general":
            print(f"phi(f)     : {data['phi_f']}")
            print(f"leading    : {data['leading_part']}")
            for word, v in data["phi"].items():
                print(f"  phi({word}) = {v}")
    else:
        print(f"weights    : unavailable ({err})")
    _emit(cfg, data)
    return EXIT_OK if w is not None else EXIT_SOLVER


def parse_word(word, m):
    from .freealg import NcPoly

    return NcPoly(m, {word: 1})


def _verify_and_report(cfg: RunConfig, r, *, witness: bool) -> int:
    data = result_to_json(r)
    report = verify_json(json.loads(json.dumps(data)), cfg.tolerance)
    print(f"mode       : {r.mode} (pivot X{r.weights.pivot}, q={list(r.weights.q)}, m'={r.weights.m_prime})")
    print(f"n          : {r.n}")
    print(f"diagonal   : {', '.join(data['achieved_diagonal'])}")
    print(f"image      : {report.triangular_side}")
    print(f"residual   : {data['max_residual']}")
    print(f"rank       : {report.rank} (m' = {r.weights.m_prime})")
    _emit(cfg, data)
    ok = report.ok and (report.rank_bound and report.diagonal if witness else True)
    print(f"verified   : {'yes' if ok else 'NO'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_realize(cfg: RunConfig) -> int:
    f = cfg.polynomial()
    cfg.require("n", "targets")
    r = realize(
        f,
        cfg.n,
        cfg.targets,
        mode=cfg.mode,
        pivot=cfg.pivot,
        seed=cfg.seed,
        precision=cfg.precision,
        box=cfg.box or 100,
    )
    return _verify_and_report(cfg, r, witness=False)


def cmd_witness(cfg: RunConfig) -> int:
    f = cfg.polynomial()
    cfg.require("n")
    if f.constant_term() and not cfg.shift:
        raise UsageError("f has a nonzero constant term; pass --shift to subtract it")
    r = low_rank_witness(f, cfg.n, seed=cfg.seed, precision=cfg.precision, box=cfg.box or 100, shift=cfg.shift)
    return _verify_and_report(cfg, r, witness=True)


def cmd_transdeg(cfg: RunConfig) -> int:
    f = cfg.polynomial()
    cfg.require("n", "k")
    if not 1 <= cfg.k <= cfg.n:
        raise UsageError("need 1 <= k <= n")
    box = cfg.box or SAMPLING_BOX
    central = centrality_test(f, cfg.k, cfg.trials, cfg.seed, box)
    identity = pi_test(f.without_constant(), cfg.k, cfg.trials, cfg.seed, box)
    print(f"identity on M_{cfg.k}   : {'probably' if identity.holds_probably else 'no (witness found)'}")
    print(f"central on M_{cfg.k}    : {'probably' if central.holds_probably else 'no (witness found)'}")
    if central.holds_probably:
        data = {
            "n": cfg.n,
            "k": cfg.k,
            "t_hat": None,
            "bound": None,
            "c": [],
            "pi_on_k": identity.holds_probably,
            "central_on_k": True,
            "seed": cfg.seed,
            "trials": cfg.trials,
        }
        print(f"hypothesis failed: f is central on {cfg.k}x{cfg.k} matrices; no bound claimed")
        _emit(cfg, data)
        return EXIT_HYPOTHESIS
    report = char_coeff_jacobian(
        f, cfg.n, seed=cfg.seed, box=box, trials=cfg.trials, batch=cfg.batch, threads=cfg.threads
    )
    report.k = cfg.k
    report.pi_on_k = identity.holds_probably
    report.central_on_k = central.holds_probably
    data = report.to_json()
    print(f"t_hat           : {report.t_hat}")
    print(f"bound n - k     : {report.bound}")
    print(f"bound holds     : {'yes' if report.bound_holds else 'NO'}")
    _emit(cfg, data)
    return EXIT_OK if report.bound_holds else EXIT_VERIFY


def cmd_pi_test(cfg: RunConfig) -> int:
    f = cfg.polynomial()
    cfg.require("k")
    box = cfg.box or SAMPLING_BOX
    v = pi_test(f, cfg.k, cfg.trials, cfg.seed, box)
    data = {
        "poly": str(f),
        "k": cfg.k,
        "identity_probably": v.holds_probably,
        "trials_run": v.trials_run,
        "error_bound": v.error_bound,
        "witness": [matrix_to_json(a) for a in v.witness] if v.witness else None,
        "seed": cfg.seed,
        "box": box,
    }
    if v.holds_probably:
        print(f"identity on M_{cfg.k}: probably (error <= {v.error_bound:.3g} after {v.trials_run} trials)")
    else:
        print(f"not an identity on M_{cfg.k}: witness found at trial {v.trials_run}")
    _emit(cfg, data)
    return EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "realize": cmd_realize,
    "witness": cmd_witness,
    "transdeg": cmd_transdeg,
    "pi-test": cmd_pi_test,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--poly", help='polynomial text, e.g. "X1*X2 - X2*X1"')
    common.add_argument("--m", type=int, help="number of variables (default: largest index in --poly)")
    common.add_argument("--n", type=int, help="matrix size")
    common.add_argument("--targets", help="comma-separated rationals, e.g. 1,2,3/2")
    common.add_argument("--mode", choices=MODES, default="auto")
    common.add_argument("--pivot", type=int)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="bits for numeric roots")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--box", type=int, help="sampling box B (default 100 for solves, 1000 for random tests)")
    common.add_argument("--k", type=int)
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    common.add_argument("--json", metavar="PATH", help="write a JSON report atomically")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--batch", type=int, default=1, help="Jacobian directions per evaluation pass")
    common.add_argument("--shift", action="store_true", help="subtract the constant term before a witness search")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = _Parser(prog="ncrich", description="Diagonal and low-rank values of noncommutative polynomials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolveError, SubstitutionError, WeightError, RootFindingError, GenericityError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
