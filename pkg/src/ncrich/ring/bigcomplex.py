"""Arbitrary-precision complex numbers backed by private mpmath contexts.

Each caller gets its own ``MPContext`` so working precision is never global
state. Values are ``mpmath`` ``mpc`` objects.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

DEFAULT_PRECISION = 256
MIN_PRECISION = 64


def context(bits: int = DEFAULT_PRECISION) -> mpmath.ctx_mp.MPContext:
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} bits")
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def is_complex(x) -> bool:
    return isinstance(x, (mpmath.mpc, mpmath.mpf)) or hasattr(x, "_mpc_") or hasattr(x, "_mpf_")


def to_complex(ctx, x):
    """Convert a Fraction/int/mp number to an ``mpc`` in ``ctx``."""
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    if isinstance(x, int):
        return ctx.mpc(x)
    if hasattr(x, "_mpc_"):
        return ctx.mpc(ctx.mpf(x.real), ctx.mpf(x.imag))
    return ctx.mpc(x)


def digits_for(bits: int) -> int:
    return int(bits * 0.30103) + 2


def format_complex(ctx, z) -> str:
    """Decimal ``re±im i`` string at full working precision."""
    z = ctx.mpc(z)
    d = digits_for(ctx.prec)
    re_s = ctx.nstr(z.real, d, strip_zeros=False)
    im = z.imag
    sign = "-" if im < 0 else "+"
    im_s = ctx.nstr(abs(im), d, strip_zeros=False)
    return f"{re_s}{sign}{im_s}i"


def parse_complex(ctx, text: str):
    s = text.strip()
    if not s.endswith("i"):
        raise ValueError(f"malformed complex literal {text!r}")
    body = s[:-1]
    split = None
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            split = k
            break
    if split is None:
        raise ValueError(f"malformed complex literal {text!r}")
    return ctx.mpc(ctx.mpf(body[:split]), ctx.mpf(body[split:]))
