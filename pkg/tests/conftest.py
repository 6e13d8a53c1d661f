"""Shared oracles that avoid the package's own matrix code."""

from __future__ import annotations

from fractions import Fraction

import pytest


def dense_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def dense_identity(n, c=1):
    return [[Fraction(c) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def dense_eval(f, mats):
    """Sum of coefficient * ordered product, on plain lists of Fractions."""
    n = len(mats[0])
    total = [[Fraction(0)] * n for _ in range(n)]
    for word, c in f.items():
        prod = dense_identity(n)
        for x in word:
            prod = dense_mul(prod, mats[x - 1])
        for i in range(n):
            for j in range(n):
                total[i][j] += c * prod[i][j]
    return total


@pytest.fixture
def oracle():
    class O:
        mul = staticmethod(dense_mul)
        eval = staticmethod(dense_eval)
        identity = staticmethod(dense_identity)

    return O
