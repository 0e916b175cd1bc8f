"""Exact rank and nullspace over Q, backed by sympy's DomainMatrix."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _dm(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = [[QQ(int(Fraction(x).numerator), int(Fraction(x).denominator)) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    ncols = len(rows[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return _dm(rows, ncols).rank()


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis (as row vectors, reduced form) of ``{x : rows @ x = 0}``."""
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace()
    return [[_frac(x) for x in row] for row in ns.to_list()]


def solve_unique(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Coefficients ``c`` with ``sum c_i columns[i] == target``, or None if not in the span.

    The columns must be linearly independent.
    """
    n = len(columns)
    m = len(target)
    aug = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(m)]
    rref, pivots = _dm(aug, n + 1).rref()
    if n in pivots:
        return None
    rows = rref.to_list()
    sol = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        sol[p] = _frac(rows[r][n])
    return sol
