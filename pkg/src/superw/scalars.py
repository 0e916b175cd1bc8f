"""Exact rational scalars and their text formats."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction
Vec = dict  # sparse {basis index: Fraction}, never stores zeros


def parse_rational(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def parse_rational_list(text: str) -> list[Fraction]:
    """Parse ``"3/2,0,1"`` into a list of Fractions."""
    parts = [p for p in text.replace(" ", "").split(",")]
    if parts == [""]:
        return []
    return [parse_rational(p) for p in parts]


def fmt(q: Fraction | int) -> str:
    """Serialize as ``"p/q"`` (q > 0, lowest terms)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def vec_add(*vecs: Mapping[int, Fraction], coeffs: Iterable[Fraction] | None = None) -> Vec:
    out: Vec = {}
    if coeffs is None:
        coeffs = [Fraction(1)] * len(vecs)
    for c, v in zip(coeffs, vecs):
        if c == 0:
            continue
        for k, x in v.items():
            y = out.get(k, 0) + c * x
            if y:
                out[k] = y
            else:
                out.pop(k, None)
    return out


def vec_scale(c: Fraction | int, v: Mapping) -> Vec:
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_iadd(target: dict, v: Mapping, c: Fraction | int = 1) -> None:
    """In-place ``target += c * v`` for sparse dicts with arbitrary hashable keys."""
    if c == 0:
        return
    for k, x in v.items():
        y = target.get(k, 0) + c * x
        if y:
            target[k] = y
        else:
            target.pop(k, None)
