"""Cached algebra construction for tests."""

from __future__ import annotations

from superw.algebra import build_algebra
from superw.grading import build_m_and_zeta

_ALGEBRAS: dict = {}


def algebra(family: str, *params: int):
    key = (family, params)
    if key not in _ALGEBRAS:
        _ALGEBRAS[key] = build_algebra(family, params)
    return _ALGEBRAS[key]


_NIL: dict = {}


def nilpotent(family: str, *params: int):
    key = (family, params)
    if key not in _NIL:
        _NIL[key] = build_m_and_zeta(algebra(family, *params))
    return _NIL[key]
