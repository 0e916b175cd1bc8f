"""Checks for the free-module criterion on ``Q_zeta`` and the p(n), q(n) data it applies to."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

from superw.algebra import EVEN, ODD, LieSuperalgebra, bracket, build_algebra
from superw.grading import NilpotentData, build_m_and_zeta
from superw.linalg import rank
from superw.pbw import Element, _iadd
from superw.scalars import Vec, fmt, vec_iadd
from superw.whittaker import InducedModule, q_module


class InvalidN(ValueError):
    pass


class InvalidDatum(ValueError):
    pass


@dataclass(frozen=True)
class SkryabinDatum:
    """Paired lists ``u_i`` (basis of m) and ``x_i`` with ``x_s`` in degree ``d_s - 2``.

    Even pairs come first.
    """

    u: tuple[Vec, ...]
    x: tuple[Vec, ...]
    d: tuple[int, ...]
    parity: tuple[int, ...]
    names: tuple[str, ...] = ()

    @property
    def size(self) -> int:
        return len(self.u)

    @property
    def n_even(self) -> int:
        return sum(1 for p in self.parity if p == EVEN)


@dataclass
class Report:
    check: str
    status: str
    witnesses: list[dict]
    payload: dict | None = None

    def to_json(self) -> dict:
        out = {"check": self.check, "status": self.status, "witnesses": self.witnesses}
        if self.payload is not None:
            out["payload"] = self.payload
        return out

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _status(witnesses: list) -> str:
    return "pass" if not witnesses else "fail"


def _lab(i: int, j: int, n: int) -> str:
    return f"{{{i},{j}}}" if n >= 10 else f"{{{i}{j}}}"


def make_datum(A: LieSuperalgebra, nil: NilpotentData, pairs: Sequence[tuple[str, Vec, Vec]]) -> SkryabinDatum:
    """Order even pairs before odd ones and compute ``d_s = deg(x_s) + 2`` from the grading."""
    rows = []
    for name, u, x in pairs:
        pu, px = A.parity_of(u), A.parity_of(x)
        if pu is None or px is None or pu != px:
            raise InvalidDatum(f"{name}: u and x must be homogeneous of equal parity")
        deg = nil.grading.degree_of(x)
        if deg is None:
            raise InvalidDatum(f"{name}: x is not grading-homogeneous")
        rows.append((pu, name, u, x, deg + 2))
    rows.sort(key=lambda r: r[0])  # stable: keeps the given order within each parity
    for r in rows:
        if r[4] <= 0:
            raise InvalidDatum(f"{r[1]}: d = {r[4]} is not positive")
    return SkryabinDatum(
        u=tuple(r[2] for r in rows),
        x=tuple(r[3] for r in rows),
        d=tuple(r[4] for r in rows),
        parity=tuple(r[0] for r in rows),
        names=tuple(r[1] for r in rows),
    )


def qn_datum(n: int, A: LieSuperalgebra | None = None, nil: NilpotentData | None = None, full_tails: bool = True) -> SkryabinDatum:
    """``e_ab -> sum_k e_{b+k,a+k+1}`` and ``f_ab -> sum_k (-1)^k f_{b+k,a+k+1}``.

    With ``full_tails=False`` only the ``k = 0`` terms are kept (a deliberately broken datum).
    """
    if n < 2:
        raise InvalidN(f"q(n) data need n >= 2, got {n}")
    A = A or build_algebra("q", (n,))
    nil = nil or build_m_and_zeta(A)
    pairs = []
    for kind in ("e", "f"):
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                x: Vec = {}
                for k in range(n):
                    if b + k > n or (not full_tails and k > 0):
                        break
                    sign = (-1) ** k if kind == "f" else 1
                    vec_iadd(x, {A.index(f"{kind}_{_lab(b + k, a + k + 1, n)}"): Fraction(sign)})
                pairs.append((f"{kind}_{_lab(a, b, n)}", A.vec(f"{kind}_{_lab(a, b, n)}"), x))
    return make_datum(A, nil, pairs)


def _p_elem(A: LieSuperalgebra, kind: str, a: int, b: int, n: int) -> Vec | None:
    if not (1 <= a <= n and 1 <= b <= n):
        return None
    if kind == "s":
        a, b = min(a, b), max(a, b)
    elif kind == "y":
        if a == b:
            return None
        sign = 1 if a < b else -1
        a, b = min(a, b), max(a, b)
        return {A.index(f"y_{_lab(a, b, n)}"): Fraction(sign)}
    return {A.index(f"{kind}_{_lab(a, b, n)}"): Fraction(1)}


def pn_overline(A: LieSuperalgebra, kind: str, a: int, b: int, full_tails: bool = True) -> Vec:
    """``ov e_ab``, ``ov s_ab`` or ``ov y_ab``, keeping only terms with valid indices."""
    n = A.params[0]
    out: Vec = {}
    for k in range(n + 1):
        if not full_tails and k > 0:
            break
        if kind == "e":
            term = _p_elem(A, "e", b + k, a + k + 1, n)
        elif kind == "s":
            term = _p_elem(A, "y", a - k, b + k + 1, n)
        else:  # s_ab is only indexed with a <= b
            term = _p_elem(A, "s", a + k, b - k - 1, n) if a + k <= b - k - 1 else None
        if term:
            vec_iadd(out, term)
    return out


def pn_datum(n: int, A: LieSuperalgebra | None = None, nil: NilpotentData | None = None, full_tails: bool = True) -> SkryabinDatum:
    if n < 2:
        raise InvalidN(f"p(n) data need n >= 2, got {n}")
    A = A or build_algebra("p", (n,))
    nil = nil or build_m_and_zeta(A)
    pairs = []
    for i in nil.m_basis:
        lab = A.labels[i]
        kind = lab[0]
        digits = lab[2:].strip("{}")
        a, b = (int(t) for t in digits.split(",")) if "," in digits else (int(digits[0]), int(digits[1]))
        x = pn_overline(A, kind, a, b, full_tails)
        if not x:
            raise InvalidDatum(f"ov {lab} is empty")
        pairs.append((lab, {i: Fraction(1)}, x))
    return make_datum(A, nil, pairs)


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------


def check_conditions(A: LieSuperalgebra, nil: NilpotentData, datum: SkryabinDatum) -> list[Report]:
    m_dim = len(nil.m_basis)
    # (1) basis of m
    w1 = []
    outside = [datum.names[i] for i, u in enumerate(datum.u) if not nil.in_m(u)]
    rk = rank([[u.get(j, Fraction(0)) for j in range(A.dim)] for u in datum.u], A.dim)
    if outside:
        w1.append({"indices": outside, "expected": "in m", "computed": "outside m"})
    if rk != m_dim or datum.size != m_dim:
        w1.append({"indices": [], "expected": str(m_dim), "computed": f"rank {rk} of {datum.size}"})

    # (2) diagonal pairs
    w2 = []
    for i in range(datum.size):
        br = bracket(A, datum.u[i], datum.x[i])
        deg = nil.grading.degree_of(br)
        ok_space = bool(br) and deg == -2 and A.parity_of(br) == EVEN and nil.in_m(br)
        val = nil.zeta(br) if ok_space else None
        if not ok_space or val != 1:
            w2.append({
                "indices": [datum.names[i], datum.names[i]],
                "expected": "1/1",
                "computed": fmt(val) if val is not None else f"[u,x] = {A.format(br)} not in g(-2) even",
            })

    # (3) off-diagonal pairs landing in g(-2)
    w3 = []
    for i, j in itertools.permutations(range(datum.size), 2):
        br = bracket(A, datum.u[i], datum.x[j])
        if not br or nil.grading.degree_of(br) != -2:
            continue
        val = nil.zeta(br) if nil.in_m(br) else Fraction(0)
        if val != 0:
            w3.append({"indices": [datum.names[i], datum.names[j]], "expected": "0/1", "computed": fmt(val)})
    return [
        Report("condition-1-basis", _status(w1), w1),
        Report("condition-2-diagonal", _status(w2), w2),
        Report("condition-3-off-diagonal", _status(w3), w3),
    ]


# ---------------------------------------------------------------------------
# zeta tables for p(n)
# ---------------------------------------------------------------------------


def check_pn_zeta_tables(n: int) -> list[Report]:
    """Exhaustive comparison of ``zeta([s_ab, y_cd])`` and the ``ov`` identities."""
    if n < 2:
        raise InvalidN(f"p(n) tables need n >= 2, got {n}")
    A = build_algebra("p", (n,))
    nil = build_m_and_zeta(A)

    def z(u: Vec, x: Vec) -> Fraction | None:
        br = bracket(A, u, x)
        return nil.zeta(br) if nil.in_m(br) else None

    def s(a, b):
        return _p_elem(A, "s", a, b, n)

    def y(a, b):
        return _p_elem(A, "y", a, b, n)

    table, evaluated = [], 0
    for a, b in itertools.combinations_with_replacement(range(1, n + 1), 2):
        for c, d in itertools.combinations(range(1, n + 1), 2):
            val = z(s(a, b), y(c, d))
            if val is None:
                continue
            evaluated += 1
            expected = 1 if (c, d) == (a, b + 1) else -1 if (c, d) == (a + 1, b) else 0
            if val != expected:
                table.append({"indices": [f"s_{a}{b}", f"y_{c}{d}"], "expected": fmt(Fraction(expected)), "computed": fmt(val)})

    # Both sides of every identity share a degree, so either both lie in m or neither does.
    ids, outside, counts = [], [], {"in_m": 0, "outside_m": 0}

    def expect(label, u, x, expected):
        if u is None or not x:
            return
        scope = "in_m" if nil.in_m(u) else "outside_m"
        val = z(u, x)
        counts[scope] += 1
        if val != expected:
            (ids if scope == "in_m" else outside).append(
                {"indices": label, "expected": fmt(Fraction(expected)), "computed": "outside m" if val is None else fmt(val)}
            )

    for a, b in itertools.combinations_with_replacement(range(1, n + 1), 2):
        ov = pn_overline(A, "s", a, b)
        if not ov:
            continue
        expect([f"s_{a}{b}", f"ov s_{a}{b}"], s(a, b), ov, 1)
        for ell in range(-n, n + 1):
            if ell and a + ell <= b - ell:
                expect([f"s_{a + ell}{b - ell}", f"ov s_{a}{b}", f"l={ell}"], s(a + ell, b - ell), ov, 0)
    for c, d in itertools.combinations(range(1, n + 1), 2):
        ov = pn_overline(A, "y", c, d)
        if not ov:
            continue
        expect([f"y_{c}{d}", f"ov y_{c}{d}"], y(c, d), ov, 1)
        for ell in range(-n, n + 1):
            if ell and c + ell < d - ell:
                expect([f"y_{c + ell}{d - ell}", f"ov y_{c}{d}", f"l={ell}"], y(c + ell, d - ell), ov, 0)
    return [
        Report("s-y-bracket-table", _status(table), table, {"evaluated": evaluated}),
        Report("overline-identities", _status(ids), ids, {"evaluated": counts["in_m"]}),
        Report(
            "overline-identities-outside-m",
            "pass" if not outside else "warn",
            outside,
            {"evaluated": counts["outside_m"]},
        ),
    ]


# ---------------------------------------------------------------------------
# conclusions and freeness
# ---------------------------------------------------------------------------


def multi_indices(datum: SkryabinDatum, wt_bound: int) -> list[tuple[int, ...]]:
    """All ``a`` with ``wt(a) <= wt_bound``, odd entries capped at 1, sorted by the order key."""
    caps = [wt_bound // d if p == EVEN else 1 for d, p in zip(datum.d, datum.parity)]
    out = []
    for a in itertools.product(*(range(c + 1) for c in caps)):
        if weight(datum, a) <= wt_bound:
            out.append(a)
    return sorted(out, key=lambda a: order_key(datum, a))


def weight(datum: SkryabinDatum, a: Sequence[int]) -> int:
    return sum(d * k for d, k in zip(datum.d, a))


def order_key(datum: SkryabinDatum, a: Sequence[int]):
    """``a < b`` iff ``wt a < wt b``, or equal weights and ``|a| > |b|``; ties lexicographic."""
    return (weight(datum, a), -sum(a), tuple(a))


def _apply_x(Q: InducedModule, datum: SkryabinDatum, b: Sequence[int], vec: Element) -> Element:
    """``x^b . vec`` with ``x^b = x_1^{b_1} ... x_m^{b_m}``."""
    for s in reversed(range(datum.size)):
        for _ in range(b[s]):
            vec = _act_vec(Q, datum.x[s], vec)
    return vec


def _act_vec(Q: InducedModule, x: Vec, vec: Element) -> Element:
    out: Element = {}
    for i, c in x.items():
        _iadd(out, Q.act_letter(i, vec), c)
    return out


def _apply_u(Q: InducedModule, nil: NilpotentData, datum: SkryabinDatum, a: Sequence[int], vec: Element) -> Element:
    """``u^a . vec``; even factors act as ``u - zeta(u)``."""
    for s in reversed(range(datum.size)):
        u = datum.u[s]
        shift = nil.zeta(u) if datum.parity[s] == EVEN else Fraction(0)
        for _ in range(a[s]):
            moved = _act_vec(Q, u, vec)
            if shift:
                _iadd(moved, vec, -shift)
            vec = moved
    return vec


def verify_conclusions(
    A: LieSuperalgebra,
    nil: NilpotentData,
    datum: SkryabinDatum,
    wt_bound: int = 6,
    Q: InducedModule | None = None,
) -> list[Report]:
    Q = Q or q_module(nil)
    idx = multi_indices(datum, wt_bound)
    one = Q.generator()
    xb = {b: _apply_x(Q, datum, b, one) for b in idx}
    diag_w, lower_w, scalars = [], [], []
    for i, a in enumerate(idx):
        for b in idx[: i + 1]:
            res = _apply_u(Q, nil, datum, a, xb[b])
            if a == b:
                c = res.get((), Fraction(0))
                scalars.append({"a": list(a), "c": fmt(c)})
                if c == 0 or any(m != () for m in res):
                    diag_w.append({"indices": [list(a), list(b)], "expected": "nonzero multiple of 1", "computed": Q.U.to_json(res)})
            elif res:
                lower_w.append({"indices": [list(a), list(b)], "expected": "0", "computed": Q.U.to_json(res)})
    pairs = len(idx) * (len(idx) - 1) // 2
    return [
        Report("conclusion-diagonal-nonzero", _status(diag_w), diag_w, {"scalars": scalars}),
        Report("conclusion-lower-vanishing", _status(lower_w), lower_w, {"pairs": pairs}),
    ]


def check_freeness(
    A: LieSuperalgebra,
    nil: NilpotentData,
    datum: SkryabinDatum,
    wt_bound: int = 6,
    Q: InducedModule | None = None,
) -> Report:
    Q = Q or q_module(nil)
    idx = multi_indices(datum, wt_bound)
    vecs = [_apply_x(Q, datum, a, Q.generator()) for a in idx]
    keys = sorted({m for v in vecs for m in v}, key=Q.U.sort_key)
    rows = [[v.get(k, Fraction(0)) for k in keys] for v in vecs]
    rk = rank(rows, len(keys)) if keys else 0
    w = [] if rk == len(idx) else [{"indices": [], "expected": str(len(idx)), "computed": str(rk)}]
    return Report("freeness-rank", _status(w), w, {"vectors": len(idx), "rank": rk})


def datum_to_json(A: LieSuperalgebra, datum: SkryabinDatum) -> list[dict]:
    return [
        {"u": A.format(u), "x": A.format(x), "d": d, "parity": "odd" if p == ODD else "even"}
        for u, x, d, p in zip(datum.u, datum.x, datum.d, datum.parity)
    ]


def with_pair(datum: SkryabinDatum, i: int, x: Mapping[int, Fraction]) -> SkryabinDatum:
    """Copy with ``x_i`` replaced (degrees kept as given)."""
    xs = list(datum.x)
    xs[i] = dict(x)
    return replace(datum, x=tuple(xs))
