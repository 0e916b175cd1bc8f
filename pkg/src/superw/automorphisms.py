"""Diagonal scaling automorphisms of p(n) and q(n) and the characters they transport."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from superw.algebra import AlgebraError, LieSuperalgebra, bracket
from superw.grading import NilpotentData, WhittakerCharacter
from superw.scalars import Vec, fmt
from superw.skryabin import Report, _status

SCALING_POOL = tuple(Fraction(x) for x in ("1", "-1", "2", "-2", "1/3", "-1/3", "5", "-1/2", "3", "7/4"))


class ZeroEntry(ValueError):
    pass


class UnsupportedFamily(AlgebraError):
    pass


class MDoesNotClose(AlgebraError):
    pass


@dataclass(frozen=True)
class ScalingSequence:
    a: tuple[Fraction, ...]
    table: tuple[tuple[Fraction, ...], ...]  # table[i-1][j-1] = a_ij

    @property
    def n(self) -> int:
        return len(self.a) + 1

    def __call__(self, i: int, j: int) -> Fraction:
        return self.table[i - 1][j - 1]

    def inverse(self) -> "ScalingSequence":
        return scaling_coeffs([1 / x for x in self.a])


def scaling_coeffs(a: Sequence) -> ScalingSequence:
    """``a_ij = a_i ... a_{j-1}`` for ``i < j``, ``a_ji = 1/a_ij``, ``a_ii = 1``."""
    a = tuple(Fraction(x) for x in a)
    if any(x == 0 for x in a):
        raise ZeroEntry(f"scaling entries must be non-zero: {[fmt(x) for x in a]}")
    n = len(a) + 1
    table = [[Fraction(1)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            table[i][j] = table[i][j - 1] * a[j - 1]
            table[j][i] = 1 / table[i][j]
    for i, j, k in itertools.product(range(n), repeat=3):
        if table[i][j] * table[j][k] != table[i][k]:  # pragma: no cover - arithmetic guarantees it
            raise AssertionError(f"cocycle fails at {(i + 1, j + 1, k + 1)}")
    return ScalingSequence(a, tuple(tuple(r) for r in table))


@dataclass(frozen=True)
class AlgebraMap:
    """Diagonal linear map: basis ``i`` goes to ``scale[i] * i``."""

    scale: tuple[Fraction, ...]
    reading: str = "uniform"

    def __call__(self, v: Mapping[int, Fraction]) -> Vec:
        return {i: c * self.scale[i] for i, c in v.items() if c * self.scale[i]}

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        return AlgebraMap(tuple(x * y for x, y in zip(self.scale, other.scale)), self.reading)

    def rescale(self, i: int, factor) -> "AlgebraMap":
        s = list(self.scale)
        s[i] *= Fraction(factor)
        return AlgebraMap(tuple(s), self.reading + "+mutated")


def _indices(label: str) -> tuple[int, int]:
    digits = label[2:].strip("{}")
    if "," in digits:
        a, b = digits.split(",")
        return int(a), int(b)
    return int(digits[0]), int(digits[1])


READINGS = ("uniform", "as-written")


def build_phi(A: LieSuperalgebra, seq: ScalingSequence, reading: str = "uniform") -> AlgebraMap:
    """Scaling map for q(n) or p(n).

    q(n): ``e_ij, f_ij -> a_ij``.  p(n): ``e_ij -> a_ij``, ``s_pq -> a_pn a_qn``,
    ``y_pq -> 1/(a_pn a_qn)``.  The ``as-written`` reading fixes every ``s_ii``
    instead of scaling it by ``a_in^2``.
    """
    if A.family not in ("p", "q"):
        raise UnsupportedFamily(f"scaling automorphisms are defined for p(n) and q(n), not {A.name}")
    if reading not in READINGS:
        raise ValueError(f"reading must be one of {READINGS}")
    n = A.params[0]
    if seq.n != n:
        raise ValueError(f"{A.name} needs {n - 1} scaling entries, got {len(seq.a)}")
    scale = []
    for lab in A.labels:
        kind = lab[0]
        i, j = _indices(lab)
        if kind in ("e", "f"):
            scale.append(seq(i, j))
        elif kind == "s":
            scale.append(Fraction(1) if reading == "as-written" and i == j else seq(i, n) * seq(j, n))
        else:
            scale.append(1 / (seq(i, n) * seq(j, n)))
    return AlgebraMap(tuple(scale), reading)


def is_automorphism(A: LieSuperalgebra, phi: AlgebraMap, max_witnesses: int = 5) -> Report:
    witnesses = []
    zero = [A.labels[i] for i, c in enumerate(phi.scale) if c == 0]
    if zero:
        witnesses.append({"indices": zero, "expected": "non-zero scale", "computed": "0"})
    checked = 0
    for i in range(A.dim):
        for j in range(i, A.dim):
            checked += 1
            lhs = phi(A.bracket_basis(i, j))
            rhs = bracket(A, phi({i: Fraction(1)}), phi({j: Fraction(1)}))
            if lhs != rhs and len(witnesses) < max_witnesses:
                witnesses.append({
                    "indices": [A.labels[i], A.labels[j]],
                    "expected": A.format(rhs),
                    "computed": A.format(lhs),
                })
    return Report("bracket-preservation", _status(witnesses), witnesses, {"pairs": checked, "reading": phi.reading})


def transport_character(A: LieSuperalgebra, phi: AlgebraMap, nil: NilpotentData, zeta: WhittakerCharacter | None = None) -> WhittakerCharacter:
    """``(zeta o phi)`` restricted to m."""
    zeta = zeta or nil.zeta
    values = {}
    for i in nil.m_basis:
        img = phi({i: Fraction(1)})
        if not nil.in_m(img):
            raise MDoesNotClose(f"phi({A.labels[i]}) leaves m")
        values[i] = zeta(img)
    return WhittakerCharacter(values=values, simple=zeta.simple)


def character_with_simple_values(A: LieSuperalgebra, nil: NilpotentData, simple_values: Sequence) -> WhittakerCharacter:
    """Character of m with ``zeta(e_{a,a+1})`` prescribed and zero elsewhere."""
    n = A.params[0]
    if len(simple_values) != n - 1:
        raise ValueError(f"need {n - 1} simple values")
    values = {i: Fraction(0) for i in nil.m_basis}
    simple = []
    for a, v in enumerate(simple_values, start=1):
        i = A.index(f"e_{{{a}{a + 1}}}" if n < 10 else f"e_{{{a},{a + 1}}}")
        values[i] = Fraction(v)
        simple.append(i)
    return WhittakerCharacter(values=values, simple=tuple(simple))


def simple_values(A: LieSuperalgebra, zeta: WhittakerCharacter) -> list[Fraction]:
    return [zeta.values[i] for i in zeta.simple]


def normalizing_sequence(A: LieSuperalgebra, zeta: WhittakerCharacter) -> ScalingSequence:
    """``a_i = 1/zeta(e_i)`` where non-zero, ``1`` otherwise."""
    return scaling_coeffs([1 / v if v else Fraction(1) for v in simple_values(A, zeta)])


def random_scalings(n: int, count: int, seed: int) -> list[ScalingSequence]:
    rng = random.Random(seed)
    return [scaling_coeffs([rng.choice(SCALING_POOL) for _ in range(n - 1)]) for _ in range(count)]
