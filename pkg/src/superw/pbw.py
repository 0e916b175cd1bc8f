"""Universal enveloping algebra arithmetic in a PBW basis.

A monomial is a tuple of basis indices, non-decreasing in the chosen order,
with every odd index appearing at most once.  Elements are sparse dicts
``{monomial: Fraction}``; the empty tuple is 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from superw.algebra import AlgebraError, LieSuperalgebra
from superw.scalars import fmt

Monomial = tuple
Element = dict  # {Monomial: Fraction}


class AlgebraMismatch(AlgebraError):
    pass


def _iadd(target: Element, src: Mapping[Monomial, Fraction], c: Fraction = Fraction(1)) -> Element:
    for mono, x in src.items():
        s = target.get(mono, 0) + c * x
        if s:
            target[mono] = s
        else:
            target.pop(mono, None)
    return target


class Enveloping:
    """``U(g)`` for a fixed algebra and a fixed total order of its basis.

    ``order`` lists every basis index once; earlier means further left in a
    normal-ordered monomial.  Products are memoized per instance.
    """

    def __init__(self, A: LieSuperalgebra, order: Sequence[int] | None = None):
        order = list(range(A.dim)) if order is None else list(order)
        if sorted(order) != list(range(A.dim)):
            raise ValueError("order must be a permutation of the basis indices")
        self.A = A
        self.order = tuple(order)
        self.rank = {b: r for r, b in enumerate(order)}
        self._mul_letter = lru_cache(maxsize=None)(self._mul_letter_uncached)

    # -- construction -------------------------------------------------------

    def one(self) -> Element:
        return {(): Fraction(1)}

    def letter(self, i: int) -> Element:
        return {(i,): Fraction(1)}

    def from_vector(self, v: Mapping[int, Fraction]) -> Element:
        return {(i,): Fraction(c) for i, c in v.items() if c}

    def scalar(self, c) -> Element:
        return {(): Fraction(c)} if c else {}

    def is_normal(self, mono: Monomial) -> bool:
        for a, b in zip(mono, mono[1:]):
            if self.rank[a] > self.rank[b] or (a == b and self.A.parity[a]):
                return False
        return True

    # -- products -----------------------------------------------------------

    def _mul_letter_uncached(self, mono: Monomial, x: int) -> Element:
        """Normal form of ``mono * x``."""
        if not mono:
            return {(x,): Fraction(1)}
        last = mono[-1]
        rl, rx = self.rank[last], self.rank[x]
        if rl < rx or (last == x and not self.A.parity[x]):
            return {mono + (x,): Fraction(1)}
        prefix = mono[:-1]
        if last == x:  # odd square: x^2 = 1/2 [x, x]
            half = {k: c / 2 for k, c in self.A.bracket_basis(x, x).items()}
            return self.mul_vector(prefix, half)
        # last * x = sign * x * last + [last, x]
        sign = -1 if self.A.parity[last] and self.A.parity[x] else 1
        out: Element = {}
        for m, c in self._mul_letter(prefix, x).items():
            _iadd(out, self._mul_letter(m, last), sign * c)
        _iadd(out, self.mul_vector(prefix, self.A.bracket_basis(last, x)))
        return out

    def mul_vector(self, mono: Monomial, v: Mapping[int, Fraction]) -> Element:
        out: Element = {}
        for i, c in v.items():
            _iadd(out, self._mul_letter(mono, i), c)
        return out

    def right_letter(self, u: Mapping[Monomial, Fraction], x: int) -> Element:
        out: Element = {}
        for mono, c in u.items():
            _iadd(out, self._mul_letter(mono, x), c)
        return out

    def multiply(self, u: Mapping[Monomial, Fraction], v: Mapping[Monomial, Fraction]) -> Element:
        out: Element = {}
        for mono, c in v.items():
            part = dict(u)
            for x in mono:
                part = self.right_letter(part, x)
            _iadd(out, part, c)
        return out

    def product(self, *factors: Mapping[Monomial, Fraction]) -> Element:
        out = self.one()
        for f in factors:
            out = self.multiply(out, f)
        return out

    def normal_order(self, word: Iterable[int]) -> Element:
        out = self.one()
        for x in word:
            out = self.right_letter(out, x)
        return out

    def normalize(self, u: Mapping[Monomial, Fraction]) -> Element:
        """Normal form of an arbitrary linear combination of words."""
        out: Element = {}
        for word, c in u.items():
            _iadd(out, self.normal_order(word), c)
        return out

    def power(self, u: Mapping[Monomial, Fraction], k: int) -> Element:
        out = self.one()
        for _ in range(k):
            out = self.multiply(out, u)
        return out

    # -- linear structure ---------------------------------------------------

    @staticmethod
    def add(*terms: Mapping[Monomial, Fraction], coeffs: Sequence | None = None) -> Element:
        out: Element = {}
        coeffs = coeffs or [1] * len(terms)
        for t, c in zip(terms, coeffs):
            _iadd(out, t, Fraction(c))
        return out

    def parity(self, mono: Monomial) -> int:
        return sum(self.A.parity[i] for i in mono) % 2

    def element_parity(self, u: Mapping[Monomial, Fraction]) -> int | None:
        ps = {self.parity(m) for m in u}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    @staticmethod
    def degree(u: Mapping[Monomial, Fraction]) -> int:
        return max((len(m) for m in u), default=0)

    def adjoint_act(self, x: int, u: Mapping[Monomial, Fraction]) -> Element:
        """``[x, u]``, extended to each monomial as a super-commutator."""
        px = self.A.parity[x]
        out: Element = {}
        for mono, c in u.items():
            sign = -1 if px and self.parity(mono) else 1
            xu = self.multiply(self.letter(x), {mono: Fraction(1)})
            ux = self._mul_letter(mono, x)
            _iadd(out, xu, c)
            _iadd(out, ux, -sign * c)
        return out

    def check_same(self, other: "Enveloping") -> None:
        if other.A is not self.A and other.A.labels != self.A.labels:
            raise AlgebraMismatch(f"{self.A.name} vs {other.A.name}")

    # -- output -------------------------------------------------------------

    def factors(self, mono: Monomial) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        for i in mono:
            if out and out[-1][0] == i:
                out[-1] = (i, out[-1][1] + 1)
            else:
                out.append((i, 1))
        return out

    def sort_key(self, mono: Monomial):
        return (len(mono), [self.rank[i] for i in mono])

    def to_json(self, u: Mapping[Monomial, Fraction]) -> list:
        return [
            [[[self.A.labels[i], e] for i, e in self.factors(m)], fmt(u[m])]
            for m in sorted(u, key=self.sort_key)
        ]

    def format(self, u: Mapping[Monomial, Fraction]) -> str:
        if not u:
            return "0"
        parts = []
        for m in sorted(u, key=self.sort_key):
            word = "".join(self.A.labels[i] + (f"^{e}" if e > 1 else "") for i, e in self.factors(m)) or "1"
            parts.append(f"{u[m]}*{word}")
        return " + ".join(parts)
