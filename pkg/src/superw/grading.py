"""Principal sl(2)-triples, Dynkin gradings, the subalgebra m and its character.

Also holds the weight combinatorics: Weyl vectors, dot actions and the linkage
relation on gl(m|n) weights.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from superw.algebra import (
    EVEN,
    ODD,
    AlgebraError,
    LieSuperalgebra,
    bilinear_form,
    bracket,
    default_form,
)
from superw.scalars import Vec, fmt, vec_add, vec_iadd, vec_scale


class RelationCheckFailed(AlgebraError):
    pass


class NonEigenBasis(AlgebraError):
    pass


class NonIntegerEigenvalue(AlgebraError):
    pass


class NotIsotropic(AlgebraError):
    pass


class NotMaximal(AlgebraError):
    pass


class CharacterPropertyFailed(AlgebraError):
    pass


class InvalidGroupElement(ValueError):
    pass


class NonIntegralWeight(ValueError):
    pass


@dataclass(frozen=True)
class SL2Triple:
    e: Vec
    h: Vec
    f: Vec


@dataclass(frozen=True)
class ZGrading:
    degree: tuple[int, ...]

    def part(self, k: int) -> list[int]:
        return [i for i, d in enumerate(self.degree) if d == k]

    def degrees(self) -> list[int]:
        return sorted(set(self.degree))

    def degree_of(self, v: Mapping[int, Fraction]) -> int | None:
        """Degree of a homogeneous vector; None if mixed or zero."""
        ds = {self.degree[i] for i in v}
        return ds.pop() if len(ds) == 1 else None


@dataclass(frozen=True)
class WhittakerCharacter:
    """Values of a character of m on the m-basis (basis indices of the algebra)."""

    values: Mapping[int, Fraction]
    simple: tuple[int, ...] = ()  # simple even root vectors inside m

    def __call__(self, v: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for i, c in v.items():
            if i not in self.values:
                raise KeyError(f"basis index {i} is not in m")
            total += c * self.values[i]
        return total


@dataclass(frozen=True)
class NilpotentData:
    algebra: LieSuperalgebra
    grading: ZGrading
    triple: SL2Triple
    m_basis: tuple[int, ...]
    zeta: WhittakerCharacter
    lagrangian: tuple[int, ...] = ()
    raw_values: Mapping[int, Fraction] = field(default_factory=dict)

    @property
    def m_even(self) -> list[int]:
        return [i for i in self.m_basis if self.algebra.parity[i] == EVEN]

    @property
    def m_odd(self) -> list[int]:
        return [i for i in self.m_basis if self.algebra.parity[i] == ODD]

    def in_m(self, v: Mapping[int, Fraction]) -> bool:
        return all(i in self.zeta.values for i in v)


# ---------------------------------------------------------------------------
# sl(2)-triples and gradings
# ---------------------------------------------------------------------------


def _principal_block(indices: Sequence[int], entry) -> tuple[Vec, Vec, Vec]:
    """e = sum x_{a+1,a}, f = sum a(k-a) x_{a,a+1}, h = sum (2a-1-k) x_{aa} on one gl(k) block."""
    k = len(indices)
    e: Vec = {}
    f: Vec = {}
    h: Vec = {}
    for a in range(1, k + 1):
        if a < k:
            vec_iadd(e, {entry(indices[a], indices[a - 1]): Fraction(1)})
            vec_iadd(f, {entry(indices[a - 1], indices[a]): Fraction(a * (k - a))})
        vec_iadd(h, {entry(indices[a - 1], indices[a - 1]): Fraction(2 * a - 1 - k)})
    return e, h, f


def principal_sl2(A: LieSuperalgebra) -> SL2Triple:
    if A.family in ("p", "q"):
        n = A.params[0]
        big = n >= 10
        lab = (lambda a, b: f"e_{{{a},{b}}}") if big else (lambda a, b: f"e_{{{a}{b}}}")
        e, h, f = _principal_block(range(1, n + 1), lambda a, b: A.index(lab(a, b)))
    elif A.family == "gl":
        m, n = A.params
        N = m + n
        big = N >= 10
        lab = (lambda a, b: f"E_{{{a},{b}}}") if big else (lambda a, b: f"E_{{{a}{b}}}")
        entry = lambda a, b: A.index(lab(a, b))  # noqa: E731
        e0, h0, f0 = _principal_block(range(1, m + 1), entry)
        e1, h1, f1 = _principal_block(range(m + 1, N + 1), entry)
        e, h, f = vec_add(e0, e1), vec_add(h0, h1), vec_add(f0, f1)
    elif A.family in ("osp12", "osp22"):
        e, h, f = A.vec("e"), A.vec("h"), A.vec("f")
    else:  # pragma: no cover - build_algebra guards families
        raise AlgebraError(f"no principal triple for {A.family}")

    if bracket(A, h, e) != vec_scale(2, e):
        raise RelationCheckFailed("[h,e] != 2e")
    if bracket(A, h, f) != vec_scale(-2, f):
        raise RelationCheckFailed("[h,f] != -2f")
    if bracket(A, e, f) != h:
        raise RelationCheckFailed("[e,f] != h")
    return SL2Triple(e=e, h=h, f=f)


def dynkin_grading(A: LieSuperalgebra, h: Mapping[int, Fraction]) -> ZGrading:
    degree = []
    for i in range(A.dim):
        img = bracket(A, h, {i: Fraction(1)})
        if not img:
            degree.append(0)
            continue
        if set(img) != {i}:
            raise NonEigenBasis(f"{A.labels[i]} is not an ad(h)-eigenvector: [h, x] = {A.format(img)}")
        ev = img[i]
        if ev.denominator != 1:
            raise NonIntegerEigenvalue(f"ad(h) eigenvalue {ev} on {A.labels[i]}")
        degree.append(int(ev))
    grading = ZGrading(tuple(degree))
    for i, j in itertools.product(range(A.dim), repeat=2):
        b = A.bracket_basis(i, j)
        if b and grading.degree_of(b) != degree[i] + degree[j]:
            raise AlgebraError(f"[g({degree[i]}), g({degree[j]})] not in g({degree[i] + degree[j]})")
    return grading


# ---------------------------------------------------------------------------
# m and zeta
# ---------------------------------------------------------------------------

_DEFAULT_LAGRANGIAN = {("gl", (1, 2)): ("E_13",), ("osp22", ()): ("X",)}


def _chi_pairing(A: LieSuperalgebra, e: Vec, x: int, y: int) -> Fraction:
    kind = default_form(A)
    return bilinear_form(A, kind, e, bracket(A, {x: Fraction(1)}, {y: Fraction(1)}))


def _greedy_lagrangian(A: LieSuperalgebra, e: Vec, g_minus1: Sequence[int]) -> list[int]:
    chosen: list[int] = []
    for x in g_minus1:
        if all(_chi_pairing(A, e, x, y) == 0 for y in chosen + [x]):
            chosen.append(x)
    return chosen


def build_m_and_zeta(
    A: LieSuperalgebra,
    grading: ZGrading | None = None,
    triple: SL2Triple | None = None,
    lagrangian: Sequence[int | str] | None = None,
    normalize: bool = True,
) -> NilpotentData:
    """Nilpotent subalgebra ``m`` and Whittaker character for the principal grading.

    ``m`` is the sum of the ``g(i)`` with ``i <= -2`` plus a Lagrangian subspace
    of ``g(-1)`` for the chi-form ``(x, y) -> (e | [x, y])``.  The raw character
    is ``x -> (e | x)`` with the designated form, zero on odd elements.  With
    ``normalize`` the diagonal scaling automorphism is applied so that the
    simple root vectors take value 1.
    """
    triple = triple or principal_sl2(A)
    grading = grading or dynkin_grading(A, triple.h)
    e = triple.e
    g_minus1 = grading.part(-1)

    if g_minus1:
        if lagrangian is None:
            default = _DEFAULT_LAGRANGIAN.get((A.family, A.params))
            lag = [A.index(x) for x in default] if default else _greedy_lagrangian(A, e, g_minus1)
        else:
            lag = [A.index(x) if isinstance(x, str) else int(x) for x in lagrangian]
        for x in lag:
            if x not in g_minus1:
                raise NotIsotropic(f"{A.labels[x]} is not in g(-1)")
        for x, y in itertools.combinations_with_replacement(lag, 2):
            if _chi_pairing(A, e, x, y) != 0:
                raise NotIsotropic(f"chi([{A.labels[x]}, {A.labels[y]}]) != 0")
        if len(lag) < len(g_minus1) // 2:
            raise NotMaximal(f"isotropic subspace of dim {len(lag)} in g(-1) of dim {len(g_minus1)}")
    else:
        if lagrangian:
            raise NotIsotropic("g(-1) = 0, no Lagrangian subspace to choose")
        lag = []

    m_basis = tuple(sorted([i for i, d in enumerate(grading.degree) if d <= -2] + lag))
    kind = default_form(A)
    raw: dict[int, Fraction] = {}
    for i in m_basis:
        raw[i] = bilinear_form(A, kind, e, {i: Fraction(1)}) if A.parity[i] == EVEN else Fraction(0)

    simple = tuple(i for i in m_basis if A.parity[i] == EVEN and grading.degree[i] == -2)
    values = dict(raw)
    if normalize:
        for i in simple:
            if values[i] != 0:
                values[i] = Fraction(1)
    zeta = WhittakerCharacter(values=values, simple=simple)

    for x, y in itertools.product(m_basis, repeat=2):
        b = bracket(A, {x: Fraction(1)}, {y: Fraction(1)})
        if not all(k in values for k in b):
            raise CharacterPropertyFailed(f"[{A.labels[x]}, {A.labels[y]}] leaves m")
        if zeta(b) != 0:
            raise CharacterPropertyFailed(f"zeta([{A.labels[x]}, {A.labels[y]}]) = {zeta(b)}")
    return NilpotentData(
        algebra=A,
        grading=grading,
        triple=triple,
        m_basis=m_basis,
        zeta=zeta,
        lagrangian=tuple(lag),
        raw_values=raw,
    )


def is_nonsingular(A: LieSuperalgebra, zeta: WhittakerCharacter) -> bool:
    if not zeta.simple:
        return False
    return all(zeta.values.get(i, 0) != 0 for i in zeta.simple)


def chi_form_matrix(nil: NilpotentData) -> list[list[Fraction]]:
    """Gram matrix of ``(x, y) -> (e | [x, y])`` on the basis of g(-1)."""
    A = nil.algebra
    part = nil.grading.part(-1)
    return [[_chi_pairing(A, nil.triple.e, x, y) for y in part] for x in part]


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

Weight = tuple  # tuple[Fraction, ...] in the epsilon/delta coordinates of the Cartan basis


def weight_rank(A: LieSuperalgebra) -> int:
    return len(A.cartan)


def _gl_rho_even(k: int) -> list[Fraction]:
    return [Fraction(k - 1, 2) - i for i in range(k)]


def rho_even(A: LieSuperalgebra) -> tuple[Fraction, ...]:
    """Half-sum of positive even roots for the fixed standard Borel."""
    if A.family == "gl":
        m, n = A.params
        return tuple(_gl_rho_even(m) + _gl_rho_even(n))
    if A.family in ("p", "q"):
        return tuple(_gl_rho_even(A.params[0]))
    if A.family == "osp12":
        return (Fraction(-1),)
    return (Fraction(0), Fraction(-1))  # osp(2|2), coordinates (h', h)


def rho(A: LieSuperalgebra) -> tuple[Fraction, ...]:
    """``rho_even - rho_odd`` for gl(m|n) and the osp examples."""
    r0 = list(rho_even(A))
    if A.family == "gl":
        m, n = A.params
        for i in range(m):
            for j in range(m, m + n):
                r0[i] -= Fraction(1, 2)
                r0[j] += Fraction(1, 2)
        return tuple(r0)
    if A.family == "osp12":
        return (Fraction(-1, 2),)
    if A.family == "osp22":
        return (Fraction(-1), Fraction(-1))
    raise AlgebraError(f"rho is only implemented for gl and osp families, not {A.name}")


def parse_weyl(text: str) -> tuple[int, ...]:
    """Signed one-line notation, e.g. ``"2,1,3"`` or ``"1,-2"``."""
    try:
        w = tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError as exc:
        raise InvalidGroupElement(f"cannot parse Weyl group element {text!r}") from exc
    if sorted(abs(x) for x in w) != list(range(1, len(w) + 1)):
        raise InvalidGroupElement(f"{text!r} is not a signed permutation")
    return w


def validate_weyl(A: LieSuperalgebra, w: Sequence[int]) -> None:
    r = weight_rank(A)
    if len(w) != r or sorted(abs(x) for x in w) != list(range(1, r + 1)):
        raise InvalidGroupElement(f"{tuple(w)} is not a permutation of 1..{r}")
    if A.family in ("gl", "p", "q"):
        if any(x < 0 for x in w):
            raise InvalidGroupElement("sign changes are not in a symmetric group")
        if A.family == "gl":
            m = A.params[0]
            if any((i < m) != (w[i] <= m) for i in range(r)):
                raise InvalidGroupElement(f"{tuple(w)} mixes the even blocks of gl(m|n)")
    elif A.family == "osp22" and w[0] != 1:
        raise InvalidGroupElement("the Weyl group of osp(2|2) only acts on the h-coordinate")


def weyl_apply(w: Sequence[int], lam: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """``(w lam)_i = sign(w_i) * lam_{|w_i|}``."""
    if len(w) != len(lam):
        raise InvalidGroupElement("group element and weight have different lengths")
    return tuple(Fraction(lam[abs(x) - 1]) * (1 if x > 0 else -1) for x in w)


def dot_action(w: Sequence[int], lam: Sequence[Fraction], shift: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """``w . lam = w(lam + shift) - shift``; pass ``rho_even(A)`` or ``rho(A)`` as the shift."""
    moved = weyl_apply(w, [Fraction(a) + Fraction(b) for a, b in zip(lam, shift)])
    return tuple(a - Fraction(b) for a, b in zip(moved, shift))


def weyl_group(A: LieSuperalgebra) -> list[tuple[int, ...]]:
    r = weight_rank(A)
    if A.family == "gl":
        m, n = A.params
        return [tuple(p) + tuple(q) for p in itertools.permutations(range(1, m + 1)) for q in itertools.permutations(range(m + 1, m + n + 1))]
    if A.family in ("p", "q"):
        return list(itertools.permutations(range(1, r + 1)))
    if A.family == "osp12":
        return [(1,), (-1,)]
    return [(1, 2), (1, -2)]


@dataclass(frozen=True)
class LinkageWitness:
    roots: tuple[tuple[int, int], ...]  # (i, j): alpha = eps_i - eps_j, 1-based, i <= m < j
    shifts: tuple[int, ...]
    w: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "roots": [f"eps_{i}-eps_{j}" for i, j in self.roots],
            "shifts": list(self.shifts),
            "w": list(self.w),
        }


def gl_pairing(m: int, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    """Form induced by the supertrace: eps_i orthonormal, signature (+)^m (-)^n."""
    return sum((a * b * (1 if i < m else -1) for i, (a, b) in enumerate(zip(x, y))), Fraction(0))


def linkage_gl(
    m: int,
    n: int,
    lam: Sequence[Fraction],
    mu: Sequence[Fraction],
    bound: int = 10,
) -> LinkageWitness | None:
    """Search for ``mu + rho = w(lam + rho - sum c_i alpha_i)`` with orthogonal odd roots
    ``alpha_i`` satisfying ``<lam + rho, alpha_i> = 0`` and ``|c_i| <= bound``.

    Returns a witness when one exists, else None.
    """
    lam = tuple(Fraction(x) for x in lam)
    mu = tuple(Fraction(x) for x in mu)
    if len(lam) != m + n or len(mu) != m + n:
        raise ValueError(f"weights of gl({m}|{n}) have {m + n} coordinates")
    if any(x.denominator != 1 for x in lam + mu):
        raise NonIntegralWeight("linkage search needs integral weights")
    A = _GLShape(m, n)
    r = rho(A)  # type: ignore[arg-type]
    lr = [a + b for a, b in zip(lam, r)]
    target = [a + b for a, b in zip(mu, r)]
    tgt_even, tgt_odd = sorted(target[:m]), sorted(target[m:])

    # odd roots eps_i - eps_j (i even index, j odd index) orthogonal to lam + rho
    candidates = [(i, j) for i in range(m) for j in range(m, m + n) if lr[i] + lr[j] == 0]
    for ell in range(0, min(m, n) + 1):
        for roots in itertools.combinations(candidates, ell):
            if len({i for i, _ in roots}) < ell or len({j for _, j in roots}) < ell:
                continue
            for shifts in itertools.product(range(-bound, bound + 1), repeat=ell):
                nu = list(lr)
                for (i, j), c in zip(roots, shifts):
                    nu[i] -= c
                    nu[j] += c
                if sorted(nu[:m]) == tgt_even and sorted(nu[m:]) == tgt_odd:
                    w = _matching_permutation(nu, target, m)
                    return LinkageWitness(tuple((i + 1, j + 1) for i, j in roots), tuple(shifts), w)
    return None


def _matching_permutation(nu: Sequence[Fraction], target: Sequence[Fraction], m: int) -> tuple[int, ...]:
    """One-line ``w`` with ``weyl_apply(w, nu) == target`` that preserves the two blocks."""
    w = [0] * len(nu)
    used: set[int] = set()
    for i, t in enumerate(target):
        block = range(0, m) if i < m else range(m, len(nu))
        for k in block:
            if k not in used and nu[k] == t:
                w[i] = k + 1
                used.add(k)
                break
    return tuple(w)


class _GLShape:
    """Minimal stand-in so ``rho`` can be evaluated without building the algebra."""

    family = "gl"

    def __init__(self, m: int, n: int):
        self.params = (m, n)
        self.name = f"gl({m}|{n})"


def typical_gl(m: int, n: int, lam: Sequence[Fraction]) -> bool:
    r = rho(_GLShape(m, n))  # type: ignore[arg-type]
    lr = [Fraction(a) + b for a, b in zip(lam, r)]
    return all(lr[i] + lr[j] != 0 for i in range(m) for j in range(m, m + n))


def weight_on(A: LieSuperalgebra, lam: Sequence[Fraction], v: Mapping[int, Fraction]) -> Fraction:
    """``lam(v)`` for ``v`` in the span of the Cartan basis."""
    pos = {c: k for k, c in enumerate(A.cartan)}
    total = Fraction(0)
    for i, c in v.items():
        if i not in pos:
            raise ValueError(f"{A.labels[i]} is not a Cartan basis element")
        total += c * Fraction(lam[pos[i]])
    return total


def zeta_json(nil: NilpotentData) -> dict:
    A = nil.algebra
    return {A.labels[i]: fmt(nil.zeta.values[i]) for i in nil.m_basis}


