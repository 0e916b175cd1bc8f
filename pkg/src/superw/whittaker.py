"""Concrete modules and exact Whittaker-vector solving.

Three kinds of module live here:

* ``InducedModule``: ``U(g)`` tensored over a subalgebra with a one-dimensional
  character.  Covers ``Q_zeta`` (subalgebra ``m``) and Verma modules.
* ``KostantCore``: the rank-one Whittaker model for ``sl(2)`` plus central
  elements, with basis ``h^k v``.
* ``TypeIModule``: exterior odd factors tensored with a Kostant core.
"""

from __future__ import annotations

import itertools
from math import comb
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from superw.algebra import AlgebraError, LieSuperalgebra
from superw.grading import NilpotentData, SL2Triple, build_m_and_zeta, principal_sl2
from superw.linalg import nullspace, rank, solve_unique
from superw.pbw import Element, Enveloping, Monomial, _iadd
from superw.scalars import fmt


class TruncationOverflow(AlgebraError):
    pass


class SingularWeight(ValueError):
    pass


class UnstableTruncation(Warning):
    pass


# ---------------------------------------------------------------------------
# induced modules
# ---------------------------------------------------------------------------


class InducedModule:
    """``U(g) (x)_{U(s)} C_chi`` for a subalgebra ``s`` spanned by basis elements.

    Vectors are ``Element``s whose monomials avoid ``s``; the generator is ``()``.
    """

    def __init__(
        self,
        A: LieSuperalgebra,
        sub: Sequence[int],
        chi: Mapping[int, Fraction],
        complement_order: Sequence[int] | None = None,
    ):
        sub = list(sub)
        rest = [i for i in range(A.dim) if i not in set(sub)]
        if complement_order is not None:
            if sorted(complement_order) != sorted(rest):
                raise ValueError("complement_order must list exactly the basis outside the subalgebra")
            rest = list(complement_order)
        self.A = A
        self.sub = frozenset(sub)
        self.chi = {i: Fraction(chi.get(i, 0)) for i in sub}
        self.U = Enveloping(A, rest + sub)

    def reduce(self, u: Mapping[Monomial, Fraction]) -> Element:
        """Image of ``u * 1`` for a normal-ordered ``u``."""
        out: Element = {}
        for mono, c in u.items():
            cut = len(mono)
            while cut and mono[cut - 1] in self.sub:
                cut -= 1
            for i in mono[cut:]:
                c = c * self.chi[i]
                if not c:
                    break
            if c:
                _iadd(out, {mono[:cut]: c})
        return out

    def act_letter(self, x: int, vec: Mapping[Monomial, Fraction]) -> Element:
        return self.reduce(self.U.multiply(self.U.letter(x), vec))

    def act(self, x: Mapping[int, Fraction], vec: Mapping[Monomial, Fraction]) -> Element:
        out: Element = {}
        for i, c in x.items():
            _iadd(out, self.act_letter(i, vec), c)
        return out

    def act_word(self, word: Sequence[int], vec: Mapping[Monomial, Fraction]) -> Element:
        """``x_1 ... x_r . vec`` (rightmost letter first)."""
        for x in reversed(word):
            vec = self.act_letter(x, vec)
        return vec

    def generator(self) -> Element:
        return {(): Fraction(1)}


def q_module(nil: NilpotentData) -> InducedModule:
    """``Q_zeta``: complement ordered by degree (negative, zero, positive), ``m`` last."""
    A = nil.algebra
    m = set(nil.m_basis)
    comp = sorted((i for i in range(A.dim) if i not in m), key=lambda i: (nil.grading.degree[i], i))
    return InducedModule(A, list(nil.m_basis), nil.zeta.values, comp)


def reduce_in_Q(Q: InducedModule, u: Mapping[Monomial, Fraction]) -> Element:
    return Q.reduce(Q.U.normalize(u))


def osp12_verma(lam_h: Fraction) -> InducedModule:
    from superw.algebra import build_algebra

    A = build_algebra("osp12")
    e, f, h, E, F = (A.index(x) for x in ("e", "f", "h", "E", "F"))
    return InducedModule(A, [h, f, F], {h: Fraction(lam_h)}, [E, e])


# ---------------------------------------------------------------------------
# rank-one Kostant core
# ---------------------------------------------------------------------------

Poly = dict  # {k: coeff} for sum coeff * h^k v


def _poly_add(*ps: Mapping[int, Fraction], coeffs: Sequence | None = None) -> Poly:
    out: Poly = {}
    coeffs = coeffs or [1] * len(ps)
    for p, c in zip(ps, coeffs):
        for k, x in p.items():
            s = out.get(k, 0) + Fraction(c) * x
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _poly_mul(p: Mapping[int, Fraction], q: Mapping[int, Fraction]) -> Poly:
    out: Poly = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _poly_shift(p: Mapping[int, Fraction], s: Fraction) -> Poly:
    """``q(h) -> q(h + s)``."""
    out: Poly = {}
    for k, c in p.items():
        for j in range(k + 1):
            coeff = c * comb(k, j) * Fraction(s) ** (k - j)
            out[j] = out.get(j, 0) + coeff
    return {k: v for k, v in out.items() if v}


@dataclass
class KostantCore:
    """Whittaker model ``C[h] v`` for ``sl(2) + center`` with ``f v = v``.

    Rules (derived from ``[h,f] = -2f`` and the Casimir ``h^2 - 2h + 4ef``):
      ``f . q(h) v = q(h+2) v``
      ``e . q(h) v = q(h-2) (gamma - h^2 + 2h)/4 v``
    """

    gamma: Fraction
    central: Mapping[str, Fraction] = field(default_factory=dict)

    def h(self, p: Poly) -> Poly:
        return {k + 1: c for k, c in p.items()}

    def f(self, p: Poly) -> Poly:
        return _poly_shift(p, 2)

    def e(self, p: Poly) -> Poly:
        g = {0: self.gamma / 4, 1: Fraction(1, 2), 2: Fraction(-1, 4)}
        return _poly_mul(_poly_shift(p, -2), {k: v for k, v in g.items() if v})

    def casimir(self, p: Poly) -> Poly:
        """``h^2 + 2h + 4fe`` applied to ``p``."""
        return _poly_add(self.h(self.h(p)), self.h(p), self.f(self.e(p)), coeffs=[1, 2, 4])


def gamma_from_t(t: Fraction) -> Fraction:
    """Casimir scalar ``t^2 - 2t = (t-1)^2 - 1`` for ``lambda(h) = t``."""
    t = Fraction(t)
    return (t - 1) ** 2 - 1


def casimir_scalar(lam: Sequence[Fraction]) -> Fraction:
    """osp(2|2) core with ``lam = (lambda_1, lambda_2)``: ``(lambda_2 - 1)^2 - 1``."""
    return gamma_from_t(Fraction(lam[1]))


def typicality_osp22(lam: Sequence[Fraction]) -> bool:
    l1, l2 = Fraction(lam[0]), Fraction(lam[1])
    return (l1 - l2) * (l1 + l2 - 2) != 0


# ---------------------------------------------------------------------------
# type-I modules
# ---------------------------------------------------------------------------

ModVec = dict  # {(odd subset tuple, k): coeff}


@dataclass(frozen=True)
class TypeISetup:
    odd_factors: tuple[str, ...]
    annihilator: tuple[str, ...]
    central: tuple[tuple[Mapping[str, int], Callable], ...]  # (vector, lam -> scalar)
    t: Callable


_SETUPS = {
    ("gl", (1, 2)): TypeISetup(
        odd_factors=("E_21", "E_31"),
        annihilator=("E_12", "E_13"),
        central=(({"E_11": 1}, lambda l: l[0]), ({"E_22": 1, "E_33": 1}, lambda l: l[1] + l[2])),
        t=lambda l: l[2] - l[1],
    ),
    ("osp22", ()): TypeISetup(
        odd_factors=("V", "U"),
        annihilator=("X", "Y"),
        central=(({"h'": 1}, lambda l: l[0]),),
        t=lambda l: l[1],
    ),
    ("p", (2,)): TypeISetup(
        odd_factors=("y_12",),
        annihilator=("s_11", "s_12", "s_22"),
        central=(({"e_11": 1, "e_22": 1}, lambda l: l[0] + l[1]),),
        t=lambda l: l[1] - l[0],
    ),
}


class TypeIModule:
    """Induced from ``g_even + ann`` acting on a Kostant core; ``ann`` kills the core.

    Basis vectors ``(S, k)`` stand for ``w_S h^k v`` with ``w_S`` the ordered product
    of the odd factors in ``S``.
    """

    def __init__(self, A: LieSuperalgebra, lam: Sequence[Fraction], triple: SL2Triple | None = None):
        key = (A.family, A.params)
        if key not in _SETUPS:
            raise AlgebraError(f"no type-I Whittaker model for {A.name}")
        setup = _SETUPS[key]
        self.A = A
        self.lam = tuple(Fraction(x) for x in lam)
        if len(self.lam) != len(A.cartan):
            raise ValueError(f"{A.name} weights have {len(A.cartan)} coordinates")
        self.triple = triple or principal_sl2(A)
        self.odd = tuple(A.index(x) for x in setup.odd_factors)
        self.ann = tuple(A.index(x) for x in setup.annihilator)
        even = A.even_basis()
        self.U = Enveloping(A, list(self.odd) + even + list(self.ann))
        self.t = Fraction(setup.t(self.lam))
        self.core = KostantCore(gamma_from_t(self.t))

        # decompose every even basis element over e, f, h and the central elements
        cols = [self.triple.e, self.triple.f, self.triple.h]
        scalars = []
        for vec, fn in setup.central:
            cols.append(A.vec(vec))
            scalars.append(Fraction(fn(self.lam)))
        self._central_scalars = scalars
        self._decomp = {}
        for i in even:
            coeffs = solve_unique([_dense(c, A.dim) for c in cols], _dense({i: Fraction(1)}, A.dim))
            if coeffs is None:
                raise AlgebraError(f"{A.labels[i]} is outside span(e, f, h, center)")
            self._decomp[i] = coeffs

    # core action of one even basis element on a polynomial
    def _even_on_core(self, i: int, p: Poly) -> Poly:
        ce, cf, ch, *cz = self._decomp[i]
        parts, coeffs = [], []
        if ce:
            parts.append(self.core.e(p)), coeffs.append(ce)
        if cf:
            parts.append(self.core.f(p)), coeffs.append(cf)
        if ch:
            parts.append(self.core.h(p)), coeffs.append(ch)
        z = sum((c * s for c, s in zip(cz, self._central_scalars)), Fraction(0))
        if z:
            parts.append(p), coeffs.append(z)
        return _poly_add(*parts, coeffs=coeffs)

    def act_letter(self, x: int, vec: Mapping, max_degree: int | None = None) -> ModVec:
        out: ModVec = {}
        odd = set(self.odd)
        ann = set(self.ann)
        for (S, k), c in vec.items():
            prod = self.U.multiply(self.U.letter(x), {tuple(S): Fraction(1)})
            for mono, d in prod.items():
                if any(i in ann for i in mono):
                    continue
                cut = 0
                while cut < len(mono) and mono[cut] in odd:
                    cut += 1
                p: Poly = {k: c * d}
                for i in reversed(mono[cut:]):
                    p = self._even_on_core(i, p)
                for j, val in p.items():
                    if max_degree is not None and j > max_degree:
                        raise TruncationOverflow(f"h^{j} exceeds truncation {max_degree}")
                    key = (mono[:cut], j)
                    s = out.get(key, 0) + val
                    if s:
                        out[key] = s
                    else:
                        out.pop(key, None)
        return out

    def act(self, x: Mapping[int, Fraction], vec: Mapping, max_degree: int | None = None) -> ModVec:
        out: ModVec = {}
        for i, c in x.items():
            for key, val in self.act_letter(i, vec, max_degree).items():
                s = out.get(key, 0) + c * val
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return out

    def act_word(self, word: Sequence[int], vec: Mapping) -> ModVec:
        for x in reversed(word):
            vec = self.act_letter(x, vec)
        return vec

    def basis(self, K: int) -> list[tuple[tuple[int, ...], int]]:
        subsets = [S for r in range(len(self.odd) + 1) for S in itertools.combinations(self.odd, r)]
        return [(S, k) for S in subsets for k in range(K + 1)]

    def vector(self, terms: Mapping[tuple[Sequence[str], int], Fraction]) -> ModVec:
        """Build a vector from ``{(("E_21",), k): c}`` style keys."""
        out: ModVec = {}
        for (labels, k), c in terms.items():
            S = tuple(sorted((self.A.index(x) for x in labels), key=self.odd.index))
            out[(S, k)] = out.get((S, k), 0) + Fraction(c)
        return {k: v for k, v in out.items() if v}

    def label(self, key) -> str:
        S, k = key
        word = "".join(self.A.labels[i] for i in S)
        return word + ("" if k == 0 else "h" if k == 1 else f"h^{k}") + "v"

    def to_json(self, vec: Mapping) -> list:
        keys = sorted(vec, key=lambda key: (len(key[0]), [self.odd.index(i) for i in key[0]], key[1]))
        return [[self.label(k), fmt(vec[k])] for k in keys]


def _dense(v: Mapping[int, Fraction], n: int) -> list[Fraction]:
    return [Fraction(v.get(i, 0)) for i in range(n)]


# ---------------------------------------------------------------------------
# the solver
# ---------------------------------------------------------------------------


@dataclass
class WhittakerResult:
    dimension: int
    stable: bool
    basis: list[ModVec]
    checks: list[dict]
    module: TypeIModule

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "stable": self.stable,
            "basis": [self.module.to_json(v) for v in self.basis],
            "checks": self.checks,
        }


def _solve(module: TypeIModule, generators: Sequence[tuple[int, Fraction]], K: int) -> list[ModVec]:
    domain = module.basis(K)
    images = []
    for b in domain:
        img: ModVec = {}
        for x, z in generators:
            for key, val in module.act_letter(x, {b: Fraction(1)}).items():
                img[(x, key)] = img.get((x, key), 0) + val
            if z:
                img[(x, b)] = img.get((x, b), 0) - z
        images.append({k: v for k, v in img.items() if v})
    rows_keys = sorted({k for img in images for k in img}, key=repr)
    pos = {k: r for r, k in enumerate(rows_keys)}
    matrix = [[Fraction(0)] * len(domain) for _ in rows_keys]
    for col, img in enumerate(images):
        for k, v in img.items():
            matrix[pos[k]][col] = v
    null = nullspace(matrix, len(domain)) if rows_keys else [
        [Fraction(int(i == j)) for i in range(len(domain))] for j in range(len(domain))
    ]
    return [{domain[i]: c for i, c in enumerate(vec) if c} for vec in null]


def whittaker_vectors(
    module: TypeIModule,
    nil: NilpotentData,
    even_only: bool = False,
    K: int = 12,
) -> WhittakerResult:
    """Exact basis of ``{w : (x - zeta(x)) w = 0}`` over the m-basis (or its even part)."""
    gens = [(x, nil.zeta.values[x]) for x in (nil.m_even if even_only else nil.m_basis)]
    basis = _solve(module, gens, K)
    bigger = _solve(module, gens, K + 1)
    stable = len(bigger) == len(basis)
    # re-verify against the action
    failures = []
    for w in basis:
        for x, z in gens:
            res = module.act({x: Fraction(1)}, w)
            for key, val in w.items():
                res[key] = res.get(key, 0) - z * val
            if any(res.values()):
                failures.append({"indices": [module.A.labels[x]], "expected": "0", "computed": module.to_json(res)})
    checks = [
        {"check": "whittaker-equations", "status": "pass" if not failures else "fail", "witnesses": failures},
        {
            "check": "truncation-stability",
            "status": "pass" if stable else "warn",
            "witnesses": [] if stable else [{"indices": [K, K + 1], "expected": str(len(basis)), "computed": str(len(bigger))}],
        },
    ]
    return WhittakerResult(len(basis), stable, basis, checks, module)


def same_span(vectors: Sequence[Mapping], others: Sequence[Mapping]) -> bool:
    keys = sorted({k for v in list(vectors) + list(others) for k in v}, key=repr)
    rows_a = [[Fraction(v.get(k, 0)) for k in keys] for v in vectors]
    rows_b = [[Fraction(v.get(k, 0)) for k in keys] for v in others]
    ra, rb = rank(rows_a, len(keys)), rank(rows_b, len(keys))
    return ra == rb == rank(rows_a + rows_b, len(keys))


def in_span(vector: Mapping, vectors: Sequence[Mapping]) -> bool:
    keys = sorted({k for v in list(vectors) + [vector] for k in v}, key=repr)
    rows = [[Fraction(v.get(k, 0)) for k in keys] for v in vectors]
    return rank(rows, len(keys)) == rank(rows + [[Fraction(vector.get(k, 0)) for k in keys]], len(keys))


# ---------------------------------------------------------------------------
# osp(1|2) series
# ---------------------------------------------------------------------------


def osp12_series_coefficients(lam_h: Fraction, K: int) -> list[Fraction]:
    lam_h = Fraction(lam_h)
    coeffs = [Fraction(1)]
    for k in range(K):
        denom = (k + 1) * (k + lam_h)
        if denom == 0:
            raise SingularWeight(f"lambda(h) = {lam_h} is a pole of the recursion at k = {k}")
        coeffs.append(-coeffs[-1] / denom)
    return coeffs


@dataclass
class SeriesResult:
    coefficients: list[Fraction]
    checks: list[dict]
    f_image: Element
    F_image: Element

    def to_json(self) -> dict:
        return {"coefficients": [fmt(c) for c in self.coefficients], "checks": self.checks}


def osp12_whittaker_series(lam_h: Fraction, K: int) -> SeriesResult:
    """Truncated ``w = sum a_k e^k v`` in the Verma module with ``f w = w`` below degree ``K``."""
    lam_h = Fraction(lam_h)
    if lam_h.denominator == 1 and lam_h <= 0:
        raise SingularWeight(f"lambda(h) = {lam_h} lies in Z_{{<=0}}")
    a = osp12_series_coefficients(lam_h, K)
    M = osp12_verma(lam_h)
    A = M.A
    e, f, F = A.index("e"), A.index("f"), A.index("F")
    w = {(e,) * k: c for k, c in enumerate(a) if c}
    fw = M.act_letter(f, w)
    Fw = M.act_letter(F, w)
    bad = []
    for k in range(K):
        got = fw.get((e,) * k, Fraction(0))
        if got != a[k]:
            bad.append({"indices": [k], "expected": fmt(a[k]), "computed": fmt(got)})
    stray = [m for m in fw if any(i != e for i in m)]
    checks = [
        {"check": "f-eigen-through-degree", "status": "pass" if not bad and not stray else "fail", "witnesses": bad},
        {"check": "F-nonzero", "status": "pass" if Fw else "fail", "witnesses": []},
    ]
    return SeriesResult(a, checks, fw, Fw)


# ---------------------------------------------------------------------------
# named example data
# ---------------------------------------------------------------------------


def gl12_c(lam: Sequence[Fraction]) -> Fraction:
    """``c = lambda_1 + (lambda_2 + lambda_3)/2`` for gl(1|2)."""
    return Fraction(lam[0]) + (Fraction(lam[1]) + Fraction(lam[2])) / 2


def example_module(A: LieSuperalgebra, lam: Sequence[Fraction]) -> tuple[TypeIModule, NilpotentData]:
    return TypeIModule(A, lam), build_m_and_zeta(A)


def module_axiom_defect(module, x: int, y: int, vec) -> ModVec:
    """``x(y v) - (-1)^{|x||y|} y(x v) - [x,y] v``; zero for a genuine module."""
    A = module.A
    sign = -1 if A.parity[x] and A.parity[y] else 1
    xy = module.act_letter(x, module.act_letter(y, vec))
    yx = module.act_letter(y, module.act_letter(x, vec))
    br = module.act(A.bracket_basis(x, y), vec)
    out: ModVec = {}
    for part, c in ((xy, 1), (yx, -sign), (br, -1)):
        for k, v in part.items():
            s = out.get(k, 0) + c * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out

