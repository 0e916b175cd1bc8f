"""Lie superalgebras from block-graded matrix realizations.

Structure constants are generated once, at build time, from supercommutators of
the realization matrices.  Only pairs ``(i, j)`` with ``i <= j`` are stored; the
reversed pair is derived from super-anticommutativity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from superw.scalars import Vec, fmt, parse_rational, vec_add, vec_iadd, vec_scale

FAMILIES = ("gl", "q", "p", "osp12", "osp22")

FORM_KINDS = ("supertrace", "negSupertrace", "evenTrace")

EVEN, ODD = 0, 1


class AlgebraError(Exception):
    pass


class UnknownFamily(AlgebraError):
    pass


class InvalidParams(AlgebraError):
    pass


class IncompatibleFormKind(AlgebraError):
    pass


class IndexOutOfRange(AlgebraError):
    pass


Matrix = dict  # sparse {(row, col): Fraction}


@dataclass(frozen=True)
class LieSuperalgebra:
    family: str
    params: tuple[int, ...]
    labels: tuple[str, ...]
    parity: tuple[int, ...]
    structure: Mapping[tuple[int, int], Vec] = field(repr=False)
    cartan: tuple[int, ...] = ()
    matrices: tuple[Matrix, ...] | None = field(default=None, repr=False)
    size: int = 0  # matrix size of the realization
    even_rows: int = 0  # rows/cols [0, even_rows) form the even block

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def name(self) -> str:
        if self.family == "gl":
            return f"gl({self.params[0]}|{self.params[1]})"
        if self.family in ("q", "p"):
            return f"{self.family}({self.params[0]})"
        return {"osp12": "osp(1|2)", "osp22": "osp(2|2)"}[self.family]

    def index(self, label: str) -> int:
        """Basis index of ``label``; braces and underscores are optional (``E_23`` == ``E_{23}``)."""
        key = _normalize_label(label)
        for i, lab in enumerate(self.labels):
            if _normalize_label(lab) == key:
                return i
        raise KeyError(f"{label!r} is not a basis label of {self.name}")

    def vec(self, spec: str | Mapping[str, int | Fraction]) -> Vec:
        """Build a SuperVector from a label or a ``{label: coeff}`` mapping."""
        if isinstance(spec, str):
            return {self.index(spec): Fraction(1)}
        out: Vec = {}
        for lab, c in spec.items():
            vec_iadd(out, {self.index(lab): Fraction(c)})
        return out

    def parity_of(self, v: Mapping[int, Fraction]) -> int | None:
        """Parity of a homogeneous vector, None if mixed (zero counts as even)."""
        ps = {self.parity[i] for i in v}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def bracket_basis(self, i: int, j: int) -> Vec:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise IndexOutOfRange(f"basis index out of range: ({i}, {j})")
        if i <= j:
            return dict(self.structure.get((i, j), {}))
        sign = -1 if self.parity[i] * self.parity[j] == 0 else 1
        return vec_scale(sign, self.structure.get((j, i), {}))

    def even_basis(self) -> list[int]:
        return [i for i in range(self.dim) if self.parity[i] == EVEN]

    def odd_basis(self) -> list[int]:
        return [i for i in range(self.dim) if self.parity[i] == ODD]

    def format(self, v: Mapping[int, Fraction]) -> str:
        if not v:
            return "0"
        parts = []
        for i in sorted(v):
            c = v[i]
            coef = "" if c == 1 else "-" if c == -1 else f"{c}*"
            parts.append(f"{coef}{self.labels[i]}")
        return " + ".join(parts).replace("+ -", "- ")

    def with_structure_constant(self, i: int, j: int, k: int, delta: int | Fraction) -> "LieSuperalgebra":
        """Copy with the coefficient of basis ``k`` in ``[x_i, x_j]`` shifted by ``delta`` (i <= j)."""
        if i > j:
            raise ValueError("only stored pairs (i <= j) can be perturbed")
        table = {key: dict(val) for key, val in self.structure.items()}
        entry = table.setdefault((i, j), {})
        vec_iadd(entry, {k: Fraction(delta)})
        if not entry:
            del table[(i, j)]
        return replace(self, structure=table)


def _normalize_label(label: str) -> str:
    return label.replace("{", "").replace("}", "").replace("_", "").replace(" ", "")


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def validate_params(family: str, params: Sequence[int]) -> tuple[int, ...]:
    if family not in FAMILIES:
        raise UnknownFamily(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    params = tuple(int(p) for p in params)
    if family == "gl":
        if len(params) != 2 or min(params) < 1:
            raise InvalidParams(f"gl needs m, n >= 1, got {list(params)}")
    elif family in ("q", "p"):
        if len(params) != 1 or params[0] < 1:
            raise InvalidParams(f"{family} needs n >= 1, got {list(params)}")
    elif params:
        raise InvalidParams(f"{family} takes no parameters, got {list(params)}")
    return params


def _E(i: int, j: int, c: int | Fraction = 1) -> Matrix:
    return {(i, j): Fraction(c)}


def _madd(*ms: Matrix) -> Matrix:
    out: Matrix = {}
    for m in ms:
        vec_iadd(out, m)
    return out


def _idx_label(prefix: str, a: int, b: int, big: bool) -> str:
    return f"{prefix}_{{{a},{b}}}" if big else f"{prefix}_{{{a}{b}}}"


def _gl_realization(m: int, n: int):
    N = m + n
    big = N >= 10
    labels, mats, cartan = [], [], []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            labels.append(_idx_label("E", i, j, big))
            mats.append(_E(i - 1, j - 1))
            if i == j:
                cartan.append(len(labels) - 1)
    return labels, mats, cartan, N, m


def _q_realization(n: int):
    big = n >= 10
    labels, mats, cartan = [], [], []
    for a in range(n):
        for b in range(n):
            labels.append(_idx_label("e", a + 1, b + 1, big))
            mats.append(_madd(_E(a, b), _E(n + a, n + b)))
            if a == b:
                cartan.append(len(labels) - 1)
    for a in range(n):
        for b in range(n):
            labels.append(_idx_label("f", a + 1, b + 1, big))
            mats.append(_madd(_E(a, n + b), _E(n + a, b)))
    return labels, mats, cartan, 2 * n, n


def _p_realization(n: int):
    big = n >= 10
    labels, mats, cartan = [], [], []
    for a in range(n):
        for b in range(n):
            labels.append(_idx_label("e", a + 1, b + 1, big))
            mats.append(_madd(_E(a, b), _E(n + b, n + a, -1)))
            if a == b:
                cartan.append(len(labels) - 1)
    for a in range(n):
        for b in range(a, n):
            labels.append(_idx_label("s", a + 1, b + 1, big))
            mats.append(_E(a, n + a) if a == b else _madd(_E(a, n + b), _E(b, n + a)))
    for a in range(n):
        for b in range(a + 1, n):
            labels.append(_idx_label("y", a + 1, b + 1, big))
            mats.append(_madd(_E(n + a, b), _E(n + b, a, -1)))
    return labels, mats, cartan, 2 * n, n


def _osp12_realization():
    # indices: 0 even; 1, 2 odd
    labels = ["e", "f", "h", "E", "F"]
    mats = [
        _E(1, 2),
        _E(2, 1),
        _madd(_E(1, 1), _E(2, 2, -1)),
        _madd(_E(0, 2), _E(1, 0)),
        _madd(_E(0, 1), _E(2, 0, -1)),
    ]
    return labels, mats, [2], 3, 1


def _osp22_realization():
    # indices: 0, 1 even; 2, 3 odd
    labels = ["e", "h", "f", "h'", "X", "Y", "U", "V"]
    mats = [
        _E(2, 3),
        _madd(_E(2, 2), _E(3, 3, -1)),
        _E(3, 2),
        _madd(_E(0, 0), _E(1, 1, -1)),
        _madd(_E(0, 2), _E(3, 1, -1)),
        _madd(_E(0, 3), _E(2, 1)),
        _madd(_E(1, 3), _E(2, 0)),
        _madd(_E(1, 2), _E(3, 0, -1)),
    ]
    return labels, mats, [3, 1], 4, 2


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    rows: dict[int, list[tuple[int, Fraction]]] = {}
    for (r, c), v in y.items():
        rows.setdefault(r, []).append((c, v))
    out: Matrix = {}
    for (r, c), v in x.items():
        for c2, w in rows.get(c, ()):
            vec_iadd(out, {(r, c2): v * w})
    return out


def supercommutator(x: Matrix, y: Matrix, px: int, py: int) -> Matrix:
    sign = -1 if px * py else 1
    return vec_add(mat_mul(x, y), mat_mul(y, x), coeffs=[Fraction(1), Fraction(-sign)])


def _block_parity(m: Matrix, even_rows: int) -> int | None:
    ps = {int((r < even_rows) != (c < even_rows)) for (r, c) in m}
    if len(ps) > 1:
        return None
    return ps.pop() if ps else EVEN


class _Coordinates:
    """Expresses matrices in the span of the basis matrices (exactly)."""

    def __init__(self, mats: Sequence[Matrix]):
        self.mats = mats
        entries = sorted({k for m in mats for k in m})
        dim = len(mats)
        rows = [[QQ(*_nd(m.get(e, Fraction(0)))) for e in entries] for m in mats]
        rref, pivots = DomainMatrix(rows, (dim, len(entries)), QQ).rref()
        if len(pivots) != dim:
            raise AlgebraError("realization matrices are linearly dependent")
        self.pivots = [entries[p] for p in pivots]
        sub = DomainMatrix(
            [[QQ(*_nd(mats[j].get(e, Fraction(0)))) for j in range(dim)] for e in self.pivots], (dim, dim), QQ
        )
        inv = sub.inv().to_list()
        self.inv = [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in inv]

    def coords(self, m: Matrix) -> Vec:
        rhs = [m.get(e, Fraction(0)) for e in self.pivots]
        out: Vec = {}
        for i, row in enumerate(self.inv):
            c = sum((a * b for a, b in zip(row, rhs) if a and b), Fraction(0))
            if c:
                out[i] = c
        recon = vec_add(*[self.mats[i] for i in out], coeffs=list(out.values()))
        if recon != {k: v for k, v in m.items() if v}:
            raise AlgebraError("bracket of realization matrices leaves the span of the basis")
        return out


def _nd(q: Fraction) -> tuple[int, int]:
    return q.numerator, q.denominator


def build_algebra(family: str, params: Sequence[int] = ()) -> LieSuperalgebra:
    params = validate_params(family, params)
    if family == "gl":
        labels, mats, cartan, size, even_rows = _gl_realization(*params)
    elif family == "q":
        labels, mats, cartan, size, even_rows = _q_realization(params[0])
    elif family == "p":
        labels, mats, cartan, size, even_rows = _p_realization(params[0])
    elif family == "osp12":
        labels, mats, cartan, size, even_rows = _osp12_realization()
    else:
        labels, mats, cartan, size, even_rows = _osp22_realization()

    parity = []
    for lab, m in zip(labels, mats):
        p = _block_parity(m, even_rows)
        if p is None:
            raise AlgebraError(f"basis matrix {lab} is not parity-homogeneous")
        parity.append(p)

    coords = _Coordinates(mats)
    structure: dict[tuple[int, int], Vec] = {}
    for i in range(len(mats)):
        for j in range(i, len(mats)):
            c = supercommutator(mats[i], mats[j], parity[i], parity[j])
            if c:
                structure[(i, j)] = coords.coords(c)
    return LieSuperalgebra(
        family=family,
        params=params,
        labels=tuple(labels),
        parity=tuple(parity),
        structure=structure,
        cartan=tuple(cartan),
        matrices=tuple(mats),
        size=size,
        even_rows=even_rows,
    )


# ---------------------------------------------------------------------------
# bracket, checks, forms
# ---------------------------------------------------------------------------


def bracket(A: LieSuperalgebra, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Vec:
    out: Vec = {}
    for i, a in x.items():
        for j, b in y.items():
            vec_iadd(out, A.bracket_basis(i, j), a * b)
    return out


def matrix_of(A: LieSuperalgebra, v: Mapping[int, Fraction]) -> Matrix:
    if A.matrices is None:
        raise AlgebraError("algebra has no matrix realization attached")
    return vec_add(*[A.matrices[i] for i in v], coeffs=list(v.values()))


@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: list[dict] = field(default_factory=list)
    checked: int = 0

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "status": self.status,
            "checked": self.checked,
            "witnesses": self.witnesses,
        }


def _sign(p: int, q: int) -> int:
    return -1 if p * q else 1


def check_jacobi(A: LieSuperalgebra, max_witnesses: int = 1) -> CheckResult:
    """Super Jacobi identity over all ordered basis triples."""
    n, par = A.dim, A.parity
    res = CheckResult("super-jacobi", True)
    inner = {(i, j): A.bracket_basis(i, j) for i in range(n) for j in range(n)}

    def br(i: int, v: Vec) -> Vec:
        out: Vec = {}
        for k, c in v.items():
            vec_iadd(out, inner[(i, k)], c)
        return out

    for x, y, z in itertools.product(range(n), repeat=3):
        res.checked += 1
        total = vec_add(
            br(x, inner[(y, z)]),
            br(y, inner[(z, x)]),
            br(z, inner[(x, y)]),
            coeffs=[Fraction(_sign(par[x], par[z])), Fraction(_sign(par[y], par[x])), Fraction(_sign(par[z], par[y]))],
        )
        if total:
            res.passed = False
            if len(res.witnesses) < max_witnesses:
                res.witnesses.append(
                    {
                        "indices": [A.labels[x], A.labels[y], A.labels[z]],
                        "expected": "0",
                        "computed": {A.labels[k]: fmt(c) for k, c in sorted(total.items())},
                    }
                )
    return res


def check_anticommutativity(A: LieSuperalgebra) -> CheckResult:
    res = CheckResult("super-anticommutativity", True)
    for i, j in itertools.product(range(A.dim), repeat=2):
        res.checked += 1
        s = vec_add(A.bracket_basis(i, j), A.bracket_basis(j, i), coeffs=[Fraction(1), Fraction(_sign(A.parity[i], A.parity[j]))])
        if s:
            res.passed = False
            res.witnesses.append({"indices": [A.labels[i], A.labels[j]], "expected": "0", "computed": A.format(s)})
    return res


def check_matrix_consistency(A: LieSuperalgebra) -> CheckResult:
    """Structure table agrees with matrix supercommutators on all basis pairs."""
    res = CheckResult("matrix-supercommutator", True)
    if A.matrices is None:
        res.passed = False
        res.witnesses.append({"indices": [], "expected": "matrix realization", "computed": "none attached"})
        return res
    for i, j in itertools.product(range(A.dim), repeat=2):
        res.checked += 1
        lhs = supercommutator(A.matrices[i], A.matrices[j], A.parity[i], A.parity[j])
        rhs = matrix_of(A, A.bracket_basis(i, j))
        if lhs != rhs:
            res.passed = False
            if len(res.witnesses) < 5:
                res.witnesses.append(
                    {"indices": [A.labels[i], A.labels[j]], "expected": "matrix supercommutator", "computed": A.format(A.bracket_basis(i, j))}
                )
    return res


def default_form(A: LieSuperalgebra) -> str:
    return {"gl": "supertrace", "osp12": "negSupertrace", "osp22": "negSupertrace"}.get(A.family, "evenTrace")


def _trace(m: Matrix, even_rows: int, signed: bool) -> Fraction:
    t = Fraction(0)
    for (r, c), v in m.items():
        if r == c:
            t += -v if (signed and r >= even_rows) else v
    return t


def bilinear_form(A: LieSuperalgebra, kind: str, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> Fraction:
    if kind not in FORM_KINDS:
        raise IncompatibleFormKind(f"unknown form kind {kind!r}")
    if kind != default_form(A):
        raise IncompatibleFormKind(f"{kind} is not the designated form of {A.name}")
    if kind == "evenTrace":
        x = {i: c for i, c in x.items() if A.parity[i] == EVEN}
        y = {i: c for i, c in y.items() if A.parity[i] == EVEN}
        return _trace(mat_mul(matrix_of(A, x), matrix_of(A, y)), A.even_rows, signed=False)
    s = _trace(mat_mul(matrix_of(A, x), matrix_of(A, y)), A.even_rows, signed=True)
    return -s if kind == "negSupertrace" else s


def check_form_invariance(A: LieSuperalgebra, kind: str | None = None) -> CheckResult:
    """``([x,y]|z) == (x|[y,z])`` on basis triples.

    The even trace form is only a form on the even part, so for it the triples
    are restricted to even basis elements.
    """
    kind = kind or default_form(A)
    basis = A.even_basis() if kind == "evenTrace" else list(range(A.dim))
    res = CheckResult(f"form-invariance[{kind}]", True)
    for x, y, z in itertools.product(basis, repeat=3):
        res.checked += 1
        ex, ey, ez = {x: Fraction(1)}, {y: Fraction(1)}, {z: Fraction(1)}
        lhs = bilinear_form(A, kind, bracket(A, ex, ey), ez)
        rhs = bilinear_form(A, kind, ex, bracket(A, ey, ez))
        if lhs != rhs:
            res.passed = False
            if len(res.witnesses) < 5:
                res.witnesses.append({"indices": [A.labels[x], A.labels[y], A.labels[z]], "expected": fmt(lhs), "computed": fmt(rhs)})
    return res


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def algebra_to_json(A: LieSuperalgebra) -> dict:
    structure = [
        [i, j, [[k, fmt(c)] for k, c in sorted(v.items())]]
        for (i, j), v in sorted(A.structure.items())
        if v
    ]
    return {
        "family": A.family,
        "params": list(A.params),
        "dim": A.dim,
        "parity": ["odd" if p else "even" for p in A.parity],
        "labels": list(A.labels),
        "structure": structure,
    }


def algebra_from_json(doc: Mapping) -> LieSuperalgebra:
    """Rebuild an algebra from its JSON document (no matrix realization attached)."""
    family = doc["family"]
    params = validate_params(family, doc.get("params", []))
    structure: dict[tuple[int, int], Vec] = {}
    for i, j, terms in doc["structure"]:
        if i > j:
            raise AlgebraError(f"structure entries must have i <= j, got ({i}, {j})")
        structure[(i, j)] = {int(k): parse_rational(c) for k, c in terms}
    parity = tuple(1 if p == "odd" else 0 for p in doc["parity"])
    if len(parity) != doc["dim"] or len(doc["labels"]) != doc["dim"]:
        raise AlgebraError("dim does not match labels/parity lengths")
    cartan = build_algebra(family, params).cartan if doc["dim"] == _expected_dim(family, params) else ()
    return LieSuperalgebra(family, params, tuple(doc["labels"]), parity, structure, cartan=cartan)


def _expected_dim(family: str, params: Iterable[int]) -> int:
    params = tuple(params)
    if family == "gl":
        return (params[0] + params[1]) ** 2
    if family in ("q", "p"):
        return 2 * params[0] ** 2
    return 5 if family == "osp12" else 8
