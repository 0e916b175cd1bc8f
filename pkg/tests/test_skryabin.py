import itertools
import math
from fractions import Fraction

import pytest

from superw.skryabin import (
    InvalidDatum,
    InvalidN,
    check_conditions,
    check_freeness,
    check_pn_zeta_tables,
    datum_to_json,
    make_datum,
    multi_indices,
    order_key,
    pn_datum,
    pn_overline,
    qn_datum,
    verify_conclusions,
    weight,
    with_pair,
)

from tests.helpers import algebra, nilpotent
from tests.test_algebra import dense, dense_super

DATA = {"q": qn_datum, "p": pn_datum}


def datum(family, n, **kw):
    return DATA[family](n, algebra(family, n), nilpotent(family, n), **kw)


@pytest.mark.parametrize("family", ["q", "p"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_conditions_hold(family, n):
    reports = check_conditions(algebra(family, n), nilpotent(family, n), datum(family, n))
    assert [r.check for r in reports] == ["condition-1-basis", "condition-2-diagonal", "condition-3-off-diagonal"]
    assert all(r.passed for r in reports), [r.to_json() for r in reports if not r.passed]


@pytest.mark.parametrize("family", ["q", "p"])
@pytest.mark.parametrize("n", [3, 4])
def test_truncated_tails_break_condition_three(family, n):
    reports = check_conditions(algebra(family, n), nilpotent(family, n), datum(family, n, full_tails=False))
    by = {r.check: r for r in reports}
    assert by["condition-1-basis"].passed
    assert not by["condition-3-off-diagonal"].passed
    assert by["condition-3-off-diagonal"].witnesses[0]["computed"] != "0/1"


def test_truncation_is_harmless_for_n2():
    for family in ("q", "p"):
        assert datum(family, 2) == datum(family, 2, full_tails=False)


def test_q_datum_shapes():
    d = datum("q", 3)
    assert d.names == ("e_{12}", "e_{13}", "e_{23}", "f_{12}", "f_{13}", "f_{23}")
    assert d.d == (2, 4, 2, 2, 4, 2)
    assert d.n_even == 3
    A = algebra("q", 3)
    assert d.x[1] == A.vec("e_32")
    assert d.x[3] == A.vec({"f_22": 1, "f_33": -1})


def test_p_overline_examples():
    A = algebra("p", 3)
    assert pn_overline(A, "e", 1, 2) == A.vec({"e_22": 1, "e_33": 1})
    assert pn_overline(A, "s", 1, 1) == A.vec("y_12")
    assert pn_overline(A, "y", 2, 3) == A.vec("s_22")
    assert pn_overline(A, "s", 1, 1, full_tails=False) == A.vec("y_12")


def test_invalid_inputs():
    with pytest.raises(InvalidN):
        qn_datum(1)
    with pytest.raises(InvalidN):
        check_pn_zeta_tables(1)
    A = algebra("q", 2)
    with pytest.raises(InvalidDatum):
        make_datum(A, nilpotent("q", 2), [("mixed", A.vec("e_12"), A.vec("f_21"))])


# -- zeta tables: dense-matrix oracle --


def p_zeta_oracle(A, n, i, j):
    """zeta of an anticommutator read off the top-left block, or None if the result is not upper nilpotent."""
    M = dense_super(dense(A, i), dense(A, j), 1, 1)
    if any(M[r][c] for r in range(n) for c in range(n) if r >= c):
        return None
    return sum(M[a][a + 1] for a in range(n - 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_s_y_table_against_matrices(n):
    A = algebra("p", n)
    for a, b in itertools.combinations_with_replacement(range(1, n + 1), 2):
        for c, d in itertools.combinations(range(1, n + 1), 2):
            val = p_zeta_oracle(A, n, A.index(f"s_{a}{b}"), A.index(f"y_{c}{d}"))
            if val is None:
                continue
            expected = 1 if (c, d) == (a, b + 1) else -1 if (c, d) == (a + 1, b) else 0
            assert val == expected, (a, b, c, d)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_table_reports(n):
    table, inside, outside = check_pn_zeta_tables(n)
    assert table.passed and table.payload["evaluated"] > 0
    assert inside.passed
    assert outside.status in ("pass", "warn")


def test_outside_m_mismatch_is_reported_as_warning():
    outside = check_pn_zeta_tables(3)[2]
    assert outside.status == "warn"
    assert {"indices": ["s_13", "ov s_22", "l=-1"], "expected": "0/1", "computed": "-1/1"} in outside.witnesses


# -- ordering of multi-indices --


def test_multi_index_count_matches_brute_force():
    d = datum("q", 3)
    bound = 6
    brute = [
        a for a in itertools.product(range(4), repeat=6)
        if all(a[s] <= 1 for s in range(3, 6)) and sum(x * y for x, y in zip(a, d.d)) <= bound
    ]
    got = multi_indices(d, bound)
    assert sorted(got) == sorted(brute)
    assert got == sorted(got, key=lambda a: order_key(d, a))


def test_order_key_semantics():
    d = datum("q", 2)
    assert order_key(d, (1, 0)) < order_key(d, (2, 0))
    assert weight(d, (2, 1)) == 6
    # equal weight: more factors is smaller
    d3 = datum("q", 3)
    assert order_key(d3, (2, 0, 0, 0, 0, 0)) < order_key(d3, (0, 1, 0, 0, 0, 0))


# -- conclusions and freeness --


@pytest.mark.parametrize("family,n", [("q", 2), ("p", 2), ("q", 3), ("p", 3)])
def test_conclusions_and_freeness(family, n):
    A, nil, d = algebra(family, n), nilpotent(family, n), datum(family, n)
    bound = 6 if n == 2 else 4
    diag, lower = verify_conclusions(A, nil, d, wt_bound=bound)
    assert diag.passed and lower.passed
    assert all(Fraction(s["c"]) != 0 for s in diag.payload["scalars"])
    free = check_freeness(A, nil, d, wt_bound=bound)
    assert free.passed and free.payload["rank"] == free.payload["vectors"]


def test_q2_diagonal_scalars():
    """``e_12 e_22^k = (e_22 + 1)^k e_12`` in U, so ``(e_12 - 1)^k e_22^k . 1 = k!``."""
    diag = verify_conclusions(algebra("q", 2), nilpotent("q", 2), datum("q", 2), wt_bound=6)[0]
    scalars = diag.payload["scalars"]
    assert len(scalars) == 7
    for s in scalars:
        assert Fraction(s["c"]) == math.factorial(s["a"][0])


def test_degenerate_datum_is_rank_deficient():
    A, nil, d = algebra("q", 3), nilpotent("q", 3), datum("q", 3)
    bad = with_pair(d, 2, d.x[0])  # x_3 := x_1, both of weight 2
    assert not check_freeness(A, nil, bad, wt_bound=2).passed
    assert not all(r.passed for r in check_conditions(A, nil, bad))


def test_datum_json():
    rows = datum_to_json(algebra("p", 2), datum("p", 2))
    assert rows[0]["parity"] == "even" and rows[1]["parity"] == "odd"
    assert rows[1]["u"] == "s_{11}"
