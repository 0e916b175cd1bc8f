from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superw.automorphisms import (
    SCALING_POOL,
    UnsupportedFamily,
    ZeroEntry,
    build_phi,
    character_with_simple_values,
    is_automorphism,
    normalizing_sequence,
    random_scalings,
    scaling_coeffs,
    simple_values,
    transport_character,
)

from tests.helpers import algebra, nilpotent
from tests.test_algebra import dense, mm

nonzero = st.sampled_from(SCALING_POOL)


def conjugation_scales(A, seq):
    """Oracle: conjugate each basis matrix by diag(D, D) for q(n) or diag(D, D^-1) for p(n)."""
    n = A.params[0]
    D = [seq(i, n) for i in range(1, n + 1)]
    lower = D if A.family == "q" else [1 / x for x in D]
    G = [D[i] if i < n else lower[i - n] for i in range(2 * n)]
    Ginv = [1 / g for g in G]
    scales = []
    for i in range(A.dim):
        M = dense(A, i)
        left = [[G[r] * M[r][c] for c in range(2 * n)] for r in range(2 * n)]
        C = mm(left, [[Ginv[r] if r == c else Fraction(0) for c in range(2 * n)] for r in range(2 * n)])
        ratios = {C[r][c] / M[r][c] for r in range(2 * n) for c in range(2 * n) if M[r][c]}
        assert len(ratios) == 1  # every basis matrix is an eigenvector of the conjugation
        scales.append(ratios.pop())
    return tuple(scales)


def test_scaling_coefficients():
    seq = scaling_coeffs([2, 3])
    assert seq(1, 2) == 2 and seq(2, 3) == 3 and seq(1, 3) == 6
    assert seq(3, 1) == Fraction(1, 6) and seq(2, 2) == 1
    inv = seq.inverse()
    assert all(inv(i, j) * seq(i, j) == 1 for i in range(1, 4) for j in range(1, 4))
    with pytest.raises(ZeroEntry):
        scaling_coeffs([1, 0])


@pytest.mark.parametrize("family", ["q", "p"])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_phi_matches_conjugation(family, data):
    n = data.draw(st.integers(2, 4))
    A = algebra(family, n)
    seq = scaling_coeffs(data.draw(st.lists(nonzero, min_size=n - 1, max_size=n - 1)))
    phi = build_phi(A, seq)
    assert phi.scale == conjugation_scales(A, seq)
    assert is_automorphism(A, phi).passed


@pytest.mark.parametrize("family", ["q", "p"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_seeded_scalings_are_automorphisms(family, n):
    A = algebra(family, n)
    for seq in random_scalings(n, 10, seed=n):
        assert is_automorphism(A, build_phi(A, seq)).passed


def test_random_scalings_are_reproducible():
    assert random_scalings(4, 5, 11) == random_scalings(4, 5, 11)
    assert all(x in SCALING_POOL for s in random_scalings(4, 5, 11) for x in s.a)


def test_as_written_reading_fails_for_p():
    A = algebra("p", 2)
    bad = is_automorphism(A, build_phi(A, scaling_coeffs([2]), reading="as-written"))
    assert not bad.passed
    assert bad.payload["reading"] == "as-written"
    ok = is_automorphism(A, build_phi(A, scaling_coeffs([-1]), reading="as-written"))
    assert ok.passed  # a^2 = 1 makes both readings agree


def test_mutation_is_detected():
    A = algebra("p", 2)
    phi = build_phi(A, scaling_coeffs([3])).rescale(A.index("s_11"), 2)
    res = is_automorphism(A, phi)
    assert not res.passed
    assert any("s_{11}" in w["indices"] for w in res.witnesses)


def test_compose_matches_product_sequence():
    A = algebra("q", 3)
    s1, s2 = scaling_coeffs([2, -1]), scaling_coeffs([Fraction(1, 3), 5])
    composed = build_phi(A, s1).compose(build_phi(A, s2))
    assert composed.scale == build_phi(A, scaling_coeffs([Fraction(2, 3), -5])).scale


def test_unsupported_family():
    with pytest.raises(UnsupportedFamily):
        build_phi(algebra("gl", 1, 2), scaling_coeffs([1, 1]))
    with pytest.raises(ValueError):
        build_phi(algebra("q", 3), scaling_coeffs([1]))


def test_transport_and_normalize_q4():
    A, nil = algebra("q", 4), nilpotent("q", 4)
    zeta = character_with_simple_values(A, nil, [2, 0, 5])
    seq = normalizing_sequence(A, zeta)
    moved = transport_character(A, build_phi(A, seq), nil, zeta)
    assert simple_values(A, moved) == [1, 0, 1]


@settings(max_examples=20, deadline=None)
@given(st.lists(nonzero, min_size=2, max_size=2), st.lists(nonzero, min_size=2, max_size=2))
def test_transport_scales_simple_values(a, z):
    """(zeta o phi)(e_{i,i+1}) = a_i zeta(e_{i,i+1}) for every zeta on p(3)."""
    A, nil = algebra("p", 3), nilpotent("p", 3)
    zeta = character_with_simple_values(A, nil, z)
    moved = transport_character(A, build_phi(A, scaling_coeffs(a)), nil, zeta)
    assert simple_values(A, moved) == [x * y for x, y in zip(a, z)]
    back = transport_character(A, build_phi(A, normalizing_sequence(A, moved)), nil, moved)
    assert simple_values(A, back) == [1, 1]


def test_p3_transport_example():
    A, nil = algebra("p", 3), nilpotent("p", 3)
    moved = transport_character(A, build_phi(A, scaling_coeffs([3, 7])), nil)
    assert simple_values(A, moved) == [3, 7]
