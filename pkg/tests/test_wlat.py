import random

import pytest
from hypothesis import given, strategies as st

from qcrit.errors import InvalidCoatom, ParseError
from qcrit.fixtures import EX3_7_HYPERPLANE, ex3_7, random_polymatroid, random_weighting
from qcrit.lattice import BooleanLattice, SubspaceLattice
from qcrit.wlat import (
    IntPoly,
    WeightedLattice,
    char_poly,
    char_poly_direct,
    char_poly_recursive,
    check_identities,
    dump_wlat,
    flats,
    from_table,
    is_flat,
    is_submodular,
    loops,
    parse_wlat,
)

coeff_lists = st.lists(st.integers(-50, 50), max_size=7)


@given(coeff_lists, coeff_lists, st.integers(-5, 5))
def test_intpoly_ring_homomorphism(a, b, z):
    p, q = IntPoly(a), IntPoly(b)
    assert (p + q)(z) == p(z) + q(z)
    assert (p * q)(z) == p(z) * q(z)
    assert (p - q)(z) == p(z) - q(z)


@given(coeff_lists)
def test_intpoly_text_round_trip(a):
    p = IntPoly(a)
    assert IntPoly.parse(str(p)) == p


def test_intpoly_rendering():
    p = IntPoly([-56, 40, 44, -25, -4, 0, 1])
    assert str(p) == "z^6 - 4*z^4 - 25*z^3 + 44*z^2 + 40*z - 56"
    assert str(IntPoly()) == "0" and str(IntPoly([0, -1])) == "-z"
    assert IntPoly([1, 2, 0, 0]).degree == 1


@pytest.mark.parametrize("bad", ["", "z^", "3**z", "2z+", "x"])
def test_intpoly_parse_errors(bad):
    with pytest.raises(ParseError):
        IntPoly.parse(bad)


def test_height_one_and_two_polynomials():
    B = BooleanLattice(1)
    W = WeightedLattice(B, {B.key(0): 0, B.key(1): 3})
    assert str(char_poly(W)) == "z^3 - 1"
    L = SubspaceLattice(2, 2)
    # uniform weight 1 on atoms, 2 on top: z^2 - 3z + 2
    W2 = WeightedLattice(L, lambda x: x.dim)
    assert char_poly(W2) == IntPoly([2, -3, 1])


def test_example_polymatroid_polynomials():
    M = ex3_7()
    L = M.lattice
    H = L.span(EX3_7_HYPERPLANE)
    assert str(char_poly(M)) == "z^5 - 2*z^3 - 5*z^2 + 6*z"
    assert str(char_poly(M.restriction(H))) == "z^5 - z^3 - 2*z^2 + 2"
    expected = {"111": "z^3 - 2*z + 1", "011": "z^2 - z", "101": "z^2 - z", "001": "z^2 - 2*z + 1"}
    for row, text in expected.items():
        y = L.span([[int(c) for c in row]])
        assert str(char_poly(M.contraction(y))) == text


def test_example_polymatroid_coatom_decomposition_term_by_term():
    M = ex3_7()
    L = M.lattice
    H = L.span(EX3_7_HYPERPLANE)
    off = [y for y in M.atoms() if not L.leq(y, H)]
    assert sorted(y.short() for y in off) == ["<001>", "<011>", "<101>", "<111>"]
    gap = M.f(L.top()) - M.f(H)
    assert gap == 0
    rhs = IntPoly.monomial(gap) * char_poly(M.restriction(H))
    for y in off:
        rhs = rhs - char_poly(M.contraction(y))
    assert rhs == char_poly(M)


def test_example_polymatroid_flats():
    M = ex3_7()
    L = M.lattice
    # covers of <110> have ranks 5, 4, 5, all above its rank 2
    assert is_flat(M, L.span([[1, 1, 0]]))
    non_flats = [x.short() for x in M.elements() if not is_flat(M, x)]
    assert non_flats == ["<100;001>", "<100;010>", "<100;011>", "<101;011>"]
    assert is_flat(M, L.top())
    assert loops(M) == []
    assert all(is_flat(M, F) for F in flats(M))


def test_recursive_rejects_non_coatom():
    M = ex3_7()
    with pytest.raises(InvalidCoatom):
        char_poly_recursive(M, M.lattice.span([[1, 0, 0]]))


def test_nonflat_vanishing_needs_submodularity():
    B = BooleanLattice(2)
    W = WeightedLattice(B, {B.key(0): 0, B.key(1): 0, B.key(2): 1, B.key(3): 2})
    assert not is_flat(W, 0)
    assert is_submodular(W) is False
    assert char_poly(W) == IntPoly([1, -1])
    rep = check_identities(W)
    assert rep.ok
    assert any(c.name == "nonflat-contraction-zero" and c.status == "skip" for c in rep.checks)


def test_loop_kills_polynomial_for_polymatroid():
    L = SubspaceLattice(2, 2)
    e1 = L.span([[1, 0]])
    # rank of the projection killing e1
    W = WeightedLattice(L, lambda x: (x + e1).dim - 1)
    assert loops(W) == [e1]
    assert char_poly(W).is_zero


def _lattices(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    return rng, (SubspaceLattice(2, n) if seed % 2 else BooleanLattice(rng.randint(1, 5)))


@given(st.integers(0, 10**6))
def test_identities_on_random_polymatroids(seed):
    rng, L = _lattices(seed)
    W = random_polymatroid(rng, L)
    assert is_submodular(W)
    rep = check_identities(W)
    assert rep.ok, rep.render()


@given(st.integers(0, 10**6))
def test_general_identities_on_random_monotone_weightings(seed):
    rng, L = _lattices(seed)
    W = random_weighting(rng, L)
    P = char_poly_direct(W)
    assert P(1) == 0
    for H in W.coatoms():
        assert char_poly_recursive(W, H) == P
    total = IntPoly.monomial(W.top_weight)
    for B in W.elements()[1:]:
        total = total - char_poly(W.contraction(B))
    assert total == P


@given(st.integers(0, 10**6))
def test_threaded_direct_sum_matches(seed):
    rng = random.Random(seed)
    W = random_weighting(rng, SubspaceLattice(2, 4))
    assert char_poly_direct(W, workers=4) == char_poly_direct(W)


def test_minor_polynomials_on_interval():
    M = ex3_7()
    L = M.lattice
    x = L.span([[1, 0, 0]])
    H = L.span(EX3_7_HYPERPLANE)
    m = M.minor(x, H)
    assert m.height == 1 and m.top_weight == 2
    assert str(char_poly(m)) == "z^2 - 1"


def test_wlat_round_trip():
    M = ex3_7()
    text = dump_wlat(M, r=3)
    W, r = parse_wlat(text)
    assert r == 3
    assert all(W.f(x) == M.f(x) for x in M.elements())
    assert dump_wlat(W, r) == text


@pytest.mark.parametrize(
    "text",
    [
        "",
        "wlat 2",
        "lat 2 1\n0 - 0\n1 1 1",
        "wlat 2 1\n0 - 0",
        "wlat 2 1\n0 - 1\n1 1 1",
        "wlat 2 1\n0 - 0\n1 1 1\n1 1 1",
        "wlat 2 2\n0 - 0\n1 10 2\n1 01 1\n1 11 1\n2 10;01 1",
        "wlat 2 1\n0 - 0\n2 1 1",
        "wlat 2 1\n0 - 0\n1 1 -1",
    ],
)
def test_wlat_parse_errors(text):
    with pytest.raises(ParseError):
        parse_wlat(text)


def test_from_table_boolean():
    B = BooleanLattice(2)
    W = from_table(B, {B.key(0): 0, B.key(1): 1, B.key(2): 1, B.key(3): 1})
    # 0 z^1 - z^0 - z^0 + z^0
    assert char_poly(W) == IntPoly([-1, 1])
