import random
import warnings

import pytest
from hypothesis import given, strategies as st

from qcrit.errors import InvalidIndexSet, InvalidParams, ParseError, ResourceLimit, SingularMatrix
from qcrit.fixtures import EX4_3, EX5_8, ex4_3, ex5_8, random_matrix_code, random_vector_code, table_row
from qcrit.gf import GF, Subspace, ext_field, rank
from qcrit.lattice import SubspaceLattice
from qcrit.rcode import (
    MatrixCode,
    VectorCode,
    classify,
    codewords,
    count_exact_support,
    dual,
    dump_code,
    gabidulin,
    is_nondegenerate,
    load_code,
    min_distance,
    parse_code,
    puncture,
    q_system,
    simplex,
    supp_code,
    supp_vector,
    supp_word,
    weight_distribution,
)

F2 = GF(2)


def span(rows, n):
    return Subspace.from_rows(F2, rows, n)


def test_word_supports_of_worked_example():
    assert supp_word(EX4_3[3]) == span([[0, 0, 0, 0, 1], [1, 1, 0, 0, 0], [0, 1, 0, 1, 1]], 5)
    assert supp_word(EX4_3[5]) == span([[0, 0, 0, 1, 0], [1, 1, 1, 0, 0], [0, 1, 1, 0, 1]], 5)
    assert supp_word(EX5_8[0]) == span([[1, 0, 0], [0, 1, 0]], 3)
    assert supp_word([[0, 0], [0, 0]]).dim == 0
    assert supp_word([[1, 0], [0, 1]]).dim == 2


def test_nondegeneracy_of_fixtures():
    assert is_nondegenerate(ex4_3()) and is_nondegenerate(ex5_8())
    assert supp_code(ex4_3()).dim == 5
    assert supp_code(MatrixCode(2, 2, 2, [])).dim == 0


def test_dependent_generators_are_rebased_with_warning():
    G = [[[1, 0]], [[0, 1]], [[1, 1]]]
    with pytest.warns(UserWarning):
        C = MatrixCode(2, 1, 2, G)
    assert C.k == 2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert MatrixCode(2, 1, 2, G, quiet=True).k == 2


def test_invalid_generators_rejected():
    with pytest.raises(InvalidParams):
        MatrixCode(2, 2, 2, [[[1, 0]]])
    with pytest.raises(InvalidParams):
        MatrixCode(2, 1, 2, [[[2, 0]]])
    with pytest.raises(InvalidParams):
        VectorCode(ext_field(2, 2), 2, [[4, 0]])


def test_weight_distributions():
    assert weight_distribution(ex5_8()) == [1, 0, 15, 0]
    assert min_distance(ex4_3()) == 1
    assert weight_distribution(MatrixCode(2, 2, 3, [])) == [1, 0, 0]
    assert min_distance(MatrixCode(2, 2, 3, [])) is None
    assert weight_distribution(simplex(2, 2, 2)) == [1, 0, 15]
    assert min_distance(gabidulin(2, 3, 3, 1)) == 3


def test_codeword_enumeration_is_exact():
    C = ex5_8()
    words = list(codewords(C))
    assert len(words) == 16 and len(set(words)) == 16
    assert words[0] == ((0, 0, 0),) * 3
    with pytest.raises(ResourceLimit):
        list(codewords(table_row(4), cap=1000))


def test_codewords_over_odd_field():
    C = MatrixCode(3, 2, 2, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    words = list(codewords(C))
    assert len(set(words)) == 9
    assert weight_distribution(C)[0] == 1 and sum(weight_distribution(C)) == 9


@pytest.mark.parametrize("V_rows", [[], [[0, 0, 0, 0, 1]], [[1, 1, 0, 0, 0], [0, 0, 0, 0, 1]], None])
def test_exact_support_counts_match_enumeration(V_rows):
    C = ex4_3()
    V = Subspace.full(F2, 5) if V_rows is None else span(V_rows, 5)
    assert count_exact_support(C, V) == count_exact_support(C, V, exhaustive=True)


def test_exact_support_counts_partition_code():
    C = ex5_8()
    L = SubspaceLattice(2, 3)
    assert sum(count_exact_support(C, V) for V in L.elements()) == 2**C.k
    assert count_exact_support(C, L.bottom()) == 1


def test_classification():
    cl = classify(gabidulin(2, 4, 4, 2))
    assert (cl.k, cl.d, cl.is_MRD) == (8, 3, True)
    assert classify(ex5_8()).is_MRD is False
    full = MatrixCode(2, 2, 2, [[[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]]])
    cf = classify(full)
    assert cf.is_MRD and cf.d == 1 and cf.singleton_defect == 0
    assert classify(table_row(2)).d == 2


def test_gabidulin_full_length_endpoint():
    assert min_distance(gabidulin(2, 3, 3, 3)) == 1
    assert gabidulin(2, 3, 3, 2).k == 2


def test_dual_dimensions_and_involution():
    for C in (ex4_3(), ex5_8(), table_row(3)):
        D = dual(C)
        assert C.k + D.k == C.n * C.m
        assert dual(D).same_code(C)
    Z = MatrixCode(2, 2, 2, [])
    assert dual(Z).k == 4


def test_dual_of_listed_code_has_dimension_fifteen():
    C = table_row(4)
    assert (C.n, C.m, C.k) == (5, 4, 15)


@given(st.integers(0, 10**6))
def test_random_dual_round_trip(seed):
    rng = random.Random(seed)
    C = random_matrix_code(rng, rng.choice([2, 3]), rng.randint(1, 3), rng.randint(1, 3), rng.randint(0, 4))
    D = dual(C)
    assert C.k + D.k == C.n * C.m
    assert dual(D).same_code(C)
    # every pair of generators is orthogonal under the trace form
    for X in C.flattened():
        for Y in D.flattened():
            assert sum(a * b for a, b in zip(X, Y)) % C.q == 0


def test_vector_dual():
    C = gabidulin(2, 3, 3, 1)
    D = dual(C)
    assert D.k == 2 and dual(D).same_code(C)


def test_vector_code_expansion():
    E = ext_field(2, 2)
    C = VectorCode(E, 1, [[1]])
    M = C.to_matrix_code()
    assert (M.n, M.m, M.k) == (1, 2, 2)
    assert supp_code(M) == supp_code(C)


@given(st.integers(0, 10**6))
def test_vector_code_support_preserved_by_expansion(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    C = random_vector_code(rng, 2, 2, n, rng.randint(1, min(n, 2)), nondegenerate=False)
    assert C.to_matrix_code().k == C.m * C.k
    assert supp_code(C.to_matrix_code()) == supp_code(C)
    assert is_nondegenerate(C) == (q_system(C).dim == C.n)


def test_supp_vector():
    E = ext_field(2, 2)
    assert supp_vector(E, [1, 2]).dim == 2
    assert supp_vector(E, [1, 1]) == span([[1, 1]], 2)


def test_puncture():
    n = 5
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    C = ex4_3()
    P = puncture(C, ident, [4])
    assert (P.n, P.m) == (4, 3)
    rank1 = MatrixCode(2, 3, 2, [[[0, 0], [0, 0], [1, 0]]])
    assert puncture(rank1, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], [2]).k == 0
    with pytest.raises(InvalidIndexSet):
        puncture(C, ident, [])
    with pytest.raises(InvalidIndexSet):
        puncture(C, ident, [0, 1, 2, 3, 4])
    with pytest.raises(SingularMatrix):
        puncture(C, [[0] * n] * n, [0])


@given(st.integers(0, 10**6))
def test_puncture_keeps_nondegeneracy(seed):
    rng = random.Random(seed)
    n = 5
    while True:
        A = [[rng.randrange(2) for _ in range(n)] for _ in range(n)]
        if rank(F2, A, n) == n:
            break
    idx = rng.sample(range(n), rng.randint(1, n - 1))
    P = puncture(ex4_3(), A, idx)
    assert is_nondegenerate(P)


def test_file_round_trip(tmp_path):
    for C in (ex4_3(), gabidulin(2, 3, 3, 2)):
        text = dump_code(C, "comment line")
        D = parse_code(text)
        assert D.same_code(C)
        p = tmp_path / "c.rmc"
        p.write_text(text)
        assert load_code(p).same_code(C)


def test_dual_of_reference(tmp_path):
    (tmp_path / "inner.rmc").write_text(dump_code(ex5_8()))
    (tmp_path / "outer.rmc").write_text("dual-of: inner.rmc\n")
    assert load_code(tmp_path / "outer.rmc").same_code(dual(ex5_8()))


@pytest.mark.parametrize(
    "text",
    [
        "kind: matrix\nq: 2\nn: 1\nm: 1\nk: 2\ngenerator:\n1\n",
        "kind: matrix\nq: 2\nn: 1\nm: 2\nk: 1\ngenerator:\n1\n",
        "kind: matrix\nq: 2\nn: 1\nm: 1\n",
        "kind: matrix\nq: 2\nq: 2\nn: 1\nm: 1\nk: 0\n",
        "kind: tensor\nq: 2\nn: 1\nm: 1\nk: 0\n",
        "kind: matrix\nq: two\nn: 1\nm: 1\nk: 0\n",
        "kind: matrix\nq: 2\nn: 1\nm: 1\nk: 1\n1\n",
        "kind: matrix\nq: 2\nn: 1\nm: 1\nk: 1\ngenerator:\n7\n",
        "kind: vector\nq: 2\nm: 2\nn: 2\nk: 2\nrow: 1 0\n",
        "color: red\n",
        "dual-of: missing-file.rmc\n",
    ],
)
def test_parse_errors(text, tmp_path):
    with pytest.raises(ParseError):
        parse_code(text, tmp_path)
