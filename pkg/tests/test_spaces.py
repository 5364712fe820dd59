from fractions import Fraction as F
from itertools import permutations

import pytest

from credalkit.exactq import DimensionError, QMatrix
from credalkit.spaces import (
    alignment_permutation,
    all_canonical_tuples,
    canonical_tuple,
    index_to_outcomes,
    make_space,
    marginal_matrix,
    permutation_matrix,
    permute_tuple,
    point_mass,
    product_index,
    pushforward_matrix,
    restriction_matrix,
    tuple_covers,
    uniform_measure,
    validate_index_tuple,
    validate_measure,
)

AB = make_space(("a", "b"), ("0", "1"))
ABC = make_space(("a", "b", "c"), ("0", "1"))


class TestIndexing:
    def test_row_major_binary(self):
        assert product_index(AB, ("0", "0")) == 0
        assert product_index(AB, ("1", "0")) == 2

    def test_ternary_formula(self):
        sp = make_space(("t",), ("a", "b", "c"))
        assert product_index(sp, ("c", "a", "b")) == 2 * 9 + 0 * 3 + 1

    def test_inverse(self):
        for idx in range(8):
            outs = index_to_outcomes(ABC, idx, 3)
            assert product_index(ABC, outs) == idx

    def test_unknown_label(self):
        with pytest.raises(DimensionError):
            product_index(AB, ("0", "x"))


class TestSpaceValidation:
    def test_tuple_distinctness(self):
        with pytest.raises(DimensionError):
            validate_index_tuple(AB, ("a", "a"))
        with pytest.raises(DimensionError):
            validate_index_tuple(AB, ())

    def test_space_invariants(self):
        with pytest.raises(DimensionError):
            make_space(("a",), ("0",))  # one outcome
        with pytest.raises(DimensionError):
            make_space((), ("0", "1"))
        with pytest.raises(DimensionError):
            make_space(("a", "a"), ("0", "1"))

    def test_canonical_order(self):
        assert canonical_tuple(ABC, {"c", "a"}) == ("a", "c")
        assert list(all_canonical_tuples(AB)) == [("a",), ("b",), ("a", "b")]
        assert tuple_covers(("a", "c"), ("c",))
        assert not tuple_covers(("a",), ("b",))


class TestMatrices:
    def test_pushforward_single_coordinate(self):
        m = pushforward_matrix(AB, ("b",))
        assert [[int(v) for v in row] for row in m.rows] == [
            [1, 0, 1, 0],
            [0, 1, 0, 1],
        ]

    def test_full_tuple_is_identity(self):
        assert pushforward_matrix(AB, ("a", "b")) == QMatrix.identity(4)
        assert pushforward_matrix(ABC, ("a", "b", "c")) == QMatrix.identity(8)

    def test_uniform_maps_to_uniform(self):
        for alpha in [("a",), ("c", "a"), ("b", "c", "a")]:
            m = pushforward_matrix(ABC, alpha)
            out = m.apply(uniform_measure(8))
            assert out == uniform_measure(2 ** len(alpha))

    def test_permutation_identity_and_swap(self):
        assert permutation_matrix(AB, 2, (0, 1)) == QMatrix.identity(4)
        swap = permutation_matrix(AB, 2, (1, 0))
        moved = swap.apply(point_mass(4, product_index(AB, ("0", "1"))))
        assert moved == point_mass(4, product_index(AB, ("1", "0")))

    def test_permutation_composition_brute_force(self):
        # matrix(pi o rho) = matrix(pi) @ matrix(rho) over all of S3
        for pi in permutations(range(3)):
            for rho in permutations(range(3)):
                composed = tuple(rho[pi[j]] for j in range(3))
                lhs = permutation_matrix(ABC, 3, composed)
                rhs = permutation_matrix(ABC, 3, pi) @ permutation_matrix(
                    ABC, 3, rho
                )
                assert lhs == rhs

    def test_permutation_inverse(self):
        for pi in permutations(range(3)):
            inv = tuple(pi.index(j) for j in range(3))
            prod = permutation_matrix(ABC, 3, pi) @ permutation_matrix(ABC, 3, inv)
            assert prod == QMatrix.identity(8)

    def test_marginal_examples(self):
        assert marginal_matrix(AB, 2, 2) == QMatrix.identity(4)
        m = marginal_matrix(AB, 2, 1)
        assert [[int(v) for v in row] for row in m.rows] == [
            [1, 1, 0, 0],
            [0, 0, 1, 1],
        ]

    def test_marginal_chain(self):
        lhs = marginal_matrix(ABC, 3, 1)
        rhs = marginal_matrix(ABC, 2, 1) @ marginal_matrix(ABC, 3, 2)
        assert lhs == rhs

    def test_column_stochastic_zero_one(self):
        mats = [
            pushforward_matrix(ABC, ("b", "a")),
            permutation_matrix(ABC, 3, (2, 0, 1)),
            marginal_matrix(ABC, 3, 2),
        ]
        for m in mats:
            for col in zip(*m.rows):
                assert sum(col) == 1
                assert all(v in (0, 1) for v in col)

    def test_compatibility_identity(self):
        # restriction == marginalize-after-shuffle == direct pushforward
        for alpha in permutations(("a", "b", "c")):
            for beta in [("a",), ("c",), ("b", "a"), ("c", "b")]:
                pi = alignment_permutation(alpha, beta)
                assert permute_tuple(alpha, pi)[: len(beta)] == beta
                lhs = (
                    marginal_matrix(ABC, 3, len(beta))
                    @ permutation_matrix(ABC, 3, pi)
                    @ pushforward_matrix(ABC, alpha)
                )
                assert lhs == pushforward_matrix(ABC, beta)
                assert restriction_matrix(ABC, alpha, beta) @ pushforward_matrix(
                    ABC, alpha
                ) == pushforward_matrix(ABC, beta)


class TestMeasures:
    def test_validate(self):
        validate_measure([F(1, 2), F(1, 2)])
        with pytest.raises(DimensionError):
            validate_measure([F(1, 2), F(1, 3)])
        with pytest.raises(DimensionError):
            validate_measure([F(3, 2), F(-1, 2)])
        with pytest.raises(DimensionError):
            validate_measure([F(1)], dim=2)

    def test_point_mass(self):
        assert point_mass(3, 1) == (0, 1, 0)
        with pytest.raises(DimensionError):
            point_mass(3, 3)
