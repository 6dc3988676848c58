import random
from itertools import product as iproduct

import numpy as np
import pytest

from fibrecert.fplinalg import (
    Fp,
    GradedVectorSpace,
    MatrixFp,
    PoincareSeries,
    SparseEchelon,
    kernel_basis,
    ps_free_tensor,
    ps_mul,
)


def count_words_brute(degrees, d):
    """Independent oracle: count words over the given letter degrees summing
    to d by explicit enumeration of compositions."""
    if d == 0:
        return 1
    total = 0
    for first in degrees:
        if first <= d:
            total += count_words_brute(degrees, d - first)
    return total


class TestFp:
    def test_arithmetic(self):
        a = Fp(3, 5)
        b = Fp(4, 5)
        assert (a + b).value == 2
        assert (a * b).value == 2
        assert (a - b).value == 4
        assert a.inverse().value == 2

    def test_rejects_composite_modulus(self):
        with pytest.raises(ValueError):
            Fp(1, 6)

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            Fp(1, 5) + Fp(1, 7)


class TestKernelBasis:
    def test_zero_map_1x1_f2(self):
        basis = kernel_basis(MatrixFp([[0]], 2))
        assert len(basis) == 1
        assert list(basis[0]) == [1]

    def test_identity_2x2_f5(self):
        basis = kernel_basis(MatrixFp([[1, 0], [0, 1]], 5))
        assert basis == []

    def test_rank_one_row_f2(self):
        basis = kernel_basis(MatrixFp([[1, 1]], 2))
        assert len(basis) == 1
        assert list(basis[0]) == [1, 1]

    def test_kernel_vectors_annihilate_and_are_independent(self):
        rng = random.Random(7)
        for p in (2, 5, 7):
            for _ in range(25):
                rows = rng.randrange(1, 6)
                cols = rng.randrange(1, 7)
                m = MatrixFp(
                    [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], p
                )
                basis = kernel_basis(m)
                for v in basis:
                    assert not m.mul_vector(v).any()
                if basis:
                    stacked = MatrixFp(np.array(basis), p)
                    assert stacked.rank() == len(basis)
                # rank-nullity
                assert m.rank() + len(basis) == cols

    def test_determinism(self):
        m1 = MatrixFp([[1, 2, 3], [2, 4, 6]], 7)
        m2 = MatrixFp([[1, 2, 3], [2, 4, 6]], 7)
        b1 = [list(v) for v in kernel_basis(m1)]
        b2 = [list(v) for v in kernel_basis(m2)]
        assert b1 == b2


class TestSparseEchelon:
    def test_matches_dense_rank(self):
        rng = random.Random(11)
        for p in (2, 5):
            for _ in range(30):
                rows = rng.randrange(1, 7)
                cols = rng.randrange(1, 7)
                data = [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]
                ech = SparseEchelon(p)
                for row in data:
                    ech.insert({j: v for j, v in enumerate(row) if v})
                assert ech.dim == MatrixFp(data, p).rank()

    def test_contains(self):
        ech = SparseEchelon(5)
        ech.insert({0: 1, 1: 2})
        ech.insert({1: 1})
        assert ech.contains({0: 3, 1: 1})
        assert not ech.contains({2: 1})


class TestPoincareSeries:
    def test_free_tensor_two_generators(self):
        # oracle: explicit word enumeration
        s = ps_free_tensor([4, 6], 12)
        expected = [count_words_brute([4, 6], d) for d in range(13)]
        assert list(s.coefficients) == expected
        assert expected == [1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 2, 0, 2]

    def test_free_tensor_degree_one(self):
        s = ps_free_tensor([1], 5)
        assert list(s.coefficients) == [1, 1, 1, 1, 1, 1]

    def test_free_tensor_empty(self):
        s = ps_free_tensor([], 4)
        assert list(s.coefficients) == [1, 0, 0, 0, 0]

    def test_degree_zero_generator_rejected(self):
        with pytest.raises(ValueError):
            ps_free_tensor([0, 3], 5)

    def test_mul_unit(self):
        a = PoincareSeries([1] * 7)
        one = PoincareSeries([1] + [0] * 6)
        assert ps_mul(a, one) == a

    def test_mul_binomial(self):
        a = PoincareSeries([1, 1, 0])
        assert list(ps_mul(a, a).coefficients) == [1, 2, 1]

    def test_mul_against_enumeration(self):
        # oracle: count pairs of words (one from each factor) degree by degree
        a = ps_free_tensor([4], 20)
        b = ps_free_tensor([6], 20)
        prod = ps_mul(a, b)
        for d in range(21):
            pairs = sum(
                1
                for i in range(0, d + 1, 4)
                if (d - i) % 6 == 0
            )
            assert prod.coefficient(d) == pairs

    def test_mul_cutoff_mismatch(self):
        with pytest.raises(ValueError):
            ps_mul(PoincareSeries([1, 0]), PoincareSeries([1, 0, 0]))

    def test_path_loop_fibration_identity_grid(self):
        # dimension shadow of the loop homology of the 2-cell fibre: the free
        # algebra on {n, n+k+1} factors as (free on the ad-ladder) x (free on
        # the loop class of the top sphere)
        cutoff = 40
        for n, k in iproduct(range(2, 7), range(0, 4)):
            b = n + k + 1
            ladder = [n + m * b for m in range(0, cutoff + 1) if n + m * b <= cutoff]
            lhs = ps_free_tensor([n, b], cutoff)
            rhs = ps_mul(ps_free_tensor(ladder, cutoff), ps_free_tensor([b], cutoff))
            assert lhs == rhs, (n, k)


class TestGradedVectorSpace:
    def test_basic(self):
        v = GradedVectorSpace(2, {4: ["x"], 6: ["y"]})
        assert v.dim(4) == 1
        assert v.dim(5) == 0
        assert v.dims(6) == [0, 0, 0, 0, 1, 0, 1]
        assert v.generators() == [("x", 4), ("y", 6)]

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError):
            GradedVectorSpace(2, {3: ["a", "a"]})

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            GradedVectorSpace(2, {-1: ["a"]})
