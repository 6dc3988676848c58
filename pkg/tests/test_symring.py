import random
from itertools import permutations as iperms

import pytest

from fibrecert.fplinalg import GradedVectorSpace, SparseEchelon
from fibrecert.symring import (
    GroupRingElement,
    Permutation,
    bracket_idempotent,
    dynkin_element,
    idempotent_stable_image,
    koszul_action,
    lie_component,
    ring_mul,
    span_equal,
)
from fibrecert.tensoralg import TensorAlgebra, ad_power, bracket


def xy_space(p=2):
    return GradedVectorSpace(p, {4: ["x"], 6: ["y"]})


class TestKoszulAction:
    def test_identity(self):
        word = (("x", 4), ("y", 6))
        out, sign = koszul_action(Permutation.identity(2), word)
        assert out == word and sign == 1

    def test_swap_even_degrees(self):
        word = (("x", 4), ("y", 6))
        out, sign = koszul_action(Permutation((2, 1)), word)
        assert out == (("y", 6), ("x", 4))
        assert sign == 1

    def test_swap_odd_degrees(self):
        word = (("a", 3), ("b", 3))
        out, sign = koszul_action(Permutation((2, 1)), word)
        assert out == (("b", 3), ("a", 3))
        assert sign == -1

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            koszul_action(Permutation.identity(3), (("x", 4),))

    def test_group_action_signs_compose(self):
        rng = random.Random(5)
        for _ in range(60):
            m = rng.randrange(2, 6)
            degs = [rng.randrange(1, 6) for _ in range(m)]
            word = tuple((f"g{i}", degs[i]) for i in range(m))
            s = Permutation(tuple(rng.sample(range(1, m + 1), m)))
            t = Permutation(tuple(rng.sample(range(1, m + 1), m)))
            w_t, sign_t = koszul_action(t, word)
            w_st, sign_st = koszul_action(s, w_t)
            w_comp, sign_comp = koszul_action(s.compose(t), word)
            assert w_st == w_comp
            assert sign_t * sign_st == sign_comp


class TestGroupRing:
    def test_unit(self):
        e = GroupRingElement.unit(3)
        beta = dynkin_element(3)
        assert ring_mul(e, beta) == beta
        assert ring_mul(beta, e) == beta

    def test_square_of_one_minus_swap(self):
        swap = Permutation((2, 1))
        el = GroupRingElement(2, {Permutation.identity(2): 1, swap: -1})
        sq = ring_mul(el, el)
        assert sq == GroupRingElement(2, {Permutation.identity(2): 2, swap: -2})

    def test_mismatch(self):
        with pytest.raises(ValueError):
            ring_mul(GroupRingElement.unit(2), GroupRingElement.unit(3))
        with pytest.raises(ValueError):
            ring_mul(GroupRingElement.unit(2), GroupRingElement.unit(2, p=5))


class TestDynkinElement:
    def test_m2(self):
        beta = dynkin_element(2)
        assert beta == GroupRingElement(
            2, {Permutation.identity(2): 1, Permutation((2, 1)): -1}
        )

    def test_m3_four_terms(self):
        beta = dynkin_element(3)
        assert len(beta.coeffs) == 4
        assert ring_mul(beta, beta) == 3 * beta

    def test_idempotency_relation(self):
        for m in range(2, 7):
            beta = dynkin_element(m)
            assert ring_mul(beta, beta) == m * beta, m

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            dynkin_element(1)
        with pytest.raises(ValueError):
            dynkin_element(9)

    def test_action_agrees_with_bracket_even_degrees(self):
        # the defining property: acting on x1...xm reproduces the left-normed
        # bracket, for even-degree letters (checked via the tensor algebra)
        rng = random.Random(9)
        for m in range(2, 6):
            beta = dynkin_element(m)
            degs = [2 * rng.randrange(1, 4) for _ in range(m)]
            alg = TensorAlgebra(5, [(f"g{i}", degs[i]) for i in range(m)])
            gens = [alg.generator(f"g{i}") for i in range(m)]
            el = gens[0]
            for g in gens[1:]:
                el = bracket(el, g)
            word = tuple((f"g{i}", degs[i]) for i in range(m))
            acted = beta.reduce_mod(5).act_on_word(word)
            converted = {
                tuple(alg.index[l] for l, _ in w): c for w, c in acted.items()
            }
            assert converted == el.coeffs, (m, degs)

    def test_action_agrees_with_bracket_graded(self):
        # graded version: odd-degree letters, Koszul-signed action
        rng = random.Random(21)
        for p in (5, 7):
            for m in range(2, 6):
                beta = dynkin_element(m)
                degs = [rng.randrange(1, 6) for _ in range(m)]
                alg = TensorAlgebra(p, [(f"g{i}", degs[i]) for i in range(m)])
                gens = [alg.generator(f"g{i}") for i in range(m)]
                el = gens[0]
                for g in gens[1:]:
                    el = bracket(el, g)
                word = tuple((f"g{i}", degs[i]) for i in range(m))
                acted = beta.reduce_mod(p).act_on_word(word)
                converted = {
                    tuple(alg.index[l] for l, _ in w): c for w, c in acted.items()
                }
                assert converted == el.coeffs, (p, m, degs)

    def test_beta2_action_is_bracket(self):
        beta = dynkin_element(2)
        acted = beta.act_on_word((("x", 4), ("y", 6)))
        assert acted == {(("x", 4), ("y", 6)): 1, (("y", 6), ("x", 4)): -1}


class TestIdempotentImage:
    def test_p_divides_m_rejected(self):
        with pytest.raises(ValueError):
            bracket_idempotent(3, 3)
        with pytest.raises(ValueError):
            bracket_idempotent(4, 2)

    def test_non_idempotent_rejected(self):
        V = xy_space(2)
        beta = dynkin_element(2).reduce_mod(2)  # beta^2 = 2 beta = 0 mod 2
        with pytest.raises(ValueError):
            idempotent_stable_image(beta, V, 2, 10)

    def test_cubic_image_degree14(self):
        for p in (2, 5):
            V = xy_space(p)
            e = bracket_idempotent(3, p)
            basis = idempotent_stable_image(e, V, 3, 14)
            assert len(basis) == 1
            alg = basis[0].algebra
            x, y = alg.generator("x"), alg.generator("y")
            target = bracket(bracket(x, y), x)
            assert span_equal(basis, [target], p)

    def test_cubic_image_degree16(self):
        for p in (2, 5):
            V = xy_space(p)
            e = bracket_idempotent(3, p)
            basis = idempotent_stable_image(e, V, 3, 16)
            assert len(basis) == 1
            alg = basis[0].algebra
            x, y = alg.generator("x"), alg.generator("y")
            target = bracket(bracket(x, y), y)
            assert span_equal(basis, [target], p)

    def test_cubic_image_pure_power_degree(self):
        for p in (2, 5):
            V = xy_space(p)
            e = bracket_idempotent(3, p)
            assert idempotent_stable_image(e, V, 3, 12) == []

    def test_iterating_idempotent_stabilises(self):
        # the stable image of the repeated sequence equals the image of e
        p = 5
        V = xy_space(p)
        e = bracket_idempotent(3, p)
        e2 = ring_mul(e, e)
        e3 = ring_mul(e2, e)
        for degree in (12, 14, 16, 18):
            b1 = idempotent_stable_image(e, V, 3, degree)
            b2 = idempotent_stable_image(e2, V, 3, degree)
            b3 = idempotent_stable_image(e3, V, 3, degree)
            assert span_equal(b1, b2, p)
            assert span_equal(b2, b3, p)

    def test_image_inside_lie_component(self):
        for p in (2, 5):
            for m in (2, 3):
                if m % p == 0:
                    continue
                V = GradedVectorSpace(p, {2: ["a"], 3: ["b"]})
                e = bracket_idempotent(m, p)
                for degree in range(2 * m, 3 * m + 1):
                    image = idempotent_stable_image(e, V, m, degree)
                    lie = lie_component(V, m, degree)
                    ech = SparseEchelon(p)
                    for el in lie:
                        ech.insert(el.coeffs)
                    for el in image:
                        assert ech.contains(el.coeffs), (p, m, degree)

    def test_image_equals_lie_component_even_generators(self):
        # cubic case on two even generators: idempotent image = Lie span
        for p in (2, 5):
            V = xy_space(p)
            e = bracket_idempotent(3, p)
            for degree in range(12, 19):
                image = idempotent_stable_image(e, V, 3, degree)
                lie = lie_component(V, 3, degree)
                assert span_equal(image, lie, p), (p, degree)


class TestLieComponent:
    def test_quadratic_even_self_bracket(self):
        V = xy_space(2)
        assert lie_component(V, 2, 8) == []

    def test_quadratic_mixed(self):
        V = xy_space(2)
        basis = lie_component(V, 2, 10)
        assert len(basis) == 1

    def test_cubic_degrees(self):
        V = xy_space(5)
        assert len(lie_component(V, 3, 14)) == 1
        assert len(lie_component(V, 3, 16)) == 1
        assert lie_component(V, 3, 12) == []
        assert lie_component(V, 3, 18) == []
