import pytest

from fibrecert.loopfib import (
    LoopFibreProblem,
    MemoryBudgetError,
    cotensor_basis,
    cotensor_fiber_homology,
    cotensor_report,
    coaction_defect,
    fiber_generator_ladder,
    in_cotensor,
    ladder_series_identity,
    serre_factorization_check,
    transgression_table,
)
from fibrecert.tensoralg import ad_power, product


def free_dims_oracle(gen_degrees, cutoff):
    """Independent recurrence: t_0 = 1, t_d = sum_i t_{d - g_i}."""
    t = [0] * (cutoff + 1)
    t[0] = 1
    for d in range(1, cutoff + 1):
        t[d] = sum(t[d - g] for g in gen_degrees if g <= d)
    return t


class TestProblem:
    def test_validation(self):
        with pytest.raises(ValueError):
            LoopFibreProblem(1, 5, 2, 10)
        with pytest.raises(ValueError):
            LoopFibreProblem(5, 5, 2, 10)
        with pytest.raises(ValueError):
            LoopFibreProblem(3, 5, 4, 10)

    def test_ladder_degrees(self):
        prob = LoopFibreProblem(5, 7, 2, 24)
        assert prob.ladder_degrees() == [4, 10, 16, 22]


class TestCotensor:
    def test_two_cell_suspension_case(self):
        # dims frozen from the independent recurrence on degrees {4,10,16,22}
        prob = LoopFibreProblem(5, 7, 2, 24)
        dims = cotensor_fiber_homology(prob)
        oracle = free_dims_oracle([4, 10, 16, 22], 24)
        assert dims == oracle
        at = {d: dims[d] for d in (0, 4, 8, 10, 12, 14, 16, 18, 20)}
        assert at == {0: 1, 4: 1, 8: 1, 10: 1, 12: 1, 14: 2, 16: 2, 18: 3, 20: 4}

    def test_degree_zero_always_one(self):
        for m, r in ((3, 6), (4, 9), (5, 7)):
            prob = LoopFibreProblem(m, r, 2, 6)
            assert cotensor_fiber_homology(prob)[0] == 1

    def test_low_degrees_vanish(self):
        prob = LoopFibreProblem(5, 7, 2, 10)
        dims = cotensor_fiber_homology(prob)
        for d in range(1, 4):  # below |u| = m-1 nothing lives
            assert dims[d] == 0

    def test_dims_equal_ladder_series_grid(self):
        for m, r in ((5, 7), (3, 6), (4, 9)):
            for p in (2, 5):
                prob = LoopFibreProblem(m, r, p, 22)
                dims = cotensor_fiber_homology(prob)
                oracle = free_dims_oracle(prob.ladder_degrees(), 22)
                assert dims == oracle, (m, r, p)

    def test_ad_powers_in_cotensor(self):
        prob = LoopFibreProblem(3, 6, 5, 30)
        alg = prob.algebra()
        u, v = alg.generator("u"), alg.generator("v")
        for i in range(5):
            el = ad_power(u, v, i)
            assert in_cotensor(el), i

    def test_unit_and_u_invariant_v_not(self):
        prob = LoopFibreProblem(5, 7, 2, 10)
        alg = prob.algebra()
        assert in_cotensor(alg.unit())
        assert in_cotensor(alg.generator("u"))
        assert not in_cotensor(alg.generator("v"))
        assert coaction_defect(alg.generator("v")) == {((), 1): 1}

    def test_product_closure(self):
        prob = LoopFibreProblem(5, 7, 2, 20)
        basis = cotensor_basis(prob)
        for d1 in range(1, 20):
            for d2 in range(1, 20 - d1 + 1):
                for a in basis[d1]:
                    for b in basis[d2]:
                        assert in_cotensor(product(a, b)), (d1, d2)

    def test_report(self):
        rep = cotensor_report(LoopFibreProblem(5, 7, 2, 20), ad_count=3,
                              closure_degree=14)
        assert rep.ok

    def test_memory_budget(self):
        with pytest.raises(MemoryBudgetError):
            cotensor_fiber_homology(LoopFibreProblem(2, 3, 2, 400))


class TestLadders:
    def test_f_ladder(self):
        ladder = fiber_generator_ladder(4, 1, "F", cutoff=24)
        assert ladder.degrees() == [4, 10, 16, 22]
        assert ladder.entries[0] == ("x", 4)
        assert ladder.entries[1] == ("ad^1(y)(x)", 10)

    def test_f2_f3(self):
        f2 = fiber_generator_ladder(4, 1, "F2")
        f3 = fiber_generator_ladder(4, 1, "F3")
        assert f2.degrees() == [4, 10]
        assert f3.degrees() == [4, 10, 16]
        # F3 extends F2 by exactly the 3n+2k+2 class
        assert f3.entries[:2] == f2.entries
        assert f3.degrees()[2] == 3 * 4 + 2 * 1 + 2

    def test_g_ladder(self):
        ladder = fiber_generator_ladder(4, 1, "G", cutoff=24)
        assert ladder.degrees() == [4, 14, 24]
        assert ladder.entries[1] == ("ad^1(z)(x)", 14)

    def test_unknown_stage(self):
        with pytest.raises(ValueError):
            fiber_generator_ladder(4, 1, "F4")


class TestSerreFactorization:
    def test_reference_case(self):
        assert serre_factorization_check(4, 1, 2, 40).ok

    def test_boundary_case(self):
        assert serre_factorization_check(2, 0, 2, 40).ok

    def test_grid(self):
        for n in range(2, 7):
            for k in range(0, 4):
                rep = serre_factorization_check(n, k, 2, 40)
                assert rep.ok, (n, k)

    def test_corrupted_ladder_fails(self):
        good = fiber_generator_ladder(4, 1, "F", cutoff=40).degrees()
        corrupted = list(good)
        corrupted[1] += 1
        assert ladder_series_identity([4, 6], good, 6, 40)
        assert not ladder_series_identity([4, 6], corrupted, 6, 40)


class TestTransgression:
    def test_reference_rows(self):
        rows = transgression_table(4, 1, 4)
        assert [(r.fibre_degree, r.loop_degree) for r in rows] == [
            (5, 4), (11, 10), (17, 16), (23, 22),
        ]

    def test_bottom_row(self):
        for n in range(2, 7):
            for k in range(0, 4):
                rows = transgression_table(n, k, 1)
                assert (rows[0].fibre_degree, rows[0].loop_degree) == (n + 1, n)

    def test_shift_always_one(self):
        for r in transgression_table(3, 2, 6):
            assert r.fibre_degree == r.loop_degree + 1

    def test_count_validation(self):
        with pytest.raises(ValueError):
            transgression_table(4, 1, 0)
