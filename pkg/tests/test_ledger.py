import importlib.resources

import pytest

from fibrecert.abelian import exactness_check
from fibrecert.ledger import ComposeError, Ledger, LedgerError, ledger_compose


def shipped_text():
    return (
        importlib.resources.files("fibrecert") / "data" / "pi18_ledger.txt"
    ).read_text()


@pytest.fixture(scope="module")
def shipped():
    return Ledger.parse(shipped_text())


MINI = """
ledger demo {
  prime: 2
}

generator f {
  degree: 10
  target: S8
  order: 4
}

generator g {
  degree: 12
  target: S10
  order: 2
}

generator h {
  degree: 12
  target: S8
  order: 8
}

relation name_h {
  path: [f, g]
  scalar: 2
  target: h
  cite: "demo"
}
"""


class TestParser:
    def test_mini_roundtrip(self):
        led = Ledger.parse(MINI)
        assert led.prime == 2
        assert led.generators["f"].order == 4
        assert led.relations[0].scalar == 2

    def test_unknown_kind_rejected(self):
        with pytest.raises(LedgerError):
            Ledger.parse("widget w {\n}\n")

    def test_unknown_field_rejected(self):
        bad = MINI.replace("order: 4", "colour: 4")
        with pytest.raises(LedgerError):
            Ledger.parse(bad)

    def test_missing_prime_rejected(self):
        with pytest.raises(LedgerError):
            Ledger.parse("generator a {\n  degree: 3\n}\n")

    def test_unresolved_name_rejected(self):
        bad = MINI + "\ngroup G {\n  orders: [2]\n  gens: [nope]\n}\n"
        with pytest.raises(LedgerError):
            Ledger.parse(bad)

    def test_non_composable_relation_rejected(self):
        bad = MINI.replace("target: S10", "target: S9")
        with pytest.raises(ComposeError):
            Ledger.parse(bad)

    def test_interior_scalar_rejected(self):
        bad = MINI.replace("path: [f, g]", "path: [f, 2, g]")
        with pytest.raises(ComposeError):
            Ledger.parse(bad)

    def test_comments_and_quotes(self):
        text = MINI + '\n# trailing comment\ngroup G {\n  orders: [4]\n  gens: [f]\n  cite: "has # and : inside"\n}\n'
        led = Ledger.parse(text)
        assert led.groups["G"].cite == "has # and : inside"


class TestCompose:
    def test_identity_path(self, shipped):
        res = shipped.compose(["nu15"])
        assert res.resolved and res.scalar == 1 and res.chain == ("nu15",)
        assert res.order == 8
        assert res.source_degree == 18

    def test_eta_cube_rewrite(self, shipped):
        res = shipped.compose(["i3", "i4", "eta15", "eta16", "eta17"])
        assert res.resolved
        assert res.scalar == 4
        assert res.chain == ("i3i4_nu15",)
        assert res.order == 2  # 4 * (order-8 generator)
        assert res.source_degree == 18

    def test_scalar_tail_multiplication(self, shipped):
        res = shipped.compose(["coext_nu5eta8sq_2sigma10", 8])
        assert res.resolved
        assert res.chain == ("i25_nu5_eta8_mu9",)
        assert res.order == 2

    def test_zero_absorption(self, shipped):
        res = shipped.compose(["i1", "i2", "i25", "eta5", "zeta6"])
        assert res.is_zero
        assert res.order == 1

    def test_boundary_nubar_vanishes(self, shipped):
        res = shipped.compose(["i1", "i2", "i25", "eta5", "nubar6", "nu14"])
        assert res.is_zero

    def test_non_composable_path(self, shipped):
        with pytest.raises(ComposeError):
            shipped.compose(["eta15", "nu15"])  # nu15 lands on S15, eta15 starts at S16

    def test_unknown_name(self, shipped):
        with pytest.raises(LedgerError):
            shipped.compose(["definitely_not_there"])

    def test_module_level_wrapper(self, shipped):
        res = ledger_compose(shipped, ["q", "coext_eta5_zeta6"])
        assert res.chain == ("zeta7",)

    def test_unit_ambiguity_not_used_for_rewrites(self, shipped):
        # the congruence relation (mod list) must not rewrite compositions
        res = shipped.compose(["Lif_nubar7nu15", 2])
        assert not res.resolved or res.chain == ("Lif_nubar7nu15",)
        assert res.scalar == 2


class TestDerivedOrders:
    def test_coextension_order_exactly_16(self, shipped):
        assert shipped.derived_order("coext_nu5eta8sq_2sigma10") == 16

    def test_final_coextension_order_8(self, shipped):
        # upper bound 8 from the shuffle relation, lower bound 8 from the lift
        assert shipped.derived_order("coext_eta5_zeta6") == 8

    def test_lif_order_32(self, shipped):
        # congruence with subordinate mod terms: 2*Lif has order 16
        assert shipped.derived_order("Lif_nubar7nu15") == 32

    def test_boundary_element_order(self, shipped):
        assert shipped.element_order("bdry_eta17sq") == 2

    def test_zero_order(self, shipped):
        assert shipped.element_order("zero") == 1


class TestFragments:
    def test_skeleton3_fragment_resolves_and_passes(self, shipped):
        frag = shipped.fragment("les_skeleton3")
        assert frag.images == [2, 128, 1, 2]
        rep = exactness_check(frag)
        assert rep.ok and rep.complete

    def test_pinch_fragment_resolves_and_passes(self, shipped):
        frag = shipped.fragment("les_pinch")
        assert frag.images == [1, 128, 16, 1]
        rep = exactness_check(frag)
        assert rep.ok and rep.complete

    def test_degree_soundness_of_compose(self, shipped):
        # output degree equals the source degree of the path
        for path in (
            ["i3", "i4", "nu15"],
            ["q", "coext_eta5_zeta6"],
            ["i3", "i4", "eta15", "eta16", "eta17"],
        ):
            res = shipped.compose(path)
            last = shipped.generators[path[-1]]
            assert res.source_degree == last.degree

    def test_unknown_fragment(self, shipped):
        with pytest.raises(LedgerError):
            shipped.fragment("nope")
