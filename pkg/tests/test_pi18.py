import importlib.resources

import pytest

from fibrecert.pi18 import pi18_report
from fibrecert.report import FAIL, INCOMPLETE


def shipped_path():
    return str(importlib.resources.files("fibrecert") / "data" / "pi18_ledger.txt")


def shipped_text():
    return (
        importlib.resources.files("fibrecert") / "data" / "pi18_ledger.txt"
    ).read_text()


@pytest.fixture()
def tmp_ledger(tmp_path):
    def write(text):
        path = tmp_path / "ledger.txt"
        path.write_text(text)
        return str(path)

    return write


class TestShippedReplay:
    def test_all_steps_pass(self):
        rep = pi18_report(shipped_path())
        assert rep.ok
        assert rep.complete

    def test_final_orders(self):
        rep = pi18_report(shipped_path())
        final = rep.children[3]
        computed = [c for c in final.checks if c.name == "computed group"][0]
        assert computed.data["summand_orders"] == [2, 4, 8, 32]
        assert computed.data["total_order"] == 2048  # 2^11

    def test_skeleton_groups_reported(self):
        rep = pi18_report(shipped_path())
        two_cell = rep.children[1]
        orders = [c for c in two_cell.checks if c.name == "group orders"][0]
        assert orders.data["orders"] == [2, 16, 8]
        three_cell = rep.children[2]
        quot = [c for c in three_cell.checks if c.name == "quotient by the boundary image"][0]
        assert quot.data["computed"] == [2, 16, 4]

    def test_extension_candidate_count_includes_answer(self):
        rep = pi18_report(shipped_path())
        final = rep.children[3]
        cand = [c for c in final.checks if c.name == "extension candidates"][0]
        assert cand.status == "pass"
        assert cand.data["candidate_count"] >= 1


class TestNegativeControls:
    def test_deleted_boundary_relation_makes_step_incomplete(self, tmp_ledger):
        text = shipped_text()
        start = text.index("relation rel_eta_cube_15")
        end = text.index("}", start) + 1
        path = tmp_ledger(text[:start] + text[end:])
        rep = pi18_report(path)
        three_cell = rep.children[2]
        statuses = [c.status for c in three_cell.checks]
        assert INCOMPLETE in statuses
        assert not rep.complete

    def test_coextension_order_8_fails_step_one(self, tmp_ledger):
        text = shipped_text()
        text = text.replace(
            "generator coext_nu5eta8sq_2sigma10 {\n  degree: 18\n  target: X2\n  order: 16",
            "generator coext_nu5eta8sq_2sigma10 {\n  degree: 18\n  target: X2\n  order: 8",
        )
        text = text.replace(
            "orders: [2, 16, 8]\n  gens: [i25_nu5_sigma8_nu15, coext_nu5eta8sq_2sigma10",
            "orders: [2, 8, 8]\n  gens: [i25_nu5_sigma8_nu15, coext_nu5eta8sq_2sigma10",
        )
        path = tmp_ledger(text)
        rep = pi18_report(path)
        two_cell = rep.children[1]
        order_check = [c for c in two_cell.checks if c.name == "coextension order"][0]
        assert order_check.status == FAIL
        assert not rep.ok

    def test_wrong_middle_group_fails_exactness(self, tmp_ledger):
        text = shipped_text().replace(
            "group pi18_X3 {\n  orders: [2, 16, 4]",
            "group pi18_X3 {\n  orders: [2, 16, 8]",
        )
        text = text.replace(
            "generator i2_i3i4_nu15 {\n  degree: 18\n  target: X3\n  order: 4",
            "generator i2_i3i4_nu15 {\n  degree: 18\n  target: X3\n  order: 8",
        )
        path = tmp_ledger(text)
        rep = pi18_report(path)
        assert not rep.ok
