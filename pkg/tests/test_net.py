import pytest
from hypothesis import given
from hypothesis import strategies as st

from pnpl.errors import NotEnabledError
from pnpl.feature_model import FeatureModel
from pnpl.formula import TRUE, parse_formula, to_config_set
from pnpl.net import (
    Arc, Marking, Net150, Place, Transition, effective_pc, enabled, fire, render_marking,
    validate_net,
)


def m(**counts):
    return Marking(counts)


class TestMarking:
    def test_zero_entries_ignored(self):
        assert Marking({"a": 0, "b": 2}) == Marking({"b": 2})
        assert hash(Marking({"a": 0, "b": 2})) == hash(Marking({"b": 2}))
        assert Marking({"b": 2})["a"] == 0

    def test_order_irrelevant_for_equality(self):
        assert Marking([("a", 1), ("b", 2)]) == Marking([("b", 2), ("a", 1)])

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Marking({"a": -1})


class TestRender:
    def test_label_format(self):
        assert render_marking(m(Source=3, ItemA=1)) == "Source(3)ItemA(1)"

    def test_empty(self):
        assert render_marking(Marking({"Source": 0})) == "empty"

    def test_completed(self):
        assert render_marking(m(Completed=2)) == "Completed(2)"

    def test_declaration_order(self, running):
        net, _ = running
        assert render_marking(net.marking({"ItemA": 1, "Source": 3}), net.place_names) == \
            "Source(3)ItemA(1)"


class TestValidate:
    def test_running_example_clean(self, running):
        net, fm = running
        assert validate_net(net, fm) == []

    def test_zero_weight(self, running):
        _, fm = running
        net = Net150([Place("p")], [Transition("t")], [Arc("p", "t", 0)])
        issues = validate_net(net, fm)
        assert [i.category for i in issues] == ["nonpositive weight"]

    def test_dead_element(self, running):
        _, fm = running
        net = Net150([Place("p", parse_formula("ItemA & !ItemA"))], [], [])
        issues = validate_net(net, fm)
        assert [(i.severity, i.category, i.element) for i in issues] == \
            [("warning", "dead element", "p")]

    def test_structural_errors(self, running):
        _, fm = running
        net = Net150(
            [Place("p"), Place("p"), Place("q")],
            [Transition("t")],
            [Arc("p", "q"), Arc("p", "t"), Arc("p", "t"), Arc("t", "zz")],
        )
        cats = sorted(i.category for i in validate_net(net, fm))
        assert cats == ["duplicate arc", "duplicate name", "not bipartite", "unknown element"]

    def test_undeclared_feature(self, running):
        _, fm = running
        net = Net150([Place("p", parse_formula("Nope"))], [], [])
        assert [i.category for i in validate_net(net, fm)] == ["undeclared feature"]


class TestEffectivePc:
    def test_start_a_is_item_a(self, running):
        net, fm = running
        assert to_config_set(effective_pc(net, "startA"), fm) == \
            to_config_set(parse_formula("ItemA"), fm)

    def test_all_true(self):
        net = Net150([Place("p")], [Transition("t")], [Arc("p", "t")])
        assert effective_pc(net, "t") == TRUE

    def test_arc_pc_joins(self, running):
        _, fm = running
        net = Net150(
            [Place("p")], [Transition("t", parse_formula("ItemA"))],
            [Arc("p", "t", 1, parse_formula("ItemB"))],
        )
        assert to_config_set(effective_pc(net, "t"), fm) == \
            to_config_set(parse_formula("ItemA & ItemB"), fm)


class TestFiring:
    def test_enabled(self, running):
        net, _ = running
        assert enabled(net, m(Source=5), "startA")
        assert not enabled(net, m(Source=1), "startA")

    def test_no_inputs_always_enabled(self):
        net = Net150([Place("p")], [Transition("t")], [Arc("t", "p")])
        assert enabled(net, Marking(), "t")

    def test_fire_start_a(self, running):
        net, _ = running
        before = net.marking({"Source": 5})
        assert fire(net, before, "startA") == m(Source=3, ItemA=1)
        assert before == m(Source=5)

    def test_fire_start_b(self, running):
        net, _ = running
        assert fire(net, m(Source=5), "startB") == m(Source=2, ItemB=1)

    def test_isolated_transition_is_identity(self):
        net = Net150([Place("p")], [Transition("t")], [])
        assert fire(net, m(p=4), "t") == m(p=4)

    def test_not_enabled(self, running):
        net, _ = running
        with pytest.raises(NotEnabledError):
            fire(net, m(Source=2), "startB")

    @given(st.lists(st.integers(0, 6), min_size=4, max_size=4), st.sampled_from(
        ["startA", "endA", "startB", "endB"]), st.lists(st.integers(0, 3), min_size=4, max_size=4))
    def test_properties(self, running, counts, t, extra):
        net, _ = running
        mk = net.marking(dict(zip(net.place_names, counts)))
        bigger = net.marking({p: c + e for p, c, e in zip(net.place_names, counts, extra)})
        if enabled(net, mk, t):
            assert enabled(net, bigger, t)  # monotone
            out = fire(net, mk, t)
            assert out == fire(net, mk, t)
            delta = sum(a.weight for a in net.outputs[t]) - sum(a.weight for a in net.inputs[t])
            assert out.total() == mk.total() + delta
