import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_models, brute_sat, selected
from pnpl.errors import FormulaSyntaxError, UndeclaredFeatureError
from pnpl.feature_model import ALTERNATIVE, MANDATORY, FeatureModel, Group
from pnpl.formula import (
    FALSE, TRUE, And, ConfigSet, Iff, Implies, Not, Or, Var, conj, disj, evaluate,
    parse_formula, satisfiable_with, to_config_set, to_text,
)
from pnpl.generators import random_feature_model

FEATS = {"ItemA", "ItemB"}


def formulas(names):
    leaves = st.one_of(st.sampled_from([TRUE, FALSE]), st.sampled_from([Var(n) for n in names]))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            kids.map(Not),
            st.tuples(st.sampled_from([And, Or, Implies, Iff]), kids, kids).map(
                lambda t: t[0](t[1], t[2])
            ),
        ),
        max_leaves=12,
    )


class TestParse:
    def test_single_variable(self):
        assert parse_formula("ItemA", FEATS) == Var("ItemA")

    def test_and_not(self):
        assert parse_formula("ItemA & !ItemB", FEATS) == And(Var("ItemA"), Not(Var("ItemB")))

    def test_undeclared(self):
        with pytest.raises(UndeclaredFeatureError) as e:
            parse_formula("ItemC", FEATS)
        assert e.value.name == "ItemC"

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("a | b & c", Or(Var("a"), And(Var("b"), Var("c")))),
            ("a -> b -> c", Implies(Var("a"), Implies(Var("b"), Var("c")))),
            ("a & b & c", And(And(Var("a"), Var("b")), Var("c"))),
            ("a <-> b -> c", Iff(Var("a"), Implies(Var("b"), Var("c")))),
            ("!a & b", And(Not(Var("a")), Var("b"))),
            ("!(a & b)", Not(And(Var("a"), Var("b")))),
            ("  true|false ", Or(TRUE, FALSE)),
        ],
    )
    def test_precedence(self, text, expected):
        assert parse_formula(text) == expected

    @pytest.mark.parametrize(
        "text, pos",
        [("a &", 3), ("(a", 2), ("a b", 2), ("", 0), ("a $ b", 2), ("a & )", 4)],
    )
    def test_syntax_error_position(self, text, pos):
        with pytest.raises(FormulaSyntaxError) as e:
            parse_formula(text)
        assert e.value.position == pos

    @given(formulas(["a", "b", "c"]))
    def test_print_parse_roundtrip(self, f):
        assert parse_formula(to_text(f)) == f

    def test_minimal_parentheses(self):
        f = And(Var("a"), And(Var("b"), Var("c")))
        assert to_text(f) == "a & (b & c)"
        assert to_text(Implies(Implies(Var("a"), Var("b")), Var("c"))) == "(a -> b) -> c"


class TestEvaluate:
    def test_constant(self):
        assert evaluate(TRUE, {}) is True

    def test_and(self):
        assert evaluate(parse_formula("ItemA & ItemB"), {"ItemA": True, "ItemB": False}) is False

    def test_or(self):
        assert evaluate(parse_formula("ItemA | ItemB"), {"ItemA": False, "ItemB": True}) is True

    def test_implies_iff(self):
        a = {"a": True, "b": False}
        assert evaluate(parse_formula("a -> b"), a) is False
        assert evaluate(parse_formula("b -> a"), a) is True
        assert evaluate(parse_formula("a <-> b"), a) is False


class TestConjDisj:
    def test_conj_drops_true_and_duplicates(self):
        assert conj(TRUE, Var("a"), Var("a")) == Var("a")
        assert conj() == TRUE
        assert conj(Var("a"), FALSE) == FALSE
        assert conj(And(Var("a"), Var("b")), Var("a")) == And(Var("a"), Var("b"))

    def test_disj(self):
        assert disj() == FALSE
        assert disj(Var("a"), TRUE) == TRUE


class TestConfigSets:
    def test_true_is_all_three(self, running):
        _, fm = running
        cs = to_config_set(TRUE, fm)
        assert len(cs) == 3

    def test_item_a_and_b(self, running):
        _, fm = running
        f = parse_formula("ItemA & ItemB", fm.features)
        cs = to_config_set(f, fm)
        got = {selected(fm.configuration(i)) for i in cs}
        assert got == brute_models(f, fm)
        assert got == {frozenset({"FlexibleAssemblyLine", "Product", "ItemA", "ItemB"})}

    def test_contradiction(self, running):
        _, fm = running
        assert not to_config_set(parse_formula("ItemA & !ItemA"), fm)

    def test_set_ops(self):
        a = ConfigSet.of([0, 2], 4)
        b = ConfigSet.of([2, 3], 4)
        assert list(a & b) == [2]
        assert list(a | b) == [0, 2, 3]
        assert list(~a) == [1, 3]
        assert list(a - b) == [0]
        assert (a & b).issubset(a)
        with pytest.raises(ValueError):
            a & ConfigSet.full(3)


def _xor_model():
    return FeatureModel(
        ("FlexibleAssemblyLine", "Product", "ItemA", "ItemB"), "FlexibleAssemblyLine",
        {"FlexibleAssemblyLine": (Group(MANDATORY, ("Product",)),),
         "Product": (Group(ALTERNATIVE, ("ItemA", "ItemB")),)},
    )


class TestSatisfiable:
    def test_or_group(self, running):
        _, fm = running
        f = parse_formula("ItemA & ItemB")
        assert satisfiable_with(f, fm) is True
        assert brute_sat(f, fm) is True

    def test_xor_group(self):
        fm = _xor_model()
        f = parse_formula("ItemA & ItemB")
        assert satisfiable_with(f, fm) is False
        assert brute_sat(f, fm) is False

    def test_false(self, running):
        assert satisfiable_with(FALSE, running[1]) is False


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 8), st.data())
def test_config_set_homomorphism(seed, n, data):
    fm = random_feature_model(random.Random(seed), n)
    feats = list(fm.features)
    f = data.draw(formulas(feats))
    g = data.draw(formulas(feats))
    cf, cg = to_config_set(f, fm), to_config_set(g, fm)
    assert to_config_set(And(f, g), fm) == cf & cg
    assert to_config_set(Or(f, g), fm) == cf | cg
    assert to_config_set(Not(f), fm) == ~cf
    assert {selected(fm.configuration(i)) for i in cf} == brute_models(f, fm)
    assert satisfiable_with(f, fm) == brute_sat(f, fm)
