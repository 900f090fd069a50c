import random

import pytest

from pnpl.analysis import oracle_equivalence
from pnpl.derive import Limits, build_rg, derive_product, flatten
from pnpl.errors import InvalidConfigurationError, StateLimitExceeded, TokenLimitExceeded
from pnpl.feature_model import ALTERNATIVE, FeatureModel, Group
from pnpl.formula import TRUE, parse_formula, to_config_set
from pnpl.frg import PAPER_LITERAL, SOUND, build_frg, filter_report, project
from pnpl.generators import random_pnpl
from pnpl.net import Arc, Marking, Net150, Place, Transition, render_marking

PRUNED = {"ItemA(1)ItemB(1)", "ItemB(1)Completed(1)", "ItemA(1)Completed(1)", "Completed(2)"}


def labels(frg):
    return {render_marking(s.marking, frg.net.place_names) for s in frg.states}


def test_running_sound(running):
    net, fm = running
    frg = build_frg(net, fm)
    assert (frg.stats.states, frg.stats.edges, frg.stats.rejections) == (12, 16, 0)
    assert frg.stats.inspections == 48
    assert frg.states[0].configs == to_config_set(TRUE, fm)
    assert filter_report(frg) == []


def test_first_edge_labels(running):
    net, fm = running
    frg = build_frg(net, fm)
    e = frg.edges[0]
    assert (render_marking(frg.states[e.source].marking), e.transition, str(e.annotation),
            render_marking(frg.states[e.target].marking)) == \
        ("Source(5)", "startA", "ItemA", "Source(3)ItemA(1)")


def test_xor_reproduces_pruned_region(running, running_xor):
    net, fm = running_xor
    frg = build_frg(net, fm)
    assert (frg.stats.states, frg.stats.edges) == (8, 8)
    unfiltered = {render_marking(m, net.place_names) for m in build_rg(flatten(net)).states}
    assert unfiltered - labels(frg) == PRUNED


def test_xor_filter_report(running_xor):
    net, fm = running_xor
    report = [(render_marking(m), t, str(c), r) for m, t, c, r in filter_report(build_frg(net, fm))]
    assert report[0] == ("Source(3)ItemA(1)", "startB", "ItemA & ItemB", "unsat under C")
    assert len(report) == 4
    assert all(r == "unsat under C" for *_, r in report)


def test_variability_free_degenerate():
    fm = FeatureModel(("R",), "R")
    net = Net150([Place("p"), Place("q")], [Transition("t"), Transition("u")],
                 [Arc("p", "t"), Arc("t", "q"), Arc("q", "u"), Arc("u", "p")], Marking({"p": 2}))
    frg = build_frg(net, fm)
    rg = build_rg(flatten(net))
    assert {s.marking for s in frg.states} == rg.state_set
    assert len(frg.edges) == len(rg.edges)
    assert all(e.annotation == TRUE for e in frg.edges)
    assert filter_report(frg) == []


def test_edge_annotation_law(running, running_xor):
    for net, fm in (running, running_xor):
        frg = build_frg(net, fm)
        for e in frg.edges:
            assert frg.states[e.target].configs == frg.states[e.source].configs & e.configs
        assert all(s.configs for s in frg.states)


def test_connected_from_initial(running):
    frg = build_frg(*running)
    seen = {0}
    changed = True
    while changed:
        changed = False
        for e in frg.edges:
            if e.source in seen and e.target not in seen:
                seen.add(e.target)
                changed = True
    assert seen == set(range(len(frg.states)))


@pytest.mark.parametrize("names, counts", [(("ItemA",), (6, 6)), (("ItemB",), (3, 2)),
                                           (("ItemA", "ItemB"), (12, 16))])
def test_projection_matches_oracle(running, names, counts):
    net, fm = running
    rho = fm.from_selection(names)
    frg = build_frg(net, fm)
    proj = project(frg, rho, fm)
    oracle = build_rg(derive_product(net, rho, fm))
    assert (len(proj.states), len(proj.edges)) == counts
    assert proj.state_set == oracle.state_set and proj.edge_set == oracle.edge_set


def test_project_invalid(running):
    net, fm = running
    with pytest.raises(InvalidConfigurationError):
        project(build_frg(net, fm), {f: False for f in fm.features}, fm)


def test_restrict_narrows_feature_space(running):
    net, fm = running
    frg = build_frg(net, fm, restrict=parse_formula("ItemA & !ItemB"))
    assert frg.stats.states == 6
    with pytest.raises(InvalidConfigurationError):
        project(frg, fm.from_selection(["ItemB"]), fm)


def diverging_model():
    # the same marking is reached first under A, later under B
    fm = FeatureModel(("R", "A", "B"), "R", {"R": (Group(ALTERNATIVE, ("A", "B")),)})
    a, b = parse_formula("A"), parse_formula("B")
    net = Net150(
        [Place("p"), Place("q"), Place("r")],
        [Transition("tA", a), Transition("tB", b), Transition("u", b)],
        [Arc("p", "tA"), Arc("tA", "q"), Arc("p", "tB"), Arc("tB", "q"), Arc("q", "u"),
         Arc("u", "r")],
        Marking({"p": 1}),
    )
    return net, fm


def test_paper_literal_loses_successors():
    net, fm = diverging_model()
    literal = build_frg(net, fm, PAPER_LITERAL)
    sound = build_frg(net, fm, SOUND)
    assert literal.stats.states == 2 and sound.stats.states == 4
    assert oracle_equivalence(net, fm, SOUND).passed
    report = oracle_equivalence(net, fm, PAPER_LITERAL)
    assert not report.passed
    failing = [p for p in report.products if not p.passed]
    assert [p.label for p in failing] == ["B"]
    assert failing[0].missing_states == [Marking({"q": 1}), Marking({"r": 1})]


def test_paper_literal_running_example(running):
    frg = build_frg(*running, mode=PAPER_LITERAL)
    assert (frg.stats.states, frg.stats.edges) == (12, 16)


@pytest.mark.parametrize("seed", range(30))
def test_tightening_never_adds_states(seed):
    rng = random.Random(seed)
    net, fm = random_pnpl(rng)
    if len(fm.features) < 2:
        return
    extra = parse_formula(f"!{fm.features[-1]}")
    try:
        tight = FeatureModel(fm.features, fm.root, fm.groups, fm.constraints + (extra,))
    except Exception:
        return
    loose, narrow = build_frg(net, fm), build_frg(net, tight)
    assert narrow.stats.states <= loose.stats.states
    assert {s.marking for s in narrow.states} <= {s.marking for s in loose.states}


def test_frg_limits():
    fm = FeatureModel(("R",), "R")
    net = Net150([Place("p")], [Transition("t")], [Arc("t", "p")])
    with pytest.raises(StateLimitExceeded):
        build_frg(net, fm, limits=Limits(max_states=20))
    with pytest.raises(TokenLimitExceeded) as e:
        build_frg(net, fm, limits=Limits(max_tokens=5))
    assert e.value.place == "p"


def test_unknown_mode(running):
    with pytest.raises(ValueError):
        build_frg(*running, mode="fast")


def test_inspections_bound_random():
    for seed in range(50):
        net, fm = random_pnpl(random.Random(seed))
        frg = build_frg(net, fm)
        assert frg.stats.inspections <= frg.stats.states * len(net.transitions)


