import random

import pytest

from oracles import selected
from pnpl.derive import Limits, PlainNet, build_rg, derive_product, flatten
from pnpl.errors import InvalidConfigurationError, StateLimitExceeded, TokenLimitExceeded
from pnpl.generators import random_pnpl
from pnpl.net import Marking, Net150, Place, Transition, Arc

# (Source, ItemA, ItemB, Completed) vectors enumerated by hand
PLACES = ("Source", "ItemA", "ItemB", "Completed")


def mk(*v):
    return Marking(zip(PLACES, v))


HAND_A = {mk(5, 0, 0, 0), mk(3, 1, 0, 0), mk(1, 2, 0, 0), mk(3, 0, 0, 1), mk(1, 1, 0, 1),
          mk(1, 0, 0, 2)}
HAND_B = {mk(5, 0, 0, 0), mk(2, 0, 1, 0), mk(2, 0, 0, 1)}


def product(fm, *names):
    return fm.from_selection(names)


def test_derive_item_a(running):
    net, fm = running
    pn = derive_product(net, product(fm, "ItemA"), fm)
    assert set(pn.places) == {"Source", "ItemA", "Completed"}
    assert set(pn.transitions) == {"startA", "endA"}


def test_derive_both_is_full(running):
    net, fm = running
    pn = derive_product(net, product(fm, "ItemA", "ItemB"), fm)
    full = flatten(net)
    assert (pn.places, pn.transitions, pn.arcs) == (full.places, full.transitions, full.arcs)


def test_derive_invalid(running):
    net, fm = running
    rho = {f: False for f in fm.features}
    with pytest.raises(InvalidConfigurationError):
        derive_product(net, rho, fm)


def test_derive_drops_transition_with_removed_arc(running):
    _, fm = running
    from pnpl.formula import parse_formula

    net = Net150([Place("p")], [Transition("t")], [Arc("p", "t", 1, parse_formula("ItemB"))],
                 Marking({"p": 1}))
    pn = derive_product(net, product(fm, "ItemA"), fm)
    assert pn.transitions == () and pn.arcs == ()


def test_dropped_tokens_warn(running, caplog):
    _, fm = running
    from pnpl.formula import parse_formula

    net = Net150([Place("p", parse_formula("ItemB"))], [], [], Marking({"p": 2}))
    pn = derive_product(net, product(fm, "ItemA"), fm)
    assert pn.initial == Marking()
    assert "dropping initial tokens" in caplog.text


@pytest.mark.parametrize(
    "names, states, edges, hand",
    [(("ItemA",), 6, 6, HAND_A), (("ItemB",), 3, 2, HAND_B), (("ItemA", "ItemB"), 12, 16, None)],
)
def test_product_rgs(running, names, states, edges, hand):
    net, fm = running
    rg = build_rg(derive_product(net, product(fm, *names), fm))
    assert (len(rg.states), len(rg.edges)) == (states, edges)
    if hand is not None:
        assert rg.state_set == hand


def test_full_product_has_start_b_after_completion(running):
    net, fm = running
    rg = build_rg(derive_product(net, product(fm, "ItemA", "ItemB"), fm))
    assert (mk(3, 0, 0, 1), "startB", mk(0, 0, 1, 1)) in rg.edge_set


def test_rg_well_formed(running):
    net, fm = running
    rg = build_rg(flatten(net))
    assert rg.initial in rg.state_set
    assert all(s in rg.state_set and d in rg.state_set for s, _, d in rg.edges)
    # reachability of every state from the initial one
    succ = {}
    for s, _, d in rg.edges:
        succ.setdefault(s, set()).add(d)
    seen, stack = {rg.initial}, [rg.initial]
    while stack:
        for d in succ.get(stack.pop(), ()):
            if d not in seen:
                seen.add(d)
                stack.append(d)
    assert seen == rg.state_set
    assert set(rg.terminal_states()) == {mk(1, 0, 0, 2), mk(0, 0, 0, 2)}


@pytest.mark.parametrize("seed", range(60))
def test_bfs_dfs_same_graph(seed):
    net, fm = random_pnpl(random.Random(seed))
    pn = flatten(net)
    a, b = build_rg(pn, order="bfs"), build_rg(pn, order="dfs")
    assert a.state_set == b.state_set and a.edge_set == b.edge_set


def unbounded():
    return PlainNet(("p",), ("t",), (("t", "p", 1),), Marking())


def test_state_limit():
    with pytest.raises(StateLimitExceeded) as e:
        build_rg(unbounded(), Limits(max_states=50, max_tokens=10**6))
    assert e.value.limit == 50


def test_token_limit():
    with pytest.raises(TokenLimitExceeded) as e:
        build_rg(unbounded(), Limits(max_tokens=7))
    assert (e.value.place, e.value.tokens, e.value.limit) == ("p", 8, 7)


def test_deterministic(running):
    net, fm = running
    rho = product(fm, "ItemA", "ItemB")
    a = build_rg(derive_product(net, rho, fm))
    b = build_rg(derive_product(net, rho, fm))
    assert a.states == b.states and a.edges == b.edges
    assert selected(rho) >= {"ItemA", "ItemB"}
