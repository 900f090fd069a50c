"""Per-product derivation and brute-force reachability graphs.

This is deliberately the naive route: configure the 150% net for a single
product, then run an ordinary token game over plain markings.  It shares no
exploration code with the family-based builder and serves as its oracle.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from pnpl.errors import InvalidConfigurationError, StateLimitExceeded, TokenLimitExceeded
from pnpl.feature_model import Assignment, FeatureModel, describe, is_valid_configuration
from pnpl.formula import evaluate
from pnpl.net import Marking, Net150

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Limits:
    max_states: int = 1_000_000
    max_tokens: int = 10_000


@dataclass(frozen=True, eq=False)
class PlainNet:
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    arcs: tuple[tuple[str, str, int], ...]
    initial: Marking

    @cached_property
    def inputs(self):
        return {t: [(s, w) for s, d, w in self.arcs if d == t] for t in self.transitions}

    @cached_property
    def outputs(self):
        return {t: [(d, w) for s, d, w in self.arcs if s == t] for t in self.transitions}


@dataclass(frozen=True, eq=False)
class Rg:
    states: tuple[Marking, ...]
    edges: tuple[tuple[Marking, str, Marking], ...]
    initial: Marking
    inspections: int = 0

    @cached_property
    def state_set(self) -> frozenset[Marking]:
        return frozenset(self.states)

    @cached_property
    def edge_set(self) -> frozenset[tuple[Marking, str, Marking]]:
        return frozenset(self.edges)

    def terminal_states(self) -> list[Marking]:
        sources = {e[0] for e in self.edges}
        return [s for s in self.states if s not in sources]


def derive_product(net: Net150, rho: Assignment, fm: FeatureModel) -> PlainNet:
    """Configure the 150% net for one product.

    Elements whose presence condition is false under ``rho`` disappear,
    along with arcs touching them.  A transition also disappears when any
    of its arcs does, so that it never fires in a mutilated form.
    """
    if not is_valid_configuration(fm, rho):
        raise InvalidConfigurationError(f"not a valid configuration: {describe(fm, rho)}")
    places = [p.name for p in net.places if evaluate(p.pc, rho)]
    kept_places = set(places)
    transitions = []
    for t in net.transitions:
        if not evaluate(t.pc, rho):
            continue
        incident = [a for a in net.arcs if t.name in (a.source, a.target)]
        if all(evaluate(a.pc, rho) for a in incident) and all(
            (a.source if a.target == t.name else a.target) in kept_places for a in incident
        ):
            transitions.append(t.name)
    kept_trans = set(transitions)
    arcs = tuple(
        (a.source, a.target, a.weight)
        for a in net.arcs
        if evaluate(a.pc, rho)
        and {a.source, a.target} <= kept_places | kept_trans
    )
    dropped = [p for p in net.initial if p not in kept_places]
    if dropped:
        log.warning(
            "product %s: dropping initial tokens on removed places %s",
            describe(fm, rho), ", ".join(dropped),
        )
    initial = Marking((p, net.initial[p]) for p in places)
    return PlainNet(tuple(places), tuple(transitions), arcs, initial)


def flatten(net: Net150) -> PlainNet:
    """The 150% structure with every presence condition ignored."""
    return PlainNet(
        net.place_names,
        net.transition_names,
        tuple((a.source, a.target, a.weight) for a in net.arcs),
        net.initial,
    )


def build_rg(net: PlainNet, limits: Limits = Limits(), order: str = "bfs") -> Rg:
    """Reachability graph of a plain net by exhaustive token game."""
    if order not in ("bfs", "dfs"):
        raise ValueError(f"unknown order {order!r}")
    m0 = Marking((p, net.initial[p]) for p in net.places)
    states = [m0]
    seen = {m0}
    edges = []
    frontier = deque([m0])
    inspections = 0
    pop = frontier.popleft if order == "bfs" else frontier.pop
    while frontier:
        m = pop()
        for t in net.transitions:
            inspections += 1
            if any(m[p] < w for p, w in net.inputs[t]):
                continue
            counts = dict(m)
            for p, w in net.inputs[t]:
                counts[p] -= w
            for p, w in net.outputs[t]:
                counts[p] = counts.get(p, 0) + w
                if counts[p] > limits.max_tokens:
                    raise TokenLimitExceeded(p, counts[p], limits.max_tokens)
            succ = Marking((p, counts.get(p, 0)) for p in net.places)
            edges.append((m, t, succ))
            if succ not in seen:
                seen.add(succ)
                states.append(succ)
                if len(states) > limits.max_states:
                    raise StateLimitExceeded(len(states), limits.max_states)
                frontier.append(succ)
    return Rg(tuple(states), tuple(edges), m0, inspections)
