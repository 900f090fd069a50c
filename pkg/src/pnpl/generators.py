"""Synthetic product lines for tests and benchmarks."""

from __future__ import annotations

import random

from pnpl.errors import FeatureModelError
from pnpl.feature_model import ALTERNATIVE, MANDATORY, OPTIONAL, OR, FeatureModel, Group
from pnpl.formula import TRUE, And, Formula, Implies, Not, Or, Var
from pnpl.net import Arc, Marking, Net150, Place, Transition


def branching_family(k: int, tokens: int = 2) -> tuple[Net150, FeatureModel]:
    """Shared pipeline with ``k`` optional processing branches.

    Tokens flow ``Input -> load -> Buffer``, then through any selected
    branch ``start_i -> Work_i -> end_i`` into ``Output`` and finally
    ``ship -> Done``.
    """
    branches = [f"B{i}" for i in range(1, k + 1)]
    fm = FeatureModel(
        ("Line", *branches), "Line",
        {"Line": tuple(Group(OPTIONAL, (b,)) for b in branches)} if branches else {},
    )
    places = [Place("Input"), Place("Buffer"), Place("Output"), Place("Done")]
    transitions = [Transition("load"), Transition("ship")]
    arcs = [Arc("Input", "load"), Arc("load", "Buffer"), Arc("Output", "ship"), Arc("ship", "Done")]
    for i, b in enumerate(branches, start=1):
        pc = Var(b)
        places.append(Place(f"Work{i}", pc))
        transitions += [Transition(f"start{i}", pc), Transition(f"end{i}", pc)]
        arcs += [
            Arc("Buffer", f"start{i}"), Arc(f"start{i}", f"Work{i}"),
            Arc(f"Work{i}", f"end{i}"), Arc(f"end{i}", "Output"),
        ]
    m0 = Marking((p.name, tokens if p.name == "Input" else 0) for p in places)
    return Net150(places, transitions, arcs, m0), fm


def random_formula(rng: random.Random, features, depth: int = 2) -> Formula:
    if depth == 0 or rng.random() < 0.35:
        name = rng.choice(features)
        return Not(Var(name)) if rng.random() < 0.25 else Var(name)
    kind = rng.choice((And, Or, Implies, Not))
    if kind is Not:
        return Not(random_formula(rng, features, depth - 1))
    return kind(random_formula(rng, features, depth - 1), random_formula(rng, features, depth - 1))


def random_feature_model(rng: random.Random, n_features: int) -> FeatureModel:
    names = [f"F{i}" for i in range(n_features)]
    while True:
        groups: dict[str, list[Group]] = {}
        pending = names[1:]
        attached = [names[0]]
        while pending:
            parent = rng.choice(attached)
            kind = rng.choice((MANDATORY, OPTIONAL, OPTIONAL, OR, ALTERNATIVE))
            size = 1 if kind in (MANDATORY, OPTIONAL) else 2
            if len(pending) < size:
                kind, size = OPTIONAL, 1
            kids = tuple(pending[:size])
            pending = pending[size:]
            groups.setdefault(parent, []).append(Group(kind, kids))
            attached.extend(kids)
        constraints = ()
        if n_features > 1 and rng.random() < 0.3:
            constraints = (random_formula(rng, names, 1),)
        try:
            return FeatureModel(tuple(names), names[0], groups, constraints)
        except FeatureModelError:
            continue


def random_pnpl(
    rng: random.Random,
    max_places: int = 6,
    max_transitions: int = 6,
    max_weight: int = 3,
    max_features: int = 4,
    max_tokens: int = 6,
) -> tuple[Net150, FeatureModel]:
    """A small random product line whose nets never create tokens.

    Every transition consumes at least as many tokens as it produces, which
    bounds the state space by the initial token count.
    """
    fm = random_feature_model(rng, rng.randint(1, max_features))
    feats = list(fm.features)

    def pc(p_var):
        return random_formula(rng, feats) if rng.random() < p_var else TRUE

    n_p = rng.randint(1, max_places)
    n_t = rng.randint(1, max_transitions)
    places = [Place(f"p{i}", pc(0.2)) for i in range(n_p)]
    transitions = [Transition(f"t{i}", pc(0.6)) for i in range(n_t)]
    arcs = []
    for t in transitions:
        ins = rng.sample(range(n_p), 1 if rng.random() < 0.7 else min(2, n_p))
        consumed = 0
        for p in ins:
            # mostly unit weights so that something actually fires
            w = 1 if rng.random() < 0.6 else rng.randint(1, max_weight)
            consumed += w
            arcs.append(Arc(f"p{p}", t.name, w, pc(0.1)))
        outs = rng.sample(range(n_p), rng.randint(1 if rng.random() < 0.8 else 0, min(2, n_p)))
        budget = consumed
        for p in outs:
            if budget == 0:
                break
            w = rng.randint(1, min(max_weight, budget))
            budget -= w
            arcs.append(Arc(t.name, f"p{p}", w, pc(0.1)))
    total = rng.randint(min(2, max_tokens), max_tokens)
    counts = [0] * n_p
    for _ in range(total):
        counts[rng.randrange(n_p)] += 1
    m0 = Marking((f"p{i}", counts[i]) for i in range(n_p))
    return Net150(places, transitions, arcs, m0), fm
