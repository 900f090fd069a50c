"""Feature-annotated reachability graphs (fRGs) of Petri net product lines.

The builder explores the 150% net breadth-first from the initial marking.
Every state carries a feature path, the set of configurations under which
the transitions fired so far are all present.  A firing whose candidate
path becomes empty under the feature model is cut by the conflict-detection
filter and recorded in the build's rejection list.

Two state-identity modes are offered:

``sound``
    A state is a ``(marking, feature path)`` pair, so the same marking
    reached under incomparable feature contexts yields distinct states.
    Projections onto any product equal that product's reachability graph.
``paper-literal``
    A state is a marking; the first feature path to reach it is kept and
    never revisited.  Useful for fidelity experiments only, since later
    arrivals under wider contexts are not propagated.

The hot loop lives in a kernel that is compiled with Cython when the
extension is available and falls back to pure Python otherwise; set
``PNPL_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

from pnpl import sat
from pnpl.derive import Limits, Rg
from pnpl.errors import InvalidConfigurationError
from pnpl.feature_model import Assignment, FeatureModel, describe
from pnpl.formula import TRUE, ConfigSet, Formula, conj, evaluate, to_config_set
from pnpl.net import Marking, Net150, effective_pc
from pnpl import _explore

if os.environ.get("PNPL_PURE_PYTHON"):
    _kernel, KERNEL = _explore.explore, "python"
else:
    try:
        from pnpl._cexplore import explore as _kernel

        KERNEL = "cython"
    except ImportError:  # extension not built
        _kernel, KERNEL = _explore.explore, "python"

SOUND = "sound"
PAPER_LITERAL = "paper-literal"
MODES = (SOUND, PAPER_LITERAL)

UNSAT_UNDER_C = "unsat under C"
UNSAT = "unsatisfiable"


@dataclass(frozen=True)
class FrgState:
    marking: Marking
    configs: ConfigSet
    formula: Formula


@dataclass(frozen=True)
class FrgEdge:
    source: int
    transition: str
    target: int
    annotation: Formula
    configs: ConfigSet


@dataclass(frozen=True)
class Rejection:
    state: int
    transition: str
    candidate: Formula
    reason: str


@dataclass(frozen=True)
class BuildStats:
    states: int
    edges: int
    inspections: int
    rejections: int
    transitions: int


@dataclass(frozen=True, eq=False)
class Frg:
    net: Net150
    fm: FeatureModel
    mode: str
    states: tuple[FrgState, ...]
    edges: tuple[FrgEdge, ...]
    rejections: tuple[Rejection, ...]
    stats: BuildStats
    initial: int = 0

    @cached_property
    def markings(self) -> dict[Marking, list[int]]:
        """State indices grouped by marking, in state order."""
        out: dict[Marking, list[int]] = {}
        for i, s in enumerate(self.states):
            out.setdefault(s.marking, []).append(i)
        return out


def _dense_net(net: Net150):
    pos = {p: i for i, p in enumerate(net.place_names)}
    pre = [tuple((pos[a.source], a.weight) for a in net.inputs[t]) for t in net.transition_names]
    post = [tuple((pos[a.target], a.weight) for a in net.outputs[t]) for t in net.transition_names]
    m0 = tuple(net.initial[p] for p in net.place_names)
    return m0, pre, post


def build_frg(
    net: Net150,
    fm: FeatureModel,
    mode: str = SOUND,
    limits: Limits = Limits(),
    restrict: Formula | None = None,
) -> Frg:
    """Build the fRG; ``restrict`` narrows the explored feature space."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    annotations = [effective_pc(net, t) for t in net.transition_names]
    tsets = [to_config_set(f, fm) for f in annotations]
    start_formula = TRUE if restrict is None else restrict
    start = to_config_set(start_formula, fm)
    m0, pre, post = _dense_net(net)
    markings, masks, parents, edges, rejections, inspections = _kernel(
        m0, pre, post, [s.mask for s in tsets], start.mask, mode == SOUND,
        limits.max_states, limits.max_tokens, list(net.place_names),
    )

    size = fm.space.size
    formulas: list[Formula] = []
    for parent in parents:
        if parent is None:
            formulas.append(start_formula)
        else:
            src, t = parent
            formulas.append(conj(formulas[src], annotations[t]))
    states = tuple(
        FrgState(net.marking(dict(zip(net.place_names, m))), ConfigSet(mask, size), f)
        for m, mask, f in zip(markings, masks, formulas)
    )
    names = net.transition_names
    frg_edges = tuple(
        FrgEdge(src, names[t], dst, annotations[t], tsets[t]) for src, t, dst in edges
    )
    rejected = []
    for src, t in rejections:
        cand = conj(formulas[src], annotations[t])
        reason = UNSAT_UNDER_C if sat.is_satisfiable(cand) else UNSAT
        rejected.append(Rejection(src, names[t], cand, reason))
    stats = BuildStats(len(states), len(frg_edges), inspections, len(rejected), len(names))
    return Frg(net, fm, mode, states, frg_edges, tuple(rejected), stats)


def filter_report(frg: Frg) -> list[tuple[Marking, str, Formula, str]]:
    """One ``(marking, transition, candidate path, reason)`` per rejected firing."""
    return [
        (frg.states[r.state].marking, r.transition, r.candidate, r.reason)
        for r in frg.rejections
    ]


def present_places(net: Net150, rho: Assignment) -> list[str]:
    return [p.name for p in net.places if evaluate(p.pc, rho)]


def project(frg: Frg, rho: Assignment, fm: FeatureModel | None = None) -> Rg:
    """Reachability graph of one product, read off the fRG.

    Markings are restricted to the places present in the product so the
    result is directly comparable with the derived product's graph.
    """
    fm = fm or frg.fm
    idx = fm.index_of(rho)
    if fm is not frg.fm and fm.space != frg.fm.space:
        raise InvalidConfigurationError("feature model differs from the one used to build the fRG")
    keep = present_places(frg.net, rho)
    kept: dict[int, Marking] = {}
    order: dict[Marking, None] = {}
    for i, s in enumerate(frg.states):
        if idx in s.configs:
            kept[i] = s.marking.restrict(keep)
            order.setdefault(kept[i])
    seen = set()
    edges = []
    for e in frg.edges:
        if idx in e.configs and e.source in kept and e.target in kept:
            triple = (kept[e.source], e.transition, kept[e.target])
            if triple not in seen:
                seen.add(triple)
                edges.append(triple)
    initial = frg.states[frg.initial].marking.restrict(keep)
    if frg.initial not in kept:
        raise InvalidConfigurationError(
            f"configuration {describe(fm, rho)} is outside the explored feature space"
        )
    return Rg(tuple(order), tuple(edges), initial)
