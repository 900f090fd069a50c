"""Behavioural queries on fRGs and the per-product oracle harness."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from pnpl.derive import Limits, Rg, build_rg, derive_product
from pnpl.feature_model import FeatureModel, describe
from pnpl.formula import FALSE, ConfigSet, Formula, Not, conj, disj, to_config_set
from pnpl.frg import SOUND, Frg, build_frg, project
from pnpl.net import Marking, Net150, effective_pc, enabled


@dataclass(frozen=True)
class QueryAnswer:
    marking: Marking
    configs: ConfigSet
    formula: Formula


def deadlocks(frg: Frg) -> list[QueryAnswer]:
    """Markings that are terminal for some configuration, grouped per marking.

    A configuration deadlocks at a marking when none of the transitions
    present in it is token-enabled there.
    """
    net, fm = frg.net, frg.fm
    t_pcs = {t: effective_pc(net, t) for t in net.transition_names}
    t_sets = {t: to_config_set(f, fm) for t, f in t_pcs.items()}
    out = []
    for marking, idxs in frg.markings.items():
        reach = ConfigSet.empty(fm.space.size)
        reach_f = []
        for i in idxs:
            reach = reach | frg.states[i].configs
            reach_f.append(frg.states[i].formula)
        live = ConfigSet.empty(fm.space.size)
        live_f = []
        for t in net.transition_names:
            if enabled(net, marking, t):
                live = live | t_sets[t]
                live_f.append(t_pcs[t])
        dead = reach - live
        if dead:
            formula = disj(*reach_f)
            if live_f:
                formula = conj(formula, Not(disj(*live_f)))
            out.append(QueryAnswer(marking, dead, formula))
    return out


def reachable_in(frg: Frg, target: Marking) -> QueryAnswer:
    """Configurations whose product reaches ``target``."""
    target = Marking(target)
    size = frg.fm.space.size
    configs = ConfigSet.empty(size)
    parts = []
    for i in frg.markings.get(target, ()):
        configs = configs | frg.states[i].configs
        parts.append(frg.states[i].formula)
    return QueryAnswer(target, configs, disj(*parts) if parts else FALSE)


@dataclass
class ProductComparison:
    configuration: dict[str, bool]
    label: str
    states: int
    edges: int
    missing_states: list[Marking] = field(default_factory=list)
    extra_states: list[Marking] = field(default_factory=list)
    missing_edges: list[tuple[Marking, str, Marking]] = field(default_factory=list)
    extra_edges: list[tuple[Marking, str, Marking]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not (self.missing_states or self.extra_states
                    or self.missing_edges or self.extra_edges)


@dataclass
class EquivalenceReport:
    mode: str
    products: list[ProductComparison]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.products)

    @property
    def discrepancies(self) -> int:
        return sum(
            len(p.missing_states) + len(p.extra_states)
            + len(p.missing_edges) + len(p.extra_edges)
            for p in self.products
        )


def compare_graphs(projected: Rg, oracle: Rg, net: Net150):
    order = {p: i for i, p in enumerate(net.place_names)}
    tkey = {t: i for i, t in enumerate(net.transition_names)}

    def mkey(m):
        return tuple(sorted((order[p], n) for p, n in m.items()))

    def ekey(e):
        return (mkey(e[0]), tkey[e[1]], mkey(e[2]))

    missing_s = sorted(oracle.state_set - projected.state_set, key=mkey)
    extra_s = sorted(projected.state_set - oracle.state_set, key=mkey)
    missing_e = sorted(oracle.edge_set - projected.edge_set, key=ekey)
    extra_e = sorted(projected.edge_set - oracle.edge_set, key=ekey)
    return missing_s, extra_s, missing_e, extra_e


def oracle_equivalence(
    net: Net150,
    fm: FeatureModel,
    mode: str = SOUND,
    limits: Limits = Limits(),
    frg: Frg | None = None,
) -> EquivalenceReport:
    """Compare every product's projection with its brute-force graph."""
    frg = frg or build_frg(net, fm, mode, limits)
    products = []
    for i in range(fm.space.size):
        rho = fm.configuration(i)
        oracle = build_rg(derive_product(net, rho, fm), limits)
        projected = project(frg, rho, fm)
        ms, xs, me, xe = compare_graphs(projected, oracle, net)
        products.append(ProductComparison(
            rho, describe(fm, rho), len(oracle.states), len(oracle.edges), ms, xs, me, xe,
        ))
    return EquivalenceReport(frg.mode, products)


@dataclass(frozen=True)
class FamilyStats:
    family_states: int
    family_inspections: int
    product_states: int
    product_inspections: int
    products: int
    family_seconds: float
    product_seconds: float

    @property
    def inspection_ratio(self) -> float:
        return self.family_inspections / self.product_inspections

    @property
    def state_ratio(self) -> float:
        return self.family_states / self.product_states


def family_vs_enumeration_stats(
    net: Net150, fm: FeatureModel, limits: Limits = Limits()
) -> FamilyStats:
    """Cost of one family-based build against enumerating every product."""
    t0 = time.perf_counter()
    frg = build_frg(net, fm, SOUND, limits)
    t1 = time.perf_counter()
    states = inspections = 0
    for i in range(fm.space.size):
        rg = build_rg(derive_product(net, fm.configuration(i), fm), limits)
        states += len(rg.states)
        inspections += rg.inspections
    t2 = time.perf_counter()
    return FamilyStats(
        frg.stats.states, frg.stats.inspections, states, inspections,
        fm.space.size, t1 - t0, t2 - t1,
    )
