"""The 150% Petri net: structure with presence conditions, markings and firing."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from pnpl.errors import NotEnabledError
from pnpl.formula import TRUE, Formula, conj, satisfiable_with, variables


class Marking(Mapping[str, int]):
    """Token counts per place; places not listed hold zero tokens.

    Iteration order is the order counts were supplied in (declaration
    order when produced by a net), but equality and hashing ignore order
    and zero entries.
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        clean = {}
        for place, n in items:
            n = int(n)
            if n < 0:
                raise ValueError(f"negative token count {n} for place {place!r}")
            if n:
                clean[place] = n
        self._counts = clean
        self._hash = None

    def __getitem__(self, place: str) -> int:
        return self._counts.get(place, 0)

    def __contains__(self, place) -> bool:
        return place in self._counts

    def __iter__(self) -> Iterator[str]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other) -> bool:
        if isinstance(other, Marking):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Marking({self._counts!r})"

    def total(self) -> int:
        return sum(self._counts.values())

    def restrict(self, places: Iterable[str]) -> "Marking":
        keep = set(places)
        return Marking((p, n) for p, n in self._counts.items() if p in keep)


def render_marking(m: Mapping[str, int], order: Iterable[str] | None = None) -> str:
    """``Source(3)ItemA(1)`` style label; ``empty`` when no place is marked."""
    names = m if order is None else [p for p in order if p in m]
    text = "".join(f"{p}({m[p]})" for p in names if m[p] > 0)
    return text or "empty"


@dataclass(frozen=True)
class Place:
    name: str
    pc: Formula = TRUE


@dataclass(frozen=True)
class Transition:
    name: str
    pc: Formula = TRUE


@dataclass(frozen=True)
class Arc:
    source: str
    target: str
    weight: int = 1
    pc: Formula = TRUE


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" or "warning"
    category: str
    element: str
    message: str

    def __str__(self):
        return f"{self.severity}: {self.category}: {self.element}: {self.message}"


@dataclass(frozen=True, eq=False)
class Net150:
    places: tuple[Place, ...]
    transitions: tuple[Transition, ...]
    arcs: tuple[Arc, ...]
    initial: Marking = field(default_factory=Marking)

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if not isinstance(self.initial, Marking):
            object.__setattr__(self, "initial", Marking(self.initial))

    @cached_property
    def place_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.places)

    @cached_property
    def transition_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.transitions)

    @cached_property
    def place(self) -> dict[str, Place]:
        return {p.name: p for p in self.places}

    @cached_property
    def transition(self) -> dict[str, Transition]:
        return {t.name: t for t in self.transitions}

    @cached_property
    def inputs(self) -> dict[str, tuple[Arc, ...]]:
        """Input arcs (place -> transition) per transition."""
        out = {t.name: [] for t in self.transitions}
        for a in self.arcs:
            if a.target in out:
                out[a.target].append(a)
        return {t: tuple(v) for t, v in out.items()}

    @cached_property
    def outputs(self) -> dict[str, tuple[Arc, ...]]:
        out = {t.name: [] for t in self.transitions}
        for a in self.arcs:
            if a.source in out:
                out[a.source].append(a)
        return {t: tuple(v) for t, v in out.items()}

    def marking(self, counts: Mapping[str, int]) -> Marking:
        """Marking with entries in place declaration order."""
        return Marking((p, counts.get(p, 0)) for p in self.place_names)


def validate_net(net: Net150, fm) -> list[Issue]:
    """Structural errors and dead-element warnings; empty when all is well."""
    issues: list[Issue] = []
    err = lambda cat, el, msg: issues.append(Issue("error", cat, el, msg))  # noqa: E731

    for kind, names in (("place", net.place_names), ("transition", net.transition_names)):
        seen = set()
        for n in names:
            if n in seen:
                err("duplicate name", n, f"{kind} {n!r} declared twice")
            seen.add(n)
    places = set(net.place_names)
    transitions = set(net.transition_names)
    for n in places & transitions:
        err("duplicate name", n, f"{n!r} is both a place and a transition")

    pairs = set()
    for a in net.arcs:
        label = f"{a.source}->{a.target}"
        ok_pt = a.source in places and a.target in transitions
        ok_tp = a.source in transitions and a.target in places
        for end in (a.source, a.target):
            if end not in places and end not in transitions:
                err("unknown element", label, f"arc endpoint {end!r} is not declared")
        if not (ok_pt or ok_tp) and a.source in places | transitions and a.target in places | transitions:
            err("not bipartite", label, "arcs must connect a place and a transition")
        if a.weight < 1:
            err("nonpositive weight", label, f"weight {a.weight} < 1")
        if (a.source, a.target) in pairs:
            err("duplicate arc", label, "more than one arc between the same elements")
        pairs.add((a.source, a.target))

    for p, n in net.initial.items():
        if p not in places:
            err("unknown element", p, "initial marking names an undeclared place")

    declared = set(fm.features)
    elements = [(p.name, p.pc) for p in net.places]
    elements += [(t.name, t.pc) for t in net.transitions]
    elements += [(f"{a.source}->{a.target}", a.pc) for a in net.arcs]
    for name, pc in elements:
        for v in sorted(variables(pc) - declared):
            err("undeclared feature", name, f"presence condition uses undeclared feature {v!r}")
    if any(i.severity == "error" for i in issues):
        return issues
    for name, pc in elements:
        if not satisfiable_with(pc, fm):
            issues.append(Issue("warning", "dead element", name,
                                "presence condition is unsatisfiable under the feature model"))
    return issues


def effective_pc(net: Net150, t: str) -> Formula:
    """Presence condition under which transition ``t`` exists with all its arcs."""
    parts = [net.transition[t].pc]
    adjacent = []
    for a in net.inputs[t] + net.outputs[t]:
        parts.append(a.pc)
        p = a.source if a.target == t else a.target
        if p not in adjacent:
            adjacent.append(p)
    parts.extend(net.place[p].pc for p in adjacent)
    return conj(*parts)


def enabled(net: Net150, m: Mapping[str, int], t: str) -> bool:
    """Token enablement only; the feature side is handled by the builder."""
    return all(m.get(a.source, 0) >= a.weight for a in net.inputs[t])


def fire(net: Net150, m: Mapping[str, int], t: str) -> Marking:
    if not enabled(net, m, t):
        raise NotEnabledError(f"transition {t!r} is not enabled at {render_marking(m)}")
    counts = dict(m)
    for a in net.inputs[t]:
        counts[a.source] -= a.weight
    for a in net.outputs[t]:
        counts[a.target] = counts.get(a.target, 0) + a.weight
    return net.marking(counts)
