"""Feature models: tree structure, propositional encoding, configuration enumeration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from pnpl import sat
from pnpl.errors import (
    EnumerationLimitError,
    FeatureModelError,
    InvalidConfigurationError,
    UndeclaredFeatureError,
)
from pnpl.formula import Formula, Implies, Not, Var, conj, disj, evaluate, variables

MANDATORY = "mandatory"
OPTIONAL = "optional"
OR = "or"
ALTERNATIVE = "alt"
GROUP_KINDS = (MANDATORY, OPTIONAL, OR, ALTERNATIVE)

DEFAULT_ENUMERATION_LIMIT = 20

Assignment = Mapping[str, bool]


@dataclass(frozen=True)
class Group:
    """Children of one parent sharing a decomposition kind.

    ``mandatory`` and ``optional`` groups are just lists of free children;
    ``or`` needs at least one selected child and ``alt`` exactly one.
    """

    kind: str
    children: tuple[str, ...]


@dataclass(frozen=True)
class ConfigSpace:
    """Enumerated valid configurations, used to compile formulas to config sets.

    Configurations are encoded as integers over the sorted feature names, bit
    ``i`` standing for ``names[i]``; ``codes`` is ascending.
    """

    names: tuple[str, ...]
    codes: tuple[int, ...]
    feature_masks: Mapping[str, int]

    @property
    def size(self) -> int:
        return len(self.codes)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.codes)) - 1


@dataclass(frozen=True, eq=False)
class FeatureModel:
    features: tuple[str, ...]
    root: str
    groups: Mapping[str, tuple[Group, ...]] = field(default_factory=dict)
    constraints: tuple[Formula, ...] = ()
    abstract: frozenset[str] = frozenset()
    enumeration_limit: int = DEFAULT_ENUMERATION_LIMIT

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(
            self, "groups", {p: tuple(gs) for p, gs in self.groups.items()}
        )
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "abstract", frozenset(self.abstract))
        self._validate()

    def _validate(self):
        declared = set(self.features)
        if len(declared) != len(self.features):
            dup = next(f for f in self.features if self.features.count(f) > 1)
            raise FeatureModelError(f"duplicate feature {dup!r}")
        if self.root not in declared:
            raise UndeclaredFeatureError(self.root)
        parent: dict[str, str] = {}
        for p, groups in self.groups.items():
            if p not in declared:
                raise UndeclaredFeatureError(p)
            for g in groups:
                if g.kind not in GROUP_KINDS:
                    raise FeatureModelError(f"unknown group kind {g.kind!r}")
                if g.kind in (OR, ALTERNATIVE) and len(g.children) < 2:
                    raise FeatureModelError(
                        f"{g.kind} group under {p!r} needs at least 2 children"
                    )
                for c in g.children:
                    if c not in declared:
                        raise UndeclaredFeatureError(c)
                    if c == self.root:
                        raise FeatureModelError(f"root {c!r} cannot have a parent")
                    if c in parent:
                        raise FeatureModelError(
                            f"feature {c!r} has two parents ({parent[c]!r}, {p!r})"
                        )
                    parent[c] = p
        # every feature must hang off the root; this also rules out cycles
        reached = {self.root}
        stack = [self.root]
        while stack:
            for g in self.groups.get(stack.pop(), ()):
                for c in g.children:
                    if c not in reached:
                        reached.add(c)
                        stack.append(c)
        detached = [f for f in self.features if f not in reached]
        if detached:
            raise FeatureModelError(f"features not attached to root: {', '.join(detached)}")
        for c in self.constraints:
            for name in sorted(variables(c)):
                if name not in declared:
                    raise UndeclaredFeatureError(name)
        if not sat.is_satisfiable(compile_constraints(self)):
            raise FeatureModelError("feature model has no valid configuration")

    @cached_property
    def parent(self) -> dict[str, str]:
        return {c: p for p, gs in self.groups.items() for g in gs for c in g.children}

    @cached_property
    def constraint(self) -> Formula:
        return compile_constraints(self)

    @cached_property
    def space(self) -> ConfigSpace:
        return _enumerate(self)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {code: i for i, code in enumerate(self.space.codes)}

    @cached_property
    def core_features(self) -> frozenset[str]:
        """Features selected in every valid configuration."""
        space = self.space
        return frozenset(n for n in self.features if space.feature_masks[n] == space.full_mask)

    def configuration(self, index: int) -> dict[str, bool]:
        code = self.space.codes[index]
        bit = {n: i for i, n in enumerate(self.space.names)}
        return {f: bool(code >> bit[f] & 1) for f in self.features}

    def index_of(self, a: Assignment) -> int:
        """Position of a valid configuration in the canonical order."""
        _check_total(self, a)
        code = _encode(self.space.names, a)
        try:
            return self._index[code]
        except KeyError:
            raise InvalidConfigurationError(
                f"not a valid configuration: {describe(self, a)}"
            ) from None

    def from_selection(self, selected: Iterable[str]) -> dict[str, bool]:
        """Total assignment from the listed features plus the core features."""
        chosen = set(selected)
        for name in chosen:
            if name not in self.features:
                raise UndeclaredFeatureError(name)
        chosen |= self.core_features
        return {f: f in chosen for f in self.features}


def _check_total(fm, a):
    if set(a) != set(fm.features):
        missing = sorted(set(fm.features) - set(a))
        extra = sorted(set(a) - set(fm.features))
        raise ValueError(f"assignment not total over features (missing {missing}, extra {extra})")


def _encode(names, a):
    code = 0
    for i, n in enumerate(names):
        if a[n]:
            code |= 1 << i
    return code


def compile_constraints(fm: FeatureModel) -> Formula:
    """Propositional constraint C whose models are the valid configurations."""
    parts: list[Formula] = [Var(fm.root)]
    for p, groups in fm.groups.items():
        pv = Var(p)
        for g in groups:
            kids = [Var(c) for c in g.children]
            parts.extend(Implies(k, pv) for k in kids)
            if g.kind == MANDATORY:
                parts.extend(Implies(pv, k) for k in kids)
            elif g.kind == OR:
                parts.append(Implies(pv, disj(*kids)))
            elif g.kind == ALTERNATIVE:
                parts.append(Implies(pv, disj(*kids)))
                parts.extend(
                    Not(conj(a, b)) for a, b in itertools.combinations(kids, 2)
                )
    parts.extend(fm.constraints)
    return conj(*parts)


def _enumerate(fm: FeatureModel) -> ConfigSpace:
    n = len(fm.features)
    if n > fm.enumeration_limit:
        raise EnumerationLimitError(n, fm.enumeration_limit)
    names = tuple(sorted(fm.features))
    bit = {name: 1 << i for i, name in enumerate(names)}

    def subtree(feature):
        # codes of all tree-consistent selections below a selected feature
        options = [bit[feature]]
        for g in fm.groups.get(feature, ()):
            child_opts = [subtree(c) for c in g.children]
            if g.kind == MANDATORY:
                group_opts = [0]
                for opts in child_opts:
                    group_opts = [x | y for x in group_opts for y in opts]
            elif g.kind == OPTIONAL:
                group_opts = [0]
                for opts in child_opts:
                    group_opts = [x | y for x in group_opts for y in [0, *opts]]
            elif g.kind == OR:
                group_opts = [0]
                for opts in child_opts:
                    group_opts = [x | y for x in group_opts for y in [0, *opts]]
                group_opts = [x for x in group_opts if x]
            else:
                group_opts = [y for opts in child_opts for y in opts]
            options = [x | y for x in options for y in group_opts]
        return options

    codes = subtree(fm.root)
    if fm.constraints:
        cross = conj(*fm.constraints)
        codes = [
            c for c in codes
            if evaluate(cross, {name: bool(c & bit[name]) for name in names})
        ]
    codes = tuple(sorted(codes))
    if not codes:
        raise FeatureModelError("feature model has no valid configuration")
    masks = {}
    for name in names:
        m = 0
        b = bit[name]
        for i, c in enumerate(codes):
            if c & b:
                m |= 1 << i
        masks[name] = m
    return ConfigSpace(names, codes, masks)


def valid_configurations(fm: FeatureModel) -> list[dict[str, bool]]:
    """All valid configurations, ordered by their bit code over sorted names."""
    return [fm.configuration(i) for i in range(fm.space.size)]


def is_valid_configuration(fm: FeatureModel, a: Assignment) -> bool:
    _check_total(fm, a)
    return evaluate(fm.constraint, a)


def describe(fm: FeatureModel, a: Assignment) -> str:
    """Comma-separated selected features, leaving out core features."""
    try:
        core = fm.core_features
    except EnumerationLimitError:
        core = frozenset()
    names = [f for f in fm.features if a.get(f) and f not in core]
    return ",".join(names) if names else "(core)"
