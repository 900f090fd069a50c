"""Model files, DOT export and JSON report documents.

Model files are line oriented; ``#`` starts a comment::

    feature <name> [abstract]
    root <name>
    child <parent> mandatory|optional <child>...
    group <parent> or|alt <child>...
    constraint <formula>
    requires <a> <b>
    excludes <a> <b>
    place <name> [tokens=<n>] [pc="<formula>"]
    trans <name> [pc="<formula>"]
    arc <from> -> <to> [weight=<n>] [pc="<formula>"]

Element order in the file is the order used everywhere downstream.
"""

from __future__ import annotations

import logging
import shlex
from pathlib import Path

from pnpl.derive import Rg, build_rg, flatten
from pnpl.errors import FormulaSyntaxError, ModelError, PnplError, UndeclaredFeatureError
from pnpl.feature_model import ALTERNATIVE, MANDATORY, OPTIONAL, OR, FeatureModel, Group, describe
from pnpl.formula import TRUE, ConfigSet, Implies, Not, Var, conj, parse_formula
from pnpl.net import (
    Arc, Marking, Net150, Place, Transition, effective_pc, render_marking, validate_net,
)

log = logging.getLogger(__name__)

MODELS_DIR = Path(__file__).parent / "models"


def bundled_models() -> list[str]:
    return sorted(p.stem for p in MODELS_DIR.glob("*.pnpl"))


def resolve_model_path(name: str | Path) -> Path:
    """A path as given, or a bundled model by name (with or without suffix)."""
    path = Path(name)
    if path.exists():
        return path
    for candidate in (MODELS_DIR / path.name, MODELS_DIR / f"{path.name}.pnpl"):
        if candidate.exists():
            return candidate
    return path


def _options(tokens, allowed, lineno):
    opts = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or key not in allowed:
            raise ModelError(f"unexpected argument {tok!r}", lineno)
        if key in opts:
            raise ModelError(f"option {key!r} given twice", lineno)
        opts[key] = value
    return opts


def _int_option(opts, key, default, lineno):
    if key not in opts:
        return default
    try:
        return int(opts[key])
    except ValueError:
        raise ModelError(f"{key} must be an integer, got {opts[key]!r}", lineno) from None


def _formula(text, features, raw, lineno):
    try:
        return parse_formula(text, features)
    except FormulaSyntaxError as e:
        base = raw.find(text)
        column = base + e.position + 1 if base >= 0 else None
        raise ModelError(str(e), lineno, column) from e
    except UndeclaredFeatureError as e:
        raise UndeclaredFeatureError(e.name, lineno) from None


def parse_model(text: str, enumeration_limit: int | None = None) -> tuple[Net150, FeatureModel]:
    """Parse and validate a model document."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        try:
            tokens = shlex.split(raw, comments=True)
        except ValueError as e:
            raise ModelError(str(e), lineno) from None
        if tokens:
            lines.append((lineno, raw, tokens))

    features: list[str] = []
    abstract = set()
    root = None
    groups: dict[str, list[Group]] = {}
    constraint_lines = []
    net_lines = []
    for lineno, raw, tok in lines:
        kw, args = tok[0], tok[1:]
        if kw == "feature":
            if len(args) not in (1, 2) or (len(args) == 2 and args[1] != "abstract"):
                raise ModelError("usage: feature <name> [abstract]", lineno)
            if args[0] in features:
                raise ModelError(f"duplicate feature {args[0]!r}", lineno)
            features.append(args[0])
            if len(args) == 2:
                abstract.add(args[0])
        elif kw == "root":
            if len(args) != 1:
                raise ModelError("usage: root <name>", lineno)
            if root is not None:
                raise ModelError("root declared twice", lineno)
            root = args[0]
        elif kw == "child":
            if len(args) < 3 or args[1] not in (MANDATORY, OPTIONAL):
                raise ModelError("usage: child <parent> mandatory|optional <child>...", lineno)
            groups.setdefault(args[0], []).extend(Group(args[1], (c,)) for c in args[2:])
        elif kw == "group":
            if len(args) < 3 or args[1] not in (OR, ALTERNATIVE):
                raise ModelError("usage: group <parent> or|alt <child>...", lineno)
            groups.setdefault(args[0], []).append(Group(args[1], tuple(args[2:])))
        elif kw in ("constraint", "requires", "excludes"):
            constraint_lines.append((lineno, raw, tok))
        elif kw in ("place", "trans", "arc"):
            net_lines.append((lineno, raw, tok))
        else:
            raise ModelError(f"unknown keyword {kw!r}", lineno)

    if root is None:
        raise ModelError("missing root declaration")
    declared = set(features)
    constraints = []
    for lineno, raw, tok in constraint_lines:
        kw, args = tok[0], tok[1:]
        if kw == "constraint":
            if not args:
                raise ModelError("usage: constraint <formula>", lineno)
            body = raw.split("constraint", 1)[1].split("#", 1)[0].strip()
            constraints.append(_formula(body, declared, raw, lineno))
        else:
            if len(args) != 2:
                raise ModelError(f"usage: {kw} <feature> <feature>", lineno)
            for name in args:
                if name not in declared:
                    raise UndeclaredFeatureError(name, lineno)
            a, b = Var(args[0]), Var(args[1])
            constraints.append(Implies(a, b) if kw == "requires" else Not(conj(a, b)))
    kwargs = {} if enumeration_limit is None else {"enumeration_limit": enumeration_limit}
    try:
        fm = FeatureModel(tuple(features), root, groups, tuple(constraints),
                          frozenset(abstract), **kwargs)
    except UndeclaredFeatureError:
        raise
    except PnplError as e:
        raise ModelError(f"feature model: {e}") from e

    places, transitions, arcs, initial = [], [], [], {}
    for lineno, raw, tok in net_lines:
        kw, args = tok[0], tok[1:]
        if kw == "place":
            if not args:
                raise ModelError("usage: place <name> [tokens=<n>] [pc=<formula>]", lineno)
            opts = _options(args[1:], ("tokens", "pc"), lineno)
            n = _int_option(opts, "tokens", 0, lineno)
            if n < 0:
                raise ModelError(f"negative token count {n}", lineno)
            if any(p.name == args[0] for p in places):
                raise ModelError(f"duplicate place {args[0]!r}", lineno)
            pc = _formula(opts["pc"], declared, raw, lineno) if "pc" in opts else TRUE
            places.append(Place(args[0], pc))
            if n:
                initial[args[0]] = n
        elif kw == "trans":
            if not args:
                raise ModelError("usage: trans <name> [pc=<formula>]", lineno)
            opts = _options(args[1:], ("pc",), lineno)
            if any(t.name == args[0] for t in transitions):
                raise ModelError(f"duplicate transition {args[0]!r}", lineno)
            pc = _formula(opts["pc"], declared, raw, lineno) if "pc" in opts else TRUE
            transitions.append(Transition(args[0], pc))
        else:
            if len(args) < 3 or args[1] != "->":
                raise ModelError("usage: arc <from> -> <to> [weight=<n>] [pc=<formula>]", lineno)
            opts = _options(args[3:], ("weight", "pc"), lineno)
            w = _int_option(opts, "weight", 1, lineno)
            pc = _formula(opts["pc"], declared, raw, lineno) if "pc" in opts else TRUE
            arcs.append(Arc(args[0], args[2], w, pc))

    m0 = Marking((p.name, initial.get(p.name, 0)) for p in places)
    net = Net150(tuple(places), tuple(transitions), tuple(arcs), m0)
    issues = validate_net(net, fm)
    errors = [i for i in issues if i.severity == "error"]
    if errors:
        raise ModelError("; ".join(str(i) for i in errors), issues=issues)
    for issue in issues:
        log.warning("%s", issue)
    return net, fm


def load_model(path, enumeration_limit: int | None = None) -> tuple[Net150, FeatureModel]:
    path = resolve_model_path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError(f"cannot read {path}: {e.strerror or e}") from e
    return parse_model(text, enumeration_limit)


# ---------------------------------------------------------------- DOT

def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(graph, *, annotate: bool = True, shade_pruned: bool = False,
               show_paths: bool = False, name: str | None = None) -> str:
    """DOT text for an :class:`~pnpl.frg.Frg` or a :class:`~pnpl.derive.Rg`.

    For fRGs, ``shade_pruned`` adds the markings and firings of the
    unfiltered 150% graph that the conflict filter removed, filled and
    dashed respectively.
    """
    from pnpl.frg import Frg

    if isinstance(graph, Frg):
        return _frg_dot(graph, annotate, shade_pruned, show_paths, name or "frg")
    if isinstance(graph, Rg):
        return _rg_dot(graph, name or "rg")
    raise TypeError(f"cannot export {type(graph).__name__}")


def _rg_dot(rg: Rg, name):
    out = [f"digraph {_q(name)} {{", "  node [shape=ellipse];"]
    ids = {m: f"s{i}" for i, m in enumerate(rg.states)}
    for m, sid in ids.items():
        extra = ", penwidth=2" if m == rg.initial else ""
        out.append(f"  {sid} [label={_q(render_marking(m))}{extra}];")
    for src, t, dst in rg.edges:
        out.append(f"  {ids[src]} -> {ids[dst]} [label={_q(t)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _frg_dot(frg, annotate, shade_pruned, show_paths, name):
    out = [f"digraph {_q(name)} {{", "  node [shape=ellipse];"]
    order = frg.net.place_names
    dup = {m for m, idxs in frg.markings.items() if len(idxs) > 1}
    for i, s in enumerate(frg.states):
        label = render_marking(s.marking, order)
        if show_paths or s.marking in dup:
            label += f"\n[{s.formula}]"
        extra = ", penwidth=2" if i == frg.initial else ""
        out.append(f"  s{i} [label={_q(label)}{extra}];")
    for e in frg.edges:
        label = f"{e.transition}/{e.annotation}" if annotate else e.transition
        out.append(f"  s{e.source} -> s{e.target} [label={_q(label)}];")
    if shade_pruned:
        full = build_rg(flatten(frg.net))
        node = {m: f"s{idxs[0]}" for m, idxs in frg.markings.items()}
        pruned = [m for m in full.states if m not in node]
        for j, m in enumerate(pruned):
            node[m] = f"p{j}"
            out.append(
                f"  p{j} [label={_q(render_marking(m, order))}, style=filled, "
                f'fillcolor="#d6e6f5", pruned=true];'
            )
        fired = {(frg.states[e.source].marking, e.transition, frg.states[e.target].marking)
                 for e in frg.edges}
        pcs = {e.transition: e.annotation for e in frg.edges}
        for src, t, dst in full.edges:
            if (src, t, dst) in fired:
                continue
            if annotate:
                if t not in pcs:
                    pcs[t] = effective_pc(frg.net, t)
                label = f"{t}/{pcs[t]}"
            else:
                label = t
            out.append(f"  {node[src]} -> {node[dst]} [label={_q(label)}, style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- JSON documents

def marking_doc(m: Marking, order) -> dict:
    return {"label": render_marking(m, order), "tokens": {p: m[p] for p in order if m[p]}}


def configs_doc(cs: ConfigSet, fm: FeatureModel) -> list[str]:
    return [describe(fm, fm.configuration(i)) for i in cs]


def frg_doc(frg) -> dict:
    order = frg.net.place_names
    return {
        "kind": "frg",
        "mode": frg.mode,
        "stats": {
            "states": frg.stats.states,
            "edges": frg.stats.edges,
            "inspections": frg.stats.inspections,
            "filter_rejections": frg.stats.rejections,
            "transitions": frg.stats.transitions,
        },
        "states": [
            {"id": i, "marking": marking_doc(s.marking, order),
             "path": str(s.formula), "configurations": configs_doc(s.configs, frg.fm)}
            for i, s in enumerate(frg.states)
        ],
        "edges": [
            {"source": e.source, "transition": e.transition, "target": e.target,
             "annotation": str(e.annotation)}
            for e in frg.edges
        ],
        "rejections": [
            {"state": r.state, "marking": render_marking(frg.states[r.state].marking, order),
             "transition": r.transition, "candidate": str(r.candidate), "reason": r.reason}
            for r in frg.rejections
        ],
    }


def rg_doc(rg: Rg, order, configuration: str | None = None) -> dict:
    index = {m: i for i, m in enumerate(rg.states)}
    doc = {
        "kind": "rg",
        "states": [{"id": i, "marking": marking_doc(m, order)} for i, m in enumerate(rg.states)],
        "edges": [{"source": index[s], "transition": t, "target": index[d]}
                  for s, t, d in rg.edges],
    }
    if configuration is not None:
        doc["configuration"] = configuration
    return doc
