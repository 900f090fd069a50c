"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 model error, 3 limit exceeded,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from pnpl.analysis import deadlocks, family_vs_enumeration_stats, oracle_equivalence, reachable_in
from pnpl.derive import Limits
from pnpl.errors import InvalidConfigurationError, LimitExceeded, PnplError
from pnpl.feature_model import describe, is_valid_configuration
from pnpl.formula import parse_formula
from pnpl.frg import KERNEL, MODES, SOUND, build_frg, filter_report, project
from pnpl.io import configs_doc, export_dot, frg_doc, load_model, marking_doc, rg_doc
from pnpl.net import Marking, render_marking, validate_net

EXIT_OK, EXIT_USAGE, EXIT_MODEL, EXIT_LIMIT, EXIT_MISMATCH = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _limits(args) -> Limits:
    return Limits(args.max_states, args.max_tokens)


def _parse_marking(spec: str, net) -> Marking:
    counts = {}
    for item in filter(None, (s.strip() for s in spec.split(","))):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in net.place:
            raise UsageError(f"bad marking entry {item!r}; expected Place=count over declared places")
        try:
            counts[name] = int(value)
        except ValueError:
            raise UsageError(f"bad token count in {item!r}") from None
        if counts[name] < 0:
            raise UsageError(f"negative token count in {item!r}")
    return net.marking(counts)


def _parse_config(spec: str, fm):
    names = [s.strip() for s in spec.split(",") if s.strip()]
    try:
        rho = fm.from_selection(names)
    except PnplError as e:
        raise UsageError(str(e)) from None
    if not is_valid_configuration(fm, rho):
        raise UsageError(f"not a valid configuration: {spec}")
    return rho


# ---------------------------------------------------------------- commands

def cmd_validate(args, net, fm):
    issues = validate_net(net, fm)
    if args.format == "json":
        sys.stdout.write(_dump({
            "kind": "validation",
            "issues": [vars(i) for i in issues],
            "features": len(fm.features),
            "places": len(net.places),
            "transitions": len(net.transitions),
            "arcs": len(net.arcs),
        }))
    else:
        for i in issues:
            print(i)
        print(f"ok: {len(net.places)} places, {len(net.transitions)} transitions, "
              f"{len(net.arcs)} arcs, {len(fm.features)} features")
    return EXIT_MODEL if any(i.severity == "error" for i in issues) else EXIT_OK


def cmd_products(args, net, fm):
    labels = [describe(fm, fm.configuration(i)) for i in range(fm.space.size)]
    if args.format == "json":
        sys.stdout.write(_dump({
            "kind": "products",
            "products": [
                {"label": lab, "features": sorted(f for f, v in fm.configuration(i).items() if v)}
                for i, lab in enumerate(labels)
            ],
        }))
    else:
        for lab in labels:
            print(lab)
    return EXIT_OK


def _build(args, net, fm):
    restrict = None
    if getattr(args, "restrict", None):
        try:
            restrict = parse_formula(args.restrict, fm.features)
        except PnplError as e:
            raise UsageError(f"--restrict: {e}") from None
    return build_frg(net, fm, args.mode, _limits(args), restrict)


def cmd_build(args, net, fm):
    frg = _build(args, net, fm)
    s = frg.stats
    if args.dot:
        _write(args.dot, export_dot(frg, annotate=not args.no_annotations,
                                    shade_pruned=args.shade, show_paths=args.show_paths))
    if args.json:
        _write(args.json, _dump(frg_doc(frg)))
    if args.format == "json":
        sys.stdout.write(_dump({"kind": "build", "mode": frg.mode, "states": s.states,
                                "edges": s.edges, "inspections": s.inspections,
                                "filter_rejections": s.rejections}))
        return EXIT_OK
    print(f"mode: {frg.mode}")
    print(f"states: {s.states}")
    print(f"edges: {s.edges}")
    if args.stats:
        print(f"inspections: {s.inspections}")
        print(f"filter rejections: {s.rejections}")
        print(f"bound |V|*|T|: {s.states * s.transitions}")
        print(f"kernel: {KERNEL}")
    if args.report:
        order = net.place_names
        for m, t, cand, reason in filter_report(frg):
            print(f"rejected: {render_marking(m, order)} --{t}--> [{cand}] ({reason})")
    return EXIT_OK


def cmd_project(args, net, fm):
    rho = _parse_config(args.config, fm)
    frg = build_frg(net, fm, args.mode, _limits(args))
    rg = project(frg, rho, fm)
    if args.dot:
        _write(args.dot, export_dot(rg, name=describe(fm, rho)))
    doc = rg_doc(rg, net.place_names, describe(fm, rho))
    if args.json:
        _write(args.json, _dump(doc))
    if args.format == "json":
        sys.stdout.write(_dump(doc))
        return EXIT_OK
    print(f"configuration: {describe(fm, rho)}")
    print(f"states: {len(rg.states)}")
    print(f"edges: {len(rg.edges)}")
    for src, t, dst in rg.edges:
        print(f"  {render_marking(src, net.place_names)} --{t}--> {render_marking(dst, net.place_names)}")
    return EXIT_OK


def cmd_check(args, net, fm):
    if args.mode != SOUND:
        raise UsageError("check queries require --mode sound")
    order = net.place_names
    if args.query == "reach":
        if args.marking is None:
            raise UsageError("check reach needs --marking")
        target = _parse_marking(args.marking, net)
        frg = build_frg(net, fm, args.mode, _limits(args))
        ans = reachable_in(frg, target)
        if args.format == "json":
            sys.stdout.write(_dump({"kind": "reach", "marking": marking_doc(target, order),
                                    "configurations": configs_doc(ans.configs, fm),
                                    "condition": str(ans.formula)}))
        else:
            labels = configs_doc(ans.configs, fm)
            print(f"{render_marking(target, order)}: "
                  + ("; ".join(labels) if labels else "unreachable in every product"))
        return EXIT_OK
    if args.marking is not None:
        raise UsageError("--marking only applies to check reach")
    frg = build_frg(net, fm, args.mode, _limits(args))
    answers = deadlocks(frg)
    if args.format == "json":
        sys.stdout.write(_dump({"kind": "deadlocks", "deadlocks": [
            {"marking": marking_doc(a.marking, order),
             "configurations": configs_doc(a.configs, fm), "condition": str(a.formula)}
            for a in answers]}))
    else:
        if not answers:
            print("no deadlocks")
        for a in answers:
            print(f"{render_marking(a.marking, order)}: {'; '.join(configs_doc(a.configs, fm))}")
    return EXIT_OK


def cmd_verify(args, net, fm):
    report = oracle_equivalence(net, fm, args.mode, _limits(args))
    order = net.place_names
    r = lambda m: render_marking(m, order)  # noqa: E731
    er = lambda e: f"{r(e[0])} --{e[1]}--> {r(e[2])}"  # noqa: E731
    if args.format == "json":
        sys.stdout.write(_dump({
            "kind": "verify", "mode": report.mode, "passed": report.passed,
            "discrepancies": report.discrepancies,
            "products": [{
                "configuration": p.label, "passed": p.passed,
                "states": p.states, "edges": p.edges,
                "missing_states": [r(m) for m in p.missing_states],
                "extra_states": [r(m) for m in p.extra_states],
                "missing_edges": [er(e) for e in p.missing_edges],
                "extra_edges": [er(e) for e in p.extra_edges],
            } for p in report.products],
        }))
    else:
        for p in report.products:
            status = "pass" if p.passed else "FAIL"
            print(f"{status} {p.label}: {p.states} states, {p.edges} edges")
            for m in p.missing_states:
                print(f"  missing state {r(m)}")
            for m in p.extra_states:
                print(f"  extra state {r(m)}")
            for e in p.missing_edges:
                print(f"  missing edge {er(e)}")
            for e in p.extra_edges:
                print(f"  extra edge {er(e)}")
        print("verified" if report.passed else f"{report.discrepancies} discrepancies")
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_stats(args, net, fm):
    st = family_vs_enumeration_stats(net, fm, _limits(args))
    doc = {
        "kind": "stats", "products": st.products,
        "family_states": st.family_states, "family_inspections": st.family_inspections,
        "product_states": st.product_states, "product_inspections": st.product_inspections,
        "state_ratio": round(st.state_ratio, 6), "inspection_ratio": round(st.inspection_ratio, 6),
    }
    if args.timing:
        doc["family_seconds"] = st.family_seconds
        doc["product_seconds"] = st.product_seconds
    if args.format == "json":
        sys.stdout.write(_dump(doc))
    else:
        print(f"products: {st.products}")
        print(f"states: family {st.family_states} vs per-product {st.product_states} "
              f"(ratio {st.state_ratio:.3f})")
        print(f"inspections: family {st.family_inspections} vs per-product "
              f"{st.product_inspections} (ratio {st.inspection_ratio:.3f})")
        if args.timing:
            print(f"time: family {st.family_seconds:.4f}s vs per-product {st.product_seconds:.4f}s")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate, "products": cmd_products, "build": cmd_build,
    "project": cmd_project, "check": cmd_check, "verify": cmd_verify, "stats": cmd_stats,
}


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pnpl", description="Reachability graphs of Petri net product lines.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-states", type=int, default=Limits.max_states)
    common.add_argument("--max-tokens", type=int, default=Limits.max_tokens)
    common.add_argument("--enumeration-limit", type=int, default=None,
                        help="maximum number of features to enumerate (default 20)")
    common.add_argument("--mode", choices=MODES, default=SOUND)

    def add(name, help):
        p = sub.add_parser(name, parents=[common], help=help)
        if name == "check":
            p.add_argument("query", choices=("deadlocks", "reach"))
        p.add_argument("model", help="model file or bundled model name")
        return p

    add("validate", "check a model and report issues")
    add("products", "list valid configurations")
    p = add("build", "build the feature-annotated reachability graph")
    p.add_argument("--stats", action="store_true", help="print build counters")
    p.add_argument("--report", action="store_true", help="print the filter report")
    p.add_argument("--dot", metavar="PATH", help="write DOT ('-' for stdout)")
    p.add_argument("--json", metavar="PATH", help="write the graph as JSON ('-' for stdout)")
    p.add_argument("--shade", action="store_true", help="show pruned states in the DOT output")
    p.add_argument("--show-paths", action="store_true", help="label DOT nodes with feature paths")
    p.add_argument("--no-annotations", action="store_true", help="omit edge presence conditions")
    p.add_argument("--restrict", metavar="FORMULA", help="explore only configurations satisfying FORMULA")
    p = add("project", "per-product reachability graph read off the fRG")
    p.add_argument("--config", required=True, help="comma-separated selected features")
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--json", metavar="PATH")
    p = add("check", "deadlock and reachability queries")
    p.add_argument("--marking", help="comma-separated Place=count, omitted places hold 0")
    add("verify", "compare every product projection with its brute-force graph")
    p = add("stats", "family-based versus per-product exploration cost")
    p.add_argument("--timing", action="store_true", help="include wall-clock times")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        if args.max_states < 1 or args.max_tokens < 1:
            raise UsageError("limits must be positive")
        net, fm = load_model(args.model, args.enumeration_limit)
        return COMMANDS[args.command](args, net, fm)
    except UsageError as e:
        print(f"pnpl: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidConfigurationError as e:
        print(f"pnpl: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as e:
        print(f"pnpl: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except PnplError as e:
        print(f"pnpl: model error: {e}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
