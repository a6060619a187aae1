"""Command-line driver: ``mtk <command> [input.json] [options]``.

Exit status is 0 on success, 1 when the input is malformed or violates a
structural rule, and 2 when an internal certificate fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from ._jsonio import Reader, load_json
from .digraph import DiGraph, UndirectedGraph, decompose_cylinder_intersection, dual_graph, is_multitree
from .dynamics import (TriState, aperiodicity_witness, cofinality_witness, is_aperiodic, is_cofinal,
                       is_topologically_free, local_contractivity_sufficient,
                       local_contractivity_witness, topological_freeness_witness)
from .errors import CertificationError, MtkError, ParseError, SizeGuardError
from .ktheory import k_theory, six_term_report
from .lifttree import (DEFAULT_MAX_NODES, brute_stabilisers, build_lift_tree,
                       compare_with_formula, verify_lift_invariants)
from .presentation import (GraphOfGroupsZ, QuotientPresentation, dual_in_degree_defects,
                           dual_quotient, validate, validate_graph_of_groups)
from .setfamily import SetFamily, family_report

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_CERT = 0, 1, 2


class Outcome:
    """What a command produced: a JSON document, text lines and an exit status."""

    def __init__(self, doc, lines, status=EXIT_OK, error=False):
        self.doc, self.lines, self.status, self.error = doc, lines, status, error


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _resolve(path: str) -> Path:
    """Paths of the form ``data:NAME`` refer to the bundled examples."""
    if path.startswith("data:"):
        return Path(str(resources.files("mtk") / "data" / path[5:]))
    return Path(path)


def _load(args):
    if args.input is None:
        raise ParseError(f"command {args.command!r} needs an input file")
    path = _resolve(args.input)
    return Reader(load_json(path), source=args.input), args.input


def _presentation(args) -> QuotientPresentation:
    reader, _ = _load(args)
    return QuotientPresentation.from_json(reader)


# --- commands ---------------------------------------------------------------


def cmd_validate(args) -> Outcome:
    reader, _ = _load(args)
    doc = reader.doc if isinstance(reader.doc, dict) else {}
    if "members" in doc:
        family, action = SetFamily.from_json(reader)
        return Outcome({"kind": "setfamily", "ok": True, "members": len(family),
                        "generators": len(action.generators)},
                       [f"set family with {len(family)} members: ok"])
    if "bar" in doc:
        if "classes" not in doc:
            g = UndirectedGraph.from_json(reader)
            return Outcome({"kind": "undirected", "ok": True, "nonsingular": g.is_nonsingular()},
                           [f"undirected graph: ok (nonsingular: {_yes(g.is_nonsingular())})"])
        report = validate_graph_of_groups(GraphOfGroupsZ.from_json(reader))
        kind = "graph-of-groups"
    elif "classes" in doc:
        report = validate(QuotientPresentation.from_json(reader))
        kind = "presentation"
    else:
        g = DiGraph.from_json(reader)
        multi = is_multitree(g)
        out = {"kind": "digraph", "ok": True, "multitree": multi, "sources": g.sources()}
        lines = ["directed graph: ok", f"multitree: {_yes(multi)}",
                 f"sources: {', '.join(g.sources()) or '(none)'}"]
        if multi:
            # every cylinder intersection must split into the cylinders of v ∨ w
            pairs = 0
            for v in g.vertices:
                for w in g.vertices:
                    decompose_cylinder_intersection(g, v, w)
                    pairs += 1
            out["cylinder_pairs_certified"] = pairs
            lines.append(f"cylinder decompositions certified for {pairs} vertex pairs")
        return Outcome(out, lines)
    out = {"kind": kind, **report.to_json()}
    lines = [f"{kind}: {'ok' if report.ok else 'INVALID'}"]
    lines += [f"  {v.rule}: {v}" for v in report.violations]
    return Outcome(out, lines, EXIT_OK if report.ok else EXIT_INVALID)


def cmd_ktheory(args) -> Outcome:
    report = k_theory(_presentation(args))
    return Outcome(report.to_json(), report.to_text().splitlines())


def cmd_sixterm(args) -> Outcome:
    report = six_term_report(_presentation(args))
    return Outcome(report.to_json(), report.to_text().splitlines())


def cmd_dynamics(args) -> Outcome:
    p = _presentation(args)
    validate(p).raise_if_failed()
    g = p.graph
    cofinal, aperiodic = is_cofinal(g), is_aperiodic(g)
    free = is_topologically_free(p)
    contractive = local_contractivity_sufficient(p)
    doc = {"cofinal": cofinal, "aperiodic": aperiodic,
           "topologically_free": free.to_json(), "locally_contractive": contractive.to_json()}
    lines = [f"cofinal: {_yes(cofinal)}", f"aperiodic: {_yes(aperiodic)}",
             f"topologically free: {free}", f"locally contractive: {contractive}"]
    if args.certificate:
        cert = {
            "cofinal": cofinality_witness(g),
            "aperiodic": aperiodicity_witness(g),
            "topologically_free": _jsonable(topological_freeness_witness(p)),
            "locally_contractive": local_contractivity_witness(p),
        }
        doc["certificates"] = cert
        lines.append("certificates:")
        lines += ["  " + line for line in json.dumps(cert, indent=2).splitlines()]
    return Outcome(doc, lines)


def _jsonable(x):
    if isinstance(x, TriState):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def cmd_dual(args) -> Outcome:
    reader, _ = _load(args)
    if isinstance(reader.doc, dict) and "classes" not in reader.doc:
        g = UndirectedGraph.from_json(reader)
        d = dual_graph(g)
        multi = is_multitree(d)
        lines = [f"dual graph: {len(d.vertices)} vertices, {len(d.edges)} edges",
                 f"multitree: {_yes(multi)}"]
        lines += [f"  {e.id}: {e.source} -> {e.range}" for e in d.edges]
        return Outcome({"dual": d.to_json(), "multitree": multi}, lines)
    gog = GraphOfGroupsZ.from_json(reader)
    dual = dual_quotient(gog)
    defects = dual_in_degree_defects(gog, dual)
    if defects:
        raise CertificationError("dual in-degree identity fails: " + "; ".join(defects))
    lines = [f"dual presentation: {len(dual.graph.vertices)} vertices, "
             f"{len(dual.graph.edges)} edges; in-degree identity holds"]
    for e in dual.graph.edges:
        w = f" omega={list(dual.omega[e.id])}" if e.id in dual.omega else ""
        lines.append(f"  {e.id}: {e.source} -> {e.range}{w}")
    if args.output:
        Path(args.output).write_text(json.dumps(dual.to_json(), indent=2) + "\n")
        lines.append(f"wrote {args.output}")
    return Outcome({"presentation": dual.to_json(), "in_degree_identity": True}, lines)


def cmd_setfamily(args) -> Outcome:
    reader, _ = _load(args)
    family, action = SetFamily.from_json(reader)
    F = None
    sat = reader.optional("saturate")
    if sat is not None:
        F = [r.as_id() for r in sat.as_list()]
    report = family_report(family, action, F)
    lines = [f"independent: {_yes(report['independent'])}",
             f"finitely aligned: {_yes(report['finitely_aligned'])}",
             f"primitive-part conditions: A={_yes(report['condition_a'])}, "
             f"B={_yes(report['condition_b'])}"]
    if "transition_matrix" in report:
        tm = report["transition_matrix"]
        lines.append(f"transition matrix (order {', '.join(tm['order'])}), det {tm['determinant']}:")
        lines += ["  [" + " ".join(r) + "]" for r in tm["matrix"]]
    for pair, parts in report.get("intersections", {}).items():
        lines.append(f"  {pair}: {parts if parts is not None else 'no partition'}")
    if "saturation" in report:
        s = report["saturation"]
        lines.append(f"saturate {s['F']} -> {s['J']} (minimal: {_yes(s['minimal'])})")
    return Outcome(report, lines)


def cmd_lifttree(args) -> Outcome:
    p = _presentation(args)
    v = args.vertex or p.graph.vertices[0]
    tree = build_lift_tree(p, v, args.depth, max_nodes=args.max_nodes)
    levels = [len(level) for level in tree.levels]
    doc = {"base": v, "depth": args.depth, "nodes_per_level": levels, "nodes": len(tree)}
    lines = [f"lift tree over {v}, depth {args.depth}: {len(tree)} nodes",
             "per level: " + " ".join(map(str, levels))]
    status = EXIT_OK
    if tree.cyclic:
        stab = brute_stabilisers(tree)
        per_path = {}
        for node, m in stab.items():
            per_path.setdefault(" ".join(node.path) or "(root)", set()).add(m)
        doc["stabilisers"] = {k: sorted(s) for k, s in per_path.items()}
        lines += [f"  stabiliser of {k}: {', '.join(map(str, sorted(s)))}"
                  for k, s in per_path.items()]
    if args.verify:
        report = verify_lift_invariants(tree)
        mismatches = compare_with_formula(tree) if tree.cyclic else []
        doc["verify"] = report.to_json()
        doc["formula_mismatches"] = mismatches
        ok = report.ok and not mismatches
        lines.append(f"verify: {'ok' if ok else 'FAILED'}")
        lines += [f"  {x['check']}: {x['message']} at {x['node']}" for x in report.violations]
        lines += [f"  formula: {m}" for m in mismatches]
        if not ok:
            status = EXIT_CERT
    if args.dot:
        Path(args.dot).write_text(tree.to_dot() + "\n")
        lines.append(f"wrote {args.dot}")
    return Outcome(doc, lines, status)


def cmd_oracle(args) -> Outcome:
    from .suite import CHECKS, run_suite

    only = args.only.split(",") if args.only else None
    unknown = [x for x in only or [] if x not in CHECKS]
    if unknown:
        raise ParseError(f"unknown check {unknown[0]!r}; choose from {', '.join(CHECKS)}")
    results, lines = [], []
    status = EXIT_OK
    for res in run_suite(args.seed, only):
        results.append(res.to_json())
        lines.append(f"{'PASS' if res.ok else 'FAIL'} {res.name}: {res.cases} cases")
        if not res.ok:
            lines += [f"  {f}" for f in res.failures[:5]]
            lines.append(f"  reproduce: mtk oracle --seed {args.seed} --only {res.name}")
            status = EXIT_CERT
            break
    # timings are left out so the JSON report is reproducible byte for byte
    return Outcome({"seed": args.seed, "checks": results}, lines, status)


COMMANDS = {
    "validate": cmd_validate,
    "ktheory": cmd_ktheory,
    "sixterm": cmd_sixterm,
    "dynamics": cmd_dynamics,
    "dual": cmd_dual,
    "setfamily": cmd_setfamily,
    "lifttree": cmd_lifttree,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mtk", description="K-theory and dynamics of group actions on multitrees.",
        epilog="Bundled examples can be named as data:FILE, e.g. data:rose3.json.")
    ap.add_argument("--version", action="version", version=f"mtk {__version__}")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("input", nargs="?")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--seed", type=int, default=0, help="seed for the oracle suite")
    ap.add_argument("--only", help="comma-separated oracle checks to run")
    ap.add_argument("--certificate", action="store_true", help="emit witnesses (dynamics)")
    ap.add_argument("--depth", type=int, default=3, help="lift-tree depth")
    ap.add_argument("--vertex", help="lift-tree base vertex (default: first vertex)")
    ap.add_argument("--verify", action="store_true", help="check lift-tree invariants")
    ap.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    ap.add_argument("--dot", help="write the lift tree as Graphviz to this file")
    ap.add_argument("--output", help="write the dual presentation to this file (dual)")
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        outcome = COMMANDS[args.command](args)
    except CertificationError as exc:
        outcome = Outcome({"error": "certification", "message": str(exc)},
                          [f"certification failure: {exc}"], EXIT_CERT, True)
    except SizeGuardError as exc:
        outcome = Outcome({"error": "size-guard", "message": str(exc), "bound": exc.bound},
                          [f"size guard: {exc}"], EXIT_INVALID, True)
    except MtkError as exc:
        kind = "parse" if isinstance(exc, ParseError) else "invalid"
        doc = {"error": kind, "message": str(exc)}
        violations = getattr(exc, "violations", None)
        if violations:
            doc["violations"] = [{"rule": v.rule, "subject": v.subject, "message": v.message}
                                 for v in violations]
        outcome = Outcome(doc, [f"error: {exc}"], EXIT_INVALID, True)
    if args.format == "json":
        doc = {"schema": SCHEMA, "command": args.command}
        if args.input is not None:
            doc["input"] = args.input
        doc.update(outcome.doc)
        doc["exit"] = outcome.status
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        stream = err if outcome.error else out
        stream.write("\n".join(outcome.lines) + "\n")
    return outcome.status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
