"""Command-line interface.

Exit codes: 0 affirmative verdict or success, 1 negative verdict, 2 usage or
input error, 3 equivalence class cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from dmag import conjecture, equivalence, projection, reachability, transform
from dmag.exceptions import CapExceeded, GraphError, GraphFormatError, NotEquivalentError
from dmag.mixed_graph import MarkChange, Mark, MixedGraph, Verdict, mark_difference, parse_graph, to_dot

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


class Report:
    def __init__(self, verb: str, inputs: list[str]):
        self.verb = verb
        self.inputs = inputs
        self.verdict: bool | None = None
        self.witnesses: list = []
        self.sequence: list = []
        self.stats: dict = {}
        self.text: list[str] = []

    def set_verdict(self, verdict: Verdict | bool, yes: str, no: str, explain: bool = True):
        holds = bool(verdict)
        self.verdict = holds
        self.text.append(yes if holds else no)
        if isinstance(verdict, Verdict):
            self.witnesses = [{"tag": w.tag, "vertices": list(w.vertices), "detail": w.detail}
                              for w in verdict.witnesses]
            if explain:
                self.text.extend(f"  {w}" for w in verdict.witnesses)

    def set_sequence(self, seq: transform.TransformationSequence):
        self.sequence = [{"edge": list(s.change.edge), "at": s.change.at,
                          "to": s.change.to.value, "digest": s.digest} for s in seq.steps]
        self.stats["start_hash"] = seq.start_hash
        self.stats["length"] = len(seq)
        self.text.extend(seq.lines())

    def as_json(self) -> str:
        return json.dumps({"verb": self.verb, "inputs": self.inputs, "verdict": self.verdict,
                           "witnesses": self.witnesses, "sequence": self.sequence,
                           "stats": self.stats}, indent=2, ensure_ascii=False)


def read_graph(path: str) -> MixedGraph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return parse_graph(text)
    except GraphFormatError as exc:
        raise InputError(f"{path}:{exc.line}:{exc.column}: {exc.reason}") from exc
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc


def vertex_list(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise argparse.ArgumentTypeError("expected a comma-separated vertex list")
    return names


def edge_pair(text: str) -> tuple[str, str]:
    names = vertex_list(text)
    if len(names) != 2:
        raise argparse.ArgumentTypeError("expected two vertices, e.g. A,B")
    return names[0], names[1]


def _graph_lines(g: MixedGraph) -> list[str]:
    return g.canonical().splitlines() or ["vertices:"]


# === verbs

def cmd_validate(args, rep: Report):
    g = read_graph(args.graph)
    rep.set_verdict(reachability.is_dmag(g), "DMAG", "not a DMAG")


def cmd_msep(args, rep: Report):
    g = read_graph(args.graph)
    q = reachability.SeparationQuery(args.x, args.y, args.given or ())
    q.check(g)
    sep = reachability.m_separated(g, q)
    rep.set_verdict(sep, "m-separated", "m-connected")
    if not sep:
        for a in sorted(q.x):
            for b in sorted(q.y):
                path = reachability.m_connecting_path(g, a, b, q.z)
                if path is not None:
                    rep.witnesses = [{"tag": "path", "vertices": list(path.vertices),
                                      "detail": "active path"}]
                    rep.text.append(f"  path {path}")
                    return


def cmd_project(args, rep: Report):
    d = projection.LatentDag(read_graph(args.graph), frozenset(args.latent or ()))
    g = projection.project(d)
    rep.verdict = True
    rep.stats["graph"] = g.canonical()
    rep.text.extend(_graph_lines(g))


def cmd_equiv(args, rep: Report):
    g1, g2 = read_graph(args.first), read_graph(args.second)
    if args.oracle:
        holds = equivalence.markov_equivalent_oracle(g1, g2)
        rep.set_verdict(holds, "equivalent", "not equivalent")
        if not holds:
            a, b, z = equivalence.distinguishing_query(g1, g2)
            sep_first = reachability.msep(g1, a, b, z)
            where = "first" if sep_first else "second"
            rep.witnesses = [{"tag": "query", "vertices": [a, b], "detail": sorted(z)}]
            rep.text.append(f"  {a} and {b} given {{{','.join(sorted(z))}}} "
                            f"m-separated only in the {where} graph")
    else:
        for g in (g1, g2):
            verdict = reachability.is_dmag(g)
            if not verdict:
                raise InputError(f"not a DMAG: {verdict.describe()}")
        verdict = equivalence.markov_equivalent(g1, g2)
        rep.set_verdict(verdict, "equivalent", "not equivalent")
        if args.explain and verdict:
            rep.text.append("  e1 e2 e3 hold")


def cmd_legal(args, rep: Report):
    g = read_graph(args.graph)
    change = MarkChange(args.edge, args.at, Mark(args.to))
    rep.set_verdict(transform.mark_change_legitimate(g, change), "legitimate", "not legitimate")


def cmd_reverse(args, rep: Report):
    g = read_graph(args.graph)
    a, b = args.edge
    rep.set_verdict(transform.reversal_legitimate(g, a, b), "legitimate", "not legitimate")


def _mark_lines(summary: transform.ClassSummary) -> list[str]:
    out = [f"arrowhead {u}-{v} at {at}" for (u, v), at in sorted(summary.invariant_arrowheads)]
    out += [f"tail {u}-{v} at {at}" for (u, v), at in sorted(summary.invariant_tails)]
    out += [f"bidirected {u} <-> {v}" for u, v in sorted(summary.invariant_bidirected)]
    return out


def cmd_class(args, rep: Report):
    summary = transform.enumerate_class(read_graph(args.graph), args.cap)
    rep.verdict = True
    rep.stats["members"] = [m.canonical() for m in summary.members]
    rep.text.append(f"members: {len(summary)}")
    for i, m in enumerate(summary.members):
        rep.text.append(f"--- member {i}")
        rep.text.extend(_graph_lines(m))


def cmd_invariant(args, rep: Report):
    summary = transform.invariant_marks(read_graph(args.graph), args.cap)
    rep.verdict = True
    rep.stats["invariant_arrowheads"] = [[list(p), at] for p, at in sorted(summary.invariant_arrowheads)]
    rep.stats["invariant_tails"] = [[list(p), at] for p, at in sorted(summary.invariant_tails)]
    rep.stats["invariant_bidirected"] = [list(p) for p in sorted(summary.invariant_bidirected)]
    rep.text.extend(_mark_lines(summary) or ["no invariant marks"])


def cmd_leg(args, rep: Report):
    h = transform.find_leg(read_graph(args.graph), cap=args.cap)
    rep.verdict = True
    rep.stats["graph"] = h.canonical()
    rep.text.extend(_graph_lines(h))


def cmd_transform(args, rep: Report):
    g1, g2 = read_graph(args.first), read_graph(args.second)
    seq = transform.transform_full(g1, g2, args.cap)
    rep.verdict = True
    rep.set_sequence(seq)


def cmd_shortest(args, rep: Report):
    g1, g2 = read_graph(args.first), read_graph(args.second)
    seq = transform.shortest_transform(g1, g2, args.cap)
    diff = mark_difference(g1, g2)
    rep.verdict = True
    rep.set_sequence(seq)
    rep.stats["difference"] = diff
    rep.text.append(f"length {len(seq)} difference {diff}")


def cmd_conjecture(args, rep: Report):
    report = conjecture.sweep(args.vertices, args.trials, args.seed, args.cap)
    rep.stats.update(report.as_dict())
    rep.text.append(f"pairs {report.trials} seed {report.seed}")
    for excess, count in sorted(report.histogram.items()):
        rep.text.append(f"excess {excess}: {count}")
    rep.text.append(f"counterexamples {len(report.counterexamples)}")
    rep.text.append(f"criterion/oracle disagreements {report.criterion_disagreements}")
    if report.counterexamples and args.archive:
        for path in conjecture.archive(report, args.archive):
            rep.text.append(f"archived {path}")
    # informational: counterexamples do not change the exit code
    rep.verdict = True


def cmd_export_dot(args, rep: Report):
    g = read_graph(args.graph)
    rep.verdict = True
    rep.stats["dot"] = to_dot(g)
    rep.text.extend(to_dot(g).splitlines())


# === parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dmag", description="Directed maximal ancestral graph tools.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    capped = argparse.ArgumentParser(add_help=False)
    capped.add_argument("--cap", type=int, default=transform.DEFAULT_CAP,
                        help="maximum equivalence class size (default %(default)s)")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def add(name, func, help, parents=(common,), graphs=("graph",)):
        p = sub.add_parser(name, help=help, parents=list(parents))
        for g in graphs:
            p.add_argument(g, help="graph file ('-' for stdin)")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check that a graph is a DMAG")
    p = add("msep", cmd_msep, "test m-separation")
    p.add_argument("--x", type=vertex_list, required=True)
    p.add_argument("--y", type=vertex_list, required=True)
    p.add_argument("--given", type=vertex_list, default=None)
    p = add("project", cmd_project, "project a DAG with latent variables to a DMAG")
    p.add_argument("--latent", type=vertex_list, default=None)
    p = add("equiv", cmd_equiv, "decide Markov equivalence", graphs=("first", "second"))
    p.add_argument("--oracle", action="store_true", help="compare all m-separations instead")
    p.add_argument("--explain", action="store_true")
    p = add("legal", cmd_legal, "test a single mark change")
    p.add_argument("--edge", type=edge_pair, required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--to", choices=["arrow", "tail"], required=True)
    p = add("reverse", cmd_reverse, "test reversing the directed edge A -> B")
    p.add_argument("--edge", type=edge_pair, required=True, help="A,B for A -> B")
    add("class", cmd_class, "enumerate the equivalence class", parents=(common, capped))
    add("invariant", cmd_invariant, "list invariant marks", parents=(common, capped))
    add("leg", cmd_leg, "find a loyal equivalent graph", parents=(common, capped))
    add("transform", cmd_transform, "legitimate mark changes between equivalent DMAGs",
        parents=(common, capped), graphs=("first", "second"))
    add("shortest", cmd_shortest, "shortest legitimate transformation",
        parents=(common, capped), graphs=("first", "second"))
    p = add("conjecture", cmd_conjecture, "random shortest-vs-difference sweep",
            parents=(common, capped), graphs=())
    p.add_argument("--vertices", type=int, default=5)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--archive", default=None, help="directory for counterexample fixtures")
    add("export-dot", cmd_export_dot, "print Graphviz DOT")
    return parser


def _emit(rep: Report, as_json: bool, out):
    if as_json:
        print(rep.as_json(), file=out)
    else:
        for line in rep.text:
            print(line, file=out)


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    inputs = [getattr(args, k) for k in ("graph", "first", "second") if hasattr(args, k)]
    rep = Report(args.verb, inputs)
    code = EXIT_OK
    try:
        args.func(args, rep)
        code = EXIT_OK if rep.verdict in (True, None) else EXIT_NEGATIVE
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except NotEquivalentError as exc:
        rep.verdict = False
        if exc.query is not None:
            a, b, z = exc.query
            rep.witnesses = [{"tag": "query", "vertices": [a, b], "detail": sorted(z)}]
        rep.text.append(f"not equivalent: {exc}")
        code = EXIT_NEGATIVE
    except GraphError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CAP
    _emit(rep, args.json, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
