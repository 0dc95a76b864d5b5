"""Command-line entry point.

Exit codes: 0 isomorphic / success, 1 non-isomorphic, 2 topological clique
detected, 3 budget exhausted, 64 usage error, 65 malformed graph file,
66 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .closure import ClosureParams, closure_of, find_initial_set
from .generators import InfeasibleSpec, generate
from .graph import GraphFormatError, apply_permutation, is_isomorphism, read_graph
from .hypergraph import DEFAULT_BUDGET, BudgetExceeded
from .iso import (
    DETECTED,
    ISOMORPHIC,
    NON_ISOMORPHIC,
    TopologicalSubgraphDetected,
    isomorphisms,
    tree_decomposition,
)
from .oracle import OracleBudget, OracleCapExceeded, brute_iso, has_topological_Kh, reference_refine
from .perm import cycle_string
from .refinement import wl

EXIT_ISO, EXIT_NONISO, EXIT_DETECTED, EXIT_BUDGET = 0, 1, 2, 3
EXIT_USAGE, EXIT_DATA, EXIT_IO = 64, 65, 66
OUTCOME_CODES = {ISOMORPHIC: EXIT_ISO, NON_ISOMORPHIC: EXIT_NONISO, DETECTED: EXIT_DETECTED}


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    outcome: str = ""
    timings: dict = field(default_factory=dict)
    nodes: int = 0
    peak_classes: int = 0
    details: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    def without_timings(self) -> dict:
        d = asdict(self)
        d.pop("timings")
        d["details"] = {k: v for k, v in d["details"].items() if k != "timings"}
        return d


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _params(ns) -> ClosureParams:
    return ClosureParams(ns.h, a_deg=ns.adeg, override_t=ns.t)


def _add_params(p, h_required=True):
    p.add_argument("--h", type=int, required=h_required, default=None, help="excluded clique order")
    p.add_argument("--t", type=int, default=None, help="explicit closure threshold")
    p.add_argument("--adeg", type=int, default=2, help="average-degree constant")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="topiso", description="Isomorphism testing for graphs excluding a topological clique.")
    ap.add_argument("--json", action="store_true", help="emit a JSON run report")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a JSON run report")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("refine", help="Color Refinement or k-WL", parents=[common])
    p.add_argument("graph")
    p.add_argument("--k", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--full", action="store_true", help="print the full tuple coloring")

    p = sub.add_parser("closure", help="t-closure of a vertex set", parents=[common])
    p.add_argument("graph")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--individualize", default="", help="comma-separated vertices")

    p = sub.add_parser("initial-set", help="isomorphism-invariant initial set", parents=[common])
    p.add_argument("graph")
    _add_params(p)
    p.add_argument("--wl-dim", type=int, choices=(2, 3), default=3, help="2 is heuristic")
    p.add_argument("--exhaustive", action="store_true")

    p = sub.add_parser("iso", help="isomorphism test", parents=[common])
    p.add_argument("graph1")
    p.add_argument("graph2")
    _add_params(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--aut", action="store_true")
    p.add_argument("--memo", action="store_true")

    p = sub.add_parser("aut", help="automorphism group", parents=[common])
    p.add_argument("graph")
    _add_params(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("decompose", help="tree decomposition from the recursion", parents=[common])
    p.add_argument("graph")
    _add_params(p)
    p.add_argument("--format", choices=("json", "dot"), default="json")

    p = sub.add_parser("bench", help="seeded corpus run: each graph against a permuted copy", parents=[common])
    p.add_argument("--spec", action="append", default=[], help="family descriptor with {n}, e.g. 'random_max_degree({n},3)'")
    p.add_argument("--sizes", default="", help="comma-separated n values")
    p.add_argument("--count", type=int, default=1, help="instances per spec and size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    _add_params(p, h_required=False)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("oracle", help="brute-force reference commands", parents=[common])
    osub = p.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    q = osub.add_parser("iso", parents=[common])
    q.add_argument("graph1")
    q.add_argument("graph2")
    q.add_argument("--max-n", type=int, default=12)
    q = osub.add_parser("topo", parents=[common])
    q.add_argument("graph")
    q.add_argument("--h", type=int, required=True)
    q = osub.add_parser("refine", parents=[common])
    q.add_argument("graph")
    q.add_argument("--k", type=int, choices=(1, 2, 3), default=1)
    return ap


# ---------------------------------------------------------------- commands

def _emit(out, ns, report: RunReport, lines):
    if ns.json:
        print(report.to_json(), file=out)
    else:
        for line in lines:
            print(line, file=out)


def _cmd_refine(ns, out):
    g = read_graph(ns.graph)
    t0 = time.perf_counter()
    c = wl(g, ns.k)
    sizes = c.class_sizes()
    rep = RunReport("refine", [ns.graph], {"k": ns.k}, f"{c.num_colors} classes",
                    {"refinement": time.perf_counter() - t0}, peak_classes=c.num_colors,
                    details={"class_sizes": sizes})
    lines = [f"{c.num_colors} classes", "sizes " + " ".join(map(str, sizes))]
    if ns.full:
        lines += c.export_lines()
        rep.details["coloring"] = c.export_lines()
    _emit(out, ns, rep, lines)
    return 0


def _vertices(text, n):
    if not text.strip():
        return []
    try:
        vs = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError("--individualize expects comma-separated integers") from None
    if any(not 0 <= v < n for v in vs):
        raise UsageError("individualized vertex out of range")
    return vs


def _cmd_closure(ns, out):
    g = read_graph(ns.graph)
    X = _vertices(ns.individualize, g.n)
    if ns.t < 1:
        raise UsageError("--t must be positive")
    t0 = time.perf_counter()
    D = sorted(closure_of(g, ns.t, X))
    rep = RunReport("closure", [ns.graph], {"t": ns.t, "X": X}, "ok",
                    {"closure": time.perf_counter() - t0}, details={"closure": D})
    _emit(out, ns, rep, [f"|closure| = {len(D)}", " ".join(map(str, D))])
    return 0


def _cmd_initial_set(ns, out):
    g = read_graph(ns.graph)
    params = _params(ns)
    t0 = time.perf_counter()
    try:
        res = find_initial_set(g, params, exhaustive=ns.exhaustive, wl_dim=ns.wl_dim)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    timing = {"initial_set": time.perf_counter() - t0}
    pdict = {"h": params.h, "t": params.t, "a_deg": params.a_deg, "wl_dim": ns.wl_dim}
    if not res.found:
        rep = RunReport("initial-set", [ns.graph], pdict, "DETECTED", timing)
        _emit(out, ns, rep, ["DETECTED"])
        return EXIT_DETECTED
    X = sorted(res.X)
    rep = RunReport("initial-set", [ns.graph], pdict, "Found", timing,
                    details={"c0": int(res.c0), "X": X})
    _emit(out, ns, rep, [f"c0 {res.c0}", f"|X| {len(X)}", "X " + " ".join(map(str, X))])
    return 0


def _iso_report(command, inputs, params, res):
    st = res.stats.as_dict()
    return RunReport(command, inputs, {"h": params.h, "t": params.t, "a_deg": params.a_deg}, res.outcome,
                     st["timings"], st["search_nodes"], st["peak_classes"],
                     details={"recursive_calls": st["recursive_calls"], "max_depth": st["max_depth"]})


def _cmd_iso(ns, out):
    g1, g2 = read_graph(ns.graph1), read_graph(ns.graph2)
    params = _params(ns)
    res = isomorphisms(g1, g2, params, budget=ns.budget, memo=ns.memo)
    rep = _iso_report("iso", [ns.graph1, ns.graph2], params, res)
    lines = [res.outcome if res.side is None else f"{res.outcome} (input {res.side})"]
    if res.isomorphic:
        if ns.witness:
            phi = res.representative()
            rep.details["witness"] = list(phi)
            lines += [f"{v} -> {w}" for v, w in enumerate(phi)]
        if ns.aut:
            grp = res.coset.group
            rep.details["aut_order"] = grp.order()
            rep.details["aut_generators"] = [list(g) for g in grp.generators]
            lines.append(f"|Aut| = {grp.order()}")
            lines += [cycle_string(g) for g in grp.generators]
    _emit(out, ns, rep, lines)
    return OUTCOME_CODES[res.outcome]


def _cmd_aut(ns, out):
    g = read_graph(ns.graph)
    params = _params(ns)
    res = isomorphisms(g, g, params, budget=ns.budget)
    rep = _iso_report("aut", [ns.graph], params, res)
    if res.outcome == DETECTED:
        _emit(out, ns, rep, [DETECTED])
        return EXIT_DETECTED
    grp = res.coset.group
    rep.details["order"] = grp.order()
    rep.details["generators"] = [list(p) for p in grp.generators]
    _emit(out, ns, rep, [f"|Aut| = {grp.order()}"] + [cycle_string(p) for p in grp.generators])
    return 0


def _dot(root) -> str:
    lines = ["graph decomposition {"]
    ids = {}
    for i, nd in enumerate(root.nodes()):
        ids[id(nd)] = i
        lines.append(f'  t{i} [label="{" ".join(map(str, sorted(nd.bag)))}"];')
    for nd in root.nodes():
        for c in nd.children:
            lines.append(f"  t{ids[id(nd)]} -- t{ids[id(c)]};")
    lines.append("}")
    return "\n".join(lines)


def _cmd_decompose(ns, out):
    g = read_graph(ns.graph)
    params = _params(ns)
    t0 = time.perf_counter()
    try:
        root = tree_decomposition(g, params)
    except TopologicalSubgraphDetected:
        rep = RunReport("decompose", [ns.graph], {"h": params.h, "t": params.t}, DETECTED)
        _emit(out, ns, rep, [DETECTED])
        return EXIT_DETECTED
    rep = RunReport("decompose", [ns.graph], {"h": params.h, "t": params.t}, "ok",
                    {"total": time.perf_counter() - t0}, details={"tree": root.to_dict()})
    if ns.json:
        print(rep.to_json(), file=out)
    elif ns.format == "json":
        print(json.dumps(root.to_dict(), sort_keys=True), file=out)
    else:
        print(_dot(root), file=out)
    return 0


def _bench_one(task):
    spec, n, seed, h, t, adeg, budget = task
    rng = random.Random(seed)
    desc = spec.format(n=n)
    g = generate(desc, rng.randrange(2**32))
    p = list(range(g.n))
    rng.shuffle(p)
    g2 = apply_permutation(g, p)
    hh = h if h is not None else max(g.degrees(), default=0) + 2
    params = ClosureParams(hh, a_deg=adeg, override_t=t)
    try:
        res = isomorphisms(g, g2, params, budget=budget)
    except BudgetExceeded:
        return RunReport("bench", [desc], {"h": hh, "t": params.t, "seed": seed}, "BudgetExceeded")
    rep = _iso_report("bench", [desc], params, res)
    rep.params["seed"] = seed
    if res.isomorphic:
        rep.details["witness_ok"] = is_isomorphism(g, g2, res.representative())
        rep.details["aut_order"] = res.coset.group.order()
    return rep


def bench_tasks(specs, sizes, count, seed, h, t, adeg, budget):
    master = random.Random(seed)
    tasks = []
    for spec in specs:
        for n in sizes:
            for _ in range(count):
                tasks.append((spec, n, master.randrange(2**32), h, t, adeg, budget))
    return tasks


def run_bench(tasks, jobs=1) -> list[RunReport]:
    if jobs <= 1 or len(tasks) <= 1:
        return [_bench_one(tk) for tk in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_bench_one, tasks))


def _cmd_bench(ns, out):
    try:
        sizes = [int(x) for x in ns.sizes.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--sizes expects comma-separated integers") from None
    tasks = bench_tasks(ns.spec, sizes, ns.count, ns.seed, ns.h, ns.t, ns.adeg, ns.budget)
    try:
        reports = run_bench(tasks, ns.jobs)
    except InfeasibleSpec as exc:
        raise UsageError(str(exc)) from None
    if ns.json:
        print(json.dumps([json.loads(r.to_json()) for r in reports], sort_keys=True), file=out)
    else:
        print(f"{'instance':<32} {'outcome':<28} {'nodes':>8} {'seconds':>9}", file=out)
        for r in reports:
            print(f"{r.inputs[0]:<32} {r.outcome:<28} {r.nodes:>8} {r.timings.get('total', 0.0):>9.3f}", file=out)
        tally = {}
        for r in reports:
            tally[r.outcome] = tally.get(r.outcome, 0) + 1
        print("total " + ", ".join(f"{k}={v}" for k, v in sorted(tally.items())), file=out)
    return 0


def _cmd_oracle(ns, out):
    if ns.oracle_command == "iso":
        g1, g2 = read_graph(ns.graph1), read_graph(ns.graph2)
        c = brute_iso(g1, g2, OracleBudget(max_n=ns.max_n))
        outcome = NON_ISOMORPHIC if c.empty else ISOMORPHIC
        rep = RunReport("oracle iso", [ns.graph1, ns.graph2], {}, outcome,
                        details={"size": c.size()})
        _emit(out, ns, rep, [outcome] + ([] if c.empty else [f"|Iso| = {c.size()}"]))
        return OUTCOME_CODES[outcome]
    if ns.oracle_command == "topo":
        g = read_graph(ns.graph)
        found = has_topological_Kh(g, ns.h)
        rep = RunReport("oracle topo", [ns.graph], {"h": ns.h}, str(found).lower())
        _emit(out, ns, rep, [f"topological K{ns.h}: {'yes' if found else 'no'}"])
        return 0
    g = read_graph(ns.graph)
    c = reference_refine(g, ns.k)
    rep = RunReport("oracle refine", [ns.graph], {"k": ns.k}, f"{c.num_colors} classes",
                    details={"class_sizes": c.class_sizes()})
    _emit(out, ns, rep, [f"{c.num_colors} classes"])
    return 0


COMMANDS = {
    "refine": _cmd_refine,
    "closure": _cmd_closure,
    "initial-set": _cmd_initial_set,
    "iso": _cmd_iso,
    "aut": _cmd_aut,
    "decompose": _cmd_decompose,
    "bench": _cmd_bench,
    "oracle": _cmd_oracle,
}


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        return COMMANDS[ns.command](ns, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(str(exc).rstrip(), file=err)
        return EXIT_USAGE
    except GraphFormatError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    except (BudgetExceeded, OracleCapExceeded) as exc:
        print(f"budget: {exc}", file=err)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
