"""Command line interface: ``perfectforms <command> ...``.

Commands:
  enumerate   classify perfect (or T-perfect) forms in one dimension
  min         arithmetical minimum and minimal vectors of a form file
  isom        test two form files for arithmetical equivalence
  classify    perfect / eutactic / extreme verdicts for a form file
  verify      recheck a saved enumeration directory

Exit codes: 0 success, 1 internal error or failed verification,
3 unreadable input, 4 budget exceeded.
"""

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded, FormatError, PerfectFormsError
from .eutaxy import is_eutactic, is_perfect
from .forms import (QuadForm, determinant, hermite_invariant_pow, packing_density, read_form,
                    truncate_decimal)
from .isometry import find_isometry, invariant_key
from .lattices import named_forms
from .shortvec import minimum

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 3
EXIT_BUDGET = 4

DIGITS_ENV = "PERFECTFORMS_DIGITS"


def _digits():
    try:
        return max(20, int(os.environ.get(DIGITS_ENV, "50")))
    except ValueError:
        return 50


def frac(v):
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def form_to_json(q):
    return [[frac(v) for v in row] for row in q.entries]


def form_from_json(rows):
    return QuadForm([[Fraction(v) for v in row] for row in rows])


def density_str(q, lam):
    return truncate_decimal(packing_density(q, lam, _digits()), 4)


def lattice_name(q, lam):
    """Name of a built-in root lattice similar to ``q``, if any."""
    key = None
    for name, ref in named_forms(q.dim):
        ref_lam = minimum(ref).min_value
        scaled = ref.scale(Fraction(lam) / ref_lam)
        if determinant(scaled) != determinant(q):
            continue
        key = key or invariant_key(q)
        if invariant_key(scaled) != key:
            continue
        if find_isometry(scaled, q) is not None:
            return name
    return None


def dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- tspace argument -----------------------------------------------------------

def load_tspace(spec, d):
    from .tspaces import builtin_tspace, read_tspace

    if spec is None:
        return None
    if spec.startswith("file:"):
        t = read_tspace(spec[5:])
        if t.d != d:
            raise FormatError(f"T-space file has dimension {t.d}, expected {d}")
        return t
    return builtin_tspace(spec, d)


def tspace_to_json(t):
    if t is None:
        return None
    return {"dim": t.d, "basis": [form_to_json(b) for b in t.basis],
            "group": [list(map(list, g)) for g in t.group] if t.group else None,
            "witness": form_to_json(t.witness)}


def tspace_from_json(obj):
    from .tspaces import TSpace

    if obj is None:
        return None
    return TSpace(obj["dim"], [form_from_json(b) for b in obj["basis"]], group=obj["group"],
                  witness=form_from_json(obj["witness"]))


# -- enumerate -----------------------------------------------------------------

def class_records(graph):
    out = []
    for i, c in enumerate(graph.classes):
        q, lam = c.representative, c.min_data.min_value
        out.append({
            "id": i,
            "name": lattice_name(q, lam),
            "form": form_to_json(q),
            "lambda": frac(lam),
            "det": frac(determinant(q)),
            "min_pairs": c.min_data.pairs,
            "hermite_pow": frac(hermite_invariant_pow(q, lam)),
            "density": density_str(q, lam),
            "perfect_classical": c.is_perfect_classical,
            "eutaxy": c.eutaxy_status,
            "extreme": c.is_perfect_classical and c.eutaxy_status == "eutactic",
            "aut_order": c.aut_order,
            "rays": c.n_rays,
        })
    return out


def graph_dot(graph, records):
    lines = ["graph voronoi {"]
    for r in records:
        label = f"{r['id']}" + (f" {r['name']}" if r["name"] else "")
        lines.append(f'  c{r["id"]} [label="{label}"];')
    for e in graph.edges:
        if e.source <= e.target:
            lines.append(f"  c{e.source} -- c{e.target};")
    for e in graph.dead_ends:
        lines.append(f'  dead{e.source}_{e.ray_index} [shape=point];')
        lines.append(f"  c{e.source} -- dead{e.source}_{e.ray_index} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_md(graph, records, tspace_label):
    lines = [f"# Enumeration in dimension {graph.dim}", ""]
    lines.append(f"- space: {tspace_label or 'all symmetric matrices'}")
    lines.append(f"- status: {graph.status}")
    lines.append(f"- classes: {len(records)}")
    lines.append(f"- extreme: {sum(r['extreme'] for r in records)}")
    lines.append(f"- edges: {len(graph.edges)}")
    lines.append(f"- dead ends: {len(graph.dead_ends)}")
    if records:
        best = max(records, key=lambda r: Fraction(r["hermite_pow"]))
        lines.append(f"- max hermite^d: {best['hermite_pow']} (class {best['id']})")
        lines.append(f"- max density: {max(r['density'] for r in records)}")
    lines += ["", "| id | name | lambda | det | pairs | hermite^d | density | classical perfect | eutaxy | aut order |",
              "|---|---|---|---|---|---|---|---|---|---|"]
    for r in records:
        lines.append(f"| {r['id']} | {r['name'] or ''} | {r['lambda']} | {r['det']} | {r['min_pairs']} | "
                     f"{r['hermite_pow']} | {r['density']} | {'yes' if r['perfect_classical'] else 'no'} | "
                     f"{r['eutaxy']} | {r['aut_order']} |")
    return "\n".join(lines) + "\n"


def write_run(graph, out, tspace_label, config):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    records = class_records(graph)
    dump_json(records, out / "classes.json")
    edges = [{"source": e.source, "ray": e.ray_index, "target": e.target, "rho": frac(e.rho),
              "witness": [list(r) for r in e.witness]} for e in graph.edges]
    dump_json(edges, out / "edges.json")
    dead = [{"source": e.source, "ray": e.ray_index, "direction": [frac(v) for v in e.ray]}
            for e in graph.dead_ends]
    dump_json(dead, out / "deadends.json")
    (out / "graph.dot").write_text(graph_dot(graph, records))
    (out / "report.md").write_text(report_md(graph, records, tspace_label))
    dump_json({**config, "status": graph.status, "note": graph.note,
               "tspace": tspace_to_json(graph.tspace)}, out / "run.json")
    return records


def load_run(path):
    from .voronoi import DeadEnd, Edge, FormClass, VoronoiGraph

    path = Path(path)
    try:
        run = json.loads((path / "run.json").read_text())
        classes = json.loads((path / "classes.json").read_text())
        edges = json.loads((path / "edges.json").read_text())
        dead = json.loads((path / "deadends.json").read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read run directory {path}: {exc}") from exc
    t = tspace_from_json(run.get("tspace"))
    g = VoronoiGraph(run["dim"], t, status=run["status"])
    for c in classes:
        q = form_from_json(c["form"])
        g.classes.append(FormClass(q, minimum(q), (), c["perfect_classical"], c["eutaxy"],
                                   c["aut_order"], c["rays"]))
    for e in edges:
        g.edges.append(Edge(e["source"], e["ray"], e["target"],
                            tuple(tuple(r) for r in e["witness"]), Fraction(e["rho"])))
    for e in dead:
        g.dead_ends.append(DeadEnd(e["source"], e["ray"], tuple(Fraction(v) for v in e["direction"])))
    return g


def cmd_enumerate(args):
    from .voronoi import COMPLETE, enumerate_forms

    t = load_tspace(args.tspace, args.dim)
    graph = enumerate_forms(args.dim, t, max_classes=args.budget_classes, ray_budget=args.budget_rays,
                            time_budget=args.budget_seconds, jobs=args.jobs,
                            orbit_reduction=not args.no_orbits)
    config = {"dim": args.dim, "tspace_spec": args.tspace, "budget_classes": args.budget_classes,
              "budget_rays": args.budget_rays}
    records = write_run(graph, args.out, args.tspace, config)
    summary = {"status": graph.status, "classes": len(records),
               "extreme": sum(r["extreme"] for r in records), "dead_ends": len(graph.dead_ends),
               "out": str(args.out)}
    if args.json:
        print(json.dumps(summary, sort_keys=True))
    else:
        print(f"{summary['classes']} classes ({summary['extreme']} extreme), "
              f"{summary['dead_ends']} dead ends, status {graph.status}; written to {args.out}")
    return EXIT_OK if graph.status == COMPLETE else EXIT_BUDGET


# -- small commands -------------------------------------------------------------

def cmd_min(args):
    q = read_form(args.form)
    md = minimum(q)
    if args.json:
        print(json.dumps({"lambda": frac(md.min_value), "pairs": md.pairs,
                          "vectors": [list(v) for v in md.vectors]}, sort_keys=True))
    else:
        print(f"lambda = {frac(md.min_value)}, pairs = {md.pairs}")
        for v in md.vectors:
            print(" ".join(str(c) for c in v))
    return EXIT_OK


def cmd_isom(args):
    q1, q2 = read_form(args.form1), read_form(args.form2)
    # the witness maps the first form to the second: U^t Q1 U = Q2
    u = find_isometry(q1, q2)
    if args.json:
        print(json.dumps({"equivalent": u is not None,
                          "witness": [list(r) for r in u] if u is not None else None}, sort_keys=True))
    elif u is None:
        print("inequivalent")
    else:
        for row in u:
            print(" ".join(str(v) for v in row))
    return EXIT_OK


def cmd_classify(args):
    q = read_form(args.form)
    md = minimum(q)
    perfect = is_perfect(q, md)
    cert = is_eutactic(q, md)
    extreme = perfect and cert.eutactic
    yn = {True: "yes", False: "no"}
    if args.json:
        print(json.dumps({"perfect": perfect, "eutactic": cert.eutactic, "extreme": extreme,
                          "alpha_min": frac(cert.objective) if cert.objective is not None else None,
                          "weights": [[list(x), frac(w)] for x, w in (cert.weights or {}).items()]},
                         sort_keys=True))
    else:
        print(f"perfect: {yn[perfect]}, eutactic: {yn[cert.eutactic]}, extreme: {yn[extreme]}")
        for x, w in (cert.weights or {}).items():
            print(f"  {' '.join(str(c) for c in x)}  weight {frac(w)}")
    return EXIT_OK


def cmd_verify(args):
    from .voronoi import verify_graph

    graph = load_run(args.run)
    report = verify_graph(graph)
    fails = report.failures
    if args.json:
        print(json.dumps({"ok": report.ok, "checks": len(report.items),
                          "failures": [[n, d] for n, _, d in fails]}, sort_keys=True))
    else:
        for name, ok, detail in report.items if args.verbose else fails:
            print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}".rstrip())
        print(f"{len(report.items) - len(fails)}/{len(report.items)} checks passed")
    return EXIT_OK if report.ok else EXIT_ERROR


def build_parser():
    p = argparse.ArgumentParser(prog="perfectforms", description="Perfect quadratic forms toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="enumerate (T-)perfect forms in one dimension")
    e.add_argument("--dim", type=int, required=True)
    e.add_argument("--tspace", help="eisenstein, gaussian, hurwitz or file:<path>")
    e.add_argument("--budget-classes", type=int, default=None)
    e.add_argument("--budget-rays", type=int, default=100_000, help="ray cap per cone")
    e.add_argument("--budget-seconds", type=float, default=None)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--no-orbits", action="store_true",
                   help="run the neighbour step on every ray instead of one per orbit")
    e.add_argument("--out", default="run")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    m = sub.add_parser("min", help="arithmetical minimum of a form")
    m.add_argument("form")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_min)

    i = sub.add_parser("isom", help="equivalence test of two forms")
    i.add_argument("form1")
    i.add_argument("form2")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_isom)

    c = sub.add_parser("classify", help="perfect, eutactic and extreme verdicts")
    c.add_argument("form")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="recheck a saved enumeration")
    v.add_argument("run")
    v.add_argument("--verbose", action="store_true")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "dim", 1) is not None and getattr(args, "dim", 1) < 1:
        print("error: --dim must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PerfectFormsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
