"""Command-line front end.

Every command prints one document ``{"command", "config", "rows", "status"}``.
JSON output uses sorted keys and ``repr`` floats, so a fixed ``--seed`` and
``--partitions`` reproduce it byte for byte whatever ``--workers`` is.

Exit codes: 0 success, 1 advisory (flagged score rows), 2 table mismatch,
3 capability error, 4 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from bngeom import __version__
from bngeom.bitnet import BitnetModel, load_csv
from bngeom.curvature import bitnet_ricci, fit_collapsing_star_form, gaussian_ricci
from bngeom.dag import (
    TopologyId,
    build_catalog_dag,
    load_model_json,
    parse_topology_name,
    quantization_class,
    skeleton_summary,
)
from bngeom.errors import CapabilityError, ConditioningError, InputError
from bngeom.gaussian import GaussianModel
from bngeom import integrate, predictions
from bngeom.constants import D4_REDUCED_AVERAGE
from bngeom.scoring import cic_score

EXIT_OK = 0
EXIT_ADVISORY = 1
EXIT_VERIFY = 2
EXIT_CAPABILITY = 3
EXIT_INPUT = 4


# -- output ------------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def render(doc, fmt):
    doc = _clean(doc)
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    rows = doc["rows"]
    keys = sorted({k for r in rows for k in r})
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        return buf.getvalue()
    lines = [f"{doc['command']}  status={doc['status']}"]
    if not rows:
        return lines[0] + "\n"
    cells = [[_fmt_cell(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines.append("  ".join(k.ljust(w) for k, w in zip(keys, widths)))
    for c in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(c, widths)))
    return "\n".join(lines) + "\n"


def _fmt_cell(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (dict, list)):
        s = json.dumps(v, sort_keys=True)
        return s if len(s) <= 60 else s[:57] + "..."
    return "" if v is None else str(v)


def _doc(command, config, rows, status="ok"):
    return {"command": command, "version": __version__, "config": config, "rows": rows, "status": status}


# -- model loading -------------------------------------------------------------


def _load(args):
    if getattr(args, "file", None):
        kind, dag = load_model_json(args.file)
        label = args.file
        tid = TopologyId("Custom", dag.node_count)
    elif getattr(args, "name", None):
        kind, tid, dag = parse_topology_name(args.name)
        label = args.name
    else:
        raise InputError("give --name or --file")
    model = GaussianModel(dag) if kind == "gaussian" else BitnetModel(dag)
    return kind, tid, dag, model, label


def _parse_point(spec, dim):
    spec = spec.strip()
    if spec.startswith("all="):
        try:
            return np.full(dim, float(spec[4:]))
        except ValueError:
            raise InputError(f"bad point shorthand {spec!r}") from None
    try:
        vals = [float(x) for x in spec.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad point {spec!r}") from None
    if len(vals) != dim:
        raise InputError(f"point has {len(vals)} entries, model needs {dim}")
    return np.array(vals)


def _int_list(text):
    try:
        return tuple(int(float(x)) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _samples(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sample count {text!r}") from None
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError("sample count must be a positive integer")
    return int(v)


def _config(args, *keys):
    out = {"seed": args.seed, "partitions": args.partitions}
    for k in keys:
        out[k] = getattr(args, k, None)
    return out


# -- commands ----------------------------------------------------------------


def cmd_topology(args):
    kind, tid, dag, model, label = _load(args)
    s = skeleton_summary(dag)
    row = {
        "topology": label,
        "kind": kind,
        "nodes": list(dag.labels) if dag.labels else list(range(dag.node_count)),
        "edges": [list(e) for e in dag.edges],
        "d": model.dim,
        "betti_1": s.betti_1,
        "components": s.component_count,
        "quantization_class": quantization_class(s).value,
    }
    return _doc("topology", _config(args), [row]), EXIT_OK


def _ricci_at(kind, model, x, dense):
    if kind == "gaussian":
        return gaussian_ricci(model, x)
    return bitnet_ricci(model, x, dense=dense)


def cmd_ricci(args):
    kind, tid, dag, model, label = _load(args)
    if args.point is not None:
        points = [_parse_point(args.point, model.dim)]
    else:
        rng = np.random.default_rng(args.seed)
        points = [model.random_point(rng) for _ in range(args.random)]
    rows = []
    for i, x in enumerate(points):
        rows.append({"topology": label, "index": i, "R": _ricci_at(kind, model, x, args.dense), "point": x.tolist()})
    return _doc("ricci", _config(args, "dense"), rows), EXIT_OK


def _integral_row(label, est):
    row = est.to_dict()
    row["topology"] = label
    return row


def cmd_volume(args):
    kind, tid, dag, model, label = _load(args)
    if kind == "gaussian":
        raise CapabilityError("Gaussian volumes are improper (unbounded variances); bitnets only")
    est = integrate.volume(model, args.method, args.samples, args.seed, args.partitions, args.workers, args.nodes)
    return _doc("volume", _config(args, "method", "samples", "nodes"), [_integral_row(label, est)]), EXIT_OK


def cmd_avg_ricci(args):
    kind, tid, dag, model, label = _load(args)
    if kind == "gaussian":
        raise CapabilityError("volume averages need a finite volume; bitnets only")
    if args.method == "reduced":
        if tid.family == "D4":
            est = integrate.reduced_average_d4(args.nodes or (32, 48, 64), args.exponent)
        elif tid.family == "C" and 2 <= tid.n <= 5:
            est = integrate.reduced_average_collapsing_star(tid.n, seed=args.seed)
        else:
            raise CapabilityError("reduced averages exist for D4 and collapsing stars C3..C6 only")
    else:
        est = integrate.average_ricci(model, args.method, args.samples, args.seed, args.partitions, args.workers, args.nodes)
    return _doc("avg-ricci", _config(args, "method", "samples", "nodes", "exponent"), [_integral_row(label, est)]), EXIT_OK


def _row(topology, quantity, predicted, computed, tol, caveat, relative=False, **extra):
    dev = None if predicted is None or computed is None else abs(computed - predicted)
    scale = abs(predicted) if relative and predicted else 1.0
    passed = None if dev is None else bool(dev <= tol * scale)
    row = {
        "topology": topology,
        "quantity": quantity,
        "predicted": predicted,
        "computed": computed,
        "deviation": dev,
        "tolerance": tol,
        "relative_tolerance": relative,
        "pass": passed,
        "caveat": caveat,
    }
    row.update(extra)
    return row


def _bitnet(name):
    return BitnetModel(parse_topology_name(name)[2])


def _table_classical(args):
    rows = []
    cases = [
        ("K1", predictions.predict_complete(1)),
        ("K2", predictions.predict_complete(2)),
        ("L3", predictions.predict_chain_star(3)),
        ("E3", predictions.predict_chain_star(3)),
        ("C3", predictions.predict_collapsing_star(2)),
        ("C4", predictions.predict_collapsing_star(3)),
        ("K3", predictions.predict_complete(3)),
    ]
    for name, rec in cases:
        model = _bitnet(name)
        avg = integrate.average_ricci(model, "quad", seed=args.seed)
        rows.append(_row(name, "avg_R", rec.predicted_avg_R, avg.value, 1e-3, rec.caveat, method=avg.method, status=avg.status))
        if rec.predicted_volume is not None:
            vol = integrate.volume(model, "quad")
            rows.append(_row(name, "volume", rec.predicted_volume, vol.value, 1e-4, rec.caveat, relative=True, method=vol.method))
    d4 = _bitnet("D4")
    full = integrate.average_ricci(d4, "quad", seed=args.seed)
    rows.append(_row("D4", "avg_R", D4_REDUCED_AVERAGE, full.value, 1e-3, False, method=full.method, status=full.status))
    red = integrate.reduced_average_d4()
    rows.append(_row("D4", "avg_R_reduced", D4_REDUCED_AVERAGE, red.value, 1e-4, False, method=red.method,
                     weight_exponent=red.details["weight_exponent"],
                     volume_element_exponent=red.details["volume_element_exponent"]))
    return rows


def _table_gaussian(args):
    rows = []
    rng = np.random.default_rng(args.seed)
    for alias, d in (("single", 1), ("chain", 3), ("v", 5), ("l3", 5), ("star3", 7)):
        _, _, dag = parse_topology_name("gauss:" + alias)
        model = GaussianModel(dag)
        rec = predictions.predict_gaussian_star(d=d)
        vals = np.array([gaussian_ricci(model, model.random_point(rng)) for _ in range(20)])
        worst = float(vals[np.argmax(np.abs(vals - rec.predicted_R_constant))])
        rows.append(_row("gauss:" + alias, "R", rec.predicted_R_constant, worst, 1e-6, rec.caveat,
                         d=model.dim, points=20, spread=float(np.ptp(vals))))
    return rows


def _table_collapsing(args):
    rows = []
    for n in range(1, 6):
        rec = predictions.predict_collapsing_star(n)
        name = TopologyId("C", n).name
        fit = fit_collapsing_star_form(n, seed=args.seed)
        rows.append(_row(name, "b", rec.extra("b"), fit.b, 1e-3, rec.caveat, fit_residual=fit.residual))
        rows.append(_row(name, "a", rec.extra("a"), fit.a, 1e-3, rec.caveat, fit_residual=fit.residual))
        if n == 1:
            est = integrate.average_ricci(BitnetModel(build_catalog_dag(TopologyId("C", 1))), "quad", seed=args.seed)
            rows.append(_row(name, "avg_R", rec.predicted_avg_R, est.value, 1e-3, rec.caveat, method=est.method))
            continue
        est = integrate.reduced_average_collapsing_star(n, seed=args.seed)
        # tolerance propagated from the intercept/slope tolerances
        tol = 1e-3 + n * est.details["expectation_closed"] * 1e-3
        rows.append(_row(name, "avg_R", rec.predicted_avg_R, est.value, tol, rec.caveat, method=est.method,
                         expectation_closed=est.details["expectation_closed"],
                         expectation_numeric=est.details["expectation_numeric"]))
    return rows


def cmd_table(args):
    build = {"classical": _table_classical, "collapsing": _table_collapsing, "gaussian": _table_gaussian}[args.which]
    rows = build(args)
    failed = any(r["pass"] is False and not r["caveat"] for r in rows)
    return _doc(f"table {args.which}", _config(args, "which"), rows, "fail" if failed else "ok"), (
        EXIT_VERIFY if failed else EXIT_OK
    )


def cmd_score(args):
    sources = []
    for f in args.model or []:
        kind, dag = load_model_json(f)
        sources.append((f, kind, dag))
    for nm in args.name or []:
        kind, _, dag = parse_topology_name(nm)
        sources.append((nm, kind, dag))
    if not sources:
        raise InputError("give at least one --model file or --name")
    n_nodes = {dag.node_count for _, _, dag in sources}
    if len(n_nodes) != 1:
        raise InputError("candidate structures must share the node count")
    data = load_csv(args.data, n_nodes.pop())
    rows = []
    for label, kind, dag in sources:
        if kind != "bitnet":
            raise CapabilityError("scoring is defined for bitnets only")
        rep = cic_score(BitnetModel(dag), data)
        row = rep.to_dict()
        row["model"] = label
        row["flagged"] = rep.flagged
        rows.append(row)
    # best first; undefined totals last, ties by label for determinism
    rows.sort(key=lambda r: (r["total"] is None, -(r["total"] or 0.0), r["model"]))
    for i, r in enumerate(rows):
        r["rank"] = i + 1
    advisory = any(r["flagged"] for r in rows)
    return _doc("score", _config(args), rows, "advisory" if advisory else "ok"), (EXIT_ADVISORY if advisory else EXIT_OK)


# -- parser ----------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--partitions", type=int, default=None,
                        help="independent MC streams (default: $BNGEOM_PARTITIONS or 8)")
    common.add_argument("--workers", type=int, default=1, help="threads; does not change results")
    common.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")

    def model_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--name", help="catalog name, e.g. K3, L3, C4, D4, gauss:star3")
        g.add_argument("--file", help="model JSON file")

    parser = argparse.ArgumentParser(prog="bngeom", description="Fisher geometry of Bayesian networks")
    parser.add_argument("--version", action="version", version=f"bngeom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("topology", parents=[common], help="model summary")
    model_args(p)
    p.set_defaults(func=cmd_topology)

    p = sub.add_parser("ricci", parents=[common], help="pointwise Ricci scalar")
    model_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", help="flat vector in layout order, or all=x")
    g.add_argument("--random", type=int, help="number of random interior points")
    p.add_argument("--dense", action="store_true", help="use the general (non-diagonal) path")
    p.set_defaults(func=cmd_ricci)

    for name, func, methods in (
        ("volume", cmd_volume, ("quad", "gauss-jacobi", "tanh-sinh", "mc")),
        ("avg-ricci", cmd_avg_ricci, ("quad", "gauss-jacobi", "tanh-sinh", "mc", "reduced")),
    ):
        p = sub.add_parser(name, parents=[common])
        model_args(p)
        p.add_argument("--method", choices=methods, default="quad")
        p.add_argument("--samples", type=_samples, default=10**6, help="MC budget (accepts 2e6)")
        p.add_argument("--nodes", type=_int_list, default=None, help="Gauss-Jacobi node counts, e.g. 32,48,64")
        if name == "avg-ricci":
            p.add_argument("--exponent", type=float, default=2.5, help="weight exponent of the reduced D4 route")
        p.set_defaults(func=func)

    p = sub.add_parser("table", parents=[common], help="computed-vs-predicted tables")
    p.add_argument("which", choices=("classical", "collapsing", "gaussian"))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("score", parents=[common], help="rank structures by CIC on a CSV dataset")
    p.add_argument("--model", action="append", help="model JSON file (repeatable)")
    p.add_argument("--name", action="append", help="catalog name (repeatable)")
    p.add_argument("--data", required=True, help="CSV of 0/1 rows, one column per node")
    p.set_defaults(func=cmd_score)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.func(args)
    except CapabilityError as exc:
        print(f"bngeom: capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (InputError, ConditioningError, FileNotFoundError) as exc:
        print(f"bngeom: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = render(doc, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
