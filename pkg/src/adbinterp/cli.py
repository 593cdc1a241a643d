"""Command-line front end: ``adb build|query|eval|gen|plotdata|bench``.

Exit codes:

    0   success
    1   unexpected internal error
    2   bad usage (argparse errors, conflicting flags)
    3   unreadable or malformed input (CSV parse errors, missing files)
    4   invalid model data (incomplete grid, duplicate points, bad radii)
    5   query outside the grid
    6   corrupt or incompatible model file
    7   unknown test function
    8   unsupported dimension for plot output
    9   parallel and sequential results differ
    10  ``eval --tolerance`` exceeded

The default thread count for ``--parallel`` comes from ``ADB_THREADS``,
falling back to the CPU count.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import sys
import time
from io import StringIO
from pathlib import Path
from typing import Sequence

import numpy as np

from . import io as adbio
from .errors import (
    ADBError,
    NondeterministicResult,
    ToleranceExceeded,
    UnsupportedDimension,
    UsageError,
)
from .interp import default_threads, interpolate_many
from .learner import (
    ClassifierModel,
    Classified,
    RegressionModel,
    classify_many,
    default_radii,
    fit_classifier,
    fit_regression,
    make_example_set,
    predict_regression_many,
)

EXIT_IO = 3
UNCLASSIFIED_LABEL = "UNCLASSIFIED"


# -- formatting -------------------------------------------------------------

def format_value(v: float, full_precision: bool = False) -> str:
    if full_precision:
        return repr(float(v) + 0.0)
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


def render_results(
    model,
    points: np.ndarray,
    names: Sequence[str],
    threads: int = 1,
    full_precision: bool = False,
    flag: bool = True,
) -> str:
    """CSV text with one output row per query row, in input order."""
    buf = StringIO()
    w = csv.writer(buf, lineterminator="\n")
    coords = [[adbio.format_real(x) for x in row] for row in points.tolist()]
    if isinstance(model, RegressionModel):
        values = predict_regression_many(model, points, threads=threads)
        w.writerow([*names, "value", "flag"] if flag else [*names, "value"])
        for c, v in zip(coords, values.tolist()):
            ok = not np.isnan(v)
            row = [*c, format_value(v, full_precision) if ok else ""]
            w.writerow(row + ["ok" if ok else "out_of_domain"] if flag else row)
    else:
        preds = classify_many(model, points, threads=threads)
        w.writerow([*names, "label", "degree", "flag"] if flag else [*names, "label", "degree"])
        for c, p in zip(coords, preds):
            if isinstance(p, Classified):
                row = [*c, p.label, format_value(p.degree, full_precision)]
                status = "tie" if p.ties else "ok"
            else:
                row = [*c, UNCLASSIFIED_LABEL, ""]
                status = "unclassified"
            w.writerow(row + [status] if flag else row)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _model_names(model) -> tuple[str, ...]:
    return model.grid.names if isinstance(model, RegressionModel) else model.examples.names


def _threads(args) -> int:
    if not getattr(args, "parallel", False):
        return 1
    return args.threads or default_threads()


# -- argument parsing helpers ------------------------------------------------

def parse_radii(text: str, n: int) -> np.ndarray:
    """``"r"``, ``"r1,r2,..."`` or ``"l1:r1,l2:r2,..."`` as an ``(n, 2)`` array."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        parts = parts * n
    if len(parts) != n:
        raise UsageError(f"--radii has {len(parts)} entries for {n} axes")
    out = np.empty((n, 2))
    for j, p in enumerate(parts):
        try:
            lr = [float(x) for x in p.split(":")]
        except ValueError:
            raise UsageError(f"bad radius {p!r}") from None
        if len(lr) == 1:
            lr = lr * 2
        if len(lr) != 2:
            raise UsageError(f"bad radius {p!r}")
        out[j] = lr
    return out


def _expand_axes(specs: Sequence[str] | None, n: int, fallback) -> list[np.ndarray]:
    if not specs:
        return [fallback(j) for j in range(n)]
    axes = [adbio.parse_axis_spec(s) for s in specs]
    if len(axes) == 1:
        axes = axes * n
    if len(axes) != n:
        raise UsageError(f"{len(axes)} axis specs for {n} axes")
    return axes


def _parse_coef(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(c) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"bad coefficient list {text!r}") from None


# -- subcommands ------------------------------------------------------------

def cmd_build(args) -> int:
    ds = adbio.read_csv(args.train, labeled=args.kind == "classifier")
    n = ds.dimension
    if args.kind == "grid":
        if args.radii:
            raise UsageError("--radii only applies to --kind classifier")
        model = fit_regression(ds.points, ds.targets, ds.names)
        sizes = "×".join(str(s) for s in model.grid.shape)
        print(f"{n} {'axis' if n == 1 else 'axes'}, {sizes} nodes")
    else:
        if args.radii:
            radii, source = parse_radii(args.radii, n), "given"
        else:
            r = default_radii(ds.points)
            radii, source = np.stack([r, r], axis=1), "default: half median nearest-neighbour spacing"
        model = fit_classifier(make_example_set(ds.points, ds.targets, radii, ds.names))
        print(f"classifier: {len(ds)} examples, {n} {'axis' if n == 1 else 'axes'}")
        desc = ", ".join(f"{name}={l!r}:{r!r}" for name, (l, r) in zip(ds.names, radii.tolist()))
        print(f"radii ({source}): {desc}")
    adbio.write_model(model, args.output)
    return 0


def cmd_query(args) -> int:
    model = adbio.read_model(args.model)
    points, header = adbio.read_points_csv(args.queries, model.ndim)
    text = render_results(model, points, header, _threads(args), args.full_precision)
    _emit(text, args.out)
    return 0


def _error_report(grid, oracle, samples: np.ndarray) -> tuple[float, float]:
    err = interpolate_many(grid, samples) - oracle(samples)
    return float(np.max(np.abs(err))), float(np.sqrt(np.mean(err * err)))


def cmd_eval(args) -> int:
    oracle = adbio.get_function(args.oracle, _parse_coef(args.coef))
    info = adbio.FUNCTIONS[args.oracle]
    grids = []
    if args.model:
        if args.nodes:
            raise UsageError("give either a model file or --nodes, not both")
        model = adbio.read_model(args.model)
        if not isinstance(model, RegressionModel):
            raise UsageError("eval needs a grid model")
        grids.append(model.grid)
    else:
        if not args.nodes:
            raise UsageError("eval needs a model file or at least one --nodes spec")
        coef = _parse_coef(args.coef)
        n = info.dimension or (len(coef) - 1 if args.oracle == "affine" else args.dim)
        for spec in args.nodes:
            ds = adbio.generate(args.oracle, [spec] * n, coef)
            grids.append(fit_regression(ds.points, ds.targets).grid)

    first = grids[0]
    axes = _expand_axes(args.samples, first.ndim,
                        lambda j: np.linspace(*first.bounds[j], 8 * (first.shape[j] - 1) + 1))
    samples = adbio.cartesian(axes)
    print(f"oracle {args.oracle}, {samples.shape[0]} samples")
    worst = 0.0
    previous = None
    for g in grids:
        max_abs, rms = _error_report(g, oracle, samples)
        worst = max(worst, max_abs)
        line = f"nodes {'×'.join(map(str, g.shape))}: max_abs={max_abs:.6e} rms={rms:.6e}"
        if previous is not None and max_abs > 0:
            line += f" ratio={previous / max_abs:.4f}"
        print(line)
        previous = max_abs
    if args.tolerance is not None and worst > args.tolerance:
        raise ToleranceExceeded(f"max_abs error {worst:.6e} exceeds tolerance {args.tolerance:g}")
    return 0


def cmd_gen(args) -> int:
    coef = _parse_coef(args.coef)
    adbio.get_function(args.function, coef)
    info = adbio.FUNCTIONS[args.function]
    if info.dimension is not None:
        n = info.dimension
    elif args.axis and len(args.axis) > 1:
        n = len(args.axis)
    elif args.function == "affine":
        n = len(coef) - 1
    else:
        n = args.dim
    lo, hi = info.default_domain
    axes = _expand_axes(args.axis, n, lambda j: np.linspace(lo, hi, 21))
    ds = adbio.generate(args.function, axes, coef)
    if args.output in (None, "-"):
        buf = StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([*ds.names, ds.target_name])
        for p, t in ds.rows():
            w.writerow([*(adbio.format_real(x) for x in p), adbio.format_real(t)])
        sys.stdout.write(buf.getvalue())
    else:
        adbio.write_csv(ds, args.output)
    return 0


def _resolve_axis(name: str, names: Sequence[str]) -> int:
    if name in names:
        return list(names).index(name)
    try:
        k = int(name)
    except ValueError:
        raise UsageError(f"unknown axis {name!r}; axes are {', '.join(names)}") from None
    if not 0 <= k < len(names):
        raise UsageError(f"axis index {k} out of range")
    return k


def _model_bounds(model) -> list[tuple[float, float]]:
    if isinstance(model, RegressionModel):
        return model.grid.bounds
    lo = (model.low.min(axis=0)).tolist()
    hi = (model.high.max(axis=0)).tolist()
    return list(zip(lo, hi))


def cmd_plotdata(args) -> int:
    model = adbio.read_model(args.model)
    n = model.ndim
    names = _model_names(model)
    if n > 3 and not args.flat:
        raise UnsupportedDimension(f"{n}-D model; pass --flat for raw rows")
    if args.slice and n != 3:
        raise UsageError("--slice applies to 3-D models")
    bounds = _model_bounds(model)
    axes = _expand_axes(args.grid, n, lambda j: np.linspace(*bounds[j], 81))
    if args.slice:
        blocks = []
        for s in args.slice:
            name, _, value = s.partition("=")
            k = _resolve_axis(name.strip(), names)
            try:
                coord = float(value)
            except ValueError:
                raise UsageError(f"bad slice {s!r}; expected NAME=VALUE") from None
            plane = list(axes)
            plane[k] = np.array([coord])
            blocks.append(adbio.cartesian(plane))
        points = np.concatenate(blocks)
    else:
        points = adbio.cartesian(axes)
    text = render_results(model, points, names, _threads(args), args.full_precision, flag=False)
    _emit(text, args.out)
    return 0


def _time_render(model, points, names, threads) -> tuple[float, str]:
    t0 = time.perf_counter()
    text = render_results(model, points, names, threads)
    return time.perf_counter() - t0, hashlib.sha256(text.encode()).hexdigest()


def cmd_bench(args) -> int:
    threads = [int(t) for t in args.threads.split(",")]
    if args.model:
        if not args.queries:
            raise UsageError("bench needs a query file with the model")
        model = adbio.read_model(args.model)
        points, header = adbio.read_points_csv(args.queries, model.ndim)
        m = points.shape[0]
        print(f"{m} queries, {model.ndim}-D model")
        digests = set()
        for t in threads:
            wall, digest = _time_render(model, points, header, t)
            per = f"{wall / m * 1e6:.3f}us" if m else "n/a"
            print(f"threads={t} wall={wall:.4f}s per_query={per} sha256={digest}")
            digests.add(digest)
        if len(digests) > 1:
            raise NondeterministicResult("result files differ across thread counts")
        print("results identical across thread counts")
    if args.dims:
        rng = np.random.default_rng(args.seed)
        for n in (int(d) for d in args.dims.split(",")):
            axes = [np.linspace(0.0, 1.0, args.nodes)] * n
            grid_model = fit_regression(adbio.cartesian(axes), rng.standard_normal(args.nodes ** n))
            q = rng.uniform(0.0, 1.0, size=(args.queries_per_dim, n))
            t0 = time.perf_counter()
            interpolate_many(grid_model.grid, q)
            wall = time.perf_counter() - t0
            print(f"dim={n} nodes={args.nodes}^{n} queries={len(q)} "
                  f"per_query={wall / max(1, len(q)) * 1e6:.3f}us")
    if not args.model and not args.dims:
        raise UsageError("bench needs MODEL QUERIES and/or --dims")
    return 0


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adb", description="ADB grid interpolation and instance-based learning")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a model file from a training CSV")
    b.add_argument("train")
    b.add_argument("--kind", choices=("grid", "classifier"), default="grid")
    b.add_argument("--radii", help="classifier box radii: r | r1,r2,... | l1:r1,l2:r2,...")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(func=cmd_build)

    def parallel_flags(sp):
        sp.add_argument("--parallel", action="store_true", help="evaluate queries on a thread pool")
        sp.add_argument("--threads", type=int, default=None,
                        help="thread count for --parallel (default: $ADB_THREADS or CPU count)")
        sp.add_argument("--full-precision", action="store_true",
                        help="print shortest round-trip reals instead of 4 decimals")

    q = sub.add_parser("query", help="answer a CSV of queries with a model")
    q.add_argument("model")
    q.add_argument("queries")
    q.add_argument("--out", default=None)
    parallel_flags(q)
    q.set_defaults(func=cmd_query)

    e = sub.add_parser("eval", help="error report of a grid model against a test function")
    e.add_argument("model", nargs="?")
    e.add_argument("--oracle", required=True)
    e.add_argument("--coef", help="affine coefficients c0,c1,...,cn")
    e.add_argument("--samples", action="append", help="sample axis spec (once, or once per axis)")
    e.add_argument("--nodes", action="append",
                   help="build a grid from the oracle with this axis spec; repeat for a refinement sweep")
    e.add_argument("--dim", type=int, default=2, help="dimension for --nodes with dimension-free oracles")
    e.add_argument("--tolerance", type=float, default=None)
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("gen", help="sample a test function on a grid")
    g.add_argument("function", help=", ".join(adbio.FUNCTIONS))
    g.add_argument("--axis", action="append",
                   help="start:stop:step | start:stop/count | v1,v2,... (once, or once per axis)")
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--coef", help="affine coefficients c0,c1,...,cn")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_gen)

    pd = sub.add_parser("plotdata", help="evaluate a model on a dense grid for plotting")
    pd.add_argument("model")
    pd.add_argument("--grid", action="append", help="axis spec (once, or once per axis)")
    pd.add_argument("--slice", action="append", help="3-D only: NAME=VALUE plane, repeatable")
    pd.add_argument("--flat", action="store_true", help="allow models above 3-D (raw rows)")
    pd.add_argument("--out", default=None)
    parallel_flags(pd)
    pd.set_defaults(func=cmd_plotdata)

    bn = sub.add_parser("bench", help="time batch queries and check thread determinism")
    bn.add_argument("model", nargs="?")
    bn.add_argument("queries", nargs="?")
    bn.add_argument("--threads", default="1,2,4", help="comma-separated thread counts")
    bn.add_argument("--dims", help="dimension sweep on random grids, e.g. 2,4,8")
    bn.add_argument("--nodes", type=int, default=5, help="nodes per axis in the dimension sweep")
    bn.add_argument("--queries-per-dim", type=int, default=10000)
    bn.add_argument("--seed", type=int, default=0)
    bn.set_defaults(func=cmd_bench)
    return p


# flags whose values routinely start with "-" (negative coordinates)
_VALUE_FLAGS = {"--axis", "--samples", "--nodes", "--grid", "--slice", "--coef", "--radii"}


def _join_value_flags(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_value_flags(argv))
    try:
        return args.func(args)
    except ADBError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
