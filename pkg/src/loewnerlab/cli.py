"""Command line: ``loewnerlab {simulate,verify,figures,dyck}``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 numerical failure (drivers that would collide).
"""
import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, drivers, dyck, figures, scenarios, verify
from .io import cdf_rows, csv_text, driver_rows, pole_rows
from .kernels import BACKEND

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DRIVER_SAMPLES = 200
ENUMERATE_CAP = 10

log = logging.getLogger("loewnerlab")


class ConfigError(Exception):
    pass


def _fail(code, msg):
    print(f"loewnerlab: {msg}", file=sys.stderr)
    return code


def _load_config(args):
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"scenario file {path} not found")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return scenarios.from_dict(data.get("config", data))
    return scenarios.builtin(args.builtin, args.n)


def _apply_overrides(cfg, args):
    changes = {"T": args.t, "dt": args.dt, "seed": args.seed}
    if isinstance(cfg, scenarios.ScenarioConfig):
        changes["kappa"] = args.kappa
        if args.n is not None and args.config:
            changes["n"] = args.n
    elif args.kappa:
        raise ConfigError("quadratic-differential scenarios are deterministic; drop --kappa")
    return cfg.with_(**changes)


def _write_manifest(out, command, cfg, extra=None):
    manifest = {
        "command": command,
        "scenario": cfg.name if cfg is not None else None,
        "seed": getattr(cfg, "seed", None),
        "output_dir": str(out),
        "tool_version": __version__,
        "backend": BACKEND,
        "started": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "config": cfg.to_dict() if cfg is not None else None,
    }
    manifest.update(extra or {})
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _emit(out, name, text):
    (out / name).write_text(text)


def _parse_times(text, horizon):
    if not text:
        return [horizon]
    return [float(v) for v in text.split(",")]


def cmd_simulate(args):
    try:
        cfg = _apply_overrides(_load_config(args), args)
        cfg.resolve()
    except (ConfigError, ValueError, TypeError) as exc:
        return _fail(EXIT_USAGE, str(exc))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(out, "simulate", cfg, {"format": args.format, "measure_times": args.times})
    try:
        path = drivers.simulate(cfg)
    except drivers.OrderViolation as exc:
        return _fail(EXIT_NUMERIC, f"integration failed: {exc}")
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    stride = args.stride or max(1, (path.times.size - 1) // DRIVER_SAMPLES)
    try:
        times = _parse_times(args.times, path.horizon)
        idx = [path.index_of(t) for t in times]
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    if args.format == "json":
        keep = sorted(set(range(0, path.times.size, stride)) | {path.times.size - 1})
        doc = {"times": path.times[keep].tolist(), "V": path.V[keep].tolist(),
               "lambdas": path.lambdas.tolist(), "substeps": int(path.substeps.sum())}
        _emit(out, "drivers.json", json.dumps(doc) + "\n")
    else:
        _emit(out, "drivers.csv", csv_text(("time", "k", "value"), driver_rows(path, stride)))
        if path.S is not None:
            _emit(out, "poles.csv", csv_text(("time", "j", "re", "im"), pole_rows(path, stride)))
        rows = []
        for t, i in zip(times, idx):
            mu = path.measure(i)
            rows += [(path.times[i], x, w, F) for (x, w), (_, F) in zip(zip(mu.positions, mu.weights), cdf_rows(mu))]
        _emit(out, "measures.csv", csv_text(("time", "position", "weight", "cdf"), rows))
    print(f"{cfg.name}: N={path.n}, T={path.horizon:g}, {int(path.substeps.sum())} substeps -> {out}")
    return EXIT_OK


def cmd_verify(args):
    try:
        ids = verify.select(args.filter)
    except ValueError as exc:
        return _fail(EXIT_USAGE, str(exc))
    results = verify.run(ids)
    print(verify.format_table(results))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for res in results.values():
            for name, text in res.artifacts.items():
                _emit(out, name, text)
    return EXIT_OK if all(r.passed for r in results.values()) else EXIT_VERIFY


def cmd_figures(args):
    if args.name not in ("fig2", "fig3", "fig7", "fig8"):
        return _fail(EXIT_USAGE, f"unknown figure {args.name!r}")
    cfg = scenarios.builtin(args.name)
    if args.seed is not None and isinstance(cfg, scenarios.ScenarioConfig):
        cfg = cfg.with_(seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if isinstance(cfg, scenarios.ScenarioConfig):
        try:
            path = drivers.simulate(cfg)
        except drivers.OrderViolation as exc:
            return _fail(EXIT_NUMERIC, f"integration failed: {exc}")
        canvas = figures.driver_bundle(path, cfg.highlight_index(), title=args.name)
        _write_manifest(out, "figures", cfg, {"view_transform": canvas.transform})
        stride = max(1, (path.times.size - 1) // DRIVER_SAMPLES)
        _emit(out, f"{args.name}.csv", csv_text(("time", "k", "value"), driver_rows(path, stride)))
    else:
        grid = scenarios.field_grid()
        canvas, theta = figures.direction_field(cfg, grid, title=args.name)
        _write_manifest(out, "figures", cfg, {"view_transform": canvas.transform})
        rows = zip(grid.real.ravel(), grid.imag.ravel(), theta.ravel())
        _emit(out, f"{args.name}.csv", csv_text(("re_z", "im_z", "theta"), rows))
    _emit(out, f"{args.name}.svg", canvas.render())
    print(f"{args.name} -> {out}")
    return EXIT_OK


def cmd_dyck(args):
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    if args.enumerate is not None:
        if not 1 <= args.enumerate <= ENUMERATE_CAP:
            return _fail(EXIT_USAGE, f"enumeration is limited to 1 <= N <= {ENUMERATE_CAP}")
        paths = dyck.enumerate_paths(args.enumerate)
        for p in paths:
            print(" ".join("+1" if s > 0 else "-1" for s in p.slopes))
        print(f"{len(paths)} paths (catalan({args.enumerate}) = {dyck.catalan(args.enumerate)})")
        return EXIT_OK
    if args.sample is None:
        return _fail(EXIT_USAGE, "give --enumerate N or --sample M")
    if args.n < 1 or args.sample < 1 or not 0.0 < args.gamma <= 1.0:
        return _fail(EXIT_USAGE, "need M >= 1, N >= 1 and 0 < gamma <= 1")
    seed = 0 if args.seed is None else args.seed
    batch = dyck.sample_batch(args.n, args.sample, seed)
    p = dyck.uniform_breakpoints(args.n)
    heights = np.concatenate((np.zeros((batch.shape[0], 1)), np.cumsum(batch, axis=1)), axis=1)
    values = dyck.normalized_values(heights, p, args.gamma)
    maxima = values.max(axis=1)
    if out:
        rows = ((i, k, p[k], values[i, k]) for i in range(min(args.sample, 10)) for k in range(p.size))
        _emit(out, "paths.csv", csv_text(("sample", "k", "p", "e"), rows))
        _emit(out, "maxima.csv", csv_text(("sample", "max"), enumerate(maxima)))
    print(f"samples={args.sample} n={args.n} gamma={args.gamma:g} seed={seed}")
    print(f"mean max={maxima.mean():.6f} sd={maxima.std(ddof=1) if maxima.size > 1 else 0.0:.6f}")
    if args.gamma == 0.5:
        print(f"excursion target sqrt(pi/2)={dyck.excursion_mean_max():.6f}")
    if args.sample == 1 and args.n <= 20:
        print(" ".join("+1" if s > 0 else "-1" for s in batch[0]))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="loewnerlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a driver system and write CSV tables")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", choices=scenarios.BUILTINS)
    src.add_argument("--config", help="scenario JSON file (or a manifest.json)")
    p.add_argument("--n", type=int)
    p.add_argument("--kappa", type=float)
    p.add_argument("--t", type=float, help="horizon T")
    p.add_argument("--dt", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--times", help="comma-separated grid times for measures.csv (default: T)")
    p.add_argument("--stride", type=int, help="write every k-th time step (default: about 200 samples)")
    p.add_argument("--out", default="out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--filter", help="suite names or criterion numbers, comma separated")
    p.add_argument("--out", help="directory for the checks' CSV artifacts")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", help="regenerate a figure as SVG plus CSV")
    p.add_argument("name")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="figures")
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("dyck", help="enumerate or sample Dyck paths")
    p.add_argument("--enumerate", type=int, metavar="N")
    p.add_argument("--sample", type=int, metavar="M")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dyck)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
