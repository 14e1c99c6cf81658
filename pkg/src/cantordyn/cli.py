"""Command line front end.

Exit codes: 0 success, 1 usage error (bad flags, unreadable input, write
failure), 2 for errors the library raises about the mathematics (uncertified
regime, malformed documents, values out of domain).  Every number printed
carries 17 significant digits so output round-trips to the exact double.
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from . import fileio, orbit_engine, quadratic_map, verification
from .conjugacy import build_phi, eval_fstar, eval_phi, eval_phi_inverse
from .errors import CantorDynError
from .model_cantor import MAX_DEPTH, build_model_system
from .target_cantor import (AffineIFS2, FatCantor, MiddleAlpha,
                            build_target_system, middle_thirds)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


@dataclass
class RunConfig:
    """One fully-parsed run request.

    The shared knobs live as fields; per-command extras (grid sizes,
    iteration counts, evaluation points) sit in options keyed by dest name.
    """

    command: str
    c: float = -3.0
    depth: int = 12
    target: str = "middle-thirds"
    mode: str = "strict"
    hull: str = None
    out: str = None
    options: dict = field(default_factory=dict)


def _fmt(x):
    return "%.17g" % float(x)


def _parse_floats(text, n, what):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != n:
        raise _UsageError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"{what}: could not parse {text!r}") from None


def _parse_target(cfg):
    """Turn the --target/--hull text into a spec object.

    Grammar: middle-thirds | middle-alpha:A | affine:R1,R2 | fat:G0,RHO |
    gaps:FILE.  Unknown names are usage errors; out-of-range parameters are
    left to the spec constructors (domain errors, exit 2).
    """
    hull = (0.0, 1.0)
    if cfg.hull is not None:
        a, b = _parse_floats(cfg.hull, 2, "--hull")
        if not a < b:
            raise _UsageError(f"--hull needs a < b, got {cfg.hull!r}")
        hull = (a, b)
    text = cfg.target
    if text == "middle-thirds":
        return middle_thirds(hull)
    name, sep, rest = text.partition(":")
    if sep and rest:
        if name == "middle-alpha":
            return MiddleAlpha(alpha=_parse_floats(rest, 1, text)[0], hull=hull)
        if name == "affine":
            r1, r2 = _parse_floats(rest, 2, text)
            return AffineIFS2(r1=r1, r2=r2, hull=hull)
        if name == "fat":
            g0, rho = _parse_floats(rest, 2, text)
            return FatCantor(gap0=g0, ratio=rho, hull=hull)
        if name == "gaps":
            return fileio.load_gap_tree(rest)
    raise _UsageError(
        f"unknown target {text!r}; expected middle-thirds, middle-alpha:A, "
        f"affine:R1,R2, fat:G0,RHO, or gaps:FILE"
    )


def _make_phi(cfg):
    params = quadratic_map.derive_params(cfg.c)
    model = build_model_system(params, cfg.depth)
    target = build_target_system(_parse_target(cfg), cfg.depth, cfg.mode)
    pl = build_phi(model, target, cfg.depth)
    return pl, params, model, target


def _print_system(system, kind, cfg):
    a, b = system.hull
    print(f"kind {kind}")
    print(f"depth {system.depth}")
    print(f"hull {_fmt(a)} {_fmt(b)}")
    print(f"segments {1 << system.depth}")
    if cfg.out:
        fileio.save_system(system, cfg.out)
        print(f"saved {cfg.out}")


def _cmd_build_model(cfg):
    params = quadratic_map.derive_params(cfg.c)
    system = build_model_system(params, cfg.depth)
    print(f"c {_fmt(params.c)}")
    print(f"lambda {_fmt(params.lambda_)}")
    _print_system(system, "model", cfg)
    return 0


def _cmd_build_target(cfg):
    system = build_target_system(_parse_target(cfg), cfg.depth, cfg.mode)
    print(f"target {cfg.target}")
    print(f"mode {cfg.mode}")
    _print_system(system, "target", cfg)
    return 0


def _cmd_phi(cfg):
    opts = cfg.options
    if (opts.get("eval") is None and opts.get("inverse") is None
            and not opts.get("knots_out")):
        raise _UsageError("phi needs --eval, --inverse, or --knots-out")
    pl, _, _, _ = _make_phi(cfg)
    if opts.get("eval") is not None:
        print(_fmt(eval_phi(pl, opts["eval"])))
    if opts.get("inverse") is not None:
        print(_fmt(eval_phi_inverse(pl, opts["inverse"])))
    if opts.get("knots_out"):
        with open(opts["knots_out"], "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(["x", "y"])
            for x, y in zip(pl.xs, pl.ys):
                w.writerow([repr(float(x)), repr(float(y))])
    return 0


def _cmd_fstar(cfg):
    pl, params, _, _ = _make_phi(cfg)
    print(_fmt(eval_fstar(pl, params, cfg.options["eval"])))
    return 0


def _cmd_iterate(cfg):
    opts = cfg.options
    x0, y0 = opts.get("x0"), opts.get("y0")
    if (x0 is None) == (y0 is None):
        raise _UsageError("give exactly one of --x0 (model orbit) or --y0 "
                          "(target orbit)")
    if x0 is not None:
        res = orbit_engine.iterate_model(cfg.c, x0, opts["max_iter"])
    else:
        pl, params, _, _ = _make_phi(cfg)
        res = orbit_engine.iterate_target(pl, params, y0, opts["max_iter"])
    verdict = "escaped_at" if res.escaped else "bounded"
    print(f"{verdict} {res.iteration}")
    return 0


def _cmd_classify(cfg):
    opts = cfg.options

    def classify(x0, max_iter):
        return orbit_engine.iterate_model(cfg.c, x0, max_iter)

    rows = orbit_engine.classify_grid(classify, opts["lo"], opts["hi"],
                                      opts["n_points"], opts["max_iter"])
    if cfg.out:
        with open(cfg.out, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(["x", "escaped", "iteration"])
            for x, res in rows:
                w.writerow([repr(x), int(res.escaped), res.iteration])
    else:
        for x, res in rows:
            verdict = "escaped_at" if res.escaped else "bounded"
            print(f"{_fmt(x)} {verdict} {res.iteration}")
    return 0


def _cmd_cobweb(cfg):
    opts = cfg.options
    c = cfg.c

    def f(x):
        return x * x + c

    trace = orbit_engine.cobweb_trace(f, opts["x0"], opts["steps"])
    fileio.export_cobweb(trace, cfg.out, fmt=opts["format"], curve=f)
    return 0


def _cmd_mandelbrot(cfg):
    opts = cfg.options
    region = (opts["re_min"], opts["re_max"], opts["im_min"], opts["im_max"])
    fileio.export_escape_image(region, opts["width"], opts["height"],
                               opts["max_iter"], cfg.out)
    return 0


def _cmd_verify(cfg):
    results = verification.run_verification(cfg.c, cfg.depth,
                                            _parse_target(cfg))
    ok = True
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.detail}")
        ok = ok and r.ok
    return 0 if ok else 2


_COMMANDS = {
    "build-model": _cmd_build_model,
    "build-target": _cmd_build_target,
    "phi": _cmd_phi,
    "fstar": _cmd_fstar,
    "iterate": _cmd_iterate,
    "classify": _cmd_classify,
    "cobweb": _cmd_cobweb,
    "mandelbrot": _cmd_mandelbrot,
    "verify": _cmd_verify,
}


def _build_parser():
    parser = _Parser(
        prog="cantordyn",
        description="Cantor sets of the real quadratic family, their "
                    "refinements, the conjugating map, and orbit tools.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND",
                                required=True)
    subs = {}

    def add(name, help_):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--config", metavar="FILE",
                       help="read key=value defaults; explicit flags win")
        subs[name] = p
        return p

    def add_c(p):
        p.add_argument("--c", type=float, default=-3.0, metavar="C",
                       help="map parameter (default -3)")

    def add_depth(p, default=12):
        p.add_argument("--depth", type=int, default=default, metavar="N",
                       help=f"refinement depth (default {default})")

    def add_target(p):
        p.add_argument("--target", default="middle-thirds", metavar="SPEC",
                       help="middle-thirds | middle-alpha:A | affine:R1,R2 | "
                            "fat:G0,RHO | gaps:FILE")
        p.add_argument("--hull", metavar="A,B",
                       help="target hull (default 0,1; not with gaps:)")
        p.add_argument("--mode", choices=("strict", "natural"),
                       default="strict", help="gap selection per refinement")

    p = add("build-model", "build the nested segments of bounded orbits of "
                           "x^2 + c and optionally save them")
    add_c(p)
    add_depth(p)
    p.add_argument("--out", metavar="FILE", help="write a cantor-system/1 file")

    p = add("build-target", "refine a target Cantor set and optionally save "
                            "the system")
    add_target(p)
    add_depth(p)
    p.add_argument("--out", metavar="FILE", help="write a cantor-system/1 file")

    p = add("phi", "evaluate the piecewise-linear conjugacy or dump its knots")
    add_c(p)
    add_depth(p)
    add_target(p)
    p.add_argument("--eval", type=float, metavar="X", help="print phi(X)")
    p.add_argument("--inverse", type=float, metavar="Y",
                   help="print phi^-1(Y)")
    p.add_argument("--knots-out", metavar="FILE", help="write knots as CSV")

    p = add("fstar", "evaluate the conjugated map F* = phi o F_c o phi^-1")
    add_c(p)
    add_depth(p)
    add_target(p)
    p.add_argument("--eval", type=float, required=True, metavar="Y",
                   help="print F*(Y)")

    p = add("iterate", "iterate one starting point and report "
                       "escaped_at/bounded")
    add_c(p)
    add_depth(p)
    add_target(p)
    p.add_argument("--x0", type=float, metavar="X", help="model-space start")
    p.add_argument("--y0", type=float, metavar="Y", help="target-space start")
    p.add_argument("--max-iter", type=int, default=100, metavar="N")

    p = add("classify", "classify a grid of model-space starting points")
    add_c(p)
    p.add_argument("--lo", type=float, required=True, metavar="A")
    p.add_argument("--hi", type=float, required=True, metavar="B")
    p.add_argument("--n-points", type=int, default=101, metavar="N")
    p.add_argument("--max-iter", type=int, default=100, metavar="N")
    p.add_argument("--out", metavar="FILE", help="write CSV instead of stdout")

    p = add("cobweb", "trace graphical analysis of x^2 + c and export it")
    add_c(p)
    p.add_argument("--x0", type=float, required=True, metavar="X")
    p.add_argument("--steps", type=int, default=10, metavar="N")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--out", required=True, metavar="FILE")

    p = add("mandelbrot", "render an escape-time image of the parameter plane")
    p.add_argument("--re-min", type=float, default=-2.5, metavar="X")
    p.add_argument("--re-max", type=float, default=1.0, metavar="X")
    p.add_argument("--im-min", type=float, default=-1.75, metavar="Y")
    p.add_argument("--im-max", type=float, default=1.75, metavar="Y")
    p.add_argument("--width", type=int, default=200, metavar="W")
    p.add_argument("--height", type=int, default=200, metavar="H")
    p.add_argument("--max-iter", type=int, default=256, metavar="N")
    p.add_argument("--out", required=True, metavar="FILE")

    p = add("verify", "run the self-check suites and print PASS/FAIL lines")
    add_c(p)
    add_depth(p, default=10)
    add_target(p)

    return parser, subs


def _apply_config(sub, path):
    """Install key=value lines from `path` as defaults on the subparser."""
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()
    actions = {}
    for action in sub._actions:
        if not action.option_strings or action.dest in ("help", "config"):
            continue
        actions[action.dest] = action
        actions[action.dest.replace("_", "-")] = action
    overrides = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise _UsageError(f"{path}: line {lineno}: expected key=value")
        action = actions.get(key)
        if action is None:
            raise _UsageError(f"{path}: line {lineno}: unknown option {key!r}")
        conv = action.type if action.type is not None else str
        try:
            converted = conv(value)
        except (TypeError, ValueError):
            raise _UsageError(
                f"{path}: line {lineno}: bad value {value!r} for {key}"
            ) from None
        if action.choices is not None and converted not in action.choices:
            raise _UsageError(
                f"{path}: line {lineno}: {key} must be one of "
                f"{', '.join(map(str, action.choices))}"
            )
        overrides[action.dest] = converted
        action.required = False
    sub.set_defaults(**overrides)


def _config_from_args(args):
    extras = vars(args).copy()
    extras.pop("config", None)
    return RunConfig(
        command=extras.pop("command"),
        c=float(extras.pop("c", -3.0)),
        depth=int(extras.pop("depth", 12)),
        target=extras.pop("target", "middle-thirds"),
        mode=extras.pop("mode", "strict"),
        hull=extras.pop("hull", None),
        out=extras.pop("out", None),
        options=extras,
    )


def _validate_config(cfg):
    if not 0 <= cfg.depth <= MAX_DEPTH:
        raise _UsageError(f"--depth must be in 0..{MAX_DEPTH}, got {cfg.depth}")
    opts = cfg.options
    for key, floor in (("width", 1), ("height", 1), ("max_iter", 1),
                       ("steps", 1), ("n_points", 2)):
        if opts.get(key) is not None and opts[key] < floor:
            flag = "--" + key.replace("_", "-")
            raise _UsageError(f"{flag} must be >= {floor}, got {opts[key]}")
    if cfg.hull is not None and cfg.target.startswith("gaps:"):
        raise _UsageError("--hull cannot be combined with gaps: "
                          "(the file stores its hull)")


def run(config):
    """Dispatch a RunConfig; returns the process exit status."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        raise _UsageError(f"unknown command {config.command!r}")
    _validate_config(config)
    return handler(config)


def _peek_config(argv, subs):
    """(command, config path) found by scanning argv ahead of parsing.

    Config defaults must be installed before the real parse, or a required
    flag supplied only through the file would already have failed it.
    """
    command = next((a for a in argv if not a.startswith("-")), None)
    path = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    return (command, path) if command in subs and path else (None, None)


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser, subs = _build_parser()
    try:
        command, config_path = _peek_config(argv, subs)
        if config_path is not None:
            _apply_config(subs[command], config_path)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        return run(_config_from_args(args))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CantorDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
