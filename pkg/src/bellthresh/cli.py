"""Command-line frontend for violation maxima, thresholds and scans.

Every flag can also be given in a config file of `key = value` lines
(keys use underscores, e.g. `fix_ab = 1,1`); flags on the command line
override the file.  The seed falls back to the BELLTHRESH_SEED
environment variable, then to 0.  Exit codes: 0 success, 2 invalid
configuration or input, 3 optimization failure / no violation found.

Text output rounds to 6 significant digits; --json prints the same
numbers in full precision.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import bell, optim, scan
from .scenarios import biphoton_scenario, qubit_scenario, tritter_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_OPTIM = 3

_INT_KEYS = {"multistarts", "seed", "threads", "resolution"}
_FLOAT_KEYS = {"eta", "noise", "tol", "fix_a"}


class ConfigError(ValueError):
    pass


def _g6(v) -> str:
    return format(float(v), ".6g")


def _parse_pair(text, name):
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{name} expects two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {text!r}") from exc


def load_config_file(path) -> dict:
    """Parse a flat `key = value` file with # comments into a dict."""
    cfg = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _INT_KEYS:
            value = int(value)
        elif key in _FLOAT_KEYS:
            value = float(value)
        cfg[key] = value
    return cfg


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="FILE", help="key = value config file; flags override it")
    p.add_argument("--scenario", choices=("tritter", "biphoton", "qubit"))
    p.add_argument("--outcomes", choices=("P1P2", "P1P3", "P2P3"), default="P1P2",
                   help="biphoton outcome pair used as the two binary outcomes")
    p.add_argument("--functional", default=None,
                   help="ch-qutrit | ch-qubit | file:PATH (default matches the scenario)")
    p.add_argument("--fix-ab", metavar="A,B", default=None,
                   help="pin the qutrit Schmidt parameters instead of optimizing them")
    p.add_argument("--fix-a", metavar="A", type=float, default=None,
                   help="pin the qubit Schmidt parameter instead of optimizing it")
    p.add_argument("--eta", type=float, default=1.0, help="detection efficiency in [0, 1]")
    p.add_argument("--noise", type=float, default=0.0,
                   help="white-noise fraction F of the maximally mixed state")
    p.add_argument("--multistarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $BELLTHRESH_SEED, else 0)")
    p.add_argument("--threads", type=int, default=1, help="worker cap for grid scans")
    p.add_argument("--json", action="store_true", help="print results as full-precision JSON")
    p.add_argument("--out", metavar="PATH", default=None, help="output file (scan grids)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="out_format",
                   help="scan grid file format")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bellthresh",
        description="Maximal Clauser-Horne violations, critical detection "
                    "efficiencies and noise thresholds for entangled qubit "
                    "and qutrit states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("max-violation", help="maximize the functional at fixed eta and noise")
    _common_flags(p)

    p = sub.add_parser("critical-efficiency",
                       help="bisect for the smallest eta with a positive violation")
    _common_flags(p)
    p.add_argument("--tol", type=float, default=1e-4, help="bisection width on eta")
    p.add_argument("--closed-form", action="store_true",
                   help="also report the settings-frozen estimate -S/J")

    p = sub.add_parser("noise-threshold",
                       help="largest noise fraction F that still violates")
    _common_flags(p)
    p.add_argument("--method", choices=("closed-form", "bisection"), default="closed-form")
    p.add_argument("--tol", type=float, default=1e-4, help="bisection width on F")

    p = sub.add_parser("scan", help="grid sweep of the maximal violation")
    _common_flags(p)
    p.add_argument("--a-range", metavar="LO,HI", default=None)
    p.add_argument("--b-range", metavar="LO,HI", default=None)
    p.add_argument("--eta-range", metavar="LO,HI", default=None)
    p.add_argument("--resolution", type=int, default=41)

    p = sub.add_parser("lhv-bound",
                       help="exact local-hidden-variable maximum of the functional")
    _common_flags(p)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv):
    """Fold a --config file into parser defaults before the real parse."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return
    cfg = load_config_file(known.config)
    valid = set()
    for action in parser._subparsers._group_actions[0].choices.values():
        valid.update(a.dest for a in action._actions)
        action.set_defaults(**{k: v for k, v in cfg.items() if k in valid})
    unknown = set(cfg) - valid
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")


def _resolve(args):
    """Turn parsed flags into (scenario, functional, fix_params, options)."""
    if args.scenario is None:
        raise ConfigError("--scenario is required (flag or config file)")
    if args.scenario == "tritter":
        sc = tritter_scenario()
    elif args.scenario == "biphoton":
        sc = biphoton_scenario(args.outcomes)
    else:
        sc = qubit_scenario()

    fname = args.functional
    if fname is None:
        fname = "ch-qubit" if sc.local_dim == 2 else "ch-qutrit"
    if str(fname).startswith("file:"):
        f = bell.load_functional(str(fname)[5:])
    else:
        f = bell.functional_preset(fname)
    bell._check_compatible(f, sc)

    if args.fix_ab is not None and args.fix_a is not None:
        raise ConfigError("--fix-ab and --fix-a are mutually exclusive")
    fix = None
    if args.fix_ab is not None:
        if sc.n_entanglement_params != 2:
            raise ConfigError(f"--fix-ab does not apply to the {sc.kind} scenario")
        fix = _parse_pair(args.fix_ab, "--fix-ab")
    elif args.fix_a is not None:
        if sc.n_entanglement_params != 1:
            raise ConfigError(f"--fix-a does not apply to the {sc.kind} scenario")
        fix = (float(args.fix_a),)

    if not 0.0 <= args.eta <= 1.0:
        raise ConfigError(f"--eta {args.eta} outside [0, 1]")
    if not 0.0 <= args.noise <= 1.0:
        raise ConfigError(f"--noise {args.noise} outside [0, 1]")
    if args.noise > 0 and sc.local_dim < 3:
        raise ConfigError("--noise requires a qutrit scenario")

    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("BELLTHRESH_SEED", "0"))
    opts = optim.OptimOptions(multistarts=args.multistarts, rng_seed=seed)
    return sc, f, fix, opts


def _emit(doc: dict, as_json: bool, text_lines):
    if as_json:
        print(json.dumps(doc, indent=2))
    else:
        for line in text_lines:
            print(line)


def _result_doc(res: optim.ViolationResult) -> dict:
    return {
        "ch": res.total,
        "joint": res.value.joint,
        "single": res.value.single,
        "ratio": res.value.ratio,
        "eta": res.eta,
        "noise": res.noise,
        "settings": [float(v) for v in res.settings],
        "entanglement": [float(v) for v in res.entanglement],
        "entanglement_free": res.entanglement_free,
        "starts_converged": res.starts_converged,
        "best_duplicates": res.best_duplicates,
        "best_start_index": res.best_start_index,
    }


def _result_lines(res: optim.ViolationResult):
    ent = ", ".join(_g6(v) for v in res.entanglement)
    tag = "optimized" if res.entanglement_free else "fixed"
    return [
        f"CH = {_g6(res.total)}   (J = {_g6(res.value.joint)}, S = {_g6(res.value.single)})",
        f"singles/joint ratio |S|/J = {_g6(res.value.ratio)}",
        f"eta = {_g6(res.eta)}   noise F = {_g6(res.noise)}",
        f"entanglement params ({tag}): {ent}",
        "settings: " + ", ".join(_g6(v) for v in res.settings),
        f"multistarts: {res.starts_converged} converged, "
        f"{res.best_duplicates} at the best value (first index {res.best_start_index})",
    ]


def cmd_max_violation(args) -> int:
    sc, f, fix, opts = _resolve(args)
    res = optim.maximize(sc, f, eta=args.eta, noise=args.noise, fix_params=fix, opts=opts)
    _emit(_result_doc(res), args.json, _result_lines(res))
    return EXIT_OK


def cmd_critical_efficiency(args) -> int:
    sc, f, fix, opts = _resolve(args)
    eta = optim.critical_efficiency(sc, f, fix_params=fix, opts=opts, tol=args.tol)
    if eta is None:
        print("no violation at eta = 1; no critical efficiency", file=sys.stderr)
        return EXIT_OPTIM
    doc = {"eta_critical": eta, "tol": args.tol}
    lines = [f"critical efficiency eta* = {_g6(eta)}  (bisection tol {_g6(args.tol)})"]
    if args.closed_form:
        base = optim.maximize(sc, f, fix_params=fix, opts=opts)
        cf = optim.closed_form_efficiency(base.value)
        doc["eta_closed_form"] = cf
        lines.append(f"settings-frozen estimate -S/J = {_g6(cf) if cf is not None else 'n/a'}")
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_noise_threshold(args) -> int:
    sc, f, fix, opts = _resolve(args)
    fth = optim.noise_threshold(sc, f, fix_params=fix, opts=opts,
                                method=args.method, tol=args.tol)
    if fth is None:
        print("no violation at F = 0; no noise threshold", file=sys.stderr)
        return EXIT_OPTIM
    _emit({"noise_threshold": fth, "method": args.method}, args.json,
          [f"noise threshold F_th = {_g6(fth)}  ({args.method})"])
    return EXIT_OK


_DEFAULT_AB_RANGES = {
    ("tritter", None): (0.0, 3.0),
    ("biphoton", "P1P2"): (0.0, 3.0),
    ("biphoton", "P1P3"): (-3.0, 0.0),
    ("biphoton", "P2P3"): (-3.0, 0.0),
}


def cmd_scan(args) -> int:
    sc, f, _, opts = _resolve(args)
    res = args.resolution
    if args.fix_ab is not None or args.fix_a is not None:
        raise ConfigError("scan sweeps the entanglement parameters; do not pin them")
    if sc.kind == "qubit":
        erng = _parse_pair(args.eta_range, "--eta-range") if args.eta_range else (0.5, 1.0)
        arng = _parse_pair(args.a_range, "--a-range") if args.a_range else (0.0, 1.5)
        grid = scan.scan_eta_a(sc, f, erng, arng, resolution=res, opts=opts,
                               threads=args.threads)
    else:
        default = _DEFAULT_AB_RANGES.get((sc.kind, sc.outcome_pair),
                                         _DEFAULT_AB_RANGES[("tritter", None)])
        arng = _parse_pair(args.a_range, "--a-range") if args.a_range else default
        brng = _parse_pair(args.b_range, "--b-range") if args.b_range else default
        grid = scan.scan_ab(sc, f, args.eta, arng, brng, resolution=res, opts=opts,
                            threads=args.threads)
    out = args.out
    if out is None:
        out = f"scan.{args.out_format}"
    scan.export_grid(grid, args.out_format, out)
    print(f"wrote {grid.values.shape[1]}x{grid.values.shape[0]} grid to {out}")
    return EXIT_OK


def cmd_lhv_bound(args) -> int:
    _, f, _, _ = _resolve(args)
    bound = bell.lhv_max(f)
    _emit({"lhv_bound": bound, "functional": f.name}, args.json,
          [f"local deterministic maximum of {f.name}: {_g6(bound)}"])
    return EXIT_OK


_COMMANDS = {
    "max-violation": cmd_max_violation,
    "critical-efficiency": cmd_critical_efficiency,
    "noise-threshold": cmd_noise_threshold,
    "scan": cmd_scan,
    "lhv-bound": cmd_lhv_bound,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except optim.OptimizationError as exc:
        print(f"optimization failed: {exc}", file=sys.stderr)
        return EXIT_OPTIM


if __name__ == "__main__":
    sys.exit(main())
