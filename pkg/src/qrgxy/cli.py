"""Command-line front end.

Exit codes: 0 success, 1 failed check or runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, flow, validation
from .errors import QRGError

SWEEP_HEADER = "model,observable,step,gamma,value,derivative"
SCALING_HEADER = "n,N,gamma_m,max_abs_derivative"
SIZE_CONVENTION = "N(n) = 3**(n+1) for 1d, 5**(n+1) for 2d"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _steps(text: str) -> list[int]:
    try:
        steps = [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad step list {text!r}") from None
    if not steps or any(s < 0 for s in steps):
        raise argparse.ArgumentTypeError("steps must be a nonempty list of integers >= 0")
    return steps


def read_config(path: str) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment, keys may use ``-`` or ``_``."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


# (dest, converter, default) for options that may also come from --config
OPTIONS = {
    "sweep": [
        ("model", str, "1d"),
        ("observable", str, "trace-distance"),
        ("steps", _steps, [0, 1, 2]),
        ("gamma_min", float, -1.5),
        ("gamma_max", float, 1.5),
        ("points", int, 301),
        ("format", str, "csv"),
        ("output", str, None),
        ("out_dir", str, None),
    ],
    "scaling": [
        ("model", str, "1d"),
        ("observable", str, "trace-distance"),
        ("max_steps", int, None),
        ("format", str, "csv"),
        ("output", str, None),
        ("out_dir", str, None),
    ],
    "fixed-points": [
        ("model", str, "1d"),
        ("gamma_min", float, -1.5),
        ("gamma_max", float, 1.5),
    ],
    "validate": [],
}

CHOICES = {
    "model": sorted(flow.MODELS),
    "observable": [*flow.OBSERVABLES, "both"],
    "format": ["csv", "json"],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrgxy", description="QRG analysis of the anisotropic XY model")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, observable=True, output=True):
        p.add_argument("--config", help="flat key=value file; flags take precedence")
        p.add_argument("--model", choices=CHOICES["model"], default=None)
        if observable:
            p.add_argument("--observable", choices=CHOICES["observable"], default=None)
        if output:
            p.add_argument("--format", choices=CHOICES["format"], default=None)
            p.add_argument("-o", "--output", default=None, help="output file")
            p.add_argument("--out-dir", default=None, help="default directory (else $QRG_OUT_DIR, else .)")

    p = sub.add_parser("sweep", help="observable and derivative on a gamma grid per QRG step")
    common(p)
    p.add_argument("--steps", type=_steps, default=None, help="comma-separated, e.g. 0,1,2,6")
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--points", type=int, default=None)

    p = sub.add_parser("scaling", help="pseudo-critical points and log-log exponent fits")
    common(p)
    p.add_argument("--max-steps", type=int, default=None, help="default 7 (1d) or 5 (2d)")

    p = sub.add_parser("fixed-points", help="fixed points of the gamma recursion")
    common(p, observable=False, output=False)
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--json", action="store_true", help="print a JSON report")

    p = sub.add_parser("validate", help="run the built-in consistency checks")
    p.add_argument("--json", action="store_true", help="print a JSON summary")
    return parser


def resolve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset options from ``--config`` and then from built-in defaults."""
    config = {}
    if getattr(args, "config", None):
        try:
            config = read_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config: {exc}")
    known = {dest for dest, _, _ in OPTIONS[args.command]}
    unknown = set(config) - known - {"config"}
    if unknown:
        parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
    for dest, convert, default in OPTIONS[args.command]:
        if getattr(args, dest, None) is not None:
            continue
        if dest in config:
            try:
                value = convert(config[dest])
            except (ValueError, argparse.ArgumentTypeError) as exc:
                parser.error(f"config key {dest}: {exc}")
            if dest in CHOICES and value not in CHOICES[dest]:
                parser.error(f"config key {dest}: {value!r} not in {CHOICES[dest]}")
        else:
            value = default
        setattr(args, dest, value)
    return args


def output_path(args, default_name: str) -> Path:
    if args.output:
        return Path(args.output)
    directory = args.out_dir or os.environ.get("QRG_OUT_DIR") or "."
    return Path(directory) / default_name


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _observables(name: str) -> list[str]:
    return list(flow.OBSERVABLES) if name == "both" else [name]


def meta(**extra) -> dict:
    return {"tool": "qrgxy", "version": __version__, "size_convention": SIZE_CONVENTION, **extra}


def sweep_csv(records) -> str:
    lines = [SWEEP_HEADER]
    for r in records:
        lines.append(",".join([r.model, r.observable, str(r.step), fmt(r.gamma), fmt(r.value), fmt(r.derivative)]))
    return "\n".join(lines) + "\n"


def sweep_json(records, config: dict) -> str:
    rows = [
        {
            "model": r.model,
            "observable": r.observable,
            "step": r.step,
            "gamma": r.gamma,
            "value": r.value,
            "derivative": r.derivative,
            "one_sided": r.one_sided,
            "analytic": r.analytic,
        }
        for r in records
    ]
    return json.dumps({"meta": meta(config=config), "records": rows}, indent=1) + "\n"


def cmd_sweep(args, parser) -> int:
    if not args.gamma_min < args.gamma_max:
        parser.error("--gamma-min must be smaller than --gamma-max")
    if args.points < 2:
        parser.error("--points must be at least 2")
    gammas = np.linspace(args.gamma_min, args.gamma_max, args.points)
    records = flow.sweep(args.model, _observables(args.observable), args.steps, gammas)
    config = {
        "model": args.model,
        "observable": args.observable,
        "steps": sorted(set(args.steps)),
        "gamma_min": args.gamma_min,
        "gamma_max": args.gamma_max,
        "points": args.points,
    }
    text = sweep_csv(records) if args.format == "csv" else sweep_json(records, config)
    path = output_path(args, f"sweep_{args.model}_{args.observable}.{args.format}")
    _write(path, text)
    print(f"wrote {len(records)} rows to {path}")
    return 0


def _fit_dict(fit) -> dict:
    return {"theta": fit.theta, "c": fit.c, "r2": fit.r_squared}


def cmd_scaling(args, parser) -> int:
    max_steps = args.max_steps if args.max_steps is not None else (7 if args.model == "1d" else 5)
    if max_steps < 3:
        parser.error("--max-steps must be at least 3")
    if args.observable == "both":
        parser.error("scaling needs a single observable")
    study = flow.scaling_study(args.model, args.observable, max_steps)
    fits = [("max_abs_derivative", study.peak_fit)]
    if study.drift_fit is not None:
        fits.append(("gamma_m", study.drift_fit))

    if args.format == "csv":
        lines = [SCALING_HEADER]
        for r in study.rows:
            lines.append(",".join([str(r.n), fmt(r.size), fmt(r.gamma_m), fmt(r.max_abs_derivative)]))
        for target, fit in fits:
            lines.append(f"# theta={fmt(fit.theta)} c={fmt(fit.c)} r2={fmt(fit.r_squared)} target={target}")
        text = "\n".join(lines) + "\n"
    else:
        rows = [
            {"n": r.n, "N": r.size, "gamma_m": r.gamma_m, "max_abs_derivative": r.max_abs_derivative}
            for r in study.rows
        ]
        payload = {
            "meta": meta(model=args.model, observable=args.observable, max_steps=max_steps),
            "rows": rows,
            "fits": {target: _fit_dict(fit) for target, fit in fits},
        }
        text = json.dumps(payload, indent=1) + "\n"
    path = output_path(args, f"scaling_{args.model}_{args.observable}.{args.format}")
    _write(path, text)

    print(f"{args.model} {args.observable}: n = 1..{max_steps}")
    for r in study.rows:
        print(f"  n={r.n} N={r.size:.0f} gamma_m={r.gamma_m:.6e} max|d/dgamma|={r.max_abs_derivative:.6e}")
    for target, fit in fits:
        print(f"  fit ln {target} = theta ln N + c: theta={fit.theta:.6f} c={fit.c:.6f} r2={fit.r_squared:.8f}")
    print(f"wrote {path}")
    return 0


EXPECTED_FIXED_POINTS = {-1.0: True, 0.0: False, 1.0: True}


def cmd_fixed_points(args, parser) -> int:
    if not args.gamma_min < args.gamma_max:
        parser.error("--gamma-min must be smaller than --gamma-max")
    found = flow.fixed_points(args.model, args.gamma_min, args.gamma_max)
    status = 0
    report = []
    for root, slope, stable in found:
        match = [g for g in EXPECTED_FIXED_POINTS if abs(root - g) <= 1e-10]
        ok = bool(match) and EXPECTED_FIXED_POINTS[match[0]] == stable
        status |= 0 if ok else 1
        report.append({"gamma": root, "slope": slope, "stable": stable, "expected": ok})
    if args.json:
        print(json.dumps({"model": args.model, "fixed_points": report}, indent=1))
    else:
        for r in report:
            label = "stable" if r["stable"] else "unstable"
            flag = "" if r["expected"] else "  UNEXPECTED"
            print(f"gamma={fmt(r['gamma'])} slope={r['slope']:.10g} {label}{flag}")
    return status


def cmd_validate(args, parser) -> int:
    results = validation.run_all()
    if args.json:
        print(json.dumps({"passed": all(r.passed for r in results), "checks": [r.as_dict() for r in results]}, indent=1, default=str))
    else:
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'} {r.name}")
            for item in r.failures:
                print(f"    failing at {item}")
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "sweep": cmd_sweep,
    "scaling": cmd_scaling,
    "fixed-points": cmd_fixed_points,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args = resolve(parser, args)
    try:
        return COMMANDS[args.command](args, parser)
    except OSError as exc:
        print(f"qrgxy: {exc}", file=sys.stderr)
        return 1
    except QRGError as exc:
        print(f"qrgxy: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
