"""Command-line front end.

    oscspline damping --family poly --m 3 --n 64 --sigma -0.25 --out psi.csv
    oscspline interp  --family trig --m 3 --n 16
    oscspline pss     --model vanderpol --param mu=1 --family trig --n 64 --out vdp
    oscspline sweep   --model vanderpol --family poly,trig --n-list 16,32,64 --out sweep.csv

Data files carry no timestamps; run metadata goes to ``<out>.meta.json``.
Failures print one JSON line ``{"error": kind, "message": ...}`` on stderr
and exit nonzero.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .collocation import BasisSpec, collocation_points, evaluate, interpolate
from .models import get_model
from .pss import solve_pss
from .spectral import damping_spectrum

EXIT_USAGE = 2
EXIT_FAILURE = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _family_list(text):
    fams = [f.strip() for f in text.split(",") if f.strip()]
    for f in fams:
        if f not in ("poly", "trig"):
            raise argparse.ArgumentTypeError(f"family must be poly or trig, got {f!r}")
    if not fams:
        raise argparse.ArgumentTypeError("empty family list")
    return fams


def _n_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n-list must be comma-separated integers, got {text!r}") from None


def _param(text):
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"--param expects name=value, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--param value must be a number, got {text!r}") from None


def build_parser():
    p = _Parser(prog="oscspline", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=["damping", "interp", "pss", "sweep"])
    p.add_argument("--family", type=_family_list, default=["poly"], help="poly|trig (sweep: comma list)")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--sigma", type=float, default=-0.25)
    p.add_argument("--model", default="vanderpol")
    p.add_argument("--param", type=_param, action="append", default=[])
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--n-list", type=_n_list, default=None)
    return p


def _spec(args, family=None, n=None):
    try:
        return BasisSpec(family or args.family[0], args.m, n or args.n, args.sigma)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _single_family(args):
    if len(args.family) != 1:
        raise UsageError(f"{args.command} takes exactly one --family")
    return args.family[0]


def _model(args):
    try:
        return get_model(args.model, **dict(args.param))
    except KeyError as e:
        raise UsageError(e.args[0]) from None
    except TypeError:
        raise UsageError(f"invalid parameters {dict(args.param)} for model {args.model!r}") from None


def _emit(args, text, path=None):
    target = path or args.out
    if target is None:
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def _write_meta(args, argv, outputs):
    if args.out is None:
        return
    meta = {
        "version": __version__,
        "argv": list(argv),
        "finished": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "outputs": [str(o) for o in outputs],
    }
    Path(_stem(args.out) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")


def _stem(path):
    p = Path(path)
    return str(p.with_suffix("")) if p.suffix in (".csv", ".json") else str(p)


def cmd_damping(args):
    family = _single_family(args)
    spec = _spec(args)
    try:
        spec_ = damping_spectrum(family, spec.m, spec.n, spec.sigma)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.format == "csv":
        buf = io.StringIO()
        spec_.to_csv(buf)
        text = buf.getvalue()
    else:
        text = json.dumps(
            {
                "family": family,
                "m": spec.m,
                "n": spec.n,
                "sigma": spec.sigma,
                "xi": spec_.xi.tolist(),
                "re_psi": [None if s else float(v.real) for v, s in zip(spec_.values, spec_.singular)],
                "im_psi": [None if s else float(v.imag) for v, s in zip(spec_.values, spec_.singular)],
                "singular": [int(s) for s in spec_.singular],
            },
            indent=2,
        ) + "\n"
    _emit(args, text)
    return [args.out] if args.out else []


_TEST_FUNCTIONS = {
    "one": lambda t: np.ones_like(t),
    "cos": lambda t: np.cos(2 * np.pi * t),
    "sin": lambda t: np.sin(2 * np.pi * t),
}


def cmd_interp(args):
    _single_family(args)
    spec = _spec(args)
    tk = collocation_points(spec)
    probe = (np.arange(200) + 0.5) / 200 + 0.5 / (200 * math.pi)
    rows = []
    for name, fn in _TEST_FUNCTIONS.items():
        s = interpolate(spec, fn(tk))
        err = float(np.max(np.abs(evaluate(s, probe)[0] - fn(probe))))
        rows.append({"function": name, "max_error": err})
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["function", "max_error"])
        for r in rows:
            w.writerow([r["function"], repr(r["max_error"])])
        text = buf.getvalue()
    else:
        text = json.dumps({"family": spec.short_family, "m": spec.m, "n": spec.n, "sigma": spec.sigma,
                           "results": rows}, indent=2) + "\n"
    _emit(args, text)
    return [args.out] if args.out else []


def cmd_pss(args):
    _single_family(args)
    spec = _spec(args)
    model = _model(args)
    sol = solve_pss(model, spec)
    summary = {
        "model": model.name,
        "family": spec.short_family,
        "m": spec.m,
        "n": spec.n,
        "sigma": spec.sigma,
        "period": sol.period,
        "amplitude": sol.amplitude(0),
        "residual_norm": sol.residual_norm,
        "iterations": sol.iterations,
        "converged": sol.converged,
    }
    outputs = []
    if args.out:
        stem = _stem(args.out)
        with open(stem + ".json", "w") as fh:
            sol.to_json(fh)
        with open(stem + ".csv", "w", newline="") as fh:
            sol.waveform_csv(fh)
        outputs = [stem + ".json", stem + ".csv"]
    print(json.dumps(summary))
    if not sol.converged:
        raise RuntimeError(f"Newton did not converge: residual {sol.residual_norm:.3e} after {sol.iterations} iterations")
    return outputs


def _sweep_point(model, spec):
    sol = solve_pss(model, spec)
    return {
        "family": spec.short_family,
        "m": spec.m,
        "n": spec.n,
        "sigma": spec.sigma,
        "amplitude": sol.amplitude(0),
        "period": sol.period,
        "converged": sol.converged,
    }


def cmd_sweep(args):
    if not args.n_list:
        raise UsageError("sweep needs a non-empty --n-list")
    model = _model(args)
    specs = [_spec(args, family=f, n=n) for f in args.family for n in args.n_list]
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda s: _sweep_point(model, s), specs))
    rows.sort(key=lambda r: (r["family"], r["n"]))
    cols = ["family", "m", "n", "sigma", "amplitude", "period", "converged"]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r["family"], r["m"], r["n"], repr(r["sigma"]), repr(r["amplitude"]), repr(r["period"]),
                        int(r["converged"])])
        text = buf.getvalue()
    else:
        text = json.dumps(rows, indent=2) + "\n"
    _emit(args, text)
    return [args.out] if args.out else []


COMMANDS = {"damping": cmd_damping, "interp": cmd_interp, "pss": cmd_pss, "sweep": cmd_sweep}


def _fail(kind, message, code):
    sys.stderr.write(json.dumps({"error": kind, "message": " ".join(str(message).split())}) + "\n")
    return code


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command != "sweep" and args.n_list is not None:
            raise UsageError("--n-list is only valid for sweep")
        outputs = COMMANDS[args.command](args)
        _write_meta(args, argv, outputs)
    except UsageError as e:
        return _fail("usage", e, EXIT_USAGE)
    except Exception as e:  # noqa: BLE001 - every failure becomes one error line
        return _fail(type(e).__name__, e, EXIT_FAILURE)
    return 0


if __name__ == "__main__":
    sys.exit(main())
