"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""

import argparse
import io
import json
import math
import sys

import numpy as np

from . import elliptic
from .closedform import ClosedFormGeodesic, eval_trajectory
from .flow import IntegrationError, integrate
from .model import NormalizedCovector
from .sphere import MU_RANGE, THETA_RANGE, export_cloud, sample_sphere
from .verify import SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text):
    try:
        nt, nm = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 32x32, got {text!r}") from None
    return nt, nm


def _pz_sign(text):
    if text not in ("+", "-"):
        raise argparse.ArgumentTypeError("pz sign must be '+' or '-'")
    return 1 if text == "+" else -1


def build_parser():
    p = _Parser(prog="sol-geodesics",
                description="Sub-Riemannian geodesics on the solvable group SOLV^-.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("geodesic", help="sample one geodesic from the identity")
    g.add_argument("--a", type=float, required=True)
    g.add_argument("--b", type=float, required=True)
    g.add_argument("--pz-sign", type=_pz_sign, default=1, metavar="{+,-}")
    g.add_argument("--t-max", type=float, required=True)
    g.add_argument("--samples", type=int, default=101)
    g.add_argument("--method", choices=("closed", "ode", "both"), default="closed")
    g.add_argument("--tol", type=float, default=1e-12, help="integrator tolerance")
    g.add_argument("-o", "--out", help="CSV path (default stdout)")
    g.add_argument("--meta", help="write geodesic metadata JSON here")

    v = sub.add_parser("verify", help="run randomised invariant suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--n", type=int, default=None, help="checks per suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("-o", "--out", help="report path (default stdout)")

    s = sub.add_parser("sphere", help="sample a geodesic sphere")
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--theta-min", type=float, default=THETA_RANGE[0])
    s.add_argument("--theta-max", type=float, default=THETA_RANGE[1])
    s.add_argument("--mu-min", type=float, default=MU_RANGE[0])
    s.add_argument("--mu-max", type=float, default=MU_RANGE[1])
    s.add_argument("--grid", type=_grid, default=(32, 32))
    s.add_argument("--format", choices=("csv", "obj"), default="csv")
    s.add_argument("--exp-z", action="store_true", help="emit e^z instead of z")
    s.add_argument("-o", "--out", help="output path (default sphere_r<R>.<format>)")

    e = sub.add_parser("elliptic", help="evaluate the elliptic kernel")
    e.add_argument("--fn", choices=("sn", "cn", "dn", "am", "F", "E"), required=True)
    e.add_argument("--u", type=float)
    e.add_argument("--phi", type=float)
    e.add_argument("--k", type=float, required=True)
    return p


def _write_text(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_geodesic(args):
    if not math.isfinite(args.a + args.b) or not abs(args.a + args.b) <= 1.0:
        raise _UsageError(f"inadmissible covector: need |a + b| <= 1, got a + b = {args.a + args.b}")
    if not args.t_max > 0 or args.samples < 1:
        raise _UsageError("need --t-max > 0 and --samples >= 1")
    c = NormalizedCovector.from_ab(args.a, args.b, args.pz_sign)
    times = np.linspace(0.0, args.t_max, args.samples) if args.samples > 1 else np.zeros(1)
    buf = io.StringIO()
    ode = closed = None
    if args.method in ("closed", "both"):
        closed = eval_trajectory(c, times)
    if args.method in ("ode", "both"):
        if times.size == 1:
            ode = eval_trajectory(c, times)   # single sample is the identity
        else:
            ode = integrate(c, args.t_max, args.tol, times=times)
    if args.method == "both":
        dev = np.max(np.abs(closed.states - ode.states), axis=1)
        closed.to_csv(buf, extra=("dev", dev))
        if args.out:
            with open(_sibling(args.out, ".ode.csv"), "w", encoding="utf-8", newline="\n") as fh:
                ode.to_csv(fh)
    else:
        (closed or ode).to_csv(buf)
    _write_text(args.out, buf.getvalue())
    if args.meta:
        meta = ClosedFormGeodesic(c).metadata()
        _write_text(args.meta, json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _sibling(path, suffix):
    return path[:-4] + suffix if path.endswith(".csv") else path + suffix


def cmd_verify(args):
    if args.n is not None and args.n < 1:
        raise _UsageError("--n must be positive")
    report = run_suite(args.suite, args.n, args.seed)
    _write_text(args.out, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_sphere(args):
    if not args.r > 0:
        raise _UsageError("--r must be positive")
    nt, nm = args.grid
    if nt < 2 or nm < 2:
        raise _UsageError("--grid needs at least 2x2 nodes")
    g = sample_sphere(args.r, (args.theta_min, args.theta_max), (args.mu_min, args.mu_max),
                      nt, nm)
    out = args.out or f"sphere_r{args.r:g}.{args.format}"
    export_cloud(g, out, args.format, exp_z=args.exp_z)
    sys.stderr.write(f"wrote {len(g.points)} points to {out} "
                     f"({g.n_fallback} ode fallbacks, {g.n_failed} failed)\n")
    return EXIT_OK


def cmd_elliptic(args):
    if args.fn in ("F", "E"):
        if args.phi is None:
            raise _UsageError(f"--fn {args.fn} needs --phi")
        fn = elliptic.incomplete_F if args.fn == "F" else elliptic.incomplete_E
        vals = [fn(args.phi, args.k)]
    else:
        if args.u is None:
            raise _UsageError(f"--fn {args.fn} needs --u")
        vals = [getattr(elliptic.jacobi(args.u, args.k), args.fn)]
    sys.stdout.write(" ".join(format(v, ".15g") for v in vals) + "\n")
    return EXIT_OK


_COMMANDS = {"geodesic": cmd_geodesic, "verify": cmd_verify, "sphere": cmd_sphere,
             "elliptic": cmd_elliptic}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (_UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except IntegrationError as exc:
        sys.stderr.write(f"integration failed: {exc}\n")
        return EXIT_VERIFY
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
