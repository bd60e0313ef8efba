"""Command-line front end: ``hyperfour {coeffs,expand,eval,kg,height,verify}``."""

import argparse
import contextlib
import math
import sys

import numpy as np

# options whose values may start with "-" (e.g. a grid "-5:5:0.01")
_VALUE_OPTIONS = ("--grid", "--tau", "--y")


class UsageError(ValueError):
    pass


def parse_grid(spec):
    """Inclusive grid ``start:stop:step``.

    When step does not divide the range (within 1e-12) the last point is
    clamped to stop.
    """
    try:
        start, stop, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise UsageError("grid must look like start:stop:step, got %r" % spec) from None
    if stop == start:
        return np.array([start])
    if not step > 0 or stop < start:
        raise UsageError("grid needs step > 0 and stop >= start")
    span = stop - start
    k = round(span / step)
    if abs(k * step - span) <= 1e-12 * max(1.0, abs(span)):
        return start + step * np.arange(k + 1)
    k = int(math.floor(span / step))
    return np.append(start + step * np.arange(k + 1), stop)


def parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError("cannot parse complex number %r (use e.g. 0.2+1.1i)" % text) from None


def _fmt(v):
    return repr(float(v))


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_coeffs(args):
    from .biortho import write_csv

    xs = parse_grid(args.grid)
    n = args.n if args.n is not None else args.n_max
    with _output(args.out) as fh:
        write_csv(fh, n, xs, args.tol)
    return 0


def cmd_expand(args):
    from .expand import BoundaryFunction, expand_boundary

    f = BoundaryFunction.parse(args.boundary)
    c = expand_boundary(f, args.n_max)
    with _output(args.out) as fh:
        fh.write(c.to_json() + "\n")
    return 0


def cmd_eval(args):
    from .hfs import HfsCoefficients, hfs_eval

    with open(args.coeffs) as fh:
        c = HfsCoefficients.from_json(fh.read())
    v = hfs_eval(c, parse_complex(args.tau))
    with _output(args.out) as fh:
        fh.write("%s,%s\n" % (_fmt(v.real), _fmt(v.imag)))
    return 0


def cmd_kg(args):
    from .kleingordon import kg_eval, kg_interp_solution, load_lattice

    if args.lattice:
        with open(args.lattice) as fh:
            w = load_lattice(fh.read())
    else:
        w = kg_interp_solution(args.n if args.n is not None else 5, "x_axis")
    xs = parse_grid(args.grid)
    ys = parse_grid(args.grid_y) if args.grid_y else xs
    with _output(args.out) as fh:
        fh.write("x,y,re_u,im_u\n")
        for x in xs:
            for y in ys:
                u = kg_eval(w, float(x), float(y))
                fh.write(",".join(_fmt(v) for v in (x, y, u.real, u.imag)) + "\n")
    return 0


def cmd_height(args):
    from .halfplane import average_height, flycatcher_height

    with _output(args.out) as fh:
        if args.tau is not None:
            r = flycatcher_height(parse_complex(args.tau))
            fh.write("height %d\nmesh %s\nterminal %r\n" % (r.N, r.is_mesh, r.orbit[-1]))
        else:
            y = float(args.y)
            L = math.log(1 / y)
            fh.write("y %s\nmean_height %s\nlog_squared_over_pi2 %s\n"
                     % (_fmt(y), _fmt(average_height(y)), _fmt(L * L / math.pi**2)))
    return 0


def cmd_verify(args):
    from .verify import run_all

    with _output(args.out) as fh:
        results = run_all(lambda line: fh.write(line + "\n"))
        failed = [r for r in results if not r.passed]
        fh.write("%d/%d criteria passed\n" % (len(results) - len(failed), len(results)))
        if failed:
            fh.write("label,residual,tol\n")
            for r in failed:
                for label, res, tol in r.parts:
                    fh.write("%d %s,%s,%s\n" % (r.number, label, _fmt(res), _fmt(tol)))
    return 1 if failed else 0


def build_parser():
    p = argparse.ArgumentParser(prog="hyperfour", description="Hyperbolic Fourier series toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--tol", type=float, default=1e-10, help="quadrature tolerance tag")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads (numerics run in numpy; accepted for compatibility)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("coeffs", parents=[common], help="A_n, B_n samples as CSV")
    s.add_argument("--n", type=int)
    s.add_argument("--n-max", type=int, default=1)
    s.add_argument("--grid", required=True, help="start:stop:step (inclusive)")
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("expand", parents=[common], help="expand boundary data into JSON coefficients")
    s.add_argument("--boundary", required=True, help="const:v, cauchy:x, exp:n or csv:path")
    s.add_argument("--n-max", type=int, default=10)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("eval", parents=[common], help="evaluate a coefficient JSON at tau")
    s.add_argument("--coeffs", required=True)
    s.add_argument("--tau", required=True, help="e.g. 0+1i")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("kg", parents=[common], help="Klein-Gordon solution on a grid as CSV")
    s.add_argument("--n", type=int, help="use u_(n,0) (default 5)")
    s.add_argument("--lattice", help="lattice data JSON {alpha: {...}, beta: {...}}")
    s.add_argument("--grid", required=True, help="x grid start:stop:step")
    s.add_argument("--grid-y", help="y grid (default: same as x)")
    s.set_defaults(func=cmd_kg)

    s = sub.add_parser("height", parents=[common], help="fly-catcher height or mean height")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--tau")
    g.add_argument("--y", help="mean height over the line Im tau = y")
    s.set_defaults(func=cmd_height)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    s.set_defaults(func=cmd_verify)
    return p


def _join_values(argv):
    out, it = [], iter(argv)
    for a in it:
        if a in _VALUE_OPTIONS:
            out.append("%s=%s" % (a, next(it, "")))
        else:
            out.append(a)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_values(argv))
    if getattr(args, "n_max", 1) is not None and getattr(args, "n_max", 1) < 0:
        print("hyperfour: --n-max must be >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print("hyperfour %s: %s" % (args.command, exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
