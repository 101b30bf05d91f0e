"""Command-line front end: ``pde2ode <subcommand> <file> [options]``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction

from . import render
from .dae import PIVOT_GUARD, CurveSpec, integrate_along_curve
from .elimination import CAPPED, Ranking, probe_pivot_case, rif
from .errors import (EigenFailError, InconsistentError, InfiniteDimensionalError,
                     NotClosedError, NotCommutingError, NotLinearError, ParseError,
                     PivotAtPointError, PivotError, ProjectionError, DivisionByZeroError)
from .initial_data import parametric_derivatives
from .lie import (derived_algebra_dimension, is_derived_abelian, linearizability_verdict,
                  parse_point, parse_vector_field, structure_constants)
from .ode import check_formal_compatibility, reduce_to_parametric_ode
from .parser import parse_expr, parse_polynomial_system, parse_system
from .zero_dim import quotient_system, solve_zero_dim

log = logging.getLogger("pde2ode")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INCONSISTENT, EXIT_INFINITE, EXIT_NUMERIC, EXIT_CAPPED = range(7)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _ranking(args, sig):
    indep = dep = None
    if args.indep_order:
        names = [s.strip() for s in args.indep_order.split(",")]
        if sorted(names) != sorted(sig.indep_names):
            raise UsageError("--indep-order must list every independent variable")
        indep = tuple(sig.indep_names.index(n) for n in names)
    if args.dep_order:
        names = [s.strip() for s in args.dep_order.split(",")]
        if sorted(names) != sorted(sig.dep_names):
            raise UsageError("--dep-order must list every dependent variable")
        dep = tuple(sig.dep_names.index(n) for n in names)
    return Ranking(indep, dep)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FileNotFoundError("cannot read %s: %s" % (path, exc.strerror or exc))


def _rif(args):
    src = parse_system(_read(args.file))
    f = rif(src, _ranking(args, src.signature), args.cap)
    if f.status == CAPPED and args.strict:
        raise _Capped()
    return src, f


class _Capped(Exception):
    pass


def _emit(args, text, doc):
    out = render.dumps(doc) if args.format == "json" else text
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_rif(args):
    _, f = _rif(args)
    _emit(args, render.rif_text(f), render.rif_json(f))


def cmd_initdata(args):
    _, f = _rif(args)
    data = parametric_derivatives(f)
    _emit(args, render.initdata_text(f, data), render.initdata_json(f, data))


def cmd_ode(args):
    _, f = _rif(args)
    p = reduce_to_parametric_ode(f)
    report = check_formal_compatibility(p)
    _emit(args, render.ode_text(p, report), render.ode_json(p, report))


def cmd_probe(args):
    src = parse_system(_read(args.file))
    ranking = _ranking(args, src.signature)
    f = rif(src, ranking, args.cap)
    pivots = list(f.inequations)
    if args.pivot is not None:
        try:
            k = int(args.pivot)
        except ValueError:
            pivots = [parse_expr(args.pivot, src.signature).num]
        else:
            if not 1 <= k <= len(pivots):
                raise UsageError("--pivot must be between 1 and %d" % len(pivots))
            pivots = [pivots[k - 1]]
    verdicts = [(g, probe_pivot_case(src, g, ranking, args.cap)) for g in pivots]
    sig = src.signature
    text = "".join("%s = 0: %s\n" % (render.format_poly(g, sig, ranking), v) for g, v in verdicts)
    doc = render._doc("probe", {"cases": [{"pivot": render.poly_json(g, sig, ranking), "verdict": v}
                                          for g, v in verdicts]})
    _emit(args, text, doc)


def _numbers(text, names, what):
    """``"u=2,u_x=1"`` (any order) or ``"2,1"`` (in declared order)."""
    parts = [s.strip() for s in text.split(",") if s.strip()]
    if parts and all("=" in s for s in parts):
        vals = {}
        for s in parts:
            k, _, v = s.partition("=")
            vals[k.strip()] = float(Fraction(v.strip()))
        missing = [n for n in names if n not in vals]
        if missing or len(vals) != len(names):
            raise UsageError("%s must give exactly %s" % (what, ", ".join(names)))
        return [vals[n] for n in names]
    if len(parts) != len(names):
        raise UsageError("%s needs %d values (%s)" % (what, len(names), ", ".join(names)))
    return [float(Fraction(s)) for s in parts]


def _direction(text, names):
    if text.strip() in names:
        return [1.0 if n == text.strip() else 0.0 for n in names]
    return _numbers(text, names, "--dir")


def _load_sample(spec, p):
    """``file:k`` -> (x, v) from row k of an earlier CSV or JSON trajectory."""
    path, _, k = spec.rpartition(":")
    if not path or not k.lstrip("-").isdigit():
        raise UsageError("--continue-from expects FILE:K")
    text = _read(path)
    header = render.trajectory_header(p)
    if text.lstrip().startswith("{"):
        rows = [[r[c] for c in header[:-2]] for r in json.loads(text)["samples"]]
    else:
        rows = list(csv.reader(text.splitlines()))
        if rows[0] != header:
            raise UsageError("%s was not produced for this system" % path)
        rows = rows[1:]
    try:
        row = [float(x) for x in rows[int(k)]]
    except IndexError:
        raise UsageError("%s has no sample %s" % (path, k))
    n = p.signature.n_indep
    return row[1:1 + n], row[1 + n:1 + n + len(p.states)]


def cmd_integrate(args):
    _, f = _rif(args)
    p = reduce_to_parametric_ode(f)
    names = list(p.signature.indep_names)
    if args.continue_from:
        start, v0 = _load_sample(args.continue_from, p)
    else:
        if not args.state or not args.start:
            raise UsageError("integrate needs --state and --from (or --continue-from)")
        start = _numbers(args.start, names, "--from")
        v0 = _numbers(args.state, p.state_names, "--state")
    try:
        curve = CurveSpec(tuple(start), tuple(_direction(args.dir, names)), args.h, args.steps)
    except ValueError as exc:
        raise UsageError(str(exc))
    traj = integrate_along_curve(p, curve, v0, project_onto=not args.no_project, guard=args.guard)
    # the text form of a trajectory is its CSV table
    _emit(args, render.trajectory_csv(p, traj), render.trajectory_json(p, traj))


def cmd_polysolve(args):
    names, polys = parse_polynomial_system(_read(args.file))
    f, p, ms = quotient_system(names, polys, args.cap)
    if f.status == CAPPED and args.strict:
        raise _Capped()
    roots = solve_zero_dim(ms, polys, tol=args.tol, seed=args.seed)
    _emit(args, render.roots_text(ms, roots), render.roots_json(ms, roots))


def cmd_liestructure(args):
    _, f = _rif(args)
    sig = f.signature
    data = parametric_derivatives(f)
    try:
        vf = parse_vector_field(args.vf, sig)
        point = parse_point(args.point, sig)
    except ValueError as exc:
        raise UsageError(str(exc))
    basis = None
    if args.basis:
        byname = {sig.derivative_name(d): d for d in data.parametric}
        names = [s.strip() for s in args.basis.split(",")]
        if sorted(names) != sorted(byname):
            raise UsageError("--basis must list the parametric derivatives: %s" % ", ".join(byname))
        basis = [byname[n] for n in names]
    sc = structure_constants(f, data, vf, point, basis)
    dd, ab = derived_algebra_dimension(sc), is_derived_abelian(sc)
    verdict = linearizability_verdict(sc, args.order) if args.order is not None else None
    _emit(args, render.lie_text(sc, sig, dd, ab, args.order, verdict),
          render.lie_json(sc, sig, dd, ab, args.order, verdict))


def build_parser():
    ap = _Parser(prog="pde2ode", description="Differential elimination and reduction of PDE systems to ODE systems.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("file", help="input .pde file")
        p.add_argument("--format", choices=["text", "json", "csv"], default="text")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        p.add_argument("--cap", type=int, default=4, help="prolongation cap beyond the input order (default 4)")
        p.add_argument("--strict", action="store_true", help="treat reaching the cap as a failure")
        p.add_argument("--indep-order", help="ranking: independent variables, most significant first")
        p.add_argument("--dep-order", help="ranking: dependent variables, highest first")
        p.set_defaults(func=func)
        return p

    add("rif", cmd_rif, "print the RIF form")
    add("initdata", cmd_initdata, "print parametric derivatives and initial data")
    add("ode", cmd_ode, "print the parametric ODE systems and a compatibility report")
    p = add("probe", cmd_probe, "consistency of the branches where a pivot vanishes")
    p.add_argument("--pivot", help="1-based pivot index or an expression (default: all)")
    p = add("integrate", cmd_integrate, "integrate along a straight curve")
    p.add_argument("--state", help="initial states, e.g. 'u=2,u_x=1,u_y=1'")
    p.add_argument("--from", dest="start", help="start point, e.g. 'x=0,y=0'")
    p.add_argument("--dir", default=None, help="direction: a variable name or components")
    p.add_argument("--h", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--no-project", action="store_true", help="skip projection onto the constraints")
    p.add_argument("--guard", type=float, default=PIVOT_GUARD, help="pivot guard (default 1e-8)")
    p.add_argument("--continue-from", help="restart from sample K of an earlier trajectory: FILE:K")
    p = add("polysolve", cmd_polysolve, "roots of a zero-dimensional polynomial system")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p = add("liestructure", cmd_liestructure, "structure constants of a symmetry algebra")
    p.add_argument("--vf", required=True, help="slot assignment, e.g. 'xi:x,eta:y'")
    p.add_argument("--point", required=True, help="expansion point, e.g. 'x0=0,y0=2'")
    p.add_argument("--basis", help="basis order as parametric derivative names")
    p.add_argument("--order", type=int, help="ODE order r for the linearizability verdict")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not args.command:
            ap.print_help(sys.stderr)
            return EXIT_USAGE
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        if args.command == "integrate" and args.dir is None:
            raise UsageError("integrate needs --dir")
        if args.cap < 1:
            raise UsageError("--cap must be at least 1")
        if getattr(args, "tol", 1.0) <= 0 or getattr(args, "h", 1.0) <= 0:
            raise UsageError("tolerances and step sizes must be positive")
        args.func(args)
    except UsageError as exc:
        print("pde2ode: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, FileNotFoundError) as exc:
        code = getattr(exc, "code", "E_IO")
        print("pde2ode: %s: %s" % (code, exc), file=sys.stderr)
        return EXIT_PARSE
    except InconsistentError as exc:
        print("pde2ode: %s: %s" % (exc.code, exc), file=sys.stderr)
        return EXIT_INCONSISTENT
    except InfiniteDimensionalError as exc:
        print("pde2ode: %s: %s" % (exc.code, exc), file=sys.stderr)
        return EXIT_INFINITE
    except (PivotError, EigenFailError, ProjectionError, PivotAtPointError, DivisionByZeroError) as exc:
        print("pde2ode: %s: %s" % (exc.code, exc), file=sys.stderr)
        return EXIT_NUMERIC
    except (NotClosedError, NotLinearError, NotCommutingError) as exc:
        print("pde2ode: %s: %s" % (exc.code, exc), file=sys.stderr)
        return EXIT_USAGE
    except _Capped:
        print("pde2ode: prolongation cap reached (status iteration_capped)", file=sys.stderr)
        return EXIT_CAPPED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
