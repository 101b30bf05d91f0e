"""Text and JSON rendering.

Text output uses the ``diff(u, x, y)`` notation of the input language, so a
rendered RIF form is itself a valid ``.pde`` source.  JSON documents carry
``{"schema": "pde2ode/1"}`` at the top level.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .diffpoly import Derivative, DiffPolynomial, IndepVar, RationalExpr
from .elimination import DEFAULT_RANKING

SCHEMA = "pde2ode/1"


# -- text ----------------------------------------------------------------

def format_var(v, sig):
    if isinstance(v, IndepVar):
        return sig.indep_names[v.index]
    name = sig.dep_names[v.dep]
    if not v.order:
        return name
    args = []
    for i, k in enumerate(v.idx):
        if k == 1:
            args.append(sig.indep_names[i])
        elif k > 1:
            args.append("%s$%d" % (sig.indep_names[i], k))
    return "diff(%s, %s)" % (name, ", ".join(args))


def _sorted_terms(p, ranking):
    return sorted(p.terms.items(), key=lambda t: ranking.term_key(t[0]), reverse=True)


def format_poly(p, sig, ranking=DEFAULT_RANKING):
    if not p:
        return "0"
    out = []
    for mono, c in _sorted_terms(p, ranking):
        factors = []
        for v, e in sorted(mono, key=lambda t: ranking.key(t[0]), reverse=True):
            s = format_var(v, sig)
            factors.append(s if e == 1 else "%s^%d" % (s, e))
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag.denominator != 1:
                body = "%d/%d*%s" % (mag.numerator, mag.denominator, body)
            elif mag != 1:
                body = "%d*%s" % (mag.numerator, body)
        else:
            body = str(mag)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def _wrap(p, sig, ranking, bare):
    s = format_poly(p, sig, ranking)
    return s if bare else "(%s)" % s


def format_expr(e, sig, ranking=DEFAULT_RANKING):
    if isinstance(e, DiffPolynomial):
        return format_poly(e, sig, ranking)
    if e.den == 1:
        return format_poly(e.num, sig, ranking)
    num, den = e.num, e.den
    # a/b*c parses as (a/b)*c, so only a lone factor may stay unbracketed below the bar
    items = list(den.terms.items())
    den_bare = len(items) == 1 and items[0][1] == 1 and len(items[0][0]) == 1
    return "%s/%s" % (_wrap(num, sig, ranking, len(num) == 1),
                      _wrap(den, sig, ranking, den_bare))


def _header(sig):
    args = ", ".join(sig.indep_names)
    return ["vars %s;" % args,
            "funcs %s;" % ", ".join("%s(%s)" % (d, args) for d in sig.dep_names)]


def rif_text(f):
    sig, r = f.signature, f.ranking
    lines = ["# status: %s" % f.status] + _header(sig)
    for rule in f.rules:
        lines.append("eq %s = %s;" % (format_var(rule.lead, sig), format_expr(rule.rhs, sig, r)))
    for c in f.constraints:
        lines.append("eq %s = 0;" % format_poly(c, sig, r))
    for g in f.inequations:
        lines.append("ineq %s;" % format_poly(g, sig, r))
    return "\n".join(lines) + "\n"


def initdata_text(f, data):
    sig = f.signature
    point = ", ".join(data.point_symbols)
    lines = ["finite-dimensional: yes", "dimension: %d" % data.dimension]
    for d, c in zip(data.parametric, data.constants):
        lines.append("%s(%s) = %s" % (sig.derivative_name(d), point, c))
    for c in data.constraints_among_parametric:
        lines.append("constraint: %s = 0" % format_poly(c, sig, f.ranking))
    return "\n".join(lines) + "\n"


def ode_text(p, report=None):
    sig, r = p.signature, p.ranking or DEFAULT_RANKING
    lines = ["states: " + ", ".join(p.state_names)]
    for i, rhs in enumerate(p.odes):
        x = sig.indep_names[i]
        lines.append("%s-system:" % x)
        for name, e in zip(p.state_names, rhs):
            lines.append("  d%s/d%s = %s" % (name, x, format_expr(e, sig, r)))
    for c in p.constraints:
        lines.append("constraint: %s = 0" % format_poly(c, sig, r))
    for g in p.inequations:
        lines.append("inequation: %s <> 0" % format_poly(g, sig, r))
    if report is not None:
        lines.append("compatible: %s" % ("yes" if report.ok else "no"))
        for kind, _, res in report.residuals:
            lines.append("  %s residual: %s" % (kind, format_poly(res, sig, r)))
    return "\n".join(lines) + "\n"


def _fmt_complex(z):
    if z.imag == 0:
        return "%.12g" % z.real
    if z.real == 0:
        return "%.12gi" % z.imag
    return "%.12g%+.12gi" % (z.real, z.imag)


def roots_text(ms, roots):
    lines = ["dimension: %d" % ms.dimension, "clusters: %d" % len(roots)]
    for coords, res, mult in zip(roots.roots, roots.residuals, roots.multiplicities):
        pt = ", ".join("%s=%s" % (n, _fmt_complex(z)) for n, z in zip(ms.names, coords))
        lines.append("  [%s]  multiplicity %d  residual %.2e" % (pt, mult, res))
    return "\n".join(lines) + "\n"


def _vec_text(vec):
    parts = []
    for k, c in enumerate(vec):
        if not c:
            continue
        mag = abs(c)
        term = "X%d" % (k + 1) if mag == 1 else "%s*X%d" % (mag, k + 1)
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts) or "0"


def lie_text(sc, sig, derived_dim, abelian, order=None, verdict=None):
    lines = ["basis: " + ", ".join("X%d=%s" % (k + 1, sig.derivative_name(d))
                                  for k, d in enumerate(sc.basis))]
    for i in range(sc.dim):
        for j in range(i + 1, sc.dim):
            if any(sc.c[i][j]):
                lines.append("[X%d, X%d] = %s" % (i + 1, j + 1, _vec_text(sc.c[i][j])))
    lines.append("derived algebra dimension: %d" % derived_dim)
    lines.append("derived algebra abelian: %s" % ("yes" if abelian else "no"))
    if order is not None:
        lines.append("linearizable (order %d): %s" % (order, "yes" if verdict else "no"))
    return "\n".join(lines) + "\n"


# -- JSON ----------------------------------------------------------------

def _q(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (c.numerator, c.denominator)


def poly_json(p, sig, ranking=DEFAULT_RANKING):
    out = []
    for mono, c in _sorted_terms(p, ranking):
        out.append({
            "coeff": _q(c),
            "factors": [{"dep": sig.dep_names[v.dep], "idx": list(v.idx), "exp": e}
                        for v, e in mono if isinstance(v, Derivative)],
            "indep": [{"var": sig.indep_names[v.index], "exp": e}
                      for v, e in mono if isinstance(v, IndepVar)],
        })
    return out


def poly_from_json(terms, sig):
    out = {}
    for t in terms:
        mono = [(Derivative(sig.dep_names.index(f["dep"]), tuple(f["idx"])), f["exp"]) for f in t["factors"]]
        mono += [(IndepVar(sig.indep_names.index(v["var"])), v["exp"]) for v in t["indep"]]
        out[tuple(sorted(mono))] = Fraction(t["coeff"])
    return DiffPolynomial(out)


def expr_json(e, sig, ranking=DEFAULT_RANKING):
    e = RationalExpr.lift(e)
    return {"text": format_expr(e, sig, ranking),
            "num": poly_json(e.num, sig, ranking),
            "den": poly_json(e.den, sig, ranking)}


def _signature_json(sig):
    return {"vars": list(sig.indep_names), "funcs": list(sig.dep_names)}


def _doc(kind, body):
    doc = {"schema": SCHEMA, "kind": kind}
    doc.update(body)
    return doc


def rif_json(f):
    sig, r = f.signature, f.ranking
    return _doc("rif", {
        "signature": _signature_json(sig),
        "status": f.status,
        "rules": [{"lead": sig.derivative_name(rule.lead), "rhs": expr_json(rule.rhs, sig, r)}
                  for rule in f.rules],
        "constraints": [poly_json(c, sig, r) for c in f.constraints],
        "inequations": [poly_json(g, sig, r) for g in f.inequations],
    })


def initdata_json(f, data):
    sig = f.signature
    return _doc("initdata", {
        "signature": _signature_json(sig),
        "parametric": [sig.derivative_name(d) for d in data.parametric],
        "dimension": data.dimension,
        "point_symbols": list(data.point_symbols),
        "constants": list(data.constants),
        "constraints_among_parametric": [poly_json(c, sig, f.ranking)
                                         for c in data.constraints_among_parametric],
    })


def ode_json(p, report=None):
    sig, r = p.signature, p.ranking or DEFAULT_RANKING
    doc = _doc("ode", {
        "signature": _signature_json(sig),
        "states": p.state_names,
        "odes": {sig.indep_names[i]: [expr_json(e, sig, r) for e in rhs]
                 for i, rhs in enumerate(p.odes)},
        "constraints": [poly_json(c, sig, r) for c in p.constraints],
        "inequations": [poly_json(g, sig, r) for g in p.inequations],
    })
    if report is not None:
        doc["compatible"] = report.ok
        doc["residuals"] = [{"kind": kind, "residual": poly_json(res, sig, r)}
                            for kind, _, res in report.residuals]
    return doc


def _complex_json(z):
    return [z.real, z.imag]


def roots_json(ms, roots):
    return _doc("polysolve", {
        "variables": list(ms.names),
        "dimension": ms.dimension,
        "roots": [{"coords": [_complex_json(z) for z in coords], "residual": res,
                   "multiplicity": mult}
                  for coords, res, mult in zip(roots.roots, roots.residuals, roots.multiplicities)],
    })


def lie_json(sc, sig, derived_dim, abelian, order=None, verdict=None):
    brackets = [{"i": i + 1, "j": j + 1, "coeffs": [_q(c) for c in sc.c[i][j]]}
                for i in range(sc.dim) for j in range(i + 1, sc.dim)]
    return _doc("liestructure", {
        "basis": [sig.derivative_name(d) for d in sc.basis],
        "point": {sig.indep_names[k]: _q(v) for k, v in sorted(sc.point.items())},
        "brackets": brackets,
        "derived_dimension": derived_dim,
        "derived_abelian": abelian,
        "linearizable_for_order": ({"order": order, "verdict": verdict} if order is not None else None),
    })


def trajectory_header(p):
    return ["t"] + list(p.signature.indep_names) + p.state_names + ["max_drift", "min_pivot"]


def trajectory_csv(p, traj):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(trajectory_header(p))
    for row in traj.rows():
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def trajectory_json(p, traj):
    header = trajectory_header(p)
    rows = [dict(zip(header, (float(x) for x in row))) for row in traj.rows()]
    for r in rows:
        if r["min_pivot"] == float("inf"):
            r["min_pivot"] = None
    return _doc("trajectory", {"columns": header, "samples": rows})


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
