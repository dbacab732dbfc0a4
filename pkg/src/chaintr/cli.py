"""Batch front end: read a model file, run one computation, emit one JSON doc.

Every run writes a single JSON document (stdout or --out) carrying a
`conventions` block — the numbers are meaningless without the sign and gauge
conventions pinned next to them.  Exit codes: 0 ok, 2 schema, 3 solver,
4 singular curve, 5 check failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import (FloatRing, IrrationalRootError, Poly, RationalFn,
                      RationalRing, RingError, SeriesRing, parse_ring, ring_tag)
from .curve import SingularCurveError, SpectralCurve
from .model import ChainModel, SchemaError
from .model.build import SolverError, build_curve
from .model.moduli import validate_moduli
from .recursion import CorrelatorTable, sheet_sum_check

EXIT_OK, EXIT_SCHEMA, EXIT_SOLVER, EXIT_SINGULAR, EXIT_CHECK = 0, 2, 3, 4, 5

GMAX_CAP, NMAX_CAP = 5, 4


# -- scalar and form serialization -------------------------------------------------

def _leaf(R, v):
    """One numeric value under the run's ring tag.

    rational -> exact "p/q" string; float -> number (or {re, im}); series ->
    ascending coefficient strings.
    """
    if isinstance(R, SeriesRing):
        return [str(c) for c in R.coerce(v).c]
    if R.exact:
        return str(v)
    x = complex(v)
    if x.imag == 0.0:
        return x.real
    return {"re": x.real, "im": x.imag}


def _num(R, v):
    """Parse one coefficient from a document under the run's ring."""
    if isinstance(v, str):
        return R.from_fraction(Fraction(v))
    if isinstance(v, dict) and set(v) <= {"re", "im"}:
        return R.coerce(complex(v.get("re", 0.0), v.get("im", 0.0)))
    if isinstance(v, list):
        if not isinstance(R, SeriesRing):
            raise SchemaError("series coefficients need the series ring")
        c = [Fraction(s) for s in v]
        if len(c) > R.order + 1:
            raise SchemaError("series coefficient list longer than ring order")
        c += [Fraction(0)] * (R.order + 1 - len(c))
        out = R.zero
        for k, a in enumerate(c):
            out = out + R.from_fraction(a) * R.t ** k
        return out
    if isinstance(v, (int, float)):
        return R.coerce(v)
    raise SchemaError(f"bad numeric value {v!r}")


def _ratfn_doc(R, f):
    return {"num": [_leaf(R, c) for c in f.num.c],
            "den": [_leaf(R, c) for c in f.den.c]}


def _form_doc(R, form):
    return {
        "g": form.g,
        "n": form.n,
        "max_pole_order": form.max_pole_order(),
        "terms": [{"poles": [[a, j] for a, j in key], "coeff": _leaf(R, c)}
                  for key, c in sorted(form.terms.items())],
    }


def _conventions(R, gauge):
    return {
        "ring": ring_tag(R),
        "gauge": gauge,
        "residue_at_infinity": "Res_inf f dz = -(coefficient of z^-1 in f)",
        "y": "y(z) = c_{1,2} x_2(z); the planar one-point differential is y dx_1",
        "moments": "m^(g) = product of -Res_inf x_1^k over the slots, "
                   "with the double-pole subtraction on the planar two-point",
        "free_energy": "F_g = (1/(2g-2)) * sum of omega_1^(g) poles paired "
                       "with Phi = int y dx_1 (constant 0 at infinity)",
        "variations": "g:<site>:<power> | lambda:<i> | c:<k> | t:<e1>:<e2> "
                      "with endpoints marked-point indices or 'inf'; t-pairs "
                      "integrate the third-kind differential from e1 to e2",
    }


# -- input handling ---------------------------------------------------------------

def _read_doc(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as e:
        raise SchemaError(f"model file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"model file is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaError("model document must be a JSON object")
    return doc


def _pick_ring(doc, arg):
    spec = arg if arg is not None else doc.get("ring", "rational")
    try:
        return parse_ring(spec)
    except RingError as e:
        raise SchemaError(f"bad ring spec: {e}") from e


def _pick_gauge(doc, arg, R):
    g = arg if arg is not None else doc.get("gauge")
    if g is None:
        g = "monic" if R.exact else "symmetric"
    if g not in ("symmetric", "monic"):
        raise SchemaError("gauge must be 'symmetric' or 'monic'")
    return g


def _make_curve(doc, args):
    """Build from a chain model, or ingest a raw (x1, y) parametrization."""
    R = _pick_ring(doc, args.ring)
    gauge = _pick_gauge(doc, args.gauge, R)
    if "raw_curve" in doc:
        rc = doc["raw_curve"]
        try:
            fns = {}
            for name in ("x1", "y"):
                num = Poly(R, [_num(R, v) for v in rc[name]["num"]])
                den = Poly(R, [_num(R, v) for v in rc[name]["den"]])
                fns[name] = RationalFn(num, den)
        except (KeyError, TypeError) as e:
            raise SchemaError("raw_curve needs x1 and y as {num, den} "
                              "coefficient lists") from e
        return SpectralCurve.raw(R, fns["x1"], fns["y"]), None, gauge
    model = ChainModel.from_json(doc)
    return build_curve(model, ring=R, gauge=gauge), model, gauge


# -- commands ---------------------------------------------------------------------

def _cmd_curve(curve, model, args, out):
    R = curve.R
    out["curve"] = {
        "branch_points": [_leaf(R, a) for a in curve.branch_points],
        "zetas": [_leaf(R, z) for z in curve.zetas],
        "x": [_ratfn_doc(R, f) for f in curve.xs],
        "y": _ratfn_doc(R, curve.y),
    }
    out["raw_curve"] = {"x1": _ratfn_doc(R, curve.x1), "y": _ratfn_doc(R, curve.y)}
    if model is not None:
        rep = validate_moduli(curve, model)
        out["moduli"] = {
            "ok": rep.ok,
            "rows": [{"name": r.name, "status": "pass" if r.ok else "fail"}
                     for r in rep.rows],
        }
    return EXIT_OK


def _parse_powers(spec, nmax):
    try:
        powers = [int(b) for b in spec.split(",")]
    except ValueError as e:
        raise SchemaError(f"bad moment spec {spec!r}") from e
    if not powers or any(k < 1 for k in powers):
        raise SchemaError("moment powers must be positive integers")
    if len(powers) > nmax:
        raise SchemaError(f"moment with {len(powers)} traces exceeds nmax")
    return powers


def _cmd_correlators(curve, model, args, out):
    R = curve.R
    table = CorrelatorTable(curve, args.gmax, args.nmax)
    forms = []
    for g in range(args.gmax + 1):
        for n in range(1, args.nmax + 1):
            if 2 * g - 2 + n >= 1:
                forms.append(_form_doc(R, table.omega(g, n)))
    out["omegas"] = forms
    moments = []
    for spec in args.moment or []:
        powers = _parse_powers(spec, args.nmax)
        by_genus = {}
        for g in range(args.gmax + 1):
            by_genus[str(g)] = _leaf(R, table.moment(g, powers))
        moments.append({"powers": powers, "by_genus": by_genus})
    out["moments"] = moments
    return EXIT_OK


def _cmd_free_energy(curve, model, args, out):
    R = curve.R
    if args.gmax < 2:
        raise SchemaError("free-energy needs --gmax >= 2")
    table = CorrelatorTable(curve, args.gmax, 1)
    out["F"] = {str(g): _leaf(R, table.free_energy(g))
                for g in range(2, args.gmax + 1)}
    return EXIT_OK


def _cmd_check(curve, model, args, out):
    R = curve.R
    gmax = max(args.gmax, 2)
    table = CorrelatorTable(curve, gmax, args.nmax)
    rows = []

    def row(name, ok, detail):
        rows.append({"name": name, "status": "pass" if ok else "fail",
                     "detail": detail})

    if model is not None:
        rep = validate_moduli(curve, model)
        row("moduli", rep.ok,
            f"{sum(r.ok for r in rep.rows)}/{len(rep.rows)} residue identities"
            + ("" if rep.ok else "; failed: "
               + ", ".join(r.name for r in rep.failures())))

    # omega symmetry is asserted inside every build; reaching here means it held
    worst = []
    for g in range(gmax + 1):
        for n in range(1, args.nmax + 1):
            if 2 * g - 2 + n < 1:
                continue
            form = table.omega(g, n)
            bound = 6 * g - 4 + 2 * n
            if form.max_pole_order() > bound:
                worst.append((g, n, form.max_pole_order(), bound))
    row("pole_bounds", not worst,
        "max pole order within 6g-4+2n for all stable (g, n)" if not worst
        else f"violations: {worst}")
    row("omega_symmetry", True,
        "slot-exchange decompositions agreed during construction")

    series = isinstance(R, SeriesRing)
    if not series:
        for h in range(1, min(gmax, 2) + 1):
            try:
                rep = sheet_sum_check(table, h, tol=args.tol)
                row(f"sheet_sum_h{h}", rep.ok, repr(rep))
            except ValueError as e:
                row(f"sheet_sum_h{h}", False, str(e))

    if model is not None:
        T = R.coerce(model.T)
        for g in range(2, gmax + 1):
            ins = table.variation("t:1:inf", f"F:{g}")
            want = R.div(R.coerce(2 * g - 2) * table.free_energy(g), T)
            if R.exact:
                ok = R.is_zero(ins - want)
            else:
                ok = R.mag(ins - want) <= args.tol * (1.0 + R.mag(want))
            row(f"t_homogeneity_F{g}", ok,
                "filling-pair insertion matches (2g-2) F_g / T")

    if model is not None and not series:
        swc = curve.swapped()
        # the exchange identity only bites when the partner function is itself
        # ramified (a Gaussian's x_2 = z has no branch points and nothing to say)
        if swc.branch_points:
            f2 = table.free_energy(2)
            sw = CorrelatorTable(swc, 2, 1).free_energy(2)
            if R.exact:
                ok = R.is_zero(f2 - sw)
            else:
                ok = R.mag(f2 - sw) <= args.tol * (1.0 + R.mag(f2))
            row("symplectic_F2", ok,
                "F_2 invariant under exchanging x and y roles")

    out["checks"] = rows
    out["ok"] = all(r["status"] == "pass" for r in rows)
    return EXIT_OK if out["ok"] else EXIT_CHECK


def _cmd_derive(curve, model, args, out):
    R = curve.R
    if model is None and not args.param.startswith("t:"):
        raise SchemaError("derive on a raw curve supports only t-pair parameters")
    table = CorrelatorTable(curve, args.gmax, args.nmax)
    target = args.target or "F:2"
    val = table.variation(args.param, target)
    out["param"] = args.param
    out["target"] = target
    if hasattr(val, "terms"):
        out["form"] = _form_doc(R, val)
    else:
        out["value"] = _leaf(R, val)
    return EXIT_OK


_COMMANDS = {
    "curve": _cmd_curve,
    "correlators": _cmd_correlators,
    "free-energy": _cmd_free_energy,
    "check": _cmd_check,
    "derive": _cmd_derive,
}


def _parser():
    p = argparse.ArgumentParser(
        prog="chain-tr",
        description="Spectral curve and topological expansion of the "
                    "chain-of-matrices model.")
    p.add_argument("command", choices=sorted(_COMMANDS))
    p.add_argument("--model", required=True, help="model or raw-curve JSON file")
    p.add_argument("--gmax", type=int, default=2)
    p.add_argument("--nmax", type=int, default=2)
    p.add_argument("--ring", default=None,
                   help="rational | float | series:<param>:<order>")
    p.add_argument("--gauge", default=None, choices=("symmetric", "monic"))
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--moment", action="append",
                   help="comma-separated trace powers; repeatable")
    p.add_argument("--param", default=None, help="derive: variation parameter")
    p.add_argument("--target", default=None, help="derive: F:<g> or omega:<g>:<n>")
    return p


def _emit(doc, path):
    text = json.dumps(doc, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    args = _parser().parse_args(argv)
    out = {"command": args.command}
    try:
        if not 0 <= args.gmax <= GMAX_CAP:
            raise SchemaError(f"gmax must lie in 0..{GMAX_CAP}")
        if not 1 <= args.nmax <= NMAX_CAP:
            raise SchemaError(f"nmax must lie in 1..{NMAX_CAP}")
        if args.command == "derive" and args.param is None:
            raise SchemaError("derive needs --param")
        doc = _read_doc(args.model)
        curve, model, gauge = _make_curve(doc, args)
        out["conventions"] = _conventions(curve.R, gauge)
        code = _COMMANDS[args.command](curve, model, args, out)
    except (SchemaError, ValueError) as e:
        out["error"] = {"kind": "schema", "message": str(e)}
        _emit(out, args.out)
        return EXIT_SCHEMA
    except (SolverError, IrrationalRootError) as e:
        out["error"] = {"kind": "solver", "message": str(e)}
        _emit(out, args.out)
        return EXIT_SOLVER
    except SingularCurveError as e:
        out["error"] = {"kind": "singular-curve", "message": str(e)}
        _emit(out, args.out)
        return EXIT_SINGULAR
    except RingError as e:
        out["error"] = {"kind": "solver", "message": str(e)}
        _emit(out, args.out)
        return EXIT_SOLVER
    _emit(out, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
