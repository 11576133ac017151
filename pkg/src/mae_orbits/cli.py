"""Command-line interface: ``mae-orbits <command> [options] [input.json]``.

Every command prints one report document (JSON by default, Markdown with
``--format markdown``) on standard output.  Diagnostics go to standard error.
Exit codes: 0 success, 1 failed check, 2 usage, 3 degenerate input,
4 classification ambiguity, 5 sampling failure.

Scalars in input documents may be integers, decimal literals, strings such as
"2/3", objects {"num": p, "den": q}, or [re, im] pairs of any of these.  The
exact rational path is used when every scalar is exact (integers, strings,
num/den objects); a decimal literal switches the document to floating point
unless ``--exact`` is given, in which case the literal is read as the exact
decimal it spells.
"""

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from . import classifier as cl
from . import forms as fm
from . import linalg as la
from . import mae
from . import moment as mo
from . import suite
from . import symplectic as sp
from .errors import MaeError, ValidationError


class UsageError(ValidationError):
    pass


# ---------------------------------------------------------------------------
# scalar decoding


def _real(v, exact):
    if isinstance(v, bool):
        raise UsageError(f"not a number: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        if not math.isfinite(v):
            raise UsageError(f"non-finite number: {v!r}")
        return Fraction(repr(v)) if exact else v
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"cannot read {v!r} as a rational number") from exc
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        if not all(isinstance(v[k], int) and not isinstance(v[k], bool) for k in v) or not v["den"]:
            raise UsageError(f"bad rational {v!r}")
        return Fraction(v["num"], v["den"])
    raise UsageError(f"not a number: {v!r}")


def _is_pair(v):
    return isinstance(v, list) and len(v) == 2 and not any(isinstance(x, list) for x in v)


def _scalars(doc):
    """All scalar leaves of a document (pairs count as two)."""
    if isinstance(doc, dict) and set(doc) != {"num", "den"}:
        for v in doc.values():
            yield from _scalars(v)
    elif isinstance(doc, list):
        for v in doc:
            yield from _scalars(v)
    else:
        yield doc


def _arithmetic(doc, force_exact):
    if force_exact:
        return True
    return not any(isinstance(v, float) for v in _scalars(doc))


def decode_scalar(v, exact):
    re, im = (v if _is_pair(v) else (v, 0))
    re, im = _real(re, exact), _real(im, exact)
    if exact:
        return la.qq(re) + la.qq(im) * la.I_UNIT
    return complex(float(re), float(im))


def decode_matrix(rows, shape, exact, name):
    if not isinstance(rows, list) or len(rows) != shape[0] or any(
            not isinstance(r, list) or len(r) != shape[1] for r in rows):
        raise UsageError(f"{name} must be a {shape[0]}x{shape[1]} matrix")
    M = np.empty(shape, dtype=object if exact else complex)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            M[i, j] = decode_scalar(v, exact)
    return M


def _symmetric(M, name):
    if not la.is_symmetric(M):
        raise ValidationError(f"{name} must be symmetric")
    return M


def parse_form(doc, exact):
    """FormInputDoc -> EffForm."""
    if not isinstance(doc, dict):
        raise UsageError("form input must be a JSON object")
    variants = [k for k in ("effective", "mae", "triples") if k in doc]
    if len(variants) != 1:
        raise UsageError("form input needs exactly one of 'effective', 'mae', 'triples'")
    kind = variants[0]
    body = doc[kind]
    if not isinstance(body, dict):
        raise UsageError(f"'{kind}' must be a JSON object")
    if kind == "triples":
        coeffs, seen = {}, set()
        for key, v in body.items():
            # unordered keys such as "163" are read with their permutation sign
            if len(key) != 3 or any(c not in "123456" for c in key) or len(set(key)) != 3:
                raise UsageError(f"triple key {key!r} must be three distinct indices in 1..6")
            if "".join(sorted(key)) in seen:
                raise UsageError(f"triple key {key!r} repeats a basis element")
            seen.add("".join(sorted(key)))
            coeffs[key] = decode_scalar(v, exact)
        side = doc.get("side", "vector")
        if side not in fm.SIDES:
            raise UsageError(f"side must be one of {fm.SIDES}")
        tau = fm.form20(coeffs) if exact else la.to_float(fm.form20(coeffs))
        try:
            return fm.from20(tau, side)
        except ValidationError as exc:
            raise ValidationError(f"triples do not form an effective 3-form: {exc}") from exc
    if kind == "effective":
        need = {"p123", "X", "Y", "p456"}
        if not need <= set(body):
            raise UsageError(f"'effective' needs keys {sorted(need)}")
        X = _symmetric(decode_matrix(body["X"], (3, 3), exact, "X"), "X")
        Y = _symmetric(decode_matrix(body["Y"], (3, 3), exact, "Y"), "Y")
        side = body.get("side", "vector")
        if side not in fm.SIDES:
            raise UsageError(f"side must be one of {fm.SIDES}")
        return fm.EffForm(decode_scalar(body["p123"], exact), X, Y,
                          decode_scalar(body["p456"], exact), side)
    need = {"c0", "lin", "cof", "c3"}
    if not need <= set(body):
        raise UsageError(f"'mae' needs keys {sorted(need)}")
    lin = _symmetric(decode_matrix(body["lin"], (3, 3), exact, "lin"), "lin")
    cof = _symmetric(decode_matrix(body["cof"], (3, 3), exact, "cof"), "cof")
    c = mae.coeffs(decode_scalar(body["c0"], exact), lin, cof, decode_scalar(body["c3"], exact))
    return c.as_form()


# ---------------------------------------------------------------------------
# encoding


def _enc_real(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    return float(x)


def enc(x):
    """Scalar -> [re, im]."""
    if isinstance(x, la.GaussianRational):
        return [_enc_real(r) for r in la.re_im(x)]
    z = complex(x)
    return [float(z.real), float(z.imag)]


def enc_matrix(M):
    M = np.asarray(M)
    if M.ndim == 1:
        return [enc(v) for v in M]
    return [[enc(v) for v in row] for row in M]


def enc_form(eta):
    """Nonzero coordinates of a form as {"ijk": [re, im]}."""
    tau = eta.to20()
    return {"".join(map(str, t)): enc(v) for t, v in zip(fm.TRIPLES, tau)
            if (v if la.is_exact_scalar(v) else abs(complex(v)) > 0)}


def enc_mae(c):
    return {"c0": enc(c.c0), "lin": enc_matrix(c.lin), "cof": enc_matrix(c.cof),
            "c3": enc(c.c3)}


def _poly_str(expr_fn, exact):
    return str(expr_fn()) if exact else None


def enc_normal_form(nf):
    return {"label": nf.label, "params": [enc(p) for p in nf.params],
            "param_names": list(nf.param_names), "dimension": nf.dim,
            "orbit_type": nf.orbit_type, "expression": nf.expression}


# ---------------------------------------------------------------------------
# commands


def _tol(args):
    return la.TolPolicy(args.tol_abs, args.tol_rel)


def cmd_classify_form(doc, args):
    exact = _arithmetic(doc, args.exact)
    eta = parse_form(doc, exact)
    tol = _tol(args)
    cls = mo.classify_3form(eta, tol)
    q = mo.klr(eta)
    m = mo.moment_map(eta)
    res = {
        "class": cls.label,
        "orbit_dimension": cls.dimension,
        "side": eta.side,
        "quartic_f": enc(mo.quartic_f(eta)),
        "klr": enc_matrix(q),
        "klr_polynomial": _poly_str(lambda: sp.polynomial_of_quad(q), exact),
        "klr_rank": mo.KLR_RANKS[cls.label],
        "moment": enc_matrix(m),
        "proportionality_residual": mo.projective_residual(m, q),
        "proportionality_constant": None,
        "klr_image": None,
    }
    c = mo.proportionality_constant(m, q)
    if c is not None:
        res["proportionality_constant"] = enc(c)
    if cls.label != "P":
        res["klr_image"] = enc_normal_form(cl.classify_quadric(q, tol))
    return exact, res, 0


def cmd_classify_quadric(doc, args):
    Qdoc = doc["Q"] if isinstance(doc, dict) and "Q" in doc else doc
    exact = _arithmetic(Qdoc, args.exact)
    Q = decode_matrix(Qdoc, (6, 6), exact, "Q")
    tol = _tol(args)
    nf = cl.classify_quadric(Q, tol)
    jd = cl.spectral_data(Q, tol)
    res = enc_normal_form(nf)
    res["orbit_dimension"] = cl.orbit_dimension(Q, tol)
    res["spectral_data"] = [{"eigenvalue": enc(ev), "partition": list(part)}
                            for ev, part in jd.clusters]
    return exact, res, 0


def cmd_cochar_verify(doc, args):
    exact = _arithmetic(doc, args.exact)
    eta = parse_form(doc, exact)
    tol = _tol(args)
    pts = mae.sample_smooth_points(eta, args.points, args.seed, exact=exact, tol=tol)
    rows = []
    worst = 0.0
    for k, U in enumerate(pts):
        chk = mae.cochar_consistency(eta, U, tol)
        worst = max(worst, chk.residual)
        rows.append({"index": k, "U": enc_matrix(U), "char_rank": chk.rank,
                     "residual": chk.residual, "trivial": chk.trivial})
    limit = args.residual_tol
    passed = worst < limit
    q = mo.klr(eta)
    res = {
        "equation": _poly_str(lambda: mae.equation_polynomial(mae.mae_from_form(eta)), exact),
        "points": len(pts),
        "char_ranks": sorted({r["char_rank"] for r in rows}),
        "max_residual": worst,
        "residual_tol": limit,
        "cochar_trivial": all(r["trivial"] for r in rows),
        "klr_polynomial": _poly_str(lambda: sp.polynomial_of_quad(q), exact),
        "pass": passed,
        "per_point": rows,
    }
    return exact, res, 0 if passed else 1


def cmd_schubert(doc, args):
    Ddoc = doc["D"] if isinstance(doc, dict) and "D" in doc else doc
    exact = _arithmetic(Ddoc, args.exact)
    D = decode_matrix(Ddoc, (6, 3), exact, "D")
    tol = _tol(args)
    eta = mae.schubert_form(D, tol)
    c = mae.mae_from_form(eta)
    if not any(abs(la.to_complex(v)) > 0 for v in eta.to20()):
        raise ValidationError("the frame gives the zero form")
    cls = mo.classify_3form(eta, tol)
    line = mae.kernel_line(D, tol)
    res = {
        "form": enc_form(eta),
        "mae": enc_mae(c),
        "equation": _poly_str(lambda: mae.equation_polynomial(c), exact),
        "class": cls.label,
        "lagrangian": fm.is_lagrangian(D, tol),
        "kernel_line": None if line is None else enc_matrix(line),
        "cochar_hyperplane": None if line is None else enc_matrix(mae.flat(line)),
    }
    return exact, res, 0


_FORM_ROWS = [
    ("O", "e123 + e456", "C^*", "det U = 1"),
    ("L", "e423 + e126 + e153 + e123", "C^1", "u11 + u22 + u33 = 0"),
    ("G", "e163 + e125", "P^4 minus LG(2,4)", "u23 = 0"),
    ("P", "e123", "--", "u11 = 0"),
]


def atlas_rows():
    quadrics = []
    for label in cl.LABELS:
        if label == "zero":
            continue
        expr, names, kind, dim = cl.TABLE[label]
        p = cl.default_params(label)
        quadrics.append({"label": label, "expression": expr, "param_names": list(names),
                         "orbit_type": kind, "dimension": dim,
                         "sample_params": [enc(la.qq(v)) for v in p],
                         "matrix": enc_matrix(cl.normal_form_rep(label, p))})
    forms = []
    for label, rep, fiber, pde in _FORM_ROWS:
        eta = mo.representative(label)
        image = None if label == "P" else cl.classify_quadric(mo.klr(eta)).label
        forms.append({"label": label, "dimension": mo.ORBIT_DIMENSIONS[label],
                      "representative": rep, "klr_image": image, "fiber": fiber, "pde": pde})
    return quadrics, forms


def cmd_atlas(doc, args):
    quadrics, forms = atlas_rows()
    return True, {"quadric_rows": quadrics, "form_rows": forms}, 0


def cmd_selftest(doc, args):
    checks = suite.run_all(args.level, args.seed, suite.SELFTEST_CHECKS)
    failed = [r for r in checks if not r.passed]
    for r in checks:
        print(r.line(), file=sys.stderr)
    res = {"level": args.level, "passed": not failed,
           "checks": [{"key": r.key, "title": r.title, "passed": r.passed} for r in checks],
           "failures": [{"key": r.key, "title": r.title, "details": _jsonable(r.details)}
                        for r in failed]}
    return True, res, 1 if failed else 0


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, (la.GaussianRational, complex)):
        return enc(x)
    if isinstance(x, np.generic):
        return x.item()
    return str(x)


COMMANDS = {
    "classify-form": (cmd_classify_form, True),
    "classify-quadric": (cmd_classify_quadric, True),
    "cochar-verify": (cmd_cochar_verify, True),
    "schubert": (cmd_schubert, True),
    "atlas": (cmd_atlas, False),
    "selftest": (cmd_selftest, False),
}


# ---------------------------------------------------------------------------
# output


def digest(doc):
    if doc is None:
        return None
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _md_value(v):
    return "`" + json.dumps(v, separators=(",", ":")) + "`"


def to_markdown(report):
    lines = [f"# mae-orbits {report['command']}", ""]
    for key in ("version", "arithmetic", "seed", "input_digest"):
        lines.append(f"- {key}: {report[key]}")
    lines.append(f"- tolerance: abs {report['tolerance']['abs']}, rel {report['tolerance']['rel']}")
    lines.append("")
    res = report["results"]
    if report["command"] == "atlas":
        lines += ["## Quadric normal forms", "",
                  "| label | expression | type | dimension |", "|---|---|---|---|"]
        for r in res["quadric_rows"]:
            lines.append(f"| {r['label']} | {r['expression']} | {r['orbit_type']} "
                         f"| {r['dimension']} |")
        lines += ["", "## Orbits of effective 3-forms", "",
                  "| orbit | dimension | representative | klr image | fiber | PDE |",
                  "|---|---|---|---|---|---|"]
        for r in res["form_rows"]:
            lines.append(f"| {r['label']} | {r['dimension']} | {r['representative']} "
                         f"| {r['klr_image'] or '--'} | {r['fiber']} | {r['pde']} |")
    else:
        lines += ["## Results", ""]
        for k, v in res.items():
            lines.append(f"- {k}: {_md_value(v)}")
    return "\n".join(lines) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="mae-orbits",
                                description="Invariants and orbit classification for "
                                            "symplectic 3D Monge-Ampere equations.")
    p.add_argument("--version", action="version", version=f"mae-orbits {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-abs", type=float, default=la.DEFAULT_TOL.abs_tol)
    common.add_argument("--tol-rel", type=float, default=la.DEFAULT_TOL.rel_tol)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "markdown"), default="json")
    common.add_argument("--exact", action="store_true",
                        help="force the rational path (decimal literals read exactly)")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("classify-form", "classify-quadric", "cochar-verify", "schubert"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("input", nargs="?", default="-", help="JSON file, or - for stdin")
        if name == "cochar-verify":
            s.add_argument("--points", type=int, default=50)
            s.add_argument("--residual-tol", type=float, default=1e-8)
    sub.add_parser("atlas", parents=[common])
    s = sub.add_parser("selftest", parents=[common])
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    return p


def _read_input(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fn, needs_input = COMMANDS[args.command]
    try:
        if args.tol_abs <= 0 or args.tol_rel <= 0:
            raise UsageError("tolerances must be positive")
        if getattr(args, "points", 1) < 1:
            raise UsageError("--points must be positive")
        doc = _read_input(args.input) if needs_input else None
        exact, results, code = fn(doc, args)
    except MaeError as exc:
        print(f"mae-orbits: error: {exc}", file=sys.stderr)
        candidates = getattr(exc, "candidates", None)
        if candidates:
            print(json.dumps({"candidates": _jsonable(candidates)}), file=sys.stderr)
        return exc.exit_code
    except TypeError as exc:
        # raised by the exact path on inexact data
        print(f"mae-orbits: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "version": __version__,
        "arithmetic": "exact" if exact else "float",
        "seed": args.seed,
        "tolerance": {"abs": args.tol_abs, "rel": args.tol_rel},
        "input_digest": digest(doc),
        "results": _jsonable(results),
    }
    if args.format == "markdown":
        sys.stdout.write(to_markdown(report))
    else:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
