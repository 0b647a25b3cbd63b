"""Command-line front end.

Every subcommand prints one UTF-8 JSON document on stdout.  Exit status is 0
on success, 1 when a mathematical check fails and 2 on bad input.  Inputs are
either paths to JSON files or inline JSON text.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cancel, corr, jsonio, quadform as qf, residue, verify
from .exactalg.fields import FieldError, parse_field

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class _Failed(Exception):
    """Carries a result document for a check that ran but did not pass."""

    def __init__(self, doc: dict):
        super().__init__("check failed")
        self.doc = doc


def _field(args):
    try:
        return parse_field(args.field)
    except (FieldError, ValueError) as e:
        raise jsonio.InputError("--field", str(e)) from None


def _form(args, arg: str, label: str) -> qf.QuadSpace:
    return jsonio.form_from_json(jsonio.load_document(arg, label), _field(args), label)


def _corr(args, arg: str, label: str) -> corr.Correspondence:
    return jsonio.corr_from_json(jsonio.load_document(arg, label), _field(args), label)


def _form_summary(Q: qf.QuadSpace) -> dict:
    return {**jsonio.form_to_json(Q), "invariants": qf.gw_invariants(Q).as_dict()}


def _check(report) -> dict:
    doc = report.as_dict()
    if not report.passed:
        raise _Failed(doc)
    return doc


# subcommands


def cmd_invariants(args) -> dict:
    Q = _form(args, args.form, "$")
    return {"invariants": qf.gw_invariants(Q).as_dict(), "metabolic": qf.is_metabolic(Q)}


def cmd_equal_gw(args) -> dict:
    return {"equal": qf.gw_equal(_form(args, args.a, "$a"), _form(args, args.b, "$b"))}


def cmd_equal_w(args) -> dict:
    return {"equal": qf.witt_equal(_form(args, args.a, "$a"), _form(args, args.b, "$b"))}


def cmd_diagonalize(args) -> dict:
    Q = _form(args, args.form, "$")
    diag, B, _ = qf.diagonalize_with_basis(Q.gram)
    return {
        "diagonal": [str(d) for d in diag],
        "basis_columns": [[str(x) for x in B.col(j)] for j in range(B.ncols)],
    }


def cmd_residue_form(args) -> dict:
    doc = jsonio.load_document(args.norm, "$")
    F = _field(args)
    if isinstance(doc, dict) and "field" in doc:
        F = jsonio.field_from_json(doc["field"], F, "$.field")
    if isinstance(doc, list):
        doc = {"val": 0, "coeffs": doc}
    N = jsonio.laurent_from_json(F, doc, "$")
    Q = residue.residue_quadspace(N, args.mode)
    return {"norm": str(N), "mode": args.mode, **_form_summary(Q), "metabolic": qf.is_metabolic(Q)}


def cmd_compose(args) -> dict:
    B = _corr(args, args.b, "$b")
    A = _corr(args, args.a, "$a")
    return jsonio.corr_to_json(corr.compose(B, A))


def cmd_boxtimes(args) -> dict:
    return jsonio.corr_to_json(corr.boxtimes_gm(_form(args, args.form, "$")))


def cmd_rho(args) -> dict:
    C = _corr(args, args.corr, "$")
    res = cancel.rho_n_run(corr.dot_expand(C), args.n, args.mode)
    out = res.as_dict()
    out["class"] = jsonio.class_to_json(res.cls)
    out["metabolic"] = qf.is_metabolic(res.cls)
    try:
        out["rank_one"] = str(cancel.rank_one_class(res.cls))
    except cancel.CalibrationError:
        out["rank_one"] = None
    return out


def cmd_left_inverse(args) -> dict:
    return _check(cancel.left_inverse_check(_form(args, args.form, "$"), args.n, mode=args.mode))


def cmd_permutation(args) -> dict:
    F = _field(args)
    x = jsonio.scalar_from_json(F, args.x, "x")
    y = jsonio.scalar_from_json(F, args.y, "y")
    return _check(cancel.permutation_fiber_check(F, x, y, args.mode))


def cmd_witt_table(args) -> dict:
    try:
        F = parse_field(f"fp:{args.p}")
    except (FieldError, ValueError) as e:
        raise jsonio.InputError("p", str(e)) from None
    return qf.witt_table(F.p).as_dict()


def cmd_verify(args) -> dict:
    known = [c.key for c in verify.CHECKS]
    for key in args.only or ():
        if key not in known:
            raise jsonio.InputError("--only", f"unknown check {key!r}; choose from {', '.join(known)}")
    results = verify.run_all(seed=args.seed, only=args.only)
    doc = {
        "seed": args.seed,
        "passed": all(r.passed for r in results),
        "results": {r.key: r.as_dict() for r in results},
    }
    if not doc["passed"]:
        raise _Failed(doc)
    return doc


def _seed(s: str) -> int:
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q or fp:<odd prime> (used when the input omits a field)")
    common.add_argument("--mode", default=residue.COEFFICIENT, choices=residue.MODES, help="residue functional")
    common.add_argument("--n", type=int, default=2, help="degree n of the bi-triple")
    common.add_argument("--seed", type=_seed, default=0, help="seed for randomized cases")
    common.add_argument("--json", metavar="PATH", help="also write the output document to PATH")

    p = argparse.ArgumentParser(prog="quadcorr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *positionals):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for pos, h in positionals:
            sp.add_argument(pos, help=h)
        sp.set_defaults(func=fn)
        return sp

    form = "form JSON (file path or inline)"
    add("invariants", cmd_invariants, "complete GW invariants of a form", ("form", form))
    add("equal-gw", cmd_equal_gw, "equality of two forms in GW(k)", ("a", form), ("b", form))
    add("equal-w", cmd_equal_w, "equality of two forms in W(k)", ("a", form), ("b", form))
    add("diagonalize", cmd_diagonalize, "diagonal form and change of basis", ("form", form))
    add(
        "residue-form",
        cmd_residue_form,
        "the space <N> on k[t]/(N)",
        ("norm", "Laurent polynomial JSON {val, coeffs} or an array of coefficients, lowest first"),
    )
    add("compose", cmd_compose, "composite B after A", ("b", "correspondence JSON"), ("a", "correspondence JSON"))
    add("boxtimes", cmd_boxtimes, "external product of a form with id of G_m", ("form", form))
    add("rho", cmd_rho, "rho_n of the dot-projected correspondence", ("corr", "correspondence JSON"))
    add("left-inverse-check", cmd_left_inverse, "rho(phi x id) against <beta_n> phi", ("form", form))
    add("permutation-check", cmd_permutation, "fiber identity for (t - x)(t - y)", ("x", "unit x"), ("y", "unit y != x"))
    add("witt-table", cmd_witt_table, "addition table of W(F_p)", ("p", "odd prime"))
    vp = add("verify", cmd_verify, "run the verification suite")
    vp.add_argument("--only", nargs="+", metavar="CHECK", help="run only these checks")
    return p


def _emit(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    sys.stdout.write(text + "\n")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse has already printed usage; --help exits 0
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    if args.n < 1:
        _emit({"error": "--n must be a positive integer", "path": "--n"}, None)
        return EXIT_INPUT
    try:
        doc = args.func(args)
    except _Failed as f:
        _emit(f.doc, args.json)
        return EXIT_FAILED
    except jsonio.InputError as e:
        _emit({"error": str(e), "path": e.path}, args.json)
        return EXIT_INPUT
    except AssertionError as e:
        # internal consistency checks of the pipeline
        _emit({"error": str(e) or type(e).__name__, "kind": type(e).__name__}, args.json)
        return EXIT_FAILED
    except (ValueError, ArithmeticError, TypeError) as e:
        _emit({"error": str(e), "kind": type(e).__name__}, args.json)
        return EXIT_INPUT
    _emit(doc, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
