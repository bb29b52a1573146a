# Command-line surface: every subcommand prints one JSON document on stdout.
import argparse
import json
import logging
import os
import sys

import numpy as np

from pdeforge import boolean, circuit, matrixalg, orbits, selftest, symmetric
from pdeforge.config import configure_logging, get_settings
from pdeforge.errors import ConvergenceError, InputFormatError, PdeforgeError, SizeGuardError
from pdeforge.messages import get_text
from pdeforge.mlpoly import MLPoly, as_mask, mask_vars
from pdeforge.ring import GF2, QQ

logger = logging.getLogger("CLI")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_document(value):
    """Inline JSON, or the path of a JSON file."""
    if value is None:
        raise InputFormatError("missing JSON argument")
    if os.path.isfile(value):
        try:
            with open(value, "r") as f:
                return json.load(f)
        except (OSError, ValueError) as e:
            raise InputFormatError(f"cannot read {value}: {e}") from e
    try:
        return json.loads(value)
    except ValueError as e:
        raise InputFormatError(f"argument is neither a file nor valid JSON: {e}") from e


def _subset(value):
    doc = load_document(value) if value else []
    if isinstance(doc, int):
        return doc
    return as_mask(int(i) for i in doc)


def _graph(value):
    return orbits.GraphSet.from_json(load_document(value))


def _matrix_bits(value):
    doc = load_document(value)
    return doc.get("rows") if isinstance(doc, dict) else doc


def _representation(args):
    if getattr(args, "poly", None):
        return MLPoly.from_json(load_document(args.poly))
    if getattr(args, "circuit", None):
        return circuit.load_circuit(load_document(args.circuit))
    if getattr(args, "cardinality", None):
        kind, s, n = args.cardinality.split(",")
        return symmetric.cardinality_pdp(kind, int(s), int(n))
    raise InputFormatError("one of --poly, --circuit or --cardinality is required")


# Handlers return (exit code, payload)

def cmd_interpolate(args, lang):
    table = boolean.TruthTable.from_json(load_document(args.table))
    ring = GF2 if args.ring == "gf2" or args.method == "binary" else QQ
    if args.method == "binary":
        value = boolean.lagrange_binary(table)
    else:
        value = boolean.lagrange_sumproduct(table, ring)
    p = value if args.values else boolean.hypercube_coefficients(value)
    return EXIT_OK, {"method": args.method, "ring": ring.tag, "values": args.values,
                     "polynomial": p.to_json(), "text": repr(p)}


def cmd_boole(args, lang):
    formula = boolean.formula_from_json(load_document(args.formula))
    p = boolean.boole_encode(formula, args.n)
    return EXIT_OK, {"leaf_count": formula.leaf_count(), "polynomial": p.to_json(), "text": repr(p)}


def cmd_pde_eval(args, lang):
    q = _representation(args)
    T = _subset(args.T)
    value = boolean.pdp_evaluate(q, T, args.m)
    return EXIT_OK, {"T": mask_vars(T), "value": value,
                     "message": get_text(lang, "pde_value", value=value, subset=mask_vars(T))}


def cmd_pde_verify(args, lang):
    q = _representation(args)
    report = boolean.verify_pde(q, boolean.TruthTable.from_json(load_document(args.table)), args.m)
    if report.passed:
        message = get_text(lang, "verify_pass", total=report.total)
    else:
        message = get_text(lang, "verify_fail", count=len(report.mismatches), total=report.total)
    return (EXIT_OK if report.passed else EXIT_MISMATCH), {**report.to_json(), "message": message}


def _build_circuit(args):
    if args.kind == "subset":
        return circuit.subset_product(_subset(args.S), args.N)
    if args.kind == "superset":
        return circuit.superset_product(_subset(args.S), args.N)
    if args.kind == "cardinality":
        return circuit.cardinality_circuit(args.card_kind, args.s, args.N)
    if args.kind == "trivial":
        return circuit.trivial_circuit(MLPoly.from_json(load_document(args.poly)))
    raise InputFormatError(f"unknown circuit kind {args.kind!r}")


def cmd_circuit(args, lang):
    c = _build_circuit(args) if args.action == "build" else circuit.load_circuit(load_document(args.circuit))
    if args.complement:
        if not isinstance(c, circuit.SigmaPiSigma):
            raise InputFormatError("--complement needs an exact circuit")
        c = circuit.complement_circuit(c)
    report = circuit.size_report(c)
    payload = {"size": list(report.as_tuple()),
               "message": get_text(lang, "circuit_size", rho=report.rho, d=report.d, width=report.width,
                                   size=report.size)}
    if args.action == "expand":
        if isinstance(c, circuit.NumericCircuit):
            coeffs = circuit.numeric_coefficients(c)
            payload["coefficients"] = {str(mask_vars(int(k))): [float(v.real), float(v.imag)]
                                       for k, v in enumerate(np.asarray(coeffs, dtype=complex))
                                       if abs(v) > args.tol}
        else:
            p = circuit.expand(c, reduce=not args.raw)
            payload["polynomial"] = p.to_json()
            payload["text"] = repr(p)
    else:
        payload["circuit"] = c.to_json()
    return EXIT_OK, payload


def cmd_pdp_search(args, lang):
    target = MLPoly.from_json(load_document(args.poly))
    fixed = {}
    for u, v, w, value in (load_document(args.fixed) if args.fixed else []):
        fixed[(int(u), int(v), int(w))] = float(value)
    seeds = range(args.seed, args.seed + args.starts)
    result = circuit.pdp_search(target, args.rho, args.d, seeds=seeds, tol=args.tol, fixed=fixed,
                                max_iter=args.max_iter)
    if result.converged:
        message = get_text(lang, "search_converged", residual=result.residual, seed=result.seed)
    else:
        message = get_text(lang, "search_failed", tol=args.tol, residual=result.residual, seed=result.seed)
    return (EXIT_OK if result.converged else EXIT_MISMATCH), {**result.to_json(), "message": message}


def cmd_cardinality(args, lang):
    q = symmetric.cardinality_pdp(args.kind, args.s, args.N)
    payload = {"pdp": q.to_json(),
               "message": get_text(lang, "cardinality_summary", kind=args.kind, s=args.s, n=args.N,
                                   degree=q.degree)}
    try:
        closed = circuit.cardinality_circuit(args.kind, args.s, args.N)
        payload["closed_form_size"] = list(circuit.size_report(closed).as_tuple())
    except PdeforgeError:
        payload["closed_form_size"] = None
    if args.factor:
        try:
            factorization = symmetric.factor_roots(q, args.tol)
        except ConvergenceError as e:
            payload["factorization"] = {"error": str(e), "residual": e.residual}
        else:
            product = symmetric.product_circuit(q, factorization)
            payload["factorization"] = factorization.to_json()
            payload["product_size"] = list(circuit.size_report(product).as_tuple())
    return EXIT_OK, payload


def cmd_orbit(args, lang):
    S = _graph(args.graph)
    members = orbits.orbit(S)
    aut = orbits.automorphisms(S)
    classes = len(orbits.iso_classes(S.n)) if S.n <= orbits.POLY_MAX_VERTICES else orbits.polya_count(S.n)
    payload = {
        "S": S.to_json(),
        "orbit_size": len(members),
        "automorphisms": [list(lam.image) for lam in aut],
        "canonical": orbits.canonical_form(S).to_json(),
        "classes": classes,
        "polya_series": orbits.polya_series(S.n),
        "message": get_text(lang, "orbit_summary", orbit=len(members), aut=len(aut), classes=classes, n=S.n),
    }
    if args.members:
        payload["members"] = [g.to_json() for g in sorted(members, key=lambda g: g.bits)]
    return EXIT_OK, payload


def cmd_iso_pde(args, lang):
    S, T = _graph(args.graph), _graph(args.target)
    value = orbits.iso_pde_evaluate(args.kind, S, T, args.m)
    return EXIT_OK, {"kind": args.kind, "value": value,
                     "message": get_text(lang, "iso_value", kind=args.kind, value=value)}


def cmd_certificate(args, lang):
    S, T = _graph(args.graph), _graph(args.target)
    cert = orbits.np_certificate(S, T)
    sigma = orbits.decode_certificate(cert, S.n)
    payload = {
        "certificate": str(cert),
        "matrix": orbits.certificate_matrix(cert, S.n),
        "permutation": None if sigma is None else list(sigma.image),
        "tuple": orbits.certificate_tuple(S, T),
        "message": (get_text(lang, "certificate_none") if sigma is None
                    else get_text(lang, "certificate_found", perm=list(sigma.image))),
    }
    return EXIT_OK, payload


def cmd_bounds(args, lang):
    S = _graph(args.graph) if args.graph else None
    report = orbits.bounds_report(args.n, S, args.m, args.r)
    report["message"] = get_text(lang, "bounds_summary", lower=report["legendre"]["lower_bound"],
                                 polya=report.get("polya_count"))
    return EXIT_OK, report


def cmd_constraints(args, lang):
    system = orbits.constraint_system(_graph(args.graph), args.rho, args.d, args.kind)
    return EXIT_OK, system.to_json()


def cmd_prop3_verify(args, lang):
    S = _subset(args.S)
    report = orbits.prop3_literal_verify(args.nvars, S)
    key = "prop3_pass" if report.passed else "prop3_fail"
    payload = {**report.to_json(), "message": get_text(lang, key, n=args.nvars, size=S.bit_count())}
    return (EXIT_OK if report.passed else EXIT_MISMATCH), payload


def cmd_prop4_verify(args, lang):
    S = _subset(args.S)
    passed = orbits.prop4_matrix_verify(args.nvars, S, args.kind)
    return (EXIT_OK if passed else EXIT_MISMATCH), {"nvars": args.nvars, "S": mask_vars(S), "kind": args.kind,
                                                      "passed": passed}


def cmd_resolvent_check(args, lang):
    report = orbits.resolvent_check(_graph(args.graph), args.t_max)
    key = "resolvent_pass" if report.passed else "resolvent_fail"
    payload = {**report.to_json(), "message": get_text(lang, key, t_max=args.t_max)}
    return (EXIT_OK if report.passed else EXIT_MISMATCH), payload


def cmd_det(args, lang):
    A = matrixalg.ExactMatrix.from_json(load_document(args.matrix))
    value = matrixalg.determinant(A, args.method)
    sizes = {"grassmann": matrixalg.grassmann_size(A.n), "vandermonde": matrixalg.vandermonde_size(A.n)}
    return EXIT_OK, {"method": args.method, "value": str(value), "size": sizes.get(args.method),
                     "message": get_text(lang, "det_result", method=args.method)}


def cmd_perm(args, lang):
    A = matrixalg.ExactMatrix.from_json(load_document(args.matrix))
    value = matrixalg.permanent_brute(A) if args.brute else matrixalg.permanent(A)
    return EXIT_OK, {"value": str(value), "message": get_text(lang, "perm_result")}


def cmd_ftree(args, lang):
    M = _matrix_bits(args.matrix)
    value, oracle = matrixalg.f_tree(M, args.m), matrixalg.functional_tree_oracle(M)
    return (EXIT_OK if value == oracle else EXIT_MISMATCH), {
        "value": value, "oracle": oracle, "message": get_text(lang, "matrix_bit", value=value, oracle=oracle)}


def cmd_fcycles(args, lang):
    M = _matrix_bits(args.matrix)
    value, oracle = matrixalg.f_cycles(M, args.m), matrixalg.permutation_matrix_oracle(M)
    return (EXIT_OK if value == oracle else EXIT_MISMATCH), {
        "value": value, "oracle": oracle, "width": matrixalg.cycles_width(len(M)),
        "message": get_text(lang, "matrix_bit", value=value, oracle=oracle)}


def cmd_fdet2(args, lang):
    value = matrixalg.f_det_gf2(args.bits, args.n, args.m)
    oracle = int(matrixalg.gf2_rank(matrixalg.mask_matrix(args.bits, args.n)) == args.n)
    return (EXIT_OK if value == oracle else EXIT_MISMATCH), {
        "value": value, "oracle": oracle, "terms": matrixalg.p_det_gf2(args.n).term_count(),
        "message": get_text(lang, "matrix_bit", value=value, oracle=oracle)}


def cmd_roots(args, lang):
    report = matrixalg.integer_roots_check(args.d, args.tol, args.grid_step)
    if report.passed:
        message = get_text(lang, "roots_pass", d_minus=args.d - 1)
    else:
        message = get_text(lang, "roots_fail", count=len(report.failures))
    return (EXIT_OK if report.passed else EXIT_MISMATCH), {**report.to_json(), "message": message}


def cmd_selftest(args, lang):
    report = selftest.SelfTestRunner(lang=lang).run(args.suite, args.seed)
    failed = sum(1 for r in report.results if not r.passed)
    if report.passed:
        message = get_text(lang, "selftest_pass", suite=args.suite, passed=len(report.results),
                           total=len(report.results))
    else:
        message = get_text(lang, "selftest_fail", suite=args.suite, failed=failed, total=len(report.results))
    return (EXIT_OK if report.passed else EXIT_MISMATCH), {**report.to_json(), "message": message}


def build_parser():
    parser = _Parser(prog="pdeforge", description="Partial differential encodings of Boolean functions")
    parser.add_argument("--lang", choices=["en", "de"], default=None, help="report language")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("interpolate", help="interpolate a truth table")
    p.add_argument("--table", required=True)
    p.add_argument("--method", choices=["sumproduct", "binary"], default="sumproduct")
    p.add_argument("--ring", choices=["q", "gf2"], default="q")
    p.add_argument("--values", action="store_true", help="print the value interpolant instead of the PDE polynomial")
    p.set_defaults(handler=cmd_interpolate)

    p = sub.add_parser("boole", help="Boole encoding of a De Morgan formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(handler=cmd_boole)

    for name, handler in (("pde-eval", cmd_pde_eval), ("pde-verify", cmd_pde_verify)):
        p = sub.add_parser(name, help="evaluate or verify a PDE/PDP")
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--poly")
        group.add_argument("--circuit")
        group.add_argument("--cardinality", help="kind,s,N")
        p.add_argument("--m", type=int, default=None)
        if name == "pde-eval":
            p.add_argument("--T", default="[]", help="JSON list of variable indices")
        else:
            p.add_argument("--table", required=True)
        p.set_defaults(handler=handler)

    p = sub.add_parser("circuit", help="build, expand or size a sum-of-products circuit")
    p.add_argument("action", choices=["build", "expand", "size"])
    p.add_argument("--circuit")
    p.add_argument("--kind", choices=["subset", "superset", "cardinality", "trivial"])
    p.add_argument("--S", default="[]")
    p.add_argument("--N", type=int, default=0)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--card-kind", choices=["le", "ge", "eq"], default="le")
    p.add_argument("--poly")
    p.add_argument("--complement", action="store_true")
    p.add_argument("--raw", action="store_true", help="require a multilinear raw expansion")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_circuit)

    p = sub.add_parser("pdp-search", help="numeric search for a small circuit")
    p.add_argument("--poly", required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=8)
    p.add_argument("--tol", type=float, default=circuit.DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=400)
    p.add_argument("--fixed", help="JSON list of [u, v, w, value]")
    p.set_defaults(handler=cmd_pdp_search)

    p = sub.add_parser("cardinality", help="univariate cardinality programs")
    p.add_argument("--kind", choices=["le", "ge", "eq"], required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--factor", action="store_true")
    p.add_argument("--tol", type=float, default=symmetric.ROOT_TOL)
    p.set_defaults(handler=cmd_cardinality)

    p = sub.add_parser("orbit", help="automorphisms and orbit of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--members", action="store_true")
    p.set_defaults(handler=cmd_orbit)

    p = sub.add_parser("iso-pde", help="isomorphism-variant PDE")
    p.add_argument("--kind", choices=["iso", "sub", "super"], default="iso")
    p.add_argument("--graph", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(handler=cmd_iso_pde)

    p = sub.add_parser("certificate", help="NP certificate of an isomorphism")
    p.add_argument("--graph", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(handler=cmd_certificate)

    p = sub.add_parser("bounds", help="size bounds for isomorphism PDEs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r", type=int, default=None, help="clique parameter for the Turan report")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("constraints", help="orbit-grouped constraint counts")
    p.add_argument("--graph", required=True)
    p.add_argument("--rho", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kind", choices=["iso", "sub", "super"], default="iso")
    p.set_defaults(handler=cmd_constraints)

    p = sub.add_parser("prop3-verify", help="literal orbit list identity")
    p.add_argument("--nvars", type=int, required=True)
    p.add_argument("--S", default="[]")
    p.set_defaults(handler=cmd_prop3_verify)

    p = sub.add_parser("prop4-verify", help="unipotent matrix substitution identity")
    p.add_argument("--nvars", type=int, required=True)
    p.add_argument("--S", default="[]")
    p.add_argument("--kind", choices=["le", "ge", "eq"], default="le")
    p.set_defaults(handler=cmd_prop4_verify)

    p = sub.add_parser("resolvent-check", help="symmetry of resolvent coefficients")
    p.add_argument("--graph", required=True)
    p.add_argument("--t-max", type=int, default=2)
    p.set_defaults(handler=cmd_resolvent_check)

    p = sub.add_parser("det", help="determinant")
    p.add_argument("--matrix", required=True)
    p.add_argument("--method", choices=["grassmann", "vandermonde", "cofactor"], default="grassmann")
    p.set_defaults(handler=cmd_det)

    p = sub.add_parser("perm", help="permanent")
    p.add_argument("--matrix", required=True)
    p.add_argument("--brute", action="store_true")
    p.set_defaults(handler=cmd_perm)

    for name, handler in (("ftree", cmd_ftree), ("fcycles", cmd_fcycles)):
        p = sub.add_parser(name, help="matrix PDE against its oracle")
        p.add_argument("--matrix", required=True)
        p.add_argument("--m", type=int, default=None)
        p.set_defaults(handler=handler)

    p = sub.add_parser("fdet2", help="GF(2) invertibility PDE")
    p.add_argument("--bits", type=int, required=True, help="bit n*i+j is entry (i, j)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(handler=cmd_fdet2)

    p = sub.add_parser("roots-transcendental", help="integer roots of the exponential quotient")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid-step", type=float, default=0.05)
    p.set_defaults(handler=cmd_roots)

    p = sub.add_parser("selftest", help="bundled acceptance checks")
    p.add_argument("--suite", choices=list(selftest.SUITES), default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_selftest)

    return parser


def _print(payload):
    print(json.dumps(payload, sort_keys=True, default=str))


def _error(kind, message):
    _print({"schema": "pdeforge/error/v1", "error": {"type": kind, "message": message}})
    return EXIT_ERROR


def main(argv=None):
    configure_logging()
    settings = get_settings()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return _error("UsageError", str(e))

    lang = args.lang or settings.language
    try:
        code, payload = args.handler(args, lang)
    except SizeGuardError as e:
        logger.warning(f"{args.command}: {e}")
        return _error(type(e).__name__, get_text(lang, "error_guard", detail=str(e)))
    except PdeforgeError as e:
        logger.warning(f"{args.command}: {e}")
        return _error(type(e).__name__, get_text(lang, "error_input", detail=str(e)))
    except (ValueError, KeyError, TypeError) as e:
        logger.warning(f"{args.command}: bad input: {e}")
        return _error("InputFormatError", get_text(lang, "error_input", detail=str(e)))

    _print({"schema": f"pdeforge/{args.command}/v1", **payload})
    return code


def run():
    sys.exit(main())
