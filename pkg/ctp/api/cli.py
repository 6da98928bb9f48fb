from __future__ import annotations
import argparse
from fractions import Fraction
import json
import sys
from typing import Any, Dict, List, Mapping, Optional, Sequence
from ctp.api.pathexpr import (AnyDomain, ParsedPath, RealField, derive_diagram, formula_flavor,
                              get_domain, load_parameter_diagram, parse_path_expr)
from ctp.logic.formula import Atom
from ctp.logic.parser import parse
from ctp.logic.reduce import linear_form
from ctp.oracle.adversary import (get_stub, decision_stubs, or_issue_adversary,
                                  product_units_adversary, skolem_stubs)
from ctp.qe.decide import DecisionContext, UnitGroup, tree_decide
from ctp.qe.skolem import skolem
from ctp.structure.reals import decide_qf_real
from ctp.structure.zp_additive import (AllSolutions, LinearEquation, NoSolution, Unique,
                                       from_integer, get_presentation, solve_linear)
from ctp.structure.zp_units import iso_backward
from ctp.utils.config import config
from ctp.utils.datastruct import Label, Witness
from ctp.utils.errors import CTPError, PathExprTypeError
from ctp.utils.misc import logger, natural_key

__all__ = ["build_arg_parser", "run", "main"]

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2

STRUCTURES = ["zp+", "zpx", "zhat", "prod", "real"]

def build_arg_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="Log the decision steps to stderr, repeat for more detail.")
    common.add_argument("--json", action="store_true", help="Print one JSON object.")

    parser = argparse.ArgumentParser(
        prog="ctp", description="Decide formulas and compute witnesses over computable tree "
        "presentations of Z_p, Z_p^x, Zhat, their products and the reals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_parameters(p: argparse.ArgumentParser):
        p.add_argument("--structure", choices=STRUCTURES, default="zp+")
        p.add_argument("--p", type=int, action="append", default=[],
                       help="The prime, repeated for the factors of prod.")
        p.add_argument("--param", action="append", default=[], metavar="NAME=EXPR",
                       help="A parameter given by a path expression, e.g. c1=rat(1,2).")
        p.add_argument("--diagram", default=None, metavar="FILE",
                       help="The diagram of the parameters, derived from them if not given.")
        p.add_argument("--levels", type=int, default=None,
                       help=f"Number of labels printed (default {config.DEFAULT_LEVELS}).")
        p.add_argument("--fuel", type=int, default=None,
                       help=f"Level budget of the searches (default {config.DEFAULT_FUEL}).")

    decide = sub.add_parser("decide", parents=[common],
                         help="Decide a formula at the parameters.")
    with_parameters(decide)
    decide.add_argument("--formula", required=True)

    skol = sub.add_parser("skolem", parents=[common],
                         help="Witnesses of the leading existential block.")
    with_parameters(skol)
    skol.add_argument("--formula", required=True)

    ev = sub.add_parser("eval", parents=[common],
                         help="Print the labels of a path expression.")
    with_parameters(ev)
    ev.add_argument("expr")

    solve = sub.add_parser("solve", parents=[common],
                         help="Solve a linear equation in the unknown G over Z_p.")
    with_parameters(solve)
    solve.add_argument("--equation", required=True, help='e.g. "F = 2*G"')

    iso = sub.add_parser("iso", parents=[common],
                         help="Decompose a unit of Z_p^x into (x, y).")
    iso.add_argument("--p", type=int, action="append", default=[])
    iso.add_argument("--levels", type=int, default=None)
    iso.add_argument("expr", help="A unit expression, e.g. int(3) or unit(5; 1, int(2)).")

    demo = sub.add_parser("demo", parents=[common],
                         help="Run an adversary against purported procedures.")
    demo.add_argument("which", choices=["or-issue", "product-units"])
    demo.add_argument("--p", type=int, default=2, help="The prime of the or-issue demo.")
    demo.add_argument("--use", type=int, default=3, help="Number of labels a stub reads.")
    demo.add_argument("--stub", default=None, help="One stub of the library, all if not given.")
    return parser

############### output ###############
def _label_text(label: Label) -> str:
    return str(label)

def _label_json(label: Label) -> Any:
    return str(label) if isinstance(label, Fraction) else label

def _levels(args: argparse.Namespace) -> int:
    return config.DEFAULT_LEVELS if args.levels is None else args.levels

class _Output(object):
    # text lines or one JSON object, printed once at the end
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: List[str] = []
        self.obj: Dict[str, Any] = {}

    def line(self, s: str):
        self.lines.append(s)

    def set(self, key: str, value: Any):
        self.obj[key] = value

    def flush(self):
        if self.as_json:
            print(json.dumps(self.obj, sort_keys=True))
        else:
            for s in self.lines:
                print(s)

############### parameters ###############
def _read_params(args: argparse.Namespace, domain: AnyDomain) -> Dict[str, ParsedPath]:
    params: Dict[str, ParsedPath] = {}
    for item in args.param:
        name, sep, expr = item.partition("=")
        name = name.strip()
        if sep == "" or not name.isidentifier():
            raise PathExprTypeError(f"--param expects NAME=EXPR, got {item!r}")
        params[name] = parse_path_expr(expr, domain)
    return params

def _context(args: argparse.Namespace, domain: AnyDomain, params: Mapping[str, ParsedPath]):
    names = sorted(params, key=natural_key)
    if args.diagram is not None:
        diagram = load_parameter_diagram(domain, args.diagram, names)
    else:
        diagram = derive_diagram(domain, params)
    paths = {k: v.path for (k, v) in params.items()}
    return paths, diagram

############### commands ###############
def _cmd_decide(args: argparse.Namespace, out: _Output) -> int:
    domain = get_domain(args.structure, args.p)
    params = _read_params(args, domain)
    f = parse(args.formula, formula_flavor(domain))
    paths, diagram = _context(args, domain, params)
    if isinstance(domain, RealField):
        verdict = decide_qf_real(f, paths, diagram, args.fuel)  # type: ignore
    else:
        verdict = tree_decide(DecisionContext(domain, paths, diagram, args.fuel), f)  # type: ignore
    logger.log(f"decide: {f} is {verdict}", vlevel=0)
    out.line("true" if verdict else "false")
    out.set("verdict", verdict)
    return EXIT_TRUE if verdict else EXIT_FALSE

def _cmd_skolem(args: argparse.Namespace, out: _Output) -> int:
    domain = get_domain(args.structure, args.p)
    params = _read_params(args, domain)
    f = parse(args.formula, formula_flavor(domain))
    paths, diagram = _context(args, domain, params)
    res = skolem(DecisionContext(domain, paths, diagram, args.fuel), f)  # type: ignore
    n = _levels(args)
    witness = {}
    for (var, path) in zip(res.variables, res.paths):
        labels = path.prefix(n)
        text = ",".join(_label_text(l) for l in labels)
        out.line(text if len(res.variables) == 1 else f"{var}: {text}")
        witness[var] = [_label_json(l) for l in labels]
    if not res.applicable:
        out.line("not applicable: the formula is false")
    out.set("witness", witness)
    out.set("applicable", res.applicable)
    return EXIT_TRUE if res.applicable else EXIT_FALSE

def _cmd_eval(args: argparse.Namespace, out: _Output) -> int:
    domain = get_domain(args.structure, args.p)
    labels = parse_path_expr(args.expr, domain).path.prefix(_levels(args))
    out.line(",".join(_label_text(l) for l in labels))
    out.set("labels", [_label_json(l) for l in labels])
    return EXIT_TRUE

def _cmd_solve(args: argparse.Namespace, out: _Output) -> int:
    if args.structure != "zp+":
        raise PathExprTypeError("solve works over zp+")
    domain = get_domain(args.structure, args.p)
    p = args.p[0]
    params = _read_params(args, domain)
    eq = parse(args.equation, "additive")
    if not isinstance(eq, Atom):
        raise PathExprTypeError(f"{args.equation!r} is not an equation")
    a, t = linear_form(eq, ["G"])
    names = sorted(t.variables, key=natural_key)
    missing = [k for k in names if k not in params]
    if len(missing) > 0:
        raise PathExprTypeError(f"No value for the parameter(s) {missing}")
    res = solve_linear(LinearEquation(tuple(t.coefficient(k) for k in names), a[0]),
                       [params[k].path for k in names], p=p)  # type: ignore
    n = _levels(args)
    if isinstance(res, NoSolution):
        out.line("no solution")
        out.set("outcome", "none")
        return EXIT_FALSE
    if isinstance(res, Unique):
        labels = res.solution.prefix(n)
        out.line(",".join(_label_text(l) for l in labels))
        out.set("outcome", "unique")
        out.set("labels", list(labels))
        return EXIT_TRUE
    assert isinstance(res, AllSolutions)
    refuted = isinstance(res.refute(args.fuel), Witness)
    out.line("no solution" if refuted else "every G, unless the left hand side is nonzero")
    out.set("outcome", "none" if refuted else "all")
    return EXIT_FALSE if refuted else EXIT_TRUE

def _cmd_iso(args: argparse.Namespace, out: _Output) -> int:
    domain = get_domain("zpx", args.p)
    assert isinstance(domain, UnitGroup)
    w = parse_path_expr(args.expr, domain).path
    u = iso_backward(w, domain.p)
    n = _levels(args)
    labels = w.prefix(n)
    ys = u.y.prefix(n)
    out.line("labels: " + ",".join(_label_text(l) for l in labels))
    out.line(f"x: {u.x}")
    out.line("y: " + ",".join(_label_text(l) for l in ys))
    out.set("labels", list(labels))
    out.set("x", u.x)
    out.set("y", list(ys))
    return EXIT_TRUE

def _cmd_demo(args: argparse.Namespace, out: _Output) -> int:
    certificates = []
    if args.which == "or-issue":
        stubs = [get_stub("skolem", args.stub, args.use, args.p)] if args.stub is not None \
            else skolem_stubs(args.p, args.use)
        presentation = get_presentation(args.p)
        P = from_integer(args.p, 0)
        for stub in stubs:
            c = or_issue_adversary(stub, P, presentation)
            where = f"wrong at (P,R), level {c.level}" if c.instance == "(P,R)" else \
                "agrees with P, wrong at (P,P)"
            out.line(f"{c.stub} (use {stub.use}): P = {_prefix_text(c.p_prefix)} "
                     f"R = {_prefix_text(c.r_prefix)} output = {_prefix_text(c.output_prefix)} "
                     f"{where}")
            certificates.append({"stub": c.stub, "instance": c.instance, "level": c.level,
                                 "P": list(c.p_prefix), "R": list(c.r_prefix),
                                 "output": list(c.output_prefix)})
    else:
        stubs = [get_stub("decide", args.stub, args.use)] if args.stub is not None \
            else decision_stubs(args.use)
        for stub in stubs:
            d = product_units_adversary(stub)
            out.line(f"{d.stub} (use {stub.use}): answers {str(d.answer).lower()}, "
                     f"p = {d.prime}, y = {d.generator}, true at f: {str(d.truth_f).lower()}, "
                     f"true at f': {str(d.truth_f_altered).lower()}, wrong at {d.instance}")
            certificates.append({"stub": d.stub, "answer": d.answer, "instance": d.instance,
                                 "prime": d.prime, "generator": d.generator,
                                 "truth_f": d.truth_f, "truth_f_altered": d.truth_f_altered})
    out.set("certificates", certificates)
    return EXIT_TRUE

def _prefix_text(labels: Sequence[Label], n: int = 8) -> str:
    return ",".join(_label_text(l) for l in labels[:n]) + ",..."

############### entry points ###############
def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line and return its exit code: 0 for a true verdict or
    a completed command, 1 for a false verdict, 2 for an error.
    """
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_TRUE
    config.VERBOSE = args.verbose
    out = _Output(args.json)
    commands = {
        "decide": _cmd_decide,
        "skolem": _cmd_skolem,
        "eval": _cmd_eval,
        "solve": _cmd_solve,
        "iso": _cmd_iso,
        "demo": _cmd_demo,
    }
    try:
        code = commands[args.command](args, out)
    except (CTPError, ValueError, OSError) as e:
        if args.json:
            print(json.dumps({"error": f"{type(e).__name__}: {e}"}, sort_keys=True))
        else:
            print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
    out.flush()
    return code

def main() -> int:
    return run(sys.argv[1:])

if __name__ == "__main__":
    sys.exit(main())
