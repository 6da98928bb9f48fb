from ctp.api.pathexpr import derive_diagram, get_domain, parse_path_expr
from ctp.logic.parser import parse
from ctp.qe.decide import DecisionContext, tree_decide

# (structure, primes, formula, parameters)
CORPUS = [
    ("zp+", [3], "ALL F. EX G. F = 2*G", {}),
    ("zp+", [2], "ALL F. EX G. F = 2*G", {}),
    ("zp+", [3], "EX G. c1 = 2*G & G != c2", {"c1": "int(1)", "c2": "int(2)"}),
    ("zp+", [2], "ALL F. EX G. EX H. F = 4*G + 2*H | F = G", {}),
    ("zhat", [], "EX G. c = 2*G", {"c": "int(6)"}),
    ("zpx", [5], "EX G. c = G*G", {"c": "int(4)"}),
    ("prod", [2, 3], "ALL F. EX G. F = 2*G", {}),
]

def run_decide(structure, primes, formula, params):
    domain = get_domain(structure, primes)
    parsed = {k: parse_path_expr(v, domain) for (k, v) in params.items()}
    ctx = DecisionContext(domain, {k: v.path for (k, v) in parsed.items()},
                          derive_diagram(domain, parsed))
    return tree_decide(ctx, parse(formula, "multiplicative" if structure == "zpx" else "additive"))

def cmd():
    # change the command below to the commands you want to profile
    for item in CORPUS:
        run_decide(*item)

if __name__ == "__main__":
    import time

    import argparse
    parser = argparse.ArgumentParser()
    parser.add_argument("--profiler", action="store_const", default=False, const=True)
    args = parser.parse_args()

    if args.profiler:
        import pprofile
        prof = pprofile.Profile()
        with prof:
            cmd()
        prof.print_stats()
    else:
        t0 = time.time()
        cmd()
        print("Elapsed time: %fs" % (time.time() - t0))
