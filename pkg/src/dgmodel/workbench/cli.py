"""Command line front end.  Every command prints a JSON report on stdout.

Exit codes: 0 when the checked property holds, 1 when it fails, 2 on bad
input (unreadable files, unknown names, violated preconditions).
"""

from __future__ import annotations

import argparse
import json
import sys

from .. import adjoin as adj
from .. import dgcore, model
from ..adjunction import IdentityInstance, WindowTooSmall, verify_theorem_hypothesis
from ..dgcore import PreconditionViolated
from ..graded import DgModule, HomogeneousMap
from ..semifree import SemifreeAlgebra, SemifreeInstance
from .fileio import InputError, algebra_json, load, module_json
from .generate import field_named
from .suites import SUITES, run_axiom_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class Failed(Exception):
    """Property failure carrying a report."""

    def __init__(self, report):
        super().__init__("property failure")
        self.report = report


def _window(text: str):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like lo:hi") from None
    if hi < lo:
        raise argparse.ArgumentTypeError("window top is below its bottom")
    return lo, hi


def _matrices(f: HomogeneousMap) -> dict:
    return {str(z): [[f.field.format(x) for x in r] for r in b.rows] for z, b in f.blocks.items()}


def _module_report(M: DgModule) -> dict:
    mods, diffs = module_json(M, M.indices() or ["*"])
    return {"ranks": {str(z): n for z, n in M.ranks.items()}, "modules": mods, "differentials": diffs}


def _instance(name: str, F, window):
    if name == "identity":
        return IdentityInstance()
    if name == "tensor":
        return SemifreeInstance(F, window)
    raise InputError(f"unknown instance {name!r}")


def _load(args, inst=None):
    resolve = inst.U_ob if isinstance(inst, SemifreeInstance) else None
    return load(args.file, resolve)


# --- commands ---------------------------------------------------------------

def cmd_homology(args):
    doc = _load(args)
    X = doc.module(args.module)
    H = dgcore.homology(X)
    reps = {str(z): [[X.field.format(x) for x in r] for r in H[z].reps] for z in X.degrees() if H[z].dim}
    return {"module": args.module, "dims": {str(z): n for z, n in H.dims().items()},
            "representatives": reps, "acyclic": H.is_zero()}


def cmd_cone(args):
    doc = _load(args)
    alpha = doc.map(args.map)
    if not dgcore.is_chain_map(alpha):
        raise PreconditionViolated(f"{args.map} is not a chain map")
    cb = dgcore.cone(alpha)
    H = dgcore.homology(cb.module)
    return {"map": args.map, "cone": _module_report(cb.module),
            "homology": {str(z): n for z, n in H.dims().items()},
            "acyclic": H.is_zero(), "quasi_iso": dgcore.is_quasi_iso(alpha)}


def cmd_adjoin(args):
    F = None
    inst = None
    if args.instance == "tensor":
        # the field is only known after reading; peek at it
        F = load(args.file).field
        inst = SemifreeInstance(F, args.window)
    else:
        inst = IdentityInstance()
    doc = _load(args, inst)
    M = doc.module(args.M)
    alpha = doc.map(args.alpha)
    A = doc.algebra(args.A) if args.instance == "tensor" else doc.module(args.A)
    res = adj.adjoin(inst, A, M, alpha.with_ends(source=M))
    ok = dgcore.map_boundary(res.theta) == res.alpha @ inst.U_mor(res.jbar)
    out = {"instance": args.instance, "theta_boundary_ok": ok,
           "theta": {"degree": -1, "matrices": _matrices(res.theta)}}
    if args.instance == "tensor":
        out["D"] = algebra_json(res.D)
        out["new_generators"] = {f"{b}@{z}": g for (z, b), g in res.att.data.items()}
    else:
        out["D"] = _module_report(res.D)
        out["jbar"] = {"matrices": _matrices(res.jbar)}
    if not ok:
        raise Failed(out)
    return out


def cmd_factor(args):
    inst = IdentityInstance()
    doc = _load(args)
    f = doc.map(args.map)
    if not dgcore.is_chain_map(f):
        raise PreconditionViolated(f"{args.map} is not a chain map")
    if args.mode == "tc-f":
        cert = model.factor_trivcof_fib(inst, f)
        out = {"mode": "tc-f", "ok": cert.ok, "Z": _module_report(cert.Z),
               "jbar": cert.jbar_report.as_dict(), "p": cert.p_report.as_dict(),
               "composite_ok": cert.composite_ok,
               "jbar_matrices": _matrices(cert.jbar), "p_matrices": _matrices(cert.p)}
        if not cert.ok:
            raise Failed(out)
        return out
    exhausted = False
    try:
        cert = model.factor_cof_trivfib(inst, f, args.stages, args.min_stages)
    except model.StagesExhausted as e:
        cert, exhausted = e.certificate, True
    out = {"mode": "c-tf", "ok": cert.ok, "exhausted": exhausted, "early_stop": cert.early_stop,
           "stages": [{"N_ranks": {str(z): n for z, n in s.N_ranks.items()},
                       "D_ranks": {str(z): n for z, n in s.D.ranks.items()},
                       "null_homotopic": s.null_homotopic, "composite_ok": s.composite_ok,
                       "q_surjective": s.q_surjective, "connecting_zero": s.connecting_zero}
                      for s in cert.stages],
           "final": cert.final_report.as_dict()}
    if not cert.ok:
        raise Failed(out)
    return out


def _require_source(b: HomogeneousMap, D: DgModule, what: str):
    if not b.source.same_graded(D):
        raise InputError(f"{what} must start at the constructed object "
                         f"{json.dumps(_module_report(D), ensure_ascii=False)}")
    return b.with_ends(source=D)


def cmd_lift(args):
    inst = IdentityInstance()
    doc = _load(args)
    parts = args.square.split(",")
    if len(parts) != 4:
        raise InputError("--square needs four comma separated names i,a,b,g")
    i_name, a_name, b_name, g_name = parts
    a, g = doc.map(a_name), doc.map(g_name)
    b = doc.map(b_name)
    if args.kind == "tcof-fib":
        N = doc.module(i_name)
        pkg = model.standard_trivial_cofibration(inst, a.source, N)
        b = _require_source(b, pkg.res.D, "b")
        c = model.lift_standard_trivcof_vs_fib(inst, pkg, g, a.with_ends(source=pkg.res.A), b)
        i = pkg.jbar
    else:
        if ":" not in i_name:
            raise InputError("for cof-tfib the first entry is M:alpha")
        m_name, alpha_name = i_name.split(":", 1)
        M, alpha = doc.module(m_name), doc.map(alpha_name)
        res = adj.adjoin(inst, alpha.target, M, alpha.with_ends(source=M))
        b = _require_source(b, res.D, "b")
        c = model.lift_standard_cof_vs_trivfib(inst, model.elementary_witness(res), g,
                                               a.with_ends(source=res.A), b)
        i = res.jbar
    upper = i @ c == a.with_ends(source=i.source)
    lower = c @ g == b
    out = {"kind": args.kind, "upper_triangle": upper, "lower_triangle": lower,
           "filler": {"matrices": _matrices(c)}}
    if not (upper and lower):
        raise Failed(out)
    return out


def cmd_retract(args):
    inst = IdentityInstance()
    doc = _load(args)
    f = doc.map(args.map)
    filler = doc.map(args.filler) if args.filler else None
    pres = model.retract_presentation(inst, f, filler=filler)
    ok = pres.check(inst, f)
    out = {"map": args.map, "ok": ok, "via": pres.source,
           "jbar": {"matrices": _matrices(pres.jbar)}, "p": {"matrices": _matrices(pres.p)},
           "w": {"matrices": _matrices(pres.w)}, "Z": _module_report(pres.factorization.Z)}
    if not ok:
        raise Failed(out)
    return out


def cmd_check_axioms(args):
    fields = [f for spec in args.field for f in spec.split(",")]
    for f in fields:
        field_named(f)
    instances = [] if args.instances == "" else args.instances.split(",")
    suites = args.suites.split(",") if args.suites else None
    for s in suites or ():
        if s not in SUITES:
            raise InputError(f"unknown suite {s!r}; known: {', '.join(SUITES)}")
    report = run_axiom_suite(args.trials, args.seed, fields, instances, suites, args.jobs)
    out = report.as_dict(timing=not args.no_timing)
    if not report.ok:
        raise Failed(out)
    return out


def cmd_verify_hypothesis(args):
    F = field_named(args.field)
    if args.file:
        F = load(args.file).field
    inst = _instance(args.instance, F, (args.window[0], args.window[1] + 1))
    if args.file and args.object:
        doc = _load(args, inst)
        A = doc.algebra(args.object) if args.instance == "tensor" else doc.module(args.object)
    elif args.instance == "tensor":
        A = SemifreeAlgebra(F, [], {})
    else:
        A = DgModule(F, {}, None, {})
    cert = verify_theorem_hypothesis(inst, A, args.index, args.p, args.window)
    out = cert.as_dict()
    if not cert.passed:
        raise Failed(out)
    return out


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dgmodel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homology", help="homology of a module")
    s.add_argument("file")
    s.add_argument("module")
    s.set_defaults(run=cmd_homology)

    s = sub.add_parser("cone", help="mapping cone of a chain map")
    s.add_argument("file")
    s.add_argument("map")
    s.set_defaults(run=cmd_cone)

    s = sub.add_parser("adjoin", help="adjoin variables A<M, alpha>")
    s.add_argument("file")
    s.add_argument("--A", required=True)
    s.add_argument("--M", required=True)
    s.add_argument("--alpha", required=True)
    s.add_argument("--instance", choices=("identity", "tensor"), default="identity")
    s.add_argument("--window", type=_window, default=(0, 6))
    s.set_defaults(run=cmd_adjoin)

    s = sub.add_parser("factor", help="model-structure factorizations")
    s.add_argument("file")
    s.add_argument("map")
    s.add_argument("--mode", choices=("tc-f", "c-tf"), required=True)
    s.add_argument("--stages", type=int, default=4)
    s.add_argument("--min-stages", type=int, default=0)
    s.set_defaults(run=cmd_factor)

    s = sub.add_parser("lift", help="diagonal filler of a commuting square")
    s.add_argument("file")
    s.add_argument("--square", required=True, help="i,a,b,g (i is N, or M:alpha for cof-tfib)")
    s.add_argument("--kind", choices=("tcof-fib", "cof-tfib"), required=True)
    s.set_defaults(run=cmd_lift)

    s = sub.add_parser("retract", help="weak equivalence as a retract")
    s.add_argument("file")
    s.add_argument("map")
    s.add_argument("--filler", help="map w with f·w = j̄ and w·p = 1")
    s.set_defaults(run=cmd_retract)

    s = sub.add_parser("check-axioms", help="run the randomized property suites")
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--field", action="append", default=None, help="Q, F5, graded (repeatable)")
    s.add_argument("--instances", default="identity,tensor")
    s.add_argument("--suites", default=None, help=f"comma separated subset of {', '.join(SUITES)}")
    s.add_argument("--no-timing", action="store_true", help="omit wall-clock times")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(run=cmd_check_axioms)

    s = sub.add_parser("verify-hypothesis", help="certificate for U(inj2) being a quasi-isomorphism")
    s.add_argument("--instance", choices=("identity", "tensor"), required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--window", type=_window, required=True)
    s.add_argument("--index", default="*")
    s.add_argument("--field", default="Q")
    s.add_argument("--file")
    s.add_argument("--object")
    s.set_defaults(run=cmd_verify_hypothesis)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if getattr(args, "field", None) is None and args.command == "check-axioms":
        args.field = ["Q"]
    try:
        out = args.run(args)
        code = EXIT_OK
    except Failed as e:
        out, code = e.report, EXIT_FAIL
    except (InputError, PreconditionViolated, WindowTooSmall, model.NoFillerAvailable, ValueError) as e:
        out, code = {"error": type(e).__name__, "message": str(e)}, EXIT_INPUT
    json.dump(out, sys.stdout, indent=2, sort_keys=True, ensure_ascii=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
