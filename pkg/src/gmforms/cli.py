"""Command-line front end.

Every command prints one JSON document (sorted keys) and exits with 0 for a
true verdict, 1 for a false verdict and 2 for usage, parse or configuration
errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .comodules import (
    NotAdmissibleError,
    build_comodule,
    comodule_from_json,
    morphism_check,
    point_action,
    quotient_comodule,
    verify_comodule,
)
from .expr import ParseError
from .groupscheme import generators, make_point, parse_ring, verify_hopf_axioms
from .laurent import (
    l_functional,
    parse_laurent,
    parse_laurent2,
    s_infinity_membership,
    s_membership,
    s_tensor_membership,
)
from .lattices import admissible, pair_from_json, pair_to_json
from .linalg import SingularMatrixError
from .randgen import random_member
from .scalars import KINDS, BackendConfig, UnsupportedError, make_field
from .selftest import SUITES, run_selftest
from .springer import (
    DEFAULT_CEILING,
    CeilingExceededError,
    UnderdeterminedFitError,
    WindowSpec,
    enumerate_stable_lattices,
    polynomiality_check,
)


class UsageError(ValueError):
    pass


# --- argument parsing ----------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=KINDS, default="rational-padic")
    common.add_argument("--p", type=int, default=2, help="prime for rational-padic")
    common.add_argument("--q", type=int, default=2, help="field size for ratfunc-fq")
    common.add_argument("--k", type=int, default=1, help="f = pi^k")
    common.add_argument("--in", dest="infile", metavar="FILE", help="JSON input file")
    common.add_argument("--json", dest="inline", metavar="TEXT", help="inline JSON input")
    common.add_argument("--out", dest="outfile", metavar="FILE", help="write JSON here")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--ceiling", type=int, default=DEFAULT_CEILING)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="gmforms", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("membership", parents=[common], help="decide membership in S_k, S_k (x) S_k or S_inf")
    p.add_argument("--laurent", help="element of F[T, T^-1], or of F[T1, T2] with --ring tensor")
    p.add_argument("--ring", choices=("S_k", "tensor", "S_inf"), default="S_k")

    p = sub.add_parser("express", parents=[common], help="write a member in the generators T^-1, (T-1)/f")
    p.add_argument("--laurent")

    p = sub.add_parser("hopf-verify", parents=[common], help="check the Hopf axioms on samples")
    p.add_argument("--laurent", action="append", default=[], help="sample (repeatable)")
    p.add_argument("--samples", type=int, default=10, help="random members added to the generators")

    sub.add_parser("admissible", parents=[common], help="decide C_n M in M for all n")

    p = sub.add_parser("comodule", help="comodules of admissible pairs")
    csub = p.add_subparsers(dest="action", required=True)
    csub.add_parser("build", parents=[common])
    csub.add_parser("verify", parents=[common])
    csub.add_parser("act", parents=[common])
    csub.add_parser("quotient", parents=[common])

    p = sub.add_parser("springer", help="C-stable lattices over F_q(e)")
    ssub = p.add_subparsers(dest="action", required=True)
    for name in ("enum", "count", "polyfit"):
        sp = ssub.add_parser(name, parents=[common])
        sp.add_argument("--degrees", help="comma-separated degrees")
        sp.add_argument("--a", type=int, help="window radius")
        sp.add_argument("--index", type=int)
        if name == "polyfit":
            sp.add_argument("--qs", default="2,3,5,7", help="comma-separated primes")

    p = sub.add_parser("selftest", parents=[common], help="run the randomized property suites")
    p.add_argument("--suite", action="append", choices=sorted(SUITES))
    return parser


# --- helpers -------------------------------------------------------------------------


def _field(args):
    if args.backend == "rational-padic":
        cfg = BackendConfig(args.backend, p=args.p, k=args.k)
    elif args.backend == "ratfunc-fq":
        cfg = BackendConfig(args.backend, q=args.q, k=args.k)
    else:
        cfg = BackendConfig(args.backend, k=args.k)
    return make_field(cfg)


def _payload(args, required: bool = True):
    if args.infile and args.inline:
        raise UsageError("use only one of --in and --json")
    if args.infile:
        with open(args.infile, encoding="utf-8") as fh:
            text = fh.read()
    elif args.inline:
        text = args.inline
    elif required:
        raise UsageError("this command needs JSON input via --in FILE or --json TEXT")
    else:
        return {}
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("JSON input must be an object")
    return data


def _laurent_text(args, data) -> str:
    text = args.laurent if args.laurent is not None else data.get("laurent")
    if text is None:
        raise UsageError("give --laurent TEXT or a JSON object with a 'laurent' field")
    return text


def _ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# --- commands ------------------------------------------------------------------------


def cmd_membership(args):
    fld = _field(args)
    data = _payload(args, required=args.laurent is None)
    text = _laurent_text(args, data)
    ring = data.get("ring", args.ring)
    if ring == "tensor":
        verdict = s_tensor_membership(parse_laurent2(text, fld), fld)
        return verdict.to_json(), verdict.member
    g = parse_laurent(text, fld)
    if ring == "S_inf":
        member = s_infinity_membership(g, fld)
        return {"member": member, "sum": fld.format(l_functional(g, 0, fld))}, member
    verdict = s_membership(g, fld)
    return verdict.to_json(), verdict.member


def cmd_express(args):
    fld = _field(args)
    data = _payload(args, required=args.laurent is None)
    verdict = s_membership(parse_laurent(_laurent_text(args, data), fld), fld)
    return verdict.to_json(), verdict.member


def cmd_hopf(args):
    fld = _field(args)
    rng = random.Random(args.seed)
    samples = generators(fld) + [parse_laurent(t, fld) for t in args.laurent]
    samples += [random_member(fld, rng) for _ in range(args.samples)]
    report = verify_hopf_axioms(fld, samples)
    report["config"] = fld.cfg.to_json()
    return report, report["ok"]


def cmd_admissible(args):
    fld = _field(args)
    space, m = pair_from_json(_payload(args), fld)
    verdict = admissible(space, m, fld)
    out = verdict.to_json(fld)
    out["pair"] = pair_to_json(space, m)
    return out, verdict.admissible


def _build(args, fld):
    space, m = pair_from_json(_payload(args), fld)
    return build_comodule(space, m, fld)


def cmd_comodule(args):
    fld = _field(args)
    if args.action == "build":
        try:
            cm = _build(args, fld)
        except NotAdmissibleError as exc:
            return {"admissible": False, "witness": exc.verdict.to_json(fld)["witness"]}, False
        report = verify_comodule(cm)
        out = cm.to_json()
        out.update({"admissible": True, "axioms": report["axioms"]})
        return out, report["ok"]
    if args.action == "verify":
        data = _payload(args)
        report = verify_comodule(comodule_from_json(data, fld))
        return report, report["ok"]
    if args.action == "act":
        data = _payload(args)
        space, m = pair_from_json(data, fld)
        cm = build_comodule(space, m, fld)
        pt = data.get("point")
        if not isinstance(pt, dict):
            raise UsageError("comodule act needs a 'point' object with t, x and ring")
        ring = parse_ring(pt.get("ring", "O"))
        point = make_point(fld.parse(str(pt["t"])), fld.parse(str(pt["x"])), ring, fld)
        rho = point_action(cm, point)
        return {"point": point.to_json(fld), "matrix": [[fld.format(x) for x in row] for row in rho]}, True
    # quotient
    data = _payload(args)
    try:
        src = pair_from_json(data["source"], fld)
        tgt = pair_from_json(data["target"], fld)
        phi = [[fld.parse(str(x)) for x in row] for row in data["phi"]]
    except KeyError as exc:
        raise UsageError(f"quotient input needs 'source', 'target' and 'phi' (missing {exc})") from None
    for pair, name in ((src, "source"), (tgt, "target")):
        verdict = admissible(*pair, fld)
        if not verdict.admissible:
            return {"admissible": False, "pair": name, "witness": verdict.to_json(fld)["witness"]}, False
    mor = morphism_check(phi, src, tgt, fld)
    if not mor:
        return {"morphism": False, "reason": mor.reason, "detail": mor.detail}, False
    tc = quotient_comodule(mor, fld)
    out = tc.to_json()
    out["morphism"] = True
    return out, tc.report["ok"]


def _window(args, q: int) -> WindowSpec:
    data = _payload(args, required=False)
    degrees = _ints(args.degrees) if args.degrees else tuple(data.get("degrees", ()))
    a = args.a if args.a is not None else data.get("a")
    if not degrees or a is None:
        raise UsageError("springer commands need --degrees and --a (or JSON with degrees and a)")
    index = args.index if args.index is not None else data.get("index")
    k = data.get("k", args.k)
    return WindowSpec(degrees, k, a, q, index)


def cmd_springer(args):
    if args.action == "polyfit":
        qs = _ints(args.qs)
        template = _window(args, qs[0])
        report = polynomiality_check(template, qs, args.ceiling)
        return report, report["ok"]
    spec = _window(args, args.q)
    found = enumerate_stable_lattices(spec, args.ceiling)
    out = found.to_json()
    if args.action == "count":
        out.pop("lattices")
    return out, True


def cmd_selftest(args):
    report = run_selftest(args.seed, args.suite)
    return report, report["ok"]


COMMANDS = {
    "membership": cmd_membership,
    "express": cmd_express,
    "hopf-verify": cmd_hopf,
    "admissible": cmd_admissible,
    "comodule": cmd_comodule,
    "springer": cmd_springer,
    "selftest": cmd_selftest,
}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(args, obj) -> None:
    text = dumps(obj) + "\n"
    if getattr(args, "outfile", None):
        with open(args.outfile, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, ok = COMMANDS[args.command](args)
    except ParseError as exc:
        _emit(args, {"error": "parse", "message": str(exc), "position": exc.pos})
        return 2
    except (UsageError, UnsupportedError, CeilingExceededError, UnderdeterminedFitError,
            SingularMatrixError, OSError) as exc:
        _emit(args, {"error": type(exc).__name__, "message": str(exc)})
        return 2
    except (ValueError, TypeError, KeyError) as exc:
        _emit(args, {"error": "invalid input", "message": str(exc)})
        return 2
    _emit(args, result)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
