"""Command-line front end.  Output is JSON with sorted keys.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import catprop, fmod, groupside, homresolve, serialize, verify
from .exactlin import fraction_str
from .operads import (Operad, OperadError, PresentationParseError, build_operad,
                      builtin, default_mu, parse_presentation)

NMAX_ENV = "OPFUNCTORS_NMAX_CAP"
DEFAULT_CAP = 7


class UsageError(Exception):
    pass


def nmax_cap() -> int:
    raw = os.environ.get(NMAX_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{NMAX_ENV} must be an integer, got {raw!r}") from None


def check_bound(n: int, what: str = "--max") -> int:
    cap = nmax_cap()
    if n < 0:
        raise UsageError(f"{what} must be non-negative")
    if n > cap:
        raise UsageError(f"{what} {n} exceeds the cap {cap} (set {NMAX_ENV} to raise it)")
    return n


# ---------------------------------------------------------------- loading

def load_operad(spec: str, nmax: int) -> Operad:
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
        name = os.path.splitext(os.path.basename(spec))[0]
        return build_operad(parse_presentation(text, nmax=nmax, name=name))
    try:
        return builtin(spec, nmax)
    except OperadError as exc:
        raise UsageError(str(exc)) from None


def select_mu(op: Operad, selector: str):
    if selector in ("generator", "product", "default"):
        return default_mu(op)
    gens = getattr(op, "presentation", None)
    if gens is not None and selector in dict(gens.generators):
        return op.generator(selector)
    raise UsageError(f"unknown operation selector {selector!r}")


def load_module(op: Operad, spec: str, N: int) -> fmod.TruncatedModule:
    """``free:m``, ``alpha:<triv|sign|std|reg>@n``, ``unit``, ``zero`` or a module file."""
    if os.path.exists(spec):
        return serialize.load_module(spec, op)
    if spec == "unit":
        return fmod.unit_module(op, N)
    if spec == "zero":
        return fmod.zero_module(op, N)
    head, _, rest = spec.partition(":")
    try:
        if head == "free":
            return fmod.free_module(op, int(rest), N)
        if head == "alpha":
            kind, _, n = rest.partition("@")
            reps = verify.REPS
            if kind not in reps:
                raise UsageError(f"unknown representation {kind!r} in {spec!r}")
            n = int(n)
            if n > N:
                raise UsageError(f"arity {n} exceeds the bound {N}")
            M = fmod.SigmaModule.concentrated(reps[kind](n), N, name=f"{kind}{n}")
            return fmod.alpha_embed(M, op)
    except ValueError:
        raise UsageError(f"malformed module spec {spec!r}") from None
    raise UsageError(f"unknown module spec {spec!r}")


def vector_text(op: Operad, x) -> dict:
    return {op.basis_label_str(x.arity, a): fraction_str(c) for a, c in sorted(x.coeffs.items())}


# ---------------------------------------------------------------- commands

def cmd_dims(args) -> tuple[dict, int]:
    op = load_operad(args.operad, check_bound(args.max))
    out = {"operad": op.name, "max": args.max,
           "operad_dims": {str(n): op.dim(n) for n in range(op.nmax + 1)}}
    out["cat_dims"] = {f"{m},{n}": catprop.hom_space(op, m, n).dim
                       for m in range(args.max + 1) for n in range(args.max + 1)}
    return out, 0


def cmd_check_leibniz(args) -> tuple[dict, int]:
    op = load_operad(args.operad, check_bound(args.max))
    mu = select_mu(op, args.mu)
    res = catprop.leibniz_check(op, mu, args.mode, nmax=min(args.max - 1, op.nmax - 1))
    out = {"operad": op.name, "mu": vector_text(op, mu), "mode": args.mode,
           "result": "holds" if res.holds else "fails"}
    if not res.holds:
        out["witness"] = vector_text(op, res.witness)
        out["tested"] = vector_text(op, res.tested)
    return out, 0 if res.holds else 1


def _module_args(args):
    # μ̃ on arity N needs the operad one arity further
    op = load_operad(args.operad, max(check_bound(args.max) + 1, 3))
    F = load_module(op, args.module, args.max)
    return op, F


def cmd_delta(args):
    op, F = _module_args(args)
    D = fmod.delta(F)
    if args.output:
        serialize.dump_module(D, args.output)
    return {"module": F.name, "dims": F.dims(), "delta_dims": D.dims()}, 0


def cmd_coker_mu(args):
    op, F = _module_args(args)
    mu = select_mu(op, args.mu)
    try:
        Q, _ = fmod.coker_mu(F, mu)
    except fmod.LeibnizFailure as exc:
        return {"error": str(exc), "witness": vector_text(op, exc.witness)}, 1
    if args.output:
        serialize.dump_module(Q, args.output)
    ok = fmod.is_in_mu(Q, mu)
    return {"module": F.name, "dims": F.dims(), "coker_dims": Q.dims(),
            "in_subcategory": fmod.is_in_mu(F, mu), "coker_in_subcategory": ok}, 0 if ok else 1


def cmd_ker_mu(args):
    op, F = _module_args(args)
    mu = select_mu(op, args.mu)
    try:
        K, _ = fmod.ker_mu(F, mu)
    except fmod.LeibnizFailure as exc:
        return {"error": str(exc), "witness": vector_text(op, exc.witness)}, 1
    if args.output:
        serialize.dump_module(K, args.output)
    return {"module": F.name, "dims": F.dims(), "kappa_dims": K.dims(),
            "kappa_in_subcategory": fmod.is_in_mu(K, mu)}, 0


def cmd_conv(args):
    op, F = _module_args(args)
    G = load_module(op, args.other, args.max)
    FG = fmod.convolution(F, G)
    out = {"left": F.name, "right": G.name, "dims": FG.dims()}
    code = 0
    if args.check:
        mu = select_mu(op, args.mu)
        r = fmod.conv_mu_checks(F, G, mu)
        out["checks"] = {"shift_iso": r.iso_bijective and r.iso_natural, "sum_rule": r.sum_rule,
                         "reflection_monoidal": r.stable_iso}
        code = 0 if r.ok else 1
    if args.output:
        serialize.dump_module(FG, args.output)
    return out, code


def cmd_resolve(args):
    op, F = _module_args(args)
    try:
        res = homresolve.projective_resolution(F)
    except homresolve.ResolutionError as exc:
        raise UsageError(str(exc)) from None
    ok = not res.terms or (res.d_squared_zero() and res.is_acyclic_augmented())
    return {"module": F.name, "dims": F.dims(), "length": res.length if res.terms else -1,
            "terms": res.dims_table(), "exact": ok}, 0 if ok else 1


def cmd_derived(args):
    op, F = _module_args(args)
    mu = select_mu(op, args.mu)
    try:
        rep = homresolve.derived_mu(F, mu)
    except homresolve.ResolutionError as exc:
        raise UsageError(str(exc)) from None
    out = {"module": F.name, "dims": F.dims(),
           "method_a": {str(i): S.dims() for i, S in enumerate(rep.method_a)},
           "method_b": {str(i): S.dims() for i, S in rep.method_b.items()},
           "agree": rep.agree, "notes": rep.notes}
    return out, 0 if rep.agree else 1


def cmd_pbw(args):
    op, F = _module_args(args)
    n = check_bound(args.n, "--n")
    value = groupside.pbw_dims(F, n)
    out = {"module": F.name, "n": n, "pbw_dim": value}
    code = 0
    if args.module.startswith("free:"):
        m = int(args.module.split(":")[1])
        expect = groupside.cat_ass_dim(m, n)
        out["cat_ass_dim"] = expect
        code = 0 if expect == value else 1
    return out, code


def cmd_grop_outer(args):
    H = groupside.TruncHopf(args.d, check_bound(args.degree, "--degree"),
                            commutative=args.hopf == "symmetric")
    n = check_bound(args.n, "--n")
    out = {"hopf": args.hopf, "d": args.d, "degree": args.degree, "n": n}
    if args.hom:
        try:
            u = groupside.GroupHom.parse(args.hom)
        except (groupside.GroupParseError, ValueError) as exc:
            raise UsageError(f"bad homomorphism: {exc}") from None
        f = groupside.act_hom(H, u)
        out["hom"] = str(u)
        out["matrix_rank"] = f.rank()
        out["shape"] = list(f.shape)
    rep = groupside.outer_check_exponential(H, n)
    out.update(outer=rep.outer, inner_trivial=rep.inner_trivial, consistent=rep.consistent)
    if rep.witness is not None:
        k, src, img = rep.witness
        out["witness"] = {"arity": k, "input": [list(w) for w in src],
                          "image": {" ".join("".join(map(str, w)) or "1" for w in lab): fraction_str(c)
                                    for lab, c in sorted(img.items())}}
    return out, 0 if rep.consistent else 1


def cmd_verify(args):
    try:
        result = verify.run(args.suite, seed=args.seed, threads=args.threads)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}; choose from all, "
                         + ", ".join(verify.SUITES)) from None
    return result, 0 if result["passed"] else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opfunctors", description=__doc__.splitlines()[0])
    p.add_argument("--pretty", action="store_true", help="indented output")
    p.add_argument("--threads", type=int, default=1, help="worker threads for verify")
    p.add_argument("--output", "-o", help="also write the main result to this file")
    sub = p.add_subparsers(dest="command", required=True)

    def with_operad(sp, default_max=4):
        sp.add_argument("--operad", default="lie", help="builtin name or presentation file")
        sp.add_argument("--max", type=int, default=default_max, help="arity bound N")
        sp.add_argument("--mu", default="generator", help="binary operation selector")
        return sp

    with_operad(sub.add_parser("dims", help="operad and Cat O hom-space dimensions"))
    s = with_operad(sub.add_parser("check-leibniz", help="right Leibniz condition"), 6)
    s.add_argument("--mode", choices=("generators", "exhaustive"), default="generators")
    for name, helptext in [("delta", "shift of a module"), ("coker-mu", "reflection F^mu"),
                           ("ker-mu", "kernel of mu-tilde"), ("resolve", "projective resolution"),
                           ("derived", "left derived functors of the reflection")]:
        s = with_operad(sub.add_parser(name, help=helptext), 3)
        s.add_argument("--module", default="free:2")
    s = with_operad(sub.add_parser("conv", help="convolution product"), 4)
    s.add_argument("--module", default="free:2")
    s.add_argument("--other", default="unit")
    s.add_argument("--check", action="store_true", help="run the shift and reflection checks")
    s = with_operad(sub.add_parser("pbw", help="PBW dimension count"), 4)
    s.add_argument("--module", default="free:2")
    s.add_argument("--n", type=int, default=2)
    s = sub.add_parser("grop-outer", help="outer test for an exponential functor")
    s.add_argument("--hopf", choices=("tensor", "symmetric"), default="tensor")
    s.add_argument("--d", type=int, default=2, help="number of primitive letters")
    s.add_argument("--degree", type=int, default=3, help="degree cap D")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--hom", help="also apply a homomorphism 'n->p: w1; w2'")
    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("suite", nargs="?", default="all")
    s.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    return p


COMMANDS = {
    "dims": cmd_dims, "check-leibniz": cmd_check_leibniz, "delta": cmd_delta,
    "coker-mu": cmd_coker_mu, "ker-mu": cmd_ker_mu, "conv": cmd_conv, "resolve": cmd_resolve,
    "derived": cmd_derived, "pbw": cmd_pbw, "grop-outer": cmd_grop_outer, "verify": cmd_verify,
}


MODULE_WRITERS = ("delta", "coker-mu", "ker-mu", "conv")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        out, code = COMMANDS[args.command](args)
    except PresentationParseError as exc:
        print(f"opfunctors: parse error, {exc}", file=stderr)
        return 2
    except (UsageError, fmod.ModuleError, OperadError) as exc:
        print(f"opfunctors: {exc}", file=stderr)
        return 2
    text = serialize.to_json_text(out, pretty=args.pretty)
    stdout.write(text)
    if args.output and args.command not in MODULE_WRITERS:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def main() -> None:
    sys.exit(run())
