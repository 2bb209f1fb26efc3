"""Command-line interface.

Verbs: validate, choi, omega, classify, mk, delta, dl, wasserstein,
kasparov, group-gen, stability, chaining, embedding, run-all.  File formats
are documented in the io module and the README.  Results are printed as JSON
records {value | "inf", status, gap, seed}; experiment verbs write CSV.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import experiments, io
from .channels import (
    choi_matrix,
    is_completely_positive,
    is_trace_channel,
    is_trace_preserving,
    is_unital,
    omega_tau,
)
from .errors import ChoimetricError
from .geometry import CommutatorSeminorm, kasparov_product
from .groups import (
    cyclic_group,
    dihedral_group,
    direct_product,
    klein_twist_cocycle,
    multiplier_channel,
    canonical_trace,
    symmetric_group_3,
    twisted_group_algebra,
    word_length,
)
from .metrics import (
    MKProblem,
    delta_distance,
    dl_distance,
    dl_stabilized,
    mk_distance,
    wasserstein_dual,
)


def _registry(paths):
    registry = {}
    for path in paths or ():
        alg = io.algebra_from_dict(io.load_json(path))
        if not alg.name:
            raise ChoimetricError(f"{path}: algebra file needs a name")
        registry[alg.name] = alg
    return registry


def _result_json(value, status, gap, seed=None, extra=None):
    rec = {"value": "inf" if math.isinf(value) else value,
           "status": status, "gap": gap, "seed": seed}
    if extra:
        rec.update(extra)
    return json.dumps(rec)


def _load_group(path):
    group, cocycle, length = io.group_from_dict(io.load_json(path))
    return group, cocycle, length


def cmd_validate(args):
    data = io.load_json(args.file)
    registry = _registry(args.algebras)
    kind = args.kind
    if kind == "algebra":
        alg = io.algebra_from_dict(data)
        print(f"valid algebra: dim {alg.dim} in M_{alg.ambient_dim}")
    elif kind == "functional":
        phi = io.functional_from_dict(data, registry)
        print(f"valid functional; positive={phi.is_positive()} state={phi.is_state()}")
    elif kind == "trace":
        tau = io.trace_from_dict(data, registry)
        print(f"valid trace; faithful={tau.faithful}")
    elif kind == "channel":
        io.channel_from_dict(data, registry)
        print("valid channel file")
    elif kind == "triple":
        io.triple_from_dict(data, registry)
        print("valid spectral triple")
    elif kind == "group":
        group, cocycle, length = io.group_from_dict(data)
        bits = [f"valid group of order {group.order}"]
        if cocycle is not None:
            bits.append("with cocycle")
        if length is not None:
            bits.append("with length function")
        print(" ".join(bits))
    elif kind == "pdf":
        if not args.group:
            raise ChoimetricError("validating a pdf file needs --group")
        group, _, _ = _load_group(args.group)
        io.pdf_from_dict(data, group)
        print("valid positive definite function")
    return 0


def cmd_choi(args):
    registry = _registry(args.algebras)
    ch = io.channel_from_dict(io.load_json(args.channel), registry)
    c = choi_matrix(ch)
    out = {"choi": io.matrix_to_json(c),
           "eigenvalues": [float(v) for v in np.linalg.eigvalsh(c)]}
    if args.out:
        io.save_json(out, args.out)
    else:
        print(json.dumps(out["eigenvalues"]))
    return 0


def cmd_omega(args):
    registry = _registry(args.algebras)
    ch = io.channel_from_dict(io.load_json(args.channel), registry)
    tau = io.trace_from_dict(io.load_json(args.trace), registry)
    om = omega_tau(ch, tau)
    out = {"values": io.vector_to_json(om.values),
           "positive": om.is_positive(), "state": om.is_state()}
    if args.out:
        io.save_json(out, args.out)
    else:
        print(json.dumps({"positive": out["positive"], "state": out["state"]}))
    return 0


def cmd_classify(args):
    registry = _registry(args.algebras)
    ch = io.channel_from_dict(io.load_json(args.channel), registry)
    tau = io.trace_from_dict(io.load_json(args.trace), registry)
    verdict = is_completely_positive(ch, tau)
    out = {
        "cp": verdict.is_cp,
        "min_gram_eigenvalue": verdict.min_eigenvalue,
        "trace_channel": is_trace_channel(ch, tau),
        "unital": is_unital(ch),
    }
    if args.trace_source:
        tau_src = io.trace_from_dict(io.load_json(args.trace_source), registry)
        out["trace_preserving"] = is_trace_preserving(ch, tau_src, tau)
    print(json.dumps(out))
    return 0


def cmd_mk(args):
    registry = _registry(args.algebras)
    triple = io.triple_from_dict(io.load_json(args.triple), registry)
    phi = io.functional_from_dict(io.load_json(args.phi), registry)
    psi = io.functional_from_dict(io.load_json(args.psi), registry)
    res = mk_distance(MKProblem(phi, psi, CommutatorSeminorm(triple),
                                tolerance=args.tolerance,
                                max_iter=args.max_iter))
    print(_result_json(res.value, res.status, res.dual_gap, args.seed))
    return 0 if res.status in ("optimal", "infinite") else 1


def cmd_delta(args):
    group, cocycle, length = _load_group(args.group)
    if length is None:
        length = word_length(group)
    ga = twisted_group_algebra(group, cocycle)
    tau = canonical_trace(ga)
    phi = io.pdf_from_dict(io.load_json(args.pdf), group)
    psi = io.pdf_from_dict(io.load_json(args.pdf2), group)
    ctx_triple = experiments.length_dirac(ga, length)
    ctx_triple_op = experiments.length_dirac_op(ga, length)
    product = kasparov_product(ctx_triple, ctx_triple_op)
    res = delta_distance(multiplier_channel(phi, ga), multiplier_channel(psi, ga),
                         tau, CommutatorSeminorm(product),
                         tolerance=args.tolerance)
    print(_result_json(res.value, res.status, res.dual_gap, args.seed))
    return 0 if res.status in ("optimal", "infinite") else 1


def cmd_dl(args):
    registry = _registry(args.algebras)
    f = io.channel_from_dict(io.load_json(args.channel), registry)
    g = io.channel_from_dict(io.load_json(args.channel2), registry)
    if args.m_max:
        value, per_m = dl_stabilized(f, g, args.m_max, starts=args.starts,
                                     seed=args.seed, tolerance=args.tolerance)
        print(json.dumps({"value": value, "per_m": per_m, "status": "lower_bound",
                          "seed": args.seed}))
        return 0
    if not args.triple:
        raise ChoimetricError("dl needs either --triple or --m-max")
    triple = io.triple_from_dict(io.load_json(args.triple), registry)
    res = dl_distance(f, g, CommutatorSeminorm(triple), starts=args.starts,
                      seed=args.seed, tolerance=args.tolerance)
    print(_result_json(res.value, res.status, 0.0, args.seed,
                       extra={"converged": res.converged}))
    return 0


def cmd_wasserstein(args):
    data = io.load_json(args.problem)
    ls = [io.matrix_from_json(m, "l_matrices") for m in data["l_matrices"]]
    rho1 = io.matrix_from_json(data["rho1"], "rho1")
    rho2 = io.matrix_from_json(data["rho2"], "rho2")
    try:
        res = wasserstein_dual(rho1, rho2, ls, tol=args.tolerance)
    except ChoimetricError as exc:
        print(_result_json(math.inf, "infeasible", 0.0, args.seed,
                           extra={"reason": str(exc)}))
        return 0
    print(_result_json(res.value, res.status, res.gap, args.seed))
    return 0 if res.status == "optimal" else 1


def cmd_kasparov(args):
    registry = _registry(args.algebras)
    ta = io.triple_from_dict(io.load_json(args.triple), registry)
    tb = io.triple_from_dict(io.load_json(args.triple2), registry)
    product = kasparov_product(ta, tb)
    product.algebra.name = args.name or f"({ta.algebra.name})@({tb.algebra.name})"
    out = {"algebra": io.algebra_to_dict(product.algebra),
           "triple": io.triple_to_dict(product)}
    if args.out:
        io.save_json(out, args.out)
    print(json.dumps({"hilbert_dim": product.hilbert_dim,
                      "even": product.even}))
    return 0


def cmd_group_gen(args):
    if args.kind == "cyclic":
        group = cyclic_group(args.n)
    elif args.kind == "dihedral":
        group = dihedral_group(args.n)
    elif args.kind == "symmetric3":
        group = symmetric_group_3()
    elif args.kind == "product":
        group = direct_product(cyclic_group(args.n), cyclic_group(args.m))
    elif args.kind == "klein-twisted":
        group = direct_product(cyclic_group(2), cyclic_group(2))
    else:
        raise ChoimetricError(f"unknown group kind {args.kind}")
    cocycle = klein_twist_cocycle(group) if args.kind == "klein-twisted" else None
    length = word_length(group)
    data = io.group_to_dict(group, cocycle, length)
    if args.out:
        io.save_json(data, args.out)
    else:
        print(json.dumps(data))
    return 0


def _experiment_cmd(runner_kwargs_fn):
    def run(args):
        records = runner_kwargs_fn(args)
        if args.out:
            experiments.emit_report(records, args.out)
        passed = sum(r.ok for r in records)
        print(f"{passed}/{len(records)} records passed")
        return 0 if passed == len(records) else 1
    return run


cmd_stability = _experiment_cmd(
    lambda args: experiments.run_stability(seed=args.seed,
                                           trials=args.trials or 25))
cmd_chaining = _experiment_cmd(
    lambda args: experiments.run_chaining(seed=args.seed,
                                          quadruples=args.trials or 100))
cmd_embedding = _experiment_cmd(
    lambda args: experiments.run_embedding(seed=args.seed,
                                           trials=args.trials or 100))


def cmd_run_all(args):
    records, passed = experiments.run_all(seed=args.seed, out=args.out)
    ok_count = sum(r.ok for r in records)
    print(f"{ok_count}/{len(records)} records passed")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="choimetric",
        description="Distances between completely positive maps via "
                    "Choi-Jamiolkowski functionals and spectral-triple seminorms")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, algebras=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=0)
        sp.add_argument("--tolerance", type=float, default=1e-7)
        sp.add_argument("--max-iter", dest="max_iter", type=int, default=200)
        sp.add_argument("--out", default=None)
        sp.add_argument("--m-max", dest="m_max", type=int, default=0)
        if algebras:
            sp.add_argument("--algebras", nargs="*", default=[],
                            help="algebra JSON files for name resolution")

    sp = sub.add_parser("validate", help="validate an input file")
    sp.add_argument("file")
    sp.add_argument("--kind", required=True,
                    choices=["algebra", "functional", "trace", "channel",
                             "triple", "group", "pdf"])
    sp.add_argument("--group", default=None, help="group file (for --kind pdf)")
    common(sp)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("choi", help="Choi matrix of a channel")
    sp.add_argument("--channel", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_choi)

    sp = sub.add_parser("omega", help="associated functional of a channel")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--trace", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_omega)

    sp = sub.add_parser("classify", help="CP / trace-channel / unital flags")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--trace", required=True)
    sp.add_argument("--trace-source", dest="trace_source", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("mk", help="Monge-Kantorovich distance between functionals")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--phi", required=True)
    sp.add_argument("--psi", required=True)
    common(sp)
    sp.set_defaults(fn=cmd_mk)

    sp = sub.add_parser("delta", help="Delta distance between group multipliers")
    sp.add_argument("--group", required=True)
    sp.add_argument("--pdf", required=True)
    sp.add_argument("--pdf2", required=True)
    common(sp, algebras=False)
    sp.set_defaults(fn=cmd_delta)

    sp = sub.add_parser("dl", help="D_L distance between unital CP maps")
    sp.add_argument("--channel", required=True)
    sp.add_argument("--channel2", required=True)
    sp.add_argument("--triple", default=None)
    sp.add_argument("--starts", type=int, default=8)
    common(sp)
    sp.set_defaults(fn=cmd_dl)

    sp = sub.add_parser("wasserstein", help="trace-norm dual distance")
    sp.add_argument("--problem", required=True,
                    help='JSON file {"l_matrices": [...], "rho1": ..., "rho2": ...}')
    common(sp, algebras=False)
    sp.set_defaults(fn=cmd_wasserstein)

    sp = sub.add_parser("kasparov", help="exterior product of two triples")
    sp.add_argument("--triple", required=True)
    sp.add_argument("--triple2", required=True)
    sp.add_argument("--name", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_kasparov)

    sp = sub.add_parser("group-gen", help="generate a builtin group file")
    sp.add_argument("--kind", required=True,
                    choices=["cyclic", "dihedral", "symmetric3", "product",
                             "klein-twisted"])
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--m", type=int, default=2)
    common(sp, algebras=False)
    sp.set_defaults(fn=cmd_group_gen)

    for verb, fn in (("stability", cmd_stability), ("chaining", cmd_chaining),
                     ("embedding", cmd_embedding), ("run-all", cmd_run_all)):
        sp = sub.add_parser(verb, help=f"run the {verb} experiment suite")
        common(sp, algebras=False)
        sp.set_defaults(fn=fn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ChoimetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
