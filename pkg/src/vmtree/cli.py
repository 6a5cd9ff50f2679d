"""Command-line entry point: ``vmtree <subcommand> ...``.

Exit status is 0 on success, 2 when the instance is infeasible and 1 on any
input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bench import bench_scaling, parse_points, rows_to_csv
from .cluster_solver import ClusterRequest, cluster_solve
from .dp_solver import solve
from .hardness import (ThreePartitionInstance, find_three_partition,
                       gen_unweighted_tree, gen_weighted_path)
from .oracle import linear_scan
from .ratios import INFEASIBLE, format_amount
from .request import dump_request, load_request
from .topogen import gen_three_tier
from .topology import dump_topology, ensure_valid, load_topology, topology_to_dict

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _value_fields(value: Fraction) -> dict:
    return {"congestion": format_amount(value),
            "congestion_fraction": f"{value.numerator}/{value.denominator}"}


def _solution_doc(sol, with_assignment: bool = True) -> dict:
    if sol.congestion is INFEASIBLE:
        return {"infeasible": True}
    doc = _value_fields(sol.congestion)
    if with_assignment and sol.embedding is not None:
        doc["assignment"] = dict(sol.embedding.assignment)
    return doc


def _load_instance(args):
    t = ensure_valid(load_topology(args.topology))
    return t, load_request(args.request)


def cmd_solve(args) -> int:
    t, r = _load_instance(args)
    sol = solve(t, r, embedding=not args.no_embedding)
    _emit(_dumps(_solution_doc(sol, not args.no_embedding)), args.out)
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    t, r = _load_instance(args)
    sol = linear_scan(t, r)
    _emit(_dumps(_solution_doc(sol)), args.out)
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


def cmd_cluster(args) -> int:
    t = ensure_valid(load_topology(args.topology))
    sol = cluster_solve(t, ClusterRequest(args.k, args.B))
    if not sol.feasible:
        _emit(_dumps({"infeasible": True}), args.out)
        return EXIT_INFEASIBLE
    doc = _value_fields(sol.congestion)
    doc["counts"] = sol.counts
    _emit(_dumps(doc), args.out)
    return EXIT_OK


def cmd_gen_topology(args) -> int:
    t = gen_three_tier(args.servers_per_rack, args.racks_per_as, args.as_count,
                       seed=args.seed, residuals=args.residuals, vm_slots=args.vm_slots)
    if args.out:
        dump_topology(t, args.out)
    else:
        sys.stdout.write(_dumps(topology_to_dict(t)))
    return EXIT_OK


def _int_list(text: str) -> list:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def cmd_gen_hard(args) -> int:
    S = _int_list(args.s)
    tp = ThreePartitionInstance(args.m, tuple(S), args.B, constrained=not args.unconstrained)
    groups = find_three_partition(tp) if tp.constrained else None
    if groups is not None:
        tp = ThreePartitionInstance(tp.m, tp.S, tp.B, groups, tp.constrained)
    if args.model == "path":
        inst = gen_weighted_path(tp, args.W)
    else:
        inst = gen_unweighted_tree(tp, args.epsilon, max_nodes=args.max_nodes)
    prefix = args.out_prefix
    dump_topology(inst.topology, f"{prefix}topology.json")
    dump_request(inst.request, f"{prefix}request.json")
    if inst.yes_certificate is not None:
        cert = _value_fields(inst.yes_certificate.congestion)
        cert["assignment"] = dict(inst.yes_certificate.assignment)
        cert["partition"] = [list(g) for g in groups]
        cert["gap_bound"] = format_amount(inst.gap_bound)
        with open(f"{prefix}certificate.json", "w") as fh:
            fh.write(_dumps(cert))
    return EXIT_OK


def cmd_bench(args) -> int:
    fixed = args.fixed_k if args.sweep == "n" else args.fixed_n
    if fixed is None:
        raise ValueError("--fixed-k is required for an n sweep, --fixed-n for a k sweep")
    rows = bench_scaling(args.mode, args.sweep, fixed, parse_points(args.points),
                         trials=args.trials, seed=args.seed, prune=args.prune)
    _emit(rows_to_csv(rows), args.out)
    if args.values_out:
        with open(args.values_out, "w") as fh:
            fh.write("param,values\n")
            for r in rows:
                fh.write(f"{r.param},{r.checksum}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vmtree", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("solve", cmd_solve, "exact subset DP"),
                               ("oracle", cmd_oracle, "brute-force scan (small instances)")):
        q = sub.add_parser(name, help=helptext)
        q.add_argument("--topology", required=True)
        q.add_argument("--request", required=True)
        q.add_argument("--out")
        if name == "solve":
            q.add_argument("--no-embedding", action="store_true")
        q.set_defaults(func=fn)

    q = sub.add_parser("cluster-solve", help="virtual cluster <k, B>")
    q.add_argument("--topology", required=True)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("-B", required=True, help="per-VM bandwidth, decimal string")
    q.add_argument("--out")
    q.set_defaults(func=cmd_cluster)

    q = sub.add_parser("gen-topology", help="three-tier datacenter tree")
    q.add_argument("--servers-per-rack", type=int, default=20)
    q.add_argument("--racks-per-as", type=int, default=10)
    q.add_argument("--as-count", type=int, default=5)
    q.add_argument("--vm-slots", type=int, default=1)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--residuals", action="store_true")
    q.add_argument("--out")
    q.set_defaults(func=cmd_gen_topology)

    q = sub.add_parser("gen-hard", help="3-partition reduction instances")
    q.add_argument("--model", choices=("path", "tree"), required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--B", type=int, required=True)
    q.add_argument("--s", required=True, help="comma-separated integers")
    q.add_argument("--W", default="100")
    q.add_argument("--epsilon", default="1/2")
    q.add_argument("--max-nodes", type=int, default=200_000)
    q.add_argument("--unconstrained", action="store_true",
                   help="skip the B/4 < s < B/2 check (only for inputs with no equal-sum grouping)")
    q.add_argument("--out-prefix", default="hard_")
    q.set_defaults(func=cmd_gen_hard)

    q = sub.add_parser("bench", help="runtime sweep to CSV")
    q.add_argument("--mode", choices=("generic", "cluster"), required=True)
    q.add_argument("--sweep", choices=("n", "k"), required=True)
    q.add_argument("--fixed-n", type=int)
    q.add_argument("--fixed-k", type=int)
    q.add_argument("--points", required=True, help="lo:hi[:step] or a,b,c")
    q.add_argument("--trials", type=int, default=5)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--prune", action="store_true", help="time the pruned generic solver")
    q.add_argument("--values-out", help="also write the solved congestions per point")
    q.add_argument("--out")
    q.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, OverflowError) as exc:
        print(f"vmtree {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
