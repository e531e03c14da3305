"""Command-line entry points: plan, campaign, components, stretch, lattice, constants.

Exit codes: 0 on success, 2 on configuration errors, 3 on scenario errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import lattice as lattice_mod
from .campaign import (CampaignConfig, ConfigError, component_table, constants,
                       run_campaign, write_component_csv)
from .geometry import Box, path_length
from .planners import (prm_build, prm_query, fmt_star, rrg_build, rrt_build,
                       simplify_path, r_fmt_star, r_prm_star)
from .planners.base import resolve_rst
from .planners.btt import btt
from .rgg import build_rgg, estimate_stretch, critical_radius
from .sampling import make_rng, sample_ppp, unit_box
from .scenario import CostMap, ScenarioError, load_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SCENARIO = 3


def _radius_for(args, n: float, d: int) -> float:
    if args.radius_preset:
        presets = {"fmt-star": r_fmt_star, "prm-star": r_prm_star,
                   "critical": critical_radius}
        if args.radius_preset == "critical":
            return critical_radius(d, n)
        return presets[args.radius_preset](n, d)
    return args.gamma * n ** (-1.0 / d)


def _result_json(result) -> dict:
    return {
        "success": result.success,
        "cost": result.cost,
        "length": result.length,
        "bottleneck": result.bottleneck,
        "vertices": result.vertex_count,
        "edges": result.edge_count,
        "samples_drawn": result.samples_drawn,
        "wall_time_ms": result.wall_time_ms,
    }


def cmd_plan(args) -> int:
    scn = load_scenario(args.scenario)
    d = scn.dimension
    n = args.n
    r_n = _radius_for(args, n, d)
    rst = resolve_rst(args.rst_preset, n, d)
    if args.planner == "prm":
        result = prm_query(prm_build(scn, n, r_n, rst, args.seed))
    elif args.planner == "fmt":
        result = fmt_star(scn, n, r_n, rst, args.seed)
    elif args.planner == "btt":
        cm = CostMap.from_dict(json.loads(args.cost_map)) if args.cost_map else \
            CostMap(kind="constant", params={"value": 0.0})
        result = btt(scn, n, r_n, rst, cm, args.seed)
    elif args.planner == "rrg":
        half = args.goal_side / 2.0
        goal = Box(np.clip(scn.target - half, 0, 1), np.clip(scn.target + half, 0, 1))
        roadmap = rrg_build(scn, goal, iterations=int(n), eta=args.eta, mu=args.mu,
                            seed=args.seed, gamma=args.gamma, rst_preset=args.rst_preset)
        print(json.dumps({"success": roadmap.goal_reached, "nodes": len(roadmap.nodes),
                          "edges": len(roadmap.edge_set()),
                          "wall_time_ms": roadmap.wall_time_ms}, indent=2))
        return EXIT_OK
    else:
        half = args.goal_side / 2.0
        goal = Box(np.clip(scn.target - half, 0, 1), np.clip(scn.target + half, 0, 1))
        tree = rrt_build(scn, goal, iterations=int(n), eta=args.eta, seed=args.seed)
        print(json.dumps({"success": tree.goal_reached, "nodes": len(tree.nodes),
                          "wall_time_ms": tree.wall_time_ms}, indent=2))
        return EXIT_OK

    payload = _result_json(result)
    if result.success and args.simplify:
        simplified = simplify_path(scn, result.path, seed=args.seed)
        payload["simplified_cost"] = path_length(simplified)
    print(json.dumps(payload, indent=2))
    if args.path_csv and result.success:
        with open(args.path_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"x{i}" for i in range(d)])
            writer.writerows(result.path.tolist())
    return EXIT_OK


def cmd_campaign(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = CampaignConfig.from_dict(json.load(fh))
    else:
        cfg = CampaignConfig(
            scenario=args.scenario, planner=args.planner,
            n_list=tuple(args.n_list), trials=args.trials, k=args.k,
            gamma=args.gamma, rst_preset=args.rst_preset, seed=args.seed,
            cost_map=json.loads(args.cost_map) if args.cost_map else None,
            simplify=args.simplify,
            radius_labels=tuple(args.labels) if args.labels else None,
            include_prm_star=args.include_prm_star,
        )
    report = run_campaign(cfg, out_dir=args.out, workers=args.workers)
    print(f"{len(report.records)} records", "->" if args.out else "",
          args.out or "(not written)")
    return EXIT_OK


def cmd_components(args) -> int:
    rows = component_table(args.d_list, args.n_list, args.labels,
                           trials=args.trials, seed=args.seed, gamma=args.gamma)
    if args.out:
        write_component_csv(rows, args.out)
        print(f"{len(rows)} rows -> {args.out}")
    else:
        for row in rows:
            print(f"d={row['d']} n={row['n']} {row['radius_label']}: "
                  f"largest={row['largest_frac_mean']:.4f} second={row['second_frac_mean']:.4f}")
    return EXIT_OK


def cmd_stretch(args) -> int:
    rng = make_rng(args.seed)
    pts = sample_ppp(args.n, unit_box(args.d), rng).points
    radius = args.radius if args.radius else args.gamma * args.n ** (-1.0 / args.d)
    g = build_rgg(pts, radius)
    report = estimate_stretch(g, pair_count=args.pairs,
                              min_separation=args.min_separation, rng=rng)
    print(json.dumps({
        "n": args.n, "d": args.d, "radius": radius, "pairs": int(report.pairs.shape[0]),
        "max_ratio": report.max_ratio, "p95_ratio": report.p95_ratio,
    }, indent=2))
    return EXIT_OK


def cmd_lattice(args) -> int:
    rows = []
    for trial in range(args.trials):
        lg = lattice_mod.build_lattice_graph(args.n, args.d, args.p, seed=args.seed + trial)
        rep = lg.components()
        denom = max(lg.site_count, 1)
        rows.append({"d": args.d, "n": args.n, "p": args.p, "trial": trial,
                     "sites": lg.site_count,
                     "largest_frac": rep.largest_size / denom,
                     "second_frac": rep.second_size / denom})
    if args.out:
        import os
        os.makedirs(args.out, exist_ok=True)
        comp_path = os.path.join(args.out, "lattice_components.csv")
        with open(comp_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
        decay = lattice_mod.subcritical_reach_decay(args.d, args.p, args.k_list,
                                                    trials=args.decay_trials, seed=args.seed)
        decay_path = os.path.join(args.out, "reach_decay.csv")
        with open(decay_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "frequency", "slope", "r_squared"])
            for k, f in zip(decay.k_values, decay.frequencies):
                writer.writerow([int(k), repr(float(f)), repr(decay.slope),
                                 repr(decay.r_squared)])
        print(f"wrote {comp_path} and {decay_path}")
    else:
        mean_frac = float(np.mean([r["largest_frac"] for r in rows]))
        print(json.dumps({"d": args.d, "n": args.n, "p": args.p,
                          "mean_largest_frac": mean_frac, "trials": args.trials}, indent=2))
    return EXIT_OK


def cmd_constants(args) -> int:
    print(json.dumps(constants(args.d), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="percoplan",
                                     description="Sampling-based planning and percolation experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="run one planner invocation")
    p.add_argument("--scenario", required=True)
    p.add_argument("--planner", choices=["prm", "fmt", "btt", "rrg", "rrt"], default="prm")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--radius-preset", choices=["fmt-star", "prm-star", "critical"])
    p.add_argument("--rst-preset", default="prm-star")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cost-map", help="JSON cost map spec (btt)")
    p.add_argument("--simplify", action="store_true")
    p.add_argument("--eta", type=float, default=0.2)
    p.add_argument("--mu", type=float, default=0.5)
    p.add_argument("--goal-side", type=float, default=0.1)
    p.add_argument("--path-csv")
    p.set_defaults(func=cmd_plan)

    c = sub.add_parser("campaign", help="run a trials x radii x n sweep")
    c.add_argument("--config", help="JSON config file (overrides other flags)")
    c.add_argument("--scenario", default="empty-hypercube:2")
    c.add_argument("--planner", choices=["prm", "fmt", "btt", "rrg", "rrt"], default="prm")
    c.add_argument("--n-list", type=float, nargs="+", default=[1000.0], dest="n_list")
    c.add_argument("--trials", type=int, default=50)
    c.add_argument("--k", type=int, default=10)
    c.add_argument("--gamma", type=float, default=1.0)
    c.add_argument("--rst-preset", default="prm-star")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--cost-map")
    c.add_argument("--simplify", action="store_true")
    c.add_argument("--labels", nargs="+")
    c.add_argument("--include-prm-star", action="store_true")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--out")
    c.set_defaults(func=cmd_campaign)

    comp = sub.add_parser("components", help="component-fraction tables")
    comp.add_argument("--d-list", type=int, nargs="+", required=True, dest="d_list")
    comp.add_argument("--n-list", type=float, nargs="+", required=True, dest="n_list")
    comp.add_argument("--labels", nargs="+", default=["r_0", "r_2", "r_10"])
    comp.add_argument("--trials", type=int, default=50)
    comp.add_argument("--gamma", type=float, default=1.0)
    comp.add_argument("--seed", type=int, default=0)
    comp.add_argument("--out")
    comp.set_defaults(func=cmd_components)

    st = sub.add_parser("stretch", help="empirical stretch-ratio report")
    st.add_argument("--d", type=int, required=True)
    st.add_argument("--n", type=float, required=True)
    st.add_argument("--gamma", type=float, default=1.8)
    st.add_argument("--radius", type=float)
    st.add_argument("--pairs", type=int, default=200)
    st.add_argument("--min-separation", type=float, default=0.25)
    st.add_argument("--seed", type=int, default=0)
    st.set_defaults(func=cmd_stretch)

    lat = sub.add_parser("lattice", help="site percolation fractions and reach decay")
    lat.add_argument("--d", type=int, required=True)
    lat.add_argument("--n", type=float, required=True)
    lat.add_argument("--p", type=float, required=True)
    lat.add_argument("--trials", type=int, default=50)
    lat.add_argument("--decay-trials", type=int, default=10000)
    lat.add_argument("--k-list", type=int, nargs="+", default=[5, 10, 15, 20], dest="k_list")
    lat.add_argument("--seed", type=int, default=0)
    lat.add_argument("--out")
    lat.set_defaults(func=cmd_lattice)

    con = sub.add_parser("constants", help="tabulated constants and presets")
    con.add_argument("--d", type=int, required=True)
    con.set_defaults(func=cmd_constants)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except (ConfigError, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
