"""Campaign orchestration: radius schedules, multi-trial sweeps, reports.

A campaign runs trials x radii x n-values planner invocations with split
substreams derived from one master seed, streams one CSV row per trial, and
writes aggregate statistics plus a manifest describing exactly what ran.
"""

from __future__ import annotations

import csv
import json
import os
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from .constants import GAMMA_STAR, P_STAR, gamma_star, p_star
from .planners import (PlanResult, prm_build, prm_query, fmt_star, simplify_path,
                       r_fmt_star, r_prm_star)
from .planners.base import resolve_rst, PRM_STAR_COEFF, FMT_STAR_ETA
from .planners.btt import btt_on_graph
from .planners.rrt import rrt_build, rrg_build
from .rgg import connected_components, connected_components_points, GeometricGraph
from .sampling import make_rng, sample_ppp, unit_box, stream_key_seed
from .scenario import CostMap, Scenario, load_scenario
from .geometry import Box, path_length


class ConfigError(Exception):
    """Raised for invalid campaign configuration."""


# --- radius schedules ---


@dataclass(frozen=True)
class RadiusSchedule:
    """Increasing connection radii r_0..r_k with provenance per entry."""

    values: tuple
    labels: tuple
    provenance: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError("radius schedule must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def by_label(self, label: str) -> float:
        try:
            return self.values[self.labels.index(label)]
        except ValueError:
            raise ConfigError(f"label {label!r} not in schedule {self.labels}") from None


def radius_schedule(n: float, d: int, k: int = 10, gamma: float = 1.0,
                    include_prm_star: bool = False) -> RadiusSchedule:
    """r_0 = gamma * n^(-1/d) up to r_k = the fmt-star preset, evenly spaced."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    r0 = gamma * n ** (-1.0 / d)
    rk = r_fmt_star(n, d)
    if rk <= r0:
        raise ConfigError(
            f"degenerate schedule: fmt-star preset {rk:.6g} <= r_0 {r0:.6g} at n={n}, d={d}")
    delta = (rk - r0) / k
    values = [r0 + i * delta for i in range(k + 1)]
    labels = [f"r_{i}" for i in range(k + 1)]
    prov = ["gamma * n^(-1/d)"] + ["linear interpolation"] * (k - 1) + ["fmt-star preset"]
    if include_prm_star:
        rp = r_prm_star(n, d)
        if rp <= values[-1]:
            raise ConfigError("prm-star preset does not extend the schedule")
        values.append(rp)
        labels.append(f"r_{k + 1}")
        prov.append("prm-star preset")
    return RadiusSchedule(values=tuple(values), labels=tuple(labels), provenance=tuple(prov))


# --- configuration ---


PLANNERS = ("prm", "fmt", "btt", "rrg", "rrt")


@dataclass(frozen=True)
class CampaignConfig:
    scenario: str                       # builtin name or file path
    planner: str = "prm"
    n_list: tuple = (1000,)
    trials: int = 50
    k: int = 10
    gamma: float = 1.0
    rst_preset: str = "prm-star"
    seed: int = 0
    cost_map: dict | None = None        # CostMap.to_dict payload, for btt
    simplify: bool = False
    radius_labels: tuple | None = None  # subset of schedule labels; None = all
    include_prm_star: bool = False
    eta: float = 0.2                    # rrg/rrt steering bound
    mu: float = 0.5                     # rrg inflation
    goal_side: float = 0.1              # rrg/rrt goal box side, centered on target
    measure_time: bool = True

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.n_list:
            raise ConfigError("n_list must be nonempty")
        if self.planner not in PLANNERS:
            raise ConfigError(f"unknown planner {self.planner!r}")
        object.__setattr__(self, "n_list", tuple(self.n_list))
        if self.radius_labels is not None:
            object.__setattr__(self, "radius_labels", tuple(self.radius_labels))

    @staticmethod
    def from_dict(data: dict) -> "CampaignConfig":
        try:
            return CampaignConfig(**data)
        except TypeError as exc:
            raise ConfigError(f"bad campaign config: {exc}") from exc


RECORD_COLUMNS = [
    "scenario", "planner", "d", "n", "radius_label", "trial", "seed", "success",
    "cost", "simplified_cost", "normalized_cost", "wall_time_ms",
    "largest_frac", "second_frac", "vertices", "edges",
]

AGGREGATE_COLUMNS = [
    "scenario", "planner", "d", "n", "radius_label", "trials", "success_rate",
    "mean_cost", "std_cost", "mean_simplified_cost", "std_simplified_cost",
    "mean_normalized_cost", "mean_wall_time_ms", "median_wall_time_ms",
    "mean_largest_frac", "mean_second_frac",
]


def analytic_optimum(scn: Scenario) -> float | None:
    """Known best path length, where one exists (obstacle-free cube)."""
    if not scn.obstacles:
        return float(np.linalg.norm(scn.target - scn.start))
    return None


def _fmt_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _goal_box(scn: Scenario, side: float) -> Box:
    half = side / 2.0
    lo = np.clip(scn.target - half, 0.0, 1.0)
    hi = np.clip(scn.target + half, 0.0, 1.0)
    return Box(lo, hi)


def _sample_graph_fractions(g) -> tuple[float, float]:
    k = g.samples.shape[0]
    if k == 0:
        return 0.0, 0.0
    sub = g.sample_subgraph_edges()
    graph = GeometricGraph(vertices=g.samples.copy(), radius=g.radius, edges=sub.copy(),
                           lengths=np.linalg.norm(g.samples[sub[:, 0]] - g.samples[sub[:, 1]],
                                                  axis=1) if sub.size else np.empty(0))
    return connected_components(graph).fractions()


def run_trial_unit(cfg: CampaignConfig, scn: Scenario, n: float, radius_label: str,
                   radius: float, trial: int, n_idx: int, radius_idx: int) -> dict:
    """One planner invocation, returned as a CSV-ready record."""
    seed_seq = np.random.SeedSequence(entropy=cfg.seed, spawn_key=(n_idx, radius_idx, trial))
    display_seed = stream_key_seed(cfg.seed, n_idx, radius_idx, trial)
    d = scn.dimension
    rst = resolve_rst(cfg.rst_preset, n, d)
    record = {
        "scenario": scn.name, "planner": cfg.planner, "d": d, "n": n,
        "radius_label": radius_label, "trial": trial, "seed": display_seed,
        "success": 0, "cost": None, "simplified_cost": None, "normalized_cost": None,
        "wall_time_ms": 0.0, "largest_frac": None, "second_frac": None,
        "vertices": 0, "edges": 0,
    }
    t0 = time.perf_counter()
    try:
        fractions = None
        if cfg.planner == "prm":
            g = prm_build(scn, n, radius, rst, seed_seq)
            result = prm_query(g)
            fractions = _sample_graph_fractions(g)
        elif cfg.planner == "fmt":
            result = fmt_star(scn, n, radius, rst, seed_seq)
        elif cfg.planner == "btt":
            if cfg.cost_map is None:
                raise ConfigError("btt campaigns need a cost map")
            g = prm_build(scn, n, radius, rst, seed_seq)
            result = btt_on_graph(g, CostMap.from_dict(cfg.cost_map))
            fractions = _sample_graph_fractions(g)
        elif cfg.planner == "rrg":
            roadmap = rrg_build(scn, _goal_box(scn, cfg.goal_side), iterations=int(n),
                                eta=cfg.eta, mu=cfg.mu, seed=seed_seq,
                                gamma=radius * n ** (1.0 / d), rst_preset=cfg.rst_preset)
            result = PlanResult(success=roadmap.goal_reached, path=None, cost=None,
                                length=None, vertex_count=len(roadmap.nodes),
                                edge_count=len(roadmap.extra_edges) + len(roadmap.nodes) - 1,
                                samples_drawn=roadmap.samples_drawn,
                                wall_time_ms=roadmap.wall_time_ms)
        else:  # rrt
            tree = rrt_build(scn, _goal_box(scn, cfg.goal_side), iterations=int(n),
                             eta=cfg.eta, seed=seed_seq)
            result = PlanResult(success=tree.goal_reached, path=None, cost=None,
                                length=None, vertex_count=len(tree.nodes),
                                edge_count=len(tree.nodes) - 1,
                                samples_drawn=tree.samples_drawn,
                                wall_time_ms=tree.wall_time_ms)
        record["success"] = int(result.success)
        record["vertices"] = result.vertex_count
        record["edges"] = result.edge_count
        if result.success and result.cost is not None:
            record["cost"] = result.cost
            optimum = analytic_optimum(scn)
            if optimum:
                record["normalized_cost"] = result.cost / optimum
            if cfg.simplify and result.path is not None:
                simplified = simplify_path(scn, result.path, seed=seed_seq.spawn(1)[0])
                record["simplified_cost"] = path_length(simplified)
        if fractions is not None:
            record["largest_frac"], record["second_frac"] = fractions
    except Exception as exc:  # a failed trial is a failed record, not a crash
        record["success"] = 0
        record["error_note"] = f"{type(exc).__name__}: {exc}"
    record["wall_time_ms"] = (time.perf_counter() - t0) * 1e3 if cfg.measure_time else 0.0
    return record


def _trial_star(args):
    return run_trial_unit(*args)


@dataclass
class CampaignReport:
    config: CampaignConfig
    records: list
    schedules: dict                     # n -> RadiusSchedule

    def aggregates(self) -> list:
        groups: dict[tuple, list] = {}
        for rec in self.records:
            key = (rec["scenario"], rec["planner"], rec["d"], rec["n"], rec["radius_label"])
            groups.setdefault(key, []).append(rec)
        best_cost = min((r["cost"] for r in self.records if r["cost"] is not None),
                        default=None)
        rows = []
        for key in sorted(groups, key=lambda k: (k[0], k[1], k[2], float(k[3]), k[4])):
            recs = groups[key]
            costs = [r["cost"] for r in recs if r["cost"] is not None]
            simp = [r["simplified_cost"] for r in recs if r["simplified_cost"] is not None]
            norm = [r["normalized_cost"] for r in recs if r["normalized_cost"] is not None]
            if not norm and costs and best_cost:
                norm = [c / best_cost for c in costs]  # relative normalizer
            times = [r["wall_time_ms"] for r in recs]
            fr1 = [r["largest_frac"] for r in recs if r["largest_frac"] is not None]
            fr2 = [r["second_frac"] for r in recs if r["second_frac"] is not None]
            rows.append({
                "scenario": key[0], "planner": key[1], "d": key[2], "n": key[3],
                "radius_label": key[4], "trials": len(recs),
                "success_rate": float(np.mean([r["success"] for r in recs])),
                "mean_cost": float(np.mean(costs)) if costs else None,
                "std_cost": float(np.std(costs)) if costs else None,
                "mean_simplified_cost": float(np.mean(simp)) if simp else None,
                "std_simplified_cost": float(np.std(simp)) if simp else None,
                "mean_normalized_cost": float(np.mean(norm)) if norm else None,
                "mean_wall_time_ms": float(np.mean(times)),
                "median_wall_time_ms": float(np.median(times)),
                "mean_largest_frac": float(np.mean(fr1)) if fr1 else None,
                "mean_second_frac": float(np.mean(fr2)) if fr2 else None,
            })
        return rows

    def success_rate(self, n=None, radius_label=None) -> float:
        recs = [r for r in self.records
                if (n is None or r["n"] == n)
                and (radius_label is None or r["radius_label"] == radius_label)]
        return float(np.mean([r["success"] for r in recs])) if recs else 0.0


def _git_hash() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], capture_output=True,
                             text=True, timeout=5, cwd=os.path.dirname(__file__))
        return out.stdout.strip() if out.returncode == 0 else "unknown"
    except OSError:
        return "unknown"


def run_campaign(cfg: CampaignConfig, out_dir=None, workers: int = 1) -> CampaignReport:
    """Execute the sweep; stream records to CSV when an output dir is given."""
    scn = load_scenario(cfg.scenario)
    schedules = {}
    units = []
    for n_idx, n in enumerate(cfg.n_list):
        if cfg.planner in ("rrt", "rrg"):
            sched = None
            entries = [("-", cfg.gamma * float(n) ** (-1.0 / scn.dimension))]
        else:
            sched = radius_schedule(n, scn.dimension, cfg.k, cfg.gamma, cfg.include_prm_star)
            schedules[n] = sched
            labels = cfg.radius_labels or sched.labels
            entries = [(lab, sched.by_label(lab)) for lab in labels]
        for radius_idx, (label, radius) in enumerate(entries):
            for trial in range(cfg.trials):
                units.append((cfg, scn, n, label, radius, trial, n_idx, radius_idx))

    writer = None
    fh = None
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        fh = open(os.path.join(out_dir, "records.csv"), "w", newline="")
        writer = csv.writer(fh)
        writer.writerow(RECORD_COLUMNS)

    records = []
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                iterator = pool.map(_trial_star, units, chunksize=4)
                for rec in iterator:
                    records.append(rec)
                    if writer:
                        writer.writerow([_fmt_value(rec[c]) for c in RECORD_COLUMNS])
        else:
            for unit in units:
                rec = run_trial_unit(*unit)
                records.append(rec)
                if writer:
                    writer.writerow([_fmt_value(rec[c]) for c in RECORD_COLUMNS])
    finally:
        if fh:
            fh.close()

    report = CampaignReport(config=cfg, records=records, schedules=schedules)
    if out_dir is not None:
        with open(os.path.join(out_dir, "aggregates.csv"), "w", newline="") as afh:
            awriter = csv.writer(afh)
            awriter.writerow(AGGREGATE_COLUMNS)
            for row in report.aggregates():
                awriter.writerow([_fmt_value(row[c]) for c in AGGREGATE_COLUMNS])
        manifest = {
            "config": asdict(cfg),
            "git_hash": _git_hash(),
            "seed": cfg.seed,
            "schedules": {str(n): {"labels": list(s.labels), "values": list(s.values),
                                   "provenance": list(s.provenance)}
                          for n, s in schedules.items()},
        }
        with open(os.path.join(out_dir, "manifest.json"), "w") as mfh:
            json.dump(manifest, mfh, indent=2)
    return report


# --- component tables ---


def component_table(d_list, n_list, radius_labels, trials: int, seed: int,
                    k: int = 10, gamma: float = 1.0) -> list:
    """Mean largest/second component fractions of free-space radius graphs.

    One row per (d, n, radius label): sample the cube at density n, build the
    radius graph, and average the two largest component fractions over trials.
    """
    rows = []
    for d_idx, d in enumerate(d_list):
        for n_idx, n in enumerate(n_list):
            sched = radius_schedule(n, d, k=k, gamma=gamma)
            for lab in radius_labels:
                r = sched.by_label(lab)
                fr1, fr2 = [], []
                for trial in range(trials):
                    rng = make_rng(seed, d_idx, n_idx, sched.labels.index(lab), trial)
                    pts = sample_ppp(n, unit_box(d), rng).points
                    rep = connected_components_points(pts, r)
                    f1, f2 = rep.fractions()
                    fr1.append(f1)
                    fr2.append(f2)
                rows.append({
                    "d": d, "n": n, "radius_label": lab, "radius": r, "trials": trials,
                    "largest_frac_mean": float(np.mean(fr1)),
                    "largest_frac_std": float(np.std(fr1)),
                    "second_frac_mean": float(np.mean(fr2)),
                    "second_frac_std": float(np.std(fr2)),
                })
    return rows


COMPONENT_COLUMNS = ["d", "n", "radius_label", "radius", "trials",
                     "largest_frac_mean", "largest_frac_std",
                     "second_frac_mean", "second_frac_std"]


def write_component_csv(rows: list, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COMPONENT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt_value(row[c]) for c in COMPONENT_COLUMNS])


# --- constants registry ---


def constants(d: int) -> dict:
    """Tabulated constants and radius presets for dimension d, with provenance."""
    out: dict = {"d": d, "presets": {
        "prm-star": {"formula": f"{PRM_STAR_COEFF} * (log n / n)^(1/d)",
                     "provenance": "imported convention, unit cube"},
        "fmt-star": {"formula": f"(1 + {FMT_STAR_ETA}) * 2 * ((1/d) * (1/b_d) * log n / n)^(1/d)",
                     "provenance": "imported convention with tuning slack, unit cube"},
    }}
    if d in GAMMA_STAR:
        out["gamma_star"] = {"value": gamma_star(d),
                             "provenance": "tabulated continuum percolation constant (2<=d<=11)"}
    else:
        out["gamma_star"] = {"error": f"no tabulated value for d={d} (range 2..11)"}
    if d in P_STAR:
        out["p_star"] = {"value": p_star(d),
                         "provenance": "tabulated lattice site threshold (2<=d<=13)"}
    else:
        out["p_star"] = {"error": f"no tabulated value for d={d} (range 2..13)"}
    return out
