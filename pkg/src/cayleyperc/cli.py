"""Experiment runner.

    cayleyperc <experiment> --config <file> [--seed N] [--out DIR] [--no-figures]

Experiments: ball, walk, percolate, msf, cycles, bounds, pak-smirnova,
relative-pc.  Each run writes <experiment>.csv, <experiment>.json and one or
more <curve>.dat plot-data files with rendered <curve>.png figures alongside.
Exit codes: 0 success, 1 module error (structured in the JSON), 2 bad config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import balls, bounds, cycles, estimators, forests, percolation, walks
from .config import ExperimentConfig, parse_config
from .errors import CayleypercError, ConfigError
from .presentations import kfold_family, lazify
from .reporting import RunReport, emit_plotdata, write_csv, write_json


def _ball_for(cfg: ExperimentConfig, mode=None, radius=None):
    return balls.enumerate_ball(cfg.presentation, radius if radius is not None
                                else cfg.radius, mode or cfg.mode)


def run_ball(cfg, out, figures):
    ball = _ball_for(cfg)
    spheres = ball.sphere_sizes()
    rows = []
    cum = 0
    for r, s in enumerate(spheres):
        cum += int(s)
        rows.append([r, int(s), cum])
    write_csv(os.path.join(out, "ball.csv"),
              ["radius", "sphere_size", "ball_size"], rows)
    rep = RunReport("ball", cfg.echo(), cfg.master_seed)
    rep.add("n_vertices", ball.n_vertices, "certified-bound")
    rep.add("n_edges", ball.n_edges, "certified-bound")
    rep.add("geometric_degree", ball.geometric_degree, "certified-bound")
    emit_plotdata(out, "sphere_growth", ["radius", "sphere_size"],
                  [[r[0], r[1]] for r in rows], title=f"sphere sizes: {cfg.presentation.name}",
                  logy=ball.n_vertices > 100, figures=figures,
                  comment="sphere size by distance from the origin")
    return rep


def run_walk(cfg, out, figures):
    pres = kfold_family(cfg.presentation, cfg.kfold) if cfg.kfold > 1 else cfg.presentation
    est = walks.spectral_radius(pres, cfg.n_max, method=cfg.method
                                if cfg.method in ("raw_root", "polynomial_fit")
                                else "polynomial_fit")
    rows = [[n, est.return_probs[n], est.return_probs[n] ** (1.0 / n)]
            for n in sorted(est.return_probs)]
    write_csv(os.path.join(out, "walk.csv"),
              ["step", "return_probability", "root"], rows)
    rep = RunReport("walk", cfg.echo(), cfg.master_seed)
    rep.add("rho_hat", est.rho_hat, "estimate", stderr=est.fit_margin)
    rep.add("rho_lower_bound", est.lower_bound, "certified-bound")
    rep.add("rho_upper_bound", est.upper_bound, "estimate")
    emit_plotdata(out, "return_probabilities", ["step", "return_probability"],
                  [[r[0], r[1]] for r in rows], logy=True, figures=figures,
                  title=f"p_2n: {pres.name}",
                  comment="even-step origin return probabilities")
    return rep


def run_percolate(cfg, out, figures):
    ball = _ball_for(cfg, mode="geometric")
    ps = list(cfg.p_grid) if cfg.p_grid else [cfg.p if cfg.p is not None else 0.5]
    floor = cfg.size_floor if cfg.size_floor is not None else cfg.radius
    rows, summary = percolation.percolate_sweep(ball, ps, cfg.trials,
                                                cfg.master_seed, floor)
    write_csv(os.path.join(out, "percolate.csv"),
              ["p", "trial", "qualifying", "largest", "second_largest",
               "largest_density"],
              [[r["p"], r["trial"], r["qualifying"], r["largest"],
                r["second_largest"], r["largest_density"]] for r in rows])
    rep = RunReport("percolate", cfg.echo(), cfg.master_seed)
    for p in sorted(summary):
        s = summary[p]
        rep.add(f"largest_density[p={p}]", s["largest_density_mean"], "estimate",
                stderr=s["largest_density_stderr"])
        rep.add(f"qualifying[p={p}] ({s['note']})", s["qualifying_mean"], "diagnostic")
    emit_plotdata(out, "giant_density",
                  ["p", "largest_density_mean", "qualifying_mean"],
                  [[p, summary[p]["largest_density_mean"],
                    summary[p]["qualifying_mean"]] for p in summary],
                  figures=figures, title=f"largest-cluster density: {cfg.presentation.name}",
                  comment="census summary; qualifying counts are a heuristic N_p proxy")
    return rep


def run_msf(cfg, out, figures):
    radii = list(cfg.radius_grid) if cfg.radius_grid else [cfg.radius]
    rows = []
    reports = []
    for r in radii:
        g = forests.fmsf_wmsf_gap(cfg.presentation, r, cfg.trials, cfg.master_seed)
        reports.append(g)
        rows.append([r, g.free_root_degree_mean, g.wired_root_degree_mean,
                     g.root_degree_gap, g.gap_stderr, g.symdiff_density_mean])
    write_csv(os.path.join(out, "msf.csv"),
              ["radius", "free_root_degree", "wired_root_degree", "gap",
               "gap_stderr", "symdiff_density"], rows)
    rep = RunReport("msf", cfg.echo(), cfg.master_seed)
    last = reports[-1]
    rep.add("free_root_degree_mean", last.free_root_degree_mean, "estimate")
    rep.add("wired_root_degree_mean", last.wired_root_degree_mean, "estimate")
    rep.add("root_degree_gap", last.root_degree_gap, "estimate", stderr=last.gap_stderr)
    rep.add("free_cost_proxy", last.free_cost_proxy, "estimate")
    rep.add("wired_cost_proxy", last.wired_cost_proxy, "estimate")
    rep.add("wired_components_attached", last.wired_components_attached, "diagnostic")
    emit_plotdata(out, "root_degree_gap", ["radius", "gap"],
                  [[r[0], r[3]] for r in rows], figures=figures,
                  title=f"free-wired root-degree gap: {cfg.presentation.name}",
                  comment="origin root-degree gap between free and wired forests")
    return rep


def run_cycles(cfg, out, figures):
    n_max = cfg.gamma_n_max or cfg.n_max
    radius = max(cfg.radius, (n_max + 1) // 2)
    ball = _ball_for(cfg, mode="geometric", radius=radius)
    census = cycles.count_simple_cycles(ball, n_max)
    gamma, points = cycles.gamma_estimate(census)
    rows = [[n, census.counts[n], points[n]] for n in sorted(census.counts)]
    write_csv(os.path.join(out, "cycles.csv"), ["n", "a_n", "a_n_root"], rows)
    rep = RunReport("cycles", cfg.echo(), cfg.master_seed)
    rep.add("gamma_hat (uncertified: finite census of a limsup)", gamma, "estimate")
    rep.add("cycles_total", census.total(), "certified-bound")
    emit_plotdata(out, "gamma_points", ["n", "a_n_root"],
                  [[r[0], r[2]] for r in rows], figures=figures,
                  hlines={"gamma_hat": gamma} if rows else None,
                  title=f"a_n^(1/n): {cfg.presentation.name}",
                  comment="n-th roots of origin cycle counts (uncertified gamma estimate)")
    return rep


def run_bounds(cfg, out, figures):
    pres = kfold_family(cfg.presentation, cfg.kfold) if cfg.kfold > 1 else cfg.presentation
    rpt = bounds.bound_chain(pres, cfg.radius, cfg.n_max, cfg.subset_cap,
                             gamma_n_max=cfg.gamma_n_max or None,
                             k_used=cfg.kfold if cfg.kfold > 1 else None)
    rep = RunReport("bounds", cfg.echo(), cfg.master_seed)
    rep.add("d", rpt.d, "certified-bound")
    rep.add("rho_hat", rpt.rho.rho_hat, "estimate", stderr=rpt.rho.fit_margin)
    rep.add("rho_upper", rpt.rho.upper_bound, "estimate")
    rep.add("rho_lower", rpt.rho.lower_bound, "certified-bound")
    if rpt.iota is not None:
        rep.add("iota_upper", rpt.iota.iota_upper,
                "certified-bound" if rpt.iota.certified else "estimate")
        if rpt.iota.iota_exact is not None:
            rep.add("iota_exact", rpt.iota.iota_exact, "certified-bound")
        rep.add("iota_lower_from_rho", rpt.iota.iota_lower_from_rho, "estimate")
        rep.add("mohar_geometric_valid", rpt.mohar_geometric_valid, "diagnostic")
    if rpt.gamma_hat is not None:
        rep.add("gamma_hat (uncertified)", rpt.gamma_hat, "estimate")
    rep.add("pc_upper_from_rho", rpt.pc_upper_from_rho, "estimate")
    if rpt.pc_upper_from_iota is not None:
        rep.add("pc_upper_from_iota", rpt.pc_upper_from_iota,
                "certified-bound" if (rpt.iota and rpt.iota.iota_exact is not None)
                else "diagnostic")
    if rpt.pu_lower is not None:
        rep.add(f"pu_lower (source: {rpt.pu_lower_source})", rpt.pu_lower, "estimate")
    rep.add("chain_valid (rho_upper <= 1/2)", rpt.chain_valid, "diagnostic")
    links = [["pc_upper_from_rho", rpt.pc_upper_from_rho],
             ["one_over_d_rho", 1.0 / (rpt.d * rpt.rho.upper_bound)
              if rpt.rho.upper_bound > 0 else float("inf")]]
    if rpt.pu_lower is not None:
        links.append(["pu_lower", rpt.pu_lower])
    write_csv(os.path.join(out, "bounds.csv"), ["link", "value"], links)
    emit_plotdata(out, "bound_chain", ["link_index", "value"],
                  [[i, v] for i, (_, v) in enumerate(links)], figures=figures,
                  title=f"bound chain: {pres.name}",
                  comment="chain links in order: " + ", ".join(l for l, _ in links))
    return rep


def run_pak_smirnova(cfg, out, figures):
    pres = cfg.presentation
    if not pres.contains_identity:
        pres = lazify(pres)
    k, size, rho_k = bounds.pak_smirnova_k(pres, n_max=max(cfg.n_max, 120))
    est = walks.spectral_radius(pres, max(cfg.n_max, 120))
    rep = RunReport("pak-smirnova", cfg.echo(), cfg.master_seed)
    rep.add("k", k, "estimate")
    rep.add("family_size", size, "certified-bound")
    rep.add("rho_upper", est.upper_bound, "estimate")
    rep.add("rho_k_bound", rho_k, "estimate")
    rows = [[j, est.upper_bound ** j] for j in range(1, k + 1)]
    write_csv(os.path.join(out, "pak_smirnova.csv"), ["k", "rho_upper_pow_k"], rows)
    emit_plotdata(out, "rho_powers", ["k", "rho_upper_pow_k"], rows,
                  hlines={"1/2": 0.5}, figures=figures,
                  title=f"rho^k search: {pres.name}",
                  comment="spectral upper bound raised to k; first k at or below 1/2 wins")
    return rep


def run_relative_pc(cfg, out, figures):
    p = cfg.p if cfg.p is not None else 0.8
    est = estimators.relative_pc(cfg.presentation, cfg.radius, p, cfg.trials,
                                 cfg.master_seed, method=cfg.method, L=cfg.L)
    per = est.per_trial
    rows = [[t, float(per[t])] for t in range(len(per)) if not np.isnan(per[t])]
    write_csv(os.path.join(out, "relative_pc.csv"), ["trial", "estimate"], rows)
    rep = RunReport("relative-pc", cfg.echo(), cfg.master_seed)
    rep.add("pc_rel_hat", est.pc_hat, "estimate", stderr=est.stderr)
    rep.add("failures", est.failures, "diagnostic")
    emit_plotdata(out, "relative_pc_trials", ["trial", "estimate"], rows,
                  figures=figures, title=f"relative p_c at p={p}",
                  comment=f"per-trial p_c estimates inside the p={p} open subgraph")
    return rep


_RUNNERS = {
    "ball": run_ball,
    "walk": run_walk,
    "percolate": run_percolate,
    "msf": run_msf,
    "cycles": run_cycles,
    "bounds": run_bounds,
    "pak-smirnova": run_pak_smirnova,
    "relative-pc": run_relative_pc,
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cayleyperc", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("experiment", help="|".join(_RUNNERS))
    ap.add_argument("--config", required=True, help="flat key=value config file")
    ap.add_argument("--seed", type=int, default=None, help="override master_seed")
    ap.add_argument("--out", default=None, help="output directory (default: config or cwd)")
    ap.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    args = ap.parse_args(argv)

    if args.experiment not in _RUNNERS:
        print(f"error: unknown experiment {args.experiment!r}", file=sys.stderr)
        return 2
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = parse_config(text, args.experiment)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.seed is not None:
        cfg = parse_config(text + f"\nmaster_seed = {args.seed}\n", args.experiment)
    out = args.out or cfg.out_dir or "."
    os.makedirs(out, exist_ok=True)

    t0 = time.time()
    try:
        rep = _RUNNERS[cfg.experiment](cfg, out, figures=not args.no_figures)
    except (CayleypercError, ValueError, RuntimeError) as exc:
        err_rep = RunReport(cfg.experiment, cfg.echo(), cfg.master_seed)
        err_rep.wall_s = time.time() - t0
        payload = err_rep.to_json_dict()
        payload["error"] = {"type": type(exc).__name__, "message": str(exc)}
        path = os.path.join(out, f"{cfg.experiment.replace('-', '_')}.json")
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rep.wall_s = time.time() - t0
    write_json(os.path.join(out, f"{cfg.experiment.replace('-', '_')}.json"), rep)
    for name, stat in sorted(rep.stats.items()):
        se = f" +- {stat['stderr']:.4g}" if stat.get("stderr") else ""
        print(f"{name}: {stat['value']}{se}  [{stat['provenance']}]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
