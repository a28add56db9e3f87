"""Command-line entry point: ``reconlab <subcommand> ...``.

Every subcommand writes JSON reports and CSV tables under ``--out``.
"""

import argparse
import logging
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import metrics
from .dynamics import read_time_series, write_time_series
from .graph import read_edge_list
from .heuristics import METHODS, heuristic_scores
from .pipeline import (
    Candidate,
    config_from_dict,
    ingest_spike_data,
    load_config,
    posterior_predictive_check,
    read_spike_file,
    reconstruct,
    run_generation,
    run_model_selection,
    run_sweep,
)
from .pipeline.io import read_matrix, write_csv, write_json, write_matrix
from .single_edge import curves

log = logging.getLogger("reconlab")


def _config(args):
    cfg = load_config(args.config) if args.config else config_from_dict({})
    if args.seed is not None:
        cfg.seed = args.seed
    return cfg


def _out(args, cfg=None):
    out = Path(args.out if args.out is not None else (cfg.out if cfg is not None else "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _series(args, cfg):
    path = args.series or cfg.inputs.get("series")
    if path is None:
        raise SystemExit("no time series given (--series or inputs.series in the config)")
    return read_time_series(path)


def cmd_generate(args):
    cfg = _config(args)
    graphs, series = run_generation(cfg, _out(args, cfg))
    log.info("wrote %d realizations", len(graphs))


def cmd_reconstruct(args):
    cfg = _config(args)
    out = _out(args, cfg)
    x = _series(args, cfg)
    prior, dyn = cfg.inference_models()
    rec = reconstruct(x, prior, dyn, cfg.sampler_config(), cfg.chains, args.threads, cfg.pseudo_count)
    write_json(rec.summary(), out / "reconstruction.json")
    write_matrix(rec.edge_probability, out / "marginals.csv")
    log.info("psi = %.4f, log-evidence = %.3f", rec.report.reconstruction_index, rec.report.log_evidence)


def cmd_heuristic(args):
    x = read_time_series(args.series)
    out = _out(args)
    result = heuristic_scores(x, args.method)
    write_matrix(result.scores, out / f"scores_{args.method}.csv")
    if result.literal is not None:
        write_matrix(result.literal, out / f"scores_{args.method}_literal.csv")
    for flag in result.flags:
        log.warning("%s", flag)


def cmd_evaluate(args):
    g = read_edge_list(args.graph)
    truth = np.minimum(g.adjacency, 1)
    np.fill_diagonal(truth, 0)
    scores = read_matrix(args.scores)
    report = {"auc": metrics.auc(truth, scores)}
    if np.all((scores >= 0) & (scores <= 1)):
        report["posterior_loss"] = metrics.posterior_loss(truth, scores)
        report["posterior_loss_infinite"] = metrics.loss_is_infinite(truth, scores)
        report["mean_error"] = metrics.mean_error(truth, scores)
    write_json(report, _out(args) / "evaluation.json")


def cmd_select(args):
    cfg = _config(args)
    out = _out(args, cfg)
    x = _series(args, cfg)
    if not cfg.candidates:
        raise SystemExit("the config lists no candidates")
    cands = [Candidate.from_dict(c, k) for k, c in enumerate(cfg.candidates)]
    report = run_model_selection(x, cands, cfg.sampler_config(), cfg.chains, args.threads, cfg.pseudo_count)
    write_json(report.to_dict(), out / "selection.json")
    write_csv(["candidate", "chain", "log_evidence", "psi"], report.chain_rows(), out / "selection_chains.csv")
    sel = report.selected_candidate
    log.info("selected %s", None if sel is None else sel.name)


def cmd_ppc(args):
    cfg = _config(args)
    out = _out(args, cfg)
    x = _series(args, cfg)
    prior, dyn = cfg.inference_models()
    rec = reconstruct(x, prior, dyn, cfg.sampler_config(), cfg.chains, args.threads, cfg.pseudo_count)
    K = args.K if args.K is not None else int(cfg.ppc.get("K", 100))
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(2,)))
    report = posterior_predictive_check(rec.samples, x, dyn, K=K, rng=rng)
    write_json(report.to_dict(), out / "ppc.json")
    for flag in report.flags:
        log.warning("%s", flag)


def cmd_single_edge(args):
    sweep = None if args.sweep == "none" else args.sweep
    header, rows = curves(args.p, args.q, args.r, args.T, sweep=sweep)
    write_csv(header[0].split(","), rows, _out(args) / "single_edge.csv")


def cmd_ingest_spikes(args):
    units, duration = read_spike_file(args.input)
    if args.duration is not None:
        duration = args.duration
    rng = np.random.default_rng(args.seed if args.seed is not None else 0)
    segments = ingest_spike_data(units, duration, args.steps, args.extension_mean, args.segments, rng)
    out = _out(args)
    for k, seg in enumerate(segments):
        write_time_series(seg, out / f"segment_{k:03d}.txt")
    log.info("wrote %d segments of %d units", len(segments), len(units))


def cmd_sweep(args):
    cfg = _config(args)
    out = _out(args, cfg)
    result = run_sweep(cfg, threads=args.threads)
    write_csv(*result.realization_table(), out / "sweep_realizations.csv")
    write_csv(*result.summary_table(), out / "sweep_summary.csv")
    failed = sum(1 for r in result.rows if r["error"])
    if failed:
        log.warning("%d of %d tasks failed; see the error column", failed, len(result.rows))


def build_parser():
    parser = argparse.ArgumentParser(prog="reconlab", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for chains and sweep points")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p, series=False):
        p.add_argument("--config", help="JSON experiment config")
        if series:
            p.add_argument("--series", help="time-series file")
        return p

    with_config(sub.add_parser("generate", help="sample graphs and time series")).set_defaults(func=cmd_generate)
    with_config(sub.add_parser("reconstruct", help="posterior reconstruction"), True).set_defaults(
        func=cmd_reconstruct
    )

    p = sub.add_parser("heuristic", help="correlation, Granger or transfer-entropy scores")
    p.add_argument("--series", required=True)
    p.add_argument("--method", choices=METHODS, required=True)
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("evaluate", help="score a prediction against a true graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--scores", required=True, help="CSV matrix of marginals or scores")
    p.set_defaults(func=cmd_evaluate)

    with_config(sub.add_parser("select", help="evidence-based model selection"), True).set_defaults(
        func=cmd_select
    )
    p = with_config(sub.add_parser("ppc", help="posterior predictive check"), True)
    p.add_argument("--K", type=int, default=None)
    p.set_defaults(func=cmd_ppc)

    p = sub.add_parser("single-edge", help="closed-form single-edge curves")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--sweep", choices=("q", "T", "none"), default="none")
    p.set_defaults(func=cmd_single_edge)

    p = sub.add_parser("ingest-spikes", help="binarize spike trains into segments")
    p.add_argument("--input", required=True, help="JSON or unit,time CSV")
    p.add_argument("--duration", type=float, default=None, help="recording duration in seconds")
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--extension-mean", type=float, default=0.012, help="seconds")
    p.add_argument("--segments", type=int, default=100)
    p.set_defaults(func=cmd_ingest_spikes)

    with_config(sub.add_parser("sweep", help="parameter sweep with summary tables")).set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (ValueError, FileNotFoundError, jsonschema.ValidationError) as err:
        log.error("%s", err)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
