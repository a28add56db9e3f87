"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``. Tolerances are the stated ones; a
failing line is reported as such, never relaxed.
"""

import functools
import math
import sys
import time
from collections import Counter
from itertools import product
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import chisquare

sys.path.insert(0, str(Path(__file__).parent))
import conftest  # noqa: E402
from conftest import graph_key, tv_distance  # noqa: E402

from reconlab._math import logsumexp2  # noqa: E402
from reconlab.dynamics import DynamicsModel, simulate  # noqa: E402
from reconlab.graph import Graph  # noqa: E402
from reconlab.infotheory import (  # noqa: E402
    delta_prior_reconstructability,
    enumerate_evidence,
    enumerate_posterior,
    estimate_log_evidence,
    exact_mutual_information_model,
    mf_mutual_information,
    posterior_entropy,
)
from reconlab.pipeline import (  # noqa: E402
    binarize_spikes,
    config_from_dict,
    posterior_predictive_check,
    reconstruct,
    run_sweep,
)
from reconlab.priors import EdgeCountPrior, PriorModel, enumerate_prior_support, log_prior, sample_prior  # noqa: E402
from reconlab.sampler import SamplerConfig, run_chain  # noqa: E402
from reconlab.single_edge import (  # noqa: E402
    SingleEdgeModel,
    edge_posterior_entropy,
    edge_posterior_entropy_bruteforce,
    edge_reconstructability,
)

pytestmark = pytest.mark.slow


def record(k, title, ok, detail, seconds):
    line = f"CRITERION {k:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{seconds:.1f} s]"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line, flush=True)
    return ok


def delta(e):
    return EdgeCountPrior("delta", e)


# --------------------------------------------------------------------------
# 1. single-edge exactness
# --------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    p, r, T = 0.5, 0.2, 20
    psi_equal = abs(edge_reconstructability(SingleEdgeModel(p, r, r, T)))
    q_grid = [q for q in np.linspace(0.02, 0.98, 49) if abs(q - r) > 1e-9]
    T_grid = [1, 2, 5, 10, 20, 50, 100, 200]
    worst_drop = 0.0
    for q in q_grid:
        psi = np.array([edge_reconstructability(SingleEdgeModel(p, q, r, t)) for t in T_grid])
        worst_drop = max(worst_drop, float(-np.diff(psi).min()))
    psi_high = edge_reconstructability(SingleEdgeModel(p, 0.999, r, 100))
    grid = np.linspace(0.05, 0.95, 10)
    entropy_err = max(
        abs(edge_posterior_entropy(SingleEdgeModel(p, q, rr, T)) - edge_posterior_entropy_bruteforce(SingleEdgeModel(p, q, rr, T)))
        for q, rr in product(grid, grid)
    )
    secs = time.perf_counter() - t0
    ok = psi_equal <= 1e-12 and worst_drop <= 0.0 and psi_high > 0.99 and entropy_err <= 1e-12 and secs < 1.0
    detail = (f"|psi(q=r)|={psi_equal:.1e}, largest drop in T={worst_drop:.1e}, psi(q=0.999,T=100)={psi_high:.5f}, "
              f"entropy vs double sum max err={entropy_err:.1e} over 100 (q,r)")
    return record(1, "single-edge exactness", ok, detail, secs)


# --------------------------------------------------------------------------
# 2. enumeration oracles
# --------------------------------------------------------------------------

# short series and weak coupling keep the posteriors spread over many graphs
ORACLE_INSTANCES = {
    "glauber": (DynamicsModel("glauber", {"J": 0.3}), 30),
    "sis": (DynamicsModel("sis", {"infection": 0.15, "recovery": 0.5}, alpha0=0.05, beta0=0.05), 20),
}


def criterion_2():
    t0 = time.perf_counter()
    parts = {"a": [], "b": [], "c": []}
    oks = {"a": True, "b": True, "c": True}
    for k, (name, (dyn, T)) in enumerate(ORACLE_INSTANCES.items()):
        prior = PriorModel("er_simple", delta(3))
        rng = np.random.default_rng(100 + k)
        g, _ = sample_prior(prior, rng, 4)
        x = simulate(g, dyn, T, rng)
        # 10^5 retained states x 10 proposals = 10^6 MH steps
        cfg = SamplerConfig(burn_in=1000, thinning=1, samples=100_000, sweep_size=10, seed=200 + k)
        samples = run_chain(x, prior, dyn, cfg)
        counts = Counter(graph_key(s.graph()) for s in samples)
        emp = {key: c / len(samples) for key, c in counts.items()}
        exact_post = enumerate_posterior(x, prior, dyn)
        exact = {graph_key(h): 2**lp for h, lp in exact_post}
        tv = tv_distance(emp, exact)
        est = estimate_log_evidence(samples[::10])
        true_ev = enumerate_evidence(x, prior, dyn)
        oks["a"] &= tv < 0.05
        oks["c"] &= est.value <= true_ev + 3 * est.se
        parts["a"].append(f"{name} T={T} H(G|x)={posterior_entropy(exact_post):.2f} bits TV={tv:.4f}")
        parts["c"].append(f"{name} est {est.value:.4f}+-{est.se:.4f} vs exact {true_ev:.4f}")

    for k, (name, (dyn, _)) in enumerate(ORACLE_INSTANCES.items()):
        prior = PriorModel("er_simple", delta(1))
        T = 6
        exact_mi = exact_mutual_information_model(prior, dyn, 3, T)
        rng = np.random.default_rng(300 + k)
        datasets = []
        for d in range(100):
            g, _ = sample_prior(prior, rng, 3)
            x = simulate(g, dyn, T, rng)
            cfg = SamplerConfig(burn_in=50, thinning=1, samples=500, sweep_size=3, seed=1000 * k + d)
            datasets.append((g, run_chain(x, prior, dyn, cfg), log_prior(prior, g)))
        mi, se = mf_mutual_information(datasets)
        oks["b"] &= mi <= exact_mi + 3 * se
        parts["b"].append(f"{name} MF MI {mi:.4f}+-{se:.4f} vs exact {exact_mi:.4f}")
    secs = time.perf_counter() - t0
    ok = all(oks.values()) and secs < 300
    detail = "; ".join(f"({k}) {'ok' if oks[k] else 'FAIL'}: {', '.join(v)}" for k, v in parts.items())
    return record(2, "enumeration oracles", ok, detail, secs)


# --------------------------------------------------------------------------
# 3 and 4. Glauber coupling sweep at N=30
# --------------------------------------------------------------------------

SWEEP_BASE = {
    "prior": {"kind": "er_simple", "edge_count": {"delta": 60}},
    "n_nodes": 30,
    "T": 300,
    "sampler": {"burn_in": 500, "thinning": 5, "samples": 100},
    "heuristics": ["corr", "granger", "te"],
    "seed": 2024,
}
COUPLING_GRID = [0.0, 0.05, 0.1, 0.2, 0.4, 0.8]


@functools.lru_cache(maxsize=None)
def coupling_sweep():
    t0 = time.perf_counter()
    spec = {**SWEEP_BASE, "dynamics": {"kind": "glauber", "params": {"J": 0.1}}, "realizations": 24,
            "sweep": {"param": "J", "grid": COUPLING_GRID}}
    return run_sweep(config_from_dict(spec)), time.perf_counter() - t0


def _column(result, name):
    header, body = result.summary_table()
    return np.array([row[header.index(name)] for row in body], dtype=float)


def criterion_3():
    result, secs = coupling_sweep()
    failed = sum(1 for r in result.rows if r["error"])
    tdg = _column(result, "auc_mean")
    heur = {m: _column(result, f"auc_{m}_mean") for m in ("corr", "granger", "te")}
    best = np.max(np.vstack(list(heur.values())), axis=0)
    coupled = np.array(COUPLING_GRID) > 0
    wins = bool(np.all(tdg[coupled] >= best[coupled]))
    auc0 = float(tdg[0])
    ok = wins and abs(auc0 - 0.5) <= 0.05 and failed == 0 and secs < 1800
    cells = ", ".join(f"J={j}: {a:.3f} vs {b:.3f}" for j, a, b in zip(COUPLING_GRID, tdg, best))
    detail = f"mean AUC posterior vs best heuristic [{cells}]; AUC(J=0)={auc0:.3f}; failed tasks={failed}"
    return record(3, "posterior AUC beats heuristics", ok, detail, secs)


def criterion_4():
    t0 = time.perf_counter()
    result, _ = coupling_sweep()
    rows = [r for r in result.rows if not r["error"]]
    psi = np.array([r["psi"] for r in rows])
    line = np.array([1.0 - r["posterior_loss"] / r["prior_surprisal"] for r in rows])
    ss_res = float(np.sum((psi - line) ** 2))
    ss_tot = float(np.sum((psi - psi.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot
    slope, intercept = np.polyfit(line, psi, 1)
    fit_r2 = float(np.corrcoef(line, psi)[0, 1] ** 2)
    ok = r2 >= 0.9
    detail = (f"R^2 of psi against 1 - loss/H over {len(rows)} runs = {r2:.4f} "
              f"(least-squares fit psi = {slope:.3f} x + {intercept:.3f}, R^2 {fit_r2:.4f})")
    return record(4, "psi follows the loss line", ok, detail, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# 5. inference-coupling sweep around J* = 0.3
# --------------------------------------------------------------------------

INFERENCE_GRID = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]


def criterion_5():
    t0 = time.perf_counter()
    spec = {**SWEEP_BASE, "dynamics": {"kind": "glauber", "params": {"J": 0.3}}, "realizations": 8,
            "heuristics": [], "sweep": {"param": "J", "grid": INFERENCE_GRID, "target": "inference"}}
    result = run_sweep(config_from_dict(spec))
    ce = _column(result, "evidence_ce_mean")
    psi = _column(result, "psi_mean")
    loss = _column(result, "posterior_loss_mean")
    star = INFERENCE_GRID.index(0.3)
    ce_ok = int(np.argmin(ce)) == star
    psi_ok = bool(np.all(np.diff(psi) > 0))
    loss_ok = abs(int(np.argmin(loss)) - star) <= 1
    ok = ce_ok and psi_ok and loss_ok
    fmt = lambda v: "[" + ", ".join(f"{a:.3f}" for a in v) + "]"  # noqa: E731
    detail = (f"grid {INFERENCE_GRID}; evidence CE {fmt(ce)} argmin J={INFERENCE_GRID[int(np.argmin(ce))]}; "
              f"psi {fmt(psi)} ({'strictly increasing' if psi_ok else 'not increasing'}); "
              f"loss {fmt(loss)} argmin J={INFERENCE_GRID[int(np.argmin(loss))]}")
    return record(5, "inference coupling sweep", ok, detail, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# 6. information-gain bounds over every report built in the session
# --------------------------------------------------------------------------


def bound_bank():
    """Reconstructions across priors and dynamics, some with free parameters."""
    priors = [
        PriorModel("er_simple", delta(5)),
        PriorModel("er_multi", delta(5)),
        PriorModel("ucm", delta(5)),
        PriorModel("sbm", delta(5)),
        PriorModel("cm", degrees=[3, 2, 2, 1, 1, 1]),
    ]
    dyns = [
        DynamicsModel("glauber", {"J": 0.7}, free=("J",), bounds={"J": (0.0, 2.0)}),
        DynamicsModel("sis", {"infection": 0.3, "recovery": 0.4}, alpha0=0.02, beta0=0.02),
        DynamicsModel("voter", {}, alpha0=0.05, beta0=0.05),
        DynamicsModel("cowan", {"a": 2.0, "recovery": 0.3, "mu": 1.0, "nu": 1.0}, alpha0=0.01, beta0=0.01),
    ]
    for k, (prior, dyn) in enumerate(product(priors, dyns)):
        rng = np.random.default_rng(500 + k)
        g, _ = sample_prior(prior, rng, 6)
        x = simulate(g, dyn, 80, rng)
        reconstruct(x, prior, dyn, SamplerConfig(burn_in=50, thinning=2, samples=60, seed=k), n_chains=2)


def criterion_6():
    t0 = time.perf_counter()
    bound_bank()
    reports = list(conftest.INFO_REPORTS)
    bad, undefined = [], []
    for rep in reports:
        gain, lam, psi = rep.information_gain, rep.lambda_, rep.reconstruction_index
        if not (gain >= 0 and gain <= lam + 1e-9 and 0 <= psi <= 1):
            # undefined reports still fail; they are only listed apart
            if "no_samples_on_support" in rep.flags or "undefined_lambda_zero" in rep.flags:
                undefined.append(rep)
            else:
                bad.append(f"I={gain:.4g} Lambda={lam:.4g} psi={psi:.4g} ({rep.estimator})")
    ok = len(reports) > 0 and not bad and not undefined
    detail = (f"{len(reports)} reports checked, {len(bad) + len(undefined)} out of bounds: "
              f"{len(bad)} numeric, {len(undefined)} undefined (no sample on the support or Lambda=0)")
    if bad:
        detail += "; first: " + "; ".join(bad[:3])
    return record(6, "0 <= I <= Lambda and 0 <= psi <= 1", ok, detail, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# 7. delta-prior tail
# --------------------------------------------------------------------------


def criterion_7():
    t0 = time.perf_counter()
    g = Graph.from_edges(3, [(0, 1)])
    dyn = DynamicsModel("glauber", {"J": 1.0})
    eps = 10.0 ** -np.arange(1, 7)
    psi = delta_prior_reconstructability(g, dyn, eps, 4)
    decreasing = bool(np.all(np.diff(psi) < 0))
    scaled = psi[3:] * np.log2(1 / eps[3:])
    spread = float((scaled.max() - scaled.min()) / scaled.mean())
    secs = time.perf_counter() - t0
    ok = decreasing and psi[-1] < psi[0] and spread < 0.2 and secs < 60
    detail = (f"psi(eps=1e-1..1e-6)=[{', '.join(f'{v:.4g}' for v in psi)}]; "
              f"psi*log2(1/eps) on 1e-4..1e-6 = [{', '.join(f'{v:.4f}' for v in scaled)}], spread {spread:.1%}")
    return record(7, "delta-prior tail", ok, detail, secs)


# --------------------------------------------------------------------------
# 8. prior normalization and stub-matching frequencies
# --------------------------------------------------------------------------


def _pairings(stubs):
    if not stubs:
        yield []
        return
    first, rest = stubs[0], stubs[1:]
    for k in range(len(rest)):
        for tail in _pairings(rest[:k] + rest[k + 1:]):
            yield [(first, rest[k])] + tail


def cm_pairing_distribution(degrees):
    stubs = [i for i, d in enumerate(degrees) for _ in range(d)]
    counts = Counter()
    for pairing in _pairings(list(range(len(stubs)))):
        edges = sorted(tuple(sorted((stubs[a], stubs[b]))) for a, b in pairing)
        counts[tuple(edges)] += 1
    total = sum(counts.values())
    return {k: v / total for k, v in counts.items()}


def criterion_8():
    t0 = time.perf_counter()
    worst = {}
    for n in range(1, 5):
        for e in range(0, 4):
            for name, model in [
                ("er", PriorModel("er_simple", delta(e))),
                ("er_multi", PriorModel("er_multi", delta(e))),
                ("ucm", PriorModel("ucm", delta(e))),
                ("sbm", PriorModel("sbm", delta(e), sbm_multigraph=True)),
            ]:
                if name == "er" and e > n * (n - 1) // 2:
                    continue
                total = logsumexp2([lp for _, lp in enumerate_prior_support(model, n)])
                worst[name] = max(worst.get(name, 0.0), abs(2**total - 1))
    for degrees in ([1, 1], [2, 1, 1], [2, 2], [3, 1, 1, 1], [2, 2, 1, 1], [1, 1, 1, 1], [2, 2, 2]):
        model = PriorModel("cm", degrees=degrees)
        total = logsumexp2([lp for _, lp in enumerate_prior_support(model, len(degrees))])
        worst["cm"] = max(worst.get("cm", 0.0), abs(2**total - 1))
    literal = PriorModel("sbm", delta(2))
    literal_sum = 2 ** logsumexp2([lp for _, lp in enumerate_prior_support(literal, 3)])

    degrees = [3, 2, 2, 1]
    dist = cm_pairing_distribution(degrees)
    rng = np.random.default_rng(8)
    draws = 20_000
    seen = Counter()
    for _ in range(draws):
        g, _ = sample_prior(PriorModel("cm", degrees=degrees), rng, len(degrees))
        seen[tuple(sorted((i, j) for i, j, m in g.edges() for _ in range(m)))] += 1
    keys = sorted(dist)
    obs = np.array([seen.get(k, 0) for k in keys])
    unexpected = draws - obs.sum()
    p_value = chisquare(obs, np.array([dist[k] for k in keys]) * draws).pvalue
    ok = max(worst.values()) <= 1e-10 and p_value > 0.01 and unexpected == 0
    detail = (", ".join(f"{k} max|sum-1|={v:.1e}" for k, v in worst.items())
              + f" (literal simple-graph SBM sums to {literal_sum:.4f}, by construction); "
              + f"stub matching chi2 p={p_value:.3f} over {len(keys)} multigraphs, {unexpected} off-support draws")
    return record(8, "prior normalization", ok, detail, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# 9. posterior predictive calibration
# --------------------------------------------------------------------------


def criterion_9():
    t0 = time.perf_counter()
    prior = PriorModel("er_simple", delta(15))
    dyn = DynamicsModel("glauber", {"J": 0.5})
    rng = np.random.default_rng(9)
    trials = 200
    inside = Counter()
    for trial in range(trials):
        g, _ = sample_prior(prior, rng, 10)
        x = simulate(g, dyn, 100, rng)
        samples = run_chain(x, prior, dyn, SamplerConfig(burn_in=200, thinning=5, samples=100, seed=trial))
        rep = posterior_predictive_check(samples, x, dyn, K=100, rng=rng)
        for name, chk in rep.checks.items():
            inside[name] += chk.inside_band
    rate = inside["firing_rate"] / trials
    ok = 0.85 <= rate <= 0.95
    others = ", ".join(f"{k} {inside[k] / trials:.1%}" for k in ("corr_connected", "corr_disconnected"))
    detail = f"firing rate inside the central 90% band in {rate:.1%} of {trials} trials (also: {others})"
    return record(9, "predictive check calibration", ok, detail, time.perf_counter() - t0), rate


# --------------------------------------------------------------------------
# 10. recorded-data figures: substituted
# --------------------------------------------------------------------------


def criterion_10(calibration_ok):
    t0 = time.perf_counter()
    rng = np.random.default_rng(10)
    one = binarize_spikes([[0.5]], 1.0, 100, 0.0, rng).sum() == 1
    empty = binarize_spikes([[], [0.2]], 1.0, 100, 0.0, rng)[0].sum() == 0
    n = 100_000
    x = binarize_spikes([np.arange(n) * 200.0], n * 200.0, n * 200, 10.0, rng)[0].astype(np.int8)
    edges = np.diff(np.r_[0, x, 0])
    runs = np.flatnonzero(edges == -1) - np.flatnonzero(edges == 1)
    mean_ok = abs(runs.mean() / 10.0 - 1) <= 0.05
    try:
        binarize_spikes([[2.0]], 1.0, 10, 0.0, rng)
        raises = False
    except ValueError:
        raises = True
    ok = bool(one and empty and mean_ok and raises and calibration_ok)
    detail = (f"not reproducible without the recorded dataset; substitute checks: single spike {one}, empty unit "
              f"{empty}, mean run {runs.mean():.3f} steps for mean 10, late spike rejected {raises}, "
              f"criterion 9 {'passed' if calibration_ok else 'failed'}")
    return record(10, "recorded-data figures (substituted)", ok, detail, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# pytest entry points, in criterion order; 6 runs last
# --------------------------------------------------------------------------

_state = {}


def test_criterion_01_single_edge():
    assert criterion_1()


def test_criterion_02_enumeration_oracles():
    assert criterion_2()


def test_criterion_03_auc_against_heuristics():
    assert criterion_3()


def test_criterion_04_loss_line():
    assert criterion_4()


def test_criterion_05_inference_sweep():
    assert criterion_5()


def test_criterion_07_delta_prior_tail():
    assert criterion_7()


def test_criterion_08_prior_normalization():
    assert criterion_8()


def test_criterion_09_ppc_calibration():
    ok, _ = criterion_9()
    _state["calibration"] = ok
    assert ok


def test_criterion_10_substituted():
    if "calibration" not in _state:
        _state["calibration"] = criterion_9()[0]
    assert criterion_10(_state["calibration"])


def test_criterion_06_information_bounds():
    assert criterion_6()


if __name__ == "__main__":
    results = [criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_7(), criterion_8()]
    calibration, _ = criterion_9()
    results += [calibration, criterion_10(calibration), criterion_6()]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
