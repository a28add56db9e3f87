"""Model selection by evidence: reconstruct with each candidate, keep the one
with the largest evidence estimate, report its reconstruction index."""

import math
from dataclasses import dataclass, field

import numpy as np

from ..dynamics import DynamicsModel
from ..priors import PriorModel
from .reconstruct import reconstruct


@dataclass
class Candidate:
    name: str
    prior: PriorModel
    dynamics: DynamicsModel

    @classmethod
    def from_dict(cls, spec, index=0):
        return cls(
            spec.get("name", f"candidate_{index}"),
            PriorModel.from_dict(spec["prior"]),
            DynamicsModel.from_dict(spec["dynamics"]),
        )


@dataclass
class CandidateResult:
    name: str
    index: int
    log_evidence: float = math.nan
    log_evidence_se: float = math.nan
    psi: float = math.nan
    psi_se: float = math.nan
    lam: float = math.nan
    chain_evidence: list = field(default_factory=list)
    chain_psi: list = field(default_factory=list)
    failed: bool = False
    error: str = None
    flags: list = field(default_factory=list)
    reconstruction: object = None

    def to_dict(self):
        return {
            "name": self.name,
            "index": self.index,
            "log_evidence": self.log_evidence,
            "log_evidence_se": self.log_evidence_se,
            "psi": self.psi,
            "psi_se": self.psi_se,
            "lambda": self.lam,
            "chain_log_evidence": self.chain_evidence,
            "chain_psi": self.chain_psi,
            "failed": self.failed,
            "error": self.error,
            "flags": self.flags,
        }


@dataclass
class ModelSelectionReport:
    candidates: list
    selected: int

    @property
    def selected_candidate(self):
        return None if self.selected is None else self.candidates[self.selected]

    @property
    def psi(self):
        c = self.selected_candidate
        return math.nan if c is None else c.psi

    def bayes_factors(self):
        """``log2 B[a, b] = log2 zeta_a - log2 zeta_b``; NaN for failed
        candidates."""
        z = np.array([c.log_evidence if not c.failed else math.nan for c in self.candidates])
        with np.errstate(invalid="ignore"):
            return z[:, None] - z[None, :]

    def to_dict(self):
        c = self.selected_candidate
        return {
            "selected": None if c is None else c.name,
            "selected_index": self.selected,
            "psi": self.psi,
            "candidates": [r.to_dict() for r in self.candidates],
            "log2_bayes_factors": self.bayes_factors().tolist(),
            "names": [r.name for r in self.candidates],
        }

    def chain_rows(self):
        """``(candidate, chain, log_evidence, psi)`` rows for the
        evidence vs index diagram."""
        rows = []
        for c in self.candidates:
            for k, (z, p) in enumerate(zip(c.chain_evidence, c.chain_psi)):
                rows.append((c.name, k, z, p))
        return rows


def _mean_se(values):
    v = np.asarray(values, dtype=float)
    if len(v) == 0:
        return math.nan, math.nan
    if not np.all(np.isfinite(v)):
        return float(np.mean(v)) if np.all(v == -math.inf) else math.nan, math.nan
    se = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else math.nan
    return float(v.mean()), se


def select_index(candidates):
    """Largest evidence; ties go to larger psi, then to input order."""
    best = None
    for c in candidates:
        if c.failed or not math.isfinite(c.log_evidence):
            continue
        key = (c.log_evidence, c.psi if math.isfinite(c.psi) else -math.inf)
        if best is None or key > best[0]:
            best = (key, c.index)
    return None if best is None else best[1]


def run_model_selection(x, candidates, config=None, n_chains=1, threads=1, pseudo_count=0.0):
    if not candidates:
        raise ValueError("model selection needs at least one candidate")
    results = []
    for k, cand in enumerate(candidates):
        res = CandidateResult(cand.name, k)
        try:
            rec = reconstruct(x, cand.prior, cand.dynamics, config, n_chains, threads, pseudo_count)
        except Exception as err:
            res.failed = True
            res.error = f"{type(err).__name__}: {err}"
            results.append(res)
            continue
        res.reconstruction = rec
        res.chain_evidence = [r.log_evidence for r in rec.chain_reports]
        res.chain_psi = [r.reconstruction_index for r in rec.chain_reports]
        res.flags = sorted({f for r in rec.chain_reports for f in r.flags})
        if n_chains > 1:
            res.log_evidence, res.log_evidence_se = _mean_se(res.chain_evidence)
            res.psi, res.psi_se = _mean_se(res.chain_psi)
            res.lam = float(np.mean([r.lambda_ for r in rec.chain_reports]))
        else:
            r = rec.report
            res.log_evidence, res.log_evidence_se = r.log_evidence, r.log_evidence_se
            res.psi, res.lam = r.reconstruction_index, r.lambda_
        if not math.isfinite(res.log_evidence):
            res.flags.append("non_finite_evidence")
        results.append(res)
    return ModelSelectionReport(results, select_index(results))
