"""Binary Markov-chain dynamics on graphs (Glauber, SIS, Voter, Cowan).

A node's next state depends on its own state and on its counts of inactive
(``n``) and active (``m``) neighbors. With spontaneous rates::

    alpha = (1 - alpha0) * alpha_raw(n, m) + alpha0     # 0 -> 1
    beta  = (1 - beta0)  * beta_raw(n, m)  + beta0      # 1 -> 0

Time series are ``(N, T)`` arrays of 0/1. The initial state is Bernoulli(1/2)
per node; its probability does not depend on the graph and is left out of
:func:`log_likelihood` unless ``include_initial=True``.
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numba import njit

from .graph import neighbor_activity

GLAUBER, SIS, VOTER, COWAN, GLAUBER_TABLE = range(5)

PARAM_NAMES = {
    "glauber": ("J",),
    "sis": ("infection", "recovery"),
    "voter": (),
    "cowan": ("a", "recovery", "mu", "nu"),
}
PROBABILITY_PARAMS = {"infection", "recovery", "alpha0", "beta0"}
POSITIVE_CAP = 10.0


def default_bounds(name):
    return (0.0, 1.0) if name in PROBABILITY_PARAMS else (0.0, POSITIVE_CAP)


# --------------------------------------------------------------------------
# Scalar kernels (numba-compatible: math only, params as a float array
# laid out as [alpha0, beta0, p0, p1, p2, p3])
# --------------------------------------------------------------------------


@njit(cache=True)
def _sigmoid_pair(z):
    """(sigma(z), 1 - sigma(z)) without cancellation."""
    if z >= 0:
        e = math.exp(-z)
        return 1.0 / (1.0 + e), e / (1.0 + e)
    e = math.exp(z)
    return e / (1.0 + e), 1.0 / (1.0 + e)


@njit(cache=True)
def raw_activation(code, p, n, m):
    """(alpha_raw, 1 - alpha_raw) before spontaneous activation."""
    if code == GLAUBER:
        return _sigmoid_pair(2.0 * p[2] * (m - n))
    if code == GLAUBER_TABLE:
        return _sigmoid_pair(2.0 * p[2] * (n - m))
    if code == SIS:
        ratio = p[2] / p[3] if p[3] > 0 else 0.0
        stay = (1.0 - ratio) ** m
        return 1.0 - stay, stay
    if code == VOTER:
        if n + m == 0:
            return 0.0, 1.0
        return m / (n + m), n / (n + m)
    return _sigmoid_pair(p[2] * (p[5] * m - p[4]))


@njit(cache=True)
def raw_deactivation(code, p, n, m):
    """(beta_raw, 1 - beta_raw) before spontaneous deactivation."""
    if code == GLAUBER:
        return _sigmoid_pair(2.0 * p[2] * (n - m))
    if code == GLAUBER_TABLE:
        return _sigmoid_pair(2.0 * p[2] * (m - n))
    if code == SIS:
        return p[3], 1.0 - p[3]
    if code == VOTER:
        if n + m == 0:
            return 0.0, 1.0
        return n / (n + m), m / (n + m)
    return p[3], 1.0 - p[3]


@njit(cache=True)
def log_transition(code, p, state, nxt, n, m):
    """log2 P(x_{t+1} = nxt | x_t = state, n, m)."""
    if state == 0:
        a, na = raw_activation(code, p, n, m)
        prob = (1.0 - p[0]) * a + p[0] if nxt == 1 else (1.0 - p[0]) * na
    else:
        b, nb = raw_deactivation(code, p, n, m)
        prob = (1.0 - p[1]) * b + p[1] if nxt == 0 else (1.0 - p[1]) * nb
    if prob <= 0.0:
        return -math.inf
    return math.log2(prob)


# --------------------------------------------------------------------------
# Model
# --------------------------------------------------------------------------


@dataclass
class DynamicsModel:
    """Likelihood specification.

    Parameters
    ----------
    kind : {"glauber", "sis", "voter", "cowan"}
    params : dict
        Glauber ``J``; SIS ``infection`` and ``recovery``; Cowan ``a``,
        ``recovery``, ``mu``, ``nu``; Voter none.
    alpha0, beta0 : float
        Spontaneous activation / deactivation probabilities.
    free : tuple of str
        Parameters sampled during inference (may include ``alpha0``/``beta0``).
    glauber_convention : {"ferro", "table-literal"}
        ``ferro`` makes nodes align with active neighbors.
    """

    kind: str
    params: dict = field(default_factory=dict)
    alpha0: float = 0.0
    beta0: float = 0.0
    free: tuple = ()
    bounds: dict = field(default_factory=dict)
    glauber_convention: str = "ferro"

    def __post_init__(self):
        self.kind = self.kind.lower()
        if self.kind not in PARAM_NAMES:
            raise ValueError(f"unknown dynamics {self.kind!r}")
        if self.glauber_convention not in ("ferro", "table-literal"):
            raise ValueError(f"unknown Glauber convention {self.glauber_convention!r}")
        missing = set(PARAM_NAMES[self.kind]) - set(self.params)
        if missing:
            raise ValueError(f"{self.kind} dynamics needs parameters {sorted(missing)}")
        self.params = {k: float(self.params[k]) for k in PARAM_NAMES[self.kind]}
        self.free = tuple(self.free)
        for name in self.free:
            if name not in self.params and name not in ("alpha0", "beta0"):
                raise ValueError(f"cannot infer unknown parameter {name!r}")
        self.bounds = {name: tuple(self.bounds.get(name, default_bounds(name))) for name in self.free}
        if not self.is_valid():
            raise ValueError(f"invalid parameters for {self.kind}: {self.values()}")

    @property
    def code(self):
        if self.kind == "glauber":
            return GLAUBER if self.glauber_convention == "ferro" else GLAUBER_TABLE
        return {"sis": SIS, "voter": VOTER, "cowan": COWAN}[self.kind]

    def values(self):
        out = dict(self.params)
        out["alpha0"] = self.alpha0
        out["beta0"] = self.beta0
        return out

    def get(self, name):
        return self.values()[name]

    def with_values(self, **updates):
        """Copy with some parameter values replaced."""
        params = dict(self.params)
        alpha0, beta0 = self.alpha0, self.beta0
        for name, value in updates.items():
            if name == "alpha0":
                alpha0 = float(value)
            elif name == "beta0":
                beta0 = float(value)
            else:
                params[name] = float(value)
        return DynamicsModel(
            self.kind, params, alpha0, beta0, self.free, self.bounds, self.glauber_convention
        )

    def is_valid(self, values=None):
        values = values or self.values()
        for name, value in values.items():
            lo, hi = self.bounds.get(name, default_bounds(name))
            if not (lo <= value <= hi) and name in self.free:
                return False
            if name in PROBABILITY_PARAMS and not (0.0 <= value <= 1.0):
                return False
        if self.kind == "sis":
            lam, rec = values["infection"], values["recovery"]
            if lam > rec or (rec == 0 and lam > 0):
                return False
        return True

    def param_vector(self):
        p = np.zeros(6)
        p[0], p[1] = self.alpha0, self.beta0
        for k, name in enumerate(PARAM_NAMES[self.kind]):
            p[2 + k] = self.params[name]
        return p

    def log_param_density(self):
        """log2 of the uniform prior density over the free parameters."""
        if not self.is_valid():
            return -math.inf
        return -sum(math.log2(hi - lo) for lo, hi in self.bounds.values())

    def to_dict(self):
        out = {"kind": self.kind, "params": dict(self.params), "alpha0": self.alpha0, "beta0": self.beta0}
        if self.free:
            out["free"] = list(self.free)
            out["bounds"] = {k: list(v) for k, v in self.bounds.items()}
        if self.kind == "glauber":
            out["glauber_convention"] = self.glauber_convention
        return out

    @classmethod
    def from_dict(cls, spec):
        spec = dict(spec)
        return cls(
            kind=spec["kind"],
            params=spec.get("params", {}),
            alpha0=spec.get("alpha0", 0.0),
            beta0=spec.get("beta0", 0.0),
            free=tuple(spec.get("free", ())),
            bounds=spec.get("bounds", {}),
            glauber_convention=spec.get("glauber_convention", "ferro"),
        )


# --------------------------------------------------------------------------
# Vectorized probabilities
# --------------------------------------------------------------------------


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(z, dtype=float)))


def _transition_table(model, n, m):
    """(alpha, 1 - alpha, beta, 1 - beta), complements computed directly."""
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    p = model.params
    if model.kind == "glauber":
        sign = 1.0 if model.glauber_convention == "ferro" else -1.0
        z = sign * 2.0 * p["J"] * (m - n)
        a_raw, na_raw = _sigmoid(z), _sigmoid(-z)
        b_raw, nb_raw = na_raw, a_raw
    elif model.kind == "sis":
        ratio = p["infection"] / p["recovery"] if p["recovery"] > 0 else 0.0
        na_raw = (1.0 - ratio) ** m
        a_raw = 1.0 - na_raw
        b_raw = np.full_like(m, p["recovery"])
        nb_raw = 1.0 - b_raw
    elif model.kind == "voter":
        total = n + m
        safe = np.where(total > 0, total, 1.0)
        a_raw = np.where(total > 0, m / safe, 0.0)
        b_raw = np.where(total > 0, n / safe, 0.0)
        na_raw, nb_raw = 1.0 - a_raw, 1.0 - b_raw
    else:
        z = p["a"] * (p["nu"] * m - p["mu"])
        a_raw, na_raw = _sigmoid(z), _sigmoid(-z)
        b_raw = np.full_like(m, p["recovery"])
        nb_raw = 1.0 - b_raw
    a0, b0 = model.alpha0, model.beta0
    return (
        (1.0 - a0) * a_raw + a0,
        (1.0 - a0) * na_raw,
        (1.0 - b0) * b_raw + b0,
        (1.0 - b0) * nb_raw,
    )


def transition_probs(model, n, m):
    """Vectorized ``(alpha, beta)`` for arrays of neighbor counts."""
    alpha, _, beta, _ = _transition_table(model, n, m)
    return alpha, beta


def activation_prob(model, n, m):
    return transition_probs(model, n, m)[0]


def deactivation_prob(model, n, m):
    return transition_probs(model, n, m)[1]


# --------------------------------------------------------------------------
# Simulation and likelihood
# --------------------------------------------------------------------------


def simulate(g, model, T, rng, initial=None):
    """Run the chain for ``T`` steps (``T`` columns, initial state included)."""
    if T < 1:
        raise ValueError("T must be at least 1")
    x = np.zeros((g.n_nodes, T), dtype=np.uint8)
    if initial is None:
        x[:, 0] = rng.integers(0, 2, size=g.n_nodes)
    else:
        x[:, 0] = np.asarray(initial, dtype=np.uint8)
    adjacency = g.adjacency.astype(float)
    degrees = g.degrees.astype(float)
    for t in range(T - 1):
        state = x[:, t]
        m = adjacency @ state
        alpha, beta = transition_probs(model, degrees - m, m)
        u = rng.random(g.n_nodes)
        x[:, t + 1] = np.where(state == 0, u < alpha, u >= beta)
    return x


def node_log_likelihoods(g, model, x, activity=None):
    """Per-node log2-likelihood of all observed transitions."""
    x = np.asarray(x)
    if x.shape[0] != g.n_nodes:
        raise ValueError(f"time series has {x.shape[0]} rows, graph has {g.n_nodes} nodes")
    if x.shape[1] < 2:
        return np.zeros(g.n_nodes)
    activity = activity or neighbor_activity(g, x)
    return _transition_log_probs(model, x, activity.n, activity.m).sum(axis=1)


def _transition_log_probs(model, x, n, m):
    alpha, stay0, beta, stay1 = _transition_table(model, n[:, :-1], m[:, :-1])
    cur, nxt = x[:, :-1], x[:, 1:]
    prob = np.where(
        cur == 0,
        np.where(nxt == 1, alpha, stay0),
        np.where(nxt == 0, beta, stay1),
    )
    with np.errstate(divide="ignore"):
        return np.log2(prob)


def log_likelihood(g, model, x, include_initial=False):
    """log2 P(X | G, phi); ``-inf`` if any observed transition is impossible."""
    total = float(np.sum(node_log_likelihoods(g, model, x)))
    if include_initial:
        total -= g.n_nodes
    return total


# --------------------------------------------------------------------------
# I/O
# --------------------------------------------------------------------------


def write_time_series(x, path):
    x = np.asarray(x)
    lines = [f"{x.shape[0]} {x.shape[1]}"]
    lines += [" ".join(str(int(v)) for v in col) for col in x.T]
    Path(path).write_text("\n".join(lines) + "\n")


def read_time_series(path):
    lines = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip()]
    n, t = int(lines[0][0]), int(lines[0][1])
    body = np.array([[int(v) for v in ln] for ln in lines[1:]], dtype=np.uint8).reshape(-1, n)
    if body.shape != (t, n):
        raise ValueError(f"{path}: header says {n}x{t}, body is {body.shape[1]}x{body.shape[0]}")
    if np.any(body > 1):
        raise ValueError(f"{path}: entries must be 0 or 1")
    return body.T.copy()
