"""Compiled graph-move sweep.

Every proposal consumes one row of five pre-drawn uniforms::

    u[0]  move kind (double-edge swap vs hinge flip)
    u[1]  first edge position
    u[2]  second edge position (swap) or new endpoint (hinge)
    u[3]  rewiring (swap) or kept endpoint (hinge)
    u[4]  acceptance

:func:`reconlab.sampler.moves.graph_step` consumes the same row in pure
Python, so both paths can be checked against each other move for move.
"""

import math

import numpy as np
from numba import njit

from ..dynamics import log_transition
from ..priors import block_term, node_term, pair_term

TABLE_CAP = 64
# While the graph has impossible transitions, each one costs this many bits
# instead of ruling the state out, so a chain started off the support can
# leave a local minimum of the impossible count. Once feasible, moves that
# create an impossible transition are always rejected. Much cheaper and the
# surrogate prefers impossible transitions to rare possible ones; much dearer
# and the local minima come back.
INFEASIBLE_PENALTY = 4.0
SWAP, HINGE, NONE = 0, 1, 2


@njit(cache=True, nogil=True)
def transition_table(code, p, cap):
    """``tab[2 * x_t + x_{t+1}, n, m]`` for ``n, m < cap``."""
    tab = np.empty((4, cap, cap))
    for s in range(2):
        for s1 in range(2):
            for n in range(cap):
                for m in range(cap):
                    tab[2 * s + s1, n, m] = log_transition(code, p, s, s1, n, m)
    return tab


@njit(cache=True, nogil=True)
def decode_move(u, edges, n_nodes, swap_prob):
    """Turn one row of uniforms into ``(kind, p1, p2, removed, added)``."""
    e_count = edges.shape[0]
    removed = np.full((2, 2), -1, np.int64)
    added = np.full((2, 2), -1, np.int64)
    if e_count == 0:
        return NONE, -1, -1, removed, added
    if e_count >= 2 and u[0] < swap_prob:
        p1 = int(u[1] * e_count)
        p2 = int(u[2] * (e_count - 1))
        if p2 >= p1:
            p2 += 1
        a, b = edges[p1, 0], edges[p1, 1]
        c, d = edges[p2, 0], edges[p2, 1]
        removed[0, 0], removed[0, 1] = a, b
        removed[1, 0], removed[1, 1] = c, d
        if u[3] < 0.5:
            f1a, f1b, f2a, f2b = a, c, b, d
        else:
            f1a, f1b, f2a, f2b = a, d, b, c
        added[0, 0], added[0, 1] = min(f1a, f1b), max(f1a, f1b)
        added[1, 0], added[1, 1] = min(f2a, f2b), max(f2a, f2b)
        return SWAP, p1, p2, removed, added
    if swap_prob >= 1.0:
        return NONE, -1, -1, removed, added
    p1 = int(u[1] * e_count)
    a, b = edges[p1, 0], edges[p1, 1]
    k = int(u[2] * n_nodes)
    keep = a if u[3] < 0.5 else b
    removed[0, 0], removed[0, 1] = a, b
    added[0, 0], added[0, 1] = min(keep, k), max(keep, k)
    return HINGE, p1, -1, removed, added


@njit(cache=True, nogil=True)
def _mult(adj, i, j):
    if i == j:
        return adj[i, i] // 2
    return adj[i, j]


@njit(cache=True, nogil=True)
def _mult_after(adj, i, j, ci, cj, cd, nc):
    m = _mult(adj, i, j)
    for c in range(nc):
        if ci[c] == i and cj[c] == j:
            m += cd[c]
    return m


@njit(cache=True, nogil=True)
def _same_pairs(e1a, e1b, e2a, e2b, f1a, f1b, f2a, f2b):
    """Multiset equality of {e1, e2} and {f1, f2} (pairs already sorted)."""
    if e1a == f1a and e1b == f1b and e2a == f2a and e2b == f2b:
        return True
    return e1a == f2a and e1b == f2b and e2a == f1a and e2b == f1b


@njit(cache=True, nogil=True)
def _swap_rewire_count(e1a, e1b, e2a, e2b, f1a, f1b, f2a, f2b):
    """Number of the two rewirings of {e1, e2} that yield {f1, f2}."""
    count = 0
    for r in range(2):
        if r == 0:
            ga, gb, ha, hb = e1a, e2a, e1b, e2b
        else:
            ga, gb, ha, hb = e1a, e2b, e1b, e2a
        g0, g1 = min(ga, gb), max(ga, gb)
        h0, h1 = min(ha, hb), max(ha, hb)
        if _same_pairs(g0, g1, h0, h1, f1a, f1b, f2a, f2b):
            count += 1
    return count


@njit(cache=True, nogil=True)
def _ordered_selection_count(m1, m2, same):
    if same:
        return m1 * (m1 - 1)
    return 2 * m1 * m2


@njit(cache=True, nogil=True)
def _hinge_count(ea, eb, fa, fb):
    count = 0
    if ea == fa or ea == fb:
        count += 1
    if eb == fa or eb == fb:
        count += 1
    return count


@njit(cache=True, nogil=True)
def log_proposal_ratio(kind, adj, removed, added, ci, cj, cd, nc, e_count, n_nodes):
    """``log2 q(g' -> g) - log2 q(g -> g')``; the kind probability cancels
    because E is unchanged."""
    if kind == SWAP:
        e1a, e1b, e2a, e2b = removed[0, 0], removed[0, 1], removed[1, 0], removed[1, 1]
        f1a, f1b, f2a, f2b = added[0, 0], added[0, 1], added[1, 0], added[1, 1]
        same_e = e1a == e2a and e1b == e2b
        same_f = f1a == f2a and f1b == f2b
        fwd_sel = _ordered_selection_count(_mult(adj, e1a, e1b), _mult(adj, e2a, e2b), same_e)
        fwd_rew = _swap_rewire_count(e1a, e1b, e2a, e2b, f1a, f1b, f2a, f2b)
        rev_sel = _ordered_selection_count(
            _mult_after(adj, f1a, f1b, ci, cj, cd, nc),
            _mult_after(adj, f2a, f2b, ci, cj, cd, nc),
            same_f,
        )
        rev_rew = _swap_rewire_count(f1a, f1b, f2a, f2b, e1a, e1b, e2a, e2b)
        return math.log2(rev_sel * rev_rew) - math.log2(fwd_sel * fwd_rew)
    ea, eb, fa, fb = removed[0, 0], removed[0, 1], added[0, 0], added[0, 1]
    fwd = _mult(adj, ea, eb) * _hinge_count(ea, eb, fa, fb)
    rev = _mult_after(adj, fa, fb, ci, cj, cd, nc) * _hinge_count(fa, fb, ea, eb)
    return math.log2(rev) - math.log2(fwd)


@njit(cache=True, nogil=True)
def net_changes(removed, added, n_removed):
    """Merge removed/added pairs into distinct ``(i, j, delta)`` changes."""
    ci = np.zeros(4, np.int64)
    cj = np.zeros(4, np.int64)
    cd = np.zeros(4, np.int64)
    nc = 0
    for r in range(2 * n_removed):
        if r < n_removed:
            i, j, d = removed[r, 0], removed[r, 1], -1
        else:
            i, j, d = added[r - n_removed, 0], added[r - n_removed, 1], 1
        found = False
        for c in range(nc):
            if ci[c] == i and cj[c] == j:
                cd[c] += d
                found = True
                break
        if not found:
            ci[nc], cj[nc], cd[nc] = i, j, d
            nc += 1
    # drop cancelled entries
    k = 0
    for c in range(nc):
        if cd[c] != 0:
            ci[k], cj[k], cd[k] = ci[c], cj[c], cd[c]
            k += 1
    return ci, cj, cd, k


@njit(cache=True, nogil=True)
def node_loglik_after(u, x, m_row, deg_u, ci, cj, cd, nc, code, p, tab):
    vs = np.empty(4, np.int64)
    cs = np.empty(4, np.int64)
    k = 0
    dk = 0
    for c in range(nc):
        i, j, d = ci[c], cj[c], cd[c]
        if i == u and j == u:
            vs[k], cs[k] = u, 2 * d
        elif i == u:
            vs[k], cs[k] = j, d
        elif j == u:
            vs[k], cs[k] = i, d
        else:
            continue
        dk += cs[k]
        k += 1
    deg = deg_u + dk
    cap = tab.shape[1]
    total = 0.0
    bad = 0
    for t in range(x.shape[1] - 1):
        mm = m_row[t]
        for q in range(k):
            mm += cs[q] * x[vs[q], t]
        nn = deg - mm
        s = x[u, t]
        s1 = x[u, t + 1]
        if nn < cap and mm < cap:
            v = tab[2 * s + s1, nn, mm]
        else:
            v = log_transition(code, p, s, s1, nn, mm)
        if v == -math.inf:
            bad += 1
        else:
            total += v
    return total, bad


@njit(cache=True, nogil=True)
def prior_delta(prior_code, adj, deg, k_fixed, blocks, sizes, ers, ci, cj, cd, nc):
    total = 0.0
    for c in range(nc):
        i, j, d = ci[c], cj[c], cd[c]
        old = adj[i, j]
        new = old + (2 * d if i == j else d)
        if new < 0:
            return -math.inf
        after = pair_term(prior_code, i, j, new)
        if after == -math.inf:
            return -math.inf
        total += after - pair_term(prior_code, i, j, old)
    # node terms
    nodes = np.empty(8, np.int64)
    dks = np.zeros(8, np.int64)
    nn = 0
    for c in range(nc):
        for side in range(2):
            u = ci[c] if side == 0 else cj[c]
            found = False
            for q in range(nn):
                if nodes[q] == u:
                    dks[q] += cd[c]
                    found = True
                    break
            if not found:
                nodes[nn] = u
                dks[nn] = cd[c]
                nn += 1
    for q in range(nn):
        if dks[q] == 0:
            continue
        u = nodes[q]
        after = node_term(prior_code, deg[u] + dks[q], k_fixed[u])
        if after == -math.inf:
            return -math.inf
        total += after - node_term(prior_code, deg[u], k_fixed[u])
    if prior_code == 4 or prior_code == 5:
        rs = np.empty(4, np.int64)
        ss = np.empty(4, np.int64)
        ds = np.zeros(4, np.int64)
        nb = 0
        for c in range(nc):
            r, s = blocks[ci[c]], blocks[cj[c]]
            if r > s:
                r, s = s, r
            step = 2 * cd[c] if r == s else cd[c]
            found = False
            for q in range(nb):
                if rs[q] == r and ss[q] == s:
                    ds[q] += step
                    found = True
                    break
            if not found:
                rs[nb], ss[nb], ds[nb] = r, s, step
                nb += 1
        for q in range(nb):
            if ds[q] == 0:
                continue
            r, s = rs[q], ss[q]
            old = ers[r, s]
            after = block_term(prior_code, r, s, old + ds[q], sizes[r], sizes[s])
            if after == -math.inf:
                return -math.inf
            total += after - block_term(prior_code, r, s, old, sizes[r], sizes[s])
    return total


@njit(cache=True, nogil=True)
def graph_sweep(
    uniforms,
    adj,
    deg,
    edges,
    x,
    m_tab,
    node_ll,
    node_bad,
    dyn_code,
    params,
    tab,
    prior_code,
    k_fixed,
    blocks,
    sizes,
    ers,
    swap_prob,
    stats,
    penalty,
):
    """Run ``len(uniforms)`` MH graph proposals in place.

    Returns the accumulated change of the log-prior. ``stats`` is
    ``[swap proposed, swap accepted, hinge proposed, hinge accepted]``.
    """
    n_nodes = adj.shape[0]
    e_count = edges.shape[0]
    d_prior_total = 0.0
    lls = np.empty(4)
    bads = np.empty(4, np.int64)
    nodes = np.empty(4, np.int64)
    total_bad = node_bad.sum()
    for step in range(uniforms.shape[0]):
        u = uniforms[step]
        kind, p1, p2, removed, added = decode_move(u, edges, n_nodes, swap_prob)
        if kind == NONE:
            continue
        stats[2 * kind] += 1
        n_removed = 2 if kind == SWAP else 1
        ci, cj, cd, nc = net_changes(removed, added, n_removed)
        if nc == 0:
            # proposal reproduces the current graph: accepted, nothing to do
            stats[2 * kind + 1] += 1
            continue
        d_prior = prior_delta(prior_code, adj, deg, k_fixed, blocks, sizes, ers, ci, cj, cd, nc)
        if d_prior == -math.inf:
            continue
        log_q = log_proposal_ratio(kind, adj, removed, added, ci, cj, cd, nc, e_count, n_nodes)
        # likelihood of the affected endpoints
        n_aff = 0
        for c in range(nc):
            for side in range(2):
                w = ci[c] if side == 0 else cj[c]
                seen = False
                for q in range(n_aff):
                    if nodes[q] == w:
                        seen = True
                if not seen:
                    nodes[n_aff] = w
                    n_aff += 1
        d_ll = 0.0
        d_bad = 0
        for q in range(n_aff):
            w = nodes[q]
            ll, bad = node_loglik_after(w, x, m_tab[w], deg[w], ci, cj, cd, nc, dyn_code, params, tab)
            lls[q] = ll
            bads[q] = bad
            d_ll += ll - node_ll[w]
            d_bad += bad - node_bad[w]
        if total_bad == 0:
            if d_bad > 0:
                continue
            log_acc = d_ll + d_prior + log_q
        else:
            log_acc = d_ll + d_prior + log_q - penalty * d_bad
        if log_acc < 0.0 and u[4] >= 2.0**log_acc:
            continue
        # accept
        total_bad += d_bad
        stats[2 * kind + 1] += 1
        d_prior_total += d_prior
        for q in range(n_aff):
            node_ll[nodes[q]] = lls[q]
            node_bad[nodes[q]] = bads[q]
        for c in range(nc):
            i, j, d = ci[c], cj[c], cd[c]
            if prior_code == 4 or prior_code == 5:
                r, s = blocks[i], blocks[j]
                if r == s:
                    ers[r, r] += 2 * d
                else:
                    ers[r, s] += d
                    ers[s, r] += d
            if i == j:
                adj[i, i] += 2 * d
                deg[i] += 2 * d
                for t in range(x.shape[1]):
                    m_tab[i, t] += 2 * d * x[i, t]
            else:
                adj[i, j] += d
                adj[j, i] += d
                deg[i] += d
                deg[j] += d
                for t in range(x.shape[1]):
                    m_tab[i, t] += d * x[j, t]
                    m_tab[j, t] += d * x[i, t]
        edges[p1, 0], edges[p1, 1] = added[0, 0], added[0, 1]
        if kind == SWAP:
            edges[p2, 0], edges[p2, 1] = added[1, 0], added[1, 1]
    return d_prior_total
