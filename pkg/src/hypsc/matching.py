"""Exact minimum-weight perfect matching on dense graphs.

Decoding needs optimal matchings of complete graphs over the marked
detector nodes, thousands to millions of times per run, with up to a few
hundred nodes. Three engines cover this:

* a bitmask dynamic program, optimal and fast up to 14 nodes,
* a primal-dual blossom algorithm on the dense weight matrix (O(n^3)),
  array-based so that numba compiles it when available,
* a factorial-time pairing scan kept as the reference for tests.

Weights must be non-negative integers. All engines return a matching of
the same total weight; tie-breaking between equal-weight matchings is
deterministic but engine-specific, so callers that want randomized
tie-breaking perturb the weights themselves.

The blossom routine follows the classic dense formulation: vertices are
1-indexed with 0 as the null sentinel, ids above n denote blossoms,
``st`` maps every id to its top-level blossom, ``flower`` lists direct
sub-blossoms, and the edge matrix between top-level objects carries, for
each pair, the incident original-vertex pair of smallest reduced weight.
Duals stay integral throughout because every adjustment shifts all (also
all blossom) labels by the same parity.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


# ---------------------------------------------------------------------------
# bitmask dynamic program, minimizing directly


@_njit(cache=True)
def _dp_core(w: np.ndarray) -> np.ndarray:
    n = w.shape[0]
    full = 1 << n
    inf = np.int64(1) << 60
    dp = np.full(full, inf, dtype=np.int64)
    choice = np.zeros(full, dtype=np.int64)
    dp[0] = 0
    for mask in range(2, full):
        i = 0
        while not (mask >> i) & 1:
            i += 1
        rest = mask & ~(1 << i)
        best = inf
        pick = -1
        for j in range(i + 1, n):
            if (rest >> j) & 1:
                cand = dp[rest & ~(1 << j)] + w[i, j]
                if cand < best:
                    best = cand
                    pick = j
        dp[mask] = best
        choice[mask] = pick
    out = np.full(n, -1, dtype=np.int64)
    mask = full - 1
    while mask:
        i = 0
        while not (mask >> i) & 1:
            i += 1
        j = choice[mask]
        out[i] = j
        out[j] = i
        mask &= ~((1 << i) | (1 << j))
    return out


# ---------------------------------------------------------------------------
# dense blossom helpers; the state arrays travel as explicit arguments


@_njit(cache=True)
def _q_push(x, n, queue, qt, flower, flen, stack):
    sp = 0
    stack[sp] = x
    sp += 1
    while sp:
        sp -= 1
        y = stack[sp]
        if y <= n:
            queue[qt] = y
            qt += 1
        else:
            for i in range(flen[y]):
                stack[sp] = flower[y, i]
                sp += 1
    return qt


@_njit(cache=True)
def _set_st(x, b, n, st, flower, flen, stack):
    sp = 0
    stack[sp] = x
    sp += 1
    while sp:
        sp -= 1
        y = stack[sp]
        st[y] = b
        if y > n:
            for i in range(flen[y]):
                stack[sp] = flower[y, i]
                sp += 1


@_njit(cache=True)
def _get_pr(b, xr, flower, flen):
    """Position of sub-blossom xr inside b, rotated to even parity; may
    reverse the tail of the flower list in place."""
    pr = 0
    for i in range(flen[b]):
        if flower[b, i] == xr:
            pr = i
            break
    if pr % 2 == 1:
        lo = 1
        hi = flen[b] - 1
        while lo < hi:
            t = flower[b, lo]
            flower[b, lo] = flower[b, hi]
            flower[b, hi] = t
            lo += 1
            hi -= 1
        pr = flen[b] - pr
    return pr


@_njit(cache=True)
def _set_slack(x, n, st, s, lab, gu, gv, gw, slack):
    slack[x] = 0
    for u in range(1, n + 1):
        if gw[u, x] > 0 and st[u] != x and s[st[u]] == 0:
            if slack[x] == 0 or (
                lab[gu[u, x]] + lab[gv[u, x]] - 2 * gw[u, x]
                < lab[gu[slack[x], x]] + lab[gv[slack[x], x]] - 2 * gw[slack[x], x]
            ):
                slack[x] = u
    return slack[x]


@_njit(cache=True)
def _set_match(u, v, n, gu, gv, match, flower, flen, flower_from, pair_stack, tmp):
    """match the top-level objects u and v through their propagated edge,
    unfolding nested blossoms iteratively."""
    sp = 0
    pair_stack[sp] = u
    pair_stack[sp + 1] = v
    sp = 2
    while sp:
        sp -= 2
        mu = pair_stack[sp]
        mv = pair_stack[sp + 1]
        match[mu] = gv[mu, mv]
        if mu > n:
            xr = flower_from[mu, gu[mu, mv]]
            pr = _get_pr(mu, xr, flower, flen)
            for i in range(0, pr, 2):
                pair_stack[sp] = flower[mu, i]
                pair_stack[sp + 1] = flower[mu, i + 1]
                pair_stack[sp + 2] = flower[mu, i + 1]
                pair_stack[sp + 3] = flower[mu, i]
                sp += 4
            pair_stack[sp] = xr
            pair_stack[sp + 1] = mv
            sp += 2
            ln = flen[mu]
            if pr:
                for i in range(ln):
                    tmp[i] = flower[mu, (i + pr) % ln]
                for i in range(ln):
                    flower[mu, i] = tmp[i]


@_njit(cache=True)
def _augment(u, v, n, st, pa, gu, gv, match, flower, flen, flower_from, pair_stack, tmp):
    while True:
        xnv = st[match[u]]
        _set_match(u, v, n, gu, gv, match, flower, flen, flower_from, pair_stack, tmp)
        if xnv == 0:
            return
        pv = st[pa[xnv]]
        _set_match(xnv, pv, n, gu, gv, match, flower, flen, flower_from, pair_stack, tmp)
        u = pv
        v = xnv


@_njit(cache=True)
def _blossom_core(wmat: np.ndarray) -> np.ndarray:
    n = wmat.shape[0]
    n2 = 2 * n + 1
    inf = np.int64(1) << 60

    gu = np.zeros((n2, n2), dtype=np.int64)
    gv = np.zeros((n2, n2), dtype=np.int64)
    gw = np.zeros((n2, n2), dtype=np.int64)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            gu[u, v] = u
            gv[u, v] = v
            if u != v:
                gw[u, v] = wmat[u - 1, v - 1]

    lab = np.zeros(n2, dtype=np.int64)
    match = np.zeros(n2, dtype=np.int64)
    slack = np.zeros(n2, dtype=np.int64)
    st = np.zeros(n2, dtype=np.int64)
    pa = np.zeros(n2, dtype=np.int64)
    s = np.full(n2, -1, dtype=np.int64)
    vis = np.zeros(n2, dtype=np.int64)
    flower = np.zeros((n2, n2), dtype=np.int64)
    flen = np.zeros(n2, dtype=np.int64)
    flower_from = np.zeros((n2, n + 1), dtype=np.int64)
    queue = np.zeros(4 * n2 * n2 + 16, dtype=np.int64)
    stack = np.zeros(4 * n2 * n2 + 16, dtype=np.int64)
    pair_stack = np.zeros(4 * n2 * n2 + 16, dtype=np.int64)
    tmp = np.zeros(n2, dtype=np.int64)

    n_x = n
    timer = 0

    for x in range(1, n + 1):
        st[x] = x
        flower_from[x, x] = x

    wmax = np.int64(0)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            if gw[u, v] > wmax:
                wmax = gw[u, v]
    for u in range(1, n + 1):
        lab[u] = wmax

    done = False
    while not done:
        for x in range(1, n_x + 1):
            s[x] = -1
            slack[x] = 0
        qh = 0
        qt = 0
        for x in range(1, n_x + 1):
            if st[x] == x and match[x] == 0:
                pa[x] = 0
                s[x] = 0
                qt = _q_push(x, n, queue, qt, flower, flen, stack)
        if qt == 0:
            break

        augmented = False
        while not augmented:
            while qh < qt and not augmented:
                u0 = queue[qh]
                qh += 1
                if s[st[u0]] == 1:
                    continue
                for v0 in range(1, n + 1):
                    if gw[u0, v0] <= 0 or st[u0] == st[v0]:
                        continue
                    delta = lab[gu[u0, v0]] + lab[gv[u0, v0]] - 2 * gw[u0, v0]
                    if delta != 0:
                        x = st[v0]
                        if slack[x] == 0 or (
                            lab[gu[u0, x]] + lab[gv[u0, x]] - 2 * gw[u0, x]
                            < lab[gu[slack[x], x]]
                            + lab[gv[slack[x], x]]
                            - 2 * gw[slack[x], x]
                        ):
                            slack[x] = u0
                        continue
                    # tight edge
                    bu = st[u0]
                    bv = st[v0]
                    if s[bv] == -1:
                        pa[bv] = u0
                        s[bv] = 1
                        nu = st[match[bv]]
                        slack[bv] = 0
                        slack[nu] = 0
                        s[nu] = 0
                        qt = _q_push(nu, n, queue, qt, flower, flen, stack)
                    elif s[bv] == 0:
                        timer += 1
                        a = bu
                        b = bv
                        lca = 0
                        while a != 0 or b != 0:
                            if a != 0:
                                if vis[a] == timer:
                                    lca = a
                                    break
                                vis[a] = timer
                                a = st[match[a]]
                                if a != 0:
                                    a = st[pa[a]]
                            t = a
                            a = b
                            b = t
                        if lca == 0:
                            _augment(bu, bv, n, st, pa, gu, gv, match,
                                     flower, flen, flower_from, pair_stack, tmp)
                            _augment(bv, bu, n, st, pa, gu, gv, match,
                                     flower, flen, flower_from, pair_stack, tmp)
                            augmented = True
                            break
                        # ---- add_blossom(bu, lca, bv) ----
                        b = n + 1
                        while b <= n_x and st[b] != 0:
                            b += 1
                        if b > n_x:
                            n_x += 1
                        lab[b] = 0
                        s[b] = 0
                        match[b] = match[lca]
                        flower[b, 0] = lca
                        flen[b] = 1
                        x = bu
                        while x != lca:
                            flower[b, flen[b]] = x
                            flen[b] += 1
                            y = st[match[x]]
                            flower[b, flen[b]] = y
                            flen[b] += 1
                            qt = _q_push(y, n, queue, qt, flower, flen, stack)
                            x = st[pa[y]]
                        lo = 1
                        hi = flen[b] - 1
                        while lo < hi:
                            t = flower[b, lo]
                            flower[b, lo] = flower[b, hi]
                            flower[b, hi] = t
                            lo += 1
                            hi -= 1
                        x = bv
                        while x != lca:
                            flower[b, flen[b]] = x
                            flen[b] += 1
                            y = st[match[x]]
                            flower[b, flen[b]] = y
                            flen[b] += 1
                            qt = _q_push(y, n, queue, qt, flower, flen, stack)
                            x = st[pa[y]]
                        _set_st(b, b, n, st, flower, flen, stack)
                        for x in range(1, n_x + 1):
                            gw[b, x] = 0
                            gw[x, b] = 0
                        for x in range(1, n + 1):
                            flower_from[b, x] = 0
                        for i in range(flen[b]):
                            xs = flower[b, i]
                            for x in range(1, n_x + 1):
                                if gw[xs, x] > 0 and (
                                    gw[b, x] == 0
                                    or lab[gu[xs, x]] + lab[gv[xs, x]] - 2 * gw[xs, x]
                                    < lab[gu[b, x]] + lab[gv[b, x]] - 2 * gw[b, x]
                                ):
                                    gu[b, x] = gu[xs, x]
                                    gv[b, x] = gv[xs, x]
                                    gw[b, x] = gw[xs, x]
                                    gu[x, b] = gv[xs, x]
                                    gv[x, b] = gu[xs, x]
                                    gw[x, b] = gw[xs, x]
                            for x in range(1, n + 1):
                                if flower_from[xs, x] != 0:
                                    flower_from[b, x] = xs
                        _set_slack(b, n, st, s, lab, gu, gv, gw, slack)
                if augmented:
                    break
            if augmented:
                break

            # ---- dual adjustment; queue is empty here ----
            d = inf
            for b in range(n + 1, n_x + 1):
                if st[b] == b and s[b] == 1 and lab[b] // 2 < d:
                    d = lab[b] // 2
            for x in range(1, n_x + 1):
                if st[x] == x and slack[x] != 0 and s[x] != 1:
                    delta = (
                        lab[gu[slack[x], x]]
                        + lab[gv[slack[x], x]]
                        - 2 * gw[slack[x], x]
                    )
                    if s[x] == -1:
                        if delta < d:
                            d = delta
                    else:
                        if delta // 2 < d:
                            d = delta // 2
            stop = d >= inf
            if not stop:
                for u in range(1, n + 1):
                    if s[st[u]] == 0 and lab[u] <= d:
                        stop = True
                        break
            if stop:
                done = True
                break
            for u in range(1, n + 1):
                if s[st[u]] == 0:
                    lab[u] -= d
                elif s[st[u]] == 1:
                    lab[u] += d
            for b in range(n + 1, n_x + 1):
                if st[b] == b:
                    if s[b] == 0:
                        lab[b] += 2 * d
                    elif s[b] == 1:
                        lab[b] -= 2 * d

            qh = 0
            qt = 0
            for x in range(1, n_x + 1):
                if (
                    st[x] == x
                    and s[x] != 1
                    and slack[x] != 0
                    and st[slack[x]] != x
                    and lab[gu[slack[x], x]]
                    + lab[gv[slack[x], x]]
                    - 2 * gw[slack[x], x]
                    == 0
                ):
                    queue[qt] = slack[x]
                    qt += 1
            for b in range(n + 1, n_x + 1):
                if st[b] == b and s[b] == 1 and lab[b] == 0:
                    # ---- expand_blossom(b) ----
                    for i in range(flen[b]):
                        xi = flower[b, i]
                        _set_st(xi, xi, n, st, flower, flen, stack)
                    xr = flower_from[b, gu[b, pa[b]]]
                    pr = _get_pr(b, xr, flower, flen)
                    for i in range(0, pr, 2):
                        xs = flower[b, i]
                        xns = flower[b, i + 1]
                        pa[xs] = gu[xns, xs]
                        s[xs] = 1
                        s[xns] = 0
                        slack[xs] = 0
                        _set_slack(xns, n, st, s, lab, gu, gv, gw, slack)
                        qt = _q_push(xns, n, queue, qt, flower, flen, stack)
                    s[xr] = 1
                    pa[xr] = pa[b]
                    for i in range(pr + 1, flen[b]):
                        xs = flower[b, i]
                        s[xs] = -1
                        _set_slack(xs, n, st, s, lab, gu, gv, gw, slack)
                    st[b] = 0

    out = np.full(n, -1, dtype=np.int64)
    for u in range(1, n + 1):
        if match[u] != 0:
            out[u - 1] = match[u] - 1
    return out


# ---------------------------------------------------------------------------
# reference and public interface


def _brute_pairs(w: np.ndarray) -> tuple[int, list[tuple[int, int]]]:
    """Cheapest pairing by exhaustive recursion; reference for tests."""
    n = w.shape[0]
    if n % 2:
        raise ValueError("odd number of nodes")
    nodes = list(range(n))
    best = [None, None]

    def rec(avail, acc, pairs):
        if best[0] is not None and acc >= best[0]:
            return
        if not avail:
            best[0] = acc
            best[1] = list(pairs)
            return
        a = avail[0]
        for j in range(1, len(avail)):
            b = avail[j]
            rest = avail[1:j] + avail[j + 1 :]
            pairs.append((a, b))
            rec(rest, acc + int(w[a, b]), pairs)
            pairs.pop()

    rec(nodes, 0, [])
    return best[0], best[1]


def mwpm(weights: np.ndarray, engine: str = "auto") -> list[tuple[int, int]]:
    """Minimum-weight perfect matching of a complete graph.

    `weights` is a symmetric square matrix of non-negative integers over an
    even number of nodes. Returns the matched pairs (a, b) with a < b.
    Engines: 'auto' picks the subset dynamic program for up to 14 nodes and
    the blossom algorithm beyond; 'dp', 'blossom' and 'brute' force one.
    """
    w = np.asarray(weights)
    m = w.shape[0]
    if w.ndim != 2 or w.shape[1] != m:
        raise ValueError("weights must be a square matrix")
    if m % 2:
        raise ValueError("perfect matching needs an even node count")
    if m == 0:
        return []
    if np.issubdtype(w.dtype, np.floating):
        wi = w.astype(np.int64)
        if not np.array_equal(wi, w):
            raise ValueError("weights must be integral")
        w = wi
    else:
        w = w.astype(np.int64)
    if (w < 0).any():
        raise ValueError("weights must be non-negative")

    if engine == "auto":
        engine = "dp" if m <= 14 else "blossom"
    if engine == "dp":
        mate = _dp_core(w)
    elif engine == "blossom":
        # flip to a positive maximization so the optimum is automatically
        # perfect on a complete even graph
        flipped = int(w.max()) + 1 - w
        np.fill_diagonal(flipped, 0)
        mate = _blossom_core(flipped)
    elif engine == "brute":
        _, pairs = _brute_pairs(w)
        return sorted(tuple(sorted(p)) for p in pairs)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    if (mate < 0).any():
        raise RuntimeError("engine failed to produce a perfect matching")
    return sorted((i, int(j)) for i, j in enumerate(mate) if i < j)


def matching_weight(weights: np.ndarray, pairs: list[tuple[int, int]]) -> int:
    w = np.asarray(weights)
    return int(sum(int(w[a, b]) for a, b in pairs))
