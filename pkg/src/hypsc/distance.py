"""Exact code distances and minimum-weight logical counts.

Logical operators of one Pauli type form cycles on one of the two graphs
attached to a tiled-surface code: Z operators are cycles on the graph whose
nodes are the X checks, X operators are cycles on the graph whose nodes are
the Z checks. A cycle is logical precisely when it crosses the support of
some opposite-type logical an odd number of times.

The search doubles the relevant graph into two sheets, rewiring every edge
that lies on the chosen crossing support to switch sheets. Sheet-changing
closed walks are exactly the odd-crossing cycles, so the distance is the
least sheet-to-sheet distance between the two copies of a node, and the
minimum-weight operators are recovered by enumerating tied shortest paths.
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .surface import CssCode


def side_matrices(code: CssCode, side: str) -> tuple[np.ndarray, np.ndarray]:
    """Check matrix whose nodes host cycles of `side`-type operators, and
    the opposite-type logical basis supplying crossing supports."""
    if side == "z":
        return code.h_x, code.logical_x
    if side == "x":
        return code.h_z, code.logical_z
    raise ValueError(f"side must be 'z' or 'x', not {side!r}")


def _qubit_endpoints(checks: np.ndarray) -> np.ndarray:
    """Per-qubit pair of incident check indices; requires every qubit to sit
    in exactly two checks, which holds for all codes built from closed
    tilings."""
    cols = checks.sum(axis=0)
    if not np.all(cols == 2):
        raise ValueError("each qubit must belong to exactly two checks on this side")
    nq = checks.shape[1]
    ends = np.empty((nq, 2), dtype=np.int64)
    for q in range(nq):
        ends[q] = np.nonzero(checks[:, q])[0]
    return ends


class _DoubledGraph:
    """Two sheets over the check graph; edges on the crossing support swap
    sheets. Node v on sheet t is numbered v + t * nv."""

    def __init__(self, ends: np.ndarray, nv: int, crossing: np.ndarray):
        self.nv = nv
        adj: list[list[tuple[int, int]]] = [[] for _ in range(2 * nv)]
        for q, (a, b) in enumerate(ends):
            flip = int(crossing[q]) * nv
            a, b = int(a), int(b)
            adj[a].append((b + flip, q))
            adj[b + flip].append((a, q))
            adj[a + nv].append((b + nv - flip, q))
            adj[b + nv - flip].append((a + nv, q))
        self.adj = adj

    def sheet_distance(
        self, v: int, stop_above: int, full: bool = False
    ) -> tuple[int, np.ndarray]:
        """BFS distance from (v, 0) to (v, 1), giving up once the frontier
        passes `stop_above`. Returns the distance (or a sentinel above the
        bound). With `full` the search does not stop at the target, so the
        distance array labels every node through the target's level, as the
        path enumeration requires."""
        nv = self.nv
        dist = np.full(2 * nv, -1, dtype=np.int64)
        dist[v] = 0
        target = v + nv
        frontier = [v]
        d = 0
        found = -1
        while frontier and d <= stop_above:
            nxt = []
            for u in frontier:
                for w, _ in self.adj[u]:
                    if dist[w] < 0:
                        dist[w] = d + 1
                        if w == target:
                            if not full:
                                return d + 1, dist
                            found = d + 1
                        nxt.append(w)
            if found > 0:
                return found, dist
            frontier = nxt
            d += 1
        return stop_above + 2, dist

    def one_shortest_path(self, v: int, dist: np.ndarray) -> frozenset[int]:
        """Edge-index set of one shortest path from (v, 0) to (v, 1),
        following any breadth-first predecessor at each step."""
        node = v + self.nv
        tail = []
        while node != v:
            for w, q in self.adj[node]:
                if 0 <= dist[w] == dist[node] - 1:
                    tail.append(q)
                    node = w
                    break
            else:
                raise ValueError("predecessor walk left the labeled region")
        return frozenset(tail)

    def shortest_path_edge_sets(self, v: int, dist: np.ndarray, cap: int):
        """Edge-index sets of every shortest path from (v, 0) to (v, 1),
        walking the breadth-first predecessor relation backwards. Raises
        once more than `cap` paths accumulate."""
        target = v + self.nv
        out: list[frozenset[int]] = []
        stack: list[tuple[int, list[int]]] = [(target, [])]
        while stack:
            node, tail = stack.pop()
            if node == v:
                out.append(frozenset(tail))
                if len(out) > cap:
                    raise ValueError(f"more than {cap} tied shortest paths")
                continue
            for w, q in self.adj[node]:
                if dist[w] == dist[node] - 1:
                    stack.append((w, tail + [q]))
        return out


def _crossing_vectors(code: CssCode, side: str) -> tuple[np.ndarray, np.ndarray]:
    checks, logicals = side_matrices(code, side)
    if logicals.shape[0] == 0:
        raise ValueError("code has no logical operators")
    ends = _qubit_endpoints(checks)
    return ends, logicals


def min_weight_logical(code: CssCode, side: str) -> tuple[int, np.ndarray]:
    """Distance of one Pauli side and a logical operator attaining it."""
    ends, logicals = _crossing_vectors(code, side)
    nv = int(ends.max()) + 1
    best = code.n + 1
    best_pair = None
    for li in range(logicals.shape[0]):
        crossing = logicals[li]
        graph = _DoubledGraph(ends, nv, crossing)
        support = np.nonzero(crossing)[0]
        starts = sorted({int(ends[q, 0]) for q in support})
        for v in starts:
            d, _ = graph.sheet_distance(v, best - 1)
            if d < best:
                best = d
                best_pair = (graph, v)
    graph, v = best_pair
    d, dist = graph.sheet_distance(v, best, full=True)
    path = graph.one_shortest_path(v, dist)
    vec = np.zeros(code.n, dtype=np.uint8)
    vec[list(path)] = 1
    return best, vec


def distances(code: CssCode) -> tuple[int, int]:
    """(d_Z, d_X) computed from scratch."""
    dz, _ = min_weight_logical(code, "z")
    dx, _ = min_weight_logical(code, "x")
    return dz, dx


def count_min_weight(
    code: CssCode, side: str, cap: int = 10_000_000
) -> tuple[int, int]:
    """Distance of one side together with the number of distinct logical
    operators of that weight. Counting enumerates every tied shortest
    sheet-crossing path and deduplicates by edge set; `cap` bounds the
    number of paths inspected."""
    ends, logicals = _crossing_vectors(code, side)
    nv = int(ends.max()) + 1
    graphs = []
    best = code.n + 1
    for li in range(logicals.shape[0]):
        crossing = logicals[li]
        graph = _DoubledGraph(ends, nv, crossing)
        support = np.nonzero(crossing)[0]
        starts = sorted({int(ends[q, 0]) for q in support})
        for v in starts:
            d, _ = graph.sheet_distance(v, best - 1)
            best = min(best, d)
        graphs.append((graph, starts))

    seen: set[frozenset[int]] = set()
    for graph, starts in graphs:
        for v in starts:
            d, dist = graph.sheet_distance(v, best, full=True)
            if d != best:
                continue
            for edge_set in graph.shortest_path_edge_sets(v, dist, cap):
                if len(seen) >= cap:
                    raise ValueError(f"more than {cap} minimum-weight operators")
                seen.add(edge_set)
    return best, len(seen)


def brute_force_min_weight(code: CssCode, side: str) -> tuple[int, int]:
    """Exhaustive reference: scan the whole cycle space of one side and
    tally the minimum-weight elements outside the stabilizer span. Only
    feasible while the cycle space stays below a couple of million
    elements."""
    if side == "z":
        checks, stab = code.h_x, code.h_z
    elif side == "x":
        checks, stab = code.h_z, code.h_x
    else:
        raise ValueError(f"side must be 'z' or 'x', not {side!r}")
    kernel = gf2.kernel_basis(checks)
    dim = kernel.shape[0]
    if dim > 24:
        raise ValueError(f"cycle space of dimension {dim} is too large to scan")
    stab_red = gf2.Reducer(code.n)
    stab_red.add_rows(stab)

    best = code.n + 1
    count = 0
    vec = np.zeros(code.n, dtype=np.uint8)
    gray = 0
    for i in range(1, 1 << dim):
        bit = (i & -i).bit_length() - 1
        vec ^= kernel[bit]
        gray ^= 1 << bit
        w = int(vec.sum())
        if w > best or w == 0:
            continue
        if stab_red.contains(vec):
            continue
        if w < best:
            best = w
            count = 1
        else:
            count += 1
    if best > code.n:
        raise ValueError("no logical operators found")
    return best, count
