"""Phenomenological noise, space-time syndrome graphs and matching decoding.

Per QEC cycle every qubit flips independently with probability p and
every check outcome flips with probability q; errors accumulate over T
noisy rounds plus the closing cycle whose readout is perfect. Decoding
marks the
detection events (syndrome differences between consecutive rounds),
matches them pairwise at minimum total path weight in the space-time
graph, projects the matched paths onto the final time slice and compares
against the true residual error. A sample fails when the leftover cycle
anticommutes with any logical of the opposite type.

Two implementations share this model. The reference pipeline
(`sample_history` / `decode` / `adjudicate`) runs one shot at a time with
per-shot randomized tie-breaking; it is direct enough to audit and is what
the tests exercise. `BatchDecoder` is the Monte Carlo engine: it
precomputes all-pairs shortest paths for an ensemble of jitter-perturbed
copies of the graph (so ties between equal-weight corrections are broken
randomly in aggregate, which matters for even-distance codes) and decodes
vectorized sample blocks against them. Blocks draw from
`numpy.random.SeedSequence` streams keyed by (seed, side, block index),
which makes every estimate bit-reproducible at any worker count.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from . import gf2
from .distance import side_matrices, _qubit_endpoints
from .matching import mwpm
from .surface import CssCode

__all__ = [
    "NoiseParams",
    "SpaceTimeGraph",
    "SyndromeHistory",
    "sample_history",
    "mark_vertices",
    "decode",
    "adjudicate",
    "decode_sample",
    "BatchDecoder",
    "mc_failures",
]

_WEIGHT_BASE = 1 << 20
_JITTER_SPAN = 1 << 12
_BLOCK = 4096


@dataclass(frozen=True)
class NoiseParams:
    """p: qubit error probability per round, q: check flip probability,
    T: number of noisy rounds before the closing perfect one. T may be None
    to mean "the code's Z distance", resolved by experiments.resolve_rounds
    before any graph is built."""

    p: float
    q: float
    T: int | None

    def __post_init__(self):
        if not (0.0 <= self.p < 0.5 and 0.0 <= self.q < 0.5):
            raise ValueError("error probabilities must lie in [0, 1/2)")
        if self.T is not None and self.T < 1:
            raise ValueError("need at least one round")

    @classmethod
    def equal(cls, p: float, T: int | None) -> "NoiseParams":
        return cls(p=p, q=p, T=T)

    def rounds(self) -> int:
        if self.T is None:
            raise ValueError(
                "round count unresolved; call experiments.resolve_rounds first"
            )
        return self.T


def _unit_weights(p: float, q: float, T: int, n_edges: int, m: int) -> tuple[int, int]:
    """Integer weights per horizontal/vertical edge. Unit weights in the
    q == p regime; log-likelihood ratios otherwise, with an effectively
    infinite weight for a channel of probability zero."""
    blocked = (T + 1) * (n_edges + m) + 1
    if p == q:
        return 1, 1
    if q == 0.0:
        return 1, blocked
    if p == 0.0:
        return blocked, 1
    scale = 1024
    wh = max(1, round(scale * math.log((1 - p) / p)))
    wv = max(1, round(scale * math.log((1 - q) / q)))
    return wh, wv


class SpaceTimeGraph:
    """T+1 copies of the check graph of one side, consecutive copies joined
    vertex-wise. Horizontal edges carry qubit errors, vertical edges
    measurement errors. Node (t, c) has index t * m + c."""

    def __init__(self, code: CssCode, side: str, noise: NoiseParams):
        checks, crossings = side_matrices(code, side)
        self.side = side
        self.checks = checks
        self.crossings = crossings
        self.ends = _qubit_endpoints(checks)
        self.m = checks.shape[0]
        self.n_qubits = checks.shape[1]
        self.T = noise.rounds()
        self.w_h, self.w_v = _unit_weights(
            noise.p, noise.q, self.T, self.n_qubits, self.m
        )
        m, T = self.m, self.T
        adj: list[list[tuple[int, int, int, int, int]]] = [
            [] for _ in range((T + 1) * m)
        ]
        for t in range(T + 1):
            for j, (a, b) in enumerate(self.ends):
                u, v = t * m + int(a), t * m + int(b)
                adj[u].append((v, self.w_h, 0, t, j))
                adj[v].append((u, self.w_h, 0, t, j))
        for t in range(T):
            for c in range(m):
                u, v = t * m + c, (t + 1) * m + c
                adj[u].append((v, self.w_v, 1, t, c))
                adj[v].append((u, self.w_v, 1, t, c))
        self.adj = adj

    @property
    def node_count(self) -> int:
        return (self.T + 1) * self.m

    @property
    def horizontal_count(self) -> int:
        return (self.T + 1) * self.n_qubits

    @property
    def vertical_count(self) -> int:
        return self.T * self.m


@dataclass
class SyndromeHistory:
    """One sampled error record. `new_errors[t]` holds the qubits freshly
    hit before round t+1, `detection[t]` the syndrome differences seen at
    round t+1 (the row T belongs to the closing perfect readout), and
    `final_error` the accumulated data error at the end."""

    side: str
    T: int
    new_errors: np.ndarray
    flips: np.ndarray
    detection: np.ndarray
    final_error: np.ndarray

    @property
    def marked(self) -> np.ndarray:
        return np.argwhere(self.detection)

    def raw_syndromes(self, checks: np.ndarray) -> np.ndarray:
        """Cumulative measured syndromes for rounds 1..T+1, reconstructed
        from the detection bits (kept as differences)."""
        out = np.zeros((self.T + 1, checks.shape[0]), dtype=np.uint8)
        acc = np.zeros(checks.shape[0], dtype=np.uint8)
        for t in range(self.T + 1):
            acc ^= self.detection[t].astype(np.uint8)
            out[t] = acc
        return out


def _error_slices(noise: NoiseParams) -> int:
    """Number of slices that receive fresh qubit errors. With noisy checks
    every QEC cycle takes errors, including the one read out perfectly at
    the end. With perfect checks the closing readout is redundant, so the
    record has exactly T error slices (one for the noiseless routine)."""
    T = noise.rounds()
    return T + 1 if noise.q > 0 else T


def sample_history(
    code: CssCode, noise: NoiseParams, side: str, rng: np.random.Generator
) -> SyndromeHistory:
    """Draw one error record: per-cycle qubit errors, per-round check flips
    (rounds 1..T) and the perfect closing readout."""
    checks, _ = side_matrices(code, side)
    m, n = checks.shape
    T = noise.rounds()
    S = _error_slices(noise)
    new_errors = rng.random((S, n)) < noise.p
    flips = rng.random((T, m)) < noise.q
    cum = np.logical_xor.accumulate(new_errors, axis=0)
    syn = gf2.matmul(cum[:T].astype(np.uint8), checks.T).astype(bool) ^ flips
    final = cum[S - 1]
    syn_final = gf2.matmul(final[None, :].astype(np.uint8), checks.T)[0].astype(bool)
    detection = np.empty((T + 1, m), dtype=bool)
    detection[0] = syn[0]
    detection[1:T] = syn[1:] ^ syn[:-1]
    detection[T] = syn_final ^ syn[T - 1]
    return SyndromeHistory(
        side=side,
        T=T,
        new_errors=new_errors,
        flips=flips,
        detection=detection,
        final_error=final,
    )


def mark_vertices(h: SyndromeHistory) -> np.ndarray:
    """(t, check) coordinates of all detection events; always even in
    number because the closing readout is perfect."""
    marked = h.marked
    assert len(marked) % 2 == 0, "odd mark count, sampler bug"
    return marked


def _dijkstra_from(
    graph: SpaceTimeGraph, src: int, prio: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-source shortest paths with randomized tie-breaking: the heap
    orders equal distances by the per-shot priority relabeling, so which
    shortest-path tree comes out is uniform over the rng stream."""
    nn = graph.node_count
    dist = np.full(nn, -1, dtype=np.int64)
    pred = np.full(nn, -1, dtype=np.int64)
    pred_edge = np.full((nn, 3), -1, dtype=np.int64)
    heap = [(0, int(prio[src]), src)]
    dist[src] = 0
    settled = np.zeros(nn, dtype=bool)
    while heap:
        d, _, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        for v, w, kind, t, idx in graph.adj[u]:
            nd = d + w
            if not settled[v] and (dist[v] < 0 or nd < dist[v]):
                dist[v] = nd
                pred[v] = u
                pred_edge[v] = (kind, t, idx)
                heapq.heappush(heap, (nd, int(prio[v]), v))
    return dist, pred, pred_edge


def decode(
    graph: SpaceTimeGraph,
    marked: np.ndarray,
    rng: np.random.Generator | None = None,
) -> dict:
    """Match the marked vertices at minimum total path weight and read the
    inferred error off the matched paths.

    Returns the matched index pairs, the inferred space-time edges as
    (kind, t, idx) with kind 0 horizontal / 1 vertical, and the projection
    of the horizontal edges per qubit (parity over time slices)."""
    proj = np.zeros(graph.n_qubits, dtype=np.uint8)
    if len(marked) == 0:
        return {"pairs": [], "edges": [], "projection": proj}
    if len(marked) % 2:
        raise ValueError("odd number of marked vertices")
    ids = marked[:, 0] * graph.m + marked[:, 1]
    if rng is None:
        prio = np.arange(graph.node_count)
    else:
        prio = rng.permutation(graph.node_count)
    k = len(ids)
    dists = []
    preds = []
    pedges = []
    for s in ids:
        d, pr, pe = _dijkstra_from(graph, int(s), prio)
        dists.append(d)
        preds.append(pr)
        pedges.append(pe)
    wmat = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            wmat[i, j] = dists[i][ids[j]]
    pairs = mwpm(wmat)
    edges = []
    for a, b in pairs:
        u = int(ids[b])
        src = int(ids[a])
        while u != src:
            kind, t, idx = (int(x) for x in pedges[a][u])
            edges.append((kind, t, idx))
            if kind == 0:
                proj[idx] ^= 1
            u = int(preds[a][u])
    return {"pairs": pairs, "edges": edges, "projection": proj}


def adjudicate(code: CssCode, h: SyndromeHistory, inferred) -> bool:
    """Project true and inferred errors to the last slice and test the
    leftover cycle against the opposite-type logicals. True means failure."""
    checks, crossings = side_matrices(code, h.side)
    if isinstance(inferred, dict):
        proj = inferred["projection"]
    else:
        proj = np.zeros(checks.shape[1], dtype=np.uint8)
        for kind, _t, idx in inferred:
            if kind == 0:
                proj[idx] ^= 1
    residual = h.final_error.astype(np.uint8) ^ proj
    synd = gf2.matmul(residual[None, :], checks.T)
    assert not synd.any(), "residual is not a cycle, decoder bug"
    return bool(gf2.matmul(residual[None, :], crossings.T).any())


def decode_sample(
    code: CssCode,
    noise: NoiseParams,
    side: str,
    rng: np.random.Generator,
    graph: SpaceTimeGraph | None = None,
) -> bool:
    """One full reference shot: sample, mark, match, adjudicate."""
    if graph is None:
        graph = SpaceTimeGraph(code, side, noise)
    h = sample_history(code, noise, side, rng)
    inferred = decode(graph, mark_vertices(h), rng)
    return adjudicate(code, h, inferred)


# ---------------------------------------------------------------------------
# batch engine


def _variant_count(nodes: int, requested: int | None) -> int:
    if requested is not None:
        return requested
    if nodes > 3000:
        return 4
    if nodes > 1200:
        return 8
    return 32


class BatchDecoder:
    """Monte Carlo decoder for one side of one code.

    All-pairs shortest paths over the space-time graph are precomputed for
    an ensemble of weight-jittered variants (base weight 2^20 per unit,
    jitter below 2^12, far too small to reorder genuinely different path
    lengths but enough to make each variant's shortest paths unique).
    Sample block b decodes against variant b mod B, so degenerate
    corrections are realized with their natural frequencies in aggregate.
    """

    def __init__(
        self,
        code: CssCode,
        side: str,
        noise: NoiseParams,
        seed: int,
        variants: int | None = None,
    ):
        checks, crossings = side_matrices(code, side)
        self.side = side
        self.noise = noise
        self.checks = checks
        self.checks_i = checks.astype(np.int64)
        self.crossings_i = crossings.astype(np.int64)
        self.ends = _qubit_endpoints(checks)
        self.m, self.n_qubits = checks.shape
        T = noise.rounds()
        # With perfect measurements every round's detection events pair up
        # within their own round (vertical edges are blocked), so the graph
        # shrinks to one copy and rounds decode independently.
        self.per_round = noise.q == 0.0
        self.slices = 1 if self.per_round else T + 1
        self.nodes = self.slices * self.m
        self.w_h, self.w_v = _unit_weights(
            noise.p, noise.q, T, self.n_qubits, self.m
        )
        self.n_variants = _variant_count(self.nodes, variants)
        self._dists: list[np.ndarray] = []
        self._preds: list[np.ndarray] = []
        self._edge_of: list[dict[int, int]] = []
        for v in range(self.n_variants):
            self._build_variant(seed, v)

    def _build_variant(self, seed: int, v: int) -> None:
        rng = np.random.default_rng(np.random.SeedSequence([seed, 0x6A74, v]))
        m, nq, S = self.m, self.n_qubits, self.slices
        jh = rng.integers(0, _JITTER_SPAN, size=(S, nq), dtype=np.int64)
        jv = rng.integers(0, _JITTER_SPAN, size=(max(S - 1, 0), m), dtype=np.int64)
        best: dict[int, tuple[int, int]] = {}
        nn = self.nodes
        for t in range(S):
            for j in range(nq):
                a, b = int(self.ends[j, 0]), int(self.ends[j, 1])
                u, w_node = t * m + a, t * m + b
                if u > w_node:
                    u, w_node = w_node, u
                key = u * nn + w_node
                wgt = self.w_h * _WEIGHT_BASE + int(jh[t, j])
                if key not in best or wgt < best[key][0]:
                    best[key] = (wgt, j)
        edge_of = {k: q for k, (_w, q) in best.items()}
        rows, cols, vals = [], [], []
        for key, (wgt, _q) in best.items():
            rows.append(key // nn)
            cols.append(key % nn)
            vals.append(wgt)
        for t in range(S - 1):
            for c in range(m):
                rows.append(t * m + c)
                cols.append((t + 1) * m + c)
                vals.append(self.w_v * _WEIGHT_BASE + int(jv[t, c]))
        g = sp.csr_matrix(
            (np.array(vals, dtype=np.int64), (rows, cols)), shape=(nn, nn)
        )
        dist, pred = dijkstra(g, directed=False, return_predecessors=True)
        self._dists.append(dist.astype(np.int64))
        self._preds.append(pred.astype(np.int32))
        self._edge_of.append(edge_of)

    def sample_block(
        self, rng: np.random.Generator, size: int
    ) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized histories: detection bits (size, R, m) plus final errors
        (size, n).  R = T+1 with noisy readout (a closing perfect round), T
        with perfect readout."""
        p, q, T = self.noise.p, self.noise.q, self.noise.T
        m, n = self.m, self.n_qubits
        S = _error_slices(self.noise)
        errors = rng.random((size, S, n), dtype=np.float32) < p
        flips = rng.random((size, T, m), dtype=np.float32) < q
        cum = np.logical_xor.accumulate(errors, axis=1)
        syn = gf2.matmul(
            cum[:, :T].reshape(size * T, n).astype(np.uint8), self.checks.T
        ).reshape(size, T, m).astype(bool)
        syn ^= flips
        final = cum[:, S - 1]
        if self.per_round:
            det = np.empty((size, T, m), dtype=bool)
            det[:, 0] = syn[:, 0]
            det[:, 1:] = syn[:, 1:] ^ syn[:, :-1]
            # the closing perfect readout repeats round T's syndrome exactly,
            # so it never marks
            return det, final
        syn_final = gf2.matmul(final.astype(np.uint8), self.checks.T).astype(bool)
        det = np.empty((size, T + 1, m), dtype=bool)
        det[:, 0] = syn[:, 0]
        det[:, 1:T] = syn[:, 1:] ^ syn[:, :-1]
        det[:, T] = syn_final ^ syn[:, T - 1]
        return det, final

    def decode_one(self, det: np.ndarray, final: np.ndarray, variant: int) -> bool:
        """Decode one history against one jitter variant; True on logical
        failure."""
        residual = final.astype(np.int64)
        if self.per_round:
            # rounds decode independently: each round's events pair among
            # themselves, so T small matchings replace one stacked matching
            groups = [np.flatnonzero(d) for d in det]
        else:
            groups = [np.flatnonzero(det.reshape(-1))]
        groups = [g for g in groups if len(g)]
        if groups:
            dist = self._dists[variant]
            pred = self._preds[variant]
            edge_of = self._edge_of[variant]
            nn = self.nodes
            m = self.m
            proj = np.zeros(self.n_qubits, dtype=np.int64)
            for marks in groups:
                wmat = dist[np.ix_(marks, marks)]
                pairs = mwpm(wmat)
                for a, b in pairs:
                    src = int(marks[a])
                    u = int(marks[b])
                    prow = pred[src]
                    while u != src:
                        pu = int(prow[u])
                        if pu // m == u // m:
                            key = (pu * nn + u) if pu < u else (u * nn + pu)
                            proj[edge_of[key]] ^= 1
                        u = pu
            residual = residual ^ proj
        elif not residual.any():
            return False
        synd = self.checks_i @ residual
        assert not (synd & 1).any(), "residual is not a cycle, decoder bug"
        return bool(((self.crossings_i @ residual) & 1).any())

    def run_block(self, seed: int, block_index: int, size: int) -> np.ndarray:
        """Failure mask for one sample block; fully determined by
        (seed, side, block_index)."""
        side_idx = 0 if self.side == "z" else 1
        rng = np.random.default_rng(
            np.random.SeedSequence([seed, 0x6D63, side_idx, block_index])
        )
        det, final = self.sample_block(rng, size)
        variant = block_index % self.n_variants
        fails = np.zeros(size, dtype=bool)
        active = det.reshape(size, -1).any(axis=1) | final.any(axis=1)
        for i in np.flatnonzero(active):
            fails[i] = self.decode_one(det[i], final[i], variant)
        return fails


def _block_sizes(samples: int, block: int) -> list[int]:
    full, rem = divmod(samples, block)
    return [block] * full + ([rem] if rem else [])


def _run_blocks(
    code: CssCode,
    noise: NoiseParams,
    sides: tuple[str, ...],
    seed: int,
    blocks: list[tuple[int, int]],
    variants: int | None,
) -> int:
    decoders = [BatchDecoder(code, s, noise, seed, variants) for s in sides]
    failures = 0
    for block_index, size in blocks:
        mask = np.zeros(size, dtype=bool)
        for dec in decoders:
            mask |= dec.run_block(seed, block_index, size)
        failures += int(mask.sum())
    return failures


def mc_failures(
    code: CssCode,
    noise: NoiseParams,
    samples: int,
    seed: int,
    side: str = "both",
    jobs: int = 1,
    variants: int | None = None,
) -> tuple[int, int]:
    """Count logical failures over `samples` Monte Carlo shots.

    side 'both' pairs one Z-channel and one X-channel history per shot and
    fails if either channel fails. The count is bit-identical for any
    `jobs` value because blocks own their seed streams and addition
    commutes.
    """
    sides = ("z", "x") if side == "both" else (side,)
    blocks = list(enumerate(_block_sizes(samples, _BLOCK)))
    if not blocks:
        return 0, 0
    if jobs <= 1 or len(blocks) == 1:
        return _run_blocks(code, noise, sides, seed, blocks, variants), samples
    jobs = min(jobs, len(blocks))
    chunks = [blocks[i::jobs] for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(
            _mc_chunk, [(code, noise, sides, seed, ch, variants) for ch in chunks]
        )
        failures = sum(parts)
    return failures, samples


def _mc_chunk(args) -> int:
    code, noise, sides, seed, blocks, variants = args
    return _run_blocks(code, noise, sides, seed, blocks, variants)
