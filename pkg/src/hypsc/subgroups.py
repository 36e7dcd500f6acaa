"""Discovery of finite quotients of {r,s} rotation groups.

Two complementary searches, both returning regular actions as CosetTable:

* pair_search: epimorphisms onto permutation groups generated by a pair
  (x, y) with orders (r, s) and x*y an involution; the regular action of
  the generated group is the coset table of the kernel.
* descend: given a quotient G -> Q with kernel K, enumerate the quotients
  one elementary-abelian layer below: subgroups between [K,K]K^p and K
  that are normal in G, found through the G-module structure of
  K/[K,K]K^p (Reidemeister-Schreier rewriting plus mod-p linear algebra).
  Chaining descents walks down every solvable tower above a known layer.

Relator words presenting a discovered kernel are read off the Cayley graph
(spanning-tree presentation) and pruned to a small set with the same
normal closure.
"""

from __future__ import annotations

import itertools
from math import gcd

import numpy as np

from .group import (
    CosetTable,
    GroupError,
    Presentation,
    _INV,
    _check_table,
    canonical_action,
    compile_word,
    todd_coxeter,
)

_CHARS = "RrSs"


# ---------------------------------------------------------------------------
# permutation pair search


def _perm_order(perm: tuple[int, ...]) -> int:
    n = len(perm)
    seen = [False] * n
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        order = order * length // gcd(order, length)
    return order


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Apply a, then b."""
    return tuple(b[i] for i in a)


def _inverse_perm(a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def _regular_action(x: tuple[int, ...], y: tuple[int, ...], cap: int):
    """Regular action of <x, y>, or None once more than `cap` elements show
    up. Elements are numbered by BFS from the identity over (x, x^-1, y,
    y^-1), so the table is deterministic."""
    gens = (x, _inverse_perm(x), y, _inverse_perm(y))
    ident = tuple(range(len(x)))
    index = {ident: 0}
    elems = [ident]
    rows = []
    head = 0
    while head < len(elems):
        e = elems[head]
        head += 1
        row = []
        for g in gens:
            t = _compose(e, g)
            k = index.get(t)
            if k is None:
                if len(elems) >= cap:
                    return None
                k = len(elems)
                index[t] = k
                elems.append(t)
            row.append(k)
        rows.append(row)
    return np.array(rows, dtype=np.int64)


def pair_search(
    r: int, s: int, degree: int, max_order: int, exact_order: int | None = None
) -> list[CosetTable]:
    """Kernels of epimorphisms from the {r,s} rotation group onto subgroups
    of S_degree, with y fixed to a single s-cycle (one representative of the
    generic conjugacy class; conjugating a pair leaves the kernel alone).

    Only pairs with exact generator orders (r, s, 2) are kept. Results are
    deduplicated by the canonical form of the regular action.
    """
    if degree < s:
        return []
    y = tuple(list(range(1, s)) + [0] + list(range(s, degree)))
    cap = exact_order if exact_order is not None else max_order
    seen: dict[bytes, CosetTable] = {}
    for x in itertools.permutations(range(degree)):
        if _perm_order(x) != r:
            continue
        xy = _compose(x, y)
        if _perm_order(xy) != 2:
            continue
        action = _regular_action(x, y, cap + 1)
        if action is None:
            continue
        if exact_order is not None and action.shape[0] != exact_order:
            continue
        if action.shape[0] > max_order:
            continue
        table = CosetTable(action=canonical_action(action))
        seen.setdefault(table.canonical_key(), table)
    return [seen[k] for k in sorted(seen)]


# ---------------------------------------------------------------------------
# mod-p linear algebra (p a small prime)


def _rref_modp(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    m = np.array(mat, dtype=np.int64) % p
    if m.size == 0:
        return m.reshape(0, mat.shape[1] if mat.ndim == 2 else 0), []
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sub = np.nonzero(m[r:, c])[0]
        if sub.size == 0:
            continue
        piv = r + int(sub[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def _nullspace_modp(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of the right kernel {x : mat @ x = 0} over F_p."""
    ncols = mat.shape[1]
    red, pivots = _rref_modp(mat, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-red[row, f]) % p
    return basis


def _rowspace_key(rows: np.ndarray, p: int) -> tuple[bytes, np.ndarray]:
    red, _ = _rref_modp(rows, p)
    return red.tobytes(), red


# ---------------------------------------------------------------------------
# Reidemeister-Schreier data for the kernel of a quotient


class _Schreier:
    """Spanning-tree coset representatives and Schreier generators for the
    kernel of the quotient with the given regular action."""

    def __init__(self, action: np.ndarray):
        n = action.shape[0]
        self.action = action
        self.rep_word: list[tuple[int, ...]] = [()] * n
        self.tree: set[tuple[int, int]] = set()
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        queue = [0]
        head = 0
        while head < len(queue):
            a = queue[head]
            head += 1
            for g in range(4):
                t = int(action[a, g])
                if not seen[t]:
                    seen[t] = True
                    self.rep_word[t] = self.rep_word[a] + (g,)
                    if g in (0, 2):
                        self.tree.add((a, g))
                    else:
                        self.tree.add((t, _INV[g]))
                    queue.append(t)
        if not seen.all():
            raise GroupError("action is not transitive")
        self.sgid: dict[tuple[int, int], int] = {}
        for a in range(n):
            for z in (0, 2):
                if (a, z) not in self.tree:
                    self.sgid[(a, z)] = len(self.sgid)
        self.nsg = len(self.sgid)

    def rewrite(self, word: tuple[int, ...], start: int) -> tuple[np.ndarray, int]:
        """Abelianized Schreier rewriting of a traced word: exponent vector
        over the Schreier generators, plus the end state."""
        vec = np.zeros(self.nsg, dtype=np.int64)
        cur = start
        act = self.action
        for g in word:
            if g in (0, 2):
                key = (cur, g)
                if key not in self.tree:
                    vec[self.sgid[key]] += 1
                cur = int(act[cur, g])
            else:
                cur = int(act[cur, g])
                key = (cur, _INV[g])
                if key not in self.tree:
                    vec[self.sgid[key]] -= 1
        return vec, cur

    def generator_word(self, key: tuple[int, int]) -> tuple[int, ...]:
        a, z = key
        t = int(self.action[a, z])
        back = tuple(_INV[g] for g in reversed(self.rep_word[t]))
        return self.rep_word[a] + (z,) + back


# ---------------------------------------------------------------------------
# one abelian layer of descent


def _invariant_dual_subspaces(
    mats: list[np.ndarray], p: int, max_dim: int, spin_cap: int
) -> list[np.ndarray]:
    """Subspaces of F_p^D of dimension 1..max_dim invariant under right
    multiplication by every matrix in `mats`. Complete whenever p**D fits
    under spin_cap; beyond that only subspaces of the common fixed space
    are produced."""
    if not mats:
        return []
    d = mats[0].shape[0]
    if d == 0:
        return []
    found: dict[bytes, np.ndarray] = {}

    def spin(rows: np.ndarray):
        rows = rows % p
        while True:
            imgs = [(rows @ m) % p for m in mats]
            red, _ = _rref_modp(np.vstack([rows] + imgs), p)
            if red.shape[0] > max_dim:
                return None
            if red.shape[0] == rows.shape[0]:
                return red
            rows = red

    if p**d <= spin_cap:
        for digits in itertools.product(range(p), repeat=d):
            vec = np.array(digits, dtype=np.int64)
            if not vec.any():
                continue
            sub = spin(vec.reshape(1, -1))
            if sub is not None:
                found.setdefault(sub.tobytes(), sub)
    else:
        ident = np.eye(d, dtype=np.int64)
        fixed = _nullspace_modp(np.vstack([(m.T - ident) % p for m in mats]), p)
        if fixed.shape[0] and p ** fixed.shape[0] <= spin_cap:
            for digits in itertools.product(range(p), repeat=fixed.shape[0]):
                coef = np.array(digits, dtype=np.int64)
                if not coef.any():
                    continue
                key, red = _rowspace_key((coef @ fixed).reshape(1, -1), p)
                found.setdefault(key, red)

    while True:
        fresh = {}
        items = sorted(found)
        for ka, kb in itertools.combinations(items, 2):
            a, b = found[ka], found[kb]
            if a.shape[0] + b.shape[0] > max_dim:
                continue
            key, red = _rowspace_key(np.vstack([a, b]), p)
            if red.shape[0] <= max_dim and key not in found and key not in fresh:
                fresh[key] = red
        if not fresh:
            break
        found.update(fresh)

    subs = [v for v in found.values() if 1 <= v.shape[0] <= max_dim]
    subs.sort(key=lambda m: (m.shape[0], m.tobytes()))
    return subs


def descend(
    table: CosetTable,
    r: int,
    s: int,
    p: int,
    max_index: int,
    spin_cap: int = 1 << 18,
) -> list[CosetTable]:
    """Quotients of the {r,s} rotation group sitting exactly one
    elementary-abelian p-layer below the given one, of index at most
    max_index. Deterministic; results come back in canonical form."""
    n = table.n
    if n * p > max_index:
        return []
    act = table.action
    sch = _Schreier(act)
    if sch.nsg == 0:
        return []

    relators = [compile_word(w) for w in Presentation(r, s).relator_words()]
    rows = []
    for a in range(n):
        for rel in relators:
            vec, end = sch.rewrite(rel, a)
            if end != a:
                raise GroupError("relator does not fix the coset")
            rows.append(vec % p)
    rows = np.unique(np.array(rows, dtype=np.int64), axis=0)
    red, pivots = _rref_modp(rows, p)
    free = [c for c in range(sch.nsg) if c not in pivots]
    dim = len(free)
    if dim == 0:
        return []

    # coordinates on the module M = K / [K,K]K^p: reduce an exponent vector
    # by the relation rows, then read off the free columns
    proj = np.zeros((dim, sch.nsg), dtype=np.int64)
    for i, f in enumerate(free):
        proj[i, f] = 1
    for row, pc in enumerate(pivots):
        proj[:, pc] = (-red[row][free]) % p

    # conjugation action of R and S on M, columns indexed by module basis
    acts = []
    for z in (0, 2):
        mat = np.zeros((dim, dim), dtype=np.int64)
        for i, f in enumerate(free):
            key = next(k for k, v in sch.sgid.items() if v == f)
            word = (z,) + sch.generator_word(key) + (_INV[z],)
            vec, end = sch.rewrite(word, 0)
            if end != 0:
                raise GroupError("conjugated kernel word leaves the kernel")
            mat[:, i] = proj @ vec % p
        acts.append(mat)

    max_codim = 0
    idx = n
    while idx * p <= max_index:
        idx *= p
        max_codim += 1

    # annihilators of invariant submodules W live in the dual space, where
    # forms transform by right multiplication with the same matrices
    duals = _invariant_dual_subspaces(acts, p, max_codim, spin_cap)

    check_relators = relators
    out = []
    for forms in duals:
        c = forms.shape[0]
        pc = p**c
        pi = (forms @ proj) % p
        weights = p ** np.arange(c - 1, -1, -1, dtype=np.int64)
        wdig = np.array(
            list(itertools.product(range(p), repeat=c)), dtype=np.int64
        )
        zero = np.zeros(c, dtype=np.int64)
        new_act = np.empty((n * pc, 4), dtype=np.int64)
        base = np.arange(pc, dtype=np.int64)
        for a in range(n):
            for g in range(4):
                t = int(act[a, g])
                if g in (0, 2):
                    key = (a, g)
                    delta = pi[:, sch.sgid[key]] if key in sch.sgid else zero
                else:
                    key = (t, _INV[g])
                    delta = (-pi[:, sch.sgid[key]]) % p if key in sch.sgid else zero
                ids = ((wdig + delta) % p) @ weights
                new_act[a * pc + base, g] = t * pc + ids
        tbl = CosetTable(action=canonical_action(new_act))
        _check_table(tbl, check_relators)
        out.append(tbl)
    return out


# ---------------------------------------------------------------------------
# presentations of discovered kernels


def _free_reduce(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and out[-1] == _CHARS[_INV[_CHARS.index(ch)]]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def _cyclic_reduce(word: str) -> str:
    w = _free_reduce(word)
    while len(w) >= 2 and w[0] == _CHARS[_INV[_CHARS.index(w[-1])]]:
        w = w[1:-1]
    return w


def _canonical_relator(word: str) -> str:
    w = _cyclic_reduce(word)
    if not w:
        return w
    inv = "".join(_CHARS[_INV[_CHARS.index(ch)]] for ch in reversed(w))
    best = min(
        min(w[i:] + w[:i] for i in range(len(w))),
        min(inv[i:] + inv[:i] for i in range(len(inv))),
    )
    return best


def cayley_relators(table: CosetTable) -> list[str]:
    """Spanning-tree presentation of the kernel: one relator word per
    non-tree edge of the Cayley graph of the quotient. Adding these words
    to the tiling relators presents exactly this quotient."""
    sch = _Schreier(table.action)
    words = set()
    for a in range(table.n):
        for z in (0, 2):
            if (a, z) in sch.tree:
                continue
            word = "".join(_CHARS[g] for g in sch.generator_word((a, z)))
            word = _canonical_relator(word)
            if word:
                words.add(word)
    return sorted(words, key=lambda w: (len(w), w))


def prune_relators(
    r: int,
    s: int,
    words: list[str],
    n_target: int,
    max_cosets: int | None = None,
) -> list[str]:
    """Shrink a relator list while the enumeration still closes at
    n_target cosets. Tries a short prefix first (doubling it until the
    normal closure is big enough), then drops survivors one at a time.
    The result presents the same quotient: its closure contains the
    original's and has equal index."""
    if max_cosets is None:
        max_cosets = max(8 * n_target, n_target + 4096)

    def closes(wlist: list[str]) -> bool:
        try:
            tbl = todd_coxeter(
                Presentation.triangle_rotation(r, s, wlist), max_cosets=max_cosets
            )
        except GroupError:
            return False
        return tbl.n == n_target

    pool = sorted({_canonical_relator(w) for w in words if _canonical_relator(w)},
                  key=lambda w: (len(w), w))
    if not closes(pool):
        raise GroupError("relator list does not present the expected quotient")

    size = min(4, len(pool))
    while not closes(pool[:size]):
        if size == len(pool):
            break
        size = min(2 * size, len(pool))
    keep = pool[:size]

    i = len(keep) - 1
    while i >= 0:
        trial = keep[:i] + keep[i + 1 :]
        if trial and closes(trial):
            keep = trial
        i -= 1
    return keep
