"""Finitely presented rotation groups of regular tilings.

The rotation group of an {r,s} tiling is <R, S | R^r, S^s, (RS)^2>. A finite
quotient is presented by adding extra relator words; enumerating the cosets of
the trivial subgroup (Todd-Coxeter) yields the quotient's regular action,
from which the tiled surface is read off: faces are <R>-orbits, vertices
<S>-orbits, edges <RS>-orbits.

Words are strings over {R, S, r, s}, lower case meaning inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .surface import TiledSurface, validate_surface

# generator symbols: R, R^-1, S, S^-1
_CHARS = "RrSs"
_INV = (1, 0, 3, 2)


class GroupError(Exception):
    pass


def compile_word(word: str) -> tuple[int, ...]:
    try:
        return tuple(_CHARS.index(ch) for ch in word)
    except ValueError:
        raise GroupError(f"bad word {word!r}; alphabet is R, r, S, s") from None


def invert_word(word: str) -> str:
    return "".join(_CHARS[_INV[_CHARS.index(ch)]] for ch in reversed(word))


@dataclass
class Presentation:
    """Two-generator presentation: base tiling relators plus extras."""

    r: int
    s: int
    extra_relators: list[str] = field(default_factory=list)

    @classmethod
    def triangle_rotation(cls, r: int, s: int, extra_relators=()) -> "Presentation":
        if r < 2 or s < 2:
            raise GroupError("tiling orders must be >= 2")
        return cls(r=r, s=s, extra_relators=[str(w) for w in extra_relators])

    def relator_words(self) -> list[str]:
        return ["R" * self.r, "S" * self.s, "RSRS"] + list(self.extra_relators)


@dataclass
class CosetTable:
    """Regular action of a finite quotient: action[c, g] is coset c hit by
    generator g in the order R, R^-1, S, S^-1."""

    action: np.ndarray

    @property
    def n(self) -> int:
        return self.action.shape[0]

    def apply(self, coset: int, word: str) -> int:
        c = coset
        for g in compile_word(word):
            c = int(self.action[c, g])
        return c

    def canonical_key(self) -> bytes:
        """Renumber by BFS from coset 0 (generator order fixed); the result
        is invariant under relabeling of cosets."""
        return canonical_action(self.action).tobytes()


def canonical_action(action: np.ndarray) -> np.ndarray:
    n = action.shape[0]
    num = np.full(n, -1, dtype=np.int64)
    order = []
    num[0] = 0
    order.append(0)
    head = 0
    while head < len(order):
        c = order[head]
        head += 1
        for g in range(4):
            t = int(action[c, g])
            if num[t] < 0:
                num[t] = len(order)
                order.append(t)
    if len(order) != n:
        raise GroupError("action is not transitive")
    out = np.empty_like(action)
    for c in range(n):
        out[num[c]] = num[action[c]]
    return out


def todd_coxeter(pres: Presentation, max_cosets: int = 200_000) -> CosetTable:
    """HLT coset enumeration of the trivial subgroup.

    Deterministic: cosets are defined in scan order, so equal presentations
    give byte-identical tables. Raises GroupError when more than `max_cosets`
    cosets get defined (the quotient may be infinite or the cap too small).
    """
    relators = [compile_word(w) for w in pres.relator_words()]
    for rel in relators:
        if not rel:
            raise GroupError("empty relator")

    tab: list[int] = [-1, -1, -1, -1]   # flat, index (coset << 2) | gen
    parent = [0]                        # union-find for coincidences
    ncos = 1

    def rep(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def define(a: int, g: int) -> int:
        nonlocal ncos
        if ncos >= max_cosets:
            raise GroupError(f"coset limit {max_cosets} exceeded")
        b = ncos
        ncos += 1
        tab.extend((-1, -1, -1, -1))
        parent.append(b)
        tab[(a << 2) | g] = b
        tab[(b << 2) | _INV[g]] = a
        return b

    cq: deque[int] = deque()

    def merge(k: int, lam: int) -> None:
        k = rep(k)
        lam = rep(lam)
        if k != lam:
            mu, nu = (k, lam) if k < lam else (lam, k)
            parent[nu] = mu
            cq.append(nu)

    def coincidence(a: int, b: int) -> None:
        merge(a, b)
        while cq:
            gamma = cq.popleft()
            base = gamma << 2
            for x in range(4):
                delta = tab[base | x]
                if delta == -1:
                    continue
                # drop the paired back-pointer before transferring
                if tab[(delta << 2) | _INV[x]] == gamma:
                    tab[(delta << 2) | _INV[x]] = -1
                mu = rep(gamma)
                nu = rep(delta)
                t = tab[(mu << 2) | x]
                if t != -1:
                    merge(nu, t)
                else:
                    t = tab[(nu << 2) | _INV[x]]
                    if t != -1:
                        merge(mu, t)
                    else:
                        tab[(mu << 2) | x] = nu
                        tab[(nu << 2) | _INV[x]] = mu

    def scan_and_fill(a: int, word: tuple[int, ...]) -> None:
        f = a
        i = 0
        b = a
        j = len(word) - 1
        while True:
            while i <= j:
                t = tab[(f << 2) | word[i]]
                if t == -1:
                    break
                f = t
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i:
                t = tab[(b << 2) | _INV[word[j]]]
                if t == -1:
                    break
                b = t
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                tab[(f << 2) | word[i]] = b
                tab[(b << 2) | _INV[word[i]]] = f
                return
            define(f, word[i])

    alpha = 0
    while alpha < ncos:
        if rep(alpha) != alpha:
            alpha += 1
            continue
        for rel in relators:
            scan_and_fill(alpha, rel)
            if rep(alpha) != alpha:
                break
        if rep(alpha) == alpha:
            for g in range(4):
                if tab[(alpha << 2) | g] == -1:
                    define(alpha, g)
        alpha += 1

    live = [c for c in range(ncos) if rep(c) == c]
    renum = {c: i for i, c in enumerate(live)}
    action = np.empty((len(live), 4), dtype=np.int64)
    for c in live:
        row = []
        for g in range(4):
            t = tab[(c << 2) | g]
            if t == -1:
                raise GroupError("incomplete table after enumeration")
            row.append(renum[rep(t)])
        action[renum[c]] = row

    table = CosetTable(action=action)
    _check_table(table, relators)
    return table


def _check_table(table: CosetTable, relators: list[tuple[int, ...]]) -> None:
    act = table.action
    n = table.n
    for g in range(4):
        col = np.sort(act[:, g])
        if not np.array_equal(col, np.arange(n)):
            raise GroupError("generator action is not a permutation")
    if np.any(act[act[:, 0], 1] != np.arange(n)) or np.any(
        act[act[:, 2], 3] != np.arange(n)
    ):
        raise GroupError("inverse actions are inconsistent")
    cur = np.arange(n)
    for rel in relators:
        img = cur
        for g in rel:
            img = act[img, g]
        if np.any(img != cur):
            raise GroupError("relator not satisfied by the final table")


def _orbits(perm: np.ndarray) -> tuple[np.ndarray, list[list[int]]]:
    """Cycle decomposition; orbits are numbered by their smallest element."""
    n = perm.shape[0]
    oid = np.full(n, -1, dtype=np.int64)
    orbits: list[list[int]] = []
    for start in range(n):
        if oid[start] >= 0:
            continue
        cyc = [start]
        oid[start] = len(orbits)
        c = int(perm[start])
        while c != start:
            oid[c] = len(orbits)
            cyc.append(c)
            c = int(perm[c])
        orbits.append(cyc)
    return oid, orbits


def tiling_from_quotient(
    table: CosetTable, r: int, s: int, name: str = "quotient"
) -> TiledSurface:
    """Tiled surface of a finite quotient of the {r,s} rotation group.

    Raises GroupError when the subgroup has torsion (some <R>, <S> or <RS>
    orbit is shorter than r, s or 2) or when the incidence degenerates into
    self-loops or repeated face edges.
    """
    act = table.action
    perm_r = act[:, 0]
    perm_t = act[act[:, 0], 2]  # right multiplication by R then S
    perm_s = act[:, 2]

    face_of, face_orbits = _orbits(perm_r)
    vert_of, vert_orbits = _orbits(perm_s)
    edge_of, edge_orbits = _orbits(perm_t)

    for orb in face_orbits:
        if len(orb) != r:
            raise GroupError(f"R-orbit of size {len(orb)} != {r}: subgroup has torsion")
    for orb in vert_orbits:
        if len(orb) != s:
            raise GroupError(f"S-orbit of size {len(orb)} != {s}: subgroup has torsion")
    for orb in edge_orbits:
        if len(orb) != 2:
            raise GroupError(f"RS-orbit of size {len(orb)} != 2: subgroup has torsion")

    edges = []
    for orb in edge_orbits:
        g = orb[0]
        u = int(vert_of[g])
        v = int(vert_of[perm_r[g]])  # the edge of flag g joins v(g) and v(gR)
        if u == v:
            raise GroupError("quotient produces a self-loop edge")
        edges.append((u, v))

    faces = []
    for orb in face_orbits:
        g = orb[0]
        cyc = []
        for _ in range(r):
            cyc.append(int(edge_of[g]))
            g = int(perm_r[g])
        faces.append(cyc)

    surf = TiledSurface(
        name=name, vertex_count=len(vert_orbits), edges=edges, faces=faces
    )
    validate_surface(surf)
    if r * len(faces) != table.n or s * len(vert_orbits) != table.n:
        raise GroupError("orbit counts inconsistent with group order")
    return surf
