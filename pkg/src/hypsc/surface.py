"""Tiled closed surfaces and the CSS codes they induce.

A surface is a combinatorial 2-complex: vertices, edges as endpoint pairs,
and faces as cyclic edge-index traversals. Qubits live on edges, Z-checks on
faces, X-checks on vertices. No boundaries, no self-loops.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gf2


@dataclass
class TiledSurface:
    """A closed tiled surface.

    Attributes:
        name: human-readable label, carried into derived codes.
        vertex_count: number of vertices (0-based ids).
        edges: endpoint pairs (u, v), u != v.
        faces: per face, the cyclic sequence of edge indices around it.
    """

    name: str
    vertex_count: int
    edges: list[tuple[int, int]]
    faces: list[list[int]]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges) + len(self.faces)

    def genus(self) -> int:
        chi = self.euler_characteristic()
        if chi % 2 != 0:
            raise ValueError(f"odd Euler characteristic {chi}; not a closed orientable surface")
        return (2 - chi) // 2

    def face_vertex_cycle(self, face_idx: int) -> list[int]:
        """Vertices visited by the oriented traversal of a face.

        Entry i is the vertex at which edge faces[face_idx][i] is entered, so
        edge i runs from cycle[i] to cycle[(i + 1) % m].
        """
        cycle = _walk_face(self.edges, self.faces[face_idx])
        if cycle is None:
            raise ValueError(f"face {face_idx} is not a closed edge cycle")
        return cycle

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "vertex_count": self.vertex_count,
                "edges": [list(e) for e in self.edges],
                "faces": [list(f) for f in self.faces],
            },
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> "TiledSurface":
        data = json.loads(text)
        try:
            surf = cls(
                name=data["name"],
                vertex_count=int(data["vertex_count"]),
                edges=[(int(u), int(v)) for u, v in data["edges"]],
                faces=[[int(e) for e in f] for f in data["faces"]],
            )
        except KeyError as exc:
            raise ValueError(f"surface file is missing {exc.args[0]!r}") from None
        validate_surface(surf)
        return surf


def _walk_face(edges: list[tuple[int, int]], face: list[int]) -> list[int] | None:
    """Recover the vertex cycle of a face, or None if inconsistent.

    Consecutive face edges must share a vertex. With parallel edges the shared
    vertex can be ambiguous, so both starting choices are tried.
    """
    if len(face) < 2:
        return None
    first = set(edges[face[0]])
    last = set(edges[face[-1]])
    starts = sorted(first & last)
    for v0 in starts:
        cycle = [v0]
        v = v0
        ok = True
        for e in face:
            a, b = edges[e]
            if v == a:
                v = b
            elif v == b:
                v = a
            else:
                ok = False
                break
            cycle.append(v)
        if ok and cycle[-1] == v0:
            return cycle[:-1]
    return None


def validate_surface(surf: TiledSurface) -> None:
    """Check the closed-surface invariants; raises ValueError on failure."""
    n_v, n_e = surf.vertex_count, len(surf.edges)
    for i, (u, v) in enumerate(surf.edges):
        if not (0 <= u < n_v and 0 <= v < n_v):
            raise ValueError(f"edge {i} endpoint out of range")
        if u == v:
            raise ValueError(f"edge {i} is a self-loop")
    use_count = np.zeros(n_e, dtype=np.int64)
    for f_idx, face in enumerate(surf.faces):
        if len(set(face)) != len(face):
            raise ValueError(f"face {f_idx} repeats an edge")
        for e in face:
            if not (0 <= e < n_e):
                raise ValueError(f"face {f_idx} references edge {e} out of range")
            use_count[e] += 1
        if _walk_face(surf.edges, face) is None:
            raise ValueError(f"face {f_idx} edges do not form a closed cycle")
    bad = np.nonzero(use_count != 2)[0]
    if bad.size:
        raise ValueError(
            f"edge {int(bad[0])} lies on {int(use_count[bad[0]])} faces, expected 2"
        )
    if surf.euler_characteristic() % 2 != 0:
        raise ValueError("odd Euler characteristic")


@dataclass
class CssCode:
    """A CSS code derived from a tiled surface.

    h_x rows are vertex stars, h_z rows are face boundaries, both over the
    edge set. logical_x / logical_z hold k representatives each, paired so
    that logical_x[i] anticommutes with logical_z[j] iff i == j.
    """

    name: str
    n: int
    h_x: np.ndarray
    h_z: np.ndarray
    logical_x: np.ndarray
    logical_z: np.ndarray
    d_z: int | None = None
    d_x: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.logical_x.shape[0]

    def check_commutation(self) -> None:
        if gf2.matmul(self.h_x, self.h_z.T).any():
            raise ValueError("h_x and h_z do not commute")


def derive_code(surf: TiledSurface) -> CssCode:
    """Build the CSS code of a surface: checks plus paired logical operators.

    k equals 2 * genus; raises if the homology bookkeeping disagrees with the
    Euler characteristic.
    """
    validate_surface(surf)
    n = len(surf.edges)
    h_x = np.zeros((surf.vertex_count, n), dtype=np.uint8)
    for e, (u, v) in enumerate(surf.edges):
        h_x[u, e] = 1
        h_x[v, e] = 1
    h_z = np.zeros((len(surf.faces), n), dtype=np.uint8)
    for f, face in enumerate(surf.faces):
        for e in face:
            h_z[f, e] = 1

    k = n - gf2.rank(h_x) - gf2.rank(h_z)
    if k != 2 * surf.genus():
        raise ValueError(f"k={k} does not match genus {surf.genus()}")

    # Z logicals: cycles of the surface graph modulo face boundaries.
    z_reps = gf2.quotient_basis(gf2.kernel_basis(h_x), h_z)
    # X logicals: dual cycles modulo vertex stars.
    x_reps = gf2.quotient_basis(gf2.kernel_basis(h_z), h_x)
    if len(z_reps) != k or len(x_reps) != k:
        raise ValueError("homology rank mismatch")
    z_paired, x_paired = gf2.symplectic_pair(z_reps, x_reps)

    code = CssCode(
        name=surf.name,
        n=n,
        h_x=h_x,
        h_z=h_z,
        logical_x=x_paired,
        logical_z=z_paired,
        meta={"surface": surf},
    )
    code.check_commutation()
    return code
