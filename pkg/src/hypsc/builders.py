"""Constructors for the code families: toric, rotated toric, hyperbolic
quotient surfaces from the bundled catalog, and semi-hyperbolic fine-graining.
"""

from __future__ import annotations

import importlib.resources
import json

from .surface import TiledSurface, validate_surface


def toric(L: int) -> TiledSurface:
    """Square-lattice torus with L x L faces.

    Vertices (i, j) on Z_L x Z_L; horizontal edge h(i,j) joins (i,j)-(i,j+1),
    vertical edge v(i,j) joins (i,j)-(i+1,j). 2*L^2 edges, L^2 faces.
    """
    if L < 2:
        raise ValueError("toric lattice needs L >= 2")
    vid = lambda i, j: (i % L) * L + (j % L)
    h = lambda i, j: ((i % L) * L + (j % L)) * 2          # horizontal
    v = lambda i, j: ((i % L) * L + (j % L)) * 2 + 1      # vertical
    edges: list[tuple[int, int]] = [(0, 0)] * (2 * L * L)
    for i in range(L):
        for j in range(L):
            edges[h(i, j)] = (vid(i, j), vid(i, j + 1))
            edges[v(i, j)] = (vid(i, j), vid(i + 1, j))
    faces = []
    for i in range(L):
        for j in range(L):
            # bottom, right, top, left: a closed walk around the face
            faces.append([h(i, j), v(i, j + 1), h(i + 1, j), v(i, j)])
    surf = TiledSurface(name=f"toric-{L}", vertex_count=L * L, edges=edges, faces=faces)
    validate_surface(surf)
    return surf


def rotated_toric(L: int) -> TiledSurface:
    """45-degree rotated torus with L^2 edge qubits; L must be even.

    Sites (a, b) on Z_L x Z_L carry the qubits. Plaquettes P(i,j) have the
    four corner sites (i,j), (i+1,j), (i,j+1), (i+1,j+1); those with i+j even
    become vertices and those with i+j odd become faces, and the edge of a
    site joins the two even plaquettes containing it.
    """
    if L < 4 or L % 2 != 0:
        raise ValueError("rotated torus needs even L >= 4")
    vert_id = {}
    for i in range(L):
        for j in range(L):
            if (i + j) % 2 == 0:
                vert_id[(i, j)] = len(vert_id)

    def black(i, j):
        return vert_id[(i % L, j % L)]

    def site_ends(a, b):
        if (a + b) % 2 == 0:
            return black(a - 1, b - 1), black(a, b)
        return black(a - 1, b), black(a, b - 1)

    edges = []
    eid = {}
    for a in range(L):
        for b in range(L):
            eid[(a, b)] = len(edges)
            edges.append(site_ends(a, b))
    faces = []
    for i in range(L):
        for j in range(L):
            if (i + j) % 2 == 1:
                corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                faces.append([eid[(a % L, b % L)] for a, b in corners])
    surf = TiledSurface(
        name=f"rotated-toric-{L}",
        vertex_count=len(vert_id),
        edges=edges,
        faces=faces,
    )
    validate_surface(surf)
    return surf


def semi_hyperbolic(base: TiledSurface, l: int) -> TiledSurface:
    """Subdivide every square face of `base` into an l x l grid.

    Edge and face counts scale by l^2; the Euler characteristic (and hence k
    of the derived code) is unchanged. l = 1 returns a fresh copy.
    """
    if l < 1:
        raise ValueError("subdivision parameter must be >= 1")
    for f_idx, face in enumerate(base.faces):
        if len(face) != 4:
            raise ValueError(f"face {f_idx} is not a square; cannot subdivide")
    V, E = base.vertex_count, len(base.edges)

    # Vertex ids: originals, then (l-1) per edge, then (l-1)^2 per face.
    def edge_point(e: int, pos: int) -> int:
        u, v = base.edges[e]
        if pos == 0:
            return u
        if pos == l:
            return v
        return V + e * (l - 1) + (pos - 1)

    def interior_point(f: int, a: int, b: int) -> int:
        return V + E * (l - 1) + f * (l - 1) ** 2 + (a - 1) * (l - 1) + (b - 1)

    n_vertices = V + E * (l - 1) + len(base.faces) * (l - 1) ** 2

    # Edge ids: l segments per original edge first, then face-internal edges.
    edges: list[tuple[int, int]] = []
    for e in range(E):
        for seg in range(l):
            edges.append((edge_point(e, seg), edge_point(e, seg + 1)))

    def segment_id(e: int, seg: int) -> int:
        return e * l + seg

    faces_out: list[list[int]] = []
    internal_eid: dict[tuple[int, int, int, int, int], int] = {}

    for f_idx, face in enumerate(base.faces):
        cycle = base.face_vertex_cycle(f_idx)
        c = cycle  # corners c[0]..c[3]; side edge s_i runs c[i] -> c[i+1]
        sides = face

        def grid_vertex(a: int, b: int) -> int:
            if 0 < a < l and 0 < b < l:
                return interior_point(f_idx, a, b)
            if b == 0 and 0 <= a <= l:
                return _side_point(base, sides[0], c[0], a, l, edge_point)
            if a == l:
                return _side_point(base, sides[1], c[1], b, l, edge_point)
            if b == l:
                return _side_point(base, sides[2], c[2], l - a, l, edge_point)
            return _side_point(base, sides[3], c[3], l - b, l, edge_point)

        def grid_edge(a0: int, b0: int, a1: int, b1: int) -> int:
            # boundary grid edges map onto segments of the original sides
            if b0 == 0 and b1 == 0:
                return segment_id(*_side_segment(base, sides[0], c[0], min(a0, a1), l))
            if a0 == l and a1 == l:
                return segment_id(*_side_segment(base, sides[1], c[1], min(b0, b1), l))
            if b0 == l and b1 == l:
                return segment_id(*_side_segment(base, sides[2], c[2], l - 1 - min(a0, a1), l))
            if a0 == 0 and a1 == 0:
                return segment_id(*_side_segment(base, sides[3], c[3], l - 1 - min(b0, b1), l))
            key = (f_idx, a0, b0, a1, b1)
            if key not in internal_eid:
                internal_eid[key] = E * l + len(internal_eid)
                edges.append((grid_vertex(a0, b0), grid_vertex(a1, b1)))
            return internal_eid[key]

        for a in range(l):
            for b in range(l):
                faces_out.append(
                    [
                        grid_edge(a, b, a + 1, b),
                        grid_edge(a + 1, b, a + 1, b + 1),
                        grid_edge(a, b + 1, a + 1, b + 1),
                        grid_edge(a, b, a, b + 1),
                    ]
                )

    surf = TiledSurface(
        name=f"{base.name}-sh{l}",
        vertex_count=n_vertices,
        edges=edges,
        faces=faces_out,
    )
    validate_surface(surf)
    if len(edges) != E * l * l or len(faces_out) != len(base.faces) * l * l:
        raise AssertionError("subdivision count mismatch")
    if surf.euler_characteristic() != base.euler_characteristic():
        raise AssertionError("subdivision changed the topology")
    return surf


def _side_point(base, e, start_corner, t, l, edge_point):
    """Vertex at parameter t in [0, l] along side edge e, measured from
    start_corner; converts to the edge's stored direction."""
    u, v = base.edges[e]
    if start_corner == u:
        return edge_point(e, t)
    if start_corner == v:
        return edge_point(e, l - t)
    raise AssertionError("face corner does not lie on its side edge")


def _side_segment(base, e, start_corner, seg, l):
    """Segment index (e, j) covering [seg, seg+1] along the side measured
    from start_corner."""
    u, v = base.edges[e]
    if start_corner == u:
        return e, seg
    if start_corner == v:
        return e, l - 1 - seg
    raise AssertionError("face corner does not lie on its side edge")


# --- hyperbolic catalog ------------------------------------------------------

# Expected derived-code parameters for the bundled quotients, used as a sanity
# gate when loading. Distances are exercised in the test suite, not here.
CATALOG_EXPECTED = {
    "hyp45-60": {"n": 60, "k": 8},
    "hyp45-160": {"n": 160, "k": 18},
    "hyp45-360": {"n": 360, "k": 38},
    "klein-quartic": {"n": 84, "k": 6},
    "small-stellated-dodecahedron": {"n": 30, "k": 8},
    "toric44-l2": {"n": 8, "k": 2},
}


def catalog_names() -> list[str]:
    return sorted(CATALOG_EXPECTED)


def load_catalog_entry(name: str) -> dict:
    """Load a quotient fixture {name, r, s, relator_words} from package data."""
    res = importlib.resources.files("hypsc").joinpath(f"catalog/{name}.json")
    try:
        text = res.read_text()
    except FileNotFoundError:
        raise KeyError(f"no catalog entry named {name!r}") from None
    entry = json.loads(text)
    for key in ("name", "r", "s", "relator_words"):
        if key not in entry:
            raise ValueError(f"catalog entry {name!r} is missing {key!r}")
    return entry


def from_catalog(name: str, max_cosets: int = 200_000) -> TiledSurface:
    """Build the tiled surface of a bundled quotient-group fixture."""
    from . import group  # deferred: group imports nothing from builders

    entry = load_catalog_entry(name)
    table = group.todd_coxeter(
        group.Presentation.triangle_rotation(entry["r"], entry["s"], entry["relator_words"]),
        max_cosets=max_cosets,
    )
    surf = group.tiling_from_quotient(table, entry["r"], entry["s"], name=name)
    expected = CATALOG_EXPECTED.get(name)
    if expected is not None:
        if len(surf.edges) != expected["n"]:
            raise ValueError(
                f"catalog entry {name!r}: built {len(surf.edges)} edges, expected {expected['n']}"
            )
        g = surf.genus()
        if 2 * g != expected["k"]:
            raise ValueError(f"catalog entry {name!r}: genus {g} disagrees with expected k")
    return surf


def hyperbolic_45(n_h: int | str) -> TiledSurface:
    """One of the bundled {4,5} hyperbolic surfaces, selected by qubit count
    (60, 160 or 360) or by full catalog name."""
    if isinstance(n_h, str) and not n_h.isdigit():
        name = n_h
    else:
        name = f"hyp45-{int(n_h)}"
    if name not in CATALOG_EXPECTED:
        raise KeyError(f"unknown hyperbolic surface {name!r}; have {catalog_names()}")
    return from_catalog(name)
