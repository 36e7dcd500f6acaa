"""Dehn twists as logical operations, verified at two levels.

Homology level: a twist about a loop of class ``gamma`` acts on the 2g
homology classes as the GF(2) transvection c -> c + <c, gamma> gamma, where
<,> is the crossing-parity form. SymplecticFrame composes such maps (checking
that each preserves the form), LogicalCircuit tracks how CNOT words act on
the X-type and Z-type classes separately, and the standard generator
identities, the nine-twist handle swap, and a seven-twist word found by
breadth-first search are all verified as exact matrix equalities.

Circuit level: circuit_twist builds the layered CNOT schedule realizing a
twist about a concrete Z-type loop of a surface code. Controls are the loop
edges; the targets of each layer are the side sets of the loop's corners,
advanced one corner per layer, so that after len(loop) layers every control
has met every side set exactly once. Applying the schedule to a tracked
stabilizer tableau (PauliFrame) must return the stabilizer group to itself
while multiplying the crossing logicals by the pushed-off dual cycle; the
induced action is compared against the transvection prediction.

Handle/qubit bookkeeping: loops 0..g-1 are the handle loops, loops g..2g-1
their crossing partners (loop i meets loop i+g exactly once). Handle k
(1-based) carries logical qubits 2k-1 and 2k: qubit 2k-1 has its X on loop k
and its Z on loop k+g, qubit 2k the other way around.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from . import gf2
from .surface import CssCode, TiledSurface, derive_code


def symplectic_form(g: int) -> np.ndarray:
    """Crossing-parity matrix: loop i crosses loop i+g once, nothing else."""
    if g < 1:
        raise ValueError(f"genus must be positive, got {g}")
    omega = np.zeros((2 * g, 2 * g), dtype=np.uint8)
    for i in range(g):
        omega[i, i + g] = 1
        omega[i + g, i] = 1
    return omega


def class_vector(g: int, *loops: int) -> np.ndarray:
    """Homology class supported on the given loop indices (0-based)."""
    v = np.zeros(2 * g, dtype=np.uint8)
    for i in loops:
        if not 0 <= i < 2 * g:
            raise ValueError(f"loop index {i} out of range for genus {g}")
        v[i] ^= 1
    return v


class SymplecticFrame:
    """GF(2) action on the homology classes; construction checks the form."""

    def __init__(self, matrix: np.ndarray):
        m = (np.asarray(matrix, dtype=np.uint8) & 1).copy()
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"expected a square 2g x 2g matrix, got {m.shape}")
        g = m.shape[0] // 2
        omega = symplectic_form(g)
        if not np.array_equal(gf2.matmul(m.T, gf2.matmul(omega, m)), omega):
            raise ValueError("matrix does not preserve the crossing form")
        self.g = g
        self.m = m

    @classmethod
    def identity(cls, g: int) -> "SymplecticFrame":
        return cls(np.eye(2 * g, dtype=np.uint8))

    def then(self, other: "SymplecticFrame") -> "SymplecticFrame":
        """Frame applying self first and other second."""
        if other.g != self.g:
            raise ValueError("genus mismatch")
        return SymplecticFrame(gf2.matmul(other.m, self.m))

    def apply(self, vec: np.ndarray) -> np.ndarray:
        v = np.asarray(vec, dtype=np.uint8).reshape(-1, 1)
        return gf2.matmul(self.m, v)[:, 0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymplecticFrame):
            return NotImplemented
        return self.g == other.g and np.array_equal(self.m, other.m)

    def __repr__(self) -> str:
        return f"SymplecticFrame(g={self.g})\n{self.m}"


def transvection(frame: SymplecticFrame, gamma: np.ndarray) -> SymplecticFrame:
    """Compose the twist about class gamma onto the frame."""
    g = frame.g
    gamma = np.asarray(gamma, dtype=np.uint8) & 1
    if gamma.shape != (2 * g,):
        raise ValueError(f"class vector must have length {2 * g}, got {gamma.shape}")
    crossings = gf2.matmul(symplectic_form(g), gamma.reshape(-1, 1))[:, 0]
    t = (np.eye(2 * g, dtype=np.uint8) + np.outer(gamma, crossings)) % 2
    return SymplecticFrame(gf2.matmul(t, frame.m))


def twist_word_frame(g: int, gammas) -> SymplecticFrame:
    """Frame of a twist sequence; the first element is applied first."""
    frame = SymplecticFrame.identity(g)
    for gamma in gammas:
        frame = transvection(frame, gamma)
    return frame


def qubit_x_class(g: int, q: int) -> int:
    """Loop index carrying the X of 1-based logical qubit q."""
    if not 1 <= q <= 2 * g:
        raise ValueError(f"qubit {q} out of range for genus {g}")
    handle = (q + 1) // 2
    return handle - 1 if q % 2 else handle - 1 + g


def qubit_z_class(g: int, q: int) -> int:
    """Loop index carrying the Z of 1-based logical qubit q."""
    if not 1 <= q <= 2 * g:
        raise ValueError(f"qubit {q} out of range for genus {g}")
    handle = (q + 1) // 2
    return handle - 1 + g if q % 2 else handle - 1


class LogicalCircuit:
    """CNOT word tracked as separate GF(2) actions on X and Z classes.

    A CNOT copies the control's X onto the target and the target's Z onto the
    control, so the two class actions are different matrices in general; they
    coincide exactly when the word realizes a surface map. The pairing
    mx^T omega mz = omega is maintained as an invariant.
    """

    def __init__(self, g: int):
        if g < 1:
            raise ValueError(f"genus must be positive, got {g}")
        self.g = g
        self.mx = np.eye(2 * g, dtype=np.uint8)
        self.mz = np.eye(2 * g, dtype=np.uint8)

    def cnot(self, control: int, target: int) -> "LogicalCircuit":
        """Append a CNOT between 1-based logical qubits; returns self."""
        g = self.g
        if control == target:
            raise ValueError("control and target must differ")
        ex = np.eye(2 * g, dtype=np.uint8)
        ex[qubit_x_class(g, target), qubit_x_class(g, control)] ^= 1
        ez = np.eye(2 * g, dtype=np.uint8)
        ez[qubit_z_class(g, control), qubit_z_class(g, target)] ^= 1
        self.mx = gf2.matmul(ex, self.mx)
        self.mz = gf2.matmul(ez, self.mz)
        omega = symplectic_form(g)
        if not np.array_equal(gf2.matmul(self.mx.T, gf2.matmul(omega, self.mz)), omega):
            raise ValueError("CNOT update broke the X/Z pairing")
        return self

    def matches(self, frame: SymplecticFrame) -> bool:
        """True when both class actions equal the frame's matrix."""
        return np.array_equal(self.mx, frame.m) and np.array_equal(self.mz, frame.m)

    def frame(self) -> SymplecticFrame:
        if not np.array_equal(self.mx, self.mz):
            raise ValueError("circuit is not a surface map: X and Z actions differ")
        return SymplecticFrame(self.mx)


def handle_loop(g: int, k: int) -> np.ndarray:
    """Class of the loop around handle k (1-based)."""
    if not 1 <= k <= g:
        raise ValueError(f"handle {k} out of range for genus {g}")
    return class_vector(g, k - 1)


def conjugate_loop(g: int, k: int) -> np.ndarray:
    """Class of the crossing partner of handle k's loop."""
    if not 1 <= k <= g:
        raise ValueError(f"handle {k} out of range for genus {g}")
    return class_vector(g, k - 1 + g)


def connecting_loop(g: int, k: int) -> np.ndarray:
    """Class of the loop running around handles k and k+1."""
    if not 1 <= k < g:
        raise ValueError(f"handle pair ({k},{k + 1}) out of range for genus {g}")
    return class_vector(g, k - 1, k)


def conjugate_connecting_loop(g: int, k: int) -> np.ndarray:
    """Class of the crossing-partner loop around handles k and k+1."""
    if not 1 <= k < g:
        raise ValueError(f"handle pair ({k},{k + 1}) out of range for genus {g}")
    return class_vector(g, k - 1 + g, k + g)


def generator_circuit_checks(g: int) -> list[tuple[str, bool]]:
    """The standard twist generators acted out as CNOT words.

    For each handle k the handle twist equals CNOT(2k -> 2k-1) and the
    conjugate twist equals CNOT(2k-1 -> 2k); for each adjacent pair the
    connecting twist equals a block of four cross-handle CNOTs. Every
    identity is checked on the X-type and Z-type actions separately.
    """
    checks: list[tuple[str, bool]] = []
    ident = SymplecticFrame.identity(g)
    for k in range(1, g + 1):
        circ = LogicalCircuit(g).cnot(2 * k, 2 * k - 1)
        frame = transvection(ident, handle_loop(g, k))
        checks.append((f"handle twist {k} = CNOT({2 * k}->{2 * k - 1})", circ.matches(frame)))
        circ = LogicalCircuit(g).cnot(2 * k - 1, 2 * k)
        frame = transvection(ident, conjugate_loop(g, k))
        checks.append((f"conjugate twist {k} = CNOT({2 * k - 1}->{2 * k})", circ.matches(frame)))
    for k in range(1, g):
        circ = LogicalCircuit(g)
        circ.cnot(2 * k, 2 * k - 1)
        circ.cnot(2 * k + 2, 2 * k + 1)
        circ.cnot(2 * k + 2, 2 * k - 1)
        circ.cnot(2 * k, 2 * k + 1)
        frame = transvection(ident, connecting_loop(g, k))
        checks.append((f"connecting twist ({k},{k + 1}) = 4-CNOT block", circ.matches(frame)))
    return checks


def swap_frame(g: int, k: int) -> SymplecticFrame:
    """Permutation exchanging the loop classes of handles k and k+1."""
    if not 1 <= k < g:
        raise ValueError(f"handle pair ({k},{k + 1}) out of range for genus {g}")
    m = np.eye(2 * g, dtype=np.uint8)
    for i, j in ((k - 1, k), (k - 1 + g, k + g)):
        m[[i, j]] = m[[j, i]]
    return SymplecticFrame(m)


def swap_via_twists(k: int, g: int) -> list[tuple[str, np.ndarray]]:
    """Nine-twist word swapping the logical pairs of handles k and k+1.

    A pair of cross-handle CNOTs in opposite directions is a surface map and
    factors into three twists: the conjugate loop of one handle, the handle
    loop of the other, and the diagonal loop around both carrying the sum of
    those two classes. Three such pairs compose to the swap, exactly like a
    swap built from three CNOTs, giving nine twists. Breadth-first search
    over {handle loops, conjugate loops, both diagonals} confirms no shorter
    word exists over this generating set. Verifies the composition and raises
    if it is not the swap.
    """
    if g < 2:
        raise ValueError(f"swap needs genus >= 2, got {g}")
    a_k, a_k1 = handle_loop(g, k), handle_loop(g, k + 1)
    b_k, b_k1 = conjugate_loop(g, k), conjugate_loop(g, k + 1)
    diag_1 = (b_k + a_k1) % 2
    diag_2 = (a_k + b_k1) % 2
    half_1 = [
        (f"conjugate-{k}", b_k),
        (f"handle-{k + 1}", a_k1),
        (f"diagonal-{k}.{k + 1}", diag_1),
    ]
    half_2 = [
        (f"conjugate-{k + 1}", b_k1),
        (f"handle-{k}", a_k),
        (f"diagonal-{k + 1}.{k}", diag_2),
    ]
    word = half_1 + half_2 + half_1
    frame = twist_word_frame(g, [gamma for _, gamma in word])
    if frame != swap_frame(g, k):
        raise AssertionError("nine-twist swap word failed verification")
    return word


def find_twist_word(
    g: int,
    target: SymplecticFrame,
    generators: list[tuple[str, np.ndarray]],
    max_len: int,
) -> list[str] | None:
    """Bounded breadth-first search for a twist word composing to the target.

    Returns the names of a shortest word (first applied first), or None when
    no word of length <= max_len exists.
    """
    if target.g != g:
        raise ValueError("genus mismatch")
    mats = []
    ident = SymplecticFrame.identity(g)
    for name, gamma in generators:
        mats.append((name, transvection(ident, gamma).m))
    start = np.eye(2 * g, dtype=np.uint8)
    if np.array_equal(start, target.m):
        return []
    seen = {start.tobytes()}
    queue: deque[tuple[np.ndarray, list[str]]] = deque([(start, [])])
    while queue:
        m, word = queue.popleft()
        if len(word) >= max_len:
            continue
        for name, t in mats:
            m2 = gf2.matmul(t, m)
            key = m2.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if np.array_equal(m2, target.m):
                return word + [name]
            queue.append((m2, word + [name]))
    return None


def seven_twist_swap(k: int, g: int, max_len: int = 7) -> list[tuple[str, np.ndarray]]:
    """Handle-swap word over the enlarged generating set, found by search.

    Enlarging the handle/conjugate/connecting set with the conjugate
    connecting loop brings the swap within seven twists; the search is
    breadth-first, so the returned word is shortest over this set. Raises if
    no word of length <= max_len exists.
    """
    if g < 2:
        raise ValueError(f"swap needs genus >= 2, got {g}")
    generators = [
        (f"handle-{k}", handle_loop(g, k)),
        (f"handle-{k + 1}", handle_loop(g, k + 1)),
        (f"conjugate-{k}", conjugate_loop(g, k)),
        (f"conjugate-{k + 1}", conjugate_loop(g, k + 1)),
        (f"connecting-{k}.{k + 1}", connecting_loop(g, k)),
        (f"conjugate-connecting-{k}.{k + 1}", conjugate_connecting_loop(g, k)),
    ]
    names = find_twist_word(g, swap_frame(g, k), generators, max_len)
    if names is None:
        raise AssertionError(f"no swap word of length <= {max_len} over the enlarged set")
    by_name = dict(generators)
    word = [(name, by_name[name]) for name in names]
    frame = twist_word_frame(g, [gamma for _, gamma in word])
    if frame != swap_frame(g, k):
        raise AssertionError("searched swap word failed verification")
    return word


# ---------------------------------------------------------------------------
# Circuit level: schedules on a concrete surface.


def oriented_faces(surface: TiledSurface) -> list[list[tuple[int, int, int]]]:
    """Directed face traversals chosen so every edge runs once each way.

    Returns, per face, a list of (edge, tail, head) triples. Orientations are
    propagated from face 0 across shared edges; a conflict means the face
    data does not describe an orientable surface and raises.
    """
    cycles = [surface.face_vertex_cycle(f) for f in range(len(surface.faces))]
    uses: dict[int, list[int]] = {}
    for f, face in enumerate(surface.faces):
        for e in face:
            uses.setdefault(e, []).append(f)
    flip = [None] * len(surface.faces)
    flip[0] = False
    pending = deque([0])
    while pending:
        f = pending.popleft()
        face, cycle = surface.faces[f], cycles[f]
        m = len(face)
        for i, e in enumerate(face):
            tail, head = cycle[i], cycle[(i + 1) % m]
            if flip[f]:
                tail, head = head, tail
            partners = [p for p in uses[e] if p != f] or [f]
            for p in partners:
                pf, pc = surface.faces[p], cycles[p]
                j = pf.index(e)
                p_tail, p_head = pc[j], pc[(j + 1) % len(pf)]
                # The partner must traverse e in the opposite direction.
                want_flip = (p_tail, p_head) == (tail, head)
                if flip[p] is None:
                    flip[p] = want_flip
                    pending.append(p)
                elif flip[p] != want_flip:
                    raise ValueError(
                        f"faces {f} and {p} cannot be oriented consistently across edge {e}"
                    )
    if any(v is None for v in flip):
        raise ValueError("face adjacency is not connected; cannot orient the surface")
    out = []
    for f, face in enumerate(surface.faces):
        cycle = cycles[f]
        m = len(face)
        triples = []
        for i, e in enumerate(face):
            tail, head = cycle[i], cycle[(i + 1) % m]
            if flip[f]:
                tail, head = head, tail
            triples.append((e, tail, head))
        if flip[f]:
            triples.reverse()
        out.append(triples)
    return out


def rotation_system(surface: TiledSurface) -> list[dict[int, int]]:
    """Cyclic edge order around each vertex induced by the oriented faces.

    Entry v maps each edge arriving at v to the next edge in the rotation;
    following the map from any incident edge visits all of them. Raises if
    some vertex's corners do not close into a single cycle.
    """
    nxt: list[dict[int, int]] = [dict() for _ in range(surface.vertex_count)]
    for triples in oriented_faces(surface):
        m = len(triples)
        for i in range(m):
            e_in, _, v = triples[i]
            e_out = triples[(i + 1) % m][0]
            if e_in in nxt[v]:
                raise ValueError(f"edge {e_in} arrives at vertex {v} twice")
            nxt[v][e_in] = e_out
    for v, order in enumerate(nxt):
        if not order:
            continue
        start = next(iter(order))
        e, steps = order[start], 1
        while e != start:
            e = order[e]
            steps += 1
            if steps > len(order):
                break
        if steps != len(order):
            raise ValueError(f"corners at vertex {v} do not close into one rotation")
    return nxt


def order_loop(surface: TiledSurface, loop_edges) -> tuple[list[int], list[int]]:
    """Arrange an edge set into a directed cycle.

    Returns (edges, vertices) with edges[i] running vertices[i] ->
    vertices[i+1 mod d]. Rejects sets that are not a single cycle visiting
    each of its vertices exactly once.
    """
    loop = sorted(set(int(e) for e in loop_edges))
    if len(loop) < 2:
        raise ValueError("a loop needs at least two edges")
    at: dict[int, list[int]] = {}
    for e in loop:
        u, v = surface.edges[e]
        at.setdefault(u, []).append(e)
        at.setdefault(v, []).append(e)
    bad = [v for v, es in at.items() if len(es) != 2]
    if bad:
        raise ValueError(
            f"loop touches vertex {bad[0]} with degree {len(at[bad[0]])}, expected 2"
        )
    first = loop[0]
    tail, head = surface.edges[first]
    edges, verts = [first], [tail]
    while head != verts[0]:
        verts.append(head)
        e_next = next(e for e in at[head] if e != edges[-1])
        edges.append(e_next)
        u, v = surface.edges[e_next]
        head = v if u == head else u
    if len(edges) != len(loop):
        raise ValueError("edge set splits into more than one cycle")
    return edges, verts


def push_off(surface: TiledSurface, loop_edges) -> tuple[list[int], list[int], list[list[int]]]:
    """Side sets of a loop under the surface's rotation system.

    For each corner (arrive via edges[i] at vertices[i+1], depart via
    edges[i+1]) the side set holds the edges strictly between the two in the
    rotation order there. Consistent face orientation makes every corner
    choose the same geometric side, so the union of the side sets is a
    parallel dual cycle never crossing the loop. Returns (edges, vertices,
    side sets), with side set i belonging to the head corner of edges[i].
    """
    edges, verts = order_loop(surface, loop_edges)
    nxt = rotation_system(surface)
    d = len(edges)
    on_loop = set(edges)
    sides: list[list[int]] = []
    for i in range(d):
        v = verts[(i + 1) % d]
        e_in, e_out = edges[i], edges[(i + 1) % d]
        side = []
        e = nxt[v][e_in]
        while e != e_out:
            if e in on_loop or len(side) >= len(nxt[v]):
                raise ValueError(
                    f"rotation at vertex {v} does not separate the loop corner"
                )
            side.append(e)
            e = nxt[v][e]
        sides.append(side)
    return edges, verts, sides


@dataclass(frozen=True)
class TwistStep:
    """One layer of the schedule: disjoint controls with their target sets."""

    cnots: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def cnot_count(self) -> int:
        return sum(len(t) for _, t in self.cnots)


def twist_schedule(surface: TiledSurface, loop_edges) -> tuple[list[TwistStep], np.ndarray]:
    """Layered CNOT schedule of a twist about a Z-type loop.

    Layer t (1-based) pairs control edges[i] with the side set of corner
    i+t-1, so the target window slides once around the loop and every
    (control, side set) pair occurs exactly once over the d layers. Returns
    the steps and the indicator of the pushed-off dual cycle (the XOR of the
    side sets).
    """
    edges, _, sides = push_off(surface, loop_edges)
    d = len(edges)
    gamma_hat = np.zeros(len(surface.edges), dtype=np.uint8)
    for side in sides:
        for e in side:
            gamma_hat[e] ^= 1
    steps = []
    for t in range(d):
        cnots = []
        for i in range(d):
            targets = sides[(i + t) % d]
            if targets:
                cnots.append((edges[i], tuple(targets)))
        steps.append(TwistStep(cnots=tuple(cnots)))
    return steps, gamma_hat


class PauliFrame:
    """Tableau of stabilizer generators and logical representatives.

    Rows hold X and Z supports over the physical qubits; CNOT layers update
    them in place and every layer re-checks that stabilizers still commute
    and the logical pairing is intact.
    """

    def __init__(self, x: np.ndarray, z: np.ndarray, n_sx: int, n_sz: int, k: int):
        self.x = x.astype(np.uint8).copy()
        self.z = z.astype(np.uint8).copy()
        self.n_sx = n_sx
        self.n_sz = n_sz
        self.k = k
        self.check_commutation()

    @classmethod
    def from_code(cls, code: CssCode) -> "PauliFrame":
        n = code.n
        n_sx, n_sz, k = code.h_x.shape[0], code.h_z.shape[0], code.k
        rows = n_sx + n_sz + 2 * k
        x = np.zeros((rows, n), dtype=np.uint8)
        z = np.zeros((rows, n), dtype=np.uint8)
        x[:n_sx] = code.h_x
        z[n_sx : n_sx + n_sz] = code.h_z
        x[n_sx + n_sz : n_sx + n_sz + k] = code.logical_x
        z[n_sx + n_sz + k :] = code.logical_z
        return cls(x, z, n_sx, n_sz, k)

    @property
    def stab_x(self) -> np.ndarray:
        return self.x[: self.n_sx]

    @property
    def stab_z(self) -> np.ndarray:
        return self.z[self.n_sx : self.n_sx + self.n_sz]

    @property
    def logical_x_rows(self) -> np.ndarray:
        base = self.n_sx + self.n_sz
        return self.x[base : base + self.k]

    @property
    def logical_z_rows(self) -> np.ndarray:
        base = self.n_sx + self.n_sz + self.k
        return self.z[base:]

    def check_commutation(self) -> None:
        pairing = gf2.matmul(self.x, self.z.T) ^ gf2.matmul(self.z, self.x.T)
        expected = np.zeros_like(pairing)
        base = self.n_sx + self.n_sz
        for i in range(self.k):
            expected[base + i, base + self.k + i] = 1
            expected[base + self.k + i, base + i] = 1
        if not np.array_equal(pairing, expected):
            raise ValueError("tableau rows lost their commutation pattern")

    def apply_cnot(self, control: int, target: int) -> None:
        self.x[:, target] ^= self.x[:, control]
        self.z[:, control] ^= self.z[:, target]

    def apply_step(self, step: TwistStep) -> None:
        for control, targets in step.cnots:
            for t in targets:
                self.apply_cnot(control, t)
        self.check_commutation()

    def x_check_weights(self, rows=None) -> np.ndarray:
        sub = self.stab_x if rows is None else self.stab_x[rows]
        return sub.sum(axis=1)


def apply_schedule(frame: PauliFrame, steps) -> None:
    for step in steps:
        frame.apply_step(step)


def _row_space_equal(a: np.ndarray, b: np.ndarray) -> bool:
    ra, rb = gf2.rank(a), gf2.rank(b)
    return ra == rb == gf2.rank(np.vstack([a, b]))


@dataclass(frozen=True)
class TwistReport:
    """Outcome of building and verifying one circuit-level twist."""

    loop: tuple[int, ...]
    vertices: tuple[int, ...]
    steps: tuple[TwistStep, ...]
    gamma_hat: tuple[int, ...]
    loop_class: np.ndarray
    dual_class: np.ndarray
    predicted: np.ndarray
    acted_on_x: np.ndarray
    acted_on_z: np.ndarray
    stabilizers_restored: bool
    x_weight_range: tuple[int, int]
    x_weights_by_step: tuple[tuple[int, int], ...]

    @property
    def logical_match(self) -> bool:
        return np.array_equal(self.acted_on_x, self.predicted) and np.array_equal(
            self.acted_on_z, self.predicted
        )

    @property
    def passed(self) -> bool:
        return self.stabilizers_restored and self.logical_match


def _loop_indicator(code: CssCode, loop) -> np.ndarray:
    vec = np.zeros(code.n, dtype=np.uint8)
    arr = np.asarray(list(loop) if not isinstance(loop, np.ndarray) else loop)
    if arr.ndim == 1 and arr.shape[0] == code.n and arr.max(initial=0) <= 1:
        vec[:] = arr.astype(np.uint8) & 1
    else:
        for e in arr.astype(int).ravel():
            if not 0 <= e < code.n:
                raise ValueError(f"loop edge {e} out of range")
            vec[e] ^= 1
    return vec


def circuit_twist(target, loop) -> TwistReport:
    """Build and verify the layered CNOT schedule of a twist about a loop.

    ``target`` is a TiledSurface or a CssCode derived from one; ``loop`` is a
    Z-type cycle given as edge indices or as a length-n indicator. The loop
    must be a single nontrivial cycle. The returned report records the
    schedule, the pushed-off dual cycle, whether the stabilizer group came
    back to itself, the range of X-check weights along the way, and the
    logical pairing tables against the transvection prediction.
    """
    if isinstance(target, TiledSurface):
        surface, code = target, derive_code(target)
    elif isinstance(target, CssCode):
        code = target
        surface = code.meta.get("surface")
        if not isinstance(surface, TiledSurface):
            raise ValueError("code carries no surface; pass the TiledSurface instead")
    else:
        raise TypeError(f"expected TiledSurface or CssCode, got {type(target).__name__}")

    vec = _loop_indicator(code, loop)
    if gf2.matmul(code.h_x, vec.reshape(-1, 1)).any():
        raise ValueError("loop is not a cycle: some vertex has odd incidence")
    faces = gf2.Reducer(code.n)
    faces.add_rows(code.h_z)
    if faces.contains(vec):
        raise ValueError("loop bounds faces; the twist would act trivially")

    loop_set = [int(e) for e in np.nonzero(vec)[0]]
    steps, gamma_hat = twist_schedule(surface, loop_set)
    edges, verts, _ = push_off(surface, loop_set)

    # Transvection prediction from crossing parities. Both pairing tables
    # (acted X against original Z, original X against acted Z) get the same
    # rank-one update, and the dual cycle must not cross the loop itself.
    c = gf2.overlap_parity(code.logical_x, vec.reshape(1, -1))[:, 0]
    b = gf2.overlap_parity(code.logical_z, gamma_hat.reshape(1, -1))[:, 0]
    if int(vec @ gamma_hat) % 2:
        raise ValueError("pushed-off cycle crosses the loop; side sets are inconsistent")
    predicted = (np.eye(code.k, dtype=np.uint8) + np.outer(c, b)) % 2

    frame = PauliFrame.from_code(code)
    touched = np.nonzero(code.h_x[:, loop_set].sum(axis=1))[0]
    weights = [frame.x_check_weights(touched)]
    for step in steps:
        frame.apply_step(step)
        weights.append(frame.x_check_weights(touched))
    by_step = tuple((int(w.min()), int(w.max())) for w in weights)
    w_all = np.concatenate(weights)

    restored = _row_space_equal(frame.stab_x, code.h_x) and _row_space_equal(
        frame.stab_z, code.h_z
    )
    acted_on_x = gf2.overlap_parity(frame.logical_x_rows, code.logical_z)
    acted_on_z = gf2.overlap_parity(code.logical_x, frame.logical_z_rows)

    return TwistReport(
        loop=tuple(edges),
        vertices=tuple(verts),
        steps=tuple(steps),
        gamma_hat=tuple(int(e) for e in np.nonzero(gamma_hat)[0]),
        loop_class=c,
        dual_class=b,
        predicted=predicted,
        acted_on_x=acted_on_x,
        acted_on_z=acted_on_z,
        stabilizers_restored=restored,
        x_weight_range=(int(w_all.min()), int(w_all.max())),
        x_weights_by_step=by_step,
    )


def run_checks(g: int = 2, code: CssCode | None = None, loop=None) -> list[tuple[str, bool, str]]:
    """Pass/fail report over the homology-level identities and, when a code
    is supplied, one circuit-level twist. Used by the dehn-verify command."""
    results: list[tuple[str, bool, str]] = []
    for name, ok in generator_circuit_checks(g):
        results.append((name, ok, "frame equality"))
    ident = SymplecticFrame.identity(g)
    twice = transvection(transvection(ident, handle_loop(g, 1)), handle_loop(g, 1))
    results.append(("twist applied twice = identity", twice == ident, "involution"))
    if g >= 2:
        try:
            word = swap_via_twists(1, g)
            results.append(
                ("nine-twist handle swap", True, "-".join(name for name, _ in word))
            )
        except AssertionError as exc:
            results.append(("nine-twist handle swap", False, str(exc)))
        try:
            word = seven_twist_swap(1, g)
            results.append(
                (
                    f"{len(word)}-twist swap over enlarged set",
                    len(word) <= 7,
                    "-".join(name for name, _ in word),
                )
            )
        except AssertionError as exc:
            results.append(("seven-twist swap search", False, str(exc)))
    if code is not None:
        if loop is None:
            from .distance import min_weight_logical

            _, vec = min_weight_logical(code, "z")
            loop = vec
        report = circuit_twist(code, loop)
        results.append(
            (
                f"circuit twist on {code.name}: stabilizers restored",
                report.stabilizers_restored,
                f"{len(report.steps)} layers",
            )
        )
        results.append(
            (
                f"circuit twist on {code.name}: logical action",
                report.logical_match,
                f"X-check weights in {report.x_weight_range}",
            )
        )
    return results
