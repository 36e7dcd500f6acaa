"""Dense linear algebra over GF(2).

Matrices are numpy uint8 arrays with entries in {0, 1}; a "bit matrix" here is
nothing fancier than that. Elimination runs on rows packed into uint64 words,
which keeps the n ~ few-thousand instances from the code constructions well
under a second.
"""

from __future__ import annotations

import numpy as np


def _as_bits(m: np.ndarray) -> np.ndarray:
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    if m.ndim != 2:
        raise ValueError("expected a 2-d bit matrix")
    return m & 1


def _pack(m: np.ndarray) -> np.ndarray:
    """Pack bit rows into uint64 words (big-endian bit order per byte)."""
    rows, cols = m.shape
    nbytes = -(-cols // 8)
    pad = (-nbytes) % 8
    packed = np.packbits(m, axis=1)
    if pad:
        packed = np.concatenate(
            [packed, np.zeros((rows, pad), dtype=np.uint8)], axis=1
        )
    return packed


def _unpack(packed: np.ndarray, cols: int) -> np.ndarray:
    return np.unpackbits(packed, axis=1)[:, :cols]


def _get_col(packed: np.ndarray, col: int) -> np.ndarray:
    return (packed[:, col >> 3] >> (7 - (col & 7))) & 1


def echelon(m: np.ndarray, reduced: bool = True) -> tuple[np.ndarray, list[int]]:
    """Gaussian elimination with first-nonzero pivoting.

    Args:
        m: bit matrix.
        reduced: eliminate above pivots as well (RREF).

    Returns:
        (form, pivot_cols); `form` has one pivot row per entry of
        `pivot_cols`, in order, followed by zero rows.
    """
    m = _as_bits(m)
    rows, cols = m.shape
    packed = _pack(m)
    words = packed.view(np.uint64)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        colbits = _get_col(packed, c)
        hits = np.nonzero(colbits[r:])[0]
        if hits.size == 0:
            continue
        pr = r + int(hits[0])
        if pr != r:
            words[[r, pr]] = words[[pr, r]]
        if reduced:
            others = np.nonzero(_get_col(packed, c))[0]
            others = others[others != r]
        else:
            below = np.nonzero(_get_col(packed, c)[r + 1:])[0]
            others = below + r + 1
        if others.size:
            words[others] ^= words[r]
        pivots.append(c)
        r += 1
    return _unpack(packed, cols), pivots


def rank(m: np.ndarray) -> int:
    return len(echelon(m, reduced=False)[1])


def kernel_basis(m: np.ndarray) -> np.ndarray:
    """Basis for the right kernel {x : m @ x = 0 over GF(2)}, one row per
    basis vector, ordered by free column index."""
    m = _as_bits(m)
    rows, cols = m.shape
    red, pivots = echelon(m, reduced=True)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for pr, pc in enumerate(pivots):
            basis[i, pc] = red[pr, f]
    return basis


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a @ b) mod 2. float32 matmul is exact here and much faster than
    integer dot for the sizes we hit."""
    a = np.asarray(a)
    b = np.asarray(b)
    prod = np.matmul(a.astype(np.float32), b.astype(np.float32))
    return (prod.astype(np.int64) & 1).astype(np.uint8)


def overlap_parity(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pairwise support-overlap parities: out[i, j] = |a_i & b_j| mod 2."""
    return matmul(np.atleast_2d(a), np.atleast_2d(b).T)


class Reducer:
    """Incremental row-space membership oracle.

    Rows can be added one at a time; `residual` reduces a vector against the
    current space. Rows are kept as packed byte arrays.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self._rows: list[np.ndarray] = []   # packed uint8 rows
        self._leads: list[int] = []         # lead column of each row

    @staticmethod
    def _lead_of(row: np.ndarray) -> int:
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            return -1
        byte_idx = int(nz[0])
        bl = int(row[byte_idx]).bit_length()
        return byte_idx * 8 + (8 - bl)

    def _pack_vec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.uint8) & 1
        if v.shape != (self.cols,):
            raise ValueError("vector length mismatch")
        return np.packbits(v)

    def residual(self, v: np.ndarray) -> np.ndarray:
        """Reduce v against the stored rows; returns the packed residual."""
        r = self._pack_vec(v)
        for lead, row in zip(self._leads, self._rows):
            if (r[lead >> 3] >> (7 - (lead & 7))) & 1:
                r ^= row
        return r

    def contains(self, v: np.ndarray) -> bool:
        return not self.residual(v).any()

    def add(self, v: np.ndarray) -> bool:
        """Add v to the span. Returns True if it enlarged the space."""
        r = self.residual(v)
        if not r.any():
            return False
        lead = self._lead_of(r)
        idx = 0
        while idx < len(self._leads) and self._leads[idx] < lead:
            idx += 1
        self._leads.insert(idx, lead)
        self._rows.insert(idx, r)
        return True

    def add_rows(self, m: np.ndarray) -> None:
        for row in _as_bits(m):
            self.add(row)

    @property
    def dim(self) -> int:
        return len(self._rows)


def quotient_basis(span_rows: np.ndarray, subspace_rows: np.ndarray) -> np.ndarray:
    """Representatives completing the row space of `subspace_rows` to that of
    `span_rows`.

    Rows of `span_rows` are taken in order; a row is kept iff it is not in
    the span of the subspace plus previously kept rows. The returned rows are
    the original vectors, not their reductions.
    """
    span_rows = _as_bits(span_rows)
    subspace_rows = _as_bits(subspace_rows)
    span_red = Reducer(span_rows.shape[1])
    span_red.add_rows(span_rows)
    for row in subspace_rows:
        if not span_red.contains(row):
            raise ValueError("subspace rows must lie inside the span")
    red = Reducer(span_rows.shape[1])
    red.add_rows(subspace_rows)
    kept = []
    for row in span_rows:
        if red.add(row):
            kept.append(row)
    if kept:
        return np.array(kept, dtype=np.uint8)
    return np.zeros((0, span_rows.shape[1]), dtype=np.uint8)


def inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a square GF(2) matrix. Raises ValueError if singular."""
    m = _as_bits(m)
    n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("matrix is not square")
    aug = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    red, pivots = echelon(aug, reduced=True)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular over GF(2)")
    return red[:n, n:]


def symplectic_pair(
    z_reps: np.ndarray, x_reps: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Recombine logical representatives into symplectic pairs.

    Given 2g Z-type and 2g X-type representatives whose overlap-parity matrix
    is invertible (true for homology representatives of a closed orientable
    surface), returns (z_new, x_reps) with overlap_parity(x_reps, z_new)
    equal to the identity: X_i anticommutes with Z_j iff i == j.
    """
    z_reps = _as_bits(z_reps)
    x_reps = _as_bits(x_reps)
    m = overlap_parity(x_reps, z_reps)
    c = inverse(m)
    z_new = matmul(c.T, z_reps)
    assert np.array_equal(
        overlap_parity(x_reps, z_new), np.eye(m.shape[0], dtype=np.uint8)
    )
    return z_new, x_reps
