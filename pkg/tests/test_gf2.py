import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hypsc import gf2


def bit_matrices(max_rows=8, max_cols=12):
    shapes = st.tuples(
        st.integers(1, max_rows), st.integers(1, max_cols)
    )
    return shapes.flatmap(
        lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))
    )


def test_rank_identity_and_zero():
    assert gf2.rank(np.eye(3, dtype=np.uint8)) == 3
    assert gf2.rank(np.zeros((4, 5), dtype=np.uint8)) == 0


def test_rank_toric3_face_checks(toric3_code):
    # one global dependency among the 9 face checks of the L=3 torus
    assert toric3_code.h_z.shape == (9, 18)
    assert gf2.rank(toric3_code.h_z) == 8
    assert gf2.rank(toric3_code.h_x) == 8


def test_kernel_identity_empty():
    assert gf2.kernel_basis(np.eye(4, dtype=np.uint8)).shape[0] == 0


def test_kernel_zero_full():
    basis = gf2.kernel_basis(np.zeros((2, 4), dtype=np.uint8))
    assert basis.shape == (4, 4)
    assert gf2.rank(basis) == 4


def test_kernel_toric3_cycle_space(toric3_code):
    assert gf2.kernel_basis(toric3_code.h_x).shape[0] == 18 - 8


@given(bit_matrices())
@settings(max_examples=120)
def test_rank_nullity(m):
    ker = gf2.kernel_basis(m)
    assert gf2.rank(m) + ker.shape[0] == m.shape[1]
    if ker.shape[0]:
        assert not gf2.matmul(m, ker.T).any()
        assert gf2.rank(ker) == ker.shape[0]


@given(bit_matrices(), st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_rank_row_shuffle_invariant(m, rnd):
    order = list(range(m.shape[0]))
    rnd.shuffle(order)
    assert gf2.rank(m[order]) == gf2.rank(m)


@given(bit_matrices())
@settings(max_examples=60)
def test_echelon_pivot_columns(m):
    form, pivots = gf2.echelon(m, reduced=True)
    for i, c in enumerate(pivots):
        col = form[:, c]
        assert col[i] == 1 and col.sum() == 1
    # reduced form is a fixed point
    again, pivots2 = gf2.echelon(form, reduced=True)
    assert np.array_equal(again, form) and pivots2 == pivots


def test_matmul_small():
    a = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    b = np.array([[1, 0], [1, 1], [0, 1]], dtype=np.uint8)
    assert np.array_equal(gf2.matmul(a, b), np.array([[0, 1], [1, 0]]))


@given(bit_matrices(max_rows=6, max_cols=6))
@settings(max_examples=60)
def test_reducer_tracks_rank(m):
    red = gf2.Reducer(m.shape[1])
    for i, row in enumerate(m):
        red.add(row)
        assert red.dim() == gf2.rank(m[: i + 1])
    # any GF(2) combination of the rows is contained
    combo = np.bitwise_xor.reduce(m[:: max(1, m.shape[0] // 2)], axis=0)
    assert red.contains(combo)
    assert not red.residual(combo).any()


def test_reducer_rejects_outside_vector():
    red = gf2.Reducer(4)
    red.add(np.array([1, 1, 0, 0], dtype=np.uint8))
    v = np.array([0, 0, 1, 0], dtype=np.uint8)
    assert not red.contains(v)
    assert red.residual(v).any()


def test_quotient_basis_equal_spaces_is_empty():
    rows = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    assert gf2.quotient_basis(rows, rows).shape[0] == 0


def test_quotient_basis_toric3(toric3_code):
    ker = gf2.kernel_basis(toric3_code.h_x)
    reps = gf2.quotient_basis(ker, toric3_code.h_z)
    assert reps.shape[0] == 2
    # each representative is a cycle and independent of the face span
    assert not gf2.matmul(toric3_code.h_x, reps.T).any()
    stacked = np.vstack([toric3_code.h_z, reps])
    assert gf2.rank(stacked) == gf2.rank(toric3_code.h_z) + 2


def test_quotient_basis_rejects_subspace_outside_span():
    ker = np.array([[1, 1, 0, 0]], dtype=np.uint8)
    im = np.array([[0, 0, 1, 1]], dtype=np.uint8)
    with pytest.raises(ValueError):
        gf2.quotient_basis(ker, im)


def test_inverse_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(1, 9))
        while True:
            m = rng.integers(0, 2, size=(n, n)).astype(np.uint8)
            if gf2.rank(m) == n:
                break
        inv = gf2.inverse(m)
        assert np.array_equal(gf2.matmul(inv, m), np.eye(n, dtype=np.uint8))


def test_inverse_rejects_singular():
    with pytest.raises(ValueError):
        gf2.inverse(np.zeros((2, 2), dtype=np.uint8))


def test_overlap_parity_matches_python():
    rng = np.random.default_rng(11)
    a = rng.integers(0, 2, size=(3, 10)).astype(np.uint8)
    b = rng.integers(0, 2, size=(4, 10)).astype(np.uint8)
    got = gf2.overlap_parity(a, b)
    for i in range(3):
        for j in range(4):
            assert got[i, j] == int(a[i] @ b[j]) % 2


def test_symplectic_pair_identity_pairing(toric3_code):
    z = toric3_code.logical_z
    x = toric3_code.logical_x
    assert np.array_equal(
        gf2.overlap_parity(x, z), np.eye(2, dtype=np.uint8)
    )


def test_symplectic_pair_on_hyp60(hyp60_code):
    assert np.array_equal(
        gf2.overlap_parity(hyp60_code.logical_x, hyp60_code.logical_z),
        np.eye(8, dtype=np.uint8),
    )


def test_symplectic_pair_rejects_degenerate():
    z = np.array([[1, 0, 0, 0], [1, 0, 0, 0]], dtype=np.uint8)
    x = np.array([[1, 0, 0, 0], [0, 0, 0, 1]], dtype=np.uint8)
    with pytest.raises(ValueError):
        gf2.symplectic_pair(z, x)
