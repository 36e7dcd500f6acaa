import numpy as np
import pytest

from hypsc import builders, distance, gf2
from hypsc.surface import CssCode, derive_code


def is_logical(code, side, vec):
    """vec commutes with every check on its side and crosses some logical."""
    if side == "z":
        checks, opposite = code.h_x, code.logical_x
    else:
        checks, opposite = code.h_z, code.logical_z
    if gf2.matmul(checks, vec[None, :].T).any():
        return False
    return gf2.matmul(opposite, vec[None, :].T).any()


@pytest.mark.parametrize("side", ["z", "x"])
def test_toric3_distance(toric3_code, side):
    d, vec = distance.min_weight_logical(toric3_code, side)
    assert d == 3
    assert vec.sum() == 3
    assert is_logical(toric3_code, side, vec)


def test_distances_pair(toric4_code):
    assert distance.distances(toric4_code) == (4, 4)


@pytest.mark.parametrize(
    "builder, expected",
    [
        (lambda: builders.toric(3), (3, 3)),
        (lambda: builders.rotated_toric(4), (4, 4)),
    ],
)
@pytest.mark.parametrize("side", ["z", "x"])
def test_counts_match_brute_force(builder, expected, side):
    code = derive_code(builder())
    d, count = distance.count_min_weight(code, side)
    bd, bcount = distance.brute_force_min_weight(code, side)
    assert d == (expected[0] if side == "z" else expected[1])
    assert d == bd
    assert count == bcount


def test_stellated_dodecahedron_z_loops(sstd_code):
    d, count = distance.count_min_weight(sstd_code, "z")
    assert (d, count) == (3, 20)
    bd, bcount = distance.brute_force_min_weight(sstd_code, "z")
    assert (bd, bcount) == (3, 20)


def test_hyp60_distances(hyp60_code):
    assert distance.distances(hyp60_code) == (4, 6)


def test_rotated6_distances(rotated6_code):
    assert distance.distances(rotated6_code) == (6, 6)


def test_min_vector_is_not_a_stabilizer(toric3_code):
    _, vec = distance.min_weight_logical(toric3_code, "z")
    red = gf2.Reducer(toric3_code.n)
    red.add_rows(toric3_code.h_z)
    assert not red.contains(vec)


def test_count_cap_raises(toric3_code):
    with pytest.raises(ValueError, match="more than 1 "):
        distance.count_min_weight(toric3_code, "z", cap=1)


def test_brute_force_dimension_cap(hyp60_code):
    with pytest.raises(ValueError, match="too large"):
        distance.brute_force_min_weight(hyp60_code, "z")


def test_invalid_side_rejected(toric3_code):
    with pytest.raises(ValueError, match="side"):
        distance.min_weight_logical(toric3_code, "y")
    with pytest.raises(ValueError, match="side"):
        distance.brute_force_min_weight(toric3_code, "y")


def test_side_with_dangling_qubit_rejected():
    # a qubit that sits in only one check cannot live on a closed surface
    code = CssCode(
        name="bad",
        n=2,
        h_x=np.array([[1, 0], [0, 1]], dtype=np.uint8),
        h_z=np.zeros((0, 2), dtype=np.uint8),
        logical_x=np.array([[1, 1]], dtype=np.uint8),
        logical_z=np.array([[1, 1]], dtype=np.uint8),
    )
    with pytest.raises(ValueError, match="exactly two checks"):
        distance.min_weight_logical(code, "z")
