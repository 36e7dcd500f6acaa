import json

import pytest

from hypsc import builders, gf2
from hypsc.surface import TiledSurface, derive_code, validate_surface


def square_torus():
    # toric L=2 by hand would do, but the builder is the canonical source
    return builders.toric(2)


def test_toric3_counts_and_genus():
    surf = builders.toric(3)
    assert surf.vertex_count == 9
    assert surf.edge_count == 18
    assert surf.face_count == 9
    assert surf.euler_characteristic() == 0
    assert surf.genus() == 1
    validate_surface(surf)


def test_face_vertex_cycle_closes():
    surf = builders.toric(3)
    for f in range(surf.face_count):
        cyc = surf.face_vertex_cycle(f)
        assert len(cyc) == 4
        for i, e in enumerate(surf.faces[f]):
            assert {cyc[i], cyc[(i + 1) % 4]} == set(surf.edges[e])


def test_json_round_trip(hyp60_surface):
    text = hyp60_surface.to_json()
    back = TiledSurface.from_json(text)
    assert back.name == hyp60_surface.name
    assert back.vertex_count == hyp60_surface.vertex_count
    assert back.edges == hyp60_surface.edges
    assert back.faces == hyp60_surface.faces
    # re-emission is byte-identical, so files are stable artifacts
    assert back.to_json() == text


def test_from_json_rejects_missing_field():
    payload = json.loads(builders.toric(2).to_json())
    del payload["faces"]
    with pytest.raises(ValueError):
        TiledSurface.from_json(json.dumps(payload))


def test_validate_rejects_out_of_range_endpoint():
    surf = square_torus()
    broken = TiledSurface(
        name="broken",
        vertex_count=2,
        edges=surf.edges,
        faces=surf.faces,
    )
    with pytest.raises(ValueError):
        validate_surface(broken)


def test_validate_rejects_self_loop():
    with pytest.raises(ValueError):
        validate_surface(
            TiledSurface(
                name="loop",
                vertex_count=2,
                edges=[(0, 0), (0, 1)],
                faces=[[0, 1], [0, 1]],
            )
        )


def test_validate_rejects_edge_on_one_face():
    surf = square_torus()
    faces = [list(f) for f in surf.faces]
    faces[0], faces[1] = faces[0][:], faces[0][:]
    # edge multiplicities are now wrong: some edges appear 3 times, others once
    broken = TiledSurface(
        name="unbalanced",
        vertex_count=surf.vertex_count,
        edges=surf.edges,
        faces=faces,
    )
    with pytest.raises(ValueError):
        validate_surface(broken)


def test_validate_rejects_open_face_walk():
    broken = TiledSurface(
        name="open",
        vertex_count=4,
        edges=[(0, 1), (1, 2), (2, 3), (3, 0)],
        faces=[[0, 1], [2, 3]],
    )
    with pytest.raises(ValueError):
        validate_surface(broken)


def test_genus_rejects_odd_characteristic():
    odd = TiledSurface(
        name="odd",
        vertex_count=4,
        edges=[(0, 1), (1, 2), (2, 0)],
        faces=[[0, 1, 2], [0, 1, 2]],
    )
    assert odd.euler_characteristic() == 3
    with pytest.raises(ValueError):
        odd.genus()


def test_derive_toric3(toric3_code):
    code = toric3_code
    assert (code.n, code.k) == (18, 2)
    assert code.h_x.sum(axis=1).tolist() == [4] * 9
    assert code.h_z.sum(axis=1).tolist() == [4] * 9
    code.check_commutation()


def test_derive_commutation_and_k(hyp60_code, hyp160_code, rotated6_code):
    for code in (hyp60_code, hyp160_code, rotated6_code):
        code.check_commutation()
        surf = code.meta["surface"]
        assert code.k == 2 * surf.genus()
        assert not gf2.matmul(code.h_x, code.logical_z.T).any()
        assert not gf2.matmul(code.h_z, code.logical_x.T).any()


def test_hyp60_check_weights(hyp60_code):
    assert sorted(set(hyp60_code.h_z.sum(axis=1).tolist())) == [4]
    assert sorted(set(hyp60_code.h_x.sum(axis=1).tolist())) == [5]


def test_semi_hyperbolic_weight_census(hyp60_surface):
    # subdividing keeps one weight-5 X check per original vertex and adds
    # weight-4 checks at the new vertices: |E|(l-1) + |F|(l-1)^2 of them
    code = derive_code(builders.semi_hyperbolic(hyp60_surface, 2))
    weights = code.h_x.sum(axis=1)
    assert int((weights == 5).sum()) == 24
    assert int((weights == 4).sum()) == 60 * 1 + 30 * 1
    assert sorted(set(code.h_z.sum(axis=1).tolist())) == [4]


def test_derive_rejects_invalid_surface():
    broken = TiledSurface(
        name="open",
        vertex_count=4,
        edges=[(0, 1), (1, 2), (2, 3), (3, 0)],
        faces=[[0, 1, 2, 3]],
    )
    with pytest.raises(ValueError):
        derive_code(broken)
