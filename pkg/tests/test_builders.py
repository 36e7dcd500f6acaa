import networkx as nx
import pytest

from hypsc import builders
from hypsc.group import GroupError
from hypsc.surface import derive_code, validate_surface


@pytest.mark.parametrize("L", [2, 3, 4, 5])
def test_toric_counts(L):
    surf = builders.toric(L)
    validate_surface(surf)
    assert surf.vertex_count == L * L
    assert surf.edge_count == 2 * L * L
    assert surf.face_count == L * L
    assert surf.euler_characteristic() == 0
    assert surf.genus() == 1


def test_toric_rejects_small():
    with pytest.raises(ValueError):
        builders.toric(1)


def test_rotated_toric_parameters(rotated4_code, rotated6_code):
    assert (rotated4_code.n, rotated4_code.k) == (16, 2)
    assert (rotated6_code.n, rotated6_code.k) == (36, 2)


@pytest.mark.parametrize("L", [2, 3, 5])
def test_rotated_toric_rejects_bad_sizes(L):
    with pytest.raises(ValueError):
        builders.rotated_toric(L)


def test_semi_hyperbolic_counts(hyp60_surface):
    for l in (2, 3):
        sub = builders.semi_hyperbolic(hyp60_surface, l)
        validate_surface(sub)
        assert sub.edge_count == 60 * l * l
        assert sub.face_count == 30 * l * l
        assert sub.euler_characteristic() == hyp60_surface.euler_characteristic()
        assert sub.name == f"hyp45-60-sh{l}"


def test_semi_hyperbolic_l1_is_a_copy(hyp60_surface):
    copy = builders.semi_hyperbolic(hyp60_surface, 1)
    assert copy.vertex_count == hyp60_surface.vertex_count
    assert copy.edge_count == hyp60_surface.edge_count
    assert copy.face_count == hyp60_surface.face_count
    code = derive_code(copy)
    assert (code.n, code.k) == (60, 8)


def test_semi_hyperbolic_rejects_non_square_faces(sstd_code):
    surf = sstd_code.meta["surface"]  # {5,5} tiling, pentagonal faces
    with pytest.raises(ValueError):
        builders.semi_hyperbolic(surf, 2)


def _multigraph(surf):
    g = nx.MultiGraph()
    g.add_nodes_from(range(surf.vertex_count))
    g.add_edges_from(surf.edges)
    return g


def test_subdivided_toric2_is_toric4():
    sub = builders.semi_hyperbolic(builders.toric(2), 2)
    ref = builders.toric(4)
    assert sub.edge_count == ref.edge_count
    assert sub.vertex_count == ref.vertex_count
    assert nx.is_isomorphic(_multigraph(sub), _multigraph(ref))


def test_catalog_names_and_parameters():
    names = builders.catalog_names()
    for name, (n, k) in builders.CATALOG_EXPECTED.items():
        assert name in names
        surf = builders.from_catalog(name)
        assert surf.edge_count == n
        assert 2 * surf.genus() == k


def test_catalog_unknown_name():
    with pytest.raises(KeyError):
        builders.load_catalog_entry("no-such-code")


def test_hyperbolic_45_aliases():
    by_int = builders.hyperbolic_45(60)
    by_name = builders.hyperbolic_45("hyp45-60")
    assert by_int.name == by_name.name == "hyp45-60"
    assert by_int.edges == by_name.edges


def test_from_catalog_overflow_guard():
    # a tiny coset workspace must fail loudly, not return a wrong surface
    with pytest.raises(GroupError):
        builders.from_catalog("hyp45-360", max_cosets=100)
