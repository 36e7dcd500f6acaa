import numpy as np
import pytest

from hypsc import builders, subgroups
from hypsc.group import (
    GroupError,
    Presentation,
    canonical_action,
    compile_word,
    invert_word,
    tiling_from_quotient,
    todd_coxeter,
)
from hypsc.surface import derive_code


def hyp60_table():
    entry = builders.load_catalog_entry("hyp45-60")
    pres = Presentation.triangle_rotation(4, 5, entry["relator_words"])
    return todd_coxeter(pres)


def test_invert_word_round_trip():
    assert invert_word("RS") == "sr"
    assert invert_word(invert_word("RrSsRS")) == "RrSsRS"


def test_spherical_triangle_group_order():
    # {2,3}: rho^2 = sigma^3 = (rho sigma)^2 = e presents S_3
    table = todd_coxeter(Presentation.triangle_rotation(2, 3))
    assert table.n == 6


def test_relators_act_trivially_on_every_coset():
    table = hyp60_table()
    for word in Presentation.triangle_rotation(4, 5).relator_words():
        for c in range(0, table.n, 7):
            assert table.apply(c, word) == c
    for c in range(table.n):
        assert table.apply(c, "Rr") == c
        assert table.apply(c, "sS") == c


def test_word_inverse_on_table():
    table = hyp60_table()
    for word in ("RS", "RRs", "SSrr"):
        inv = invert_word(word)
        for c in range(0, table.n, 11):
            assert table.apply(table.apply(c, word), inv) == c


def test_todd_coxeter_is_deterministic():
    a = hyp60_table()
    b = hyp60_table()
    assert np.array_equal(a.action, b.action)


def test_hyp60_quotient_and_tiling():
    table = hyp60_table()
    assert table.n == 120
    surf = tiling_from_quotient(table, 4, 5, name="hyp45-60")
    assert surf.vertex_count == 24
    assert surf.edge_count == 60
    assert surf.face_count == 30
    assert surf.euler_characteristic() == -6
    # r|F| = s|V| = 2|E| = |G|
    assert 4 * surf.face_count == 5 * surf.vertex_count == 2 * surf.edge_count == table.n


def test_toric44_quotient_matches_toric2():
    entry = builders.load_catalog_entry("toric44-l2")
    table = todd_coxeter(Presentation.triangle_rotation(4, 4, entry["relator_words"]))
    assert table.n == 16
    surf = tiling_from_quotient(table, 4, 4, name="toric44-l2")
    code = derive_code(surf)
    ref = derive_code(builders.toric(2))
    assert (code.n, code.k) == (ref.n, ref.k) == (8, 2)


def test_unrestricted_hyperbolic_group_overflows():
    with pytest.raises(GroupError):
        todd_coxeter(Presentation.triangle_rotation(4, 5), max_cosets=10_000)


def test_torsion_quotient_rejected():
    # killing rho collapses everything; the R-orbits are then too short
    table = todd_coxeter(Presentation.triangle_rotation(4, 5, ["R"]))
    assert table.n == 1
    with pytest.raises(GroupError):
        tiling_from_quotient(table, 4, 5)


def test_canonical_action_is_relabeling_invariant():
    table = hyp60_table()
    act = table.action
    rng = np.random.default_rng(3)
    perm = rng.permutation(table.n)
    inv = np.argsort(perm)
    relabeled = perm[act[inv]]
    assert np.array_equal(canonical_action(relabeled), canonical_action(act))


def test_pair_search_recovers_order_120_quotient():
    tables = subgroups.pair_search(4, 5, 5, 120)
    assert tables, "no {4,5} quotients on 5 points"
    surfaces = []
    for t in tables:
        try:
            surfaces.append(tiling_from_quotient(t, 4, 5))
        except GroupError:
            continue
    params = set()
    for surf in surfaces:
        code = derive_code(surf)
        params.add((code.n, code.k))
    assert (60, 8) in params


def test_descend_one_abelian_layer():
    entry = builders.load_catalog_entry("toric44-l2")
    table = todd_coxeter(Presentation.triangle_rotation(4, 4, entry["relator_words"]))
    below = subgroups.descend(table, 4, 4, 2, 32)
    assert below, "no index-2 descents under the L=2 torus quotient"
    relators = Presentation.triangle_rotation(4, 4).relator_words()
    for t in below:
        assert t.n == 32
        for word in relators:
            assert all(t.apply(c, word) == c for c in range(0, t.n, 5))


def test_cayley_relators_round_trip():
    table = hyp60_table()
    words = subgroups.cayley_relators(table)
    again = todd_coxeter(Presentation.triangle_rotation(4, 5, words))
    assert again.canonical_key() == table.canonical_key()
    pruned = subgroups.prune_relators(4, 5, words, table.n)
    assert len(pruned) <= len(words)
    final = todd_coxeter(Presentation.triangle_rotation(4, 5, pruned))
    assert final.canonical_key() == table.canonical_key()