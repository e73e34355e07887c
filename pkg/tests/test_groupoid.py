import json

import pytest

from bimdual.groupoid import (
    Bisection,
    BisectionError,
    GroupoidError,
    all_local_bisections,
    bisection_product,
    build_groupoid,
    groupoid_properties,
    pair_groupoid,
    parse_element,
)


def test_pair_groupoid_counts():
    g = build_groupoid("pair:2")
    assert g.n_objects == 2
    assert g.n_arrows == 4
    assert len(g.identity_set) == 2


def test_one_object_group():
    g = build_groupoid("group:Z2")
    assert g.n_objects == 1
    assert g.n_arrows == 2


def test_disjoint_union_counts():
    # 4 + 9 arrows by direct count
    g = build_groupoid("disjoint_union(pair:2, pair:3)")
    assert g.n_objects == 5
    assert g.n_arrows == 13
    assert len(g.identity_set) == 5


def test_nested_union():
    g = build_groupoid("disjoint_union(pair:2, disjoint_union(pair:1, group:Z2))")
    assert g.n_objects == 4
    assert g.n_arrows == 4 + 1 + 2


def test_json_roundtrip():
    g = build_groupoid("disjoint_union(pair:2, group:Z3)")
    h = build_groupoid(g.to_json())
    assert h.n_objects == g.n_objects
    assert h.n_arrows == g.n_arrows
    assert h.comp == g.comp
    assert h.inv == g.inv


def test_json_text_accepted():
    g = pair_groupoid(2)
    h = build_groupoid(json.dumps(g.to_json()))
    assert h.comp == g.comp


def test_broken_associativity_reported():
    # a 3-element 'group' table that is not associative
    data = {
        "objects": ["*"],
        "arrows": [{"id": 0, "dom": "*", "cod": "*"},
                   {"id": 1, "dom": "*", "cod": "*"},
                   {"id": 2, "dom": "*", "cod": "*"}],
        "compose": [[0, 0, 0], [0, 1, 1], [0, 2, 2], [1, 0, 1], [2, 0, 2],
                    [1, 1, 2], [1, 2, 0], [2, 1, 0], [2, 2, 2]],
        "inverse": [[0, 0], [1, 2], [2, 1]],
    }
    with pytest.raises(GroupoidError):
        build_groupoid(data)


def test_broken_inverse_reported():
    data = {
        "objects": ["*"],
        "arrows": [{"id": 0, "dom": "*", "cod": "*"},
                   {"id": 1, "dom": "*", "cod": "*"}],
        "compose": [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]],
        "inverse": [[0, 0], [1, 0]],
    }
    with pytest.raises(GroupoidError, match="involution|inverse"):
        build_groupoid(data)


def test_bad_spec_strings():
    for bad in ("pair:x", "group:Q8", "disjoint_union(pair:2)", "nonsense"):
        with pytest.raises(GroupoidError):
            build_groupoid(bad)


def test_bisection_invariant_rejected():
    g = pair_groupoid(2)
    # arrows 1->1 and 1->2 share the domain object 1
    ids = [a for a in range(g.n_arrows) if g.dom[a] == 0]
    with pytest.raises(BisectionError, match="share a domain"):
        Bisection(g, frozenset(ids))


def test_bisection_products_match_hand_computation():
    g = pair_groupoid(2)
    a = parse_element(g, "{1->2}")
    b = parse_element(g, "{2->1}")
    swap = parse_element(g, "{1->2, 2->1}")
    assert str(bisection_product(g, a, b)) == "{2->2}"
    assert bisection_product(g, a, a).is_zero
    assert str(bisection_product(g, swap, swap)) == "{1->1, 2->2}"


def test_product_regularity_everywhere():
    for spec in ("pair:2", "pair:3", "group:Z2", "disjoint_union(pair:2, group:Z2)"):
        g = build_groupoid(spec)
        for a in all_local_bisections(g):
            assert a * a.inv() * a == a


def test_singletons_are_atoms_of_subset_order():
    g = pair_groupoid(3)
    elems = all_local_bisections(g)
    nonzero = [x for x in elems if not x.is_zero]
    atoms = [x for x in nonzero if not any(y.arrows < x.arrows for y in nonzero)]
    assert sorted(a.sort_key for a in atoms) == \
        sorted(Bisection(g, frozenset([i])).sort_key for i in range(g.n_arrows))


def test_properties_pair3():
    p = groupoid_properties(build_groupoid("pair:3"))
    assert p.principal and p.effective and p.minimal and p.connected
    assert len(p.orbits) == 1


def test_properties_group():
    p = groupoid_properties(build_groupoid("group:Z2"))
    assert not p.principal and not p.effective
    assert p.minimal  # a single object is a single orbit
    assert len(p.isotropy) == 2


def test_properties_union():
    p = groupoid_properties(build_groupoid("disjoint_union(pair:2, pair:2)"))
    assert not p.minimal
    assert len(p.orbits) == 2


def test_minimal_iff_single_orbit():
    for spec in ("pair:1", "pair:4", "group:Z3", "disjoint_union(pair:2, pair:3)"):
        g = build_groupoid(spec)
        p = groupoid_properties(g)
        assert p.minimal == (p.orbits == (frozenset(g.objects),))


def test_dot_export():
    text = build_groupoid("pair:2").to_dot()
    assert text.startswith("digraph")
    assert '"1" -> "2"' in text
    assert "style=dotted" in text


def test_parse_element_errors():
    g = pair_groupoid(2)
    with pytest.raises(BisectionError):
        parse_element(g, "{1->9}")
    with pytest.raises(BisectionError):
        parse_element(g, "1->2")
    assert parse_element(g, "{}").is_zero
