import math

import pytest

from bimdual.bim import (
    CarrierError,
    FinBIM,
    JoinError,
    kb_monoid,
    munn_monoid,
    symmetric_inverse_monoid,
)
from bimdual.groupoid import Bisection, BisectionError, pair_groupoid, parse_element


def partial_bijection_count(n):
    # enumeration oracle: choose k domain points, k range points, match them
    return sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))


@pytest.fixture(scope="module")
def i2():
    return symmetric_inverse_monoid(2)


@pytest.fixture(scope="module")
def i3():
    return symmetric_inverse_monoid(3)


def el(S, text):
    return parse_element(S.gpd, text)


def test_sizes_against_enumeration_oracle(i2, i3):
    assert len(i2) == partial_bijection_count(2) == 7
    assert len(i3) == partial_bijection_count(3) == 34
    assert len(i3.units) == math.factorial(3)


def test_group_with_zero():
    S = kb_monoid("group:Z2")
    assert len(S) == 3
    assert sorted(str(x) for x in S.elements) == ["{1}", "{g}", "{}"]
    # {1, g} is not a local bisection: both arrows share the single object
    g = S.gpd
    with pytest.raises(BisectionError):
        Bisection(g, frozenset([0, 1]))


def test_inverse_semigroup_laws(i3):
    for a in i3.elements:
        assert a * a.inv() * a == a
        assert a.inv() * a * a.inv() == a.inv()


def test_domain_range_example(i3):
    s = el(i3, "{1->2, 3->3}")
    assert s.d() == el(i3, "{1->1, 3->3}")
    assert s.r() == el(i3, "{2->2, 3->3}")
    assert el(i3, "{1->2}").inv() == el(i3, "{2->1}")


def test_relations_examples(i3):
    a, b = el(i3, "{1->2}"), el(i3, "{1->2, 3->3}")
    rel = i3.relations(a, b)
    assert rel.leq and rel.compatible and not rel.orthogonal
    rel = i3.relations(el(i3, "{1->2}"), el(i3, "{2->1}"))
    assert rel.orthogonal and rel.compatible


def test_mu_relation_in_group_monoid():
    S = kb_monoid("group:Z2")
    one = S.one
    g = next(s for s in S.elements if not s.is_idempotent and not s.is_zero)
    assert S.relations(one, g).mu_related  # both conjugate {0, 1} identically


def test_mu_trivial_on_symmetric_monoid(i2):
    for a in i2.elements:
        for b in i2.elements:
            if i2.relations(a, b).mu_related:
                assert a == b


def test_meet_is_intersection_and_formula(i2, i3):
    a = el(i3, "{1->2, 3->3}")
    b = el(i3, "{1->2, 3->1}")
    assert i3.meet(a, b) == el(i3, "{1->2}")
    for S in (i2,):
        for a in S.elements:
            for b in S.elements:
                assert S.meet(a, b) == S.meet_by_formula(a, b)


def test_join_examples(i3):
    assert i3.join(el(i3, "{1->1}"), el(i3, "{2->2}")) == el(i3, "{1->1, 2->2}")
    with pytest.raises(JoinError) as err:
        i3.join(el(i3, "{1->2}"), el(i3, "{1->3}"))
    assert not err.value.witness.is_idempotent


def brute_force_fixpoint(S, s):
    best = S.zero
    for e in S.idempotents:
        if e.leq(s):
            best = S.join(best, e)
    return best


def test_fixpoint_support_examples(i3):
    s = el(i3, "{1->1, 2->3}")
    rec = i3.fixpoint_and_support(s)
    assert rec.fixpoint == el(i3, "{1->1}") == brute_force_fixpoint(i3, s)
    assert rec.support == el(i3, "{2->2}")
    assert rec.parts == (el(i3, "{1->1}"), el(i3, "{2->3}"))

    swap12 = el(i3, "{1->2, 2->1, 3->3}")
    rec = i3.fixpoint_and_support(swap12)
    assert rec.fixpoint == el(i3, "{3->3}") == brute_force_fixpoint(i3, swap12)
    assert rec.support == el(i3, "{1->1, 2->2}")

    for e in i3.idempotents:
        rec = i3.fixpoint_and_support(e)
        assert rec.fixpoint == e and rec.support.is_zero


def test_fixpoint_brute_force_oracle_everywhere(i3):
    for s in i3.elements:
        assert s.fixpoint() == brute_force_fixpoint(i3, s)


def test_classify_examples(i2, i3):
    c = i2.classify(el(i2, "{1->2}"))
    assert c.is_infinitesimal and not c.is_idempotent and not c.is_unit
    c = i2.classify(i2.one)
    assert c.is_unit and c.is_idempotent
    c = i2.classify(el(i2, "{1->2, 2->1}"))
    assert c.is_unit and not c.is_infinitesimal
    assert i3.classify(el(i3, "{1->2}")).is_atom
    assert not i3.classify(el(i3, "{1->2, 3->3}")).is_atom


def test_atoms_match_minimal_nonzero_bruteforce(i3):
    nonzero = [s for s in i3.elements if not s.is_zero]
    brute = {s for s in nonzero if not any(t.arrows < s.arrows for t in nonzero)}
    assert set(i3.atoms) == brute


def test_unit_from_infinitesimal_examples(i2, i3):
    assert i2.unit_from_infinitesimal(el(i2, "{1->2}")) == el(i2, "{1->2, 2->1}")
    u = i3.unit_from_infinitesimal(el(i3, "{1->3}"))
    assert u == el(i3, "{1->3, 3->1, 2->2}")
    assert u * u == i3.one and u != i3.one
    with pytest.raises(ValueError):
        i3.unit_from_infinitesimal(i3.zero)
    with pytest.raises(ValueError):
        i3.unit_from_infinitesimal(el(i3, "{1->1}"))


def test_orthogonal_refinement_examples(i3):
    a, b = el(i3, "{1->1, 2->2}"), el(i3, "{2->2, 3->3}")
    out = i3.orthogonal_refinement([a, b])
    assert sorted(map(str, out)) == ["{1->1}", "{2->2}", "{3->3}"]
    s = el(i3, "{1->2, 3->3}")
    assert i3.orthogonal_refinement([s]) == [s]
    e = el(i3, "{1->1}")
    assert i3.orthogonal_refinement([e, e]) == [e]
    with pytest.raises(JoinError):
        i3.orthogonal_refinement([el(i3, "{1->2}"), el(i3, "{1->3}")])


def test_basic_decompose_examples(i3):
    rec = i3.basic_decompose(el(i3, "{1->2, 2->1, 3->3}"))
    assert rec.ok
    assert rec.idempotent == el(i3, "{3->3}")
    assert sorted(map(str, rec.infinitesimals)) == ["{1->2}", "{2->1}"]
    for x in rec.infinitesimals:
        assert (x * x).is_zero
    assert i3.join_all([rec.idempotent, *rec.infinitesimals]) == el(i3, "{1->2, 2->1, 3->3}")

    e = el(i3, "{1->1, 2->2}")
    rec = i3.basic_decompose(e)
    assert rec.ok and rec.idempotent == e and rec.infinitesimals == ()

    S = kb_monoid("group:Z2")
    g = next(s for s in S.elements if not s.is_idempotent and not s.is_zero)
    rec = S.basic_decompose(g)
    assert not rec.ok
    assert rec.witness_part == g
    gpd = S.gpd
    assert gpd.dom[rec.witness_arrow] == gpd.cod[rec.witness_arrow]
    assert not gpd.is_identity(rec.witness_arrow)


def test_green_examples(i3):
    e = el(i3, "{1->1, 2->2}")
    f = el(i3, "{3->3}")
    rec = i3.green_on_idempotents(e, f)
    assert not rec.D
    assert rec.preceq is not None  # e.g. the pencil {1->3}, {2->3}
    assert rec.preceq.source == e
    assert all(x.r().leq(f) for x in rec.preceq.elements)
    rec = i3.green_on_idempotents(e, e)
    assert rec.D and rec.equiv and rec.J

    S = kb_monoid("disjoint_union(pair:2, pair:2)")
    e = next(x for x in S.e_atoms if "0:" in str(x))
    f = next(x for x in S.e_atoms if "1:" in str(x))
    assert S.preceq(e, f) is None

    with pytest.raises(ValueError):
        i3.green_on_idempotents(el(i3, "{1->2}"), f)


def test_substructures(i3):
    sub = i3.substructures()
    assert len(sub.units) == 6
    local = i3.local_monoid(el(i3, "{1->1, 2->2}"))
    assert len(local) == 7
    S = kb_monoid("group:Z2")
    assert sorted(str(u) for u in S.units) == ["{1}", "{g}"]


def test_local_monoid_isomorphic_to_smaller_symmetric(i3):
    from bimdual.duality import iso_monoids
    local = i3.local_monoid(el(i3, "{1->1, 2->2}"))
    assert iso_monoids(local, symmetric_inverse_monoid(2))


def test_munn_monoid_counts_and_laws():
    rec = munn_monoid(1)
    assert rec.size == 2
    rec = munn_monoid(2)
    assert rec.size == 7
    assert all(rec.laws_verified.values())
    rec = munn_monoid(3)
    assert rec.size == 34
    assert all(rec.laws_verified.values())
    units = [b for _, b in rec.correspondence if b.is_unit]
    assert len(units) == 6
    with pytest.raises(ValueError):
        munn_monoid(6)


def test_carrier_validation_witnesses():
    g = pair_groupoid(2)
    full = kb_monoid(g)
    zero, one = full.zero, full.one
    a = parse_element(g, "{1->2}")
    with pytest.raises(CarrierError, match="inverse|product|meet"):
        FinBIM(g, [zero, one, a])
    es = [e for e in full.elements if e.is_idempotent]
    with pytest.raises(CarrierError, match="zero"):
        FinBIM(g, [one])
    # the idempotents alone do close
    E = FinBIM(g, es)
    assert len(E) == 4


def test_multiplication_stays_in_carrier():
    g = pair_groupoid(2)
    full = kb_monoid(g)
    es = [e for e in full.elements if e.is_idempotent]
    E = FinBIM(g, es)
    a = next(e for e in E.elements if len(e.arrows) == 1)
    assert E.multiply(a, a) == a
    swap = parse_element(g, "{1->2, 2->1}")
    with pytest.raises(CarrierError):
        E.multiply(swap, a)  # lands on a single off-diagonal arrow
