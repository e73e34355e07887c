"""Seeded verification suites driven by the CLI and the acceptance tests.

Each suite runs a battery of exact algebraic checks, exhaustive on the
finite corpus and randomized (but fully deterministic for a given seed) on
the prefix-exchange engine, and reports per-property run and failure
counts.  Random batches use ``random.Random(seed)`` only, so identical
seeds give byte-identical reports.
"""

from __future__ import annotations

import random
from functools import lru_cache

from . import cuntz as cz
from .bim import FinBIM, kb_monoid
from .checkers import (
    armature_check,
    classify_monoid,
    group_closure,
    is_fundamental,
    is_transitive,
    monoid_from_group,
    parse_permutation,
    units_downset_join_closure,
)
from .duality import (
    groupoid_of,
    ideal_correspondence,
    is_prime_filter,
    is_ultrafilter,
    roundtrip,
    roundtrip_groupoid,
    theorem_dictionary,
    ultrafilters,
)
from .groupoid import Bisection, build_groupoid, groupoid_properties

CORPUS_SPECS = (
    "pair:1", "pair:2", "pair:3", "pair:4",
    "group:Z2", "group:Z3",
    "disjoint_union(pair:2, pair:2)", "disjoint_union(pair:2, pair:3)",
)

S3_SUBGROUPS = (
    ("trivial", ()),
    ("<(1 2)>", ("(1 2)",)),
    ("<(1 3)>", ("(1 3)",)),
    ("<(2 3)>", ("(2 3)",)),
    ("<(1 2 3)>", ("(1 2 3)",)),
    ("S3", ("(1 2)", "(1 2 3)")),
)


@lru_cache(maxsize=None)
def corpus_monoid(spec: str) -> FinBIM:
    return kb_monoid(spec)


def _prop(name: str, runs: int, failures: int, detail: str | None = None) -> dict:
    out = {"name": name, "runs": runs, "failures": failures, "ok": failures == 0}
    if detail and failures:
        out["detail"] = detail
    return out


def _report(suite: str, seed: int, props: list[dict]) -> dict:
    return {"suite": suite, "seed": seed, "properties": props,
            "ok": all(p["ok"] for p in props)}


# -- random generators ---------------------------------------------------------


def rand_complete_code(rng: random.Random, n: int, splits: int,
                       depth_cap: int = 10) -> list[str]:
    code = [""]
    for _ in range(splits):
        i = rng.randrange(len(code))
        w = code[i]
        if len(w) >= depth_cap:
            continue
        code.pop(i)
        code.extend(w + a for a in (str(j) for j in range(n)))
    return sorted(code)


def rand_clopen(rng: random.Random, n: int, max_splits: int = 4,
                allow_zero: bool = False, allow_one: bool = True) -> cz.Clopen:
    while True:
        code = rand_complete_code(rng, n, rng.randrange(max_splits + 1))
        low = 0 if allow_zero else 1
        k = rng.randint(low, len(code))
        e = cz.Clopen(n, tuple(rng.sample(code, k)))
        if e.is_one and not allow_one:
            continue
        if e.is_zero and not allow_zero:
            continue
        return e


def rand_element(rng: random.Random, n: int, max_splits: int = 4) -> cz.CuntzElement:
    c1 = rand_complete_code(rng, n, rng.randrange(max_splits + 1))
    c2 = rand_complete_code(rng, n, rng.randrange(max_splits + 1))
    m = rng.randint(0, min(len(c1), len(c2)))
    dom = rng.sample(c1, m)
    ran = rng.sample(c2, m)
    rng.shuffle(ran)
    return cz.element(list(zip(dom, ran)), n)


def rand_unit(rng: random.Random, n: int, max_splits: int = 3) -> cz.CuntzElement:
    k = rng.randrange(max_splits + 1)
    c1 = rand_complete_code(rng, n, k)
    c2 = rand_complete_code(rng, n, k)
    while len(c2) != len(c1):  # depth cap can truncate a split
        c2 = rand_complete_code(rng, n, k)
    ran = list(c2)
    rng.shuffle(ran)
    return cz.element(list(zip(c1, ran)), n)


def rand_infinitesimal(rng: random.Random, n: int) -> cz.CuntzElement:
    e = rand_clopen(rng, n, allow_one=False)
    return cz.transporter(e, e.complement())


def rand_compatible_family(rng: random.Random, n: int, size: int = 3) -> list[cz.CuntzElement]:
    s = rand_element(rng, n)
    fam = []
    for _ in range(size):
        kept = [r for r in s.rules if rng.random() < 0.7]
        fam.append(cz.CuntzElement(n, tuple(kept)))
    return fam


def rand_bis_family(rng: random.Random, S: FinBIM, size: int = 3) -> list[Bisection]:
    s = rng.choice(S.elements)
    fam = []
    for _ in range(size):
        kept = frozenset(a for a in s.arrows if rng.random() < 0.7)
        fam.append(Bisection(S.gpd, kept))
    return fam


# -- order-calculus suite --------------------------------------------------------


def suite_order_calculus(seed: int = 42, cuntz_samples: int = 1000,
                         refine_families: int = 500) -> dict:
    rng = random.Random(seed)
    props = []

    # meets agree with the fixed-point formula, exhaustively
    runs = fails = 0
    for spec in ("pair:2", "pair:3"):
        S = corpus_monoid(spec)
        for a in S.elements:
            for b in S.elements:
                runs += 1
                if (a & b) != S.meet_by_formula(a, b):
                    fails += 1
    props.append(_prop("meet-equals-fixpoint-formula", runs, fails))

    # fixpoint laws, exhaustive on the 34-element monoid
    S = corpus_monoid("pair:3")
    runs = fails = 0
    for s in S.elements:
        runs += 1
        brute = S.zero
        for e in S.idempotents:
            if e.leq(s):
                brute = S.join(brute, e)
        rec = S.fixpoint_and_support(s)
        phi, sigma = rec.fixpoint, rec.support
        good = (phi == brute
                and phi == (s & S.one)
                and phi.leq(s.d()) and phi.leq(s.r())
                and S.join(rec.parts[0], rec.parts[1]) == s
                and rec.parts[0].orthogonal(rec.parts[1])
                and (s * sigma).fixpoint().is_zero)
        if not good:
            fails += 1
    props.append(_prop("fixpoint-support-laws-finite", runs, fails))

    runs = fails = 0
    for g in S.units:
        for e in S.idempotents:
            runs += 1
            if (g * e).fixpoint() != g.fixpoint() * e:
                fails += 1
    props.append(_prop("fixpoint-of-unit-times-idempotent-finite", runs, fails))

    runs = fails = 0
    for _ in range(200):
        fam = rand_bis_family(rng, S)
        runs += 1
        total = S.join_all(fam)
        if total.fixpoint() != S.join_all([t.fixpoint() for t in fam]):
            fails += 1
        if total.d() != S.join_all([t.d() for t in fam]):
            fails += 1
    props.append(_prop("fixpoint-and-domain-distribute-over-joins-finite", runs, fails))

    # the same laws on random prefix-exchange elements
    runs = fails = 0
    for _ in range(cuntz_samples):
        s = rand_element(rng, 2)
        runs += 1
        rec = cz.fixpoint_and_support(s)
        phi, sigma = rec.fixpoint, rec.support
        good = (phi == cz.meet(s, cz.one(2))
                and cz.join(rec.parts[0], rec.parts[1]) == s
                and rec.parts[0].orthogonal(rec.parts[1])
                and (s * sigma).fixpoint().is_zero
                and phi.leq(s.d()) and phi.leq(s.r()))
        if not good:
            fails += 1
    props.append(_prop("fixpoint-support-laws-cuntz", runs, fails))

    runs = fails = 0
    for _ in range(cuntz_samples // 4):
        g = rand_unit(rng, 2)
        e = cz.from_clopen(rand_clopen(rng, 2, allow_zero=True))
        runs += 1
        if (g * e).fixpoint() != g.fixpoint() * e:
            fails += 1
    props.append(_prop("fixpoint-of-unit-times-idempotent-cuntz", runs, fails))

    runs = fails = 0
    for _ in range(cuntz_samples // 4):
        fam = rand_compatible_family(rng, 2)
        runs += 1
        total = cz.join_all(fam, 2)
        if total.fixpoint() != cz.join_all([t.fixpoint() for t in fam], 2):
            fails += 1
        if total.d() != cz.join_all([t.d() for t in fam], 2):
            fails += 1
    props.append(_prop("fixpoint-and-domain-distribute-over-joins-cuntz", runs, fails))

    # orthogonal refinement in both engines
    runs = fails = 0
    for _ in range(refine_families):
        fam = rand_bis_family(rng, S)
        runs += 1
        out = S.orthogonal_refinement(fam)
        good = all(out[i].orthogonal(out[j])
                   for i in range(len(out)) for j in range(i + 1, len(out)))
        good = good and S.join_all(out) == S.join_all(fam)
        good = good and all(any(t.leq(s) for s in fam) for t in out)
        if not good:
            fails += 1
    props.append(_prop("orthogonal-refinement-finite", runs, fails))

    runs = fails = 0
    for _ in range(refine_families):
        fam = rand_compatible_family(rng, 2)
        runs += 1
        out = cz.orthogonal_refinement(fam)
        good = all(out[i].orthogonal(out[j])
                   for i in range(len(out)) for j in range(i + 1, len(out)))
        good = good and cz.join_all(out, 2) == cz.join_all(fam, 2)
        good = good and all(any(t.leq(s) for s in fam) for t in out)
        if not good:
            fails += 1
    props.append(_prop("orthogonal-refinement-cuntz", runs, fails))

    # compatible pair with orthogonal domains has orthogonal ranges
    runs = fails = 0
    for _ in range(200):
        fam = rand_compatible_family(rng, 2, size=2)
        a, b = fam[0], fam[1] * cz.from_clopen(fam[0].d_set().complement())
        runs += 1
        if a.d_set().orthogonal(b.d_set()) and not a.r_set().orthogonal(b.r_set()):
            fails += 1
    props.append(_prop("orthogonal-domains-give-orthogonal-ranges", runs, fails))

    # infinitesimal detection agrees three ways; involutions sit above
    runs = fails = 0
    for _ in range(200):
        a = rand_infinitesimal(rng, 2)
        runs += 1
        c = cz.classify(a)
        if not c.is_infinitesimal:
            fails += 1
            continue
        u = cz.unit_from_infinitesimal(a)
        if not (u.is_unit and u * u == cz.one(2) and u != cz.one(2) and a.leq(u)):
            fails += 1
    props.append(_prop("unit-from-infinitesimal-cuntz", runs, fails))

    runs = fails = 0
    for s in corpus_monoid("pair:3").elements:
        cls = corpus_monoid("pair:3").classify(s)
        runs += 1
        if cls.is_infinitesimal:
            u = corpus_monoid("pair:3").unit_from_infinitesimal(s)
            if not (u.is_unit and (u * u) == corpus_monoid("pair:3").one and s.leq(u)):
                fails += 1
    props.append(_prop("unit-from-infinitesimal-finite", runs, fails))

    return _report("order-calculus", seed, props)


# -- duality suite ----------------------------------------------------------------


def suite_duality(seed: int = 42) -> dict:
    props = []

    runs = fails = 0
    for spec in CORPUS_SPECS:
        runs += 1
        if not roundtrip(corpus_monoid(spec)).ok:
            fails += 1
    props.append(_prop("monoid-roundtrips", runs, fails))

    runs = fails = 0
    for spec in CORPUS_SPECS:
        runs += 1
        if not roundtrip_groupoid(build_groupoid(spec)).ok:
            fails += 1
    props.append(_prop("groupoid-roundtrips", runs, fails))

    runs = fails = 0
    for spec in CORPUS_SPECS:
        S = corpus_monoid(spec)
        ic = ideal_correspondence(S)
        orbits = groupoid_properties(groupoid_of(S).gpd).orbits
        runs += 1
        if not (ic.order_iso and ic.oracle_agrees and ic.count == 2 ** len(orbits)):
            fails += 1
    props.append(_prop("vee-ideals-match-orbit-unions", runs, fails))

    runs = fails = 0
    for spec in CORPUS_SPECS:
        td = theorem_dictionary(corpus_monoid(spec))
        runs += 1
        if not (td.fundamental_iff_effective and td.zero_simplifying_iff_minimal):
            fails += 1
    props.append(_prop("dictionary-biconditionals", runs, fails))

    # atom-set calculus: containment, meets, joins, products
    S = corpus_monoid("pair:3")
    atoms = S.atoms

    def v(a):
        return frozenset(x for x in atoms if x.leq(a))

    runs = fails = 0
    for a in S.elements:
        for b in S.elements:
            runs += 1
            good = (v(a) <= v(b)) == a.leq(b)
            good = good and v(a & b) == (v(a) & v(b))
            prods = frozenset(x * y for x in v(a) for y in v(b)) - {S.zero}
            good = good and prods == v(a * b)
            if a.compatible(b):
                j = S.join(a, b)
                good = good and v(j) == (v(a) | v(b))
            if not good:
                fails += 1
    props.append(_prop("atom-set-calculus", runs, fails))

    # prime filters and ultrafilters coincide; both pick out the atom up-sets
    runs = fails = 0
    for spec in ("pair:2", "group:Z2"):
        S = corpus_monoid(spec)
        for a in S.elements:
            if a.is_zero:
                continue
            up = frozenset(s for s in S.elements if a.leq(s))
            runs += 1
            ultra = is_ultrafilter(S, up)
            prime = is_prime_filter(S, up)
            if ultra != prime or ultra != (a in S.atoms):
                fails += 1
    props.append(_prop("prime-equals-ultra-on-upsets", runs, fails))

    # ultrafilter groupoid composition mirrors the atom groupoid
    runs = fails = 0
    S = corpus_monoid("pair:2")
    ufs = ultrafilters(S)
    for A in ufs:
        for B in ufs:
            runs += 1
            prod = A.product(B, S)
            defined = A.base.d() == B.base.r()
            if defined != (prod is not None):
                fails += 1
            elif prod is not None and prod.base != A.base * B.base:
                fails += 1
    props.append(_prop("ultrafilter-products", runs, fails))

    # every ultrafilter contains a unit iff piecewise factorizable
    runs = fails = 0
    for spec in CORPUS_SPECS:
        S = corpus_monoid(spec)
        runs += 1
        every = all(any(atom.leq(u) for u in S.units) for atom in S.atoms)
        if every != classify_monoid(S).piecewise_factorizable:
            fails += 1
    props.append(_prop("ultrafilter-units-iff-piecewise", runs, fails))

    return _report("duality", seed, props)


# -- classes suite ----------------------------------------------------------------


EXPECTED_PROFILES = {
    "pair:2": dict(fundamental=True, factorizable=True, basic=True,
                   zero_simplifying=True, zero_simple=False, congruence_free=False),
    "pair:3": dict(fundamental=True, factorizable=True, basic=True,
                   zero_simplifying=True, zero_simple=False, congruence_free=False),
    "group:Z2": dict(fundamental=False),
    "disjoint_union(pair:2, pair:3)": dict(fundamental=True, zero_simplifying=False),
}


def suite_classes(seed: int = 42) -> dict:
    props = []

    runs = fails = 0
    for spec, expect in EXPECTED_PROFILES.items():
        profile = classify_monoid(corpus_monoid(spec))
        for key, want in expect.items():
            runs += 1
            if getattr(profile, key) != want:
                fails += 1
    props.append(_prop("corpus-profiles", runs, fails,
                       "profile flag mismatch"))

    # among the corpus, fundamental + 0-simplifying exactly at the symmetric monoids
    runs = fails = 0
    for spec in CORPUS_SPECS:
        profile = classify_monoid(corpus_monoid(spec))
        runs += 1
        if (profile.fundamental and profile.zero_simplifying) != spec.startswith("pair:"):
            fails += 1
    props.append(_prop("fundamental-and-simplifying-only-symmetric", runs, fails))

    # profile invariants: congruence-free and the simplicity implication
    runs = fails = 0
    for spec in CORPUS_SPECS:
        p = classify_monoid(corpus_monoid(spec))
        runs += 1
        if p.congruence_free != (p.fundamental and p.zero_simple):
            fails += 1
        if p.zero_simple and not p.zero_simplifying:
            fails += 1
    props.append(_prop("profile-internal-invariants", runs, fails))

    # 0-simplifying with atoms: atoms one D-class, identity a join of atoms
    runs = fails = 0
    for spec in CORPUS_SPECS:
        S = corpus_monoid(spec)
        if not classify_monoid(S).zero_simplifying:
            continue
        runs += 1
        ok = True
        for e in S.e_atoms:
            for f in S.e_atoms:
                if not S.green_on_idempotents(e, f).D:
                    ok = False
        top = S.zero
        for e in S.e_atoms:
            top = S.join(top, e)
        ok = ok and top == S.one
        if not ok:
            fails += 1
    props.append(_prop("simplifying-atoms-one-dclass", runs, fails))

    # fixed atoms of a unit's conjugation are exactly the atoms of its fixpoint
    runs = fails = 0
    for spec in CORPUS_SPECS:
        S = corpus_monoid(spec)
        if not is_fundamental(S)[0]:
            continue
        for g in S.units:
            runs += 1
            fixed = frozenset(e for e in S.e_atoms if g * e * g.inv() == e)
            below = frozenset(e for e in S.e_atoms if e.leq(g.fixpoint()))
            if fixed != below:
                fails += 1
    props.append(_prop("fixed-atoms-are-fixpoint-atoms", runs, fails))

    # basic iff the dual groupoid is principal
    runs = fails = 0
    for spec in CORPUS_SPECS:
        S = corpus_monoid(spec)
        runs += 1
        basic = classify_monoid(S).basic
        principal = groupoid_properties(groupoid_of(S).gpd).principal
        if basic != principal:
            fails += 1
    props.append(_prop("basic-iff-principal", runs, fails))

    # the idempotent-conjugation congruence separates idempotents;
    # it is equality exactly on the fundamental members
    runs = fails = 0
    for spec in ("pair:2", "pair:3", "group:Z2", "group:Z3"):
        S = corpus_monoid(spec)
        mu_classes = {}
        for s in S.elements:
            key = tuple(s * e * s.inv() for e in S.idempotents) + (s.d(), s.r())
            mu_classes.setdefault(key, []).append(s)
        runs += 1
        sep = all(len([x for x in cls if x.is_idempotent]) <= 1
                  for cls in mu_classes.values())
        equality = all(len(cls) == 1 for cls in mu_classes.values())
        if not sep or equality != is_fundamental(S)[0]:
            fails += 1
    props.append(_prop("mu-separates-idempotents", runs, fails))

    # mu is a congruence: exhaustive on the smallest members
    runs = fails = 0
    for spec in ("pair:2", "group:Z2"):
        S = corpus_monoid(spec)

        def mu(a, b):
            return all(a * e * a.inv() == b * e * b.inv() for e in S.idempotents) \
                and a.d() == b.d() and a.r() == b.r()

        for a in S.elements:
            for b in S.elements:
                if not mu(a, b):
                    continue
                for c in S.elements:
                    runs += 1
                    if not mu(a * c, b * c) or not mu(c * a, c * b):
                        fails += 1
    props.append(_prop("mu-is-a-congruence", runs, fails))

    # monoids from the six subgroups of the 3-point symmetric group
    runs = fails = 0
    for name, gens in S3_SUBGROUPS:
        S = monoid_from_group(3, list(gens))
        group = group_closure([parse_permutation(g, 3) for g in gens], 3)
        runs += 1
        ok = is_fundamental(S)[0]
        ok = ok and classify_monoid(S).zero_simplifying == is_transitive(group, 3)
        ok = ok and units_downset_join_closure(S) == S.carrier
        if not ok:
            fails += 1
    props.append(_prop("group-construction-six-subgroups", runs, fails))

    runs = fails = 0
    S = monoid_from_group(2, ["(1 2)"])
    runs += 1
    if len(S) != 7 or not S.is_full:
        fails += 1
    S = monoid_from_group(2, [])
    runs += 1
    if len(S) != 4 or any(not s.is_idempotent for s in S.elements):
        fails += 1
    props.append(_prop("group-construction-two-points", runs, fails))

    return _report("classes", seed, props)


# -- armature suite ----------------------------------------------------------------


def _cylinders(n: int, depth: int) -> list[cz.Clopen]:
    words = [""]
    out = [cz.clopen_one(n)]
    for _ in range(depth):
        words = [w + a for w in words for a in (str(j) for j in range(n))]
        out.extend(cz.Clopen(n, (w,)) for w in words)
    return out


def suite_armature(seed: int = 42, unit_samples: int = 200, depth: int = 4) -> dict:
    rng = random.Random(seed)
    props = []

    runs = fails = 0
    for spec in ("pair:2", "pair:3"):
        report = armature_check(corpus_monoid(spec))
        for name, res in report.axioms.items():
            runs += 1
            if not res.passed:
                fails += 1
    props.append(_prop("operator-axioms-finite", runs, fails))

    runs = fails = 0
    for gens in ([], ["(1 2)"]):
        report = armature_check(monoid_from_group(3, gens))
        runs += 1
        if not report.all_passed:
            fails += 1
    props.append(_prop("operator-axioms-group-constructions", runs, fails))

    # bounded pass over random units against cylinder idempotents
    n = 2
    cylinders = _cylinders(n, depth)
    units = [rand_unit(rng, n) for _ in range(unit_samples)]
    runs = fails = 0
    runs += 1
    if cz.one(n).fixpoint() != cz.one(n):
        fails += 1
    for g in units:
        runs += 1
        if g.inv().fixpoint() != g.fixpoint():
            fails += 1
    for g, h in zip(units, units[1:]):
        runs += 1
        if not (g.fixpoint() * h.fixpoint()).leq((g * h).fixpoint()):
            fails += 1
    for g in units:
        for e in cylinders:
            ee = cz.from_clopen(e)
            runs += 1
            if not (g.fixpoint() * ee).leq(g * ee * g.inv()):
                fails += 1
    props.append(_prop("operator-axioms-bounded-cuntz-O1-O4", runs, fails))

    runs = fails = 0
    for g in units:
        rule_depth = max((max(len(u), len(v)) for u, v in g.rules), default=0)
        for e in cylinders:
            word = e.words[0] if not e.is_zero else ""
            sub_depth = max(rule_depth, depth)
            subs = [word]
            for _ in range(max(0, sub_depth - len(word))):
                subs = [w + a for w in subs for a in (str(j) for j in range(n))]
            fixes = all(g * cz.from_clopen(cz.Clopen(n, (w,))) * g.inv()
                        == cz.from_clopen(cz.Clopen(n, (w,)))
                        for w in subs + [word])
            runs += 1
            if fixes != e.leq(g.fixpoint_set()):
                fails += 1
    props.append(_prop("operator-axiom-bounded-cuntz-O5", runs, fails))

    return _report("armature", seed, props)


# -- cuntz suite ---------------------------------------------------------------------


def suite_cuntz(seed: int = 42, canonical_samples: int = 1000,
                witness_samples: int = 200, unit_pairs: int = 300,
                moved_units: int = 100) -> dict:
    rng = random.Random(seed)
    n = 2
    props = []

    # canonical forms preserve evaluation and collapse split variants
    runs = fails = 0
    for i in range(canonical_samples):
        alphabet = 2 if i % 3 else 3
        s = rand_element(rng, alphabet, max_splits=3)
        split = []
        for u, v in s.rules:
            if rng.random() < 0.5 and len(u) < 5:
                split.extend((u + a, v + a) for a in (str(j) for j in range(alphabet)))
            else:
                split.append((u, v))
        resplit = cz.element(split, alphabet)
        runs += 1
        if resplit != s:
            fails += 1
            continue
        for _ in range(50):
            probe = "".join(rng.choice("01" if alphabet == 2 else "012")
                            for _ in range(6))
            if s.evaluate(probe) != resplit.evaluate(probe):
                fails += 1
                break
    props.append(_prop("canonical-form-soundness", runs, fails))

    # inverse monoid laws and the shift-generator relations
    runs = fails = 0
    p, q = cz.generator(0, n), cz.generator(1, n)
    runs += 1
    if not (p.inv() * p == cz.one(n) and q.inv() * q == cz.one(n)
            and (p * p.inv() * q * q.inv()).is_zero):
        fails += 1
    for _ in range(300):
        s = rand_element(rng, n)
        t = rand_element(rng, n)
        runs += 1
        good = s * s.inv() * s == s and s.inv() * s * s.inv() == s.inv()
        good = good and (s * t).inv() == t.inv() * s.inv()
        good = good and s * cz.one(n) == s == cz.one(n) * s
        good = good and (s * cz.zero(n)).is_zero
        if not good:
            fails += 1
    props.append(_prop("inverse-monoid-laws", runs, fails))

    # meet behaves like a meet and is maximal among lower bounds
    runs = fails = 0
    for _ in range(200):
        s = rand_element(rng, n)
        t = rand_element(rng, n)
        m = cz.meet(s, t)
        runs += 1
        good = m.leq(s) and m.leq(t) and cz.meet(s, s) == s
        for _ in range(5):
            lower = cz.CuntzElement(n, tuple(r for r in m.rules if rng.random() < 0.5))
            good = good and lower.leq(m)
        if not good:
            fails += 1
    for _ in range(200):
        s = rand_element(rng, n)
        e = cz.from_clopen(rand_clopen(rng, n, allow_zero=True))
        lower = s * e  # a typical lower bound of s
        # extend by something orthogonal on both sides, then meet back with s
        x = cz.from_clopen(lower.r_set().complement()) * rand_element(rng, n) \
            * cz.from_clopen(lower.d_set().complement())
        t = cz.join(lower, x)
        m = cz.meet(s, t)
        runs += 1
        if not lower.leq(m):
            fails += 1
    props.append(_prop("meet-formula-laws", runs, fails))

    # units are closed under product and inverse
    runs = fails = 0
    for _ in range(500):
        g = rand_unit(rng, n)
        h = rand_unit(rng, n)
        runs += 1
        if not ((g * h).is_unit and g.inv().is_unit):
            fails += 1
    props.append(_prop("unit-closure", runs, fails))

    # support conjugation and disjoint-support commutation
    runs = fails = 0
    halves = []
    for w in ("0", "1"):
        a = cz.infinitesimal_in(cz.Clopen(n, (w,)))
        halves.append(cz.unit_from_infinitesimal(a))
    pairs = [(rand_unit(rng, n), rand_unit(rng, n)) for _ in range(unit_pairs - 1)]
    pairs.append((halves[0], halves[1]))
    for g, h in pairs:
        runs += 1
        good = (g * h * g.inv()).support_set() == \
            (g * h.support() * g.inv()).d_set()
        if g.support_set().meet(h.support_set()).is_zero:
            good = good and g * h == h * g
        if not good:
            fails += 1
    props.append(_prop("support-conjugation-and-commutation", runs, fails))

    # witness constructions re-verify from their certificates
    for op, nargs in (("transporter", 2), ("orthogonal-pencil", 2),
                      ("properly-infinite", 1), ("conrade-unit", 2),
                      ("piecewise", 1)):
        runs = fails = 0
        for _ in range(witness_samples):
            if op == "conrade-unit":
                e = rand_clopen(rng, n, allow_one=False)
                f = rand_clopen(rng, n)
                args = (str(e), str(f))
            elif op == "piecewise":
                s = rand_element(rng, n)
                while s.is_zero:
                    s = rand_element(rng, n)
                args = (str(s),)
            elif nargs == 1:
                args = (str(rand_clopen(rng, n)),)
            else:
                args = (str(rand_clopen(rng, n)), str(rand_clopen(rng, n)))
            runs += 1
            try:
                cert = cz.certify(op, n, *args)
            except cz.CuntzError:
                fails += 1
                continue
            if not (cert["verified"] and cz.verify_certificate(cert)):
                fails += 1
        props.append(_prop(f"witness-{op}", runs, fails))

    # doubling transport: domain lands on e, range inside f
    runs = fails = 0
    for _ in range(witness_samples // 2):
        e = rand_clopen(rng, n)
        f = rand_clopen(rng, n)
        runs += 1
        try:
            w = cz.transport_via_doubling(e, f)
        except cz.CuntzError:
            fails += 1
            continue
        if not (w.d_set() == e and w.r_set().leq(f)):
            fails += 1
    props.append(_prop("transport-via-doubling", runs, fails))

    # restricted products of infinitesimals inside a clopen
    runs = fails = 0
    for _ in range(100):
        e = rand_clopen(rng, n)
        runs += 1
        try:
            a, b = cz.restricted_product_infinitesimals(e)
        except cz.CuntzError:
            fails += 1
            continue
        inside = (a.d_set() | a.r_set() | b.d_set() | b.r_set()).leq(e)
        if not (inside and a.d_set() == b.r_set() and not (a * b).is_zero
                and ((a * b) * (a * b)).is_zero):
            fails += 1
    props.append(_prop("restricted-product-infinitesimals", runs, fails))

    # moved-point reflection on random units
    runs = fails = 0
    for _ in range(moved_units):
        g = rand_unit(rng, n)
        runs += 1
        if not cz.moved_point_check(g, depth=4).ok:
            fails += 1
    props.append(_prop("moved-point-reflection", runs, fails))

    # bounded fundamentality: cylinder-centralizing elements are idempotent
    runs = fails = 0
    for _ in range(300):
        s = rand_element(rng, n)
        runs += 1
        if cz.centralizes_cylinders(s) and not s.is_idempotent:
            fails += 1
    props.append(_prop("bounded-fundamentality", runs, fails))

    # decomposition boundary: splittable vs isolated-fixed-point elements
    runs = fails = 0
    runs += 1
    good_case = cz.basic_decompose(cz.parse_cuntz_element("0->0, 10->11, 11->10", n))
    if not (good_case.ok and all((x * x).is_zero for x in good_case.infinitesimals)):
        fails += 1
    runs += 1
    bad_case = cz.basic_decompose(cz.parse_cuntz_element("0->00, 10->01, 11->1", n))
    if bad_case.ok or bad_case.witness_rule is None:
        fails += 1
    props.append(_prop("basic-decompose-boundary", runs, fails))

    return _report("cuntz", seed, props)


SUITES = {
    "order-calculus": suite_order_calculus,
    "duality": suite_duality,
    "classes": suite_classes,
    "armature": suite_armature,
    "cuntz": suite_cuntz,
}


def run_suite(name: str, seed: int = 42) -> dict:
    """Run one named suite, or all of them under ``all``."""
    if name == "all":
        parts = [SUITES[k](seed=seed) for k in sorted(SUITES)]
        return {"suite": "all", "seed": seed, "suites": parts,
                "ok": all(p["ok"] for p in parts)}
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from "
                       f"{', '.join(sorted(SUITES))} or all")
    return SUITES[name](seed=seed)
