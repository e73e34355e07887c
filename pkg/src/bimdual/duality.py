"""The finite duality dictionary between monoids and groupoids.

From a finite Boolean inverse meet-monoid the dual groupoid is built on
ultrafilters, which at finite scale are up-sets of atoms: objects are the
idempotent atoms, arrows are the atoms, and composition is the monoid
product.  Both round trips are verified law by law, the lattice of
join-closed ideals is matched against unions of orbits, and the class
dictionary (fundamental vs effective, 0-simplifying vs minimal) is checked
by computing the two sides independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .bim import FinBIM, kb_monoid
from .checkers import classify_monoid, is_fundamental
from .groupoid import Bisection, FiniteGroupoid, groupoid_properties


class DualityError(ValueError):
    """Internal inconsistency while building the dual groupoid."""


@dataclass(frozen=True)
class DualGroupoid:
    """The groupoid of atoms of a monoid, with the atom dictionaries."""

    gpd: FiniteGroupoid
    arrow_atoms: tuple[Bisection, ...]   # arrow id -> atom
    object_atoms: tuple[Bisection, ...]  # object id -> idempotent atom
    monoid: FinBIM


def groupoid_of(S: FinBIM) -> DualGroupoid:
    """Objects are idempotent atoms, arrows are atoms, product is composition."""
    e_atoms = list(S.e_atoms)
    atoms = list(S.atoms)
    e_index = {e: i for i, e in enumerate(e_atoms)}
    a_index = {a: i for i, a in enumerate(atoms)}
    m = len(atoms)
    dom = tuple(e_index[a.d()] for a in atoms)
    cod = tuple(e_index[a.r()] for a in atoms)
    comp_rows = []
    for i in range(m):
        row = []
        for j in range(m):
            if dom[i] != cod[j]:
                row.append(-1)
                continue
            prod = atoms[i] * atoms[j]
            if prod not in a_index:
                raise DualityError(
                    f"product of atoms {atoms[i]} and {atoms[j]} is not an atom; "
                    "the carrier is not a valid monoid")
            row.append(a_index[prod])
        comp_rows.append(tuple(row))
    inv = tuple(a_index[a.inv()] for a in atoms)
    gpd = FiniteGroupoid(
        tuple(str(e) for e in e_atoms),
        dom, cod, tuple(comp_rows), inv,
        tuple(str(a) for a in atoms),
        name=f"G({S.name})",
    )
    return DualGroupoid(gpd, tuple(atoms), tuple(e_atoms), S)


# -- round trips ------------------------------------------------------------


@dataclass(frozen=True)
class RoundtripReport:
    ok: bool
    size: int
    checks: dict

    def to_json(self) -> dict:
        return {"ok": self.ok, "size": self.size,
                "checks": {k: bool(v) for k, v in self.checks.items()}}


def atoms_below(S: FinBIM, s: Bisection) -> tuple[Bisection, ...]:
    return tuple(a for a in S.atoms if a.leq(s))


def roundtrip(S: FinBIM) -> RoundtripReport:
    """Verify s -> {atoms below s} is an isomorphism onto the dual's bisections."""
    dual = groupoid_of(S)
    T = kb_monoid(dual.gpd)
    a_index = {a: i for i, a in enumerate(dual.arrow_atoms)}

    def f(s: Bisection) -> Bisection:
        return Bisection(dual.gpd, frozenset(a_index[a] for a in atoms_below(S, s)))

    image = {s: f(s) for s in S.elements}
    checks = {}
    checks["injective"] = len(set(image.values())) == len(S.elements)
    checks["surjective"] = set(image.values()) == set(T.elements)
    checks["zero"] = image[S.zero] == T.zero
    checks["one"] = image[S.one] == T.one
    checks["inverse"] = all(image[s.inv()] == image[s].inv() for s in S.elements)
    checks["product"] = all(image[s * t] == image[s] * image[t]
                            for s in S.elements for t in S.elements)
    checks["meet"] = all(image[s & t] == (image[s] & image[t])
                         for s in S.elements for t in S.elements)
    ok_joins = True
    for s in S.elements:
        for t in S.elements:
            if s.compatible(t):
                j = Bisection(S.gpd, s.arrows | t.arrows)
                if j in S.carrier:
                    if image[j] != Bisection(dual.gpd, image[s].arrows | image[t].arrows):
                        ok_joins = False
                        break
        if not ok_joins:
            break
    checks["compatible_join"] = ok_joins
    return RoundtripReport(all(checks.values()), len(S.elements), checks)


def roundtrip_groupoid(G: FiniteGroupoid) -> RoundtripReport:
    """Verify arrow -> singleton atom identifies G with the dual of its monoid."""
    S = kb_monoid(G)
    dual = groupoid_of(S)
    H = dual.gpd
    a_index = {a: i for i, a in enumerate(dual.arrow_atoms)}
    arrow_map = {}
    for a in range(G.n_arrows):
        atom = Bisection(G, frozenset([a]))
        if atom not in a_index:
            return RoundtripReport(False, G.n_arrows, {"singleton_atoms": False})
        arrow_map[a] = a_index[atom]
    checks = {}
    checks["arrow_bijection"] = len(set(arrow_map.values())) == G.n_arrows == H.n_arrows
    checks["objects"] = G.n_objects == H.n_objects
    # endpoints transport: identity of dom maps to identity of mapped dom
    checks["dom_cod"] = all(
        arrow_map[G.identity_of[G.dom[a]]] == H.identity_of[H.dom[arrow_map[a]]]
        and arrow_map[G.identity_of[G.cod[a]]] == H.identity_of[H.cod[arrow_map[a]]]
        for a in range(G.n_arrows))
    checks["inverse"] = all(arrow_map[G.inv[a]] == H.inv[arrow_map[a]]
                            for a in range(G.n_arrows))
    ok = True
    for a in range(G.n_arrows):
        for b in range(G.n_arrows):
            c = G.comp[a][b]
            h = H.comp[arrow_map[a]][arrow_map[b]]
            if (c < 0) != (h < 0) or (c >= 0 and arrow_map[c] != h):
                ok = False
                break
        if not ok:
            break
    checks["composition"] = ok
    return RoundtripReport(all(checks.values()), G.n_arrows, checks)


# -- groupoid isomorphism search --------------------------------------------


def iso_groupoids(G: FiniteGroupoid, H: FiniteGroupoid) -> Optional[dict]:
    """Backtracking isomorphism search, pruned by orbit and isotropy counts.

    Returns an arrow map as a dict or None.  Intended for the desk-scale
    corpus; arrow counts stay well under a hundred.
    """
    if G.n_objects != H.n_objects or G.n_arrows != H.n_arrows:
        return None

    def obj_profile(K, x):
        loops = sum(1 for a in range(K.n_arrows) if K.dom[a] == K.cod[a] == x)
        outs = sum(1 for a in range(K.n_arrows) if K.dom[a] == x)
        ins = sum(1 for a in range(K.n_arrows) if K.cod[a] == x)
        return (loops, outs, ins)

    gp = [obj_profile(G, x) for x in range(G.n_objects)]
    hp = [obj_profile(H, x) for x in range(H.n_objects)]
    if sorted(gp) != sorted(hp):
        return None

    def try_object_map(obj_map):
        blocks = {}
        for a in range(G.n_arrows):
            blocks.setdefault((obj_map[G.dom[a]], obj_map[G.cod[a]]), []).append(a)
        h_blocks = {}
        for a in range(H.n_arrows):
            h_blocks.setdefault((H.dom[a], H.cod[a]), []).append(a)
        if set(blocks) != set(h_blocks):
            return None
        if any(len(blocks[k]) != len(h_blocks[k]) for k in blocks):
            return None
        g_order = [a for k in sorted(blocks) for a in blocks[k]]

        arrow_map: dict[int, int] = {}
        used = set()

        def consistent(a, b):
            for a2, b2 in arrow_map.items():
                for x, y, u, v in ((a, a2, b, b2), (a2, a, b2, b)):
                    c = G.comp[x][y]
                    h = H.comp[u][v]
                    if (c < 0) != (h < 0):
                        return False
                    if c >= 0 and c in arrow_map and arrow_map[c] != h:
                        return False
            c = G.comp[a][a]
            h = H.comp[b][b]
            if (c < 0) != (h < 0) or (c >= 0 and c in arrow_map and arrow_map[c] != h):
                return False
            return True

        def rec(i):
            if i == len(g_order):
                # full table check
                for a in range(G.n_arrows):
                    for b in range(G.n_arrows):
                        c = G.comp[a][b]
                        h = H.comp[arrow_map[a]][arrow_map[b]]
                        if (c < 0) != (h < 0) or (c >= 0 and arrow_map[c] != h):
                            return False
                return True
            a = g_order[i]
            key = (obj_map[G.dom[a]], obj_map[G.cod[a]])
            for b in h_blocks[key]:
                if b in used:
                    continue
                if G.is_identity(a) != H.is_identity(b):
                    continue
                arrow_map[a] = b
                used.add(b)
                if consistent(a, b) and rec(i + 1):
                    return True
                del arrow_map[a]
                used.remove(b)
            return False

        return dict(arrow_map) if rec(0) else None

    candidates = [[y for y in range(H.n_objects) if hp[y] == gp[x]]
                  for x in range(G.n_objects)]
    for perm in itertools.permutations(range(H.n_objects)):
        if any(perm[x] not in candidates[x] for x in range(G.n_objects)):
            continue
        res = try_object_map(list(perm))
        if res is not None:
            return res
    return None


def iso_monoids(S: FinBIM, T: FinBIM) -> bool:
    """Monoid isomorphism via the dual groupoids and the verified round trips."""
    if len(S) != len(T):
        return False
    if not (roundtrip(S).ok and roundtrip(T).ok):
        return False
    return iso_groupoids(groupoid_of(S).gpd, groupoid_of(T).gpd) is not None


# -- join-closed ideals vs invariant opens ----------------------------------


@dataclass(frozen=True)
class IdealCorrespondence:
    ideals: tuple[frozenset, ...]           # each a set of elements
    opens: tuple[frozenset, ...]            # each a set of object labels of the dual
    pairs: tuple[tuple[int, int], ...]      # matching indices
    order_iso: bool
    oracle_agrees: bool

    @property
    def count(self) -> int:
        return len(self.ideals)

    def to_json(self) -> dict:
        return {"count": self.count, "order_iso": self.order_iso,
                "oracle_agrees": self.oracle_agrees,
                "opens": [sorted(map(str, o)) for o in self.opens]}


def _ideal_from_atom_set(S: FinBIM, chosen: frozenset) -> frozenset:
    """Elements all of whose domain atoms lie in the chosen idempotent atoms."""
    return frozenset(s for s in S.elements
                     if all(e in chosen for e in S.e_atoms if e.leq(s.d())))


def _is_vee_ideal(S: FinBIM, ideal: frozenset) -> bool:
    # downward closure and compatible joins hold by construction of the
    # candidate sets; two-sided multiplication is what can fail
    for s in ideal:
        for t in S.elements:
            if t * s not in ideal or s * t not in ideal:
                return False
    return True


def vee_ideals_bruteforce(S: FinBIM) -> list[frozenset]:
    """All join-closed ideals, from all subsets of idempotent atoms."""
    out = []
    e_atoms = list(S.e_atoms)
    for k in range(len(e_atoms) + 1):
        for sub in itertools.combinations(e_atoms, k):
            ideal = _ideal_from_atom_set(S, frozenset(sub))
            if _is_vee_ideal(S, ideal) and ideal not in out:
                out.append(ideal)
    return out


def ideal_correspondence(S: FinBIM) -> IdealCorrespondence:
    dual = groupoid_of(S)
    props = groupoid_properties(dual.gpd)
    label_to_atom = dict(zip(dual.gpd.objects, dual.object_atoms))
    from_orbits = []
    opens = []
    orbit_list = list(props.orbits)
    for k in range(len(orbit_list) + 1):
        for sub in itertools.combinations(orbit_list, k):
            labels = frozenset().union(*sub) if sub else frozenset()
            chosen = frozenset(label_to_atom[l] for l in labels)
            from_orbits.append(_ideal_from_atom_set(S, chosen))
            opens.append(labels)
    oracle = vee_ideals_bruteforce(S)
    oracle_agrees = sorted(map(sorted_key, from_orbits)) == sorted(map(sorted_key, oracle))
    order_iso = True
    for i, a in enumerate(from_orbits):
        for j, b in enumerate(from_orbits):
            if (a <= b) != (opens[i] <= opens[j]):
                order_iso = False
    pairs = tuple((i, i) for i in range(len(from_orbits)))
    return IdealCorrespondence(tuple(from_orbits), tuple(opens), pairs,
                               order_iso, oracle_agrees)


def sorted_key(ideal: frozenset):
    return tuple(sorted(s.sort_key for s in ideal))


# -- the class dictionary ----------------------------------------------------


@dataclass(frozen=True)
class TheoremDictionary:
    fundamental: bool
    effective: bool
    zero_simplifying: bool
    minimal: bool

    @property
    def fundamental_iff_effective(self) -> bool:
        return self.fundamental == self.effective

    @property
    def zero_simplifying_iff_minimal(self) -> bool:
        return self.zero_simplifying == self.minimal

    def to_json(self) -> dict:
        return {"fundamental": self.fundamental, "effective": self.effective,
                "zero_simplifying": self.zero_simplifying, "minimal": self.minimal,
                "fundamental_iff_effective": self.fundamental_iff_effective,
                "zero_simplifying_iff_minimal": self.zero_simplifying_iff_minimal}


def theorem_dictionary(S: FinBIM) -> TheoremDictionary:
    """Compute both sides of the dictionary independently and compare."""
    fundamental, _ = is_fundamental(S)
    profile = classify_monoid(S)
    props = groupoid_properties(groupoid_of(S).gpd)
    return TheoremDictionary(fundamental, props.effective,
                             profile.zero_simplifying, props.minimal)


# -- filters at finite scale -------------------------------------------------


@dataclass(frozen=True)
class UltraFilter:
    """An ultrafilter represented by its generating atom (its up-set)."""

    base: Bisection

    def upset(self, S: FinBIM) -> frozenset:
        return frozenset(s for s in S.elements if self.base.leq(s))

    def d(self) -> "UltraFilter":
        return UltraFilter(self.base.d())

    def r(self) -> "UltraFilter":
        return UltraFilter(self.base.r())

    def product(self, other: "UltraFilter", S: FinBIM) -> Optional["UltraFilter"]:
        if self.base.d() != other.base.r():
            return None
        return UltraFilter(self.base * other.base)


def ultrafilters(S: FinBIM) -> list[UltraFilter]:
    return [UltraFilter(a) for a in S.atoms]


def is_filter(S: FinBIM, A: frozenset) -> bool:
    if not A:
        return False
    for a in A:
        for b in A:
            if (a & b) not in A:
                return False
        for s in S.elements:
            if a.leq(s) and s not in A:
                return False
    return True


def is_proper_filter(S: FinBIM, A: frozenset) -> bool:
    return is_filter(S, A) and S.zero not in A


def is_ultrafilter(S: FinBIM, A: frozenset) -> bool:
    """Proper filter meeting everything it fails to contain in zero."""
    if not is_proper_filter(S, A):
        return False
    for s in S.elements:
        if all(not (s & a).is_zero for a in A) and s not in A:
            return False
    return True


def is_prime_filter(S: FinBIM, A: frozenset) -> bool:
    if not is_proper_filter(S, A):
        return False
    for a in S.elements:
        for b in S.elements:
            if a.compatible(b):
                j = Bisection(S.gpd, a.arrows | b.arrows)
                if j in S.carrier and j in A and a not in A and b not in A:
                    return False
    return True
