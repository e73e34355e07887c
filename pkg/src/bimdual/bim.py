"""Finite Boolean inverse meet-monoids of local bisections.

``FinBIM`` wraps a groupoid together with a carrier of local bisections,
by default all of them.  Elements are canonical arrow-id sets, so the
natural partial order is literal subset order, meets are intersections,
and compatible joins are unions.  Carriers that are proper subsets are
validated for closure under product, inverse, meet, compatible join and
idempotent complement, with explicit witnesses on failure.

The module also builds the monoid of order-isomorphisms between principal
ideals of a finite Boolean algebra and checks it against the symmetric
partial-bijection monoid of the algebra's atoms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .groupoid import (
    Bisection,
    FiniteGroupoid,
    all_local_bisections,
    build_groupoid,
    pair_groupoid,
)


class CarrierError(ValueError):
    """A supplied carrier is not closed under a required operation."""


class JoinError(ValueError):
    """Join requested for an incompatible pair; carries the witness product."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Relations:
    leq: bool
    compatible: bool
    orthogonal: bool
    mu_related: bool


@dataclass(frozen=True)
class ElementClass:
    is_idempotent: bool
    is_infinitesimal: bool
    is_unit: bool
    is_atom: bool


@dataclass(frozen=True)
class FixSupport:
    """Fixed-point and support idempotents with the induced orthogonal split."""

    fixpoint: Bisection
    support: Bisection
    parts: tuple[Bisection, Bisection]  # (fixpoint, element * support)


@dataclass(frozen=True)
class Pencil:
    """Witness family carrying one idempotent into another.

    The source is exactly the join of the element domains and every range
    sits below the target.
    """

    elements: tuple[Bisection, ...]
    source: Bisection
    target: Bisection

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a pencil needs at least one element")
        g = self.source.gpd
        dom_join = frozenset().union(*(x.d().arrows for x in self.elements))
        if dom_join != self.source.arrows:
            raise ValueError("pencil domains do not join to the source idempotent")
        for x in self.elements:
            if not x.r().arrows <= self.target.arrows:
                raise ValueError(f"pencil element {x} has range outside the target")


@dataclass(frozen=True)
class GreenRecord:
    D: bool
    J: bool
    preceq: Optional[Pencil]
    equiv: bool


@dataclass(frozen=True)
class BasicDecomposition:
    """Orthogonal split into an idempotent and square-zero parts, or a witness.

    On failure ``witness_part`` is an atom part that is neither idempotent
    nor square-zero; ``witness_arrow`` is one of its non-identity loops when
    a single arrow exhibits the obstruction.
    """

    ok: bool
    idempotent: Optional[Bisection] = None
    infinitesimals: tuple[Bisection, ...] = ()
    witness_part: Optional[Bisection] = None
    witness_arrow: Optional[int] = None


@dataclass(frozen=True)
class Substructures:
    units: tuple[Bisection, ...]
    local_monoid: Optional["FinBIM"]


class FinBIM:
    """A finite Boolean inverse meet-monoid of local bisections."""

    def __init__(self, gpd: FiniteGroupoid, carrier: Optional[Iterable[Bisection]] = None,
                 name: Optional[str] = None):
        self.gpd = gpd
        self.name = name or f"KB({gpd.name})"
        full = all_local_bisections(gpd)
        if carrier is None:
            self.carrier = frozenset(full)
            self.is_full = True
        else:
            self.carrier = frozenset(carrier)
            for x in self.carrier:
                if x.gpd != gpd:
                    raise CarrierError(f"element {x} lives over a different groupoid")
            self.is_full = self.carrier == frozenset(full)
        self.zero = Bisection(gpd, frozenset())
        self.one = Bisection(gpd, gpd.identity_set)
        self.elements = tuple(sorted(self.carrier, key=lambda s: s.sort_key))
        if not self.is_full:
            self._validate_carrier()
        self.idempotents = tuple(s for s in self.elements if s.is_idempotent)
        self._idem_set = frozenset(self.idempotents)
        self.e_atoms = self._minimal_nonzero(self.idempotents)
        e_atom_set = frozenset(self.e_atoms)
        self.atoms = tuple(s for s in self.elements if not s.is_zero and s.d() in e_atom_set)
        self.units = tuple(s for s in self.elements if s.is_unit)
        self._ideal_cache: dict[Bisection, frozenset] = {}

    # -- construction helpers -------------------------------------------

    @staticmethod
    def _minimal_nonzero(elements):
        nonzero = [s for s in elements if not s.is_zero]
        return tuple(s for s in nonzero
                     if not any(t.arrows < s.arrows for t in nonzero))

    def _validate_carrier(self):
        c = self.carrier
        if self.zero not in c:
            raise CarrierError("carrier is missing the zero element")
        if self.one not in c:
            raise CarrierError("carrier is missing the identity element")
        for a in c:
            if a.inv() not in c:
                raise CarrierError(f"not closed under inverse: witness {a}")
        for a in c:
            for b in c:
                p = a * b
                if p not in c:
                    raise CarrierError(f"not closed under product: witnesses {a}, {b}")
                m = a & b
                if m not in c:
                    raise CarrierError(f"not closed under meet: witnesses {a}, {b}")
                if a.compatible(b) and Bisection(self.gpd, a.arrows | b.arrows) not in c:
                    raise CarrierError(f"not closed under compatible join: witnesses {a}, {b}")
        for e in c:
            if e.is_idempotent and e.complement() not in c:
                raise CarrierError(f"not closed under idempotent complement: witness {e}")

    # -- basics ----------------------------------------------------------

    def __len__(self):
        return len(self.carrier)

    def __contains__(self, x):
        return x in self.carrier

    def __repr__(self):
        return f"FinBIM({self.name}, {len(self.carrier)} elements)"

    def _check_membership(self, x: Bisection) -> Bisection:
        if not self.is_full and x not in self.carrier:
            raise CarrierError(f"operation left the carrier: witness {x}")
        return x

    def multiply(self, a: Bisection, b: Bisection) -> Bisection:
        return self._check_membership(a * b)

    def inverse(self, a: Bisection) -> Bisection:
        return self._check_membership(a.inv())

    def complement(self, e: Bisection) -> Bisection:
        return self._check_membership(e.complement())

    def element(self, arrows: Iterable[int]) -> Bisection:
        x = Bisection(self.gpd, frozenset(arrows))
        if x not in self.carrier:
            raise CarrierError(f"{x} is not in the carrier of {self.name}")
        return x

    # -- order calculus ----------------------------------------------------

    def relations(self, a: Bisection, b: Bisection) -> Relations:
        return Relations(
            leq=a.leq(b),
            compatible=a.compatible(b),
            orthogonal=a.orthogonal(b),
            mu_related=all((a * e * a.inv()) == (b * e * b.inv()) for e in self.idempotents),
        )

    def meet(self, a: Bisection, b: Bisection) -> Bisection:
        return a & b

    def meet_by_formula(self, a: Bisection, b: Bisection) -> Bisection:
        """Meet computed as fixpoint(a b^-1) b; equals the intersection."""
        return (a * b.inv()).fixpoint() * b

    def join(self, a: Bisection, b: Bisection) -> Bisection:
        p = a * b.inv()
        if not p.is_idempotent:
            raise JoinError(f"incompatible join: {a} ~/~ {b}, product {p} not idempotent", p)
        q = a.inv() * b
        if not q.is_idempotent:
            raise JoinError(f"incompatible join: {a} ~/~ {b}, product {q} not idempotent", q)
        return self._check_membership(Bisection(self.gpd, a.arrows | b.arrows))

    def join_all(self, parts: Iterable[Bisection]) -> Bisection:
        out = self.zero
        for p in parts:
            out = self.join(out, p)
        return out

    def fixpoint_and_support(self, s: Bisection) -> FixSupport:
        phi = s.fixpoint()
        sigma = s.support()
        return FixSupport(phi, sigma, (phi, s * sigma))

    def classify(self, a: Bisection) -> ElementClass:
        square_zero = (a * a).is_zero
        dr_orthogonal = a.d().orthogonal(a.r())
        if square_zero != dr_orthogonal:
            raise AssertionError(f"infinitesimal cross-check disagrees on {a}")
        return ElementClass(
            is_idempotent=a.is_idempotent,
            is_infinitesimal=(not a.is_zero) and square_zero,
            is_unit=a.is_unit,
            is_atom=a in self.atoms,
        )

    def unit_from_infinitesimal(self, a: Bisection) -> Bisection:
        if a.is_zero or not (a * a).is_zero:
            raise ValueError(f"{a} is not an infinitesimal (nonzero with square zero)")
        e = self.join(a.d(), a.r()).complement()
        u = Bisection(self.gpd, a.arrows | a.inv().arrows | e.arrows)
        return self._check_membership(u)

    def orthogonal_refinement(self, parts: list[Bisection]) -> list[Bisection]:
        """Refine a compatible family to an orthogonal one with the same join.

        Folds the two-element split t1 = s1 * comp(d(s2)), t2 = s1 * d(s2),
        t3 = s2 * comp(d(s1)) over the family; every output part sits below
        one of the inputs.
        """
        parts = list(parts)
        for i, a in enumerate(parts):
            for b in parts[i + 1:]:
                if not a.compatible(b):
                    raise JoinError(f"parts {a} and {b} are incompatible", a * b.inv())
        out: list[Bisection] = []
        covered = self.zero
        for s in parts:
            if s.is_zero:
                continue
            ds = s.d()
            cds = ds.complement()
            new = []
            for t in out:
                for piece in (t * cds, t * ds):
                    if not piece.is_zero:
                        new.append(piece)
            rest = s * covered.complement()
            if not rest.is_zero:
                new.append(rest)
            out = new
            covered = self.join(covered, ds)
        return [self._check_membership(t) for t in out]

    def basic_decompose(self, s: Bisection) -> BasicDecomposition:
        idem_arrows: set[int] = set()
        infinitesimals = []
        for eps in self.e_atoms:
            if not eps.arrows <= s.d().arrows:
                continue
            part = s * eps
            if part.is_idempotent:
                idem_arrows |= part.arrows
            elif (part * part).is_zero:
                infinitesimals.append(part)
            else:
                g = self.gpd
                loops = [a for a in part.arrows
                         if g.dom[a] == g.cod[a] and not g.is_identity(a)]
                return BasicDecomposition(ok=False, witness_part=part,
                                          witness_arrow=loops[0] if loops else None)
        return BasicDecomposition(ok=True,
                                  idempotent=Bisection(self.gpd, frozenset(idem_arrows)),
                                  infinitesimals=tuple(infinitesimals))

    # -- ideals and Green-type relations --------------------------------

    def _ideal(self, e: Bisection) -> frozenset:
        if e not in self._ideal_cache:
            self._ideal_cache[e] = frozenset(s * e * t for s in self.elements
                                             for t in self.elements)
        return self._ideal_cache[e]

    def preceq(self, e: Bisection, f: Bisection) -> Optional[Pencil]:
        """A pencil from e to f when one exists, else None (zero has no pencil)."""
        if e.is_zero or f.is_zero:
            return None
        candidates = [x for x in self.elements
                      if x.d().arrows <= e.arrows and x.r().arrows <= f.arrows]
        covered = frozenset().union(*(x.d().arrows for x in candidates)) if candidates else frozenset()
        if covered != e.arrows:
            return None
        chosen, need = [], set(e.arrows)
        for x in sorted(candidates, key=lambda x: (-len(x.arrows),) + x.sort_key[1:]):
            if need & x.d().arrows:
                chosen.append(x)
                need -= x.d().arrows
            if not need:
                break
        return Pencil(tuple(chosen), e, f)

    def green_on_idempotents(self, e: Bisection, f: Bisection) -> GreenRecord:
        if not (e.is_idempotent and f.is_idempotent):
            raise ValueError("Green relations are computed on idempotents")
        d_related = any(x.d() == e and x.r() == f for x in self.elements)
        j_related = self._ideal(e) == self._ideal(f)
        pencil = self.preceq(e, f)
        back = self.preceq(f, e) if pencil is not None else None
        return GreenRecord(D=d_related, J=j_related, preceq=pencil,
                           equiv=pencil is not None and back is not None)

    # -- substructures ----------------------------------------------------

    def substructures(self, e: Optional[Bisection] = None) -> Substructures:
        local = self.local_monoid(e) if e is not None else None
        return Substructures(self.units, local)

    def local_monoid(self, e: Bisection) -> "FinBIM":
        """The monoid e S e realised over the restriction of the groupoid to e."""
        if not e.is_idempotent:
            raise ValueError("local monoid needs an idempotent")
        g = self.gpd
        keep_objects = sorted(g.dom[a] for a in e.arrows)
        obj_map = {x: i for i, x in enumerate(keep_objects)}
        keep_arrows = [a for a in range(g.n_arrows)
                       if g.dom[a] in obj_map and g.cod[a] in obj_map]
        arr_map = {a: i for i, a in enumerate(keep_arrows)}
        m = len(keep_arrows)
        comp = tuple(tuple(arr_map.get(g.comp[keep_arrows[i]][keep_arrows[j]], -1)
                           if g.comp[keep_arrows[i]][keep_arrows[j]] >= 0 else -1
                           for j in range(m)) for i in range(m))
        sub = FiniteGroupoid(
            tuple(g.objects[x] for x in keep_objects),
            tuple(obj_map[g.dom[a]] for a in keep_arrows),
            tuple(obj_map[g.cod[a]] for a in keep_arrows),
            comp,
            tuple(arr_map[g.inv[a]] for a in keep_arrows),
            tuple(g.arrow_labels[a] for a in keep_arrows),
            name=f"{g.name}|{e}",
        )
        mapped = {Bisection(sub, frozenset(arr_map[a] for a in (e * s * e).arrows))
                  for s in self.elements}
        return FinBIM(sub, mapped, name=f"{self.name}|{e}")


def kb_monoid(gpd_or_spec, carrier: Optional[Iterable[Bisection]] = None) -> FinBIM:
    """The monoid of local bisections of a groupoid, or a validated sub-monoid."""
    g = gpd_or_spec if isinstance(gpd_or_spec, FiniteGroupoid) else build_groupoid(gpd_or_spec)
    return FinBIM(g, carrier)


def symmetric_inverse_monoid(n: int) -> FinBIM:
    """I_n, the partial bijections of an n-set, as all local bisections of pair:n."""
    return FinBIM(pair_groupoid(n))


# -- the Munn monoid of a finite Boolean algebra --------------------------


@dataclass(frozen=True)
class OrderIso:
    """An order-isomorphism between principal ideals of a finite Boolean algebra.

    Stored as its full graph on down-sets (as a sorted tuple of subset
    pairs) so that composition and the order are computed on the maps
    themselves, independently of any atom bookkeeping.
    """

    pairs: tuple[tuple[frozenset, frozenset], ...]

    @staticmethod
    def from_atom_bijection(dom_atoms, bij: dict) -> "OrderIso":
        dom_atoms = sorted(dom_atoms)
        graph = []
        for k in range(len(dom_atoms) + 1):
            for sub in itertools.combinations(dom_atoms, k):
                key = frozenset(sub)
                graph.append((key, frozenset(bij[x] for x in sub)))
        return OrderIso(tuple(sorted(graph, key=lambda p: (len(p[0]), sorted(p[0])))))

    @property
    def mapping(self) -> dict:
        return dict(self.pairs)

    @property
    def dom_top(self) -> frozenset:
        return max((p[0] for p in self.pairs), key=len, default=frozenset())

    @property
    def cod_top(self) -> frozenset:
        return max((p[1] for p in self.pairs), key=len, default=frozenset())

    def compose(self, other: "OrderIso") -> "OrderIso":
        """self after other, restricted to where the maps chain."""
        g, h = self.mapping, other.mapping
        mid = self.dom_top & other.cod_top
        hinv = {y: x for x, y in other.pairs}
        dom = hinv[mid]  # preimage of the overlap under the first map
        pairs = [(x, g[h[x]]) for x in _downsets(dom)]
        return OrderIso(tuple(sorted(pairs, key=lambda p: (len(p[0]), sorted(p[0])))))

    def invert(self) -> "OrderIso":
        pairs = [(y, x) for x, y in self.pairs]
        return OrderIso(tuple(sorted(pairs, key=lambda p: (len(p[0]), sorted(p[0])))))

    def contains(self, other: "OrderIso") -> bool:
        return set(other.pairs) <= set(self.pairs)


def _downsets(top: frozenset):
    items = sorted(top)
    for k in range(len(items) + 1):
        for sub in itertools.combinations(items, k):
            yield frozenset(sub)


@dataclass(frozen=True)
class MunnRecord:
    size: int
    monoid: FinBIM
    correspondence: tuple  # (OrderIso, Bisection) pairs
    laws_verified: dict


def munn_monoid(n_atoms: int, check_pairs: Optional[int] = None) -> MunnRecord:
    """All order-isomorphisms between principal ideals of the 2^n algebra.

    Returns the family together with a verified dictionary onto the
    partial-bijection monoid of the atoms.  Product preservation is checked
    on every pair up to n_atoms = 4 and on a deterministic sample beyond.
    """
    if n_atoms < 1:
        raise ValueError("need at least one atom")
    if n_atoms > 5:
        raise ValueError(f"size bound exceeded: n_atoms={n_atoms} > 5")
    atoms = list(range(1, n_atoms + 1))
    isos = []
    for k in range(n_atoms + 1):
        for dom in itertools.combinations(atoms, k):
            for cod in itertools.combinations(atoms, k):
                for perm in itertools.permutations(cod):
                    bij = dict(zip(dom, perm))
                    isos.append(OrderIso.from_atom_bijection(dom, bij))
    isos = sorted(set(isos), key=lambda a: (len(a.pairs), a.pairs))

    target = symmetric_inverse_monoid(n_atoms)
    g = target.gpd
    arrow_of = {(g.objects[g.dom[a]], g.objects[g.cod[a]]): a for a in range(g.n_arrows)}

    def to_bisection(iso: OrderIso) -> Bisection:
        singles = {next(iter(x)): next(iter(y)) for x, y in iso.pairs if len(x) == 1}
        return Bisection(g, frozenset(arrow_of[(x, y)] for x, y in singles.items()))

    pairs = [(iso, to_bisection(iso)) for iso in isos]
    images = [b for _, b in pairs]
    laws = {
        "bijective": len(set(images)) == len(pairs) and set(images) == set(target.elements),
        "inverse": all(to_bisection(iso.invert()) == b.inv() for iso, b in pairs),
        "order": True,
        "product": True,
    }
    for (i1, b1) in pairs:
        for (i2, b2) in pairs:
            if i1.contains(i2) != b2.leq(b1):
                laws["order"] = False
                break
        else:
            continue
        break
    index_pairs = itertools.product(range(len(pairs)), repeat=2)
    if n_atoms > 4:
        step = max(1, (len(pairs) ** 2) // (check_pairs or 20000))
        index_pairs = itertools.islice(itertools.product(range(len(pairs)), repeat=2), 0, None, step)
    for i, j in index_pairs:
        iso1, b1 = pairs[i]
        iso2, b2 = pairs[j]
        if to_bisection(iso1.compose(iso2)) != b1 * b2:
            laws["product"] = False
            break
    return MunnRecord(len(isos), target, tuple(pairs), laws)
