"""Finite discrete groupoids and their local bisections.

A groupoid is stored with dense integer arrow ids.  Composition is a total
m x m table with -1 marking undefined pairs; ``compose(a, b)`` is defined
exactly when ``dom(a) == cod(b)`` (b acts first, as for partial maps).
Local bisections are arrow sets with pairwise distinct domains and pairwise
distinct codomains; they multiply by composing all composable pairs and are
the element type of the finite monoid engine in :mod:`bimdual.bim`.

Builders accept shorthand specs (``pair:n``, ``group:Zn``,
``disjoint_union(a, b)``) and an explicit JSON table format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable


class GroupoidError(ValueError):
    """Raised when a table fails the groupoid axioms."""


class BisectionError(ValueError):
    """Raised when an arrow set is not a local bisection."""


@dataclass(frozen=True)
class FiniteGroupoid:
    """A finite discrete groupoid given by explicit tables.

    ``objects`` are arbitrary hashable labels; arrows are the dense ids
    ``0..len(dom)-1``.  ``comp[a][b]`` is the composite arrow id or -1.
    Construction validates all axioms and raises GroupoidError naming the
    offending arrows on failure.
    """

    objects: tuple
    dom: tuple[int, ...]   # arrow -> object index
    cod: tuple[int, ...]
    comp: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    arrow_labels: tuple[str, ...]
    name: str = "groupoid"

    def __post_init__(self):
        self._validate()

    # -- validation ---------------------------------------------------

    def _validate(self):
        m = len(self.dom)
        if not (len(self.cod) == len(self.inv) == len(self.arrow_labels) == m):
            raise GroupoidError("arrow table lengths disagree")
        if len(self.comp) != m or any(len(row) != m for row in self.comp):
            raise GroupoidError("composition table is not m x m")
        n = len(self.objects)
        for a in range(m):
            if not (0 <= self.dom[a] < n and 0 <= self.cod[a] < n):
                raise GroupoidError(f"arrow {a} has out-of-range endpoints")
        for a in range(m):
            for b in range(m):
                c = self.comp[a][b]
                defined = self.dom[a] == self.cod[b]
                if defined and c < 0:
                    raise GroupoidError(f"compose({a},{b}) should be defined")
                if not defined and c >= 0:
                    raise GroupoidError(f"compose({a},{b}) defined but dom/cod mismatch")
                if c >= 0 and (self.dom[c] != self.dom[b] or self.cod[c] != self.cod[a]):
                    raise GroupoidError(f"compose({a},{b})={c} has wrong endpoints")
        # identities: one idempotent loop per object, neutral on both sides
        ids = [a for a in range(m) if self.dom[a] == self.cod[a] and self.comp[a][a] == a]
        by_obj = {}
        for a in ids:
            if self.dom[a] in by_obj:
                raise GroupoidError(f"objects {self.objects[self.dom[a]]} has two identities {by_obj[self.dom[a]]},{a}")
            by_obj[self.dom[a]] = a
        if len(by_obj) != n:
            missing = [self.objects[x] for x in range(n) if x not in by_obj]
            raise GroupoidError(f"objects without identity arrow: {missing}")
        for a in range(m):
            e, f = by_obj[self.dom[a]], by_obj[self.cod[a]]
            if self.comp[a][e] != a:
                raise GroupoidError(f"identity not right-neutral on arrow {a}")
            if self.comp[f][a] != a:
                raise GroupoidError(f"identity not left-neutral on arrow {a}")
        for a in range(m):
            ai = self.inv[a]
            if not 0 <= ai < m or self.inv[ai] != a:
                raise GroupoidError(f"inverse is not an involution at arrow {a}")
            if self.dom[ai] != self.cod[a] or self.cod[ai] != self.dom[a]:
                raise GroupoidError(f"inverse of arrow {a} has wrong endpoints")
            if self.comp[ai][a] != by_obj[self.dom[a]] or self.comp[a][ai] != by_obj[self.cod[a]]:
                raise GroupoidError(f"arrow {a} composed with its inverse is not an identity")
        for a in range(m):
            for b in range(m):
                if self.comp[a][b] < 0:
                    continue
                for c in range(m):
                    if self.comp[b][c] < 0:
                        continue
                    left = self.comp[self.comp[a][b]][c]
                    right = self.comp[a][self.comp[b][c]]
                    if left != right:
                        raise GroupoidError(f"associativity fails on triple ({a},{b},{c})")

    # -- structure ----------------------------------------------------

    @cached_property
    def identity_of(self) -> tuple[int, ...]:
        """Identity arrow id per object index."""
        out = [-1] * len(self.objects)
        for a in range(len(self.dom)):
            if self.dom[a] == self.cod[a] and self.comp[a][a] == a:
                out[self.dom[a]] = a
        return tuple(out)

    @cached_property
    def identity_set(self) -> frozenset[int]:
        return frozenset(self.identity_of)

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.dom)

    def is_identity(self, a: int) -> bool:
        return a in self.identity_set

    def compose(self, a: int, b: int) -> int:
        """Composite a∘b (b first) or -1 when dom(a) != cod(b)."""
        return self.comp[a][b]

    def arrow_str(self, a: int) -> str:
        return self.arrow_labels[a]

    def __repr__(self):
        return f"FiniteGroupoid({self.name}: {self.n_objects} objects, {self.n_arrows} arrows)"

    def __hash__(self):
        return hash((self.name, self.objects, self.dom, self.cod))

    def to_json(self) -> dict:
        triples = [[a, b, self.comp[a][b]]
                   for a in range(self.n_arrows) for b in range(self.n_arrows)
                   if self.comp[a][b] >= 0]
        return {
            "objects": list(self.objects),
            "arrows": [{"id": a, "dom": self.objects[self.dom[a]], "cod": self.objects[self.cod[a]]}
                       for a in range(self.n_arrows)],
            "compose": triples,
            "inverse": [[a, self.inv[a]] for a in range(self.n_arrows)],
        }

    def to_dot(self) -> str:
        """DOT digraph of the arrow graph; identities drawn as dotted loops."""
        lines = [f'digraph "{self.name}" {{']
        for x in self.objects:
            lines.append(f'  "{x}";')
        for a in range(self.n_arrows):
            style = ' style=dotted' if self.is_identity(a) else ''
            lines.append(f'  "{self.objects[self.dom[a]]}" -> "{self.objects[self.cod[a]]}"'
                         f' [label="{self.arrow_labels[a]}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- builders ----------------------------------------------------------


def _finish(objects, arrow_specs, compose_fn, inverse_fn, labels, name):
    """Assemble a FiniteGroupoid from per-arrow dom/cod data and callables."""
    m = len(arrow_specs)
    dom = tuple(d for d, _ in arrow_specs)
    cod = tuple(c for _, c in arrow_specs)
    comp = tuple(tuple(compose_fn(a, b) if dom[a] == cod[b] else -1 for b in range(m))
                 for a in range(m))
    inv = tuple(inverse_fn(a) for a in range(m))
    return FiniteGroupoid(tuple(objects), dom, cod, comp, inv, tuple(labels), name)


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Pair groupoid on objects 1..n: one arrow x->y for every ordered pair."""
    if n < 1:
        raise GroupoidError("pair groupoid needs at least one object")
    objects = list(range(1, n + 1))
    arrows = [(x, y) for x in range(n) for y in range(n)]  # (dom, cod) indices
    index = {a: i for i, a in enumerate(arrows)}

    def compose_fn(a, b):
        # a: x->y, b: w->x  =>  w->y
        return index[(arrows[b][0], arrows[a][1])]

    def inverse_fn(a):
        return index[(arrows[a][1], arrows[a][0])]

    labels = [f"{objects[x]}->{objects[y]}" for x, y in arrows]
    return _finish(objects, arrows, compose_fn, inverse_fn, labels, f"pair:{n}")


def cyclic_group_groupoid(k: int) -> FiniteGroupoid:
    """One-object groupoid carrying the cyclic group of order k."""
    if k < 1:
        raise GroupoidError("cyclic group order must be positive")
    arrows = [(0, 0)] * k

    def compose_fn(a, b):
        return (a + b) % k

    def inverse_fn(a):
        return (-a) % k

    labels = ["1"] + ["g" if k <= 2 else f"g{i}" for i in range(1, k)]
    if k > 2:
        labels[1] = "g"
    return _finish(["*"], arrows, compose_fn, inverse_fn, labels, f"group:Z{k}")


def disjoint_union(parts: Iterable[FiniteGroupoid]) -> FiniteGroupoid:
    """Disjoint union; objects are relabelled '<i>:<label>' per component."""
    parts = list(parts)
    objects, arrow_specs, labels = [], [], []
    obj_off, arr_off = [], []
    for i, g in enumerate(parts):
        obj_off.append(len(objects))
        arr_off.append(len(arrow_specs))
        objects.extend(f"{i}:{x}" for x in g.objects)
        arrow_specs.extend((g.dom[a] + obj_off[i], g.cod[a] + obj_off[i])
                           for a in range(g.n_arrows))
        labels.extend(f"{i}:{lab}" for lab in g.arrow_labels)
    owner = []
    for i, g in enumerate(parts):
        owner.extend([i] * g.n_arrows)

    def compose_fn(a, b):
        i = owner[a]
        if owner[b] != i:
            return -1
        c = parts[i].comp[a - arr_off[i]][b - arr_off[i]]
        return c + arr_off[i] if c >= 0 else -1

    def inverse_fn(a):
        i = owner[a]
        return parts[i].inv[a - arr_off[i]] + arr_off[i]

    name = "disjoint_union(" + ", ".join(g.name for g in parts) + ")"
    return _finish(objects, arrow_specs, compose_fn, inverse_fn, labels, name)


def from_tables(data: dict) -> FiniteGroupoid:
    """Build a groupoid from the JSON table format.

    Expected keys: objects, arrows (records with id/dom/cod), compose
    (triples [a,b,c]), inverse (pairs [a,a']).  Arrow ids must be the dense
    range 0..m-1.
    """
    objects = list(data["objects"])
    obj_index = {x: i for i, x in enumerate(objects)}
    arrows = sorted(data["arrows"], key=lambda r: r["id"])
    m = len(arrows)
    if [r["id"] for r in arrows] != list(range(m)):
        raise GroupoidError("arrow ids must be dense integers 0..m-1")
    try:
        dom = tuple(obj_index[r["dom"]] for r in arrows)
        cod = tuple(obj_index[r["cod"]] for r in arrows)
    except KeyError as k:
        raise GroupoidError(f"arrow endpoint {k} is not a listed object") from None
    table = [[-1] * m for _ in range(m)]
    for a, b, c in data["compose"]:
        table[a][b] = c
    inv = [-1] * m
    for a, ai in data["inverse"]:
        inv[a] = ai
    labels = [str(r.get("label", f"a{r['id']}[{r['dom']}->{r['cod']}]")) for r in arrows]
    return FiniteGroupoid(tuple(objects), dom, cod,
                          tuple(tuple(row) for row in table), tuple(inv),
                          tuple(labels), str(data.get("name", "groupoid")))


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def build_groupoid(spec) -> FiniteGroupoid:
    """Build a validated groupoid from a shorthand string, dict, or JSON text.

    Shorthands: ``pair:n``, ``group:Zn``, ``disjoint_union(spec, spec, ...)``.
    """
    if isinstance(spec, dict):
        return from_tables(spec)
    text = spec.strip()
    if text.startswith("{"):
        return from_tables(json.loads(text))
    if text.startswith("pair:"):
        try:
            n = int(text[5:])
        except ValueError:
            raise GroupoidError(f"bad pair spec {text!r}") from None
        return pair_groupoid(n)
    if text.startswith("group:"):
        body = text[6:]
        if body.upper().startswith("Z"):
            try:
                return cyclic_group_groupoid(int(body[1:]))
            except ValueError:
                raise GroupoidError(f"bad cyclic group spec {text!r}") from None
        raise GroupoidError(f"unknown group shorthand {body!r} (use Zn or JSON tables)")
    if text.startswith("disjoint_union(") and text.endswith(")"):
        inner = _split_top_level(text[len("disjoint_union("):-1])
        if len(inner) < 2:
            raise GroupoidError("disjoint_union needs at least two components")
        return disjoint_union(build_groupoid(p) for p in inner)
    raise GroupoidError(f"unrecognised groupoid spec {spec!r}")


# -- local bisections --------------------------------------------------


@dataclass(frozen=True, eq=False)
class Bisection:
    """A local bisection: arrows with distinct domains and distinct codomains.

    Products, inverses and the order calculus are all set operations on
    arrow ids; the empty set is the zero element and the identity set the
    monoid identity.
    """

    gpd: FiniteGroupoid
    arrows: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "arrows", frozenset(self.arrows))
        g = self.gpd
        seen_dom, seen_cod = {}, {}
        for a in self.arrows:
            x, y = g.dom[a], g.cod[a]
            if x in seen_dom:
                raise BisectionError(
                    f"arrows {g.arrow_str(seen_dom[x])} and {g.arrow_str(a)} share a domain")
            if y in seen_cod:
                raise BisectionError(
                    f"arrows {g.arrow_str(seen_cod[y])} and {g.arrow_str(a)} share a codomain")
            seen_dom[x], seen_cod[y] = a, a

    def __eq__(self, other):
        return (isinstance(other, Bisection) and self.arrows == other.arrows
                and (self.gpd is other.gpd or self.gpd == other.gpd))

    def __hash__(self):
        return hash(self.arrows)

    def __str__(self):
        g = self.gpd
        inner = ", ".join(g.arrow_str(a) for a in sorted(self.arrows))
        return "{" + inner + "}"

    __repr__ = __str__

    @property
    def sort_key(self):
        return (len(self.arrows), tuple(sorted(self.arrows)))

    # -- monoid operations ---------------------------------------------

    def __mul__(self, other: "Bisection") -> "Bisection":
        g = self.gpd
        by_dom = {g.dom[a]: a for a in self.arrows}
        out = set()
        for b in other.arrows:
            a = by_dom.get(g.cod[b])
            if a is not None:
                out.add(g.comp[a][b])
        return Bisection(g, frozenset(out))

    def inv(self) -> "Bisection":
        g = self.gpd
        return Bisection(g, frozenset(g.inv[a] for a in self.arrows))

    def d(self) -> "Bisection":
        """Domain idempotent s^-1 s."""
        g = self.gpd
        return Bisection(g, frozenset(g.identity_of[g.dom[a]] for a in self.arrows))

    def r(self) -> "Bisection":
        """Range idempotent s s^-1."""
        g = self.gpd
        return Bisection(g, frozenset(g.identity_of[g.cod[a]] for a in self.arrows))

    # -- order calculus --------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.arrows

    @property
    def is_idempotent(self) -> bool:
        return self.arrows <= self.gpd.identity_set

    @property
    def is_unit(self) -> bool:
        return len(self.d().arrows) == self.gpd.n_objects and \
            len(self.r().arrows) == self.gpd.n_objects

    def leq(self, other: "Bisection") -> bool:
        return self.arrows <= other.arrows

    __le__ = leq

    def compatible(self, other: "Bisection") -> bool:
        return (self * other.inv()).is_idempotent and (self.inv() * other).is_idempotent

    def orthogonal(self, other: "Bisection") -> bool:
        return (self * other.inv()).is_zero and (self.inv() * other).is_zero

    def meet(self, other: "Bisection") -> "Bisection":
        return Bisection(self.gpd, self.arrows & other.arrows)

    __and__ = meet

    def union(self, other: "Bisection") -> "Bisection":
        """Raw arrow-set union; raises BisectionError when not compatible."""
        return Bisection(self.gpd, self.arrows | other.arrows)

    def fixpoint(self) -> "Bisection":
        """Largest idempotent below this element (its identity arrows)."""
        return Bisection(self.gpd, self.arrows & self.gpd.identity_set)

    def complement(self) -> "Bisection":
        """Boolean complement, defined for idempotents only."""
        if not self.is_idempotent:
            raise BisectionError(f"complement of non-idempotent {self}")
        return Bisection(self.gpd, self.gpd.identity_set - self.arrows)

    def support(self) -> "Bisection":
        """Support idempotent: complement(fixpoint) * domain idempotent."""
        return self.fixpoint().complement() * self.d()


def bisection_product(g: FiniteGroupoid, a: Bisection, b: Bisection) -> Bisection:
    """Subset product of two local bisections over the same groupoid."""
    if a.gpd is not g or b.gpd is not g:
        if a.gpd != g or b.gpd != g:
            raise BisectionError("bisections belong to a different groupoid")
    return a * b


def all_local_bisections(g: FiniteGroupoid) -> list[Bisection]:
    """Every local bisection, enumerated by choosing at most one arrow per domain."""
    by_dom = [[] for _ in range(g.n_objects)]
    for a in range(g.n_arrows):
        by_dom[g.dom[a]].append(a)
    out = []

    def rec(i, used_cods, chosen):
        if i == g.n_objects:
            out.append(Bisection(g, frozenset(chosen)))
            return
        rec(i + 1, used_cods, chosen)
        for a in by_dom[i]:
            y = g.cod[a]
            if y not in used_cods:
                chosen.append(a)
                used_cods.add(y)
                rec(i + 1, used_cods, chosen)
                chosen.pop()
                used_cods.remove(y)

    rec(0, set(), [])
    return out


def parse_element(g: FiniteGroupoid, text: str) -> Bisection:
    """Parse the ``{1->2, 3->3}`` partial-bijection syntax against a groupoid.

    Each entry must name a unique arrow by its dom/cod labels; groupoids
    with parallel arrows need the JSON id-list form instead.
    """
    text = text.strip()
    if text.startswith("[") :
        return Bisection(g, frozenset(json.loads(text)))
    if not (text.startswith("{") and text.endswith("}")):
        raise BisectionError(f"element syntax must be braced: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return Bisection(g, frozenset())
    label_index = {}
    for x in range(g.n_objects):
        for y in range(g.n_objects):
            hits = [a for a in range(g.n_arrows) if g.dom[a] == x and g.cod[a] == y]
            if len(hits) == 1:
                label_index[(str(g.objects[x]), str(g.objects[y]))] = hits[0]
    arrows = set()
    for part in body.split(","):
        part = part.strip()
        if "->" not in part:
            raise BisectionError(f"bad element entry {part!r}")
        xs, ys = (p.strip() for p in part.split("->", 1))
        key = (xs, ys)
        if key not in label_index:
            raise BisectionError(f"no unique arrow {xs}->{ys} in {g.name}")
        arrows.add(label_index[key])
    return Bisection(g, frozenset(arrows))


# -- groupoid-level properties ------------------------------------------


@dataclass(frozen=True)
class GroupoidProperties:
    """Orbit partition, isotropy and the derived flags of a groupoid.

    Finite groupoids carry the discrete topology, so the interior of the
    isotropy equals the isotropy and ``effective`` coincides with
    ``principal``; ``minimal`` means a single orbit covers all objects.
    """

    orbits: tuple[frozenset, ...]
    isotropy: frozenset[int]
    principal: bool
    effective: bool
    minimal: bool
    connected: bool

    def to_json(self) -> dict:
        return {
            "orbits": [sorted(map(str, o)) for o in self.orbits],
            "isotropy_arrows": sorted(self.isotropy),
            "principal": self.principal,
            "effective": self.effective,
            "minimal": self.minimal,
            "connected": self.connected,
        }


def groupoid_properties(g: FiniteGroupoid) -> GroupoidProperties:
    parent = list(range(g.n_objects))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(g.n_arrows):
        rx, ry = find(g.dom[a]), find(g.cod[a])
        if rx != ry:
            parent[rx] = ry
    groups = {}
    for x in range(g.n_objects):
        groups.setdefault(find(x), set()).add(x)
    orbits = tuple(sorted((frozenset(g.objects[x] for x in grp) for grp in groups.values()),
                          key=lambda o: sorted(map(str, o))))
    isotropy = frozenset(a for a in range(g.n_arrows) if g.dom[a] == g.cod[a])
    principal = isotropy <= g.identity_set
    single = len(orbits) == 1
    return GroupoidProperties(orbits, isotropy, principal, principal, single, single)
