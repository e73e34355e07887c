"""Decision procedures for classes of finite Boolean inverse meet-monoids.

Everything here is an exhaustive check at desk scale: class membership
(fundamental, factorizable, basic, 0-simple, 0-simplifying, purely
infinite, congruence-free), the five operator axioms tying the group of
units to the idempotent algebra, and the construction of a monoid from a
permutation group by saturating restrictions of group elements under
compatible joins.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

from .bim import FinBIM, kb_monoid
from .groupoid import Bisection, pair_groupoid


class NotFundamentalError(ValueError):
    """Operator-axiom checks need a fundamental monoid; carries a witness."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclass
class MonoidProfile:
    """Class membership flags with a witness or counterexample per flag."""

    fundamental: bool
    factorizable: bool
    piecewise_factorizable: bool
    basic: bool
    zero_simple: bool
    zero_simplifying: bool
    purely_infinite: bool
    congruence_free: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        flags = {k: getattr(self, k) for k in (
            "fundamental", "factorizable", "piecewise_factorizable", "basic",
            "zero_simple", "zero_simplifying", "purely_infinite", "congruence_free")}
        return {**flags, "witnesses": {k: str(v) for k, v in self.witnesses.items()}}


def centralizes_idempotents(S: FinBIM, s: Bisection) -> bool:
    return all(s * e == e * s for e in S.idempotents)


def is_fundamental(S: FinBIM) -> tuple[bool, Optional[Bisection]]:
    """True when only idempotents commute with every idempotent."""
    for s in S.elements:
        if not s.is_idempotent and centralizes_idempotents(S, s):
            return False, s
    return True, None


def properly_infinite(S: FinBIM, e: Bisection):
    """A pair x, y doubling e into orthogonal ranges below e, or None.

    Exhaustive search; in a finite monoid no nonzero idempotent admits such
    a doubling, so None is the expected outcome here.
    """
    if e.is_zero:
        raise ValueError("properly infinite is asked of nonzero idempotents")
    if not e.is_idempotent:
        raise ValueError(f"{e} is not an idempotent")
    for x in S.elements:
        if x.d() != e or not x.r().arrows <= e.arrows:
            continue
        rest = e.arrows - x.r().arrows
        for y in S.elements:
            if y.d() == e and y.r().arrows <= rest:
                return x, y
    return None


def _units_downset_closure(S: FinBIM) -> frozenset:
    below_units = {s for s in S.elements if any(s.leq(u) for u in S.units)}
    grown = True
    while grown:
        grown = False
        for a, b in itertools.combinations(sorted(below_units, key=lambda s: s.sort_key), 2):
            if a.compatible(b):
                j = Bisection(S.gpd, a.arrows | b.arrows)
                if j in S.carrier and j not in below_units:
                    below_units.add(j)
                    grown = True
    return frozenset(below_units)


def classify_monoid(S: FinBIM) -> MonoidProfile:
    witnesses: dict = {}

    fundamental, w = is_fundamental(S)
    if w is not None:
        witnesses["fundamental"] = f"non-idempotent centralizer {w}"

    factorizable = True
    for s in S.elements:
        if not any(s.leq(u) for u in S.units):
            factorizable = False
            witnesses["factorizable"] = f"no unit above {s}"
            break

    piecewise = all(any(a.leq(u) for u in S.units) for a in S.atoms)
    closure = _units_downset_closure(S)
    if (closure == S.carrier) != piecewise:
        raise AssertionError("piecewise factorizability checks disagree")
    if not piecewise:
        bad = next(a for a in S.atoms if not any(a.leq(u) for u in S.units))
        witnesses["piecewise_factorizable"] = f"atom {bad} below no unit"

    basic = True
    for s in S.elements:
        rec = S.basic_decompose(s)
        if not rec.ok:
            basic = False
            witnesses["basic"] = f"element {s} has non-split part {rec.witness_part}"
            break

    nonzero_idems = [e for e in S.idempotents if not e.is_zero]
    by_size_desc = sorted(nonzero_idems, key=lambda e: (-len(e.arrows),) + e.sort_key[1:])
    by_size_asc = sorted(nonzero_idems, key=lambda e: e.sort_key)

    zero_simple = True
    for e in by_size_desc:           # big e first fails fast on (1, atom)
        for f in by_size_asc:
            if not any(x.d() == e and x.r().arrows <= f.arrows for x in S.elements):
                zero_simple = False
                witnesses["zero_simple"] = f"no element carries {e} below {f}"
                break
        if not zero_simple:
            break

    zero_simplifying = True
    for e in nonzero_idems:
        for f in nonzero_idems:
            if S.preceq(e, f) is None:
                zero_simplifying = False
                witnesses["zero_simplifying"] = f"no pencil from {e} to {f}"
                break
        if not zero_simplifying:
            break

    purely_infinite = True
    for e in nonzero_idems:
        if properly_infinite(S, e) is None:
            purely_infinite = False
            witnesses["purely_infinite"] = f"idempotent {e} is not properly infinite"
            break

    # idempotents form a Boolean algebra, hence 0-disjunctive, so
    # congruence-freeness reduces to fundamental + 0-simple
    congruence_free = fundamental and zero_simple

    return MonoidProfile(fundamental, factorizable, piecewise, basic,
                         zero_simple, zero_simplifying, purely_infinite,
                         congruence_free, witnesses)


# -- operator axioms for the unit action -----------------------------------


@dataclass(frozen=True)
class AxiomResult:
    passed: bool
    counterexample: Optional[str] = None


@dataclass(frozen=True)
class ArmatureReport:
    """Per-axiom outcome for the triple (units, idempotents, fixpoint)."""

    axioms: dict
    units: tuple
    idempotents: tuple

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.axioms.values())

    def to_json(self) -> dict:
        return {
            "axioms": {k: {"passed": v.passed, "counterexample": v.counterexample}
                       for k, v in self.axioms.items()},
            "units": len(self.units),
            "idempotents": len(self.idempotents),
            "all_passed": self.all_passed,
        }


def armature_check(S: FinBIM) -> ArmatureReport:
    """Check the five operator axioms of the unit action exhaustively."""
    fundamental, w = is_fundamental(S)
    if not fundamental:
        raise NotFundamentalError(
            f"monoid is not fundamental: {w} centralizes the idempotents", w)
    units, idems = S.units, S.idempotents
    phi = {g: g.fixpoint() for g in units}
    axioms = {}

    axioms["O1"] = AxiomResult(phi[S.one] == S.one,
                               None if phi[S.one] == S.one else "fixpoint of 1 is not 1")

    bad = next((g for g in units if phi[g.inv()] != phi[g]), None)
    axioms["O2"] = AxiomResult(bad is None, None if bad is None else f"g={bad}")

    bad = next(((g, h) for g in units for h in units
                if not (phi[g] * phi[h]).leq(phi[g * h])), None)
    axioms["O3"] = AxiomResult(bad is None, None if bad is None else f"g={bad[0]}, h={bad[1]}")

    bad = next(((g, e) for g in units for e in idems
                if not (phi[g] * e).leq(g * e * g.inv())), None)
    axioms["O4"] = AxiomResult(bad is None, None if bad is None else f"g={bad[0]}, e={bad[1]}")

    bad = None
    for g in units:
        for e in idems:
            fixes = all(g * f * g.inv() == f for f in idems if f.leq(e))
            if fixes != e.leq(phi[g]):
                bad = (g, e)
                break
        if bad:
            break
    axioms["O5"] = AxiomResult(bad is None, None if bad is None else f"g={bad[0]}, e={bad[1]}")

    return ArmatureReport(axioms, units, idems)


# -- permutations and the monoid built from a group ------------------------


def parse_permutation(text: str, n: int) -> tuple[int, ...]:
    """Parse cycle notation '(1 2)(3)' or an image list '2,1,3' on 1..n."""
    text = text.strip()
    images = list(range(1, n + 1))
    if text.startswith("("):
        depth_check = text.replace(" ", "")
        if depth_check.count("(") != depth_check.count(")"):
            raise ValueError(f"unbalanced cycle notation {text!r}")
        for cyc in text.replace(")", ")|").split("|"):
            cyc = cyc.strip()
            if not cyc:
                continue
            if not (cyc.startswith("(") and cyc.endswith(")")):
                raise ValueError(f"bad cycle {cyc!r}")
            pts = [int(p) for p in cyc[1:-1].replace(",", " ").split()]
            if any(not 1 <= p <= n for p in pts):
                raise ValueError(f"cycle {cyc!r} leaves 1..{n}")
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle {cyc!r}")
            for i, p in enumerate(pts):
                images[p - 1] = pts[(i + 1) % len(pts)]
    else:
        images = [int(p) for p in text.replace(",", " ").split()]
        if sorted(images) != list(range(1, n + 1)):
            raise ValueError(f"{text!r} is not a permutation of 1..{n}")
    if sorted(images) != list(range(1, n + 1)):
        raise ValueError(f"{text!r} is not injective on 1..{n}")
    return tuple(images)


def permutation_to_cycles(images: tuple[int, ...]) -> str:
    n = len(images)
    seen, cycles = set(), []
    for start in range(1, n + 1):
        if start in seen:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = images[x - 1]
        if len(cyc) > 1:
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "()"


def group_closure(generators: list[tuple[int, ...]], n: int) -> frozenset:
    identity = tuple(range(1, n + 1))
    group = {identity}
    frontier = [identity]
    while frontier:
        g = frontier.pop()
        for h in generators:
            prod = tuple(g[h[i] - 1] for i in range(n))  # g after h
            if prod not in group:
                group.add(prod)
                frontier.append(prod)
    return frozenset(group)


def is_transitive(group: frozenset, n: int) -> bool:
    reach = {1}
    grown = True
    while grown:
        grown = False
        for g in group:
            for x in list(reach):
                if g[x - 1] not in reach:
                    reach.add(g[x - 1])
                    grown = True
    return reach == set(range(1, n + 1))


def monoid_from_group(n: int, generators, max_points: int = 6) -> FinBIM:
    """Partial bijections that agree pointwise with some group element.

    This is the compatible-join saturation of the restrictions of the group:
    a partial bijection p belongs to the carrier exactly when every point of
    its domain is moved the way some element of the generated group moves it.
    """
    if n > max_points:
        raise ValueError(f"size bound exceeded: n={n} > {max_points}")
    perms = [parse_permutation(g, n) if isinstance(g, str) else tuple(g)
             for g in generators]
    for p in perms:
        if sorted(p) != list(range(1, n + 1)):
            raise ValueError(f"{p} is not a permutation of 1..{n}")
    group = group_closure(perms, n)
    gpd = pair_groupoid(n)
    allowed = {(x, g[x - 1]) for g in group for x in range(1, n + 1)}
    from .groupoid import all_local_bisections
    carrier = [b for b in all_local_bisections(gpd)
               if all((gpd.objects[gpd.dom[a]], gpd.objects[gpd.cod[a]]) in allowed
                      for a in b.arrows)]
    name = f"from-group(n={n}, {' '.join(permutation_to_cycles(p) for p in perms) or 'trivial'})"
    S = FinBIM(gpd, carrier, name=name)
    return S


def units_downset_join_closure(S: FinBIM) -> frozenset:
    """Brute-force join saturation of everything below a unit (an oracle)."""
    return _units_downset_closure(S)


def profile_to_json(profile: MonoidProfile) -> str:
    return json.dumps(profile.to_json(), sort_keys=True)
