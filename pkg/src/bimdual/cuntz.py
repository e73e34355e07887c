"""Prefix-exchange maps on n-ary Cantor space.

An element is a finite list of rules ``u -> v`` acting by ``u xi -> v xi``,
with prefix-free domain words and prefix-free range words; its canonical
form merges complete sibling rule families and sorts by domain word, so two
rule lists denote the same partial map exactly when their canonical forms
are equal.  Idempotents are clopen sets, stored as canonical prefix-free
antichains.  The group of units consists of the elements whose domain and
range codes are complete.

All witness constructions (transporters, doublings, conjugating units,
pencils, piecewise unit decompositions) are deterministic, check their own
postconditions on every call, and can emit re-verifiable certificates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

DEFAULT_DEPTH_CAP = 32


class CuntzError(ValueError):
    """Malformed words, rules, or violated preconditions."""


class DepthCapError(CuntzError):
    """A word grew past the configured depth cap."""


# -- words -------------------------------------------------------------------


def _letters(n: int) -> list[str]:
    if not 2 <= n <= 10:
        raise CuntzError(f"alphabet size {n} out of supported range 2..10")
    return [str(i) for i in range(n)]


def _check_word(w: str, n: int) -> str:
    for ch in w:
        if not ch.isdigit() or int(ch) >= n:
            raise CuntzError(f"word {w!r} uses letters outside 0..{n - 1}")
    return w


def format_word(w: str) -> str:
    return w if w else "e"


def parse_word(text: str, n: int) -> str:
    text = text.strip()
    if text in ("e", "ε"):
        return ""
    return _check_word(text, n)


def _flip_first(w: str, n: int) -> str:
    return str((int(w[0]) + 1) % n) + w[1:]


# -- clopen sets -------------------------------------------------------------


def _absorb(words: Iterable[str]) -> list[str]:
    """Union semantics: drop words that extend another word of the family."""
    ws = sorted(set(words), key=lambda w: (len(w), w))
    out: list[str] = []
    for w in ws:
        if not any(w.startswith(p) for p in out):
            out.append(w)
    return out


def _merge_siblings(words: list[str], n: int) -> list[str]:
    letters = _letters(n)
    ws = set(words)
    changed = True
    while changed:
        changed = False
        parents = {w[:-1] for w in ws if w}
        for p in parents:
            family = [p + a for a in letters]
            if all(c in ws for c in family):
                ws.difference_update(family)
                ws.add(p)
                changed = True
    return sorted(ws)


@dataclass(frozen=True)
class Clopen:
    """A clopen subset of n-ary Cantor space as a canonical antichain."""

    n: int
    words: tuple[str, ...]

    def __post_init__(self):
        for w in self.words:
            _check_word(w, self.n)
        canon = tuple(_merge_siblings(_absorb(self.words), self.n))
        object.__setattr__(self, "words", canon)

    def __str__(self):
        return "{" + ", ".join(format_word(w) for w in self.words) + "}"

    __repr__ = __str__

    @property
    def is_zero(self) -> bool:
        return not self.words

    @property
    def is_one(self) -> bool:
        return self.words == ("",)

    @property
    def size(self) -> int:
        return len(self.words)

    def leq(self, other: "Clopen") -> bool:
        return all(any(w == p or w.startswith(p) for p in other.words)
                   for w in self.words)

    __le__ = leq

    def meet(self, other: "Clopen") -> "Clopen":
        out = []
        for u in self.words:
            for v in other.words:
                if u.startswith(v):
                    out.append(u)
                elif v.startswith(u):
                    out.append(v)
        return Clopen(self.n, tuple(out))

    __and__ = meet

    def join(self, other: "Clopen") -> "Clopen":
        return Clopen(self.n, self.words + other.words)

    __or__ = join

    def complement(self) -> "Clopen":
        out = []
        covered = set(self.words)

        def rec(prefix):
            if prefix in covered:
                return
            if not any(w.startswith(prefix) for w in self.words):
                out.append(prefix)
                return
            for a in _letters(self.n):
                rec(prefix + a)

        rec("")
        return Clopen(self.n, tuple(out))

    def orthogonal(self, other: "Clopen") -> bool:
        return self.meet(other).is_zero


def clopen(words: Iterable[str], n: int) -> Clopen:
    return Clopen(n, tuple(words))


def clopen_zero(n: int) -> Clopen:
    return Clopen(n, ())


def clopen_one(n: int) -> Clopen:
    return Clopen(n, ("",))


def parse_clopen(text: str, n: int) -> Clopen:
    text = text.strip()
    if text in ("0",):
        return clopen_zero(n)
    if text in ("1",):
        return clopen_one(n)
    if not (text.startswith("{") and text.endswith("}")):
        raise CuntzError(f"clopen syntax must be braced: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return clopen_zero(n)
    return Clopen(n, tuple(parse_word(p, n) for p in body.split(",")))


def clopen_ops(e: Clopen, f: Clopen) -> dict:
    """Meet, join, complement of the first argument, and the order bit."""
    if e.n != f.n:
        raise CuntzError("clopen sets over different alphabets")
    return {"meet": e & f, "join": e | f, "complement": e.complement(),
            "leq": e.leq(f)}


# -- elements ----------------------------------------------------------------


def _check_prefix_free(words, kind):
    ws = sorted(words, key=len)
    for i, u in enumerate(ws):
        for v in ws[i + 1:]:
            if v.startswith(u):
                raise CuntzError(f"overlapping {kind} prefixes: {format_word(u)!r} "
                                 f"and {format_word(v)!r}")


def _merge_rule_families(rules: set, n: int) -> set:
    letters = _letters(n)
    changed = True
    while changed:
        changed = False
        parents = {(u[:-1], v[:-1]) for (u, v) in rules if u and v and u[-1] == v[-1]}
        for (pu, pv) in parents:
            family = [(pu + a, pv + a) for a in letters]
            if all(r in rules for r in family):
                rules.difference_update(family)
                rules.add((pu, pv))
                changed = True
    return rules


@dataclass(frozen=True)
class CuntzElement:
    """A prefix-exchange map in canonical form; build via :func:`element`."""

    n: int
    rules: tuple[tuple[str, str], ...]

    def __str__(self):
        if not self.rules:
            return "0"
        return ", ".join(f"{format_word(u)}->{format_word(v)}" for u, v in self.rules)

    __repr__ = __str__

    # -- basic structure ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.rules

    @property
    def is_idempotent(self) -> bool:
        return all(u == v for u, v in self.rules)

    @property
    def is_unit(self) -> bool:
        return self.d_set().is_one and self.r_set().is_one

    def d_set(self) -> Clopen:
        return Clopen(self.n, tuple(u for u, _ in self.rules))

    def r_set(self) -> Clopen:
        return Clopen(self.n, tuple(v for _, v in self.rules))

    def d(self) -> "CuntzElement":
        return from_clopen(self.d_set())

    def r(self) -> "CuntzElement":
        return from_clopen(self.r_set())

    def inv(self) -> "CuntzElement":
        return element([(v, u) for u, v in self.rules], self.n)

    def __mul__(self, other: "CuntzElement") -> "CuntzElement":
        return compose(self, other)

    # -- order calculus ------------------------------------------------------

    def leq(self, other: "CuntzElement") -> bool:
        """Every rule refines a rule of the other element."""
        for u, v in self.rules:
            if not any(u.startswith(p) and v.startswith(q) and u[len(p):] == v[len(q):]
                       for p, q in other.rules):
                return False
        return True

    __le__ = leq

    def compatible(self, other: "CuntzElement") -> bool:
        return (self * other.inv()).is_idempotent and (self.inv() * other).is_idempotent

    def orthogonal(self, other: "CuntzElement") -> bool:
        return (self * other.inv()).is_zero and (self.inv() * other).is_zero

    def fixpoint(self) -> "CuntzElement":
        """Largest idempotent below: exactly the identity rules."""
        return from_clopen(Clopen(self.n, tuple(u for u, v in self.rules if u == v)))

    def fixpoint_set(self) -> Clopen:
        return Clopen(self.n, tuple(u for u, v in self.rules if u == v))

    def support_set(self) -> Clopen:
        return self.fixpoint_set().complement() & self.d_set()

    def support(self) -> "CuntzElement":
        return from_clopen(self.support_set())

    def complement(self) -> "CuntzElement":
        if not self.is_idempotent:
            raise CuntzError(f"complement of non-idempotent {self}")
        return from_clopen(self.d_set().complement())

    def evaluate(self, w: str):
        """Apply to a finite word: mapped prefix, undefined, or needs-longer-input."""
        _check_word(w, self.n)
        for u, v in self.rules:
            if w.startswith(u):
                return EvalOutcome("mapped", v + w[len(u):])
            if u.startswith(w):
                return EvalOutcome("needs-longer-input", None)
        return EvalOutcome("undefined", None)


@dataclass(frozen=True)
class EvalOutcome:
    kind: str
    word: Optional[str]


def element(rules: Iterable[tuple[str, str]], n: int,
            depth_cap: int = DEFAULT_DEPTH_CAP) -> CuntzElement:
    """Canonicalize a raw rule list: merge sibling families, sort, validate."""
    rules = {(str(u), str(v)) for u, v in rules}
    for u, v in rules:
        _check_word(u, n)
        _check_word(v, n)
    _check_prefix_free([u for u, _ in rules], "domain")
    _check_prefix_free([v for _, v in rules], "range")
    rules = _merge_rule_families(set(rules), n)
    depth = max((max(len(u), len(v)) for u, v in rules), default=0)
    if depth > depth_cap:
        raise DepthCapError(f"word depth {depth} exceeds cap {depth_cap}")
    return CuntzElement(n, tuple(sorted(rules)))


def zero(n: int) -> CuntzElement:
    return CuntzElement(n, ())


def one(n: int) -> CuntzElement:
    return CuntzElement(n, (("", ""),))


def from_clopen(e: Clopen) -> CuntzElement:
    return CuntzElement(e.n, tuple((w, w) for w in e.words))


def generator(i: int, n: int) -> CuntzElement:
    """The i-th shift generator, mapping the whole space onto cylinder i."""
    if not 0 <= i < n:
        raise CuntzError(f"generator index {i} out of range")
    return element([("", str(i))], n)


def parse_cuntz_element(text: str, n: int) -> CuntzElement:
    text = text.strip()
    if text == "0" or not text:
        return zero(n)
    rules = []
    for part in text.split(","):
        part = part.strip()
        if "->" not in part:
            raise CuntzError(f"bad rule {part!r}; expected 'u->v'")
        u, v = (parse_word(p, n) for p in part.split("->", 1))
        rules.append((u, v))
    return element(rules, n)


def compose(s: CuntzElement, t: CuntzElement,
            depth_cap: int = DEFAULT_DEPTH_CAP) -> CuntzElement:
    """Product s t: apply t first, resolving prefix overlaps between rules."""
    if s.n != t.n:
        raise CuntzError("elements over different alphabets")
    out = []
    for x, y in t.rules:
        for u, v in s.rules:
            if y.startswith(u):
                w = y[len(u):]
                out.append((x, v + w))
            elif u.startswith(y):
                w = u[len(y):]
                out.append((x + w, v))
    return element(out, s.n, depth_cap)


def join(s: CuntzElement, t: CuntzElement,
         depth_cap: int = DEFAULT_DEPTH_CAP) -> CuntzElement:
    """Least upper bound of a compatible pair."""
    p = s * t.inv()
    if not p.is_idempotent:
        raise CuntzError(f"incompatible join: product {p} is not idempotent")
    q = s.inv() * t
    if not q.is_idempotent:
        raise CuntzError(f"incompatible join: product {q} is not idempotent")
    combined = list(s.rules) + list(t.rules)
    kept = []
    for u, v in combined:
        refines_other = any(
            (u, v) != (p2, q2) and u.startswith(p2) and v.startswith(q2)
            and u[len(p2):] == v[len(q2):]
            for p2, q2 in combined)
        if not refines_other and (u, v) not in kept:
            kept.append((u, v))
    return element(kept, s.n, depth_cap)


def join_all(parts: Iterable[CuntzElement], n: int) -> CuntzElement:
    out = zero(n)
    for p in parts:
        out = join(out, p)
    return out


def meet(s: CuntzElement, t: CuntzElement) -> CuntzElement:
    """Meet via the fixed-point formula fix(s t^-1) t."""
    return (s * t.inv()).fixpoint() * t


@dataclass(frozen=True)
class FixSupportRecord:
    fixpoint: CuntzElement
    support: CuntzElement
    parts: tuple[CuntzElement, CuntzElement]


def fixpoint_and_support(s: CuntzElement) -> FixSupportRecord:
    phi = s.fixpoint()
    sigma = s.support()
    return FixSupportRecord(phi, sigma, (phi, s * sigma))


@dataclass(frozen=True)
class ElementClass:
    is_idempotent: bool
    is_infinitesimal: bool
    is_unit: bool
    is_atom: bool  # the algebra is atomless; nonzero elements always split


def classify(s: CuntzElement) -> ElementClass:
    square_zero = (s * s).is_zero
    dr_zero = s.d_set().meet(s.r_set()).is_zero
    if square_zero != dr_zero:
        raise AssertionError(f"infinitesimal cross-check disagrees on {s}")
    return ElementClass(
        is_idempotent=s.is_idempotent,
        is_infinitesimal=(not s.is_zero) and square_zero,
        is_unit=s.is_unit,
        is_atom=False,
    )


def unit_from_infinitesimal(a: CuntzElement,
                            depth_cap: int = DEFAULT_DEPTH_CAP) -> CuntzElement:
    """The involution a v a^-1 v complement(d v r) above an infinitesimal."""
    if a.is_zero or not (a * a).is_zero:
        raise CuntzError(f"{a} is not an infinitesimal (nonzero with square zero)")
    e = (a.d_set() | a.r_set()).complement()
    u = join(join(a, a.inv(), depth_cap), from_clopen(e), depth_cap)
    _require(u.is_unit, "unit_from_infinitesimal produced a non-unit")
    _require((u * u) == one(a.n), "unit_from_infinitesimal output is not an involution")
    _require(u != one(a.n), "unit_from_infinitesimal output is trivial")
    _require(a.leq(u), "unit_from_infinitesimal output is not above its input")
    return u


def orthogonal_refinement(parts: list[CuntzElement],
                          depth_cap: int = DEFAULT_DEPTH_CAP) -> list[CuntzElement]:
    """Refine a compatible family to an orthogonal one with the same join."""
    parts = list(parts)
    if not parts:
        return []
    n = parts[0].n
    for i, a in enumerate(parts):
        for b in parts[i + 1:]:
            if not a.compatible(b):
                raise CuntzError(f"parts {a} and {b} are incompatible")
    out: list[CuntzElement] = []
    covered = clopen_zero(n)
    for s in parts:
        if s.is_zero:
            continue
        ds = s.d_set()
        new = []
        for t in out:
            for piece in (t * from_clopen(ds.complement()), t * from_clopen(ds)):
                if not piece.is_zero:
                    new.append(piece)
        rest = s * from_clopen(covered.complement())
        if not rest.is_zero:
            new.append(rest)
        out = new
        covered = covered | ds
    return out


@dataclass(frozen=True)
class BasicDecomposition:
    """Split into an idempotent and square-zero single-rule parts, or a witness.

    A rule whose words are comparable fixes exactly one point of its
    cylinder, so no finite refinement separates it into an idempotent and
    square-zero parts; such a rule is returned as the witness.
    """

    ok: bool
    idempotent: Optional[CuntzElement] = None
    infinitesimals: tuple[CuntzElement, ...] = ()
    witness_rule: Optional[tuple[str, str]] = None


def basic_decompose(s: CuntzElement) -> BasicDecomposition:
    idem_words = []
    infs = []
    for u, v in s.rules:
        if u == v:
            idem_words.append(u)
        elif u.startswith(v) or v.startswith(u):
            return BasicDecomposition(ok=False, witness_rule=(u, v))
        else:
            infs.append(element([(u, v)], s.n))
    return BasicDecomposition(ok=True,
                              idempotent=from_clopen(Clopen(s.n, tuple(idem_words))),
                              infinitesimals=tuple(infs))


# -- deterministic witness constructions -------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise CuntzError(f"postcondition failed: {message}")


def _target_words(base: str, count: int, n: int) -> list[str]:
    """count pairwise-disjoint cylinders below base, first in lex order."""
    depth = 0
    while n ** depth < count:
        depth += 1
    words = []
    for i in range(count):
        digits_ = []
        x = i
        for _ in range(depth):
            digits_.append(str(x % n))
            x //= n
        words.append(base + "".join(reversed(digits_)))
    return words


def clopen_iso(e: Clopen, f: Clopen) -> CuntzElement:
    """A deterministic element with domain exactly e and range exactly f.

    Splits the lexicographically last cylinder of the smaller antichain
    until the sizes agree, then pairs cylinders in sorted order.  Possible
    exactly when the antichain sizes are congruent mod n-1.
    """
    if e.n != f.n:
        raise CuntzError("clopen sets over different alphabets")
    n = e.n
    if e.is_zero or f.is_zero:
        raise CuntzError("clopen_iso needs nonzero clopen sets")
    if (e.size - f.size) % (n - 1) != 0:
        raise CuntzError(
            f"no isomorphism: antichain sizes {e.size} and {f.size} differ "
            f"mod {n - 1} (residues {e.size % (n - 1)} and {f.size % (n - 1)})")
    a, b = list(e.words), list(f.words)
    while len(a) != len(b):
        side = a if len(a) < len(b) else b
        last = side.pop()
        side.extend(last + l for l in _letters(n))
        side.sort()
    x = element(list(zip(sorted(a), sorted(b))), n)
    _require(x.d_set() == e, "clopen_iso domain mismatch")
    _require(x.r_set() == f, "clopen_iso range mismatch")
    return x


def transporter(e: Clopen, f: Clopen) -> CuntzElement:
    """An element with domain e and range a family of cylinders inside f's
    first cylinder; sizes are unconstrained, unlike clopen_iso."""
    n = e.n
    if e.is_zero or f.is_zero:
        raise CuntzError("transporter needs nonzero clopen sets")
    base = f.words[0] + "0"
    targets = _target_words(base, e.size, n)
    x = element(list(zip(e.words, targets)), n)
    _require(x.d_set() == e, "transporter domain mismatch")
    _require(x.r_set().leq(Clopen(n, (f.words[0],))), "transporter range escapes f")
    return x


def infinitesimal_in(e: Clopen) -> CuntzElement:
    """A square-zero element supported inside e (first cylinder, 0 vs 1)."""
    if e.is_zero:
        raise CuntzError("no infinitesimal below zero")
    w = e.words[0]
    a = element([(w + "0", w + "1")], e.n)
    _require((a * a).is_zero, "infinitesimal_in output has nonzero square")
    _require(a.d_set().leq(e) and a.r_set().leq(e), "infinitesimal_in escapes e")
    _require(a.d_set().orthogonal(a.r_set()), "infinitesimal_in domain meets range")
    return a


def restricted_product_infinitesimals(e: Clopen) -> tuple[CuntzElement, CuntzElement]:
    """Infinitesimals a, b inside e whose product ab is a restricted product
    and again an infinitesimal."""
    x = infinitesimal_in(e)
    b = infinitesimal_in(x.d_set())
    a = x * from_clopen(b.r_set())
    _require(a.d_set() == b.r_set(), "product is not restricted")
    _require((a * a).is_zero and not a.is_zero, "a is not an infinitesimal")
    ab = a * b
    _require((ab * ab).is_zero and not ab.is_zero, "ab is not an infinitesimal")
    return a, b


def properly_infinite_witness(e: Clopen) -> tuple[CuntzElement, CuntzElement]:
    """x, y doubling e: common domain e, orthogonal ranges inside e."""
    n = e.n
    if e.is_zero:
        raise CuntzError("zero idempotent cannot be doubled")
    w = e.words[0]

    def into(target: Clopen) -> CuntzElement:
        if (e.size - target.size) % (n - 1) == 0:
            return clopen_iso(e, target)
        return transporter(e, target)

    x = into(Clopen(n, (w + "0",)))
    y = into(Clopen(n, (w + "1",)))
    _require(x.d_set() == e and y.d_set() == e, "doubling domain mismatch")
    _require(x.r_set().orthogonal(y.r_set()), "doubling ranges overlap")
    _require((x.r_set() | y.r_set()).leq(e), "doubling ranges escape e")
    return x, y


def conjugating_unit(e: Clopen, f: Clopen,
                     depth_cap: int = DEFAULT_DEPTH_CAP) -> CuntzElement:
    """A unit g with g e g^-1 below f; needs e != 1 and f != 0."""
    n = e.n
    if e.is_one:
        raise CuntzError("no unit can shrink the top idempotent")
    if f.is_zero:
        raise CuntzError("cannot conjugate into the zero idempotent")
    if e.is_zero:
        return one(n)

    def swap_unit(e1: Clopen, target: Clopen) -> CuntzElement:
        # target is inside the complement of e1, so the transported copy is
        # orthogonal to e1 and the two-sided swap extends to a unit
        a = transporter(e1, target)
        rest = (a.d_set() | a.r_set()).complement()
        return join(join(a, a.inv(), depth_cap), from_clopen(rest), depth_cap)

    fe = f & e.complement()
    if not fe.is_zero:
        g = swap_unit(e, fe)
    else:
        u = swap_unit(e, e.complement())
        v = swap_unit(e.complement(), f & e)
        g = compose(v, u, depth_cap)
    _require(g.is_unit, "conjugating unit is not a unit")
    conj = g * from_clopen(e) * g.inv()
    _require(conj.d_set().leq(f), "conjugate does not sit below the target")
    return g


@dataclass(frozen=True)
class CuntzPencil:
    """Elements with orthogonal domains joining to the source, ranges
    pairwise disjoint inside the target."""

    elements: tuple[CuntzElement, ...]
    source: Clopen
    target: Clopen

    def __post_init__(self):
        n = self.source.n
        dom = clopen_zero(n)
        ran = clopen_zero(n)
        for i, x in enumerate(self.elements):
            if not dom.meet(x.d_set()).is_zero:
                raise CuntzError("pencil domains are not orthogonal")
            if not ran.meet(x.r_set()).is_zero:
                raise CuntzError("pencil ranges are not disjoint")
            dom = dom | x.d_set()
            ran = ran | x.r_set()
        if dom != self.source:
            raise CuntzError("pencil domains do not join to the source")
        if not ran.leq(self.target):
            raise CuntzError("pencil ranges escape the target")


def orthogonal_pencil(e: Clopen, f: Clopen) -> CuntzPencil:
    """One single-rule element per cylinder of e, into disjoint cylinders of f."""
    n = e.n
    if e.is_zero or f.is_zero:
        raise CuntzError("orthogonal_pencil needs nonzero clopen sets")
    if e.size == 1 and e.leq(f):
        return CuntzPencil((element([(e.words[0], e.words[0])], n),), e, f)
    base = f.words[0] + "0"
    targets = _target_words(base, e.size, n)
    xs = tuple(element([(w, t)], n) for w, t in zip(e.words, targets))
    return CuntzPencil(xs, e, f)


def transport_via_doubling(e: Clopen, f: Clopen,
                           depth_cap: int = DEFAULT_DEPTH_CAP) -> CuntzElement:
    """An element w with d(w) = e and r(w) <= f, assembled from an
    orthogonal pencil and an iterated doubling of f."""
    pencil = orthogonal_pencil(e, f)
    a, b = properly_infinite_witness(f)
    parts = []
    power = one(e.n)
    for x in pencil.elements:
        v = compose(power, a, depth_cap)  # b^(i-1) a, domain f, disjoint ranges
        parts.append(compose(v, x, depth_cap))
        power = compose(power, b, depth_cap)
    w = join_all(parts, e.n)
    _require(w.d_set() == e, "transport domain mismatch")
    _require(w.r_set().leq(f), "transport range escapes the target")
    return w


def piecewise_unit_decomposition(s: CuntzElement,
                                 depth_cap: int = DEFAULT_DEPTH_CAP) -> list[tuple[CuntzElement, CuntzElement]]:
    """Pieces of s, each below a unit, joining back to s.

    Units come from extending each single-rule piece by a deterministic
    isomorphism between the complements of its domain and range; rules are
    pre-split so both complements are nonzero.
    """
    if s.is_zero:
        raise CuntzError("zero has no piecewise unit decomposition")
    n = s.n
    if s.is_unit:
        return [(s, s)]
    rules = []
    for u, v in s.rules:
        if u == "" or v == "":
            rules.extend((u + a, v + a) for a in _letters(n))
        else:
            rules.append((u, v))
    out = []
    rejoin = zero(n)
    for u, v in rules:
        piece = element([(u, v)], n)
        ext = clopen_iso(Clopen(n, (u,)).complement(), Clopen(n, (v,)).complement())
        g = join(piece, ext, depth_cap)
        _require(g.is_unit, "piecewise extension is not a unit")
        _require(piece.leq(g), "piece does not sit below its unit")
        out.append((piece, g))
        rejoin = join(rejoin, piece, depth_cap)
    _require(rejoin == s, "pieces do not recompose the element")
    return out


# -- eventually periodic points ----------------------------------------------


@dataclass(frozen=True)
class EPPoint:
    """An eventually periodic point prefix . cycle cycle cycle ..."""

    prefix: str
    cycle: str

    def head(self, k: int) -> str:
        if k <= len(self.prefix):
            return self.prefix[:k]
        reps = (k - len(self.prefix)) // len(self.cycle) + 1
        return (self.prefix + self.cycle * reps)[:k]

    def drop(self, k: int) -> "EPPoint":
        if k <= len(self.prefix):
            return eppoint(self.prefix[k:], self.cycle)
        r = (k - len(self.prefix)) % len(self.cycle)
        return eppoint("", self.cycle[r:] + self.cycle[:r])

    def __str__(self):
        return f"{self.prefix}({self.cycle})*"

    __repr__ = __str__


def eppoint(prefix: str, cycle: str) -> EPPoint:
    """Canonical form: primitive cycle, rolled back into the prefix."""
    if not cycle:
        raise CuntzError("cycle must be nonempty")
    for d in range(1, len(cycle) + 1):
        if len(cycle) % d == 0 and cycle == cycle[:d] * (len(cycle) // d):
            cycle = cycle[:d]
            break
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1] + cycle[:-1]
    return EPPoint(prefix, cycle)


def apply_to_point(s: CuntzElement, pt: EPPoint) -> Optional[EPPoint]:
    for u, v in s.rules:
        if pt.head(len(u)) == u:
            tail = pt.drop(len(u))
            return eppoint(v + tail.prefix, tail.cycle)
    return None


# -- moved-point reflection ----------------------------------------------------


@dataclass(frozen=True)
class MovedPointReport:
    ok: bool
    rules: tuple[dict, ...]
    sigma_cylinders: tuple[dict, ...]
    fixed_samples: int

    def to_json(self) -> dict:
        return {"ok": self.ok, "rules": list(self.rules),
                "sigma_cylinders": list(self.sigma_cylinders),
                "fixed_samples": self.fixed_samples}


def moved_point_check(g: CuntzElement, depth: int = 4,
                      depth_cap: int = DEFAULT_DEPTH_CAP) -> MovedPointReport:
    """Check the support of a unit against explicit moved points.

    Every non-identity rule must sit inside the support clopen and exhibit
    an eventually periodic point it moves; every cylinder of the support
    must contain such a witness; identity rules are sampled to the given
    depth and must fix every sampled point.
    """
    if not g.is_unit:
        raise CuntzError(f"moved_point_check needs a unit, got {g}")
    if depth > depth_cap:
        raise DepthCapError(f"sampling depth {depth} exceeds cap {depth_cap}")
    n = g.n
    sigma = g.support_set()
    rule_entries = []
    witnesses = []
    ok = True
    for u, v in g.rules:
        if u == v:
            continue
        inside = Clopen(n, (u,)).leq(sigma) and Clopen(n, (v,)).leq(sigma)
        if v.startswith(u):
            pt = eppoint(u + _flip_first(v[len(u):], n), "0")
        elif u.startswith(v):
            pt = eppoint(u + _flip_first(u[len(v):], n), "0")
        else:
            pt = eppoint(u, "0")
        image = apply_to_point(g, pt)
        moved = image is not None and image != pt
        ok = ok and inside and moved
        witnesses.append((u, pt))
        rule_entries.append({"rule": f"{format_word(u)}->{format_word(v)}",
                             "inside_support": inside,
                             "point": str(pt), "image": str(image), "moved": moved})
    sigma_entries = []
    for c in sigma.words:
        hit = next((str(pt) for u, pt in witnesses if u.startswith(c)), None)
        ok = ok and hit is not None
        sigma_entries.append({"cylinder": format_word(c), "moved_point": hit})
    fixed = 0
    for u, v in g.rules:
        if u != v:
            continue
        tails = [""]
        for _ in range(depth):
            tails = [t + a for t in tails for a in _letters(n)]
            for t in tails:
                pt = eppoint(u + t, "0")
                image = apply_to_point(g, pt)
                if image != pt:
                    ok = False
                fixed += 1
    return MovedPointReport(ok, tuple(rule_entries), tuple(sigma_entries), fixed)


def centralizes_cylinders(s: CuntzElement, depth: Optional[int] = None) -> bool:
    """Commutation with every cylinder idempotent up to a depth.

    The default depth is the canonical depth of the element's own rules.
    Commuting there without being idempotent would refute bounded
    fundamentality; this is a bounded test, not a proof.
    """
    n = s.n
    if depth is None:
        depth = max((max(len(u), len(v)) for u, v in s.rules), default=0)
    words = [""]
    for _ in range(depth):
        words = [w + a for w in words for a in _letters(n)]
    for k in range(depth + 1):
        for w in {w[:k] for w in words} if words else {""}:
            e = from_clopen(Clopen(n, (w,)))
            if s * e != e * s:
                return False
    return True


# -- certificates ---------------------------------------------------------------


def _serialize(value):
    if isinstance(value, CuntzElement):
        return str(value)
    if isinstance(value, Clopen):
        return str(value)
    if isinstance(value, CuntzPencil):
        return [str(x) for x in value.elements]
    if isinstance(value, tuple):
        return [_serialize(v) for v in value]
    if isinstance(value, list):
        return [_serialize(v) for v in value]
    raise TypeError(f"cannot serialize {value!r}")


def _post_transporter(n, args, out):
    e, f = args
    return {"domain_is_e": out.d_set() == e,
            "range_below_f": out.r_set().leq(f),
            "range_in_first_cylinder": out.r_set().leq(Clopen(n, (f.words[0],)))}


def _post_clopen_iso(n, args, out):
    e, f = args
    return {"domain_is_e": out.d_set() == e, "range_is_f": out.r_set() == f}


def _post_infinitesimal(n, args, out):
    (e,) = args
    return {"square_zero": (out * out).is_zero and not out.is_zero,
            "inside_e": out.d_set().leq(e) and out.r_set().leq(e),
            "domain_range_disjoint": out.d_set().orthogonal(out.r_set())}


def _post_properly_infinite(n, args, out):
    (e,) = args
    x, y = out
    return {"common_domain": x.d_set() == e and y.d_set() == e,
            "ranges_orthogonal": x.r_set().orthogonal(y.r_set()),
            "ranges_below_e": (x.r_set() | y.r_set()).leq(e)}


def _post_conjugating_unit(n, args, out):
    e, f = args
    conj = out * from_clopen(e) * out.inv()
    return {"is_unit": out.is_unit, "conjugate_below_f": conj.d_set().leq(f)}


def _post_pencil(n, args, out):
    e, f = args
    dom = clopen_zero(n)
    orth = True
    for x in out.elements:
        orth = orth and dom.meet(x.d_set()).is_zero
        dom = dom | x.d_set()
    return {"domains_orthogonal": orth, "domains_join_to_e": dom == e,
            "ranges_below_f": all(x.r_set().leq(f) for x in out.elements)}


def _post_piecewise(n, args, out):
    (s,) = args
    pieces = [p for p, _ in out]
    units = [u for _, u in out]
    compat = all(pieces[i].compatible(pieces[j])
                 for i in range(len(pieces)) for j in range(i + 1, len(pieces)))
    return {"pieces_compatible": compat,
            "pieces_rejoin": join_all(pieces, n) == s,
            "pieces_below_units": all(p.leq(u) for p, u in out),
            "extensions_are_units": all(u.is_unit for u in units)}


def _post_unit_from_infinitesimal(n, args, out):
    (a,) = args
    return {"is_unit": out.is_unit,
            "involution": (out * out) == one(n),
            "nontrivial": out != one(n),
            "above_input": a.leq(out)}


def _post_transport_via_doubling(n, args, out):
    e, f = args
    return {"domain_is_e": out.d_set() == e, "range_below_f": out.r_set().leq(f)}


WITNESS_OPS = {
    "transporter": (("clopen", "clopen"), transporter, _post_transporter),
    "clopen-iso": (("clopen", "clopen"), clopen_iso, _post_clopen_iso),
    "infinitesimal-in": (("clopen",), infinitesimal_in, _post_infinitesimal),
    "properly-infinite": (("clopen",), properly_infinite_witness, _post_properly_infinite),
    "conrade-unit": (("clopen", "clopen"), conjugating_unit, _post_conjugating_unit),
    "orthogonal-pencil": (("clopen", "clopen"), orthogonal_pencil, _post_pencil),
    "piecewise": (("element",), piecewise_unit_decomposition, _post_piecewise),
    "unit-from-infinitesimal": (("element",), unit_from_infinitesimal,
                                _post_unit_from_infinitesimal),
    "transport-via-doubling": (("clopen", "clopen"), transport_via_doubling,
                               _post_transport_via_doubling),
}


def _parse_arg(kind: str, text: str, n: int):
    return parse_clopen(text, n) if kind == "clopen" else parse_cuntz_element(text, n)


def certify(op: str, n: int, *raw_args: str) -> dict:
    """Run a witness operation and wrap it in a re-checkable certificate."""
    if op not in WITNESS_OPS:
        raise CuntzError(f"unknown witness operation {op!r}")
    kinds, fn, post = WITNESS_OPS[op]
    if len(raw_args) != len(kinds):
        raise CuntzError(f"{op} expects {len(kinds)} arguments")
    args = [_parse_arg(k, a, n) for k, a in zip(kinds, raw_args)]
    out = fn(*args)
    posts = post(n, args, out)
    return {
        "op": op,
        "n": n,
        "inputs": [str(a) for a in args],
        "output": _serialize(out),
        "postconditions": posts,
        "verified": all(posts.values()),
    }


def verify_certificate(cert: dict) -> bool:
    """Re-run the operation in a certificate and re-check its postconditions."""
    op, n = cert["op"], cert["n"]
    kinds, fn, post = WITNESS_OPS[op]
    args = [_parse_arg(k, a, n) for k, a in zip(kinds, cert["inputs"])]
    out = fn(*args)
    if _serialize(out) != cert["output"]:
        return False
    posts = post(n, args, out)
    return all(posts.values()) and cert.get("verified", False)


def certificate_json(cert: dict, human: bool = False) -> str:
    return json.dumps(cert, sort_keys=True, indent=2 if human else None)
