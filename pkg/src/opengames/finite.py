"""Finite sets, tagged values, exact payoff carriers and total functions.

Values that may appear as elements are closed under three constructors:
plain atoms (strings and ints), pairs (python tuples), and tagged
injections (`Tag`).  The distinguished singleton element is `UNIT`.
Payoff vectors are tuples of `fractions.Fraction`.  Everything is
immutable and hashable, so values can be table keys and set members.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DuplicateElement, EnumerationBound, TypeMismatch

#: Default ceiling for exhaustive enumerations (function spaces, equality tables).
DEFAULT_BOUND = 10**6


class _Unit:
    """The canonical inhabitant of the one-element set."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "*"


UNIT = _Unit()


@dataclass(frozen=True)
class Tag:
    """A value injected into a tagged union; `side` is 0-based."""

    side: int
    value: object

    def __repr__(self):
        return f"{inj_name(self.side)}({self.value!r})"


def inj_name(side: int) -> str:
    return {0: "inl", 1: "inr"}.get(side, f"in{side + 1}")


@dataclass(frozen=True)
class FiniteSet:
    """An ordered finite set of distinct values; construction order is canonical."""

    elements: tuple
    _index: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        idx = {}
        for i, v in enumerate(self.elements):
            if v in idx:
                raise DuplicateElement(f"duplicate element {format_value(v)}")
            idx[v] = i
        object.__setattr__(self, "_index", idx)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, v):
        return v in self._index

    def index(self, v) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise TypeMismatch(f"{format_value(v)} is not an element of {self}") from None

    def __repr__(self):
        return "{" + ", ".join(format_value(v) for v in self.elements) + "}"


def make_set(values) -> FiniteSet:
    return FiniteSet(tuple(values))


UNIT_SET = make_set([UNIT])


def unit_set() -> FiniteSet:
    return UNIT_SET


def product_set(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    """Pairs of elements, a-major lexicographic order."""
    return make_set([(x, y) for x in a for y in b])


def coproduct_set(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    """Tagged disjoint union: all of a under inl, then all of b under inr."""
    return tagged_union([a, b])


def tagged_union(sets) -> FiniteSet:
    out = []
    for j, s in enumerate(sets):
        out.extend(Tag(j, v) for v in s)
    return make_set(out)


def flat_product(sets) -> FiniteSet:
    """n-tuples in lexicographic order; the 0-ary product is {()}."""
    return make_set(itertools.product(*sets))


def nested_product(sets) -> FiniteSet:
    """Left-nested product: 0-ary is the unit set, 1-ary is the set itself."""
    sets = list(sets)
    if not sets:
        return unit_set()
    acc = sets[0]
    for s in sets[1:]:
        acc = product_set(acc, s)
    return acc


def nest_value(values):
    """Collapse a flat tuple into the left-nested shape of `nested_product`."""
    if len(values) == 0:
        return UNIT
    acc = values[0]
    for v in values[1:]:
        acc = (acc, v)
    return acc


def flatten_value(v, arity: int) -> tuple:
    """Inverse of `nest_value` at a known arity."""
    if arity == 0:
        return ()
    out = []
    for _ in range(arity - 1):
        v, last = v
        out.append(last)
    out.append(v)
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# Carriers: the spaces allowed on the backward side of a diset.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Payoff:
    """The payoff space Q^dim; elements are dim-tuples of Fraction."""

    dim: int

    def __repr__(self):
        return f"Q^{self.dim}"


@dataclass(frozen=True)
class PairCarrier:
    fst: object
    snd: object

    def __repr__(self):
        return f"({self.fst!r} x {self.snd!r})"


@dataclass(frozen=True)
class SumCarrier:
    parts: tuple

    def __repr__(self):
        return "(" + " + ".join(repr(p) for p in self.parts) + ")"


def tensor_carrier(a, b):
    """Backward space of a tensor; two finite sets collapse to a concrete one."""
    if isinstance(a, FiniteSet) and isinstance(b, FiniteSet):
        return product_set(a, b)
    return PairCarrier(a, b)


def sum_carrier(parts):
    parts = tuple(parts)
    if all(isinstance(p, FiniteSet) for p in parts):
        return tagged_union(parts)
    return SumCarrier(parts)


def is_enumerable(carrier) -> bool:
    if isinstance(carrier, FiniteSet):
        return True
    if isinstance(carrier, Payoff):
        return carrier.dim == 0
    if isinstance(carrier, PairCarrier):
        return is_enumerable(carrier.fst) and is_enumerable(carrier.snd)
    if isinstance(carrier, SumCarrier):
        return all(is_enumerable(p) for p in carrier.parts)
    raise TypeMismatch(f"not a carrier: {carrier!r}")


def carrier_elements(carrier) -> list:
    """All elements of an enumerable carrier, in canonical order."""
    if isinstance(carrier, FiniteSet):
        return list(carrier)
    if isinstance(carrier, Payoff):
        if carrier.dim == 0:
            return [()]
        raise EnumerationBound(f"{carrier!r} is not enumerable")
    if isinstance(carrier, PairCarrier):
        return [
            (x, y)
            for x in carrier_elements(carrier.fst)
            for y in carrier_elements(carrier.snd)
        ]
    if isinstance(carrier, SumCarrier):
        out = []
        for j, p in enumerate(carrier.parts):
            out.extend(Tag(j, v) for v in carrier_elements(p))
        return out
    raise TypeMismatch(f"not a carrier: {carrier!r}")


def carrier_size(carrier) -> int:
    if isinstance(carrier, FiniteSet):
        return len(carrier)
    if isinstance(carrier, Payoff):
        if carrier.dim == 0:
            return 1
        raise EnumerationBound(f"{carrier!r} is not enumerable")
    if isinstance(carrier, PairCarrier):
        return carrier_size(carrier.fst) * carrier_size(carrier.snd)
    if isinstance(carrier, SumCarrier):
        return sum(carrier_size(p) for p in carrier.parts)
    raise TypeMismatch(f"not a carrier: {carrier!r}")


def carrier_contains(carrier, v) -> bool:
    if isinstance(carrier, FiniteSet):
        return v in carrier
    if isinstance(carrier, Payoff):
        return (
            isinstance(v, tuple)
            and len(v) == carrier.dim
            and all(isinstance(q, Fraction) for q in v)
        )
    if isinstance(carrier, PairCarrier):
        return (
            isinstance(v, tuple)
            and len(v) == 2
            and carrier_contains(carrier.fst, v[0])
            and carrier_contains(carrier.snd, v[1])
        )
    if isinstance(carrier, SumCarrier):
        return (
            isinstance(v, Tag)
            and v.side < len(carrier.parts)
            and carrier_contains(carrier.parts[v.side], v.value)
        )
    raise TypeMismatch(f"not a carrier: {carrier!r}")


def _primes():
    n = 2
    while True:
        for p in range(2, int(n**0.5) + 1):
            if n % p == 0:
                break
        else:
            yield n
        n += 1


def probe_values(carrier) -> list:
    """Finite witness set for extensional comparison of maps out of `carrier`.

    Finite parts are enumerated in full.  A payoff space Q^d contributes the
    zero vector plus d+1 vectors whose coordinates are pairwise distinct
    primes, which separates any two distinct maps built from coordinate
    rearrangements, constants and table lookups.
    """
    if isinstance(carrier, FiniteSet):
        return list(carrier)
    if isinstance(carrier, Payoff):
        d = carrier.dim
        if d == 0:
            return [()]
        gen = _primes()
        vecs = [tuple(Fraction(0) for _ in range(d))]
        for _ in range(d + 1):
            vecs.append(tuple(Fraction(next(gen)) for _ in range(d)))
        return vecs
    if isinstance(carrier, PairCarrier):
        return [(x, y) for x in probe_values(carrier.fst) for y in probe_values(carrier.snd)]
    if isinstance(carrier, SumCarrier):
        out = []
        for j, p in enumerate(carrier.parts):
            out.extend(Tag(j, v) for v in probe_values(p))
        return out
    raise TypeMismatch(f"not a carrier: {carrier!r}")


# ---------------------------------------------------------------------------
# Total functions with extensional equality.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TotalFn:
    """A total function between a finite set and a carrier, stored as a table.

    `values` is aligned with the domain's canonical element order, which makes
    equality extensional for free.
    """

    dom: FiniteSet
    cod: object
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(self.dom):
            raise TypeMismatch("table length does not match domain size")
        for v in self.values:
            if not carrier_contains(self.cod, v):
                raise TypeMismatch(f"value {format_value(v)} outside codomain {self.cod!r}")

    def __call__(self, x):
        return self.values[self.dom.index(x)]

    def __repr__(self):
        return format_fn(self)


def total_fn(dom: FiniteSet, cod, mapping) -> TotalFn:
    """Build a TotalFn from a callable or a dict keyed by domain elements."""
    if callable(mapping) and not isinstance(mapping, dict):
        vals = tuple(mapping(x) for x in dom)
    else:
        vals = tuple(mapping[x] for x in dom)
    return TotalFn(dom, cod, vals)


def identity_fn(s: FiniteSet) -> TotalFn:
    return TotalFn(s, s, tuple(s.elements))


def compose_fn(g: TotalFn, f: TotalFn) -> TotalFn:
    """g after f."""
    if f.cod != g.dom:
        raise TypeMismatch("composition boundary mismatch")
    return TotalFn(f.dom, g.cod, tuple(g(v) for v in f.values))


def const_fn(dom: FiniteSet, cod, value) -> TotalFn:
    return TotalFn(dom, cod, tuple(value for _ in dom))


def enumerate_functions(dom: FiniteSet, cod: FiniteSet, bound: int = DEFAULT_BOUND):
    """All total functions dom -> cod in canonical (codomain-lexicographic) order."""
    count = len(cod) ** len(dom)
    if count > bound:
        raise EnumerationBound(
            f"{len(cod)}^{len(dom)} = {count} functions exceeds bound {bound}"
        )
    return [
        TotalFn(dom, cod, vals)
        for vals in itertools.product(cod.elements, repeat=len(dom))
    ]


def enumerate_continuations(fwd: FiniteSet, backward, bound: int = DEFAULT_BOUND):
    """All total functions fwd -> backward for an enumerable backward carrier."""
    elems = carrier_elements(backward)
    count = len(elems) ** len(fwd)
    if count > bound:
        raise EnumerationBound(
            f"{len(elems)}^{len(fwd)} = {count} continuations exceeds bound {bound}"
        )
    return [
        TotalFn(fwd, backward, vals)
        for vals in itertools.product(elems, repeat=len(fwd))
    ]


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------


def format_value(v) -> str:
    if v is UNIT:
        return "*"
    if isinstance(v, Tag):
        return f"{inj_name(v.side)}({format_value(v.value)})"
    if isinstance(v, tuple):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, TotalFn):
        return format_fn(v)
    return str(v)


def format_fn(f: TotalFn) -> str:
    if len(f.dom) == 1:
        return format_value(f.values[0])
    pairs = ", ".join(
        f"{format_value(x)}->{format_value(y)}" for x, y in zip(f.dom, f.values)
    )
    return "[" + pairs + "]"


def value_to_json(v):
    """JSON-friendly form: pairs become lists, everything else a string."""
    if isinstance(v, tuple) and not (v and all(isinstance(q, Fraction) for q in v)):
        return [value_to_json(x) for x in v]
    return format_value(v)
