"""Lenses over disets: a finite forward set paired with a backward carrier.

A lens from (X, S) to (Y, R) is a view function X -> Y together with an
update X x R -> S.  Views are finite tables.  Updates are symbolic terms
(tables, projections, constants, rearrangement trees and their closures
under composition, tensor and case split) so that payoff-space carriers,
which cannot be tabulated, still compose.  Equality of lenses is always
extensional: enumerable update domains are compared in full, payoff
domains on a finite probe set.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BackwardMismatch, EnumerationBound, TypeMismatch
from .finite import (
    DEFAULT_BOUND,
    FiniteSet,
    Tag,
    TotalFn,
    UNIT,
    UNIT_SET,
    carrier_elements,
    const_fn,
    compose_fn,
    flat_product,
    identity_fn,
    is_enumerable,
    probe_values,
    product_set,
    sum_carrier,
    tagged_union,
    tensor_carrier,
    total_fn,
)


@dataclass(frozen=True)
class Diset:
    """A pair of a finite forward set and a backward carrier."""

    forward: FiniteSet
    backward: object

    def __repr__(self):
        return f"({self.forward!r}, {self.backward!r})"


UNIT_DISET = Diset(UNIT_SET, UNIT_SET)


def unit_diset() -> Diset:
    return UNIT_DISET


def diset_tensor(a: Diset, b: Diset) -> Diset:
    return Diset(product_set(a.forward, b.forward), tensor_carrier(a.backward, b.backward))


def product_diset(disets) -> tuple:
    """Categorical product: forward tuples, backward tagged sum.

    Returns the product diset together with its projection lenses.
    """
    disets = list(disets)
    fwd = flat_product([d.forward for d in disets])
    back = sum_carrier([d.backward for d in disets])
    prod = Diset(fwd, back)
    parts = tuple(d.backward for d in disets)
    projections = []
    for j, d in enumerate(disets):
        view = total_fn(fwd, d.forward, lambda x, j=j: x[j])
        projections.append(Lens(prod, d, view, USecond(MapInj(parts, j))))
    return prod, projections


def pair_lenses(lenses) -> "Lens":
    """Mediating lens into a product diset from a family out of a shared diset."""
    lenses = list(lenses)
    if not lenses:
        raise TypeMismatch("empty family")
    src = lenses[0].dom
    for l in lenses:
        if l.dom != src:
            raise TypeMismatch("product mediator needs a shared domain")
    prod, _ = product_diset([l.cod for l in lenses])
    view = total_fn(src.forward, prod.forward, lambda w: tuple(l.view(w) for l in lenses))
    return Lens(src, prod, view, UCaseR(tuple(l.update for l in lenses)))


def coproduct_diset(disets) -> tuple:
    """Coproduct: forward tagged union over a shared backward carrier.

    Returns the coproduct diset together with its injection lenses.
    """
    disets = list(disets)
    back = disets[0].backward
    for d in disets:
        if d.backward != back:
            raise BackwardMismatch("coproduct requires a shared backward carrier")
    fwd = tagged_union([d.forward for d in disets])
    cop = Diset(fwd, back)
    injections = []
    for j, d in enumerate(disets):
        view = total_fn(d.forward, fwd, lambda x, j=j: Tag(j, x))
        injections.append(Lens(d, cop, view, UProj2()))
    return cop, injections


def copair_lenses(lenses) -> "Lens":
    """Mediating lens out of a coproduct diset from a family into a shared diset."""
    lenses = list(lenses)
    if not lenses:
        raise TypeMismatch("empty family")
    cod = lenses[0].cod
    for l in lenses:
        if l.cod != cod:
            raise TypeMismatch("coproduct mediator needs a shared codomain")
    cop, _ = coproduct_diset([l.dom for l in lenses])
    view = total_fn(cop.forward, cod.forward, lambda t: lenses[t.side].view(t.value))
    return Lens(cop, cod, view, UCase(tuple(l.update for l in lenses)))


# ---------------------------------------------------------------------------
# Symbolic maps between carriers (used on the backward side).
# ---------------------------------------------------------------------------


class Mapping:
    """A map between carriers with a structural description."""

    src = None
    dst = None

    def apply(self, v):
        raise NotImplementedError

    def kinds(self, acc: set):
        acc.add(type(self).__name__)


class MapTable(Mapping):
    """A finite-domain map, backed by a TotalFn."""

    def __init__(self, fn: TotalFn):
        self.fn = fn
        self.src = fn.dom
        self.dst = fn.cod

    def apply(self, v):
        return self.fn(v)


class MapConst(Mapping):
    def __init__(self, src, dst, value):
        self.src = src
        self.dst = dst
        self.value = value

    def apply(self, v):
        return self.value


def leaf(path=(), take=None):
    return ("leaf", tuple(path), take)


def lit(value):
    return ("lit", value)


def pair_t(left, right):
    return ("pair", left, right)


class MapTree(Mapping):
    """A rearrangement: the target is rebuilt from paths into the source value.

    Template nodes are ("pair", l, r), ("lit", value) and
    ("leaf", path, take) where `path` indexes into nested pairs of the
    source and `take` optionally selects payoff coordinates.
    """

    def __init__(self, src, dst, template):
        self.src = src
        self.dst = dst
        self.template = template

    def apply(self, v):
        return _fill(self.template, v)


def _fill(node, v):
    kind = node[0]
    if kind == "pair":
        return (_fill(node[1], v), _fill(node[2], v))
    if kind == "lit":
        return node[1]
    _, path, take = node
    cur = v
    for step in path:
        cur = cur[step]
    if take is None:
        return cur
    return tuple(cur[i] for i in take)


class MapInj(Mapping):
    """Injection of one summand into a tagged sum carrier."""

    def __init__(self, parts, side):
        self.parts = tuple(parts)
        self.side = side
        self.src = self.parts[side]
        self.dst = sum_carrier(self.parts)

    def apply(self, v):
        return Tag(self.side, v)


class MapCase(Mapping):
    """Case split on a tagged sum carrier."""

    def __init__(self, branches):
        self.branches = tuple(branches)
        self.src = sum_carrier([b.src for b in branches])
        if any(b.dst != branches[0].dst for b in branches):
            raise TypeMismatch("case branches must share a codomain")
        self.dst = branches[0].dst

    def apply(self, v):
        return self.branches[v.side].apply(v.value)

    def kinds(self, acc):
        super().kinds(acc)
        for b in self.branches:
            b.kinds(acc)


class MapCompose(Mapping):
    def __init__(self, after: Mapping, before: Mapping):
        self.after = after
        self.before = before
        self.src = before.src
        self.dst = after.dst

    def apply(self, v):
        return self.after.apply(self.before.apply(v))

    def kinds(self, acc):
        super().kinds(acc)
        self.after.kinds(acc)
        self.before.kinds(acc)


def map_identity(carrier) -> Mapping:
    return MapTree(carrier, carrier, leaf())


# ---------------------------------------------------------------------------
# Updates: symbolic functions X x R -> S.
# ---------------------------------------------------------------------------


class Update:
    def apply(self, x, r):
        raise NotImplementedError

    def kinds(self, acc: set):
        acc.add(type(self).__name__)


class UTable(Update):
    """Explicit table keyed by (forward element, backward element)."""

    def __init__(self, entries: dict):
        self.entries = dict(entries)

    def apply(self, x, r):
        return self.entries[(x, r)]


class UProj2(Update):
    def apply(self, x, r):
        return r


class UConst(Update):
    def __init__(self, value):
        self.value = value

    def apply(self, x, r):
        return self.value


class USecond(Update):
    """Apply a carrier map to the backward value, ignoring the forward one."""

    def __init__(self, mapping: Mapping):
        self.mapping = mapping

    def apply(self, x, r):
        return self.mapping.apply(r)

    def kinds(self, acc):
        super().kinds(acc)
        self.mapping.kinds(acc)


class UComp(Update):
    """Update of a composite lens: first's update fed by second's."""

    def __init__(self, inner_update, inner_view, outer_update):
        self.inner_update = inner_update
        self.inner_view = inner_view
        self.outer_update = outer_update

    def apply(self, x, q):
        return self.inner_update.apply(x, self.outer_update.apply(self.inner_view(x), q))

    def kinds(self, acc):
        super().kinds(acc)
        self.inner_update.kinds(acc)
        self.outer_update.kinds(acc)


class UTensor(Update):
    def __init__(self, first, second):
        self.first = first
        self.second = second

    def apply(self, x, r):
        return (self.first.apply(x[0], r[0]), self.second.apply(x[1], r[1]))

    def kinds(self, acc):
        super().kinds(acc)
        self.first.kinds(acc)
        self.second.kinds(acc)


class UCase(Update):
    """Case split on a tagged forward value (coproduct mediators)."""

    def __init__(self, branches):
        self.branches = tuple(branches)

    def apply(self, x, r):
        return self.branches[x.side].apply(x.value, r)

    def kinds(self, acc):
        super().kinds(acc)
        for b in self.branches:
            b.kinds(acc)


class UCaseR(Update):
    """Case split on a tagged backward value (product mediators)."""

    def __init__(self, branches):
        self.branches = tuple(branches)

    def apply(self, x, r):
        return self.branches[r.side].apply(x, r.value)

    def kinds(self, acc):
        super().kinds(acc)
        for b in self.branches:
            b.kinds(acc)


SANCTIONED = {
    "UTable", "UProj2", "UConst", "USecond", "UComp", "UTensor", "UCase", "UCaseR",
    "MapTable", "MapConst", "MapTree", "MapInj", "MapCase", "MapCompose",
}


# ---------------------------------------------------------------------------
# Lenses.
# ---------------------------------------------------------------------------


class Lens:
    """A lens between disets: a view table plus a symbolic update."""

    def __init__(self, dom: Diset, cod: Diset, view: TotalFn, update: Update):
        if view.dom != dom.forward or view.cod != cod.forward:
            raise TypeMismatch("view does not match lens boundary")
        self.dom = dom
        self.cod = cod
        self.view = view
        self.update = update
        self._cont_cache = {}

    def update_at(self, x, r):
        return self.update.apply(x, r)

    def __repr__(self):
        return f"Lens({self.dom!r} -> {self.cod!r})"


def lens_identity(d: Diset) -> Lens:
    return Lens(d, d, identity_fn(d.forward), UProj2())


def lens_compose(first: Lens, second: Lens) -> Lens:
    """Diagrammatic composition: `first` then `second`."""
    if first.cod != second.dom:
        raise TypeMismatch(
            f"cannot compose: {first.cod!r} vs {second.dom!r}"
        )
    view = compose_fn(second.view, first.view)
    update = UComp(first.update, first.view, second.update)
    return Lens(first.dom, second.cod, view, update)


def lens_tensor(a: Lens, b: Lens) -> Lens:
    dom = diset_tensor(a.dom, b.dom)
    cod = diset_tensor(a.cod, b.cod)
    view = total_fn(dom.forward, cod.forward, lambda xy: (a.view(xy[0]), b.view(xy[1])))
    return Lens(dom, cod, view, UTensor(a.update, b.update))


def lens_from_pair(f: TotalFn, g: Mapping) -> Lens:
    """The image of a pair (forward function, backward map) under the evident functor."""
    if isinstance(g, TotalFn):
        g = MapTable(g)
    dom = Diset(f.dom, g.dst)
    cod = Diset(f.cod, g.src)
    return Lens(dom, cod, f, USecond(g))


def counit_lens(x: FiniteSet) -> Lens:
    """The effect (X, X) -> I returning the forward value on the backward pass."""
    view = const_fn(x, UNIT_SET, UNIT)
    return Lens(Diset(x, x), UNIT_DISET, view, UTable({(v, UNIT): v for v in x}))


def cartesian_lift(f: TotalFn, backward) -> Lens:
    """Lift a forward function to a lens that passes the backward value through."""
    return Lens(Diset(f.dom, backward), Diset(f.cod, backward), f, UProj2())


def point_lens(d: Diset, h) -> Lens:
    """The state I -> d selecting history h."""
    view = const_fn(UNIT_SET, d.forward, h)
    return Lens(UNIT_DISET, d, view, UConst(UNIT))


def effect_lens(d: Diset, k: TotalFn) -> Lens:
    """The costate d -> I induced by a continuation."""
    if k.dom != d.forward:
        raise TypeMismatch("continuation domain does not match diset")
    view = const_fn(d.forward, UNIT_SET, UNIT)
    return Lens(d, UNIT_DISET, view, UTable({(x, UNIT): k(x) for x in d.forward}))


def lens_to_point(l: Lens):
    if l.dom != UNIT_DISET:
        raise TypeMismatch("not a point lens")
    return l.view(UNIT)


def lens_to_continuation(l: Lens) -> TotalFn:
    if l.cod != UNIT_DISET:
        raise TypeMismatch("not an effect lens")
    return total_fn(l.dom.forward, l.dom.backward, lambda x: l.update_at(x, UNIT))


def apply_continuation(l: Lens, k: TotalFn) -> TotalFn:
    """Transport a continuation on the codomain back along a lens."""
    cached = l._cont_cache.get(k)
    if cached is not None:
        return cached
    if k.dom != l.cod.forward:
        raise TypeMismatch("continuation does not match lens codomain")
    out = total_fn(l.dom.forward, l.dom.backward, lambda x: l.update_at(x, k(l.view(x))))
    l._cont_cache[k] = out
    return out


# ---------------------------------------------------------------------------
# Structure lenses.
# ---------------------------------------------------------------------------


def assoc_lens(a: Diset, b: Diset, c: Diset) -> Lens:
    """(a (x) b) (x) c -> a (x) (b (x) c)."""
    dom = diset_tensor(diset_tensor(a, b), c)
    cod = diset_tensor(a, diset_tensor(b, c))
    view = total_fn(dom.forward, cod.forward, lambda v: (v[0][0], (v[0][1], v[1])))
    g = MapTree(cod.backward, dom.backward, pair_t(pair_t(leaf([0]), leaf([1, 0])), leaf([1, 1])))
    return Lens(dom, cod, view, USecond(g))


def unassoc_lens(a: Diset, b: Diset, c: Diset) -> Lens:
    dom = diset_tensor(a, diset_tensor(b, c))
    cod = diset_tensor(diset_tensor(a, b), c)
    view = total_fn(dom.forward, cod.forward, lambda v: ((v[0], v[1][0]), v[1][1]))
    g = MapTree(cod.backward, dom.backward, pair_t(leaf([0, 0]), pair_t(leaf([0, 1]), leaf([1]))))
    return Lens(dom, cod, view, USecond(g))


def lunit_lens(a: Diset) -> Lens:
    """I (x) a -> a."""
    dom = diset_tensor(UNIT_DISET, a)
    view = total_fn(dom.forward, a.forward, lambda v: v[1])
    g = MapTree(a.backward, dom.backward, pair_t(lit(UNIT), leaf()))
    return Lens(dom, a, view, USecond(g))


def lunit_inv_lens(a: Diset) -> Lens:
    cod = diset_tensor(UNIT_DISET, a)
    view = total_fn(a.forward, cod.forward, lambda v: (UNIT, v))
    g = MapTree(cod.backward, a.backward, leaf([1]))
    return Lens(a, cod, view, USecond(g))


def runit_lens(a: Diset) -> Lens:
    """a (x) I -> a."""
    dom = diset_tensor(a, UNIT_DISET)
    view = total_fn(dom.forward, a.forward, lambda v: v[0])
    g = MapTree(a.backward, dom.backward, pair_t(leaf(), lit(UNIT)))
    return Lens(dom, a, view, USecond(g))


def runit_inv_lens(a: Diset) -> Lens:
    cod = diset_tensor(a, UNIT_DISET)
    view = total_fn(a.forward, cod.forward, lambda v: (v, UNIT))
    g = MapTree(cod.backward, a.backward, leaf([0]))
    return Lens(a, cod, view, USecond(g))


def swap_lens(a: Diset, b: Diset) -> Lens:
    dom = diset_tensor(a, b)
    cod = diset_tensor(b, a)
    view = total_fn(dom.forward, cod.forward, lambda v: (v[1], v[0]))
    g = MapTree(cod.backward, dom.backward, pair_t(leaf([1]), leaf([0])))
    return Lens(dom, cod, view, USecond(g))


# ---------------------------------------------------------------------------
# Extensional equality.
# ---------------------------------------------------------------------------


def _update_samples(l: Lens, bound: int):
    back = l.cod.backward
    if is_enumerable(back):
        rs = carrier_elements(back)
    else:
        kinds = set()
        l.update.kinds(kinds)
        unknown = kinds - SANCTIONED
        if unknown:
            raise TypeMismatch(f"unsanctioned update constructors: {sorted(unknown)}")
        rs = probe_values(back)
    total = len(l.dom.forward) * len(rs)
    if total > bound:
        raise EnumerationBound(f"{total} update probes exceed bound {bound}")
    return rs


def lenses_equal(a: Lens, b: Lens, bound: int = DEFAULT_BOUND) -> bool:
    if a is b:
        return True
    if a.dom != b.dom or a.cod != b.cod:
        return False
    if a.view != b.view:
        return False
    rs = _update_samples(a, bound)
    for x in a.dom.forward:
        for r in rs:
            if a.update_at(x, r) != b.update_at(x, r):
                return False
    return True


# ---------------------------------------------------------------------------
# Contexts.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """A history (forward element of the source boundary) plus a continuation."""

    history: object
    continuation: TotalFn


def context_map(kappa: Lens, mu: Lens, c: Context) -> Context:
    """Transport a context covariantly in the history, contravariantly in the continuation."""
    return Context(kappa.view(c.history), apply_continuation(mu, c.continuation))


def left_context(right_play: Lens, c: Context, left_dst: Diset) -> Context:
    """Project a tensor context onto the left factor.

    The continuation plugs the right factor's view of the right history into
    the joint continuation and keeps the left component of the backward pair.
    """
    h1, h2 = c.history
    y2 = right_play.view(h2)
    k = total_fn(
        left_dst.forward, left_dst.backward, lambda y: c.continuation((y, y2))[0]
    )
    return Context(h1, k)


def right_context(left_play: Lens, c: Context, right_dst: Diset) -> Context:
    h1, h2 = c.history
    y1 = left_play.view(h1)
    k = total_fn(
        right_dst.forward, right_dst.backward, lambda y: c.continuation((y1, y))[1]
    )
    return Context(h2, k)


def default_continuations(d: Diset, bound: int = DEFAULT_BOUND):
    """All continuations when the backward carrier is enumerable, probes otherwise."""
    import itertools

    if is_enumerable(d.backward):
        vals = carrier_elements(d.backward)
    else:
        vals = probe_values(d.backward)
    count = len(vals) ** len(d.forward)
    if count > bound:
        raise EnumerationBound(f"{count} continuations exceed bound {bound}")
    return [
        TotalFn(d.forward, d.backward, vs)
        for vs in itertools.product(vals, repeat=len(d.forward))
    ]
