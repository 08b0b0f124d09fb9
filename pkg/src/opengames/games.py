"""Open games: lens-valued plays indexed by strategies plus a best-response relation.

A game from diset Phi to diset Psi carries a finite strategy set, a play
lens Phi -> Psi for each strategy, and a boolean best-response evaluator
over contexts (history, continuation).  Composites evaluate best
responses lazily by recursion on structure, with memoization; their
strategy sets are products whose elements mirror the expression shape.
"""

from __future__ import annotations

from .errors import EmptyChoiceSet, TypeMismatch
from .finite import (
    DEFAULT_BOUND,
    FiniteSet,
    Payoff,
    Tag,
    TotalFn,
    UNIT,
    UNIT_SET,
    enumerate_functions,
    flat_product,
    make_set,
    nested_product,
    product_set,
    tagged_union,
    total_fn,
)
from .lenses import (
    Context,
    Diset,
    Lens,
    MapTree,
    UConst,
    UProj2,
    USecond,
    apply_continuation,
    copair_lenses,
    diset_tensor,
    leaf,
    left_context,
    lens_compose,
    lens_identity,
    lens_tensor,
    lit,
    pair_t,
    right_context,
    effect_lens,
)


class OpenGame:
    def __init__(self, src: Diset, dst: Diset, strategies: FiniteSet, play, best, label=""):
        self.src = src
        self.dst = dst
        self.strategies = strategies
        self._play = play
        self._best = best
        self.label = label
        self._play_cache = {}
        self._best_cache = {}

    def play(self, sigma) -> Lens:
        lens = self._play_cache.get(sigma)
        if lens is None:
            if sigma not in self.strategies:
                raise TypeMismatch(f"not a strategy of {self.label or 'game'}: {sigma!r}")
            lens = self._play(sigma)
            self._play_cache[sigma] = lens
        return lens

    def best(self, history, continuation, sigma, deviation) -> bool:
        key = (history, continuation, sigma, deviation)
        hit = self._best_cache.get(key)
        if hit is None:
            hit = self._best(history, continuation, sigma, deviation)
            self._best_cache[key] = hit
        return hit

    def __repr__(self):
        name = self.label or "OpenGame"
        return f"{name}({self.src!r} -|> {self.dst!r}, |S|={len(self.strategies)})"


def best_response(game: OpenGame, c: Context, sigma, deviation) -> bool:
    """Public evaluator with boundary checks."""
    if c.history not in game.src.forward:
        raise TypeMismatch("history outside the source boundary")
    if c.continuation.dom != game.dst.forward:
        raise TypeMismatch("continuation does not match the target boundary")
    return game.best(c.history, c.continuation, sigma, deviation)


def game_states(game: OpenGame, k: TotalFn):
    """Strategies that best-respond to themselves at every history, in canonical order."""
    return [
        s
        for s in game.strategies
        if all(game.best(h, k, s, s) for h in game.src.forward)
    ]


def unit_game(d: Diset) -> OpenGame:
    return OpenGame(
        d, d, UNIT_SET, lambda _: lens_identity(d), lambda *args: True, label="unit"
    )


def trivial_game(lens: Lens, label="trivial") -> OpenGame:
    """A strategically trivial game: one strategy, always best."""
    return OpenGame(
        lens.dom, lens.cod, UNIT_SET, lambda _: lens, lambda *args: True, label=label
    )


def utility_game(payout: TotalFn, label="utility") -> OpenGame:
    """Close off a boundary with an internal continuation given by a payoff table."""
    d = Diset(payout.dom, payout.cod)
    return trivial_game(effect_lens(d, payout), label=label)


def decision(x: FiniteSet, y: FiniteSet, bound: int = DEFAULT_BOUND) -> OpenGame:
    """A single maximizing decision (X, 1) -|> (Y, Q^1) over all functions X -> Y."""
    if len(y) == 0:
        raise EmptyChoiceSet("decision needs a nonempty choice set")
    strategies = make_set(enumerate_functions(x, y, bound))
    src = Diset(x, UNIT_SET)
    dst = Diset(y, Payoff(1))

    def play(s):
        return Lens(src, dst, s, UConst(UNIT))

    def best(h, k, s, s2):
        chosen = k(s2(h))
        return all(chosen >= k(alt) for alt in y)

    return OpenGame(src, dst, strategies, play, best, label="decision")


def copy_decision(sets, bound: int = DEFAULT_BOUND) -> OpenGame:
    """A decision that republishes its inputs: history in, history plus choice out.

    Stage n of a sequential protocol: sees the first n-1 moves, plays the
    n-th, passes all earlier payoff coordinates through and maximizes its own.
    """
    sets = list(sets)
    n = len(sets)
    if n == 0:
        raise EmptyChoiceSet("copy decision needs at least one stage")
    last = sets[-1]
    if len(last) == 0:
        raise EmptyChoiceSet("copy decision needs a nonempty choice set")
    hist = nested_product(sets[:-1])
    out = nested_product(sets)
    src = Diset(hist, Payoff(n - 1))
    dst = Diset(out, Payoff(n))
    strategies = make_set(enumerate_functions(hist, last, bound))
    drop = USecond(MapTree(Payoff(n), Payoff(n - 1), leaf((), take=tuple(range(n - 1)))))

    def play(s):
        if n == 1:
            view = s
        else:
            view = total_fn(hist, out, lambda x: (x, s(x)))
        return Lens(src, dst, view, drop)

    def best(h, k, s, s2):
        def extend(choice):
            return choice if n == 1 else (h, choice)

        own = k(extend(s2(h)))[n - 1]
        return all(own >= k(extend(alt))[n - 1] for alt in last)

    return OpenGame(src, dst, strategies, play, best, label="copy-decision")


def seq_compose(g: OpenGame, h: OpenGame) -> OpenGame:
    """Play g, then h; strategy pairs (sigma_g, sigma_h)."""
    if g.dst != h.src:
        raise TypeMismatch(f"cannot sequence: {g.dst!r} vs {h.src!r}")
    strategies = product_set(g.strategies, h.strategies)

    def play(st):
        s, t = st
        return lens_compose(g.play(s), h.play(t))

    def best(hist, k, st, st2):
        (s, t), (s2, t2) = st, st2
        k_inner = apply_continuation(h.play(t), k)
        if not g.best(hist, k_inner, s, s2):
            return False
        return h.best(g.play(s).view(hist), k, t, t2)

    return OpenGame(g.src, h.dst, strategies, play, best, label="seq")


def tensor_games(g1: OpenGame, g2: OpenGame) -> OpenGame:
    src = diset_tensor(g1.src, g2.src)
    dst = diset_tensor(g1.dst, g2.dst)
    strategies = product_set(g1.strategies, g2.strategies)

    def play(ss):
        return lens_tensor(g1.play(ss[0]), g2.play(ss[1]))

    def best(hist, k, ss, dd):
        (s1, s2), (d1, d2) = ss, dd
        c = Context(hist, k)
        cl = left_context(g2.play(s2), c, g1.dst)
        if not g1.best(cl.history, cl.continuation, s1, d1):
            return False
        cr = right_context(g1.play(s1), c, g2.dst)
        return g2.best(cr.history, cr.continuation, s2, d2)

    return OpenGame(src, dst, strategies, play, best, label="tensor")


def product_games(games) -> OpenGame:
    """Product of games over shared backward carriers: tagged choice of factor."""
    games = list(games)
    if not games:
        raise TypeMismatch("empty product family")
    s_back = games[0].src.backward
    r_back = games[0].dst.backward
    for g in games:
        if g.src.backward != s_back or g.dst.backward != r_back:
            raise TypeMismatch("product factors must share backward carriers")
    src = Diset(tagged_union([g.src.forward for g in games]), s_back)
    dst = Diset(tagged_union([g.dst.forward for g in games]), r_back)
    strategies = flat_product([g.strategies for g in games])
    injections = [
        Lens(
            g.dst,
            dst,
            total_fn(g.dst.forward, dst.forward, lambda y, j=j: Tag(j, y)),
            UProj2(),
        )
        for j, g in enumerate(games)
    ]

    def play(sigma):
        return copair_lenses(
            [lens_compose(g.play(sigma[j]), injections[j]) for j, g in enumerate(games)]
        )

    def best(hist, k, sigma, dev):
        j = hist.side
        g = games[j]
        kj = total_fn(g.dst.forward, r_back, lambda y: k(Tag(j, y)))
        return g.best(hist.value, kj, sigma[j], dev[j])

    return OpenGame(src, dst, strategies, play, best, label="product")


def reindex_source(g: OpenGame, lens: Lens) -> OpenGame:
    """Pull the source boundary back along a lens into g's source."""
    if lens.cod != g.src:
        raise TypeMismatch("reindexing lens must land in the source boundary")
    return OpenGame(
        lens.dom,
        g.dst,
        g.strategies,
        lambda s: lens_compose(lens, g.play(s)),
        lambda h, k, s, s2: g.best(lens.view(h), k, s, s2),
        label=g.label,
    )


def reindex_target(g: OpenGame, lens: Lens) -> OpenGame:
    """Push the target boundary forward along a lens out of g's target."""
    if lens.dom != g.dst:
        raise TypeMismatch("reindexing lens must start at the target boundary")
    return OpenGame(
        g.src,
        lens.cod,
        g.strategies,
        lambda s: lens_compose(g.play(s), lens),
        lambda h, k, s, s2: g.best(h, apply_continuation(lens, k), s, s2),
        label=g.label,
    )


def reindex_strategies(g: OpenGame, f: TotalFn) -> OpenGame:
    """Pull the strategy set back along a function into g's strategies."""
    if f.cod != g.strategies:
        raise TypeMismatch("reindexing function must land in the strategy set")
    return OpenGame(
        g.src,
        g.dst,
        f.dom,
        lambda s: g.play(f(s)),
        lambda h, k, s, s2: g.best(h, k, f(s), f(s2)),
        label=g.label,
    )


def copy_decision_composite(sets) -> OpenGame:
    """The copy decision assembled from a copying node, a plain decision and plumbing.

    Same boundaries as `copy_decision(sets)`; the two are globularly
    isomorphic.  Requires at least two stages.
    """
    sets = list(sets)
    n = len(sets)
    if n < 2:
        raise TypeMismatch("composite form needs at least two stages")
    last = sets[-1]
    hist = nested_product(sets[:-1])
    qprev = Payoff(n - 1)
    hist_d = Diset(hist, UNIT_SET)
    pass_d = Diset(UNIT_SET, qprev)

    intro_cod = diset_tensor(hist_d, pass_d)
    intro = Lens(
        Diset(hist, qprev),
        intro_cod,
        total_fn(hist, intro_cod.forward, lambda x: (x, UNIT)),
        USecond(MapTree(intro_cod.backward, qprev, leaf([1]))),
    )

    dup_cod = Diset(product_set(hist, hist), UNIT_SET)
    dup = Lens(
        hist_d,
        dup_cod,
        total_fn(hist, dup_cod.forward, lambda x: (x, x)),
        UConst(UNIT),
    )
    stage_copy = tensor_games(trivial_game(dup, label="copy"), unit_game(pass_d))

    shuffle_dom = stage_copy.dst
    shuffle_cod = diset_tensor(hist_d, diset_tensor(hist_d, pass_d))
    shuffle = Lens(
        shuffle_dom,
        shuffle_cod,
        total_fn(shuffle_dom.forward, shuffle_cod.forward, lambda v: (v[0][0], (v[0][1], v[1]))),
        USecond(MapTree(shuffle_cod.backward, shuffle_dom.backward, pair_t(lit(UNIT), leaf([1, 1])))),
    )

    chooser = decision(hist, last)
    stage_play = tensor_games(unit_game(hist_d), tensor_games(chooser, unit_game(pass_d)))

    close_dom = stage_play.dst
    close_cod = Diset(nested_product(sets), Payoff(n))
    close = Lens(
        close_dom,
        close_cod,
        total_fn(close_dom.forward, close_cod.forward, lambda v: (v[0], v[1][0])),
        USecond(
            MapTree(
                Payoff(n),
                close_dom.backward,
                pair_t(lit(UNIT), pair_t(leaf((), take=(n - 1,)), leaf((), take=tuple(range(n - 1))))),
            )
        ),
    )

    out = seq_compose(
        trivial_game(intro, label="intro"),
        seq_compose(
            stage_copy,
            seq_compose(
                trivial_game(shuffle, label="shuffle"),
                seq_compose(stage_play, trivial_game(close, label="close")),
            ),
        ),
    )
    out.label = "copy-decision-composite"
    return out
