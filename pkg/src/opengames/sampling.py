"""Seeded generators for sets, lenses, games and payoff tables.

Everything here is driven by a caller-supplied `random.Random`, and any
"arbitrary" choice that must be stable across runs (like a synthetic
preference relation) is derived from an md5 digest of printed values,
so the same seed always reproduces the same objects and answers.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

from .classical import NormalFormGame, SequentialGame, normal_form, sequential_game
from .errors import EmptyChoiceSet
from .finite import (
    FiniteSet,
    TotalFn,
    enumerate_continuations,
    flat_product,
    format_fn,
    format_value,
    make_set,
)
from .games import OpenGame
from .lenses import Diset, Lens, UTable


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def random_fraction(rng, low=-5, high=5, max_denominator=4) -> Fraction:
    den = rng.randint(1, max_denominator)
    return Fraction(rng.randint(low * den, high * den), den)


def random_finite_set(rng, max_size=2, min_size=1, prefix=None) -> FiniteSet:
    if prefix is None:
        prefix = rng.choice(_LETTERS)
    n = rng.randint(min_size, max_size)
    return make_set(tuple(f"{prefix}{i}" for i in range(n)))


def random_diset(rng, max_size=2) -> Diset:
    return Diset(random_finite_set(rng, max_size), random_finite_set(rng, max_size))


def random_total_fn(rng, dom: FiniteSet, cod: FiniteSet) -> TotalFn:
    if not cod.elements:
        raise EmptyChoiceSet("cannot pick values from an empty set")
    return TotalFn(dom, cod, tuple(rng.choice(cod.elements) for _ in dom.elements))


def random_update(rng, dom: Diset, cod: Diset) -> UTable:
    return UTable(
        {
            (x, r): rng.choice(dom.backward.elements)
            for x in dom.forward
            for r in cod.backward
        }
    )


def random_lens(rng, dom: Diset, cod: Diset) -> Lens:
    return Lens(dom, cod, random_total_fn(rng, dom.forward, cod.forward),
                random_update(rng, dom, cod))


def random_lens_chain(rng, length: int, max_size=2):
    """`length` composable lenses over freshly drawn disets."""
    disets = [random_diset(rng, max_size) for _ in range(length + 1)]
    return [random_lens(rng, disets[i], disets[i + 1]) for i in range(length)]


def random_continuation(rng, d: Diset) -> TotalFn:
    return random_total_fn(rng, d.forward, d.backward)


def sample_continuations(rng, d: Diset, count: int, bound: int = 4096):
    """Up to `count` distinct continuations on a diset, without replacement."""
    pool = list(enumerate_continuations(d.forward, d.backward, bound))
    if len(pool) <= count:
        return pool
    return rng.sample(pool, count)


def _digest_even(*parts) -> bool:
    h = hashlib.md5("|".join(parts).encode()).hexdigest()
    return int(h, 16) % 2 == 0


def random_game(rng, src: Diset = None, dst: Diset = None, max_strategies=3,
                max_size=2, kind=None, label=None) -> OpenGame:
    """A game with random play lenses and a synthetic preference relation.

    `kind` is "argmax" (strategies ranked by where the continuation lands,
    so states always exist) or "hash" (an arbitrary but reproducible
    relation); by default the coin decides.
    """
    if src is None:
        src = random_diset(rng, max_size)
    if dst is None:
        dst = random_diset(rng, max_size)
    if kind is None:
        kind = rng.choice(["argmax", "hash"])
    if label is None:
        label = f"random-{kind}-{rng.randrange(10 ** 6)}"
    m = rng.randint(1, max_strategies)
    strategies = make_set(tuple(f"s{i}" for i in range(m)))
    plays = {s: random_lens(rng, src, dst) for s in strategies}

    def play(s):
        return plays[s]

    if kind == "argmax":

        def best(h, k, s, s2):
            rank = dst.backward.index
            score = rank(k(plays[s2].view(h)))
            return all(score >= rank(k(plays[s3].view(h))) for s3 in strategies)

    else:
        salt = label

        def best(h, k, s, s2):
            return _digest_even(salt, format_value(h), format_fn(k),
                                format_value(s), format_value(s2))

    return OpenGame(src, dst, strategies, play, best, label)


def random_shared_boundary_games(rng, count: int, max_strategies=3, max_size=2,
                                 kind="argmax"):
    """Games drawn over per-child forward sets but one shared backward pair."""
    s_carrier = random_finite_set(rng, max_size, prefix="s")
    r_carrier = random_finite_set(rng, max_size, prefix="r")
    out = []
    for j in range(count):
        src = Diset(random_finite_set(rng, max_size, prefix=f"x{j}"), s_carrier)
        dst = Diset(random_finite_set(rng, max_size, prefix=f"y{j}"), r_carrier)
        out.append(random_game(rng, src, dst, max_strategies, kind=kind,
                               label=f"factor-{j}"))
    return out


def random_normal_form(rng, max_players=3, max_choices=3) -> NormalFormGame:
    n = rng.randint(1, max_players)
    choices = [
        make_set(tuple(f"{_LETTERS[i]}{j}" for j in range(rng.randint(1, max_choices))))
        for i in range(n)
    ]
    table = {
        profile: tuple(random_fraction(rng) for _ in range(n))
        for profile in flat_product(choices)
    }
    return normal_form(choices, lambda p: table[p])


def random_sequential(rng, max_players=3, max_choices=2) -> SequentialGame:
    n = rng.randint(1, max_players)
    choices = [
        make_set(tuple(f"{_LETTERS[i]}{j}" for j in range(rng.randint(1, max_choices))))
        for i in range(n)
    ]
    table = {
        profile: tuple(random_fraction(rng) for _ in range(n))
        for profile in flat_product(choices)
    }
    return sequential_game(choices, lambda p: table[p])
