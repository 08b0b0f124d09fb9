"""Open games: atomic builders, composition operators, state computation."""

from fractions import Fraction

import pytest

from opengames.classical import brute_nash, normal_form
from opengames.errors import EmptyChoiceSet, TypeMismatch
from opengames.finite import (
    Payoff,
    Tag,
    UNIT,
    UNIT_SET,
    make_set,
    total_fn,
)
from opengames.games import (
    OpenGame,
    best_response,
    copy_decision,
    copy_decision_composite,
    decision,
    game_states,
    product_games,
    reindex_source,
    reindex_strategies,
    reindex_target,
    seq_compose,
    tensor_games,
    trivial_game,
    unit_game,
    utility_game,
)
from opengames.lenses import (
    Context,
    Diset,
    diset_tensor,
    lens_identity,
    runit_inv_lens,
)

MOVES = make_set(["C", "D"])
Q = lambda n: (Fraction(n),)


def const_strategy(game, choice):
    """The constant strategy of a one-shot decision."""
    for s in game.strategies:
        if s(UNIT) == choice:
            return s
    raise AssertionError(f"no constant strategy for {choice!r}")


# ---------- atomic games ----------


def test_decision_best_is_argmax():
    g = decision(UNIT_SET, MOVES)
    k = total_fn(MOVES, Payoff(1), {"C": Q(1), "D": Q(4)})
    sc, sd = const_strategy(g, "C"), const_strategy(g, "D")
    assert g.best(UNIT, k, sc, sd)
    assert not g.best(UNIT, k, sc, sc)
    assert game_states(g, k) == [sd]
    tie = total_fn(MOVES, Payoff(1), {"C": Q(2), "D": Q(2)})
    assert game_states(g, tie) == [sc, sd]


def test_decision_play_lens():
    g = decision(MOVES, MOVES)
    flip = total_fn(MOVES, MOVES, {"C": "D", "D": "C"})
    lens = g.play(flip)
    assert lens.view == flip
    assert lens.update_at("C", Q(7)) == UNIT


def test_decision_best_ignores_current_strategy_argument():
    g = decision(UNIT_SET, MOVES)
    k = total_fn(MOVES, Payoff(1), {"C": Q(0), "D": Q(9)})
    sc, sd = const_strategy(g, "C"), const_strategy(g, "D")
    assert g.best(UNIT, k, sd, sd)
    assert g.best(UNIT, k, sc, sd)


def test_empty_choice_set_is_rejected():
    with pytest.raises(EmptyChoiceSet):
        decision(UNIT_SET, make_set([]))
    with pytest.raises(EmptyChoiceSet):
        copy_decision([])
    with pytest.raises(EmptyChoiceSet):
        copy_decision([MOVES, make_set([])])


def test_copy_decision_boundaries_and_play():
    g = copy_decision([MOVES, MOVES])
    assert g.src == Diset(MOVES, Payoff(1))
    assert g.dst == Diset(make_set([(a, b) for a in MOVES for b in MOVES]), Payoff(2))
    copycat = total_fn(MOVES, MOVES, {"C": "C", "D": "D"})
    lens = g.play(copycat)
    assert lens.view("C") == ("C", "C")
    assert lens.update_at("D", (Fraction(5), Fraction(6))) == (Fraction(5),)


def test_copy_decision_single_stage_is_plain_view():
    g = copy_decision([MOVES])
    assert g.src == Diset(UNIT_SET, Payoff(0))
    s = const_strategy(g, "D")
    assert g.play(s).view(UNIT) == "D"


def test_copy_decision_best_looks_only_at_own_coordinate():
    g = copy_decision([MOVES, MOVES])
    k = total_fn(
        g.dst.forward,
        Payoff(2),
        {
            ("C", "C"): (Fraction(9), Fraction(0)),
            ("C", "D"): (Fraction(0), Fraction(1)),
            ("D", "C"): (Fraction(0), Fraction(1)),
            ("D", "D"): (Fraction(9), Fraction(0)),
        },
    )
    flip = total_fn(MOVES, MOVES, {"C": "D", "D": "C"})
    copycat = total_fn(MOVES, MOVES, {"C": "C", "D": "D"})
    assert g.best("C", k, copycat, flip)
    assert not g.best("C", k, flip, copycat)
    assert game_states(g, k) == [flip]


def test_unit_and_trivial_games_are_always_best():
    d = Diset(MOVES, Payoff(1))
    u = unit_game(d)
    assert u.play(UNIT).view("C") == "C"
    assert u.best("C", None, UNIT, UNIT)
    t = trivial_game(runit_inv_lens(d), label="plumbing")
    assert t.label == "plumbing"
    assert t.best("C", None, UNIT, UNIT)


def test_utility_game_closes_the_boundary():
    payout = total_fn(MOVES, Payoff(1), {"C": Q(1), "D": Q(2)})
    g = utility_game(payout)
    lens = g.play(UNIT)
    assert lens.cod.forward == UNIT_SET
    assert lens.update_at("D", UNIT) == Q(2)


# ---------- composition ----------


def test_seq_requires_matching_boundary():
    g = decision(UNIT_SET, MOVES)
    with pytest.raises(TypeMismatch):
        seq_compose(g, g)


def test_seq_decision_then_utility():
    payout = total_fn(MOVES, Payoff(1), {"C": Q(2), "D": Q(5)})
    g = seq_compose(decision(UNIT_SET, MOVES), utility_game(payout))
    k = total_fn(UNIT_SET, UNIT_SET, lambda _: UNIT)
    states = game_states(g, k)
    assert len(states) == 1
    assert states[0][0](UNIT) == "D"


def test_tensor_prisoners_dilemma():
    g = tensor_games(decision(UNIT_SET, MOVES), decision(UNIT_SET, MOVES))
    table = {
        ("C", "C"): (Q(2), Q(2)),
        ("C", "D"): (Q(0), Q(3)),
        ("D", "C"): (Q(3), Q(0)),
        ("D", "D"): (Q(1), Q(1)),
    }
    k = total_fn(g.dst.forward, g.dst.backward, table)
    states = game_states(g, k)
    assert [(a(UNIT), b(UNIT)) for a, b in states] == [("D", "D")]
    nf = normal_form(
        [MOVES, MOVES],
        {p: (v[0][0], v[1][0]) for p, v in table.items()},
    )
    assert brute_nash(nf) == [("D", "D")]


def test_tensor_coordination_matches_brute_force():
    g = tensor_games(decision(UNIT_SET, MOVES), decision(UNIT_SET, MOVES))
    table = {
        ("C", "C"): (Q(2), Q(2)),
        ("C", "D"): (Q(0), Q(0)),
        ("D", "C"): (Q(0), Q(0)),
        ("D", "D"): (Q(1), Q(1)),
    }
    k = total_fn(g.dst.forward, g.dst.backward, table)
    got = [(a(UNIT), b(UNIT)) for a, b in game_states(g, k)]
    assert got == [("C", "C"), ("D", "D")]


def test_product_requires_shared_backward_carriers():
    a = decision(UNIT_SET, MOVES)
    b = copy_decision([MOVES, MOVES])
    with pytest.raises(TypeMismatch):
        product_games([a, b])
    with pytest.raises(TypeMismatch):
        product_games([])


def test_product_games_split_by_tag():
    a = decision(UNIT_SET, MOVES)
    b = decision(MOVES, MOVES)
    g = product_games([a, b])
    k = total_fn(
        g.dst.forward,
        Payoff(1),
        lambda t: Q(1) if (t.side == 0) == (t.value == "C") else Q(0),
    )
    states = game_states(g, k)
    assert [(s[0](UNIT), s[1]("C"), s[1]("D")) for s in states] == [("C", "D", "D")]
    lens = g.play(states[0])
    assert lens.view(Tag(0, UNIT)) == Tag(0, "C")
    assert lens.view(Tag(1, "C")) == Tag(1, "D")


def test_composite_copy_decision_shares_boundaries():
    direct = copy_decision([MOVES, MOVES])
    composite = copy_decision_composite([MOVES, MOVES])
    assert composite.src == direct.src
    assert composite.dst == direct.dst
    assert len(composite.strategies) == len(direct.strategies)
    with pytest.raises(TypeMismatch):
        copy_decision_composite([MOVES])


# ---------- reindexing and the public evaluator ----------


def test_reindex_strategies_restricts_the_search():
    g = decision(UNIT_SET, MOVES)
    sc = const_strategy(g, "C")
    only_c = total_fn(make_set(["c"]), g.strategies, {"c": sc})
    h = reindex_strategies(g, only_c)
    k = total_fn(MOVES, Payoff(1), {"C": Q(0), "D": Q(1)})
    assert game_states(g, k) != []
    assert game_states(h, k) == []
    with pytest.raises(TypeMismatch):
        reindex_strategies(g, total_fn(MOVES, MOVES, {"C": "C", "D": "D"}))


def test_reindex_boundaries_compose_with_play():
    g = decision(MOVES, MOVES)
    lens = lens_identity(g.src)
    h = reindex_source(g, lens)
    s = next(iter(g.strategies))
    assert h.play(s).view("C") == g.play(s).view("C")
    with pytest.raises(TypeMismatch):
        reindex_source(g, lens_identity(g.dst))
    out = runit_inv_lens(Diset(MOVES, Payoff(1)))
    assert out.dom == g.dst
    t = reindex_target(g, out)
    assert t.dst == out.cod
    with pytest.raises(TypeMismatch):
        reindex_target(g, lens_identity(g.src))


def test_best_response_checks_the_context():
    g = decision(UNIT_SET, MOVES)
    k = total_fn(MOVES, Payoff(1), {"C": Q(0), "D": Q(1)})
    sd = const_strategy(g, "D")
    assert best_response(g, Context(UNIT, k), sd, sd)
    with pytest.raises(TypeMismatch):
        best_response(g, Context("C", k), sd, sd)
    bad_k = total_fn(UNIT_SET, Payoff(1), lambda _: Q(0))
    with pytest.raises(TypeMismatch):
        best_response(g, Context(UNIT, bad_k), sd, sd)


def test_unknown_strategy_is_rejected():
    g = decision(UNIT_SET, MOVES)
    with pytest.raises(TypeMismatch):
        g.play("not a strategy")
