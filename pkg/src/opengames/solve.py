"""Solving classical games by compiling them to composition trees.

Simultaneous play becomes a tensor of one-shot choices; staged play
becomes a chain of observed choices.  Equilibria are then read off the
generic machinery: plain states for Nash behaviour, separable states
for the subgame-perfect refinement.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classical import NormalFormGame, SequentialGame
from .errors import TypeMismatch
from .expr import (
    Atom,
    GameExpr,
    Seq,
    Tensor,
    certificate_to_json,
    eval_expr,
    separable_states_over,
    states_over,
)
from .finite import (
    UNIT,
    UNIT_SET,
    Payoff,
    TotalFn,
    flat_product,
    flatten_value,
    format_value,
    nest_value,
    total_fn,
    value_to_json,
)
from .games import copy_decision, decision


def build_normal_form_expr(nf: NormalFormGame):
    """A tensor of one-shot choices plus the matching payoff continuation.

    The tensor associates to the left, so the composite's forward values
    nest the same way and can be flattened back to plain profiles.
    """
    n = nf.players
    expr: GameExpr = Atom(decision(UNIT_SET, nf.choices[0]))
    for xs in nf.choices[1:]:
        expr = Tensor(expr, Atom(decision(UNIT_SET, xs)))
    game = eval_expr(expr)

    def pack(values, depth):
        if depth == 1:
            return values
        return (pack(values[:-1], depth - 1), (values[-1],))

    k = total_fn(
        game.dst.forward,
        game.dst.backward,
        lambda y: pack(nf.payoff(flatten_value(y, n)), n),
    )
    return expr, k


def _choice_profile(profile, n):
    """Nested strategy tuple of a choice tensor -> flat tuple of choices."""
    flat = flatten_value(profile, n)
    return tuple(s(UNIT) for s in flat)


def nash_normal_form(nf: NormalFormGame):
    """Pure equilibria, computed as states of the compiled tensor."""
    expr, k = build_normal_form_expr(nf)
    return [_choice_profile(p, nf.players) for p in states_over(expr, k)]


def build_sequential_expr(sq: SequentialGame):
    """A chain of observed choices plus the terminal payoff continuation.

    Stage i sees all earlier choices and appends its own; the chain
    associates to the right so each stage's source matches the previous
    stage's target on the nose.
    """
    n = sq.players
    stages = [Atom(copy_decision(sq.choices[: i + 1])) for i in range(n)]
    expr: GameExpr = stages[-1]
    for atom in reversed(stages[:-1]):
        expr = Seq(atom, expr)
    game = eval_expr(expr)
    k = total_fn(
        game.dst.forward,
        Payoff(n),
        lambda v: sq.payoff(flatten_value(v, n)),
    )
    return expr, k


def _chain_profile(profile, n):
    """Right-nested strategy tuple of a stage chain -> flat strategy tuple."""
    out = []
    node = profile
    for _ in range(n - 1):
        out.append(node[0])
        node = node[1]
    out.append(node)
    return tuple(out)


def _flatten_stage_strategy(sigma: TotalFn, choices, i):
    """Rebase a stage strategy from nested histories onto plain tuples."""
    dom = flat_product(choices[:i])
    return total_fn(dom, choices[i], lambda xs: sigma(nest_value(xs)))


def sequential_profiles(sq: SequentialGame, nested_profiles):
    n = sq.players
    out = []
    for p in nested_profiles:
        stages = _chain_profile(p, n)
        out.append(
            tuple(_flatten_stage_strategy(s, sq.choices, i) for i, s in enumerate(stages))
        )
    return out


def nash_sequential(sq: SequentialGame):
    """Equilibria of the staged game, as flat stage-strategy profiles."""
    expr, k = build_sequential_expr(sq)
    return sequential_profiles(sq, states_over(expr, k))


def spe_sequential(sq: SequentialGame):
    """Subgame-perfect profiles: separable states of the stage chain."""
    expr, k = build_sequential_expr(sq)
    pairs = separable_states_over(expr, k)
    flat = sequential_profiles(sq, [p for p, _ in pairs])
    return [(prof, cert) for prof, (_, cert) in zip(flat, pairs)]


@dataclass(frozen=True)
class SolutionReport:
    """What a solve run found, ready for rendering."""

    mode: str
    description: str
    profiles: tuple
    certificates: tuple  # empty unless the mode produces them

    def rendered(self):
        return [format_value(p) for p in self.profiles]

    def to_json(self, max_table: int = 16):
        body = {
            "mode": self.mode,
            "game": self.description,
            "count": len(self.profiles),
            "results": [value_to_json(p) for p in self.profiles],
        }
        if self.certificates:
            body["witnesses"] = [
                certificate_to_json(c, max_table) for c in self.certificates
            ]
        return body


def solve_expr(expr: GameExpr, continuation: TotalFn, mode: str, description: str = ""):
    if mode == "states":
        return SolutionReport(mode, description, tuple(states_over(expr, continuation)), ())
    if mode == "separable":
        pairs = separable_states_over(expr, continuation)
        return SolutionReport(
            mode,
            description,
            tuple(p for p, _ in pairs),
            tuple(c for _, c in pairs),
        )
    raise TypeMismatch(f"unknown mode {mode!r}")


def solve_normal_form(nf: NormalFormGame, description: str = ""):
    return SolutionReport(
        "nash", description, tuple(nash_normal_form(nf)), ()
    )


def solve_sequential(sq: SequentialGame, mode: str, description: str = ""):
    if mode == "nash":
        return SolutionReport(mode, description, tuple(nash_sequential(sq)), ())
    if mode == "spe":
        pairs = spe_sequential(sq)
        return SolutionReport(
            mode,
            description,
            tuple(p for p, _ in pairs),
            tuple(c for _, c in pairs),
        )
    raise TypeMismatch(f"unknown mode {mode!r}")
