"""The `.og` document language: s-expressions describing games to solve.

A document declares finite sets, payoff tables, lenses, games and
composition expressions, plus optional classical descriptions
(normal-form, sequential, extensive) that the command line tool can
solve against the same engine.  Every diagnostic carries the line and
column of the form that caused it.

Toplevel forms:

  (set NAME (a b c))              enumerated elements
  (set NAME (sum A B))            tagged union of two named sets
  (set NAME (prod A B))           pairs
  (payoff NAME (A B) 2 ROWS)      table over flat tuples, into Q^2
  (diset NAME SET CARRIER)        a forward set with a backward carrier
  (lens NAME LENS)
  (game NAME GFORM)
  (expr NAME E)
  (continuation NAME EXPR ROWS)   a closing payoff rule for an expression
  (normal-form NAME (A B) P)
  (sequential NAME (A B) P)
  (extensive NAME N TREE (infoset id id ...) ...)

with carriers `unit`, a set name, or (real N); disets combined by
(tensor D D) with unit `I`; lenses built from id, compose (left to
right), tensor, assoc/unassoc, swap, lunit/runit and their -inv forms,
counit, and (effect D ROWS); games from (decision X Y),
(copy-decision X1 ... Xn), (utility P), (unit D), (trivial-lens L);
expressions from names, (seq E E), (tensor E E) and (product E ...).
Values are written `*`, element names, (pair v v), (inl v), (inr v)
and (vec q ...) with rationals like 3, -1 or 2/3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .classical import ExtensiveGame, TreeNode, normal_form, sequential_game
from .errors import (
    DocumentTypeError,
    EngineError,
    NameResolutionError,
    ParseError,
)
from .expr import Atom, GameExpr, Product, Seq, Tensor, eval_expr
from .finite import (
    UNIT,
    UNIT_SET,
    Payoff,
    Tag,
    carrier_contains,
    coproduct_set,
    format_value,
    make_set,
    nest_value,
    nested_product,
    product_set,
    total_fn,
)
from .games import copy_decision, decision, trivial_game, unit_game, utility_game
from .lenses import (
    Diset,
    UNIT_DISET,
    assoc_lens,
    counit_lens,
    diset_tensor,
    effect_lens,
    lens_compose,
    lens_identity,
    lens_tensor,
    lunit_inv_lens,
    lunit_lens,
    runit_inv_lens,
    runit_lens,
    swap_lens,
    unassoc_lens,
)

_RATIONAL = re.compile(r"-?\d+(/\d+)?\Z")


# ---------------------------------------------------------------------------
# Reading: tokens and s-expressions with source positions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SExpr:
    atom: object  # str for atoms, None for lists
    items: object  # tuple for lists, None for atoms
    line: int
    col: int

    @property
    def is_atom(self):
        return self.atom is not None


def tokenize(text: str):
    out = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            out.append(Token(c, line, col))
            col += 1
            i += 1
        else:
            j = i
            while j < n and text[j] not in " \t\r\n();":
                j += 1
            out.append(Token(text[i:j], line, col))
            col += j - i
            i = j
    return out


def parse_sexprs(text: str):
    tokens = tokenize(text)
    pos = 0

    def parse_node():
        nonlocal pos
        tok = tokens[pos]
        if tok.text == ")":
            raise ParseError("unexpected ')'", tok.line, tok.col)
        if tok.text == "(":
            pos += 1
            items = []
            while True:
                if pos >= len(tokens):
                    raise ParseError("unclosed '('", tok.line, tok.col)
                if tokens[pos].text == ")":
                    pos += 1
                    break
                items.append(parse_node())
            return SExpr(None, tuple(items), tok.line, tok.col)
        pos += 1
        return SExpr(tok.text, None, tok.line, tok.col)

    out = []
    while pos < len(tokens):
        out.append(parse_node())
    return out


def format_sexpr(node: SExpr) -> str:
    if node.is_atom:
        return node.atom
    return "(" + " ".join(format_sexpr(i) for i in node.items) + ")"


def format_document(nodes) -> str:
    return "".join(format_sexpr(n) + "\n" for n in nodes)


def skeleton(node: SExpr):
    """The tree with positions stripped, for structural comparison."""
    if node.is_atom:
        return node.atom
    return tuple(skeleton(i) for i in node.items)


# ---------------------------------------------------------------------------
# Analysis: turning forms into engine objects.
# ---------------------------------------------------------------------------


@dataclass
class Document:
    sets: dict
    payoffs: dict
    disets: dict
    lenses: dict
    games: dict
    exprs: dict
    continuations: dict  # name -> (expr name, TotalFn)
    normal_forms: dict
    sequentials: dict
    extensives: dict
    solvables: list  # (kind, name) in declaration order
    declarations: list  # every (kind, name) in declaration order
    forms: list


def _err(node, message):
    return DocumentTypeError(message, node.line, node.col)


def _need_list(node, what):
    if node.is_atom:
        raise _err(node, f"expected {what}, found `{node.atom}`")
    return node.items


def _need_atom(node, what):
    if not node.is_atom:
        raise _err(node, f"expected {what}, found a list")
    return node.atom


def _need_int(node, what):
    text = _need_atom(node, what)
    try:
        return int(text)
    except ValueError:
        raise _err(node, f"expected {what}, found `{text}`") from None


class _Analyzer:
    def __init__(self, forms):
        self.forms = forms
        self.doc = Document({}, {}, {}, {}, {}, {}, {}, {}, {}, {}, [], [], list(forms))
        self.kinds = {"unit": "set", "I": "diset"}

    def run(self) -> Document:
        for form in self.forms:
            items = _need_list(form, "a declaration")
            if not items:
                raise _err(form, "empty declaration")
            head = _need_atom(items[0], "a declaration keyword")
            handler = getattr(self, "_form_" + head.replace("-", "_"), None)
            if handler is None:
                raise _err(items[0], f"unknown declaration `{head}`")
            handler(form, items)
        return self.doc

    # -- shared plumbing ----------------------------------------------------

    def _declare(self, node, kind, name, value):
        if name in self.kinds:
            raise NameResolutionError(
                f"`{name}` is already defined", node.line, node.col
            )
        self.kinds[name] = kind
        getattr(self.doc, _TABLES[kind])[name] = value
        self.doc.declarations.append((kind, name))

    def _lookup(self, node, kind):
        name = _need_atom(node, f"a {kind} name")
        if name == "unit" and kind == "set":
            return UNIT_SET
        if name == "I" and kind == "diset":
            return UNIT_DISET
        found = self.kinds.get(name)
        if found is None:
            raise NameResolutionError(f"unknown name `{name}`", node.line, node.col)
        if found != kind:
            raise NameResolutionError(
                f"`{name}` is a {found}, not a {kind}", node.line, node.col
            )
        return getattr(self.doc, _TABLES[kind])[name]

    def _engine(self, node, fn, *args):
        """Run an engine constructor, pinning failures to a source span."""
        try:
            return fn(*args)
        except EngineError as e:
            raise _err(node, str(e)) from e

    # -- value literals -----------------------------------------------------

    def _value(self, node):
        if node.is_atom:
            if node.atom == "*":
                return UNIT
            if _RATIONAL.match(node.atom):
                return Fraction(node.atom)
            return node.atom
        items = node.items
        if not items or not items[0].is_atom:
            raise _err(node, "expected a value")
        head = items[0].atom
        if head == "pair" and len(items) == 3:
            return (self._value(items[1]), self._value(items[2]))
        if head == "inl" and len(items) == 2:
            return Tag(0, self._value(items[1]))
        if head == "inr" and len(items) == 2:
            return Tag(1, self._value(items[1]))
        if head == "vec":
            return tuple(self._rational(i) for i in items[1:])
        raise _err(node, f"unknown value form `{head}`")

    def _rational(self, node):
        text = _need_atom(node, "a rational")
        if not _RATIONAL.match(text):
            raise _err(node, f"expected a rational, found `{text}`")
        return Fraction(text)

    def _rows(self, where, nodes, fwd, carrier, what):
        """Arrow rows (V -> V) as a total table fwd -> carrier."""
        table = {}
        for node in nodes:
            items = _need_list(node, "a row")
            if len(items) != 3 or not items[1].is_atom or items[1].atom != "->":
                raise _err(node, "expected a row (value -> value)")
            key = self._value(items[0])
            if key not in fwd:
                raise _err(items[0], f"{format_value(key)} is not in the domain")
            if key in table:
                raise _err(items[0], f"duplicate row for {format_value(key)}")
            val = self._value(items[2])
            if not carrier_contains(carrier, val):
                raise _err(items[2], f"{format_value(val)} is outside the {what}")
            table[key] = val
        for x in fwd:
            if x not in table:
                raise _err(where, f"missing row for {format_value(x)}")
        return total_fn(fwd, carrier, table)

    # -- sets, carriers, disets ---------------------------------------------

    def _form_set(self, form, items):
        if len(items) != 3:
            raise _err(form, "expected (set NAME elements-or-constructor)")
        name = _need_atom(items[1], "a set name")
        body = _need_list(items[2], "set elements or a constructor")
        if body and body[0].is_atom and body[0].atom in ("sum", "prod"):
            if len(body) != 3:
                raise _err(items[2], f"expected ({body[0].atom} A B)")
            a = self._lookup(body[1], "set")
            b = self._lookup(body[2], "set")
            build = coproduct_set if body[0].atom == "sum" else product_set
            value = self._engine(items[2], build, a, b)
        else:
            for e in body:
                text = _need_atom(e, "an element name")
                if _RATIONAL.match(text) or text == "*":
                    raise _err(e, f"`{text}` is reserved and cannot name an element")
            value = self._engine(
                items[2], make_set, tuple(e.atom for e in body)
            )
        self._declare(items[1], "set", name, value)

    def _carrier(self, node):
        if node.is_atom:
            return self._lookup(node, "set")
        items = node.items
        if len(items) == 2 and items[0].is_atom and items[0].atom == "real":
            return Payoff(_need_int(items[1], "a dimension"))
        raise _err(node, "expected a set name, `unit` or (real N)")

    def _form_diset(self, form, items):
        if len(items) != 4:
            raise _err(form, "expected (diset NAME SET CARRIER)")
        name = _need_atom(items[1], "a diset name")
        d = Diset(self._lookup(items[2], "set"), self._carrier(items[3]))
        self._declare(items[1], "diset", name, d)

    def _diset(self, node):
        if node.is_atom:
            return self._lookup(node, "diset")
        items = node.items
        if not items or not items[0].is_atom:
            raise _err(node, "expected a diset")
        head = items[0].atom
        if head == "diset" and len(items) == 3:
            return Diset(self._lookup(items[1], "set"), self._carrier(items[2]))
        if head == "tensor" and len(items) == 3:
            return diset_tensor(self._diset(items[1]), self._diset(items[2]))
        raise _err(node, f"unknown diset form `{head}`")

    # -- payoff tables ------------------------------------------------------

    def _form_payoff(self, form, items):
        if len(items) < 4:
            raise _err(form, "expected (payoff NAME (SETS) DIM ROWS)")
        name = _need_atom(items[1], "a payoff name")
        doms = [self._lookup(s, "set") for s in _need_list(items[2], "domain sets")]
        dim = _need_int(items[3], "a dimension")
        dom_set = nested_product(doms)
        table = {}
        for row in items[4:]:
            parts = _need_list(row, "a payoff row")
            if len(parts) != 3 or not parts[1].is_atom or parts[1].atom != "->":
                raise _err(row, "expected a row ((elements) -> (rationals))")
            lhs = _need_list(parts[0], "a profile")
            if len(lhs) != len(doms):
                raise _err(parts[0], f"expected {len(doms)} elements")
            vals = []
            for e, s in zip(lhs, doms):
                v = self._value(e)
                if v not in s:
                    raise _err(e, f"{format_value(v)} is not in the domain")
                vals.append(v)
            key = nest_value(tuple(vals))
            if key in table:
                raise _err(parts[0], f"duplicate row for {format_value(key)}")
            rhs = _need_list(parts[2], "a payoff vector")
            if len(rhs) != dim:
                raise _err(parts[2], f"expected {dim} rationals")
            table[key] = tuple(self._rational(q) for q in rhs)
        for x in dom_set:
            if x not in table:
                raise _err(form, f"missing row for {format_value(x)}")
        fn = total_fn(dom_set, Payoff(dim), table)
        self._declare(items[1], "payoff", name, fn)

    # -- lenses -------------------------------------------------------------

    def _form_lens(self, form, items):
        if len(items) != 3:
            raise _err(form, "expected (lens NAME LENS)")
        name = _need_atom(items[1], "a lens name")
        self._declare(items[1], "lens", name, self._lens(items[2]))

    def _lens(self, node):
        if node.is_atom:
            return self._lookup(node, "lens")
        items = node.items
        if not items or not items[0].is_atom:
            raise _err(node, "expected a lens")
        head = items[0].atom
        if head == "id" and len(items) == 2:
            return lens_identity(self._diset(items[1]))
        if head == "compose" and len(items) >= 3:
            acc = self._lens(items[1])
            for part in items[2:]:
                acc = self._engine(part, lens_compose, acc, self._lens(part))
            return acc
        if head == "tensor" and len(items) == 3:
            return lens_tensor(self._lens(items[1]), self._lens(items[2]))
        if head in ("assoc", "unassoc") and len(items) == 4:
            build = assoc_lens if head == "assoc" else unassoc_lens
            return build(*(self._diset(i) for i in items[1:]))
        if head == "swap" and len(items) == 3:
            return swap_lens(self._diset(items[1]), self._diset(items[2]))
        if head in ("lunit", "lunit-inv", "runit", "runit-inv") and len(items) == 2:
            build = {
                "lunit": lunit_lens,
                "lunit-inv": lunit_inv_lens,
                "runit": runit_lens,
                "runit-inv": runit_inv_lens,
            }[head]
            return build(self._diset(items[1]))
        if head == "counit" and len(items) == 2:
            return counit_lens(self._lookup(items[1], "set"))
        if head == "effect" and len(items) >= 2:
            d = self._diset(items[1])
            k = self._rows(node, items[2:], d.forward, d.backward, "backward carrier")
            return effect_lens(d, k)
        raise _err(node, f"unknown lens form `{head}`")

    # -- games and expressions ----------------------------------------------

    def _form_game(self, form, items):
        if len(items) != 3:
            raise _err(form, "expected (game NAME FORM)")
        name = _need_atom(items[1], "a game name")
        body = _need_list(items[2], "a game form")
        if not body or not body[0].is_atom:
            raise _err(items[2], "expected a game form")
        head = body[0].atom
        if head == "decision" and len(body) == 3:
            game = self._engine(
                items[2],
                decision,
                self._lookup(body[1], "set"),
                self._lookup(body[2], "set"),
            )
        elif head == "copy-decision" and len(body) >= 2:
            sets = [self._lookup(s, "set") for s in body[1:]]
            game = self._engine(items[2], copy_decision, sets)
        elif head == "utility" and len(body) == 2:
            game = utility_game(self._lookup(body[1], "payoff"))
        elif head == "unit" and len(body) == 2:
            game = unit_game(self._diset(body[1]))
        elif head == "trivial-lens" and len(body) == 2:
            game = trivial_game(self._lens(body[1]), label=name)
        else:
            raise _err(items[2], f"unknown game form `{head}`")
        game.label = name
        self._declare(items[1], "game", name, game)

    def _form_expr(self, form, items):
        if len(items) != 3:
            raise _err(form, "expected (expr NAME E)")
        name = _need_atom(items[1], "an expression name")
        expr = self._expr(items[2])
        self._declare(items[1], "expr", name, expr)
        self.doc.solvables.append(("expr", name))

    def _expr(self, node) -> GameExpr:
        if node.is_atom:
            kind = self.kinds.get(node.atom)
            if kind == "game":
                return Atom(self.doc.games[node.atom])
            if kind == "expr":
                return self.doc.exprs[node.atom]
            raise NameResolutionError(
                f"`{node.atom}` is not a game or expression", node.line, node.col
            )
        items = node.items
        if not items or not items[0].is_atom:
            raise _err(node, "expected an expression")
        head = items[0].atom
        if head == "seq" and len(items) == 3:
            expr = Seq(self._expr(items[1]), self._expr(items[2]))
        elif head == "tensor" and len(items) == 3:
            expr = Tensor(self._expr(items[1]), self._expr(items[2]))
        elif head == "product" and len(items) >= 2:
            expr = Product(tuple(self._expr(i) for i in items[1:]))
        else:
            raise _err(node, f"unknown expression form `{head}`")
        self._engine(node, eval_expr, expr)  # surface boundary mismatches here
        return expr

    def _form_continuation(self, form, items):
        if len(items) < 3:
            raise _err(form, "expected (continuation NAME EXPR ROWS)")
        name = _need_atom(items[1], "a continuation name")
        expr_name = _need_atom(items[2], "an expression name")
        if self.kinds.get(expr_name) != "expr":
            raise NameResolutionError(
                f"`{expr_name}` is not an expression", items[2].line, items[2].col
            )
        game = eval_expr(self.doc.exprs[expr_name])
        k = self._rows(
            form, items[3:], game.dst.forward, game.dst.backward, "backward carrier"
        )
        self._declare(items[1], "continuation", name, (expr_name, k))

    # -- classical descriptions ---------------------------------------------

    def _choice_sets(self, node):
        return [self._lookup(s, "set") for s in _need_list(node, "choice sets")]

    def _classical(self, form, items, build):
        if len(items) != 4:
            raise _err(form, "expected (NAME (SETS) PAYOFF)")
        name = _need_atom(items[1], "a name")
        sets = self._choice_sets(items[2])
        payoff = self._lookup(items[3], "payoff")
        if payoff.dom != nested_product(sets):
            raise _err(items[3], "payoff domain does not match the choice sets")
        if payoff.cod != Payoff(len(sets)):
            raise _err(items[3], f"payoff must land in Q^{len(sets)}")
        game = build(sets, lambda p: payoff(nest_value(p)))
        return name, game, items[1]

    def _form_normal_form(self, form, items):
        name, game, node = self._classical(form, items, normal_form)
        self._declare(node, "normal-form", name, game)
        self.doc.solvables.append(("normal-form", name))

    def _form_sequential(self, form, items):
        name, game, node = self._classical(form, items, sequential_game)
        self._declare(node, "sequential", name, game)
        self.doc.solvables.append(("sequential", name))

    def _form_extensive(self, form, items):
        if len(items) < 4:
            raise _err(form, "expected (extensive NAME PLAYERS TREE INFOSETS)")
        name = _need_atom(items[1], "a name")
        players = _need_int(items[2], "a player count")
        root = self._tree_node(items[3])
        groups = []
        for node in items[4:]:
            parts = _need_list(node, "(infoset id id ...)")
            if len(parts) < 3 or not parts[0].is_atom or parts[0].atom != "infoset":
                raise _err(node, "expected (infoset id id ...)")
            groups.append(tuple(_need_atom(i, "a node id") for i in parts[1:]))
        game = self._engine(items[1], ExtensiveGame, root, players, tuple(groups))
        self._declare(items[1], "extensive", name, game)
        self.doc.solvables.append(("extensive", name))

    def _tree_node(self, node) -> TreeNode:
        items = _need_list(node, "a tree node")
        if not items or not items[0].is_atom:
            raise _err(node, "expected (node ...) or (leaf ...)")
        head = items[0].atom
        if head == "leaf" and len(items) == 3:
            node_id = _need_atom(items[1], "a node id")
            pay = tuple(self._rational(q) for q in _need_list(items[2], "payoffs"))
            return self._engine(node, TreeNode, node_id, None, pay, ())
        if head == "node" and len(items) >= 4:
            node_id = _need_atom(items[1], "a node id")
            player = _need_int(items[2], "a player number")
            children = []
            for branch in items[3:]:
                parts = _need_list(branch, "an action branch")
                if len(parts) != 2:
                    raise _err(branch, "expected (ACTION SUBTREE)")
                children.append(
                    (_need_atom(parts[0], "an action"), self._tree_node(parts[1]))
                )
            return self._engine(node, TreeNode, node_id, player, None, children)
        raise _err(node, f"unknown tree form `{head}`")


_TABLES = {
    "set": "sets",
    "payoff": "payoffs",
    "diset": "disets",
    "lens": "lenses",
    "game": "games",
    "expr": "exprs",
    "continuation": "continuations",
    "normal-form": "normal_forms",
    "sequential": "sequentials",
    "extensive": "extensives",
}


def parse_document(text: str) -> Document:
    return _Analyzer(parse_sexprs(text)).run()
