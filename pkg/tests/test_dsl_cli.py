"""The document language and the `og` command line tool."""

import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opengames.classical import brute_nash
from opengames.cli import bundled_document_text, main
from opengames.dsl import (
    format_document,
    format_sexpr,
    parse_document,
    parse_sexprs,
    skeleton,
    tokenize,
)
from opengames.errors import (
    DocumentTypeError,
    NameResolutionError,
    ParseError,
)
from opengames.solve import nash_normal_form

PD_DOC = """\
(set MOVE (C D))
(payoff PD (MOVE MOVE) 2
  ((C C) -> (2 2))
  ((C D) -> (0 3))
  ((D C) -> (3 0))
  ((D D) -> (1 1)))
(normal-form PDGAME (MOVE MOVE) PD)
"""

CHAIN_DOC = PD_DOC + """\
(game FIRST (copy-decision MOVE))
(game SECOND (copy-decision MOVE MOVE))
(expr CHAIN (seq FIRST SECOND))
(continuation SCORE CHAIN
  ((pair C C) -> (vec 2 2))
  ((pair C D) -> (vec 0 3))
  ((pair D C) -> (vec 3 0))
  ((pair D D) -> (vec 1 1)))
(game CLOSE (utility PD))
(expr WHOLE (seq CHAIN CLOSE))
"""

TREE_DOC = """\
(extensive PICK 1
  (node r 1 (L (leaf a (1))) (R (leaf b (0)))))
"""


# ---------- reading ----------


def test_tokenizer_tracks_positions():
    toks = tokenize("(set A (x))\n; ignored\n  next")
    assert (toks[0].text, toks[0].line, toks[0].col) == ("(", 1, 1)
    assert (toks[1].text, toks[1].line, toks[1].col) == ("set", 1, 2)
    assert toks[-1].text == "next"
    assert (toks[-1].line, toks[-1].col) == (3, 3)
    assert all(t.text != "ignored" for t in toks)


def test_parse_error_positions():
    with pytest.raises(ParseError) as e:
        parse_sexprs("(a b))")
    assert (e.value.line, e.value.col) == (1, 6)
    with pytest.raises(ParseError) as e:
        parse_sexprs("(a (b c)")
    assert (e.value.line, e.value.col) == (1, 1)


sexpr_data = st.recursive(
    st.text(alphabet="abcdxyz*/-0123456789", min_size=1, max_size=5),
    lambda inner: st.lists(inner, max_size=4).map(tuple),
    max_leaves=12,
)


def _render(node):
    if isinstance(node, str):
        return node
    return "(" + " ".join(_render(c) for c in node) + ")"


@given(st.lists(sexpr_data, max_size=4))
def test_reading_round_trips(forms):
    text = "\n".join(_render(f) for f in forms)
    parsed = parse_sexprs(text)
    assert [skeleton(n) for n in parsed] == forms
    again = parse_sexprs(format_document(parsed))
    assert [skeleton(n) for n in again] == forms


def test_format_sexpr_is_flat():
    (node,) = parse_sexprs("(a\n  (b   c))")
    assert format_sexpr(node) == "(a (b c))"


# ---------- analysis ----------


def test_document_tables_and_declaration_order():
    doc = parse_document(CHAIN_DOC)
    assert [d for d in doc.declarations] == [
        ("set", "MOVE"),
        ("payoff", "PD"),
        ("normal-form", "PDGAME"),
        ("game", "FIRST"),
        ("game", "SECOND"),
        ("expr", "CHAIN"),
        ("continuation", "SCORE"),
        ("game", "CLOSE"),
        ("expr", "WHOLE"),
    ]
    assert doc.solvables == [
        ("normal-form", "PDGAME"),
        ("expr", "CHAIN"),
        ("expr", "WHOLE"),
    ]
    assert list(doc.sets["MOVE"]) == ["C", "D"]
    assert doc.games["FIRST"].label == "FIRST"


def test_document_solves_like_the_programmatic_build():
    doc = parse_document(PD_DOC)
    nf = doc.normal_forms["PDGAME"]
    assert nash_normal_form(nf) == [("D", "D")]
    assert brute_nash(nf) == [("D", "D")]


def err_span(exc_info):
    return exc_info.value.line, exc_info.value.col


def test_unknown_declaration_span():
    with pytest.raises(DocumentTypeError) as e:
        parse_document("(bad)\n")
    assert err_span(e) == (1, 2)


def test_duplicate_name_span():
    with pytest.raises(NameResolutionError) as e:
        parse_document("(set MOVE (C D))\n(set MOVE (E))\n")
    assert err_span(e) == (2, 6)


def test_unknown_name_span():
    with pytest.raises(NameResolutionError) as e:
        parse_document("(diset D NOPE unit)\n")
    assert err_span(e) == (1, 10)


def test_wrong_kind_is_reported():
    with pytest.raises(NameResolutionError) as e:
        parse_document("(set A (x))\n(game G (utility A))\n")
    assert "`A` is a set, not a payoff" in e.value.message


def test_reserved_element_names():
    with pytest.raises(DocumentTypeError) as e:
        parse_document("(set B (1/2))\n")
    assert err_span(e) == (1, 9)
    with pytest.raises(DocumentTypeError):
        parse_document("(set B (*))\n")


def test_payoff_row_errors():
    with pytest.raises(DocumentTypeError) as e:
        parse_document(
            "(set M (C D))\n(payoff P (M) 1\n  ((C) -> (1))\n  ((C) -> (2))\n  ((D) -> (0)))\n"
        )
    assert "duplicate row" in e.value.message
    assert e.value.line == 4
    with pytest.raises(DocumentTypeError) as e:
        parse_document("(set M (C D))\n(payoff P (M) 1\n  ((C) -> (1)))\n")
    assert "missing row" in e.value.message
    with pytest.raises(DocumentTypeError) as e:
        parse_document("(set M (C D))\n(payoff P (M) 1\n  ((E) -> (1)))\n")
    assert "not in the domain" in e.value.message
    with pytest.raises(DocumentTypeError) as e:
        parse_document("(set M (C))\n(payoff P (M) 2\n  ((C) -> (1)))\n")
    assert "expected 2 rationals" in e.value.message


def test_expression_boundary_errors_carry_spans():
    text = "(set MOVE (C D))\n(game A (decision unit MOVE))\n(expr BAD (seq A A))\n"
    with pytest.raises(DocumentTypeError) as e:
        parse_document(text)
    assert err_span(e) == (3, 11)


def test_continuation_errors():
    with pytest.raises(NameResolutionError):
        parse_document("(continuation K NOPE)\n")
    bad_row = CHAIN_DOC.replace("(vec 1 1)", "(vec 1)")
    with pytest.raises(DocumentTypeError) as e:
        parse_document(bad_row)
    assert "outside the backward carrier" in e.value.message


def test_market_document_round_trips():
    text = bundled_document_text()
    doc = parse_document(text)
    assert doc.solvables[-1] == ("extensive", "MARKET-TREE")
    original = [skeleton(n) for n in parse_sexprs(text)]
    reprinted = parse_sexprs(format_document(doc.forms))
    assert [skeleton(n) for n in reprinted] == original


# ---------- the command line tool ----------


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write_doc(tmp_path, text, name="doc.og"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_solve_normal_form_json(tmp_path, capsys):
    path = write_doc(tmp_path, PD_DOC)
    code, out, err = run_cli(capsys, ["solve", "--input", path, "--mode", "nash"])
    assert code == 0 and err == ""
    report = json.loads(out)
    assert list(report) == [
        "command", "input", "seed", "bounds", "results", "witnesses", "elapsed_ms",
    ]
    assert report["command"] == "solve"
    assert report["input"] == path
    assert report["seed"] == 0
    assert report["bounds"] == {"max_table": 16}
    assert report["results"] == [["D", "D"]]
    assert report["witnesses"] == []
    assert report["elapsed_ms"] is None


def test_solve_output_is_reproducible(tmp_path, capsys):
    path = write_doc(tmp_path, CHAIN_DOC)
    argv = ["solve", "--input", path, "--mode", "separable",
            "--expr", "CHAIN", "--continuation", "SCORE"]
    first = run_cli(capsys, argv)
    second = run_cli(capsys, argv)
    assert first == second
    assert first[0] == 0


def test_solve_expr_modes_and_witnesses(tmp_path, capsys):
    path = write_doc(tmp_path, CHAIN_DOC)
    code, out, _ = run_cli(
        capsys,
        ["solve", "--input", path, "--mode", "states",
         "--expr", "CHAIN", "--continuation", "SCORE"],
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"] == [["D", "[C->D, D->D]"]]
    code, out, _ = run_cli(
        capsys,
        ["solve", "--input", path, "--mode", "separable",
         "--expr", "CHAIN", "--continuation", "SCORE"],
    )
    report = json.loads(out)
    assert report["results"] == [["D", "[C->D, D->D]"]]
    assert len(report["witnesses"]) == 1
    assert report["witnesses"][0]["kind"] == "seq"


def test_solve_picks_the_last_compatible_target(tmp_path, capsys):
    path = write_doc(tmp_path, CHAIN_DOC)
    code, out, _ = run_cli(capsys, ["solve", "--input", path, "--mode", "states"])
    assert code == 0
    report = json.loads(out)
    assert report["results"] == [[["D", "[C->D, D->D]"], "*"]]


def test_solve_extensive_targets(tmp_path, capsys):
    path = write_doc(tmp_path, TREE_DOC)
    for mode in ("nash", "spe"):
        code, out, _ = run_cli(capsys, ["solve", "--input", path, "--mode", mode])
        assert code == 0
        assert json.loads(out)["results"] == [[["L"]]]


def test_solve_usage_errors(tmp_path, capsys):
    path = write_doc(tmp_path, PD_DOC)
    code, _, err = run_cli(
        capsys, ["solve", "--input", path, "--mode", "nash", "--expr", "NOPE"]
    )
    assert code == 2 and "usage error" in err
    code, _, err = run_cli(
        capsys, ["solve", "--input", path, "--mode", "spe", "--expr", "PDGAME"]
    )
    assert code == 2 and "is a normal-form" in err
    code, _, err = run_cli(capsys, ["solve", "--input", path, "--mode", "spe"])
    assert code == 2 and "nothing solvable" in err
    code, _, err = run_cli(
        capsys,
        ["solve", "--input", path, "--mode", "nash", "--continuation", "SCORE"],
    )
    assert code == 2 and "only applies" in err


def test_solve_domain_errors_exit_one(tmp_path, capsys):
    path = write_doc(tmp_path, CHAIN_DOC)
    code, _, err = run_cli(
        capsys, ["solve", "--input", path, "--mode", "states", "--expr", "CHAIN"]
    )
    assert code == 1 and err.startswith("error:")
    code, _, err = run_cli(
        capsys,
        ["solve", "--input", path, "--mode", "states",
         "--expr", "WHOLE", "--continuation", "SCORE"],
    )
    assert code == 1 and "declared for" in err


def test_parse_errors_exit_two_with_positions(tmp_path, capsys):
    path = write_doc(tmp_path, "(bad)\n")
    code, _, err = run_cli(capsys, ["parse", "--input", path])
    assert code == 2
    assert err.startswith(f"{path}:1:2: unknown declaration")


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(PD_DOC))
    code, out, _ = run_cli(capsys, ["solve", "--input", "-", "--mode", "nash"])
    assert code == 0
    assert json.loads(out)["input"] == "-"


def test_timing_and_text_format(tmp_path, capsys):
    path = write_doc(tmp_path, PD_DOC)
    code, out, _ = run_cli(
        capsys, ["solve", "--input", path, "--mode", "nash", "--timing"]
    )
    assert code == 0
    assert isinstance(json.loads(out)["elapsed_ms"], float)
    code, out, _ = run_cli(
        capsys, ["solve", "--input", path, "--mode", "nash", "--format", "text"]
    )
    assert code == 0
    assert out.splitlines()[0] == "command: solve"


def test_laws_subcommand(capsys):
    code, out, _ = run_cli(capsys, ["laws", "--trials", "2"])
    assert code == 0
    report = json.loads(out)
    assert len(report["results"]) == 7
    assert all(r["failures"] == 0 for r in report["results"])
    assert report["witnesses"] == []


def test_demo_subcommand(capsys):
    code, out, _ = run_cli(capsys, ["demo"])
    assert code == 0
    report = json.loads(out)
    states, separable = report["results"]
    assert states["mode"] == "states"
    assert len(states["profiles"]) == 3
    assert separable["mode"] == "separable"
    assert len(separable["profiles"]) == 1
    assert len(report["witnesses"]) == 1


def test_parse_subcommand_json_and_text(tmp_path, capsys):
    path = write_doc(tmp_path, PD_DOC)
    code, out, _ = run_cli(capsys, ["parse", "--input", path])
    assert code == 0
    report = json.loads(out)
    assert report["results"] == [
        {"kind": "set", "name": "MOVE"},
        {"kind": "payoff", "name": "PD"},
        {"kind": "normal-form", "name": "PDGAME"},
    ]
    code, out, _ = run_cli(capsys, ["parse", "--input", path, "--format", "text"])
    assert code == 0
    assert [skeleton(n) for n in parse_sexprs(out)] == [
        skeleton(n) for n in parse_sexprs(PD_DOC)
    ]
