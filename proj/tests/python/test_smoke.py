import pytest

import extlr

BALANCED = "%start S\n%tokens a b\nS : a S b | ;\n"
AMBIG = "%start S\n%tokens a\nS : S S | a ;\n"


def test_parse_accepts_and_orders_reductions():
    g = extlr.Grammar.parse(BALANCED)
    r = extlr.parse(g, 1, "a a b b")
    assert r["status"] == "accept"
    assert r["prods"] == [2, 1, 1]
    assert r["ld"] == 3


def test_parse_reports_position_and_expected_set():
    g = extlr.Grammar.parse(BALANCED)
    r = extlr.parse(g, 1, "a a b")
    assert r["status"] == "syntax_error"
    assert r["token_pos"] == 4
    assert r["expected"] == ["b"]
    assert not r["expect_eof"]


def test_ambiguous_grammar_raises_a_conflict_result():
    g = extlr.Grammar.parse(AMBIG)
    r = extlr.parse(g, 1, "a a a")
    assert r["status"] == "conflict"
    assert r["token_pos"] == 3
    assert r["detail"] == "reduce S -> S S vs item S -> S . S"


def test_strategies_agree():
    g = extlr.Grammar.parse(BALANCED)
    a = extlr.parse(g, 2, "a b", strategy="table")
    b = extlr.parse(g, 2, "a b", strategy="trie")
    assert a == b


def test_recognize():
    g = extlr.Grammar.parse(BALANCED)
    assert extlr.recognize(g, "a a b b")
    assert not extlr.recognize(g, "a b b")


def test_first_k_sets():
    g = extlr.Grammar.parse(BALANCED)
    f = extlr.first_k(g, 1)
    assert f["S"] == ["", "a"]
    assert f["a"] == ["a"]


def test_grammar_introspection():
    g = extlr.gen_gn(2)
    assert g.terminal_count == 4
    assert g.size == 36
    assert g.production_text(1) == "S -> A1"
    assert g.check_reduced()["ok"]


def test_auto_reduce_path():
    g = extlr.Grammar.parse(
        "%start S\n%tokens a b c\nS : a S b | ;\nX : c X ;\n"
    )
    check = g.check_reduced()
    assert not check["ok"]
    assert check["unproductive"] == ["X"]
    assert g.reduced().check_reduced()["ok"]


def test_bad_grammar_raises():
    with pytest.raises(extlr.GrammarError):
        extlr.Grammar.parse("%start S\nS : a ;\n")


def test_unknown_token_raises():
    g = extlr.Grammar.parse(BALANCED)
    with pytest.raises(extlr.GrammarError):
        extlr.parse(g, 1, "a q b")
