"""Rewriting engine: parser, the four rules, normal forms, matrix oracle."""

import pytest

from qweyl.cartan import CartanData, Weight, d_graph, path_graph
from qweyl.qalg import qbinom_d, qbinom_s_d, qint_d
from qweyl.rewrite import (
    FormalSum,
    FormalWord,
    Letter,
    evaluate_blocks,
    letters_matrix,
    measure,
    normal_form,
    oracle_equal,
    parse,
    parse_weight,
    rule_commute_distant,
    rule_merge_divided,
    rule_serre,
    rule_straighten_ef,
    verify_rewrite_confluence,
    verify_rewrite_soundness,
)
from qweyl.tensor_rep import WeightModule

A1 = CartanData(path_graph(1))
A2 = CartanData(path_graph(2))
A3 = CartanData(path_graph(3))
D4 = CartanData(d_graph(4))


def nf_text(expr, weight_text, cartan):
    w = parse_weight(weight_text, cartan)
    return normal_form(parse(expr, w, cartan)).to_text()


def oracle_status(expr, weight_text, cartan, n, N):
    w = parse_weight(weight_text, cartan)
    s = parse(expr, w, cartan)
    return oracle_equal(s, normal_form(s), n, N).status


# ---------------------------------------------------------------------------
# parsing


def test_parse_two_letter_word():
    w = parse_weight("(2,1)", A1)
    s = parse("E1 E1", w, A1)
    assert len(s.terms) == 1
    (word, coeff), = s.terms.items()
    assert word.letters == (Letter("E", 1, 1), Letter("E", 1, 1))
    assert coeff == {0: 1}


def test_parse_coefficients_and_two_words():
    # anchor chosen so both words survive; targets differ, which is allowed
    w = parse_weight("(2,2,0)", A2)
    s = parse("q^2 * E1^(2) + E2 F1", w, A2)
    assert len(s.terms) == 2
    by_letters = {word.letters: c for word, c in s.terms.items()}
    assert by_letters[(Letter("E", 1, 2),)] == {2: 1}
    assert by_letters[(Letter("E", 2, 1), Letter("F", 1, 1))] == {0: 1}


def test_parse_syntax_error_position():
    w = parse_weight("(2,1)", A1)
    with pytest.raises(ValueError, match="token 2"):
        parse("E1 Q2", w, A1)


def test_parse_rejects_zero_power_and_alien_index():
    w = parse_weight("(2,1,0)", A2)
    with pytest.raises(ValueError, match="power"):
        parse("E1^(0)", w, A2)
    with pytest.raises(ValueError, match="outside graph vertices"):
        parse("E9", w, A2)


def test_parse_rejects_unbalanced_parens_and_empty():
    w = parse_weight("(2,1)", A1)
    with pytest.raises(ValueError):
        parse("(1*q^0 * E1", w, A1)
    with pytest.raises(ValueError):
        parse("", w, A1)


def test_parse_negative_content_anchor_rejected():
    with pytest.raises(ValueError, match="anchor"):
        parse("E1", Weight.from_content((3, -1)), A1)


def test_parse_zero_and_empty_word():
    w = parse_weight("(2,1)", A1)
    assert parse("0", w, A1).is_zero()
    s = parse("q^3 * 1", w, A1)
    (word, coeff), = s.terms.items()
    assert word.letters == () and coeff == {3: 1}


def test_text_parse_round_trip():
    cases = [("E1 E1 F1", "(2,1)", A1),
             ("E1 E2 E1 F3", "(2,1,0,1)", A3),
             ("E1 F1", "(1,3)", A1)]
    for expr, wt, cartan in cases:
        w = parse_weight(wt, cartan)
        nf = normal_form(parse(expr, w, cartan))
        assert parse(nf.to_text(), w, cartan) == nf


def test_parse_weight_modes():
    w = parse_weight("(2,1)", A1)
    assert w.content == (2, 1) and w.d == (-1,)
    # a rank-length tuple is a pairing vector
    assert parse_weight("(3,)", A1).content is None
    assert parse_weight("(1, 0, 2, 0)", D4).d == (1, 0, 2, 0)
    with pytest.raises(ValueError, match="entries"):
        parse_weight("(1,2,3)", D4)


# ---------------------------------------------------------------------------
# single rules


def test_merge_rule_single_and_divided():
    w = parse_weight("(4,0)", A1)
    s = rule_merge_divided(parse("E1 E1", w, A1))
    assert s.to_text() == "(1*q^-1 + 1*q^1) * E1^(2)"
    s2 = rule_merge_divided(parse("E1^(2) E1^(2)", w, A1))
    (word, coeff), = s2.terms.items()
    assert word.letters == (Letter("E", 1, 4),)
    assert coeff == qbinom_d(4, 2)


def test_merge_leaves_distinct_indices_alone():
    w = parse_weight("(2,1,0)", A2)
    s = parse("E1 E2", w, A2)
    assert rule_merge_divided(s) == s


def test_commute_sorts_unjoined_same_kind_ascending():
    assert nf_text("E3 E1", "(1,0,1,0)", A3) == "1*q^0 * E1 E3"


def test_commute_moves_raising_left_of_distinct_lowering():
    assert nf_text("F2 E1", "(1,1,1,1)", A3) == "1*q^0 * E1 F2"


def test_commute_keeps_joined_pairs():
    w = parse_weight("(2,1,0)", A2)
    s = parse("E1 E2", w, A2)
    assert rule_commute_distant(s) == s
    assert normal_form(s) == s


def test_straighten_at_zero_pairing_is_a_plain_swap():
    # source pairing 0 and single powers: one term, coefficient 1
    assert nf_text("E1 F1", "(1,1)", A1) == "1*q^0 * F1 E1"


def test_straighten_at_pairing_two_keeps_both_terms():
    assert (nf_text("E1 F1", "(1,3)", A1)
            == "(1*q^-1 + 1*q^1) * 1 + 1*q^0 * F1 E1")
    assert oracle_status("E1 F1", "(1,3)", A1, 2, 4) == "pass"


def test_straighten_highest_weight_leaves_scalar_only():
    assert nf_text("E1 F1", "(0,2)", A1) == "(1*q^-1 + 1*q^1) * 1"
    assert oracle_status("E1 F1", "(0,2)", A1, 2, 2) == "pass"


def test_straighten_negative_pairing_with_merge():
    assert nf_text("E1 E1 F1", "(2,1)", A1) == "(1*q^-1 + 1*q^1) * F1 E1^(2)"
    assert oracle_status("E1 E1 F1", "(2,1)", A1, 2, 3) == "pass"


def test_straighten_divided_powers_negative_regime():
    # E F^(2) at pairing 0 needs the signed binomial [-1; 1] = -1
    w = parse_weight("(2,2)", A1)
    s = parse("E1 F1^(2)", w, A1)
    nf = normal_form(s)
    assert nf.to_text() == "-1*q^0 * F1 + 1*q^0 * F1^(2) E1"
    assert oracle_equal(s, nf, 2, 4).status == "pass"


def test_serre_split_plain():
    assert (nf_text("E1 E2 E1", "(2,1,0)", A2)
            == "1*q^0 * E1^(2) E2 + 1*q^0 * E2 E1^(2)")
    assert oracle_status("E1 E2 E1", "(2,1,0)", A2, 3, 3) == "pass"


def test_serre_split_with_outer_power():
    w = parse_weight("(3,1,0)", A2)
    s = parse("E1^(2) E2 E1", w, A2)
    nf = normal_form(s)
    by_letters = {word.letters: c for word, c in nf.terms.items()}
    assert by_letters[(Letter("E", 1, 3), Letter("E", 2, 1))] == qint_d(2)
    assert by_letters[(Letter("E", 2, 1), Letter("E", 1, 3))] == {0: 1}
    assert oracle_equal(s, nf, 3, 4).status == "pass"


def test_serre_ignores_unrepeated_outer_index():
    w = parse_weight("(1,1,1,1)", A3)
    s = parse("E1 E2 E3", w, A3)
    assert rule_serre(s) == s


def test_serre_fires_leftmost_once_per_word():
    w = parse_weight("(3,2,0)", A2)
    s = parse("E1 E2 E1 E2 E1", w, A2)
    once = rule_serre(s)
    # one split only: every output word still has five-or-fewer letters
    # and the leftmost pattern is gone
    for word in once.terms:
        assert word.letters[0].power >= 2 or word.letters[0].index == 2
    nf = normal_form(s)
    assert oracle_equal(s, nf, 3, 5).status == "pass"


def test_serre_split_then_distant_letter_stays_canonical():
    assert (nf_text("E1 E2 E1 F3", "(2,1,0,1)", A3)
            == "1*q^0 * E1^(2) E2 F3 + 1*q^0 * E2 E1^(2) F3")
    assert oracle_status("E1 E2 E1 F3", "(2,1,0,1)", A3, 4, 4) == "pass"


# ---------------------------------------------------------------------------
# null words and weight flow


def test_null_word_evaluates_to_zero_matrix():
    mod = WeightModule(2, 2)
    mat = letters_matrix(mod, (1, 1), (Letter("E", 1, 1), Letter("E", 1, 1)))
    assert mat.is_zero()


def test_null_word_dropped_from_sums():
    w = parse_weight("(1,1)", A1)
    assert parse("E1 E1", w, A1).is_zero()


def test_serre_null_anchor_collapses_to_zero():
    assert nf_text("E1 E2 E1", "(1,1,1)", A2) == "0"
    assert oracle_status("E1 E2 E1", "(1,1,1)", A2, 3, 3) == "pass"


def test_word_weight_flow():
    w = Weight.from_content((2, 1, 0, 1))
    word = FormalWord(w, (Letter("E", 1, 1), Letter("E", 2, 1),
                          Letter("E", 1, 1), Letter("F", 3, 1)))
    assert word.weight_before(A3, 3) == w
    assert word.target(A3).content == (0, 2, 2, 0)
    assert not word.is_null(A3)


# ---------------------------------------------------------------------------
# pairing-vector anchors (no content, no null dropping)


def test_formal_layer_on_non_path_graph():
    w = Weight((2, 0, 0, 0))
    s = parse("E1 F1", w, D4)
    nf = normal_form(s)
    assert nf.to_text() == "(1*q^-1 + 1*q^1) * 1 + 1*q^0 * F1 E1"
    # vertices 1 and 3 are not joined in this graph
    s2 = parse("E3 E1", w, D4)
    assert normal_form(s2).to_text() == "1*q^0 * E1 E3"
    # 2 and 4 are joined: the pattern splits
    s3 = parse("E2 E4 E2", w, D4)
    words = {word.letters for word in normal_form(s3).terms}
    assert words == {(Letter("E", 2, 2), Letter("E", 4, 1)),
                     (Letter("E", 4, 1), Letter("E", 2, 2))}


# ---------------------------------------------------------------------------
# termination measure


def test_measure_components():
    w = Weight.from_content((1, 1, 1, 1))
    word = FormalWord(w, (Letter("F", 2, 1), Letter("E", 1, 1)))
    assert measure(word, A3) == (1, 0, 2)
    after = FormalWord(w, (Letter("E", 1, 1), Letter("F", 2, 1)))
    assert measure(after, A3) == (0, 0, 2)
    pattern = FormalWord(w, (Letter("E", 1, 1), Letter("E", 2, 1),
                             Letter("E", 1, 1)))
    assert measure(pattern, A3) == (0, 1, 3)


def test_priority_must_permute_rules():
    w = parse_weight("(2,1)", A1)
    s = parse("E1 E1", w, A1)
    with pytest.raises(ValueError, match="permutation"):
        normal_form(s, priority=("merge", "merge", "serre", "commute"))


# ---------------------------------------------------------------------------
# matrix oracle


def test_oracle_detects_unequal_words():
    w = parse_weight("(1,1,0)", A2)
    a = parse("E1", w, A2)
    b = parse("E2", w, A2)
    rep = oracle_equal(a, b, 3, 2)
    assert rep.status == "fail"
    assert rep.counterexample["weight"] == [1, 1, 0]
    assert oracle_equal(a, a, 3, 2).status == "pass"


def test_oracle_rejects_unrealizable_weight():
    w = parse_weight("(2,1)", A1)
    s = parse("E1", w, A1)
    with pytest.raises(ValueError, match="unrealizable"):
        oracle_equal(s, s, 2, 5)
    w2 = Weight((1,))
    s2 = parse("E1", w2, A1)
    with pytest.raises(ValueError, match="unrealizable"):
        oracle_equal(s2, s2, 2, 3)


def test_evaluate_blocks_groups_by_target():
    w = parse_weight("(2,2,0)", A2)
    s = parse("q^2 * E1^(2) + E2 F1", w, A2)
    mod = WeightModule(3, 4)
    blocks = evaluate_blocks(s, mod)
    assert set(blocks) == {(0, 4, 0), (3, 0, 1)}


def test_scalar_multiples_compare_exactly():
    w = parse_weight("(2,1)", A1)
    a = parse("E1 E1", w, A1)
    b = parse("(1*q^-1 + 1*q^1) * E1^(2)", w, A1)
    assert oracle_equal(a, b, 2, 3).status == "pass"
    c = parse("2 * E1^(2)", w, A1)
    assert oracle_equal(a, c, 2, 3).status == "fail"


# ---------------------------------------------------------------------------
# signed q-binomial backing the straighten rule


def test_signed_qbinomial_values():
    assert qbinom_s_d(2, 1) == qbinom_d(2, 1)
    assert qbinom_s_d(0, 0) == {0: 1}
    assert qbinom_s_d(-1, 1) == {0: -1}
    assert qbinom_s_d(-2, 1) == {e: -c for e, c in qint_d(2).items()}
    assert qbinom_s_d(-1, 2) == qbinom_d(2, 2)
    assert qbinom_s_d(3, -1) == {}


# ---------------------------------------------------------------------------
# randomized sweeps (reduced counts; full scale runs in the acceptance suite)


def test_soundness_and_termination_sample():
    sound, term = verify_rewrite_soundness(count=200, seed=0)
    assert sound.status == "pass", sound.counterexample
    assert term.status == "pass", term.counterexample
    assert term.params["max_steps"] <= term.params["cap"]


def test_confluence_sample():
    rep = verify_rewrite_confluence(count=50, seed=1)
    assert rep.status == "pass", rep.counterexample
