import pytest
from hypothesis import given, settings

from conftest import small_kbs
from cyclerules.index import GraphIndex
from cyclerules.kb import KnowledgeGraph
from cyclerules.miner import MiningConfig, mine
from cyclerules.rules import RelAtom, Rule, TypeAtom, rules_from_cycles
from cyclerules.scoring import iter_bindings, rank, score_rule, score_rules
from cyclerules.typed import TypeConfig, augment
from oracles import brute_force_scores


def rel(kb, p, s, o):
    return RelAtom(kb.predicates.get(p), s, o)


def test_symmetric_rule_confidence(mutual):
    r = Rule((RelAtom(0, 1, 2),), RelAtom(0, 2, 1))
    s = score_rule(r, GraphIndex(mutual))
    assert (s.support, s.body_support, s.conf_std) == (2, 2, 1.0)


def test_hand_case(hand):
    r = Rule((rel(hand, "l", 1, 2),), rel(hand, "b0", 1, 2))
    s = score_rule(r, GraphIndex(hand))
    assert s.conf_std == 0.5
    assert s.conf_pca == 1.0
    assert s.conf_soft == pytest.approx(2 / 3, abs=1e-12)
    assert s.unknown_subjects == 1


def test_head_never_holds():
    kb = KnowledgeGraph.from_strings([("a", "p", "b"), ("c", "q", "d")])
    s = score_rule(Rule((RelAtom(0, 1, 2),), RelAtom(1, 1, 2)), GraphIndex(kb))
    assert s.conf_std == 0.0


def test_pca_equals_std_when_subjects_known():
    kb = KnowledgeGraph.from_strings([("a", "p", "b"), ("a", "q", "c"), ("d", "p", "e"), ("d", "q", "e")])
    s = score_rule(Rule((RelAtom(0, 1, 2),), RelAtom(1, 1, 2)), GraphIndex(kb))
    assert s.conf_pca == s.conf_std == 0.5
    assert s.conf_soft == s.conf_std  # U is empty


def test_soft_equals_std_when_probabilities_are_zero():
    # Thing counts every entity, so P(e,z) is zero only when z has no facts
    kb = KnowledgeGraph.from_strings([("a", "p", "x"), ("b", "p", "y")])
    kb.intern_predicate("z")
    s = score_rule(Rule((RelAtom(0, 1, 2),), RelAtom(1, 1, 2)), GraphIndex(kb))
    assert s.conf_soft == s.conf_std == 0.0


def test_empty_body_flagged():
    kb = KnowledgeGraph.from_strings([("a", "p", "b"), ("c", "q", "d")])
    r = Rule((RelAtom(0, 1, 3), RelAtom(1, 3, 2)), RelAtom(0, 1, 2))
    s = score_rule(r, GraphIndex(kb))
    assert not s.defined and "empty_body" in s.flags
    ok, diag = score_rules([r], GraphIndex(kb))
    assert ok == [] and diag == [s]


def test_unbound_head_rejected(mutual):
    with pytest.raises(ValueError):
        score_rule(Rule((RelAtom(0, 1, 2),), RelAtom(0, 1, 3)), GraphIndex(mutual))


def test_unknown_modes_rejected(mutual):
    r = Rule((RelAtom(0, 1, 2),), RelAtom(0, 2, 1))
    with pytest.raises(ValueError):
        score_rule(r, GraphIndex(mutual), counting="bogus")
    with pytest.raises(ValueError):
        score_rule(r, GraphIndex(mutual), soft_mode="bogus")
    with pytest.raises(ValueError):
        rank([], "bogus")


def test_type_atoms_restrict_body(hand):
    person = hand.types.get("Person")
    r = Rule((rel(hand, "l", 1, 2), TypeAtom(2, person)), rel(hand, "b0", 1, 2))
    s = score_rule(r, GraphIndex(hand))
    assert s.body_support == 0  # t is not a Person


def test_bindings_with_repeated_variable():
    kb = KnowledgeGraph.from_strings([("a", "p", "a"), ("a", "p", "b")])
    got = [dict(b) for b in iter_bindings(GraphIndex(kb), [RelAtom(0, 1, 1)])]
    assert got == [{1: 0}]


def test_rank_orders_by_metric_then_text(hand):
    idx = GraphIndex(hand)
    rules = rules_from_cycles(mine(idx, MiningConfig(1, 2)))
    ok, _ = score_rules(rules, idx)
    ranked = rank(ok, "std")
    keys = [(-s.conf_std, s.text) for s in ranked]
    assert keys == sorted(keys)
    assert all(s.conf_std >= 0.5 for s in rank(ok, "std", 0.5))


@settings(max_examples=60, deadline=None)
@given(small_kbs(max_entities=5, max_facts=12))
def test_scores_match_brute_force(kb):
    idx = GraphIndex(kb)
    cycles = mine(idx, MiningConfig(1, 3))
    typed = [t for c in cycles for t in augment(idx, c, TypeConfig(1, 1))]
    rules = rules_from_cycles(cycles, typed)
    for counting in ("instantiation", "pair"):
        for soft_mode in ("entity", "instantiation"):
            for r in rules:
                s = score_rule(r, idx, counting, soft_mode)
                want = brute_force_scores(r, kb, counting, soft_mode)
                assert (s.support, s.body_support) == want[:2]
                for got, exp in zip((s.conf_std, s.conf_pca, s.conf_soft), want[2:]):
                    assert got == pytest.approx(exp, abs=1e-12)
                if s.defined:
                    assert s.conf_std <= s.conf_pca + 1e-12
                    assert s.conf_std <= s.conf_soft + 1e-12 <= 1 + 2e-12
