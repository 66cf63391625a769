import random

import pytest

from regsync.dra import synchronizing_word_dra
from regsync.gadgets import reduce_sync_to_nonuniv
from regsync.nra import (
    BudgetExhausted,
    NoneWithinBound,
    SearchBudget,
    Witness,
    accepts,
    bounded_sync_search,
    bounded_universality_witness,
    nonemptiness_witness,
)
from regsync.oracle import oracle_is_synchronizing
from regsync.ra import TRUE, Eq, RegisterAutomaton, mk_transition, neq
from regsync.semantics import FRESH, word_data
from helpers import automaton, random_complete_automaton


def full_update_loop():
    return RegisterAutomaton("easy", ("q",), 1, ("a",),
                             (mk_transition(0, 0, TRUE, {0}, 0),))


def first_two_equal_nra():
    """Accepts exactly the words of length >= 2 whose first two data agree."""
    return automaton(
        "firsttwo", ["init", "s1", "acc"], 1, ["a"],
        [("init", "a", TRUE, {0}, "s1"),
         ("s1", "a", Eq(0), (), "acc"),
         ("acc", "a", TRUE, (), "acc")],
        acceptance=("init", ["acc"]))


class TestBoundedSyncSearch:
    @pytest.mark.parametrize("bfs", [False, True])
    def test_fig4_length3(self, fig4, bfs):
        out = bounded_sync_search(fig4, SearchBudget(3), bfs=bfs)
        assert isinstance(out, Witness)
        a, b = fig4.letter_index("a"), fig4.letter_index("b")
        assert out.choice_word == ((a, FRESH), (b, FRESH), (b, FRESH))
        assert oracle_is_synchronizing(fig4, out.word)

    @pytest.mark.parametrize("bfs", [False, True])
    def test_fig4_length2_exhausted(self, fig4, bfs):
        assert isinstance(bounded_sync_search(fig4, SearchBudget(2), bfs=bfs), NoneWithinBound)

    def test_single_location_full_update(self):
        out = bounded_sync_search(full_update_loop(), SearchBudget(1))
        assert isinstance(out, Witness) and len(out.word) == 1

    def test_budget_exhaustion(self, fig4):
        out = bounded_sync_search(fig4, SearchBudget(3, max_nodes=5))
        assert isinstance(out, BudgetExhausted)
        assert out.explored >= 5

    def test_monotonic_in_budget(self, fig4):
        base = bounded_sync_search(fig4, SearchBudget(3))
        assert isinstance(base, Witness)
        for longer in (4, 5):
            again = bounded_sync_search(fig4, SearchBudget(longer))
            assert isinstance(again, Witness)
            assert len(again.word) <= len(base.word)

    def test_max_distinct_data_constrains(self, fig4):
        # one datum is not enough at length 3 (two are: e.g. (b,x)(b,y)(b,x))
        out = bounded_sync_search(fig4, SearchBudget(3, max_distinct_data=1))
        assert isinstance(out, NoneWithinBound)
        two = bounded_sync_search(fig4, SearchBudget(3, max_distinct_data=2))
        assert isinstance(two, Witness)
        assert oracle_is_synchronizing(fig4, two.word)

    def test_agrees_with_dra_pipeline_on_deterministic(self):
        rng = random.Random(43)
        for _ in range(25):
            aut = random_complete_automaton(rng, rng.randint(1, 3), rng.randint(0, 1),
                                            rng.randint(1, 2), deterministic=True)
            word = synchronizing_word_dra(aut)
            bounded = bounded_sync_search(aut, SearchBudget(8), bfs=True)
            if word is not None and len(word) <= 8:
                assert isinstance(bounded, Witness)
            if word is None:
                assert isinstance(bounded, NoneWithinBound)


class TestUniversality:
    def test_accepting_everything(self):
        aut = automaton("univ", ["q"], 1, ["a"],
                        [("q", "a", TRUE, {0}, "q")], acceptance=("q", ["q"]))
        assert isinstance(bounded_universality_witness(aut, 4), NoneWithinBound)

    def test_first_two_equal_escape(self):
        out = bounded_universality_witness(first_two_equal_nra(), 2)
        assert isinstance(out, Witness)
        assert not accepts(first_two_equal_nra(), out.word)

    def test_empty_word_witness(self):
        aut = first_two_equal_nra()
        out = bounded_universality_witness(aut, 0)
        assert isinstance(out, Witness) and out.word == ()

    def test_sync_to_nonuniv_output_has_witness(self):
        tiny = automaton(
            "tiny", ["q0", "q1"], 1, ["a"],
            [("q0", "a", neq(0), {0}, "q1"),
             ("q0", "a", Eq(0), (), "q0"),
             ("q1", "a", TRUE, {0}, "q1")])
        comp = reduce_sync_to_nonuniv(tiny)
        out = bounded_universality_witness(comp, 7, bfs=True)
        assert isinstance(out, Witness)
        assert not accepts(comp, out.word)

    def test_needs_acceptance(self, fig4):
        with pytest.raises(ValueError):
            bounded_universality_witness(fig4, 2)


class TestNonemptiness:
    def test_initial_accepting_empty_word(self):
        aut = automaton("eps", ["q"], 1, ["a"],
                        [("q", "a", TRUE, {0}, "q")], acceptance=("q", ["q"]))
        out = nonemptiness_witness(aut, 0)
        assert isinstance(out, Witness) and out.word == ()

    def test_unreachable_accepting(self):
        aut = automaton("dead", ["q0", "q1"], 1, ["a"],
                        [("q0", "a", TRUE, {0}, "q0"), ("q1", "a", TRUE, (), "q1")],
                        acceptance=("q0", ["q1"]))
        assert isinstance(nonemptiness_witness(aut, 50), NoneWithinBound)

    def test_two_distinct_data_needed(self):
        aut = automaton(
            "needs2", ["init", "s1", "acc"], 1, ["a"],
            [("init", "a", TRUE, {0}, "s1"),
             ("s1", "a", neq(0), (), "acc"),
             ("s1", "a", Eq(0), (), "s1"),
             ("acc", "a", TRUE, (), "acc")],
            acceptance=("init", ["acc"]))
        out = nonemptiness_witness(aut, 4)
        assert isinstance(out, Witness)
        assert len(out.word) == 2
        assert len(word_data(out.word)) == 2
        assert accepts(aut, out.word)

    def test_witness_is_accepted(self):
        rng = random.Random(47)
        found = 0
        for _ in range(40):
            aut = random_complete_automaton(rng, rng.randint(1, 3), rng.randint(0, 2),
                                            rng.randint(1, 2), acceptance=True)
            out = nonemptiness_witness(aut, 5)
            if isinstance(out, Witness):
                found += 1
                assert accepts(aut, out.word)
        assert found > 0

    def test_universality_and_nonemptiness_consistent(self):
        rng = random.Random(53)
        for _ in range(25):
            aut = random_complete_automaton(rng, rng.randint(1, 3), rng.randint(0, 1),
                                            rng.randint(1, 2), acceptance=True)
            out = bounded_universality_witness(aut, 3, bfs=True)
            if isinstance(out, Witness):
                assert not accepts(aut, out.word)
