import random
from fractions import Fraction

import pytest

from fuzzydes import (
    FuzzyLanguage,
    PreconditionError,
    ValidationError,
    accessible_part,
    check_controllable,
    closed_loop_language_degree,
    closed_loop_language_of_supervisor,
    closed_loop_reachable,
    concat_raw,
    concatenate,
    consistency_check,
    controller_from_language,
    controller_language_is_controllable,
    language_controllable,
    language_degree,
    make_automaton,
    make_controller,
    make_event,
    make_state,
    reach_of_language,
    run,
    scale_product,
    supervisor_from_controller,
    supervisor_from_language,
    uncontrollability_lift,
)
from generators import all_strings, random_automaton, random_controller

S = lambda text: make_state(text.split())
F = Fraction


def truncated_plant_language(aut, max_len):
    pairs = []
    for s in all_strings(aut.event_names, max_len):
        pairs.append((s, language_degree(aut, s)))
    return FuzzyLanguage.from_pairs(pairs)


class TestFuzzyLanguage:
    def test_empty_language_is_distinct_from_epsilon_only(self):
        empty = FuzzyLanguage.empty()
        epsilon = FuzzyLanguage.from_pairs([((), 1)])
        assert empty.is_empty and not epsilon.is_empty
        assert empty != epsilon

    def test_requires_unit_degree_at_empty_string(self):
        with pytest.raises(ValidationError):
            FuzzyLanguage.from_pairs([(("a",), "0.5")])

    def test_rejects_growing_extension(self):
        with pytest.raises(ValidationError):
            FuzzyLanguage.from_pairs([((), 1), (("a",), "0.2"), (("a", "a"), "0.4")])

    def test_zero_degrees_are_dropped(self):
        lang = FuzzyLanguage.from_pairs([((), 1), (("a",), 0)])
        assert lang.support() == ((),)


class TestConcatenate:
    def test_empty_annihilates(self, drift_language):
        assert concatenate(drift_language, FuzzyLanguage.empty()).is_empty

    def test_epsilon_only_is_identity(self, drift_language):
        unit = FuzzyLanguage.from_pairs([((), 1)])
        assert concatenate(unit, drift_language) == drift_language
        assert concatenate(drift_language, unit) == drift_language

    def test_fully_controllable_lift_annihilates(self, drift_plant, drift_language):
        # Every floor is zero, so the lift is the zero map and concatenation
        # with it yields the empty language.
        lift = uncontrollability_lift(drift_plant)
        assert lift == {}
        assert concat_raw(drift_language.degrees, lift) == {}
        assert concatenate(drift_language, lift).is_empty

    def test_raw_concatenation_takes_best_split(self, treatment_plant):
        lift = uncontrollability_lift(treatment_plant)
        m = concat_raw({(): F(1), ("b",): F(1, 2)}, lift)
        # ("b", "b") comes from the split ("b",) + ("b",): min(0.5, 0.1).
        assert m[("b", "b")] == F(1, 10)
        assert m[("d",)] == F(1)


def containment_controllable(aut, K):
    """Definition written as set containment: the concatenation of K with the
    floor lift, cut to the plant language, must stay below K."""
    product = concat_raw(K.degrees, uncontrollability_lift(aut))
    for s, degree in product.items():
        if min(degree, language_degree(aut, s)) > K.degree(s):
            return False
    return True


class TestLanguageControllability:
    def test_drift_language_is_controllable(self, drift_plant, drift_language):
        assert language_controllable(drift_plant, drift_language, 6).ok

    def test_truncated_plant_language_controllable_when_floors_vanish(self, drift_plant):
        K = truncated_plant_language(drift_plant, 2)
        assert language_controllable(drift_plant, K, 6).ok

    def test_violation_is_detected_with_counterexample(self, treatment_plant):
        K = FuzzyLanguage.from_pairs([((), 1), (("d",), "0.5")])
        verdict = language_controllable(treatment_plant, K, 6)
        assert not verdict.ok
        s, name = verdict.counterexample
        lhs = min(
            K.degree(s),
            treatment_plant.uc(name),
            language_degree(treatment_plant, s + (name,)),
        )
        assert lhs > K.degree(s + (name,))

    def test_agrees_with_containment_form(self, drift_plant, treatment_plant, drift_language):
        fixtures = [
            (drift_plant, drift_language),
            (drift_plant, truncated_plant_language(drift_plant, 2)),
            (drift_plant, FuzzyLanguage.from_pairs([((), 1)])),
            (treatment_plant, FuzzyLanguage.from_pairs([((), 1), (("d",), "0.5")])),
            (treatment_plant, FuzzyLanguage.from_pairs([((), 1), (("b",), "0.1")])),
        ]
        for aut, K in fixtures:
            assert language_controllable(aut, K, 6).ok == containment_controllable(aut, K)

    def test_sublanguage_precondition(self, drift_plant):
        K = FuzzyLanguage.from_pairs([((), 1), (("a1",), "0.9")])
        with pytest.raises(PreconditionError):
            language_controllable(drift_plant, K, 6)

    def test_max_len_guard(self, drift_plant, drift_language):
        with pytest.raises(ValidationError):
            language_controllable(drift_plant, drift_language, 2)


class TestSupervisorFromLanguage:
    def test_reproduces_language(self, drift_plant, drift_language):
        supervisor = supervisor_from_language(drift_plant, drift_language)
        closed = closed_loop_language_of_supervisor(drift_plant, supervisor, 3)
        for s in all_strings(drift_plant.event_names, 3):
            assert closed.degree(s) == drift_language.degree(s)

    def test_truncated_plant_language_round_trip(self, drift_plant):
        K = truncated_plant_language(drift_plant, 2)
        supervisor = supervisor_from_language(drift_plant, K)
        closed = closed_loop_language_of_supervisor(drift_plant, supervisor, 3)
        for s in all_strings(drift_plant.event_names, 3):
            assert closed.degree(s) == K.degree(s)
            if len(s) <= 2:
                assert closed.degree(s) == language_degree(drift_plant, s)

    def test_epsilon_only_language_disables_everything(self, drift_plant):
        K = FuzzyLanguage.from_pairs([((), 1)])
        supervisor = supervisor_from_language(drift_plant, K)
        closed = closed_loop_language_of_supervisor(drift_plant, supervisor, 4)
        assert closed.support() == ((),)

    def test_uncontrollable_language_rejected(self, treatment_plant):
        K = FuzzyLanguage.from_pairs([((), 1), (("d",), "0.5")])
        with pytest.raises(PreconditionError):
            supervisor_from_language(treatment_plant, K)

    def test_empty_language_rejected(self, drift_plant):
        from fuzzydes import DomainError

        with pytest.raises(DomainError):
            supervisor_from_language(drift_plant, FuzzyLanguage.empty())

    def test_unit_supervisor_reproduces_plant_language(self, drift_plant):
        from fuzzydes import FuzzySupervisor

        unit = FuzzySupervisor(lambda s, a: F(1))
        closed = closed_loop_language_of_supervisor(drift_plant, unit, 4)
        for s in all_strings(drift_plant.event_names, 4):
            assert closed.degree(s) == language_degree(drift_plant, s)


class TestSupervisorFromController:
    def test_all_enabling_controller_gives_unit_supervisor(self, treatment_plant):
        f = make_controller({})
        supervisor = supervisor_from_controller(treatment_plant, f)
        for s in all_strings(treatment_plant.event_names, 2):
            for name in treatment_plant.event_names:
                assert supervisor.value(s, name) == F(1)

    def test_single_override_shows_at_empty_string(self, treatment_plant):
        f = make_controller({(("0.9", "0.1", "0"), "b"): "0.1"})
        supervisor = supervisor_from_controller(treatment_plant, f)
        assert supervisor.value((), "b") == F(1, 10)
        assert supervisor.value((), "a") == F(1)

    def test_closed_loop_language_equality(self, treatment_plant, reference_controller):
        supervisor = supervisor_from_controller(treatment_plant, reference_controller)
        closed = closed_loop_language_of_supervisor(treatment_plant, supervisor, 4)
        for s in all_strings(treatment_plant.event_names, 4):
            assert closed.degree(s) == closed_loop_language_degree(
                treatment_plant, reference_controller, s
            )

    def test_controlled_language_is_controllable(self, treatment_plant, reference_controller):
        assert controller_language_is_controllable(
            treatment_plant, reference_controller, 4
        )
        assert controller_language_is_controllable(treatment_plant, make_controller({}), 4)

    def test_random_pairs_uphold_both_properties(self):
        rng = random.Random(41)
        for _ in range(20):
            aut = random_automaton(rng, max_n=3, max_events=2)
            f = random_controller(rng, aut)
            supervisor = supervisor_from_controller(aut, f)
            closed = closed_loop_language_of_supervisor(aut, supervisor, 4)
            for s in all_strings(aut.event_names, 4):
                assert closed.degree(s) == closed_loop_language_degree(aut, f, s)
            assert controller_language_is_controllable(aut, f, 4)


class TestConsistency:
    def test_drift_language_is_inconsistent_with_witness(self, drift_plant, drift_language):
        verdict = consistency_check(drift_plant, drift_language)
        assert not verdict.ok
        assert verdict.counterexample == (("a2",), ("a3",), "a1")

    def test_distinct_states_are_vacuously_consistent(self, drift_plant):
        K = FuzzyLanguage.from_pairs([((), 1), (("a1",), "0.2"), (("a2",), "0.3")])
        assert consistency_check(drift_plant, K).ok

    def test_consistent_fixture_has_agreeing_scaled_successors(self, drift_plant):
        K = FuzzyLanguage.from_pairs(
            [((), 1), (("a2",), "0.3"), (("a3",), "0.3"),
             (("a2", "a1"), "0.25"), (("a3", "a1"), "0.25")]
        )
        assert consistency_check(drift_plant, K).ok
        left = scale_product(K.degree(("a2", "a1")), run(drift_plant, ("a2", "a1")))
        right = scale_product(K.degree(("a3", "a1")), run(drift_plant, ("a3", "a1")))
        assert left == right


class TestReachOfLanguage:
    def test_drift_language_passes_three_states(self, drift_plant, drift_language):
        states = reach_of_language(drift_plant, drift_language)
        assert set(states) == {S("0.9 0.1 0"), S("0.3 0.1 0"), S("0.2 0.1 0")}

    def test_epsilon_only(self, drift_plant):
        K = FuzzyLanguage.from_pairs([((), 1)])
        assert reach_of_language(drift_plant, K) == [drift_plant.initial]

    def test_drift_passed_states_are_controllable(self, drift_plant, drift_language):
        states = reach_of_language(drift_plant, drift_language)
        assert check_controllable(drift_plant, states).controllable


class TestControllerFromLanguage:
    def test_two_string_restriction(self, drift_plant):
        K = FuzzyLanguage.from_pairs([((), 1), (("a1",), "0.2")])
        f = controller_from_language(drift_plant, K)
        assert f.value(drift_plant.initial, "a1") == F(1, 5)
        assert f.value(drift_plant.initial, "a2") == F(0)
        assert set(closed_loop_reachable(drift_plant, f)) == set(
            reach_of_language(drift_plant, K)
        )

    def test_epsilon_only_freezes_the_plant(self, drift_plant):
        K = FuzzyLanguage.from_pairs([((), 1)])
        f = controller_from_language(drift_plant, K)
        assert closed_loop_reachable(drift_plant, f) == [drift_plant.initial]

    def test_consistent_language_round_trip_with_run_identity(self, drift_plant):
        K = FuzzyLanguage.from_pairs(
            [((), 1), (("a2",), "0.3"), (("a3",), "0.3"),
             (("a2", "a1"), "0.25"), (("a3", "a1"), "0.25")]
        )
        f = controller_from_language(drift_plant, K)
        assert set(closed_loop_reachable(drift_plant, f)) == set(
            reach_of_language(drift_plant, K)
        )
        for s in K.support():
            expected = scale_product(K.degree(s), run(drift_plant, s))
            folded = drift_plant.initial
            alive = True
            from fuzzydes import closed_loop_step

            for name in s:
                folded = closed_loop_step(drift_plant, f, folded, name)
                if folded is None:
                    alive = False
                    break
            assert alive and folded == expected

    def test_two_state_fixture_verified_exhaustively(self):
        move = make_event("m", [["0.5", "1"], ["0", "0.5"]], 0)
        aut = make_automaton(["x", "y"], ["1", "0.2"], [move])
        K = FuzzyLanguage.from_pairs([((), 1), (("m",), "0.6"), (("m", "m"), "0.4")])
        assert language_controllable(aut, K, 6).ok
        assert consistency_check(aut, K).ok
        f = controller_from_language(aut, K)
        assert set(closed_loop_reachable(aut, f)) == set(reach_of_language(aut, K))
        assert closed_loop_language_degree(aut, f, ("m",)) == F(3, 5)
        assert closed_loop_language_degree(aut, f, ("m", "m")) == F(2, 5)
        assert closed_loop_language_degree(aut, f, ("m", "m", "m")) == F(0)

    def test_inconsistent_language_rejected(self, drift_plant, drift_language):
        with pytest.raises(PreconditionError) as exc:
            controller_from_language(drift_plant, drift_language)
        assert exc.value.counterexample == (("a2",), ("a3",), "a1")


class TestNonNecessityRegression:
    def test_controllable_and_state_controllable_yet_inconsistent(
        self, drift_plant, drift_language
    ):
        assert language_controllable(drift_plant, drift_language, 6).ok
        states = reach_of_language(drift_plant, drift_language)
        assert check_controllable(drift_plant, states).controllable
        assert not consistency_check(drift_plant, drift_language).ok
