import random
from fractions import Fraction
from itertools import combinations

import pytest

from fuzzydes import (
    PreconditionError,
    StabilizabilityWitness,
    TransitionGraph,
    accessible_part,
    candidate_universe,
    check_attractor,
    check_controllable,
    check_controllable_invariant,
    closed_loop_graph,
    find_cycles,
    infimal_attractor,
    is_stable,
    largest_controllable_invariant,
    make_state,
    search_stabilizing_witness,
    synthesize_controller,
    synthesize_stabilizing_controller,
    verify_stabilizability_witness,
)
from generators import COARSE, random_automaton, random_controller
from conftest import load_automaton

S = lambda text: make_state(text.split())
F = Fraction

A, B, C = (F(1),), (F(1, 2),), (F(1, 4),)
CHAIN = TransitionGraph(A, (A, B, C), ((A, "e", B), (B, "e", C)))
LOOP_CHAIN = TransitionGraph(A, (A, B), ((A, "e", A), (A, "f", B)))


class TestCycles:
    def test_linear_chain_has_none(self):
        assert find_cycles(CHAIN) == set()

    def test_self_loop_detected(self, treatment_plant):
        graph = accessible_part(treatment_plant)
        assert treatment_plant.initial in find_cycles(graph)

    def test_matches_path_enumeration(self, drift_plant):
        graph = accessible_part(drift_plant)
        # A vertex lies on a cycle iff some walk of length <= |V| returns to it.
        expected = set()
        for start in graph.vertices:
            frontier = {start}
            for _ in range(len(graph.vertices)):
                frontier = {
                    dst for q in frontier for _, dst in graph.out_edges[q]
                }
                if start in frontier:
                    expected.add(start)
                    break
        assert find_cycles(graph) == expected


class TestAttractor:
    def test_drift_plant_absorbing_state(self, drift_plant):
        graph = accessible_part(drift_plant)
        report = check_attractor(graph, {S("0.4 0.1 0")})
        assert report.verdict and report.closed and report.connected

    def test_every_vertex_set_is_an_attractor(self, treatment_plant):
        graph = accessible_part(treatment_plant)
        assert check_attractor(graph, set(graph.vertices)).verdict

    def test_empty_set_fails_on_cyclic_graph(self, treatment_plant):
        graph = accessible_part(treatment_plant)
        report = check_attractor(graph, set())
        assert not report.verdict and not report.acyclic_outside

    def test_states_outside_graph_are_reported(self, drift_plant):
        graph = accessible_part(drift_plant)
        report = check_attractor(graph, {S("0.4 0.1 0"), S("0.3 0.3 0.3")})
        assert report.absent == (S("0.3 0.3 0.3"),)


class TestInfimalAttractor:
    def test_linear_chain(self):
        assert infimal_attractor(CHAIN) == {C}

    def test_loop_then_chain(self):
        assert infimal_attractor(LOOP_CHAIN) == {A, B}

    def test_drift_plant(self, drift_plant):
        graph = accessible_part(drift_plant)
        assert infimal_attractor(graph) == {S("0.4 0.1 0")}

    def test_subset_sweep_property(self):
        rng = random.Random(57)
        swept = 0
        while swept < 10:
            aut = random_automaton(rng, max_n=3, max_events=2, grid=COARSE)
            graph = accessible_part(aut)
            if len(graph.vertices) > 8:
                continue
            swept += 1
            vertices = list(graph.vertices)
            attractors = []
            for size in range(len(vertices) + 1):
                for subset in combinations(vertices, size):
                    if check_attractor(graph, set(subset)).verdict:
                        attractors.append(frozenset(subset))
            infimal = frozenset(infimal_attractor(graph))
            assert infimal in attractors
            for attractor in attractors:
                assert infimal <= attractor
            table = set(attractors)
            for first, second in combinations(attractors, 2):
                assert first & second in table


class TestStability:
    def test_full_vertex_set_is_stable(self, treatment_plant):
        graph = accessible_part(treatment_plant)
        assert is_stable(graph, set(graph.vertices))

    def test_empty_legal_set_is_unstable(self, treatment_plant):
        graph = accessible_part(treatment_plant)
        assert not is_stable(graph, set())

    def test_drift_plant_with_absorbing_target(self, drift_plant):
        graph = accessible_part(drift_plant)
        assert is_stable(graph, {S("0.4 0.1 0")})
        assert not is_stable(graph, {drift_plant.initial})


class TestControllableInvariant:
    def test_empty_set_vacuous(self, treatment_plant):
        assert check_controllable_invariant(treatment_plant, ()).ok

    def test_everything_vacuous_when_floors_vanish(self, drift_plant):
        graph = accessible_part(drift_plant)
        assert check_controllable_invariant(drift_plant, graph.vertices).ok
        assert check_controllable_invariant(drift_plant, (S("0.4 0.1 0"),)).ok

    def test_violation_reported(self, treatment_plant):
        # d (floor 1) moves the initial state nowhere else in a singleton set
        # containing only a state d leaves.
        verdict = check_controllable_invariant(treatment_plant, (S("0.1 0.9 0.1"),))
        assert not verdict.ok
        q, name = verdict.violation
        assert q == S("0.1 0.9 0.1")

    def test_largest_fixpoint_keeps_invariant_sets(self, drift_plant):
        graph = accessible_part(drift_plant)
        assert largest_controllable_invariant(drift_plant, graph.vertices) == graph.vertices

    def test_largest_fixpoint_of_empty_is_empty(self, treatment_plant):
        assert largest_controllable_invariant(treatment_plant, ()) == ()

    def test_largest_fixpoint_is_locally_maximal(self):
        rng = random.Random(61)
        tested = 0
        while tested < 10:
            aut = random_automaton(rng, max_n=3, max_events=2, grid=COARSE)
            universe = candidate_universe(aut, ())
            if not universe:
                continue
            size = rng.randint(1, min(6, len(universe)))
            N = tuple(rng.sample(universe, size))
            kept = largest_controllable_invariant(aut, N)
            removed = [q for q in N if q not in kept]
            if not removed:
                continue
            tested += 1
            assert check_controllable_invariant(aut, kept).ok
            for q in removed:
                assert not check_controllable_invariant(aut, kept + (q,)).ok


CASCADE_X = S("1 1 1")
CASCADE_P = S("0 0.8 0.8")
CASCADE_Z = S("0 0.5 0.5")


class TestWitnessVerification:
    def test_cascade_witness_passes(self, cascade_plant):
        witness = StabilizabilityWitness(
            (CASCADE_X, CASCADE_Z),
            (cascade_plant.initial, CASCADE_P, CASCADE_Z, CASCADE_X),
        )
        assert verify_stabilizability_witness(
            cascade_plant, (CASCADE_X, CASCADE_Z), witness
        )

    def test_target_outside_legal_set_is_precondition_error(self, cascade_plant):
        witness = StabilizabilityWitness((CASCADE_X,), (cascade_plant.initial, CASCADE_X))
        with pytest.raises(PreconditionError):
            verify_stabilizability_witness(cascade_plant, (CASCADE_Z,), witness)

    def test_cycle_outside_target_fails(self, drift_plant):
        # Funnel {q0, m} with target {q0}: m self-loops outside the target.
        m = S("0.4 0.1 0")
        witness = StabilizabilityWitness(
            (drift_plant.initial,), (drift_plant.initial, m)
        )
        assert not verify_stabilizability_witness(
            drift_plant, (drift_plant.initial, m), witness
        )

    def test_singleton_target_equal_funnel(self, drift_plant):
        # Every floor is zero, so the controller may freeze the plant at the
        # initial state: the singleton witness verifies and synthesizes.
        witness = StabilizabilityWitness(
            (drift_plant.initial,), (drift_plant.initial,)
        )
        assert verify_stabilizability_witness(
            drift_plant, (drift_plant.initial,), witness
        )
        controller = synthesize_stabilizing_controller(
            drift_plant, (drift_plant.initial,), witness
        )
        graph = closed_loop_graph(drift_plant, controller)
        assert graph.vertices == (drift_plant.initial,)
        assert check_attractor(graph, {drift_plant.initial}).verdict


class TestStabilizingSynthesis:
    def test_cascade_redirect_uses_least_admissible_scale(self, cascade_plant):
        legal = (CASCADE_X, CASCADE_Z)
        witness = StabilizabilityWitness(
            legal, (cascade_plant.initial, CASCADE_P, CASCADE_Z, CASCADE_X)
        )
        controller = synthesize_stabilizing_controller(cascade_plant, legal, witness)
        assert controller.value(CASCADE_X, "u") == F(1, 2)
        graph = closed_loop_graph(cascade_plant, controller)
        assert check_attractor(graph, set(legal)).verdict

    def test_fully_controllable_variant_disables_instead(self):
        aut = load_automaton("cascade_plant.json")
        free = aut.__class__(
            aut.n,
            aut.state_labels,
            aut.initial,
            tuple(type(ev)(ev.name, ev.matrix, F(0)) for ev in aut.events),
        )
        legal = (CASCADE_X, CASCADE_Z)
        witness = StabilizabilityWitness(
            legal, (free.initial, CASCADE_P, CASCADE_Z, CASCADE_X)
        )
        controller = synthesize_stabilizing_controller(free, legal, witness)
        assert controller.value(CASCADE_X, "u") == F(0)
        graph = closed_loop_graph(free, controller)
        assert check_attractor(graph, set(legal)).verdict

    def test_target_equal_funnel_keeps_base_controller(self, drift_plant):
        m = S("0.4 0.1 0")
        p_set = (drift_plant.initial, m)
        witness = StabilizabilityWitness(p_set, p_set)
        controller = synthesize_stabilizing_controller(drift_plant, p_set, witness)
        verdict = check_controllable(drift_plant, p_set)
        base = synthesize_controller(drift_plant, p_set, verdict.subgraph)
        assert controller == base

    def test_unverified_witness_rejected(self, drift_plant):
        m = S("0.4 0.1 0")
        witness = StabilizabilityWitness(
            (drift_plant.initial,), (drift_plant.initial, m)
        )
        with pytest.raises(PreconditionError):
            synthesize_stabilizing_controller(
                drift_plant, (drift_plant.initial, m), witness
            )


def oracle_stabilizable(aut, legal):
    """Exhaustive enumeration over the grid universe: any target subset of
    the legal set with any funnel subset of the universe that verifies."""
    universe = candidate_universe(aut, legal)
    rest = [q for q in universe if q != aut.initial]
    for n_size in range(1, len(legal) + 1):
        for n_prime in combinations(legal, n_size):
            for p_size in range(len(rest) + 1):
                for extra in combinations(rest, p_size):
                    witness = StabilizabilityWitness(
                        n_prime, (aut.initial,) + extra
                    )
                    try:
                        if verify_stabilizability_witness(aut, legal, witness):
                            return True
                    except PreconditionError:
                        continue
    return False


class TestWitnessSearch:
    def test_absorbing_target_found_immediately(self, drift_plant):
        m = S("0.4 0.1 0")
        witness = search_stabilizing_witness(drift_plant, (m,))
        assert witness is not None
        assert witness.n_prime == (m,)
        graph = closed_loop_graph(drift_plant, witness.controller)
        assert check_attractor(graph, set(witness.n_prime)).verdict

    def test_empty_legal_set_is_inconclusive(self, drift_plant):
        assert search_stabilizing_witness(drift_plant, ()) is None

    def test_legal_superset_of_reachables_found_on_first_candidate(self, drift_plant):
        reachable = accessible_part(drift_plant).vertices
        witness = search_stabilizing_witness(drift_plant, reachable)
        assert witness is not None
        assert set(witness.p_set) == set(reachable)
        graph = closed_loop_graph(drift_plant, witness.controller)
        assert check_attractor(graph, set(witness.n_prime)).verdict

    def test_unreachable_legal_state_is_inconclusive(self, drift_plant):
        assert search_stabilizing_witness(drift_plant, (S("0.2 0.3 0.4"),)) is None

    def test_cascade_search_finds_redirecting_witness(self, cascade_plant):
        legal = (CASCADE_X, CASCADE_Z)
        witness = search_stabilizing_witness(cascade_plant, legal)
        assert witness is not None
        graph = closed_loop_graph(cascade_plant, witness.controller)
        assert check_attractor(graph, set(witness.n_prime)).verdict

    def test_search_agrees_with_exhaustive_oracle(self, drift_plant):
        m = S("0.4 0.1 0")
        cases = [
            (drift_plant, (m,)),
            (drift_plant, (S("0.2 0.3 0.4"),)),
            (drift_plant, (S("0.2 0.1 0"), m)),
        ]
        for aut, legal in cases:
            expected = oracle_stabilizable(aut, legal)
            found = search_stabilizing_witness(aut, legal) is not None
            assert found == expected


class TestNecessityDirection:
    def test_closed_loop_attractors_imply_invariance_and_controllability(self):
        rng = random.Random(71)
        examined = 0
        while examined < 10:
            aut = random_automaton(rng, max_n=3, max_events=2, grid=COARSE)
            f = random_controller(rng, aut, grid=COARSE)
            graph = closed_loop_graph(aut, f)
            if not 2 <= len(graph.vertices) <= 6:
                continue
            examined += 1
            assert check_controllable(aut, graph.vertices).controllable
            vertices = list(graph.vertices)
            for size in range(1, len(vertices) + 1):
                for subset in combinations(vertices, size):
                    if check_attractor(graph, set(subset)).verdict:
                        assert check_controllable_invariant(aut, subset).ok
