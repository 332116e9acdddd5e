"""Can a controller confine the plant to exactly a given finite state set?

A candidate set P induces a successor graph: an edge (q, a, p) records that
some admissible scaling of the composition q . a lands on p in P.  P is
controllable exactly when a subgraph exists that is functional per event
(C1), covers every partially uncontrollable feasible event (C2), and reaches
every vertex from the initial state.  From such a subgraph a controller with
closed-loop reachable set exactly P is synthesized by a three-case rule.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping, Optional, Sequence

from .automaton import MaxMinAutomaton, StateFeedbackController
from .errors import DimensionMismatch, DomainError, ValidationError
from .possibility import (
    ONE,
    ZERO,
    Fraction,
    ScaleSolution,
    State,
    format_state,
    maxmin_compose,
    solve_scale,
    state_is_zero,
)


@dataclass(frozen=True)
class SuccessorEdge:
    """One admissible move within P: scaling the composition of source with
    the event by any alpha in alpha_range (already cut down to the event's
    floor) lands exactly on target."""

    source: State
    event: str
    target: State
    alpha_range: ScaleSolution


@dataclass(frozen=True)
class SuccessorGraph:
    vertices: tuple[State, ...]
    edges: tuple[SuccessorEdge, ...]
    root: State


@dataclass(frozen=True)
class ControllableSubgraph:
    """A per-(vertex, event) choice of successor edges satisfying C1/C2 with
    every vertex reachable from the root through chosen edges."""

    choice: Mapping[tuple[State, str], State]

    def edges(self) -> tuple[tuple[State, str, State], ...]:
        return tuple((q, name, t) for (q, name), t in self.choice.items())


@dataclass(frozen=True)
class Obstruction:
    """Why a set failed the controllability check."""

    kind: str  # "missing-initial" | "uncoverable-event" | "unreachable"
    vertex: Optional[State] = None
    event: Optional[str] = None
    vertices: tuple[State, ...] = ()

    def describe(self) -> str:
        if self.kind == "missing-initial":
            return "the initial state is not a member of the candidate set"
        if self.kind == "uncoverable-event":
            return (
                f"event {self.event!r} is feasible and partially uncontrollable at "
                f"{format_state(self.vertex)} but has no admissible target in the set"
            )
        missing = ", ".join(format_state(q) for q in self.vertices)
        return f"no admissible selection reaches: {missing}"


@dataclass(frozen=True)
class ControllabilityVerdict:
    controllable: bool
    subgraph: Optional[ControllableSubgraph] = None
    obstruction: Optional[Obstruction] = None


def validated_state_set(aut: MaxMinAutomaton, P: Sequence[State]) -> tuple[State, ...]:
    states = tuple(P)
    seen = set()
    for q in states:
        if len(q) != aut.n:
            raise DimensionMismatch(
                f"state {format_state(q)} has {len(q)} components, expected {aut.n}"
            )
        if state_is_zero(q):
            raise ValidationError("the all-zero vector is excluded from the state set")
        if q in seen:
            raise ValidationError(f"duplicate state {format_state(q)} in the set")
        seen.add(q)
    return states


def successor_set(
    aut: MaxMinAutomaton, P: Sequence[State], q: State
) -> tuple[SuccessorEdge, ...]:
    """All admissible (event, target) moves from q within P, ordered by event
    then by the target's position in P."""
    states = validated_state_set(aut, P)
    if q not in states:
        raise DomainError(f"state {format_state(q)} is not a member of the set")
    edges = []
    for ev in aut.events:
        composed = maxmin_compose(q, ev)
        for p in states:
            admissible = solve_scale(composed, p).restrict(ev.uc_degree)
            if not admissible.is_empty:
                edges.append(SuccessorEdge(q, ev.name, p, admissible))
    return tuple(edges)


def compatible_subsets(
    aut: MaxMinAutomaton,
    P: Sequence[State],
    q: State,
    succ: Sequence[SuccessorEdge],
) -> Iterator[tuple[SuccessorEdge, ...]]:
    """Lazily enumerate the subsets of succ that are functional per event (C1)
    and keep a target for every feasible event with a positive floor (C2)."""
    options: list[list[Optional[SuccessorEdge]]] = []
    for ev in aut.events:
        candidates = [e for e in succ if e.event == ev.name]
        mandatory = ev.uc_degree > ZERO and not state_is_zero(maxmin_compose(q, ev))
        if mandatory:
            options.append(candidates)  # empty list kills the enumeration
        elif candidates:
            options.append([None, *candidates])
    for pick in product(*options):
        yield tuple(e for e in pick if e is not None)


def build_successor_graph(aut: MaxMinAutomaton, P: Sequence[State]) -> SuccessorGraph:
    states = validated_state_set(aut, P)
    edges: list[SuccessorEdge] = []
    for q in states:
        edges.extend(successor_set(aut, states, q))
    return SuccessorGraph(states, tuple(edges), aut.initial)


def chosen_graph(sg: SuccessorGraph, subgraph: ControllableSubgraph) -> SuccessorGraph:
    """Restrict a successor graph to a subgraph's chosen edges (alpha ranges
    kept for labeling)."""
    edges = tuple(
        e for e in sg.edges if subgraph.choice.get((e.source, e.event)) == e.target
    )
    return SuccessorGraph(sg.vertices, edges, sg.root)


def _reachable(root: State, vertices, edge_map) -> set[State]:
    seen = {root}
    queue = deque([root])
    while queue:
        q = queue.popleft()
        for t in edge_map.get(q, ()):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def check_controllable(aut: MaxMinAutomaton, P: Sequence[State]) -> ControllabilityVerdict:
    """Decide controllability of P by backtracking over per-(vertex, event)
    target choices.

    Omitting an edge for a fully controllable event can never help
    reachability, so the search only considers full selections; pruning drops
    any partial assignment whose optimistic completion (all remaining
    candidates present) already strands a vertex.
    """
    states = validated_state_set(aut, P)
    if not states:
        return ControllabilityVerdict(True, ControllableSubgraph({}))
    if aut.initial not in states:
        return ControllabilityVerdict(False, None, Obstruction("missing-initial"))

    graph = build_successor_graph(aut, states)
    candidates: dict[tuple[State, str], list[State]] = {}
    for edge in graph.edges:
        candidates.setdefault((edge.source, edge.event), []).append(edge.target)

    for q in states:
        for ev in aut.events:
            feasible = not state_is_zero(maxmin_compose(q, ev))
            if ev.uc_degree > ZERO and feasible and (q, ev.name) not in candidates:
                return ControllabilityVerdict(
                    False, None, Obstruction("uncoverable-event", vertex=q, event=ev.name)
                )

    full_map: dict[State, list[State]] = {}
    for (q, _), targets in candidates.items():
        full_map.setdefault(q, []).extend(targets)
    state_set = set(states)
    full_reach = _reachable(aut.initial, states, full_map)
    if full_reach != state_set:
        missing = tuple(q for q in states if q not in full_reach)
        return ControllabilityVerdict(
            False, None, Obstruction("unreachable", vertices=missing)
        )

    # Slot order: vertices by BFS over the full candidate graph, events in
    # alphabet order.  Only slots with candidates exist; C2-mandatory slots
    # were verified non-empty above.
    order: list[State] = []
    seen = {aut.initial}
    queue = deque([aut.initial])
    while queue:
        q = queue.popleft()
        order.append(q)
        for t in full_map.get(q, ()):
            if t not in seen:
                seen.add(t)
                queue.append(t)
    slots: list[tuple[State, str, list[State]]] = []
    for q in order:
        for ev in aut.events:
            targets = candidates.get((q, ev.name))
            if targets:
                slots.append((q, ev.name, targets))

    chosen: dict[tuple[State, str], State] = {}
    # Seed the failure diagnostic with a greedy full assignment so an
    # exhausted search still reports a concrete stranded set.
    greedy: dict[State, list[State]] = {}
    for q, name, targets in slots:
        greedy.setdefault(q, []).append(targets[0])
    best_reached: set[State] = _reachable(aut.initial, states, greedy)

    def chosen_map(extra_from: int) -> dict[State, list[State]]:
        table: dict[State, list[State]] = {}
        for (q, _), t in chosen.items():
            table.setdefault(q, []).append(t)
        for q, name, targets in slots[extra_from:]:
            table.setdefault(q, []).extend(targets)
        return table

    def search(i: int) -> Optional[dict]:
        nonlocal best_reached
        reach = _reachable(aut.initial, states, chosen_map(i))
        if i == len(slots):
            if len(reach) > len(best_reached):
                best_reached = reach
            return dict(chosen) if reach == state_set else None
        if not state_set <= reach:
            return None
        q, name, targets = slots[i]
        for t in targets:
            chosen[(q, name)] = t
            found = search(i + 1)
            if found is not None:
                return found
            del chosen[(q, name)]
        return None

    found = search(0)
    if found is not None:
        return ControllabilityVerdict(True, ControllableSubgraph(found))
    missing = tuple(q for q in states if q not in best_reached)
    return ControllabilityVerdict(False, None, Obstruction("unreachable", vertices=missing))


def validate_subgraph(
    aut: MaxMinAutomaton, P: Sequence[State], subgraph: ControllableSubgraph
) -> None:
    """Check a per-(vertex, event) choice against C1/C2/reachability; C1 is
    structural (a mapping holds one target per slot)."""
    states = validated_state_set(aut, P)
    state_set = set(states)
    edge_map: dict[State, list[State]] = {}
    for (q, name), t in subgraph.choice.items():
        if q not in state_set or t not in state_set:
            raise ValidationError(
                f"chosen edge {format_state(q)} --{name}--> {format_state(t)} "
                "leaves the candidate set"
            )
        ev = aut.event(name)
        if solve_scale(maxmin_compose(q, ev), t).restrict(ev.uc_degree).is_empty:
            raise ValidationError(
                f"no admissible scaling realizes {format_state(q)} --{name}--> "
                f"{format_state(t)}"
            )
        edge_map.setdefault(q, []).append(t)
    for q in states:
        for ev in aut.events:
            feasible = not state_is_zero(maxmin_compose(q, ev))
            if ev.uc_degree > ZERO and feasible and (q, ev.name) not in subgraph.choice:
                raise ValidationError(
                    f"event {ev.name!r} is feasible and partially uncontrollable at "
                    f"{format_state(q)} but has no chosen edge"
                )
    if states:
        if aut.initial not in state_set:
            raise ValidationError("the initial state is not a member of the candidate set")
        reach = _reachable(aut.initial, states, edge_map)
        if reach != state_set:
            missing = ", ".join(format_state(q) for q in states if q not in reach)
            raise ValidationError(f"chosen edges do not reach: {missing}")


def synthesize_controller(
    aut: MaxMinAutomaton, P: Sequence[State], subgraph: ControllableSubgraph
) -> StateFeedbackController:
    """Realize a controllable set: enable chosen edges at their least
    admissible scaling, hard-disable unchosen feasible events (their floor is
    zero by C2), and leave everything off the set fully enabled.

    The resulting closed loop reaches exactly P.
    """
    states = validated_state_set(aut, P)
    if not states:
        raise DomainError("the empty set has no realizing controller; the initial state is always reached")
    validate_subgraph(aut, states, subgraph)
    entries: dict[tuple[State, str], Fraction] = {}
    for q in states:
        for ev in aut.events:
            composed = maxmin_compose(q, ev)
            if state_is_zero(composed):
                continue
            target = subgraph.choice.get((q, ev.name))
            if target is None:
                entries[(q, ev.name)] = ZERO
            else:
                alpha = solve_scale(composed, target).restrict(ev.uc_degree).least()
                entries[(q, ev.name)] = alpha
    return StateFeedbackController(entries, ONE)
