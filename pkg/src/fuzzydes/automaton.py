"""Max-min automata: open-loop dynamics, generated language degrees, the
accessible part, and closed-loop dynamics under a state feedback controller.

A max-min automaton moves from fuzzy state q to q . a (max-min composition)
on event a.  A state feedback controller assigns each (state, event) pair an
enabling possibility at least the event's uncontrollability floor; the
closed-loop step scales the open-loop result by that possibility.  The
all-zero vector counts as "no transition": it is excluded from the state set,
so a step that scales to zero is simply absent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import DimensionMismatch, UnknownEvent, ValidationError
from .possibility import (
    ONE,
    ZERO,
    Fraction,
    FuzzyEvent,
    State,
    as_possibility,
    format_state,
    make_state,
    maxmin_compose,
    scale_product,
    state_is_zero,
)

EventString = tuple[str, ...]


def as_event_string(s) -> EventString:
    """Normalize an event string; a plain str is read character by character."""
    if isinstance(s, str):
        return tuple(s)
    return tuple(s)


@dataclass(frozen=True)
class MaxMinAutomaton:
    """A fuzzy discrete-event plant: crisp dimension n, state labels, a
    nonzero initial fuzzy state, and a finite alphabet of fuzzy events."""

    n: int
    state_labels: tuple[str, ...]
    initial: State
    events: tuple[FuzzyEvent, ...]

    def __post_init__(self):
        if self.n <= 0:
            raise ValidationError("dimension must be positive")
        if len(self.state_labels) != self.n:
            raise ValidationError(
                f"expected {self.n} state labels, got {len(self.state_labels)}"
            )
        if len(self.initial) != self.n:
            raise DimensionMismatch(
                f"initial state has {len(self.initial)} components, expected {self.n}"
            )
        if state_is_zero(self.initial):
            raise ValidationError("the all-zero vector is excluded from the state set")
        names = [ev.name for ev in self.events]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate event names in {names}")
        for ev in self.events:
            if ev.dimension != self.n:
                raise DimensionMismatch(
                    f"event {ev.name!r} is {ev.dimension}x{ev.dimension}, expected {self.n}x{self.n}"
                )

    @cached_property
    def _by_name(self) -> Mapping[str, FuzzyEvent]:
        return {ev.name: ev for ev in self.events}

    @property
    def event_names(self) -> tuple[str, ...]:
        return tuple(ev.name for ev in self.events)

    def event(self, name: str) -> FuzzyEvent:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownEvent(f"unknown event {name!r}") from None

    def uc(self, name: str) -> Fraction:
        return self.event(name).uc_degree

    def uc_map(self) -> dict[str, Fraction]:
        return {ev.name: ev.uc_degree for ev in self.events}

    def value_grid(self) -> tuple[Fraction, ...]:
        """All possibility values appearing in the automaton, plus 0 and 1."""
        values = {ZERO, ONE}
        values.update(self.initial)
        for ev in self.events:
            values.add(ev.uc_degree)
            for row in ev.matrix:
                values.update(row)
        return tuple(sorted(values))


def make_automaton(state_labels, initial, events) -> MaxMinAutomaton:
    labels = tuple(str(x) for x in state_labels)
    return MaxMinAutomaton(len(labels), labels, make_state(initial), tuple(events))


def step(aut: MaxMinAutomaton, q: State, name: str) -> State:
    """One open-loop transition: q composed with the named event's matrix."""
    return maxmin_compose(q, aut.event(name))


def run(aut: MaxMinAutomaton, s) -> State:
    """Fold step over an event string starting from the initial state."""
    q = aut.initial
    for name in as_event_string(s):
        q = step(aut, q, name)
    return q


def language_degree(aut: MaxMinAutomaton, s) -> Fraction:
    """Degree of an event string in the generated fuzzy language: 1 for the
    empty string, otherwise the largest component of the reached state."""
    names = as_event_string(s)
    if not names:
        return ONE
    return max(run(aut, names))


@dataclass(frozen=True)
class TransitionGraph:
    """A finite, deterministic, labeled transition graph over fuzzy states,
    rooted at the initial state.  Produced by accessible_part (open loop) and
    closed_loop_graph (under a controller)."""

    root: State
    vertices: tuple[State, ...]
    edges: tuple[tuple[State, str, State], ...]

    @cached_property
    def vertex_set(self) -> frozenset[State]:
        return frozenset(self.vertices)

    @cached_property
    def out_edges(self) -> Mapping[State, tuple[tuple[str, State], ...]]:
        table: dict[State, list] = {v: [] for v in self.vertices}
        for src, name, dst in self.edges:
            table[src].append((name, dst))
        return {v: tuple(pairs) for v, pairs in table.items()}

    @cached_property
    def in_edges(self) -> Mapping[State, tuple[tuple[State, str], ...]]:
        table: dict[State, list] = {v: [] for v in self.vertices}
        for src, name, dst in self.edges:
            table[dst].append((src, name))
        return {v: tuple(pairs) for v, pairs in table.items()}

    def successor(self, q: State, name: str) -> Optional[State]:
        for label, dst in self.out_edges[q]:
            if label == name:
                return dst
        return None

    def reachable_from(self, starts: Iterable[State]) -> set[State]:
        """Forward closure of a set of vertices along edges."""
        seen = set()
        queue = deque(q for q in starts if q in self.vertex_set)
        seen.update(queue)
        while queue:
            q = queue.popleft()
            for _, dst in self.out_edges[q]:
                if dst not in seen:
                    seen.add(dst)
                    queue.append(dst)
        return seen

    def ancestors_of(self, target: State) -> set[State]:
        """Vertices from which target is reachable, including target."""
        seen = {target}
        queue = deque([target])
        while queue:
            q = queue.popleft()
            for src, _ in self.in_edges[q]:
                if src not in seen:
                    seen.add(src)
                    queue.append(src)
        return seen

    def shortest_path(self, source: State, target: State) -> Optional[EventString]:
        """Event string of a shortest source-to-target walk, or None."""
        if source not in self.vertex_set or target not in self.vertex_set:
            return None
        parents: dict[State, tuple[State, str]] = {}
        seen = {source}
        queue = deque([source])
        while queue:
            q = queue.popleft()
            if q == target:
                break
            for name, dst in self.out_edges[q]:
                if dst not in seen:
                    seen.add(dst)
                    parents[dst] = (q, name)
                    queue.append(dst)
        if target not in seen:
            return None
        path: list[str] = []
        q = target
        while q != source:
            q, name = parents[q]
            path.append(name)
        return tuple(reversed(path))


def accessible_part(aut: MaxMinAutomaton) -> TransitionGraph:
    """Breadth-first closure of the initial state under open-loop steps,
    dropping all-zero results.

    Terminates because every component of every reachable state is drawn from
    the finite grid of values appearing in the automaton.
    """
    vertices: list[State] = [aut.initial]
    seen = {aut.initial}
    edges: list[tuple[State, str, State]] = []
    queue = deque([aut.initial])
    while queue:
        q = queue.popleft()
        for ev in aut.events:
            p = maxmin_compose(q, ev)
            if state_is_zero(p):
                continue
            edges.append((q, ev.name, p))
            if p not in seen:
                seen.add(p)
                vertices.append(p)
                queue.append(p)
    return TransitionGraph(aut.initial, tuple(vertices), tuple(edges))


@dataclass(frozen=True)
class StateFeedbackController:
    """A state feedback controller: a finite map from (state, event name) to
    an enabling possibility, with a default for unmapped pairs.

    Validation against an automaton checks every stored value and the default
    against the events' uncontrollability floors.
    """

    entries: Mapping[tuple[State, str], Fraction] = field(default_factory=dict)
    default: Fraction = ONE

    def value(self, q: State, name: str) -> Fraction:
        return self.entries.get((q, name), self.default)

    def validate(self, aut: MaxMinAutomaton) -> None:
        floors = aut.uc_map()
        for (q, name), v in self.entries.items():
            floor = floors.get(name)
            if floor is None:
                raise UnknownEvent(f"controller maps unknown event {name!r}")
            if v < floor:
                raise ValidationError(
                    f"controller value {v} for event {name!r} at {format_state(q)} "
                    f"is below the uncontrollability floor {floor}"
                )
        # The default covers the whole (infinite) remainder of the domain,
        # so it must clear every event's floor.
        highest = max(floors.values(), default=ZERO)
        if self.default < highest:
            raise ValidationError(
                f"controller default {self.default} is below the highest "
                f"uncontrollability floor {highest}"
            )

    def value_grid(self) -> set[Fraction]:
        values = set(self.entries.values())
        values.add(self.default)
        return values


def make_controller(entries=None, default=1) -> StateFeedbackController:
    """Build a controller from {(state, event): value} overrides; states and
    values are coerced to exact form."""
    table: dict[tuple[State, str], Fraction] = {}
    for (state, name), value in (entries or {}).items():
        table[(make_state(state), str(name))] = as_possibility(value)
    return StateFeedbackController(table, as_possibility(default))


def closed_loop_step(
    aut: MaxMinAutomaton, f: StateFeedbackController, q: State, name: str
) -> Optional[State]:
    """One controlled transition: the open-loop result scaled by the
    controller's enabling possibility; None when that scales to zero
    (disabled or unfeasible, no transition recorded)."""
    scaled = scale_product(f.value(q, name), step(aut, q, name))
    if state_is_zero(scaled):
        return None
    return scaled


def closed_loop_graph(aut: MaxMinAutomaton, f: StateFeedbackController) -> TransitionGraph:
    """Breadth-first closure of the initial state under controlled steps."""
    f.validate(aut)
    vertices: list[State] = [aut.initial]
    seen = {aut.initial}
    edges: list[tuple[State, str, State]] = []
    queue = deque([aut.initial])
    while queue:
        q = queue.popleft()
        for ev in aut.events:
            p = closed_loop_step(aut, f, q, ev.name)
            if p is None:
                continue
            edges.append((q, ev.name, p))
            if p not in seen:
                seen.add(p)
                vertices.append(p)
                queue.append(p)
    return TransitionGraph(aut.initial, tuple(vertices), tuple(edges))


def closed_loop_reachable(
    aut: MaxMinAutomaton, f: StateFeedbackController
) -> list[State]:
    """All states the controlled system can reach, in discovery order."""
    return list(closed_loop_graph(aut, f).vertices)


def closed_loop_language_degree(
    aut: MaxMinAutomaton, f: StateFeedbackController, s
) -> Fraction:
    """Degree of an event string in the controlled system's language: fold
    controlled steps; a vanished state makes the string (and all its
    extensions) degree zero."""
    names = as_event_string(s)
    if not names:
        return ONE
    q: Optional[State] = aut.initial
    for name in names:
        q = closed_loop_step(aut, f, q, name)
        if q is None:
            return ZERO
    return max(q)


@dataclass(frozen=True)
class Trajectory:
    """An alternating run q0, a1, q1, ..., ak, qk; closed-loop runs may stop
    early when a step is disabled."""

    states: tuple[State, ...]
    events: EventString
    halted: bool = False

    def __post_init__(self):
        if len(self.states) != len(self.events) + 1:
            raise ValidationError("trajectory needs one more state than events")


def open_loop_trajectory(aut: MaxMinAutomaton, s) -> Trajectory:
    states = [aut.initial]
    names = as_event_string(s)
    for name in names:
        states.append(step(aut, states[-1], name))
    return Trajectory(tuple(states), names)


def closed_loop_trajectory(
    aut: MaxMinAutomaton, f: StateFeedbackController, s
) -> Trajectory:
    states = [aut.initial]
    taken: list[str] = []
    for name in as_event_string(s):
        nxt = closed_loop_step(aut, f, states[-1], name)
        if nxt is None:
            return Trajectory(tuple(states), tuple(taken), halted=True)
        states.append(nxt)
        taken.append(name)
    return Trajectory(tuple(states), tuple(taken))
