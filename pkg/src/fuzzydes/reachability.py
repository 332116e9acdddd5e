"""Which fuzzy states can feedback control reach?

Scaling a reachable open-loop state q by any alpha between its scaling floor
and 1 yields a state some controller can reach; the union of these scaled
families over the accessible vertices is exactly the controlled-reachability
family.  The floor of q is the least uncontrollability degree among events
occurring on some root path to q (1 when no event is forced below 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .automaton import (
    EventString,
    MaxMinAutomaton,
    StateFeedbackController,
    TransitionGraph,
    accessible_part,
)
from .errors import DimensionMismatch, DomainError
from .possibility import (
    ONE,
    Fraction,
    State,
    SolutionKind,
    solve_scale,
    state_is_zero,
)


def scaling_floor(graph: TransitionGraph, uc: Mapping[str, Fraction], q: State) -> Fraction:
    """Least uncontrollability degree over events labeling an edge on some
    root-to-q walk; 1 when there is none (the empty minimum convention).

    Every vertex is root-reachable by construction, so an event qualifies
    exactly when one of its edges has a target from which q is reachable.
    """
    if q not in graph.vertex_set:
        raise DomainError(f"state is not an accessible vertex")
    sources = graph.ancestors_of(q)
    floor = ONE
    for _, name, dst in graph.edges:
        if dst in sources:
            floor = min(floor, uc[name])
    return floor


@dataclass(frozen=True)
class ReachFamily:
    """Symbolic form of the controlled-reachability family: one (base state,
    floor) entry per accessible vertex, representing {alpha . base :
    floor <= alpha <= 1}."""

    aut: MaxMinAutomaton
    graph: TransitionGraph
    entries: tuple[tuple[State, Fraction], ...]

    def floor_of(self, base: State) -> Fraction:
        for b, floor in self.entries:
            if b == base:
                return floor
        raise DomainError("state is not an accessible vertex")


def reach_family(aut: MaxMinAutomaton) -> ReachFamily:
    """Compute the family for every accessible vertex, in discovery order."""
    graph = accessible_part(aut)
    uc = aut.uc_map()
    entries = tuple((q, scaling_floor(graph, uc, q)) for q in graph.vertices)
    return ReachFamily(aut, graph, entries)


@dataclass(frozen=True)
class ReachWitness:
    """Evidence that a state is controller-reachable: the accessible base it
    scales from, the scaling alpha, a path string, and a single-override
    controller whose closed-loop run over the path ends at the target."""

    base: State
    alpha: Fraction
    path_string: EventString
    controller: StateFeedbackController


def family_contains(fam: ReachFamily, target: State) -> Optional[ReachWitness]:
    """Membership query with witness extraction.

    Entries are scanned in accessible-BFS order.  The target is a member via
    entry (base, floor) when some alpha in [floor, 1] scales base onto it.
    When target == base the trivial alpha = 1 witness (all-enabling
    controller, shortest path) is returned; otherwise the unique forced alpha
    is installed as a single controller override on an event whose
    uncontrollability achieves the floor, placed on a shortest root path to
    base through that event.
    """
    if len(target) != fam.aut.n:
        raise DimensionMismatch(
            f"target has {len(target)} components, expected {fam.aut.n}"
        )
    if state_is_zero(target):
        raise DomainError("the all-zero vector is excluded from the state set")
    for base, floor in fam.entries:
        solution = solve_scale(base, target).restrict(floor)
        if solution.is_empty:
            continue
        if solution.kind is SolutionKind.INTERVAL:
            # An interval arises exactly when target == base: take alpha = 1
            # and no override at all.
            path = fam.graph.shortest_path(fam.graph.root, base)
            return ReachWitness(base, ONE, path, StateFeedbackController())
        alpha = solution.least()
        witness = _override_witness(fam, base, alpha)
        if witness is not None:
            return witness
    return None


def _override_witness(fam: ReachFamily, base: State, alpha: Fraction) -> Optional[ReachWitness]:
    """Build the single-override controller reaching alpha . base.

    Chooses an event achieving the floor of base among events on root paths,
    preferring the shortest through-path and then alphabet order, and
    overrides the controller at the through-edge's source.  Min over controls
    along the replayed path is alpha no matter how often the override fires,
    so the closed-loop run lands exactly on the scaled state.
    """
    graph, aut = fam.graph, fam.aut
    uc = aut.uc_map()
    floor = fam.floor_of(base)
    dist_root = _distances_from(graph, graph.root)
    dist_back = _distances_to(graph, base)
    best = None  # (total length, event index, source, event name)
    for index, name in enumerate(aut.event_names):
        if uc[name] != floor:
            continue
        for src, label, dst in graph.edges:
            if label != name:
                continue
            d1, d2 = dist_root.get(src), dist_back.get(dst)
            if d1 is None or d2 is None:
                continue
            key = (d1 + 1 + d2, index)
            if best is None or key < best[0]:
                best = (key, src, name)
    if best is None:
        return None
    _, src, name = best
    prefix = graph.shortest_path(graph.root, src)
    suffix = graph.shortest_path(graph.successor(src, name), base)
    controller = StateFeedbackController({(src, name): alpha})
    return ReachWitness(base, alpha, prefix + (name,) + suffix, controller)


def _distances_from(graph: TransitionGraph, source: State) -> dict[State, int]:
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for q in frontier:
            for _, dst in graph.out_edges[q]:
                if dst not in dist:
                    dist[dst] = dist[q] + 1
                    nxt.append(dst)
        frontier = nxt
    return dist


def _distances_to(graph: TransitionGraph, target: State) -> dict[State, int]:
    dist = {target: 0}
    frontier = [target]
    while frontier:
        nxt = []
        for q in frontier:
            for src, _ in graph.in_edges[q]:
                if src not in dist:
                    dist[src] = dist[q] + 1
                    nxt.append(src)
        frontier = nxt
    return dist
