"""Which fuzzy states can feedback control reach?

A three-level treatment plant is modeled as a max-min automaton: states are
possibility vectors over {high, medium, low}, events are possibility
matrices.  Event a is fully controllable, b may only be suppressed down to
0.1, and c, d cannot be suppressed at all.
"""

from fuzzydes import (
    accessible_part,
    closed_loop_trajectory,
    family_contains,
    format_possibility,
    format_state,
    make_automaton,
    make_event,
    make_state,
    reach_family,
)

plant = make_automaton(
    state_labels=["high", "medium", "low"],
    initial=["0.9", "0.1", "0"],
    events=[
        make_event("a", [["0.1", "0.9", "0.1"], ["0", "0", "1"], ["0", "0", "1"]], "0"),
        make_event("b", [["0.9", "0.1", "0"], ["0", "0.1", "0.9"], ["0", "0", "1"]], "0.1"),
        make_event("c", [["1", "0.1", "0"], ["0", "0.5", "0.5"], ["0", "0", "1"]], "1"),
        make_event("d", [["1", "0", "0"], ["0.5", "0.5", "0"], ["0", "0.5", "0.5"]], "1"),
    ],
)

graph = accessible_part(plant)
print(f"Open-loop reachable states ({len(graph.vertices)}):")
for q in graph.vertices:
    print("  ", format_state(q))

# A controller can additionally scale each reachable state down, but no
# further than the floor set by the uncontrollable degrees of the events
# needed to get there.
family = reach_family(plant)
print("\nScaling floor per reachable base state:")
for base, floor in family.entries:
    print(f"  {format_state(base)}  floor {format_possibility(floor)}")

print("\nMembership queries:")
for probe in (["0.1", "0.1", "0.1"], ["0", "0.1", "0.9"], ["0.3", "0.3", "0.3"]):
    target = make_state(probe)
    witness = family_contains(family, target)
    if witness is None:
        print(f"  {format_state(target)}  -> not reachable under any controller")
        continue
    print(
        f"  {format_state(target)}  -> reachable: scale "
        f"{format_state(witness.base)} by {format_possibility(witness.alpha)}"
    )
    replay = closed_loop_trajectory(plant, witness.controller, witness.path_string)
    print(
        f"      replaying '{' '.join(witness.path_string)}' under the witness "
        f"controller ends at {format_state(replay.states[-1])}"
    )
