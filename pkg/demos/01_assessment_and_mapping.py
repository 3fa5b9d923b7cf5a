"""
Personality assessment and element mapping
==========================================

A learner answers 14 forced-choice items; the majority pole of each
7-item block picks a cognitive core, and the core activates a tuple of
game elements. The tuple is not hand-picked: it is derived from expert
vote tallies per dimension, and this script shows the derivation landing
exactly on the deployed configuration.
"""

from gamelearn import (
    AssessmentResponse,
    CognitiveCore,
    deployed_mapping,
    derive_mapping,
    determine_cognitive_core,
    load_derivation_config,
    load_tallies,
)

# a learner that leans practical (A on perception) and analytical (B on judgement)
answers = {**{i: "A" for i in range(1, 8)}, **{i: "B" for i in range(8, 15)}}
core = determine_cognitive_core(AssessmentResponse("demo-learner", answers))
print(f"assessment result: {core.value}")

# derive the full mapping from the expert tallies
derived = derive_mapping(load_tallies(), load_derivation_config())
deployed = deployed_mapping()

print("\ncore  derived tuple                                 matches deployed")
for c in CognitiveCore:
    ids = tuple(e.element_id for e in derived.entries[c])
    ok = ids == tuple(e.element_id for e in deployed.entries[c])
    print(f"{c.value:4}  {', '.join(ids):44}  {ok}")

print(f"\nthis learner gets: {', '.join(e.name for e in deployed.entries[core])}")
