"""Composing blocks: four and five parties.

Each block is a small family; a composed state differs from the all-ones
fill in exactly one block. The tree runs the blocks in order. Each block
either names a state, which ends the search, or reports SF (stopper or
fill) and passes control to the next block.
"""

from collections import Counter

from loccdisc.engine import simulate_state, verify_perfect
from loccdisc.protocols import even_protocol, odd_protocol, states_for
from loccdisc.verification import count_audit

for prot in (even_protocol((4, 5, 4, 5)), odd_protocol((4, 5, 6, 4, 5))):
    states = states_for(prot)
    audit = count_audit(states)
    print(f"{prot.family} {prot.params}: {audit.actual} states (formula {audit.formula} gives {audit.claimed})")
    rep = verify_perfect(prot, states, post_selected=True)
    print(f"  perfect under post-selection: {rep.perfect}")
    print(f"  states per active block: {dict(sorted(Counter(states.active_block.values()).items()))}")
    info = prot.leaves()
    label = states.labels[-1]
    for path, p in sorted(simulate_state(prot, states[label]).items()):
        leaf = info[path][0]
        if not leaf.is_fail:
            print(f"  {label} -> {leaf.declare} at {path} (blocks {leaf.blocks}), probability {p}")
    print()
