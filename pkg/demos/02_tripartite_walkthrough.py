"""Seventeen states on 4 x 5 x 6, following the hand-built measurement sequence.

Alice holds the entangled pair with Bob. She projects first, then Bob runs
eleven outcomes, and Charles or a +- resolution finishes each branch. Two
steps of the written-out sequence could not be used as printed; the
protocol object records both.
"""

from loccdisc.engine import simulate_state, verify_perfect
from loccdisc.protocols import states_for, tripartite_example_protocol
from loccdisc.tiles import render_text

prot = tripartite_example_protocol()
states = states_for(prot)
print(render_text(states))

print("recorded discrepancies:")
for d in prot.discrepancies:
    print(" -", d)

print("\nwhere phi10 goes:")
for path, p in sorted(simulate_state(prot, states["phi10"]).items()):
    print(f"  {path:22} {p}")

rep = verify_perfect(prot, states, post_selected=True)
print(f"\nall 17 identified under post-selection: {rep.perfect}")
