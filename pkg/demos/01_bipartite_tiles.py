"""Nine product states on a 4 x 5 system, told apart with a shared 5 x 5 pair.

Without entanglement nobody can make the first nontrivial measurement:
the witness below finds only the identity for both parties. With the pair,
Bob first projects his system and his ancilla onto sum_i |ii><ii|, which
copies his basis label into the ancillas. After that Alice can measure
her system together with her ancilla and the states separate.
"""

from loccdisc import families as fam
from loccdisc.engine import simulate_state, verify_perfect
from loccdisc.linalg import apply_local
from loccdisc.protocols import bipartite_protocol
from loccdisc.tiles import render_text
from loccdisc.verification import indistinguishability_witness

states = fam.bipartite_set(4, 5)
print(render_text(states))

for party in ("Alice", "Bob"):
    w = indistinguishability_witness(states, party)
    print(f"{party} can go first without help: {not w.trivial_only}")

prot = bipartite_protocol(4, 5)
b1 = prot.root.outcomes[0].op
print("\nafter Bob's resource projection (registers A, B, a, b):")
for label in ("phi2", "phi5", "phi9"):
    print(f"  {label}: {apply_local(b1, prot.prepare(states[label]))!r}")

print("\nleaf probabilities for phi2:")
for path, p in sorted(simulate_state(prot, states["phi2"]).items()):
    print(f"  {path:12} {p}")

rep = verify_perfect(prot, states, post_selected=True)
print(f"\nperfect once Bob's projection succeeds: {rep.perfect}")
print(f"that projection succeeds with probability {rep.states[0].accepted} for every state")
