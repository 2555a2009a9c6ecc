"""Claim checks that do not depend on any protocol builder."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import families as fam
from .linalg import ANCILLA, inner, schmidt_rank_across
from .rational import nullspace

WITNESS_SCOPE = ("first-move witness only: trivial_only means no orthogonality-preserving nontrivial "
                 "measurement element exists for this party; it does not prove LOCC indistinguishability")


def gram_matrix(states: fam.StateSet) -> List[List[Fraction]]:
    ks = states.kets
    g = [[Fraction(0)] * len(ks) for _ in ks]
    for i in range(len(ks)):
        for j in range(i + 1):
            g[i][j] = g[j][i] = inner(ks[i], ks[j])
    return g


def off_diagonal_nonzero(g) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(len(g)) for j in range(i) if g[i][j] != 0]


def party_cuts(layout) -> List[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """Every bipartition of the principal parties, each listed once."""
    parties = [p for p in layout.parties if layout.registers_of(p)]
    cuts = []
    for r in range(1, len(parties)):
        for left in itertools.combinations(parties, r):
            if parties[0] not in left:
                continue
            right = [p for p in parties if p not in left]
            lregs = tuple(x for p in left for x in layout.registers_of(p))
            rregs = tuple(x for p in right for x in layout.registers_of(p))
            cuts.append((lregs, rregs))
    return cuts


def product_certificate(states: fam.StateSet) -> Dict[str, Dict[str, int]]:
    """Schmidt rank of every state across every party bipartition.

    Keys of the inner dict look like ``"C|B,A"``.
    """
    cuts = party_cuts(states.layout)
    table = {}
    for label, ket in states:
        table[label] = {
            f"{','.join(l)}|{','.join(r)}": schmidt_rank_across(ket, l, r).rank for l, r in cuts
        }
    return table


def all_product(table: Dict[str, Dict[str, int]]) -> bool:
    return all(r == 1 for row in table.values() for r in row.values())


@dataclass
class WitnessResult:
    party: str
    solution_dim: int
    basis: List[Dict[Tuple[int, int], Fraction]]  # symmetric matrices, upper triangle, 1-based
    trivial_only: bool
    scope: str = WITNESS_SCOPE


def indistinguishability_witness(states: fam.StateSet, party: str) -> WitnessResult:
    """Solve ``<phi_i|(E (x) I)|phi_j> = 0`` (i != j) over real symmetric ``E``.

    ``E`` acts on all of ``party``'s registers. The identity always solves
    the system; ``trivial_only`` reports that nothing else does.
    """
    layout = states.layout
    if any(r.role == ANCILLA for r in layout.registers):
        raise ValueError("witness works on the raw set; remove ancilla registers first")
    regs = layout.registers_of(party)
    if not regs:
        raise ValueError(f"party {party!r} owns no register")
    pos = [layout.position[r] for r in regs]
    rest = [i for i in range(len(layout)) if i not in pos]
    dims = [layout[r].dim for r in regs]
    local = list(itertools.product(*(range(d) for d in dims)))
    unknowns = [(x, y) for i, x in enumerate(local) for y in local[i:]]

    # amplitudes grouped by the other parties' indices
    split = []
    for ket in states.kets:
        g: Dict[tuple, Dict[tuple, Fraction]] = defaultdict(dict)
        for z, v in ket.items0():
            g[tuple(z[p] for p in rest)][tuple(z[p] for p in pos)] = v
        split.append(g)

    rows = []
    for i, j in itertools.combinations(range(len(split)), 2):
        gi, gj = split[i], split[j]
        c: Dict[Tuple[tuple, tuple], Fraction] = defaultdict(Fraction)
        for ctx, ui in gi.items():
            uj = gj.get(ctx)
            if not uj:
                continue
            for x, a in ui.items():
                for y, b in uj.items():
                    c[(x, y)] += a * b
        row = {}
        for (x, y), v in c.items():
            key = (x, y) if x <= y else (y, x)
            row[key] = row.get(key, 0) + v
        row = {k: v for k, v in row.items() if v}
        if row:
            rows.append(row)
    basis = nullspace(rows, unknowns)
    out = [{(tuple(i + 1 for i in x), tuple(i + 1 for i in y)): v for (x, y), v in vec.items()}
           for vec in basis]
    return WitnessResult(party, len(basis), out, len(basis) == 1)


@dataclass
class CountAudit:
    family: str
    params: Tuple[int, ...]
    actual: int
    claimed: int
    formula: str

    @property
    def ok(self) -> bool:
        return self.actual == self.claimed


FORMULAS = {
    fam.BIPARTITE: "2n-1",
    fam.TRIPARTITE_EXAMPLE: "2(n1+n3)-3",
    fam.TRIPARTITE: "2(n1+n3)-3",
    fam.EVEN: "2(n2+n4+...+n2k-k)+1",
    fam.ODD: "2(n1+n3+...+n2k+1-k)+1",
}


def claimed_count(family: str, params: Sequence[int]) -> int:
    p = tuple(params)
    if family == fam.BIPARTITE:
        return 2 * p[1] - 1
    if family in (fam.TRIPARTITE, fam.TRIPARTITE_EXAMPLE):
        return 2 * (p[0] + p[2]) - 3
    if family == fam.EVEN:
        return 2 * (sum(p[1::2]) - len(p) // 2) + 1
    if family == fam.ODD:
        return fam.odd_claimed_count(p)
    raise ValueError(f"unknown family {family!r}")


def count_audit(states: fam.StateSet) -> CountAudit:
    return CountAudit(states.family, states.params, states.count,
                      claimed_count(states.family, states.params), FORMULAS[states.family])
