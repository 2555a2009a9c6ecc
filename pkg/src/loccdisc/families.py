"""Constructors for the locally indistinguishable product-state families.

Every ket is built unnormalized with integer amplitudes: ``|a-b>`` is
``|a> - |b>`` and a stopper is the all-ones vector on every register.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .linalg import ANCILLA, Ket, SystemLayout, inner, schmidt_rank_across

BIPARTITE = "bipartite"
TRIPARTITE_EXAMPLE = "tripartite_example"
TRIPARTITE = "tripartite"
EVEN = "even"
ODD = "odd"
FAMILIES = (BIPARTITE, TRIPARTITE_EXAMPLE, TRIPARTITE, EVEN, ODD)


class FamilyError(ValueError):
    """Bad parameters, or a constructed set that contradicts its claimed size."""


@dataclass(frozen=True)
class StateSet:
    family: str
    params: Tuple[int, ...]
    labels: Tuple[str, ...]
    kets: Tuple[Ket, ...]
    claimed_count: int
    stopper: str
    # per-state active block index (0-based) for block-composed families
    active_block: Dict[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise FamilyError("state labels are not unique")
        if self.stopper not in self.labels:
            raise FamilyError(f"stopper {self.stopper!r} not among the states")
        layouts = {k.layout for k in self.kets}
        if len(layouts) > 1:
            raise FamilyError("states live on different layouts")

    def __len__(self):
        return len(self.kets)

    def __iter__(self):
        return iter(zip(self.labels, self.kets))

    def __getitem__(self, label: str) -> Ket:
        try:
            return self.kets[self.labels.index(label)]
        except ValueError:
            raise KeyError(label) from None

    @property
    def layout(self) -> SystemLayout:
        return self.kets[0].layout

    @property
    def count(self) -> int:
        return len(self.kets)

    def non_stoppers(self) -> List[Tuple[str, Ket]]:
        return [(l, k) for l, k in self if l != self.stopper]


@dataclass(frozen=True)
class RelabelMap:
    """Permutation of Bob's labels ``1..n2`` used by the ``H``/``V`` states."""

    case: str
    mapping: Tuple[int, ...]  # mapping[i-1] = image of label i

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise FamilyError("relabel map is not a bijection")

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    @classmethod
    def for_dims(cls, n2: int, n3: int, case: str | None = None) -> "RelabelMap":
        if case is None:
            case = tripartite_case(n2, n3)
        m = list(range(1, n2 + 1))
        if case == "b":
            m[n2 - 2], m[n2 - 1] = n2, n2 - 1
        elif case == "c":
            m[1], m[n2 - 2] = n2 - 1, 2
        elif case != "a":
            raise FamilyError(f"unknown relabel case {case!r}")
        return cls(case, tuple(m))


def tripartite_case(n2: int, n3: int) -> str:
    if n2 == n3:
        return "c"
    if n2 < n3:
        return "a" if (n3 - n2) % 2 else "b"
    raise FamilyError("need n2 <= n3")


# -- single-register building blocks -------------------------------------------

def _vec(*terms) -> Dict[int, int]:
    """``_vec(1, -4)`` is ``|1> - |4>``; a positive entry adds, negative subtracts."""
    out: Dict[int, int] = {}
    for t in terms:
        out[abs(t)] = out.get(abs(t), 0) + (1 if t > 0 else -1)
    return out


def ones(d: int) -> Dict[int, int]:
    return {i: 1 for i in range(1, d + 1)}


def product_ket(layout: SystemLayout, factors: Sequence[Dict[int, int]]) -> Ket:
    """Product ket from one sparse 1-based vector per register of ``layout``."""
    if len(factors) != len(layout):
        raise FamilyError("one factor per register required")
    amps = {(): Fraction(1)}
    for f in factors:
        amps = {z + (i,): v * c for z, v in amps.items() for i, c in f.items() if c}
    return Ket(layout, amps)


def maximally_entangled(d: int, ids: Tuple[str, str] = ("a", "b"),
                        parties: Tuple[str, str] = ("Alice", "Bob")) -> Ket:
    """Unnormalized ``sum_i |ii>`` on two fresh ancilla registers."""
    if not isinstance(d, int) or d < 2:
        raise FamilyError("maximally entangled state needs d >= 2")
    layout = SystemLayout.of((ids[0], parties[0], d, ANCILLA), (ids[1], parties[1], d, ANCILLA))
    return Ket(layout, {(i, i): 1 for i in range(1, d + 1)})


# -- bipartite family ---------------------------------------------------------

def bipartite_factors(m: int, n: int) -> List[Tuple[str, Dict[int, int], Dict[int, int]]]:
    """``(label, A-factor, B-factor)`` of the bipartite family in generation order.

    Generated states whose B label would exceed ``n`` are dropped.
    """
    if not (isinstance(m, int) and isinstance(n, int) and 4 <= m <= n):
        raise FamilyError(f"bipartite family needs 4 <= m <= n, got ({m}, {n})")
    out = [("phi1", ones(m), ones(n))]
    for i in range(2, m + 1):
        out.append((f"phi{i}", _vec(i), _vec(1, -i)))
    out.append((f"phi{m + 1}", _vec(1, -m), _vec(2)))
    for j in range(3, m + 1):
        out.append((f"phi{m + j - 1}", _vec(1, -(j - 1)), _vec(j)))
    for l in range(m + 1, n + 1):
        out.append((f"phi{m + l - 1}", _vec(1, -2), _vec(l)))
    if m + 1 <= n:
        out.append((f"phi{m + n}", _vec(m), _vec(3, -(m + 1))))
    for k in range(1, (n - m) // 2 + 1):
        s, t = m + 2 * k - 1, m + 2 * k
        if s + 1 <= n:
            out.append((f"phi{n + s}", _vec(m - 1), _vec(s, -(s + 1))))
        if t + 1 <= n:
            out.append((f"phi{n + t}", _vec(m), _vec(t, -(t + 1))))
    return out


def _dedup(entries):
    """Drop exact repeats of earlier rays, keeping generation order."""
    kept = []
    for label, ket in entries:
        if any(k.is_proportional(ket) for _, k in kept):
            continue
        kept.append((label, ket))
    return kept


def bipartite_layout(m: int, n: int, tag: str = "") -> SystemLayout:
    return SystemLayout.of((f"A{tag}", f"Alice{tag}", m), (f"B{tag}", f"Bob{tag}", n))


def bipartite_set(m: int, n: int) -> StateSet:
    layout = bipartite_layout(m, n)
    entries = _dedup([(l, product_ket(layout, [a, b])) for l, a, b in bipartite_factors(m, n)])
    claimed = 2 * n - 1
    if len(entries) != claimed:
        raise FamilyError(f"bipartite ({m},{n}): built {len(entries)} states, expected {claimed}")
    labels, kets = zip(*entries)
    return StateSet(BIPARTITE, (m, n), labels, kets, claimed, "phi1")


# -- tripartite families ---------------------------------------------------------

def tripartite_layout(n1: int, n2: int, n3: int, tag: str = "") -> SystemLayout:
    return SystemLayout.of(
        (f"C{tag}", f"Charles{tag}", n1), (f"B{tag}", f"Bob{tag}", n2), (f"A{tag}", f"Alice{tag}", n3))


# |phi_i> of the 17-state C(4) (x) B(5) (x) A(6) set, one signed vector per party
_EXAMPLE_456 = [
    ("phi1", ones(4), ones(5), ones(6)),
    ("phi2", _vec(4), _vec(2), _vec(1, -2)),
    ("phi3", _vec(4), _vec(3), _vec(1, -3)),
    ("phi4", _vec(4), _vec(4), _vec(1, -4)),
    ("phi5", _vec(4), _vec(5), _vec(1, -5)),
    ("phi6", _vec(4), _vec(1, -5), _vec(2)),
    ("phi7", _vec(4), _vec(1, -2), _vec(3)),
    ("phi8", _vec(4), _vec(1, -3), _vec(4)),
    ("phi9", _vec(4), _vec(1, -4), _vec(5)),
    ("phi10", _vec(4), _vec(5), _vec(3, -6)),
    ("phi11", _vec(4), _vec(1, -2), _vec(6)),
    ("phi12", _vec(3), _vec(1, -2), _vec(6)),
    ("phi13", _vec(2), _vec(1, -2), _vec(6)),
    ("phi14", _vec(1), _vec(1, -2), _vec(6)),
    ("phi15", _vec(1, -2), _vec(4), _vec(6)),
    ("phi16", _vec(2, -3), _vec(5), _vec(6)),
    ("phi17", _vec(3, -4), _vec(4), _vec(6)),
]


def tripartite_example_set() -> StateSet:
    """The explicit 17-state set on C(4) (x) B(5) (x) A(6)."""
    layout = tripartite_layout(4, 5, 6)
    labels, kets = zip(*[(l, product_ket(layout, [c, b, a])) for l, c, b, a in _EXAMPLE_456])
    return StateSet(TRIPARTITE_EXAMPLE, (4, 5, 6), labels, kets, 2 * (4 + 6) - 3, "phi1")


def v_label(n1: int, n2: int, i: int) -> int:
    """Bob's (pre-relabel) label for the ``i``-th vertical state.

    ``n1 - i`` odd gives ``n2 - 1`` and even gives ``n2``; successive
    vertical states therefore alternate and the one next to Charles's
    label ``n1`` uses ``n2 - 1``.
    """
    return n2 - 1 if (n1 - i) % 2 else n2


def tripartite_factors(n1: int, n2: int, n3: int, case: str | None = None):
    """``(label, C, B, A)`` factors of the general tripartite set, before dedup.

    Labels: ``phi`` (stopper), ``T<k>`` for the bipartite part carried on
    Charles's ``|n1>``, ``H<i>`` and ``V<i>`` for the remaining states.
    """
    if not (all(isinstance(x, int) for x in (n1, n2, n3)) and 4 <= n1 <= n2 <= n3):
        raise FamilyError(f"tripartite family needs 4 <= n1 <= n2 <= n3, got ({n1}, {n2}, {n3})")
    rel = RelabelMap.for_dims(n2, n3, case)
    out = [("phi", ones(n1), ones(n2), ones(n3))]
    for label, b, a in bipartite_factors(n2, n3)[1:]:
        out.append(("T" + label[3:], _vec(n1), b, a))
    for i in range(1, n1 + 1):
        out.append((f"H{i}", _vec(i), _vec(rel(1), -rel(2)), _vec(n3)))
    for i in range(1, n1):
        out.append((f"V{i}", _vec(i, -(i + 1)), _vec(rel(v_label(n1, n2, i))), _vec(n3)))
    return out, rel


def tripartite_set(n1: int, n2: int, n3: int, case: str | None = None) -> StateSet:
    factors, rel = tripartite_factors(n1, n2, n3, case)
    layout = tripartite_layout(n1, n2, n3)
    entries = _dedup([(l, product_ket(layout, [c, b, a])) for l, c, b, a in factors])
    claimed = 2 * (n1 + n3) - 3
    if len(entries) != claimed:
        raise FamilyError(f"tripartite ({n1},{n2},{n3}) case {rel.case}: built {len(entries)}, expected {claimed}")
    labels, kets = zip(*entries)
    return StateSet(TRIPARTITE, (n1, n2, n3), labels, kets, claimed, "phi")


# -- block-composed families ------------------------------------------------------

def _compose(blocks, fills, stopper_factors, family, params, claimed):
    """Glue per-block non-stopper states with fill states on the other blocks.

    ``blocks[s]`` is a list of ``(label, [factor per register])``,
    ``fills[s]`` the fill factors of block ``s``.
    """
    layout = None
    block_layouts = [b[0] for b in blocks]
    for bl in block_layouts:
        layout = bl if layout is None else layout.concat(bl)
    labels, kets, active = ["stopper"], [product_ket(layout, stopper_factors)], {}
    for s, (_, states) in enumerate(blocks):
        for label, factors in states:
            fs = []
            for r in range(len(blocks)):
                fs.extend(factors if r == s else fills[r])
            name = f"S{s + 1}.{label}"
            labels.append(name)
            kets.append(product_ket(layout, fs))
            active[name] = s
    return StateSet(family, tuple(params), tuple(labels), tuple(kets), claimed, "stopper", active)


def _check_dims(dims, parity):
    dims = tuple(int(d) for d in dims)
    if len(dims) % 2 != parity or len(dims) < 4 + parity:
        kind = "even" if parity == 0 else "odd"
        raise FamilyError(f"{kind}-partite family needs k >= 2 blocks, got dims {dims}")
    # ordering is required within each block only
    groups = [dims[:3]] + [dims[i:i + 2] for i in range(3, len(dims), 2)] if parity else \
        [dims[i:i + 2] for i in range(0, len(dims), 2)]
    for g in groups:
        if g[0] < 4 or any(a > b for a, b in zip(g, g[1:])):
            raise FamilyError(f"each block needs 4 <= dims in nondecreasing order, got block {g} of {dims}")
    return dims


def even_partite_set(dims: Sequence[int]) -> StateSet:
    dims = _check_dims(dims, 0)
    k = len(dims) // 2
    blocks, fills, stopper = [], [], []
    for s in range(k):
        m, n = dims[2 * s], dims[2 * s + 1]
        fac = bipartite_factors(m, n)
        blocks.append((bipartite_layout(m, n, str(s + 1)), [(l, [a, b]) for l, a, b in fac[1:]]))
        fills.append([_vec(1), _vec(1)])
        stopper.extend([ones(m), ones(n)])
    claimed = 2 * (sum(dims[1::2]) - k) + 1
    out = _compose(blocks, fills, stopper, EVEN, dims, claimed)
    if out.count != claimed:
        raise FamilyError(f"even-partite {dims}: built {out.count}, expected {claimed}")
    return out


def odd_claimed_count(dims: Sequence[int]) -> int:
    k = (len(dims) - 1) // 2
    return 2 * (sum(dims[0::2]) - k) + 1


def odd_partite_set(dims: Sequence[int]) -> StateSet:
    """Odd-partite family; its size is ``2(n1+n3+...+n_{2k+1}-k) - 1``.

    ``claimed_count`` carries the published formula, which is two larger;
    :func:`loccdisc.verification.count_audit` reports the difference.
    """
    dims = _check_dims(dims, 1)
    k = (len(dims) - 1) // 2
    n1, n2, n3 = dims[:3]
    tri = tripartite_set(n1, n2, n3)
    blocks = [(tripartite_layout(n1, n2, n3, "1"),
               [(l, _factors_of(kt)) for l, kt in tri.non_stoppers()])]
    fills = [[_vec(1)] * 3]
    stopper = [ones(n1), ones(n2), ones(n3)]
    for s in range(2, k + 1):
        m, n = dims[2 * s - 1], dims[2 * s]
        fac = bipartite_factors(m, n)
        blocks.append((bipartite_layout(m, n, str(s)), [(l, [a, b]) for l, a, b in fac[1:]]))
        fills.append([_vec(1), _vec(1)])
        stopper.extend([ones(m), ones(n)])
    return _compose(blocks, fills, stopper, ODD, dims, odd_claimed_count(dims))


def _factors_of(ket: Ket) -> List[Dict[int, Fraction]]:
    """Split a product ket into one vector per register (exact)."""
    z0, v0 = min(ket.items0())
    out = []
    for p in range(len(ket.layout)):
        vec = {}
        for z, v in ket.items0():
            if all(z[q] == z0[q] for q in range(len(z)) if q != p):
                vec[z[p] + 1] = v
        out.append(vec)
    # the factors' product reproduces the ket up to v0^(r-1)
    scale = v0 ** (len(out) - 1)
    out[0] = {i: c / scale for i, c in out[0].items()}
    return out


# -- whole-set checks ------------------------------------------------------------

def is_orthogonal_set(states: StateSet) -> bool:
    ks = states.kets
    return all(inner(ks[i], ks[j]) == 0 for i in range(len(ks)) for j in range(i))


def party_groups(layout: SystemLayout) -> Dict[str, Tuple[str, ...]]:
    return {p: layout.registers_of(p) for p in layout.parties}


def is_product(ket: Ket) -> bool:
    groups = party_groups(ket.layout)
    if len(groups) < 2:
        return True
    for p, regs in groups.items():
        rest = tuple(r for r in ket.layout.ids if r not in regs)
        if schmidt_rank_across(ket, regs, rest).rank != 1:
            return False
    return True


def build(family: str, params: Sequence[int] = ()) -> StateSet:
    """Dispatch by family name (used by the CLI and deserialization)."""
    params = tuple(int(p) for p in params)
    if family == BIPARTITE:
        if len(params) != 2:
            raise FamilyError("bipartite family takes dims m,n")
        return bipartite_set(*params)
    if family == TRIPARTITE_EXAMPLE:
        if params not in ((), (4, 5, 6)):
            raise FamilyError("the tripartite example is fixed at dims 4,5,6")
        return tripartite_example_set()
    if family == TRIPARTITE:
        if len(params) != 3:
            raise FamilyError("tripartite family takes dims n1,n2,n3")
        return tripartite_set(*params)
    if family == EVEN:
        return even_partite_set(params)
    if family == ODD:
        return odd_partite_set(params)
    raise FamilyError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
