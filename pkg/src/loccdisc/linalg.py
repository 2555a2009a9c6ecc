"""Exact tensor-product linear algebra on labelled multi-register systems.

Basis labels are 1-based at every public boundary (``|1>, ..., |d>``) and
0-based inside the amplitude maps. Amplitudes are real rationals and kets
are stored unnormalized.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Mapping, NamedTuple, Sequence, Tuple

from .rational import rank as _rank

PRINCIPAL = "principal"
ANCILLA = "ancilla"

Index = Tuple[int, ...]


class LayoutError(ValueError):
    """Raised for register collisions, missing registers and mismatched layouts."""


@dataclass(frozen=True)
class Register:
    id: str
    party: str
    dim: int
    role: str = PRINCIPAL

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise LayoutError(f"register {self.id!r}: dimension must be a positive integer")
        if self.role not in (PRINCIPAL, ANCILLA):
            raise LayoutError(f"register {self.id!r}: unknown role {self.role!r}")


@dataclass(frozen=True)
class SystemLayout:
    """Ordered registers, each owned by exactly one party."""

    registers: Tuple[Register, ...]

    def __post_init__(self):
        object.__setattr__(self, "registers", tuple(self.registers))
        ids = [r.id for r in self.registers]
        if len(set(ids)) != len(ids):
            raise LayoutError(f"duplicate register ids in {ids}")

    @classmethod
    def of(cls, *specs) -> "SystemLayout":
        """``SystemLayout.of(("A", "Alice", 4), ("a", "Alice", 5, "ancilla"))``."""
        return cls(tuple(Register(*s) for s in specs))

    @cached_property
    def position(self) -> Dict[str, int]:
        return {r.id: i for i, r in enumerate(self.registers)}

    def __getitem__(self, rid: str) -> Register:
        try:
            return self.registers[self.position[rid]]
        except KeyError:
            raise LayoutError(f"register {rid!r} not in layout") from None

    def __contains__(self, rid: str) -> bool:
        return rid in self.position

    def __len__(self):
        return len(self.registers)

    @property
    def ids(self) -> Tuple[str, ...]:
        return tuple(r.id for r in self.registers)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    @property
    def total_dim(self) -> int:
        d = 1
        for r in self.registers:
            d *= r.dim
        return d

    @property
    def parties(self) -> Tuple[str, ...]:
        seen = []
        for r in self.registers:
            if r.party not in seen:
                seen.append(r.party)
        return tuple(seen)

    def registers_of(self, party: str, role: str | None = None) -> Tuple[str, ...]:
        return tuple(
            r.id for r in self.registers if r.party == party and (role is None or r.role == role)
        )

    def principal(self) -> "SystemLayout":
        return SystemLayout(tuple(r for r in self.registers if r.role == PRINCIPAL))

    def concat(self, other: "SystemLayout") -> "SystemLayout":
        clash = set(self.ids) & set(other.ids)
        if clash:
            raise LayoutError(f"register id collision: {sorted(clash)}")
        return SystemLayout(self.registers + other.registers)


class Ket:
    """Sparse real-rational amplitude vector over a layout's product basis.

    ``Ket(layout, {(1, 2): 1, (2, 2): -1})`` takes 1-based index tuples;
    zero amplitudes are dropped.
    """

    __slots__ = ("layout", "_amps", "_norm2")

    def __init__(self, layout: SystemLayout, amps: Mapping[Index, object] | None = None, *,
                 zero_based: bool = False):
        self.layout = layout
        dims = layout.dims
        store: Dict[Index, Fraction] = {}
        off = 0 if zero_based else 1
        for idx, v in (amps or {}).items():
            idx = tuple(idx)
            if len(idx) != len(dims):
                raise LayoutError(f"index {idx} does not match {len(dims)} registers")
            z = tuple(i - off for i in idx)
            for i, d in zip(z, dims):
                if not 0 <= i < d:
                    raise LayoutError(f"basis index {idx} out of range for dims {dims}")
            v = Fraction(v)
            if v:
                store[z] = store.get(z, 0) + v
                if not store[z]:
                    del store[z]
        self._amps = store
        self._norm2 = None

    @classmethod
    def _raw(cls, layout: SystemLayout, amps: Dict[Index, Fraction]) -> "Ket":
        k = cls.__new__(cls)
        k.layout = layout
        k._amps = amps
        k._norm2 = None
        return k

    @property
    def amplitudes(self) -> Dict[Index, Fraction]:
        """1-based view of the nonzero amplitudes."""
        return {tuple(i + 1 for i in z): v for z, v in self._amps.items()}

    def items0(self):
        return self._amps.items()

    def amplitude(self, *idx: int) -> Fraction:
        return self._amps.get(tuple(i - 1 for i in idx), Fraction(0))

    @property
    def norm2(self) -> Fraction:
        if self._norm2 is None:
            self._norm2 = sum((v * v for v in self._amps.values()), Fraction(0))
        return self._norm2

    def is_zero(self) -> bool:
        return not self._amps

    def __len__(self):
        return len(self._amps)

    def __eq__(self, other):
        if not isinstance(other, Ket):
            return NotImplemented
        return self.layout == other.layout and self._amps == other._amps

    def __hash__(self):
        return hash((self.layout, frozenset(self._amps.items())))

    def scale(self, c) -> "Ket":
        c = Fraction(c)
        if not c:
            return Ket._raw(self.layout, {})
        return Ket._raw(self.layout, {z: v * c for z, v in self._amps.items()})

    def __add__(self, other: "Ket") -> "Ket":
        _same_layout(self, other)
        out = dict(self._amps)
        for z, v in other._amps.items():
            nv = out.get(z, 0) + v
            if nv:
                out[z] = nv
            else:
                out.pop(z, None)
        return Ket._raw(self.layout, out)

    def __sub__(self, other: "Ket") -> "Ket":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def is_proportional(self, other: "Ket") -> bool:
        """Exact ray equality (nonzero multiple)."""
        _same_layout(self, other)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self._amps.keys() != other._amps.keys():
            return False
        z0 = next(iter(self._amps))
        c = other._amps[z0] / self._amps[z0]
        return all(other._amps[z] == c * v for z, v in self._amps.items())

    def reorder(self, layout: SystemLayout) -> "Ket":
        """Same vector expressed over a permutation of this ket's registers."""
        if sorted(layout.ids) != sorted(self.layout.ids):
            raise LayoutError("reorder needs the same register set")
        for r in layout.registers:
            if r != self.layout[r.id]:
                raise LayoutError(f"register {r.id!r} differs between layouts")
        perm = [self.layout.position[rid] for rid in layout.ids]
        return Ket._raw(layout, {tuple(z[p] for p in perm): v for z, v in self._amps.items()})

    def __repr__(self):
        terms = []
        for z in sorted(self._amps):
            v = self._amps[z]
            terms.append(f"{v}|{','.join(str(i + 1) for i in z)}>")
        return f"Ket[{','.join(self.layout.ids)}]({' + '.join(terms) or '0'})"


def basis_ket(layout: SystemLayout, *idx: int) -> Ket:
    return Ket(layout, {tuple(idx): 1})


def _same_layout(x: Ket, y: Ket):
    if x.layout != y.layout:
        raise LayoutError(f"layout mismatch: {x.layout.ids} vs {y.layout.ids}")


def tensor(*factors: Ket) -> Ket:
    """Tensor product; the result's layout concatenates the factor layouts."""
    if not factors:
        raise ValueError("tensor of nothing")
    layout = factors[0].layout
    amps = dict(factors[0]._amps)
    for f in factors[1:]:
        layout = layout.concat(f.layout)
        amps = {z + w: u * v for z, u in amps.items() for w, v in f._amps.items()}
    return Ket._raw(layout, amps)


def inner(x: Ket, y: Ket) -> Fraction:
    _same_layout(x, y)
    if len(x._amps) > len(y._amps):
        x, y = y, x
    ya = y._amps
    return sum((v * ya[z] for z, v in x._amps.items() if z in ya), Fraction(0))


class LocalOperator:
    """Sparse rational matrix acting on some registers owned by one party.

    ``entries`` maps ``(row, col)`` pairs of 1-based local index tuples
    (one index per listed register) to rationals.
    """

    __slots__ = ("party", "registers", "dims", "label", "_m", "_cols")

    def __init__(self, party: str, registers: Sequence[str], dims: Sequence[int],
                 entries: Mapping[Tuple[Index, Index], object], label: str = "",
                 *, zero_based: bool = False):
        self.party = party
        self.registers = tuple(registers)
        self.dims = tuple(dims)
        if len(self.registers) != len(self.dims) or not self.registers:
            raise LayoutError("operator needs one dimension per register")
        if len(set(self.registers)) != len(self.registers):
            raise LayoutError("operator lists a register twice")
        self.label = label
        off = 0 if zero_based else 1
        m: Dict[Tuple[Index, Index], Fraction] = {}
        for (r, c), v in entries.items():
            r = tuple(i - off for i in r)
            c = tuple(i - off for i in c)
            for t in (r, c):
                if len(t) != len(self.dims) or any(not 0 <= i < d for i, d in zip(t, self.dims)):
                    raise LayoutError(f"operator index {t} out of range for dims {self.dims}")
            v = Fraction(v)
            if v:
                m[(r, c)] = m.get((r, c), 0) + v
        self._m = {k: v for k, v in m.items() if v}
        cols: Dict[Index, list] = defaultdict(list)
        for (r, c), v in sorted(self._m.items()):
            cols[c].append((r, v))
        self._cols = dict(cols)

    @property
    def dim(self) -> int:
        d = 1
        for x in self.dims:
            d *= x
        return d

    @property
    def entries(self) -> Dict[Tuple[Index, Index], Fraction]:
        return {(tuple(i + 1 for i in r), tuple(i + 1 for i in c)): v for (r, c), v in self._m.items()}

    def entries0(self):
        return self._m.items()

    def relabel(self, label: str) -> "LocalOperator":
        return LocalOperator(self.party, self.registers, self.dims, self._m, label, zero_based=True)

    def __eq__(self, other):
        if not isinstance(other, LocalOperator):
            return NotImplemented
        return (self.party, self.registers, self.dims, self._m) == (
            other.party, other.registers, other.dims, other._m)

    def __hash__(self):
        return hash((self.party, self.registers, self.dims, frozenset(self._m.items())))

    def __repr__(self):
        return f"LocalOperator({self.label or '?'} on {self.party}:{','.join(self.registers)}, nnz={len(self._m)})"

    # -- algebra on the operator's own registers ---------------------------------
    def matmul(self, other: "LocalOperator") -> Dict[Tuple[Index, Index], Fraction]:
        if (self.registers, self.dims) != (other.registers, other.dims):
            raise LayoutError("matmul needs operators on the same registers")
        rows: Dict[Index, list] = defaultdict(list)
        for (r, c), v in self._m.items():
            rows[c].append((r, v))
        out: Dict[Tuple[Index, Index], Fraction] = {}
        for (k, c), w in other._m.items():
            for r, v in rows.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return {k: v for k, v in out.items() if v}

    def transpose_entries(self):
        return {(c, r): v for (r, c), v in self._m.items()}

    def is_symmetric(self) -> bool:
        return self._m == self.transpose_entries()

    def is_projector(self) -> bool:
        return self.is_symmetric() and self.matmul(self) == self._m

    def embed(self, registers: Sequence[str], dims: Sequence[int]) -> "LocalOperator":
        """This operator tensored with identity on the extra registers."""
        registers = tuple(registers)
        dims = tuple(dims)
        missing = set(self.registers) - set(registers)
        if missing:
            raise LayoutError(f"cannot embed: registers {sorted(missing)} absent")
        pos = [registers.index(r) for r in self.registers]
        for p, d in zip(pos, self.dims):
            if dims[p] != d:
                raise LayoutError(f"dimension mismatch on register {registers[p]!r}")
        rest = [i for i in range(len(registers)) if i not in pos]
        out = {}
        for ctx in itertools.product(*(range(dims[i]) for i in rest)):
            for (r, c), v in self._m.items():
                row = [0] * len(registers)
                col = [0] * len(registers)
                for i, x in zip(rest, ctx):
                    row[i] = col[i] = x
                for p, a, b in zip(pos, r, c):
                    row[p] = a
                    col[p] = b
                out[(tuple(row), tuple(col))] = v
        return LocalOperator(self.party, registers, dims, out, self.label, zero_based=True)


def identity(party: str, registers: Sequence[str], dims: Sequence[int], label: str = "I") -> LocalOperator:
    ents = {(t, t): 1 for t in itertools.product(*(range(d) for d in dims))}
    return LocalOperator(party, registers, dims, ents, label, zero_based=True)


def projector(party: str, registers: Sequence[str], dims: Sequence[int],
              vectors: Iterable[Mapping[Index, object]], label: str = "") -> LocalOperator:
    """Sum of ``v v^T / <v, v>`` over mutually orthogonal 1-based sparse vectors."""
    ents: Dict[Tuple[Index, Index], Fraction] = {}
    for vec in vectors:
        vec = {tuple(k): Fraction(x) for k, x in vec.items() if x}
        n2 = sum(x * x for x in vec.values())
        if not n2:
            raise ValueError("zero vector in projector")
        for r, x in vec.items():
            for c, y in vec.items():
                ents[(r, c)] = ents.get((r, c), 0) + x * y / n2
    return LocalOperator(party, registers, dims, ents, label)


def apply_local(op: LocalOperator, x: Ket) -> Ket:
    """``(op (x) identity) x`` for an operator on some of ``x``'s registers."""
    layout = x.layout
    pos = []
    for rid, d in zip(op.registers, op.dims):
        reg = layout[rid]
        if reg.dim != d:
            raise LayoutError(f"dimension mismatch on {rid!r}: operator {d}, layout {reg.dim}")
        pos.append(layout.position[rid])
    cols = op._cols
    out: Dict[Index, Fraction] = {}
    for z, v in x._amps.items():
        col = cols.get(tuple(z[p] for p in pos))
        if not col:
            continue
        base = list(z)
        for row, w in col:
            for p, i in zip(pos, row):
                base[p] = i
            t = tuple(base)
            nv = out.get(t, 0) + w * v
            if nv:
                out[t] = nv
            else:
                del out[t]
    return Ket._raw(layout, out)


class SchmidtRank(NamedTuple):
    rank: int
    balanced: bool


def _reshape(x: Ket, left: Sequence[str]):
    lpos = [x.layout.position[r] for r in left]
    rpos = [i for i in range(len(x.layout)) if i not in lpos]
    rows: Dict[Index, Dict[Index, Fraction]] = defaultdict(dict)
    for z, v in x._amps.items():
        rows[tuple(z[p] for p in lpos)][tuple(z[p] for p in rpos)] = v
    return rows


def schmidt_rank_across(x: Ket, left: Sequence[str], right: Sequence[str]) -> SchmidtRank:
    """Exact rank of the amplitude matrix reshaped as ``left x right``.

    ``balanced`` is true when ``M M^T`` is a multiple of the identity on the
    full left space, which for a rank-``d`` state on ``d x d`` registers is
    the maximally-entangled condition.
    """
    left, right = tuple(left), tuple(right)
    for r in left + right:
        x.layout[r]
    if set(left) & set(right) or sorted(left + right) != sorted(x.layout.ids) or not left or not right:
        raise LayoutError("partition must split the layout's registers into two nonempty groups")
    if x.is_zero():
        raise ValueError("Schmidt rank of the zero ket")
    rows = _reshape(x, left)
    rk = _rank(rows.values())
    left_dim = 1
    for r in left:
        left_dim *= x.layout[r].dim
    balanced = False
    if len(rows) == left_dim:
        keys = list(rows)
        norms = {sum(v * v for v in rows[k].values()) for k in keys}
        if len(norms) == 1:
            balanced = all(
                sum(v * rows[k2].get(c, 0) for c, v in rows[k1].items()) == 0
                for k1, k2 in itertools.combinations(keys, 2)
            )
    return SchmidtRank(rk, balanced)


def basis_change_projectors(party: str, register: str, dim: int, alpha: int, beta: int):
    """Rank-one projectors onto ``|alpha - beta>`` and ``|alpha + beta>``.

    Entries are ``+-1/2``; returned as ``(minus, plus)``.
    """
    if not (1 <= alpha < beta <= dim):
        raise ValueError(f"need 1 <= alpha < beta <= {dim}, got ({alpha}, {beta})")
    minus = projector(party, [register], [dim], [{(alpha,): 1, (beta,): -1}], f"|{alpha}-{beta}>")
    plus = projector(party, [register], [dim], [{(alpha,): 1, (beta,): 1}], f"|{alpha}+{beta}>")
    return minus, plus
