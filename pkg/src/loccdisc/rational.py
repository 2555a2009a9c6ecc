"""Gaussian elimination over the rationals on sparse rows.

Rows are dicts ``{column: Fraction}``; zero entries are never stored.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Sequence

Row = Dict[Hashable, Fraction]


def fstr(x) -> str:
    """Exact fraction string ``p/q`` (``p`` for integers)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def parse_fraction(s) -> Fraction:
    """Inverse of :func:`fstr`; floats and decimal strings are rejected."""
    if isinstance(s, (int, Fraction)) and not isinstance(s, bool):
        return Fraction(s)
    if isinstance(s, str) and _RATIONAL.fullmatch(s.strip()):
        return Fraction(s)
    raise ValueError(f"not an exact rational: {s!r}")


def _echelon(rows: Iterable[Row], order: Sequence[Hashable] | None = None):
    """Reduce rows to echelon form; return list of (pivot, row) pairs."""
    pivots: List[tuple] = []
    pivot_rows: Dict[Hashable, Row] = {}
    rank_of = None if order is None else {c: i for i, c in enumerate(order)}

    def leading(row: Row):
        if rank_of is None:
            return min(row, key=repr)
        return min(row, key=rank_of.__getitem__)

    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v != 0}
        while r:
            lead = leading(r)
            prow = pivot_rows.get(lead)
            if prow is None:
                break
            f = r[lead] / prow[lead]
            for k, v in prow.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        if r:
            lead = leading(r)
            pivot_rows[lead] = r
            pivots.append((lead, r))
    return pivots


def rank(rows: Iterable[Row]) -> int:
    """Exact rank of a sparse rational matrix given by its rows."""
    return len(_echelon(rows))


def nullspace(rows: Iterable[Row], columns: Sequence[Hashable]) -> List[Dict[Hashable, Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}`` over the given columns.

    Returned vectors are in reduced form: each has a single free column set
    to 1 and the pivot columns solved for.
    """
    columns = list(columns)
    piv = _echelon(rows, columns)
    # back-substitute to reduced row echelon form
    reduced: Dict[Hashable, Row] = {}
    index = {c: i for i, c in enumerate(columns)}
    for lead, row in sorted(piv, key=lambda p: -index[p[0]]):
        r = dict(row)
        scale = r[lead]
        r = {k: v / scale for k, v in r.items()}
        for k in list(r):
            if k != lead and k in reduced:
                f = r[k]
                for kk, vv in reduced[k].items():
                    nv = r.get(kk, 0) - f * vv
                    if nv:
                        r[kk] = nv
                    else:
                        r.pop(kk, None)
        reduced[lead] = r
    free = [c for c in columns if c not in reduced]
    basis = []
    for fcol in free:
        vec = {fcol: Fraction(1)}
        for lead, r in reduced.items():
            coef = r.get(fcol)
            if coef:
                vec[lead] = -coef
        basis.append(vec)
    return basis
