"""Text tile diagrams: each product state marks the basis cells it occupies."""

from __future__ import annotations

from typing import Dict, List, Optional

from . import families as fam


def _support(ket, positions):
    out = set()
    for z, _ in ket.items0():
        out.add(tuple(z[p] for p in positions))
    return out


def _short(label: str) -> str:
    return label.rsplit(".", 1)[-1].replace("phi", "")


def tile_grids(states: fam.StateSet) -> List[dict]:
    """One grid per bipartite block, or per Charles slice of a tripartite block.

    The stopper is left out: it would cover every cell.
    """
    layout = states.layout
    if states.family in (fam.EVEN, fam.ODD):
        groups: Dict[int, List[str]] = {}
        for rid in layout.ids:
            groups.setdefault(int(rid[1:]) - 1, []).append(rid)
        blocks = [(s, groups[s], [(l, k) for l, k in states.non_stoppers() if states.active_block[l] == s])
                  for s in sorted(groups)]
    else:
        blocks = [(0, list(layout.ids), states.non_stoppers())]
    grids = []
    for s, regs, members in blocks:
        if len(regs) == 2:
            grids.append(_grid(layout, regs[0], regs[1], None, members, s))
        elif len(regs) == 3:
            c = regs[0]
            for i in range(1, layout[c].dim + 1):
                grids.append(_grid(layout, regs[1], regs[2], (c, i), members, s))
        else:
            raise ValueError(f"cannot draw tiles for a block with {len(regs)} registers")
    return grids


def _grid(layout, row_reg, col_reg, fixed, members, block) -> dict:
    rows, cols = layout[row_reg].dim, layout[col_reg].dim
    rp, cp = layout.position[row_reg], layout.position[col_reg]
    cells: List[List[List[str]]] = [[[] for _ in range(cols)] for _ in range(rows)]
    for label, ket in members:
        positions = [rp, cp]
        if fixed is not None:
            positions.append(layout.position[fixed[0]])
        for t in sorted(_support(ket, positions)):
            if fixed is not None and t[2] != fixed[1] - 1:
                continue
            cells[t[0]][t[1]].append(_short(label))
    grid = [[",".join(c) if c else "." for c in row] for row in cells]
    out = {"block": block + 1, "rows": row_reg, "cols": col_reg, "grid": grid}
    if fixed is not None:
        out["slice"] = {"register": fixed[0], "index": fixed[1]}
    return out


def render_text(states: fam.StateSet, grids: Optional[List[dict]] = None) -> str:
    grids = tile_grids(states) if grids is None else grids
    lines = [f"tiles: {states.family} {','.join(map(str, states.params))} "
             f"(stopper omitted: {states.stopper})"]
    for g in grids:
        head = f"block {g['block']}: rows {g['rows']}, columns {g['cols']}"
        if "slice" in g:
            head += f", {g['slice']['register']}={g['slice']['index']}"
        lines.append(head)
        w = max(3, max(len(x) for row in g["grid"] for x in row) + 1)
        lines.append(" " * 4 + "".join(str(j + 1).rjust(w) for j in range(len(g["grid"][0]))))
        for i, row in enumerate(g["grid"]):
            lines.append(str(i + 1).rjust(3) + " " + "".join(x.rjust(w) for x in row))
    return "\n".join(lines) + "\n"
