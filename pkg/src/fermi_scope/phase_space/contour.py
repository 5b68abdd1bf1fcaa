"""Level-set extraction on a PhaseSpaceField by marching squares."""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .grid import PhaseSpaceField

__all__ = ["zero_contour", "polyline_area", "is_closed"]

# Corner bits: 1 = (i, j), 2 = (i+1, j), 4 = (i+1, j+1), 8 = (i, j+1).
# Edges: 0 = bottom (i,j)-(i+1,j), 1 = right (i+1,j)-(i+1,j+1),
#        2 = top (i,j+1)-(i+1,j+1), 3 = left (i,j)-(i,j+1).
_SEGMENTS = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)], 6: [(0, 2)],
    7: [(3, 2)], 8: [(2, 3)], 9: [(0, 2)], 11: [(1, 2)], 12: [(3, 1)],
    13: [(0, 1)], 14: [(3, 0)],
}
# saddles, keyed by (case, centre above level)
_SADDLES = {
    (5, True): [(0, 1), (2, 3)], (5, False): [(3, 0), (1, 2)],
    (10, True): [(3, 0), (1, 2)], (10, False): [(0, 1), (2, 3)],
}


def _edge_key(i: int, j: int, edge: int, n_p: int) -> int:
    # horizontal edges (constant p) are even keys, vertical edges odd
    if edge == 0:
        return 2 * (i * n_p + j)
    if edge == 2:
        return 2 * (i * n_p + j + 1)
    if edge == 3:
        return 2 * (i * n_p + j) + 1
    return 2 * ((i + 1) * n_p + j) + 1


def zero_contour(field: PhaseSpaceField, level: float = 0.0) -> list[np.ndarray]:
    """Polylines (arrays of ``(x, p)`` rows) tracing ``values == level``.

    Cells with a masked or non-finite corner are skipped.  A closed polyline
    repeats its first vertex at the end.  An empty level set gives ``[]``.
    """
    v = np.asarray(field.values, dtype=float)
    x_axis = np.asarray(field.x_axis, dtype=float)
    p_axis = np.asarray(field.p_axis, dtype=float)
    n_x, n_p = v.shape
    if n_x < 2 or n_p < 2:
        return []
    bad = np.asarray(field.masked, bool) | ~np.isfinite(v)
    above = v > level
    case = (above[:-1, :-1] * 1 + above[1:, :-1] * 2
            + above[1:, 1:] * 4 + above[:-1, 1:] * 8)
    skip = bad[:-1, :-1] | bad[1:, :-1] | bad[1:, 1:] | bad[:-1, 1:]
    cells = np.argwhere((case != 0) & (case != 15) & ~skip)

    links: dict[int, list[int]] = defaultdict(list)
    points: dict[int, tuple[float, float]] = {}

    def vertex(key: int) -> None:
        if key in points:
            return
        base, vertical = divmod(key, 2)
        i, j = divmod(base, n_p)
        if vertical:
            a, b = v[i, j], v[i, j + 1]
            t = (level - a) / (b - a)
            points[key] = (x_axis[i], p_axis[j] + t * (p_axis[j + 1] - p_axis[j]))
        else:
            a, b = v[i, j], v[i + 1, j]
            t = (level - a) / (b - a)
            points[key] = (x_axis[i] + t * (x_axis[i + 1] - x_axis[i]), p_axis[j])

    for i, j in cells.tolist():
        c = int(case[i, j])
        if c in (5, 10):
            centre = 0.25 * (v[i, j] + v[i + 1, j] + v[i + 1, j + 1] + v[i, j + 1])
            segs = _SADDLES[(c, bool(centre > level))]
        else:
            segs = _SEGMENTS[c]
        for e0, e1 in segs:
            k0, k1 = _edge_key(i, j, e0, n_p), _edge_key(i, j, e1, n_p)
            vertex(k0)
            vertex(k1)
            links[k0].append(k1)
            links[k1].append(k0)

    return [np.array([points[k] for k in chain]) for chain in _chains(links)]


def _chains(links: dict[int, list[int]]) -> list[list[int]]:
    """Walk the degree <= 2 graph into paths: open ones first, then cycles."""
    seen: set[int] = set()
    out = []
    ends = sorted(k for k, nb in links.items() if len(nb) == 1)
    starts = ends + sorted(k for k in links if k not in ends)
    for start in starts:
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in links[cur] if k != prev and k not in seen]
            if not nxt:
                if len(chain) > 2 and start in links[cur] and prev is not None:
                    chain.append(start)
                break
            prev, cur = cur, nxt[0]
            chain.append(cur)
            seen.add(cur)
        out.append(chain)
    return out


def is_closed(line: np.ndarray) -> bool:
    return len(line) > 3 and bool(np.all(line[0] == line[-1]))


def polyline_area(line: np.ndarray) -> float:
    """Unsigned shoelace area of a polyline, closing it if needed."""
    x, p = line[:, 0], line[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(p, -1)) - np.dot(p, np.roll(x, -1))))
