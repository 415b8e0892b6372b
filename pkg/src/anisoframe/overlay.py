"""Exact arrangement integration for unions of convex polygons.

Integrates a function that is constant on every cell of the arrangement of a
finite family of convex polygons: the plane is split recursively along the
polygons' edge lines until each cell is inside or outside every polygon, and
the (exact rational) cell areas are accumulated against a caller-supplied
combination of the covering polygons' values.  Zero-area slivers are
discarded; boundaries carry no area, so half-open conventions do not matter
here.
"""
from __future__ import annotations

from fractions import Fraction

try:  # gmpy2 rationals are drop-in and considerably faster
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction


def _to_q(x):
    if isinstance(x, Fraction):
        return _Q(x.numerator, x.denominator)
    return _Q(x)


def polygon_area(poly) -> Fraction:
    """Signed shoelace area (positive for counterclockwise vertex order)."""
    n = len(poly)
    acc = 0
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return acc / 2


def edge_halfplanes(poly):
    """Halfplane triples (a, b, c) with a*x + b*y + c >= 0 inside the polygon."""
    hps = []
    n = len(poly)
    for i in range(n):
        px, py = poly[i]
        qx, qy = poly[(i + 1) % n]
        a = -(qy - py)
        b = qx - px
        c = -(a * px + b * py)
        hps.append((a, b, c))
    return hps


def split_convex(poly, hp):
    """Split a convex polygon along a line into (inside, outside) parts."""
    a, b, c = hp
    vals = [a * x + b * y + c for x, y in poly]
    inside, outside = [], []
    n = len(poly)
    for i in range(n):
        p, vp = poly[i], vals[i]
        q, vq = poly[(i + 1) % n], vals[(i + 1) % n]
        if vp >= 0:
            inside.append(p)
        if vp <= 0:
            outside.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            cut = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            inside.append(cut)
            outside.append(cut)
    return inside, outside


LEAF_ITEMS = 16


def integrate_cover(polygons, values, combine) -> float:
    """Integrate combine(values of covering polygons) over the plane.

    polygons: convex vertex lists (counterclockwise, exact rational coords).
    values:   one float per polygon.
    combine:  maps the list of values covering a cell to the cell integrand.

    Large families are first split by an axis-aligned quadtree with exact
    bounding-box pruning, then each leaf runs the edge-line splitting.
    """
    items = []
    bboxes = []
    for poly in polygons:
        qpoly = [(_to_q(x), _to_q(y)) for x, y in poly]
        items.append((qpoly, edge_halfplanes(qpoly)))
        xs = [p[0] for p in qpoly]
        ys = [p[1] for p in qpoly]
        bboxes.append((min(xs), max(xs), min(ys), max(ys)))
    if not items:
        return 0.0

    x0 = min(b[0] for b in bboxes)
    x1 = max(b[1] for b in bboxes)
    y0 = min(b[2] for b in bboxes)
    y1 = max(b[3] for b in bboxes)

    total = 0.0
    # parent_count tracks whether splitting still separates the family; once a
    # quadrant keeps most of its parent's members the overlap is intrinsic
    # (stacked layers) and the exact edge-line splitter takes over
    rects = [((x0, x1, y0, y1), list(range(len(items))), 4 * len(items))]
    while rects:
        (rx0, rx1, ry0, ry1), ids, parent_count = rects.pop()
        ids = [i for i in ids
               if bboxes[i][0] < rx1 and rx0 < bboxes[i][1]
               and bboxes[i][2] < ry1 and ry0 < bboxes[i][3]]
        if not ids:
            continue
        if len(ids) > LEAF_ITEMS and 4 * len(ids) <= 3 * parent_count:
            mx = (rx0 + rx1) / 2
            my = (ry0 + ry1) / 2
            n = len(ids)
            rects += [((rx0, mx, ry0, my), ids, n), ((mx, rx1, ry0, my), ids, n),
                      ((rx0, mx, my, ry1), ids, n), ((mx, rx1, my, ry1), ids, n)]
            continue
        cell = [(rx0, ry0), (rx1, ry0), (rx1, ry1), (rx0, ry1)]
        total += _bsp_integral(cell, [items[i] for i in ids],
                               [values[i] for i in ids], combine)
    return total


def _bsp_integral(box, items, values, combine) -> float:
    total = 0.0
    # explicit stack: (cell, undecided item ids, covering item ids)
    stack = [(box, list(range(len(items))), [])]
    while stack:
        cell, undecided, covering = stack.pop()
        covering = list(covering)
        remaining = []
        split_hp = None
        for item_id in undecided:
            _, hps = items[item_id]
            inside_all = True
            disjoint = False
            crossing = None
            for hp in hps:
                a, b, c = hp
                has_pos = has_neg = False
                for x, y in cell:
                    v = a * x + b * y + c
                    if v > 0:
                        has_pos = True
                    elif v < 0:
                        has_neg = True
                if not has_pos:
                    disjoint = True   # cell on the closed outside of this edge
                    break
                if has_neg:
                    inside_all = False
                    if crossing is None:
                        crossing = hp
            if disjoint:
                continue
            if inside_all:
                covering.append(item_id)
            else:
                remaining.append(item_id)
                if split_hp is None:
                    split_hp = crossing
        if not remaining:
            if covering:
                area = polygon_area(cell)
                if area > 0:
                    total += float(area) * combine([values[i] for i in covering])
            continue
        part_in, part_out = split_convex(cell, split_hp)
        for part in (part_in, part_out):
            if len(part) >= 3 and polygon_area(part) > 0:
                stack.append((part, remaining, covering))
    return total
