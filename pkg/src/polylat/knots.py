"""Alexander invariants of lattice polygons in Z^3.

The polygon is projected along a direction taken from a fixed schedule of
primitive integer vectors; genericity (distinct projected vertices, no
vertex on a foreign edge, no triple points, resolvable depths) is decided
with exact integer and rational predicates, never floats.  A failed
direction falls through to the next one.  From the regular diagram we
build the crossing/arc incidences and evaluate the Alexander matrix:
an exact integer determinant at t = -1 gives the knot determinant, and
for small diagrams the polynomial itself is carried along as an optional
refinement.
"""

from __future__ import annotations

from fractions import Fraction

from .lattice import LatticePolymer, adjacency

# primitive directions with rapidly growing, pairwise incommensurate entries
PROJECTION_SCHEDULE = (
    (1, 2, 5),
    (1, 3, 11),
    (2, 5, 17),
    (1, 4, 19),
    (3, 7, 31),
    (1, 6, 43),
    (5, 11, 61),
    (1, 10, 101),
    (3, 16, 157),
    (2, 27, 223),
    (7, 30, 311),
    (1, 44, 431),
)

#: diagrams larger than this keep determinant only (polynomial elimination
#: over Z[t] gets slow, and nothing downstream needs it)
POLYNOMIAL_CROSSING_CAP = 26


class NoGenericProjectionError(RuntimeError):
    """Schedule exhausted; indicates a bug, not a legitimate input."""


def cycle_order(polymer: LatticePolymer) -> list:
    """Sites of a polygon in traversal order, starting from the lex-min site."""
    adj = adjacency(polymer)
    start = min(polymer.sites)
    second = min(adj[start])
    order = [start, second]
    while True:
        prev, cur = order[-2], order[-1]
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            return order
        order.append(nxt)


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, q, r):
    # q collinear-with and inside the closed box of segment p-r
    return (min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
            and min(p[1], r[1]) <= q[1] <= max(p[1], r[1]))


def _project(cycle, direction):
    a, b, c = direction
    proj = [(c * x1 - a * x3, c * x2 - b * x3) for (x1, x2, x3) in cycle]
    depth = [a * x1 + b * x2 + c * x3 for (x1, x2, x3) in cycle]
    return proj, depth


def _diagram(cycle, direction):
    """Crossing list for one direction, or None if any genericity test fails."""
    n = len(cycle)
    proj, depth = _project(cycle, direction)
    if len(set(proj)) != n:
        return None
    # no vertex on the interior of another edge's projection
    for i in range(n):
        p, r = proj[i], proj[(i + 1) % n]
        for j in range(n):
            if j == i or j == (i + 1) % n:
                continue
            q = proj[j]
            if _cross2(p, r, q) == 0 and _on_segment(p, q, r):
                return None
    crossings = []   # (edge_i, t_i, edge_j, t_j, over_is_i, sign)
    seen_points = set()
    for i in range(n):
        p1, p2 = proj[i], proj[(i + 1) % n]
        ri = (p2[0] - p1[0], p2[1] - p1[1])
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            q1, q2 = proj[j], proj[(j + 1) % n]
            rj = (q2[0] - q1[0], q2[1] - q1[1])
            denom = ri[0] * rj[1] - ri[1] * rj[0]
            if denom == 0:
                continue    # parallel; overlaps were excluded above
            qp = (q1[0] - p1[0], q1[1] - p1[1])
            t = Fraction(qp[0] * rj[1] - qp[1] * rj[0], denom)
            u = Fraction(qp[0] * ri[1] - qp[1] * ri[0], denom)
            if not (0 < t < 1 and 0 < u < 1):
                continue
            point = (p1[0] + t * ri[0], p1[1] + t * ri[1])
            if point in seen_points:
                return None     # triple point
            seen_points.add(point)
            hi = depth[i] + t * (depth[(i + 1) % n] - depth[i])
            hj = depth[j] + u * (depth[(j + 1) % n] - depth[j])
            if hi == hj:
                return None
            over_is_i = hi > hj
            over_dir, under_dir = (ri, rj) if over_is_i else (rj, ri)
            sign = 1 if (over_dir[0] * under_dir[1] - over_dir[1] * under_dir[0]) > 0 else -1
            crossings.append((i, t, j, u, over_is_i, sign))
    return crossings


def _crossing_relations(crossings):
    """Per-crossing (sign, under_in_arc, under_out_arc, over_arc)."""
    passages = []    # (edge, param, crossing id, is_over)
    for cid, (i, t, j, u, over_is_i, _sign) in enumerate(crossings):
        passages.append((i, t, cid, over_is_i))
        passages.append((j, u, cid, not over_is_i))
    passages.sort()
    n_arcs = len(crossings)
    unders_before = []
    count = 0
    for _, _, _, is_over in passages:
        unders_before.append(count)
        if not is_over:
            count += 1
    by_crossing = {}
    for pos, (_, _, cid, is_over) in enumerate(passages):
        u = unders_before[pos]
        if is_over:
            by_crossing.setdefault(cid, {})["over"] = u % n_arcs
        else:
            by_crossing.setdefault(cid, {})["in"] = u % n_arcs
            by_crossing.setdefault(cid, {})["out"] = (u + 1) % n_arcs
    relations = []
    for cid, (_, _, _, _, _, sign) in enumerate(crossings):
        slot = by_crossing[cid]
        relations.append((sign, slot["in"], slot["out"], slot["over"]))
    return relations


def _det_bareiss_int(matrix) -> int:
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                m[r][c] = (m[r][c] * m[k][k] - m[r][k] * m[k][c]) // prev
            m[r][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# -- small exact polynomial arithmetic over Z[t] (coefficient tuples) -------

def _ptrim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _ptrim(out)


def _psub(a, b):
    return _padd(a, tuple(-x for x in b))


def _pdiv_exact(a, b):
    # exact division in Z[t]; Bareiss guarantees divisibility
    a = [Fraction(x) for x in a]
    db, lb = len(b) - 1, b[-1]
    if list(a) == [Fraction(0)]:
        return (0,)
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        coef = a[i] / lb
        q[i - db] = coef
        for j in range(db + 1):
            a[i - db + j] -= coef * b[j]
    if any(x != 0 for x in a) or any(c.denominator != 1 for c in q):
        raise ArithmeticError("inexact polynomial division")
    return _ptrim([int(c) for c in q])


def _det_bareiss_poly(matrix):
    m = [[_ptrim(p) for p in row] for row in matrix]
    n = len(m)
    if n == 0:
        return (1,)
    zero = (0,)
    sign = 1
    prev = (1,)
    for k in range(n - 1):
        if m[k][k] == zero:
            for r in range(k + 1, n):
                if m[r][k] != zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                num = _psub(_pmul(m[r][c], m[k][k]), _pmul(m[r][k], m[k][c]))
                m[r][c] = _pdiv_exact(num, prev)
            m[r][k] = zero
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return out if sign == 1 else tuple(-x for x in out)


def normalize_alexander(poly) -> tuple:
    """Strip units +-t^k: lowest degree 0, and value +1 at t=1."""
    poly = _ptrim(poly)
    if poly == (0,):
        return poly
    low = next(i for i, c in enumerate(poly) if c != 0)
    poly = poly[low:]
    if sum(poly) < 0:
        poly = tuple(-c for c in poly)
    return poly


def _alexander_from_relations(relations, want_polynomial):
    n = len(relations)
    if n == 0:
        return 1, (1,)
    int_rows = []
    for sign, a_in, a_out, a_over in relations:
        row = [0] * n
        # t*in - out + (1-t)*over at t=-1 for sign +1, the mirror for -1:
        # both reduce to (in, out, over) ~ (-1, -1, 2) up to global sign
        row[a_in] += -1
        row[a_out] += -1
        row[a_over] += 2
        int_rows.append(row)
    minor = [row[:-1] for row in int_rows[:-1]]
    det = abs(_det_bareiss_int(minor))
    poly = None
    if want_polynomial and n <= POLYNOMIAL_CROSSING_CAP:
        zero = (0,)
        prows = []
        for sign, a_in, a_out, a_over in relations:
            # Wirtinger relation, sign-adjusted:  t*in - out + (1-t)*over,
            # or its mirror  in - t*out + (t-1)*over.  Coefficients sum when
            # the over arc coincides with an under arc.
            row = [zero] * n
            row[a_in] = _padd(row[a_in], (0, 1) if sign > 0 else (1,))
            row[a_out] = _padd(row[a_out], (-1,) if sign > 0 else (0, -1))
            row[a_over] = _padd(row[a_over], (1, -1) if sign > 0 else (-1, 1))
            prows.append(row)
        pminor = [row[:-1] for row in prows[:-1]]
        poly = normalize_alexander(_det_bareiss_poly(pminor))
    return det, poly


def alexander_data(polymer: LatticePolymer, want_polynomial: bool = True):
    """(determinant, alexander polynomial or None) of a polygon in Z^3.

    Deterministic: directions are tried in schedule order and the first
    generic one is used; any generic projection of the same polygon yields
    the same invariants.
    """
    cycle = cycle_order(polymer)
    for direction in PROJECTION_SCHEDULE:
        crossings = _diagram(cycle, direction)
        if crossings is None:
            continue
        relations = _crossing_relations(crossings)
        det, poly = _alexander_from_relations(relations, want_polynomial)
        if det % 2 == 0:
            raise NoGenericProjectionError(
                "even determinant from direction %r: diagram was not regular"
                % (direction,))
        return det, poly
    raise NoGenericProjectionError("projection schedule exhausted")
