"""
Straight-line drawings of webs on the unit disc.

Used to superimpose webs (crossings become crossing nodes, found with exact
rational arithmetic) and to order strands at shared clasps for the ∪ union.
Internal vertices are placed by a Tutte barycentric layout with the boundary
pinned to the circle.
"""
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.webgraph import (Web, WebCombo, BOUNDARY, INTERNAL, CROSSING, unclasp, faces_of)
from src.utils import setup_logging, MalformedInputError, InvariantBreach

logger = setup_logging()

Point = Tuple[Fraction, Fraction]


class Degenerate(Exception):
    """Drawing has a non-transversal contact; retried with jitter"""


@dataclass
class EndpointPlan:
    """
    Where each part's boundary strands land.

    assignments[p][i] = (slot, rank) for the i-th strand of part p; strands in a
    slot are ordered left to right by rank. Parts later in over_order pass over
    earlier ones at crossings.
    """
    n_slots: int
    assignments: List[List[Tuple[int, object]]]
    over_order: Optional[List[int]] = None
    seed: int = 0

    @classmethod
    def parallel(cls, n_strands: int, copies: int) -> 'EndpointPlan':
        return cls(n_strands, [[(s, j) for s in range(n_strands)] for j in range(copies)])

    @classmethod
    def disjoint(cls, slot_lists: Sequence[Sequence[int]], n_slots: int) -> 'EndpointPlan':
        return cls(n_slots, [[(s, 0) for s in slots] for slots in slot_lists])

    @classmethod
    def stacked(cls, parts: Sequence[Web]) -> 'EndpointPlan':
        """Clasp c of every part lands in slot c; earlier parts sit to the left"""
        n = len(parts[0].boundary)
        assignments = []
        for p, part in enumerate(parts):
            if len(part.boundary) != n:
                raise MalformedInputError("Stacked parts need the same number of clasps")
            assignments.append([(c, (p, i)) for c, b in enumerate(part.boundary)
                                for i in range(len(part.rotation[b]))])
        return cls(n, assignments)


# -- exact helpers ----------------------------------------------------------

def circle_point(angle_deg: float) -> Point:
    """Rational point on the unit circle near the given angle in (-180, 180)"""
    t = Fraction(math.tan(math.radians(angle_deg) / 2)).limit_denominator(10 ** 9)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _orient(a: Point, b: Point, c: Point):
    return _cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1])


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segment_intersection(p1: Point, q1: Point, p2: Point, q2: Point) -> Optional[Tuple[Fraction, Fraction]]:
    """Parameters (s, u) of a transversal crossing, None if disjoint; Degenerate on touching"""
    d1 = _orient(p1, q1, p2)
    d2 = _orient(p1, q1, q2)
    d3 = _orient(p2, q2, p1)
    d4 = _orient(p2, q2, q1)
    if d1 * d2 < 0 and d3 * d4 < 0:
        rx, ry = q1[0] - p1[0], q1[1] - p1[1]
        sx, sy = q2[0] - p2[0], q2[1] - p2[1]
        denom = _cross(rx, ry, sx, sy)
        wx, wy = p2[0] - p1[0], p2[1] - p1[1]
        return _cross(wx, wy, sx, sy) / denom, _cross(wx, wy, rx, ry) / denom
    if ((d1 == 0 and _on_segment(p1, q1, p2)) or (d2 == 0 and _on_segment(p1, q1, q2))
            or (d3 == 0 and _on_segment(p2, q2, p1)) or (d4 == 0 and _on_segment(p2, q2, q1))):
        raise Degenerate("segments touch")
    return None


# -- layouts ----------------------------------------------------------------

def tutte_positions(w: Web, pinned: Dict[int, Tuple[float, float]]) -> Dict[int, Tuple[float, float]]:
    """Barycentric positions for the unpinned vertices of w"""
    free = [v for v in w.rotation if v not in pinned]
    index = {v: i for i, v in enumerate(free)}
    pos = dict(pinned)
    if not free:
        return pos
    a = np.zeros((len(free), len(free)))
    rhs = np.zeros((len(free), 2))
    for v in free:
        i = index[v]
        for h in w.rotation[v]:
            u = w.neighbor(h)
            a[i, i] += 1
            if u in index:
                a[i, index[u]] -= 1
            else:
                rhs[i] += pinned[u]
    try:
        sol = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError:
        raise MalformedInputError("Cannot draw a web component that does not reach the boundary")
    for v in free:
        pos[v] = (float(sol[index[v], 0]), float(sol[index[v], 1]))
    return pos


def _rotation_matches_drawing(w: Web, pos: Dict[int, Tuple[float, float]]) -> bool:
    for v in w.internal_vertices():
        x0, y0 = pos[v]
        rot = w.rotation[v]
        angles = [math.atan2(pos[w.neighbor(h)][1] - y0, pos[w.neighbor(h)][0] - x0) for h in rot]
        order = sorted(range(len(rot)), key=lambda i: -angles[i])
        start = order.index(0)
        if order[start:] + order[:start] != list(range(len(rot))):
            return False
    return True


# -- superimposition ----------------------------------------------------------

def superimpose(parts: Sequence[Web], plan: EndpointPlan, attempts: int = 6, cut: 'CableCut' = None) -> Web:
    """Draw the parts in one disc and turn transversal intersections into crossing nodes"""
    parts = [unclasp(p) for p in parts]
    if len(plan.assignments) != len(parts):
        raise MalformedInputError("Endpoint plan lists a different number of parts")
    for p, part in enumerate(parts):
        if len(plan.assignments[p]) != len(part.boundary):
            raise MalformedInputError(f"Endpoint plan for part {p} does not match its {len(part.boundary)} strands")
        if part.has_crossings():
            raise MalformedInputError("Superimposed parts must be crossing-free webs")
    rng = random.Random(plan.seed)
    last = None
    for attempt in range(attempts):
        jitter = 0.0 if attempt == 0 else 10.0 ** (-3 - attempt)
        try:
            return _superimpose_once(parts, plan, rng, jitter, cut)
        except Degenerate as e:
            last = e
            logger.debug(f"Superimposition attempt {attempt} degenerate ({e}); retrying with jitter")
    raise InvariantBreach(f"Superimposition stayed degenerate after {attempts} attempts: {last}")


def _slot_layout(parts, plan, rng, jitter):
    """Color, ordered strands and exact point per (part, strand index)"""
    slot_members: Dict[int, List[Tuple[float, int, int]]] = {}
    for p, part in enumerate(parts):
        for i, (slot, rank) in enumerate(plan.assignments[p]):
            if not 0 <= slot < plan.n_slots:
                raise MalformedInputError(f"Slot {slot} out of range")
            slot_members.setdefault(slot, []).append((rank, p, i))
    slot_color = {}
    points: Dict[Tuple[int, int], Point] = {}
    width = 360.0 / plan.n_slots
    for slot, members in slot_members.items():
        members.sort()
        colors = {parts[p].color[parts[p].boundary[i]] for _, p, i in members}
        if len(colors) != 1:
            raise MalformedInputError(f"Slot {slot} collects strands of both colors")
        slot_color[slot] = colors.pop()
        m = len(members)
        centre = 180.0 - width * (slot + 0.5)
        delta = width * 0.5 / m
        for j, (_, p, i) in enumerate(members):
            wobble = rng.uniform(-0.25, 0.25) * delta if jitter else 0.0
            points[(p, i)] = circle_point(centre + delta * ((m - 1) / 2 - j) + wobble)
    return slot_members, slot_color, points


def _superimpose_once(parts, plan, rng, jitter, cut=None) -> Web:
    slot_members, slot_color, points = _slot_layout(parts, plan, rng, jitter)
    over_rank = {p: r for r, p in enumerate(plan.over_order or range(len(parts)))}
    # exact positions per (part, vertex)
    pos: Dict[Tuple[int, int], Point] = {}
    for p, part in enumerate(parts):
        pinned = {}
        for i, b in enumerate(part.boundary):
            pt = points[(p, i)]
            pos[(p, b)] = pt
            pinned[b] = (float(pt[0]), float(pt[1]))
        drawn = tutte_positions(part, pinned)
        if not _rotation_matches_drawing(part, drawn):
            raise MalformedInputError(f"Part {p} has no faithful straight-line drawing")
        for v, (x, y) in drawn.items():
            if v in pinned:
                continue
            if jitter:
                x += rng.uniform(-jitter, jitter)
                y += rng.uniform(-jitter, jitter)
            pos[(p, v)] = (Fraction(x).limit_denominator(10 ** 12), Fraction(y).limit_denominator(10 ** 12))
    segments = []
    for p, part in enumerate(parts):
        for h, t in part.edges():
            segments.append((p, h, t, pos[(p, part.origin[h])], pos[(p, part.origin[t])]))
    # same-part planarity
    hits: Dict[int, List[Tuple[Fraction, int, bool]]] = {i: [] for i in range(len(segments))}
    crossings = []
    for i in range(len(segments)):
        pi, hi, ti, P1, Q1 = segments[i]
        ends_i = {parts[pi].origin[hi], parts[pi].origin[ti]}
        for j in range(i + 1, len(segments)):
            pj, hj, tj, P2, Q2 = segments[j]
            if pi == pj:
                ends_j = {parts[pj].origin[hj], parts[pj].origin[tj]}
                if ends_i & ends_j:
                    continue
                if segment_intersection(P1, Q1, P2, Q2) is not None:
                    raise Degenerate(f"part {pi} drawn with a self-crossing")
                continue
            found = segment_intersection(P1, Q1, P2, Q2)
            if found is None:
                continue
            s, u = found
            c = len(crossings)
            crossings.append((i, j, s, u))
            hits[i].append((s, c, True))
            hits[j].append((u, c, False))
    for seg, items in hits.items():
        params = [s for s, _, _ in items]
        if len(set(params)) != len(params):
            raise Degenerate("three strands meet at one point")
    return _assemble(parts, plan, slot_members, slot_color, segments, crossings, hits, over_rank, cut)


def _assemble(parts, plan, slot_members, slot_color, segments, crossings, hits, over_rank, cut=None) -> Web:
    kind, color, rotation, twin, side, over = {}, {}, {}, {}, {}, {}
    next_v = [0]
    next_h = [0]

    def new_v():
        next_v[0] += 1
        return next_v[0] - 1

    def new_h():
        next_h[0] += 1
        return next_h[0] - 1

    vmap: Dict[Tuple[int, int], int] = {}
    hmap: Dict[Tuple[int, int], int] = {}
    for p, part in enumerate(parts):
        for h in part.twin:
            hmap[(p, h)] = new_h()
        for v in part.internal_vertices():
            vid = new_v()
            vmap[(p, v)] = vid
            kind[vid] = INTERNAL
            color[vid] = part.color[v]
            rotation[vid] = tuple(hmap[(p, h)] for h in part.rotation[v])
    boundary = []
    for slot in sorted(slot_members):
        vid = new_v()
        kind[vid] = BOUNDARY
        color[vid] = slot_color[slot]
        strands = []
        for _, p, i in slot_members[slot]:
            b = parts[p].boundary[i]
            vmap[(p, b)] = vid
            strands.append(hmap[(p, parts[p].rotation[b][0])])
        rotation[vid] = tuple(strands)
        boundary.append(vid)

    def far_color(p, h):
        v = parts[p].origin[h]
        return parts[p].color[v]

    cross_halves = {}
    for c, (i, j, s, u) in enumerate(crossings):
        pa, ha, ta, Pa, Qa = segments[i]
        pb, hb, tb, Pb, Qb = segments[j]
        vid = new_v()
        kind[vid] = CROSSING
        color[vid] = None
        a_fwd, a_back, b_fwd, b_back = new_h(), new_h(), new_h(), new_h()
        ax, ay = Qa[0] - Pa[0], Qa[1] - Pa[1]
        bx, by = Qb[0] - Pb[0], Qb[1] - Pb[1]
        if _cross(ax, ay, bx, by) > 0:
            rotation[vid] = (a_fwd, b_back, a_back, b_fwd)
        else:
            rotation[vid] = (a_fwd, b_fwd, a_back, b_back)
        over[vid] = 0 if over_rank[pa] > over_rank[pb] else 1
        side[a_fwd] = far_color(pa, ta)
        side[a_back] = far_color(pa, ha)
        side[b_fwd] = far_color(pb, tb)
        side[b_back] = far_color(pb, hb)
        cross_halves[(c, True)] = (a_back, a_fwd)
        cross_halves[(c, False)] = (b_back, b_fwd)
    chains = {}
    for idx, (p, h, t, P, Q) in enumerate(segments):
        chain = [hmap[(p, h)]]
        for _, c, first in sorted(hits[idx]):
            back, fwd = cross_halves[(c, first)]
            chain.append(back)
            chain.append(fwd)
        chain.append(hmap[(p, t)])
        chains[idx] = chain
        for k in range(0, len(chain), 2):
            twin[chain[k]] = chain[k + 1]
            twin[chain[k + 1]] = chain[k]
    if cut is not None:
        site = _cut_site(cut, parts, segments, hits, chains)
        p, h, t = segments[site[0][0]][:3]
        ends = (parts[p].color[parts[p].origin[h]], parts[p].color[parts[p].origin[t]])
        _insert_braid(cut.permutation, site, ends, kind, color, rotation, twin, side, over, new_v, new_h)
    loops = sum(part.loops for part in parts)
    web = Web(kind, color, rotation, twin, boundary, over, side, loops)
    try:
        web.validate()
    except MalformedInputError as e:
        raise InvariantBreach(f"Superimposition produced an invalid diagram: {e}")
    logger.debug(f"Superimposed {len(parts)} parts with {len(crossings)} crossings")
    return web


def parallel_copies(w: Web, k: int) -> Web:
    """k parallel copies of an unclasped web, clasped at each boundary point"""
    w = unclasp(w)
    return superimpose([w] * k, EndpointPlan.parallel(len(w.boundary), k))


# -- cables with a permutation braid ----------------------------------------------

@dataclass(frozen=True)
class CableCut:
    """Reroute the parallel copies of one part edge through a permutation braid"""
    half_edge: int
    permutation: Tuple[int, ...]


_CUT_PARAMS = tuple(Fraction(n, 16) for n in (4, 12, 2, 14, 6, 10, 3, 13, 5, 11))


def _cut_site(cut: CableCut, parts, segments, hits, chains) -> List[Tuple[int, int, int]]:
    """(segment, P-side half-edge, Q-side half-edge) per copy of the cut edge, left to right across the cable"""
    copies = [i for i, seg in enumerate(segments) if cut.half_edge in seg[1:3]]
    if len(copies) != len(parts) or sorted(cut.permutation) != list(range(len(copies))):
        raise MalformedInputError(f"Permutation {cut.permutation} does not match {len(copies)} copies of the edge")
    P0, Q0 = segments[copies[0]][3:5]
    dx, dy = Q0[0] - P0[0], Q0[1] - P0[1]
    for s in _CUT_PARAMS:
        if any(x == s for i in copies for x, _, _ in hits[i]):
            continue
        points = []
        for i in copies:
            P, Q = segments[i][3:5]
            X = (P[0] + s * (Q[0] - P[0]), P[1] + s * (Q[1] - P[1]))
            points.append((-_cross(dx, dy, X[0] - P0[0], X[1] - P0[1]), i, X))
        points.sort()
        try:
            blocked = any(
                segment_intersection(A, B, seg[3], seg[4]) is not None
                for (_, ia, A), (_, ib, B) in zip(points, points[1:])
                for j, seg in enumerate(segments) if j not in (ia, ib))
        except Degenerate:
            blocked = True
        if blocked:
            continue
        site = []
        for _, i, _ in points:
            m = sum(1 for x, _, _ in hits[i] if x < s)
            site.append((i, chains[i][2 * m], chains[i][2 * m + 1]))
        return site
    raise Degenerate("no clean place to cut the cable")


def _insert_braid(permutation, site, ends, kind, color, rotation, twin, side, over, new_v, new_h):
    """Strand at position j on the P side leaves at position permutation[j] on the Q side"""
    p_color, q_color = ends
    dangling = [a for _, a, _ in site]
    targets = list(permutation)
    swapped = True
    while swapped:
        swapped = False
        for j in range(len(targets) - 1):
            if targets[j] < targets[j + 1]:
                continue
            c = new_v()
            kind[c] = CROSSING
            color[c] = None
            in_l, in_r, out_l, out_r = new_h(), new_h(), new_h(), new_h()
            # travelling up: left strand leaves NE, right strand leaves NW
            rotation[c] = (out_l, in_r, in_l, out_r)
            over[c] = 0
            side[in_l] = side[in_r] = p_color
            side[out_l] = side[out_r] = q_color
            for a, b in ((dangling[j], in_l), (dangling[j + 1], in_r)):
                twin[a], twin[b] = b, a
            dangling[j], dangling[j + 1] = out_r, out_l
            targets[j], targets[j + 1] = targets[j + 1], targets[j]
            swapped = True
    for a, (_, _, b) in zip(dangling, site):
        twin[a], twin[b] = b, a


def cable_with_permutation(w: Web, k: int, permutation: Sequence[int], half_edge: int = None) -> Web:
    """
    k parallel copies of w with the copies of one edge rerouted by a braid.

    The braid realizes `permutation` with the minimal number of crossings. The
    edge defaults to the first edge of the first internal face.
    """
    w = unclasp(w)
    if half_edge is None:
        faces = faces_of(w)
        if not faces:
            raise MalformedInputError("Cable permutation needs a web with an internal cycle")
        half_edge = faces[0][0]
    cut = CableCut(half_edge, tuple(permutation))
    return superimpose([w] * k, EndpointPlan.parallel(len(w.boundary), k), cut=cut)


# -- union of non-crossing webs --------------------------------------------------

def cup_union_webs(w1: Web, w2: Web) -> Web:
    """D1 ∪ D2 for two clasped webs on the same clasp colors; later operand goes outward"""
    for w in (w1, w2):
        if len(w.boundary) == 0 and w.rotation:
            raise MalformedInputError("∪ operands must not carry closed components other than loops")
    if len(w1.boundary) == 0:
        return w2.replace(loops=w1.loops + w2.loops)
    if len(w2.boundary) == 0:
        return w1.replace(loops=w1.loops + w2.loops)
    if [w1.color[b] for b in w1.boundary] != [w2.color[b] for b in w2.boundary]:
        raise MalformedInputError("∪ needs operands with the same clasp colors")
    n = len(w1.boundary)
    clasp_pts = [(math.cos(math.radians(180 - 360 * (c + 0.5) / n)),
                  math.sin(math.radians(180 - 360 * (c + 0.5) / n))) for c in range(n)]
    keyed = []
    for w in (w1, w2):
        pinned = {b: clasp_pts[c] for c, b in enumerate(w.boundary)}
        pos = tutte_positions(w, pinned)
        per_clasp = []
        for c, b in enumerate(w.boundary):
            px, py = clasp_pts[c]
            keys = []
            for h in w.rotation[b]:
                u = w.neighbor(h)
                dx, dy = pos[u][0] - px, pos[u][1] - py
                if w.kind[u] == BOUNDARY and u == b:
                    raise MalformedInputError("A strand returns to its own clasp")
                keys.append(math.atan2(dx * py - dy * px, -(dx * px + dy * py)))
            per_clasp.append(list(zip(keys, w.rotation[b])))
        keyed.append(per_clasp)
    # renumber w2 away from w1
    dv = w1.fresh_vertex()
    dh = w1.fresh_half_edge()
    kind = dict(w1.kind)
    color = dict(w1.color)
    rotation = {v: hs for v, hs in w1.rotation.items() if w1.kind[v] != BOUNDARY}
    twin = dict(w1.twin)
    for v, k in w2.kind.items():
        if k != BOUNDARY:
            kind[v + dv] = k
            color[v + dv] = w2.color[v]
            rotation[v + dv] = tuple(h + dh for h in w2.rotation[v])
    for h, t in w2.twin.items():
        twin[h + dh] = t + dh
    for c, b in enumerate(w1.boundary):
        first = keyed[0][c]
        second = [(k, h + dh) for k, h in keyed[1][c]]
        merged = []
        i = j = 0
        while i < len(first) or j < len(second):
            if j >= len(second):
                merged.append(first[i][1]); i += 1
            elif i >= len(first):
                merged.append(second[j][1]); j += 1
            else:
                k1, k2 = first[i][0], second[j][0]
                if abs(k1 - k2) < 1e-9:
                    take_second = k2 < 0
                else:
                    take_second = k2 < k1
                if take_second:
                    merged.append(second[j][1]); j += 1
                else:
                    merged.append(first[i][1]); i += 1
        rotation[b] = tuple(merged)
    web = Web(kind, color, rotation, twin, w1.boundary, loops=w1.loops + w2.loops)
    try:
        web.validate()
    except MalformedInputError:
        raise MalformedInputError("∪ operands cross; no planar arrangement of the shared clasps")
    return web


def cup_union(c1: WebCombo, c2: WebCombo) -> WebCombo:
    """Bilinear extension of ∪ to combinations"""
    out = WebCombo()
    for w1, a in c1.items():
        for w2, b in c2.items():
            out.add_term(cup_union_webs(w1, w2), a * b)
    return out
