"""
Tensor diagrams and webs as half-edge rotation systems.

Conventions:
- the boundary is read left to right from the marked point, i.e. clockwise
  around the disc; the web hangs below a horizontal boundary line
- rotation[v] lists the half-edges at an internal or crossing vertex in
  clockwise order; at a boundary vertex it lists the strands left to right
- side[h] (crossings only) is the color of the vertex reached by following
  the strand from the crossing along h
"""
import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.laurent import LaurentPoly
from src.utils import setup_logging, MalformedInputError, InvariantBreach

logger = setup_logging()

BOUNDARY = 'boundary'
INTERNAL = 'internal'
CROSSING = 'crossing'
WHITE = 'w'
BLACK = 'b'
_KIND_CODE = {BOUNDARY: 0, INTERNAL: 1, CROSSING: 2}


def opposite(color: str) -> str:
    return BLACK if color == WHITE else WHITE


class Web:
    """Planar web or diagram (crossing nodes allowed) on a disc"""

    def __init__(self, kind: Dict[int, str], color: Dict[int, Optional[str]],
                 rotation: Dict[int, Sequence[int]], twin: Dict[int, int],
                 boundary: Sequence[int], over: Dict[int, int] = None,
                 side: Dict[int, str] = None, loops: int = 0,
                 coords: Dict[int, Tuple[float, float]] = None):
        self.kind = dict(kind)
        self.color = dict(color)
        self.rotation = {v: tuple(hs) for v, hs in rotation.items()}
        self.twin = dict(twin)
        self.boundary = tuple(boundary)
        self.over = dict(over or {})
        self.side = dict(side or {})
        self.loops = loops
        self.coords = dict(coords) if coords else None
        self.origin: Dict[int, int] = {}
        for v, hs in self.rotation.items():
            for h in hs:
                self.origin[h] = v
        self._key = None

    # -- basic queries ------------------------------------------------

    def vertices(self) -> List[int]:
        return list(self.rotation)

    def internal_vertices(self) -> List[int]:
        return [v for v, k in self.kind.items() if k == INTERNAL]

    def crossings(self) -> List[int]:
        return [v for v, k in self.kind.items() if k == CROSSING]

    def half_edges(self) -> List[int]:
        return list(self.origin)

    def edges(self) -> List[Tuple[int, int]]:
        """Each edge once, as (half-edge, twin) with the smaller id first"""
        return [(h, t) for h, t in self.twin.items() if h < t]

    def multiplicity(self, b: int) -> int:
        return len(self.rotation[b])

    def is_clasped(self) -> bool:
        return any(len(self.rotation[b]) > 1 for b in self.boundary)

    def has_crossings(self) -> bool:
        return any(k == CROSSING for k in self.kind.values())

    def neighbor(self, h: int) -> int:
        return self.origin[self.twin[h]]

    def index_in_rotation(self, h: int) -> int:
        return self.rotation[self.origin[h]].index(h)

    def succ_cw(self, h: int) -> int:
        rot = self.rotation[self.origin[h]]
        return rot[(rot.index(h) + 1) % len(rot)]

    def pred_cw(self, h: int) -> int:
        rot = self.rotation[self.origin[h]]
        return rot[(rot.index(h) - 1) % len(rot)]

    def strands(self) -> List[int]:
        """Boundary half-edges in left-to-right order (unclasped reading)"""
        return [h for b in self.boundary for h in self.rotation[b]]

    def measure(self) -> Tuple[int, int]:
        """Rewrite measure: (crossings, internal vertices)"""
        return (len(self.crossings()), len(self.internal_vertices()))

    def key(self) -> bytes:
        if self._key is None:
            self._key = canonical_key(self)
        return self._key

    def replace(self, **changes) -> 'Web':
        fields = dict(kind=self.kind, color=self.color, rotation=self.rotation, twin=self.twin,
                      boundary=self.boundary, over=self.over, side=self.side, loops=self.loops,
                      coords=self.coords)
        fields.update(changes)
        return Web(**fields)

    def fresh_vertex(self) -> int:
        return max(self.rotation, default=-1) + 1

    def fresh_half_edge(self) -> int:
        return max(self.origin, default=-1) + 1

    def __repr__(self) -> str:
        return (f"Web(signature={signature_string(self)!r}, internal={len(self.internal_vertices())}, "
                f"crossings={len(self.crossings())}, loops={self.loops})")

    # -- validation ---------------------------------------------------

    def validate(self) -> 'Web':
        """Check the rotation system, coloring and planarity; returns self"""
        seen = set()
        for v, hs in self.rotation.items():
            if v not in self.kind:
                raise MalformedInputError(f"Vertex {v} has no kind")
            for h in hs:
                if h in seen:
                    raise MalformedInputError(f"Half-edge {h} appears twice in rotations")
                seen.add(h)
        if seen != set(self.twin):
            raise MalformedInputError("Twin map does not cover exactly the rotation half-edges")
        for h, t in self.twin.items():
            if t == h or self.twin.get(t) != h:
                raise MalformedInputError(f"Twin map is not a fixed-point-free involution at {h}")
        boundary_set = set(self.boundary)
        if len(boundary_set) != len(self.boundary):
            raise MalformedInputError("Boundary lists a vertex twice")
        for v, k in self.kind.items():
            deg = len(self.rotation.get(v, ()))
            if k == BOUNDARY:
                if v not in boundary_set or deg < 1:
                    raise MalformedInputError(f"Boundary vertex {v} is not on the boundary or has no strand")
            elif k == INTERNAL:
                if deg != 3:
                    raise MalformedInputError(f"Internal vertex {v} has degree {deg}")
            elif k == CROSSING:
                if deg != 4:
                    raise MalformedInputError(f"Crossing {v} has degree {deg}")
            else:
                raise MalformedInputError(f"Unknown vertex kind {k!r}")
            if k != CROSSING and self.color.get(v) not in (WHITE, BLACK):
                raise MalformedInputError(f"Vertex {v} has no color")
        if not boundary_set <= set(v for v, k in self.kind.items() if k == BOUNDARY):
            raise MalformedInputError("Boundary order names a non-boundary vertex")
        for h, t in self.twin.items():
            u, w = self.origin[h], self.origin[t]
            ku, kw = self.kind[u], self.kind[w]
            if ku != CROSSING and kw != CROSSING:
                if self.color[u] == self.color[w]:
                    raise MalformedInputError(f"Edge {h}-{t} joins two vertices of color {self.color[u]}")
            elif ku == CROSSING:
                expected = self.color[w] if kw != CROSSING else self.side.get(_across(self, t))
                if self.side.get(h) != expected:
                    raise MalformedInputError(f"Crossing half-edge {h} has inconsistent side color")
        euler = euler_defect(self)
        if euler != 0:
            raise MalformedInputError(f"Rotation system is not planar (Euler defect {euler})")
        return self


def _across(w: Web, h: int) -> int:
    """The half-edge opposite h at its crossing"""
    rot = w.rotation[w.origin[h]]
    return rot[(rot.index(h) + 2) % 4]


# -- signatures -------------------------------------------------------------

def signature_of(w: Web) -> Tuple[str, ...]:
    return tuple(w.color[b] for b in w.boundary)


def signature_string(w: Web) -> str:
    return ''.join(signature_of(w))


def unclasped_signature(w: Web) -> str:
    return ''.join(w.color[b] * len(w.rotation[b]) for b in w.boundary)


def signature_type(signature: Iterable[str]) -> Tuple[int, int]:
    letters = list(signature)
    return (letters.count(WHITE), letters.count(BLACK))


# -- faces ------------------------------------------------------------------

@dataclass
class FaceStructure:
    cycles: List[Tuple]
    internal: List[bool]
    face_of: Dict[int, int]


def _augmented(w: Web):
    """Rotation system with each boundary strand as its own point and a virtual boundary cycle"""
    rot: Dict[object, Tuple] = {}
    twin: Dict[object, object] = dict(w.twin)
    for v, hs in w.rotation.items():
        if w.kind[v] != BOUNDARY:
            rot[v] = hs
    strands = w.strands()
    n = len(strands)
    for s, h in enumerate(strands):
        rot[('p', s)] = (('r', s), h, ('l', s))
        twin[('r', s)] = ('l', (s + 1) % n)
        twin[('l', (s + 1) % n)] = ('r', s)
    pos = {}
    for v, hs in rot.items():
        for i, h in enumerate(hs):
            pos[h] = (v, i)
    return rot, twin, pos


def face_structure(w: Web) -> FaceStructure:
    rot, twin, pos = _augmented(w)
    visited = set()
    cycles = []
    for v, hs in rot.items():
        for start in hs:
            if start in visited:
                continue
            cycle = []
            h = start
            while h not in visited:
                visited.add(h)
                cycle.append(h)
                t = twin[h]
                vt, i = pos[t]
                h = rot[vt][(i + 1) % len(rot[vt])]
            cycles.append(tuple(cycle))
    internal = [all(isinstance(h, int) for h in c) for c in cycles]
    face_of = {}
    for idx, c in enumerate(cycles):
        for h in c:
            if isinstance(h, int):
                face_of[h] = idx
    return FaceStructure(cycles, internal, face_of)


def euler_defect(w: Web) -> int:
    """V - E + F - 2C on the augmented sphere graph; zero iff planar"""
    rot, twin, pos = _augmented(w)
    faces = len(face_structure(w).cycles)
    vertices = len(rot)
    edges = len(twin) // 2
    parent = {v: v for v in rot}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h, t in twin.items():
        a, b = find(pos[h][0]), find(pos[t][0])
        if a != b:
            parent[a] = b
    components = len({find(v) for v in rot})
    return vertices - edges + faces - 2 * components


def faces_of(w: Web) -> List[Tuple[int, ...]]:
    """Internal faces as cycles of half-edges (each face on the left of its half-edges)"""
    fs = face_structure(w)
    return [c for c, inner in zip(fs.cycles, fs.internal) if inner]


def has_multi_edge(w: Web) -> bool:
    seen = set()
    for h, t in w.edges():
        u, v = w.origin[h], w.origin[t]
        if CROSSING in (w.kind[u], w.kind[v]):
            continue
        if w.kind[u] == BOUNDARY and w.kind[v] == BOUNDARY:
            continue
        pair = (min(u, v), max(u, v))
        if pair in seen:
            return True
        seen.add(pair)
    return False


def is_non_elliptic(w: Web) -> bool:
    if w.has_crossings() or w.loops:
        return False
    if has_multi_edge(w):
        return False
    return all(len(face) >= 6 for face in faces_of(w))


def has_boundary_y(w: Web) -> bool:
    """An internal vertex with at least two edges to the boundary"""
    for v in w.internal_vertices():
        hits = sum(1 for h in w.rotation[v] if w.kind[w.neighbor(h)] == BOUNDARY)
        if hits >= 2:
            return True
    return False


# -- canonical keys ---------------------------------------------------------

def _traverse(w: Web, seeds: List[Tuple[int, Optional[int]]]):
    """Breadth-first labelling from (vertex, entry half-edge) seeds"""
    label: Dict[int, int] = {}
    entry: Dict[int, Optional[int]] = {}
    order: List[int] = []
    for v, e in seeds:
        label[v] = len(order)
        entry[v] = e
        order.append(v)
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for h in _ordered(w, v, entry[v]):
            u = w.neighbor(h)
            if u not in label:
                label[u] = len(order)
                entry[u] = w.twin[h]
                order.append(u)
    return label, entry, order


def _ordered(w: Web, v: int, e: Optional[int]) -> Tuple[int, ...]:
    rot = w.rotation[v]
    if e is None or w.kind[v] == BOUNDARY:
        return rot
    i = rot.index(e)
    return rot[i:] + rot[:i]


def _encode(w: Web, label, entry, order) -> Tuple:
    out = []
    for v in order:
        rot = _ordered(w, v, entry[v])
        arms = []
        for h in rot:
            t = w.twin[h]
            u = w.origin[t]
            arms.append((label[u], _ordered(w, u, entry[u]).index(t)))
        item = (_KIND_CODE[w.kind[v]], w.color.get(v) or '', tuple(arms))
        if w.kind[v] == CROSSING:
            shift = w.rotation[v].index(entry[v]) if entry[v] is not None else 0
            over = (w.over[v] - shift) % 2 if v in w.over else -1
            item = item + (over, tuple(w.side.get(h, '') for h in rot))
        out.append(item)
    return tuple(out)


def canonical_key(w: Web) -> bytes:
    """Byte key equal for webs isomorphic by a boundary-respecting planar isomorphism"""
    label, entry, order = _traverse(w, [(b, None) for b in w.boundary])
    main = _encode(w, label, entry, order)
    rest = [v for v in w.rotation if v not in label]
    closed = []
    while rest:
        comp_label, _, comp_order = _traverse(w, [(rest[0], w.rotation[rest[0]][0])])
        members = set(comp_order)
        best = None
        for v in comp_order:
            for e in w.rotation[v]:
                enc = _encode(w, *_traverse(w, [(v, e)]))
                if best is None or enc < best:
                    best = enc
        closed.append(best)
        rest = [v for v in rest if v not in members]
    closed.sort()
    return repr((main, tuple(closed), w.loops)).encode()


def same_up_to_rotation(w1: Web, w2: Web) -> bool:
    """Isomorphic after moving the marked point"""
    n = len(w1.boundary)
    if n != len(w2.boundary):
        return False
    target = w2.key()
    return any(rotate_boundary(w1, s).key() == target for s in range(max(n, 1)))


# -- clasps and marked point -------------------------------------------------

def unclasp(w: Web) -> Web:
    """Split every boundary vertex of multiplicity m into m adjacent points (half-edge ids kept)"""
    if not w.is_clasped():
        return w
    kind = {v: k for v, k in w.kind.items() if k != BOUNDARY}
    color = {v: c for v, c in w.color.items() if w.kind[v] != BOUNDARY}
    rotation = {v: hs for v, hs in w.rotation.items() if w.kind[v] != BOUNDARY}
    nxt = w.fresh_vertex()
    boundary = []
    for b in w.boundary:
        for i, h in enumerate(w.rotation[b]):
            vid = b if i == 0 else nxt
            if i:
                nxt += 1
            kind[vid] = BOUNDARY
            color[vid] = w.color[b]
            rotation[vid] = (h,)
            boundary.append(vid)
    return Web(kind, color, rotation, w.twin, boundary, w.over, w.side, w.loops)


def clasp(w: Web, runs: Sequence[int]) -> Web:
    """Bundle consecutive boundary vertices into clasps of the given run lengths"""
    if sum(runs) != len(w.boundary) or any(r < 1 for r in runs):
        raise MalformedInputError(f"Bundling {list(runs)} does not cover {len(w.boundary)} boundary vertices")
    kind = {v: k for v, k in w.kind.items() if k != BOUNDARY}
    color = {v: c for v, c in w.color.items() if w.kind[v] != BOUNDARY}
    rotation = {v: hs for v, hs in w.rotation.items() if w.kind[v] != BOUNDARY}
    boundary = []
    pos = 0
    for run in runs:
        block = w.boundary[pos:pos + run]
        pos += run
        colors = {w.color[b] for b in block}
        if len(colors) != 1:
            raise MalformedInputError(f"Clasp run {list(block)} mixes colors")
        vid = block[0]
        kind[vid] = BOUNDARY
        color[vid] = colors.pop()
        rotation[vid] = tuple(h for b in block for h in w.rotation[b])
        boundary.append(vid)
    return Web(kind, color, rotation, w.twin, boundary, w.over, w.side, w.loops)


def rotate_boundary(w: Web, steps: int) -> Web:
    """Move the marked point `steps` boundary vertices clockwise"""
    n = len(w.boundary)
    if n == 0:
        return w
    steps %= n
    return w.replace(boundary=w.boundary[steps:] + w.boundary[:steps])


# -- splicing -----------------------------------------------------------------

def splice(w: Web, remove: Iterable[int], links: Iterable[Tuple[int, int]],
           new_vertices: Sequence[Tuple[int, str, str, Sequence[int]]] = ()) -> Web:
    """
    Delete vertices and rewire.

    links pair removed half-edges and/or half-edges of new vertices; a dangling
    alive half-edge follows removed -> link partner -> old twin until it meets an
    alive or new half-edge. Closed chains of linked removed half-edges become loops.
    new_vertices items are (id, kind, color, rotation).
    """
    remove = set(remove)
    removed_h = {h for v in remove for h in w.rotation[v]}
    new_h = {h for _, _, _, rot in new_vertices for h in rot}
    link: Dict[int, int] = {}
    for a, b in links:
        if a in link or b in link:
            raise InvariantBreach(f"Half-edge linked twice in splice: {a}, {b}")
        link[a] = b
        link[b] = a
    kind = {v: k for v, k in w.kind.items() if v not in remove}
    color = {v: c for v, c in w.color.items() if v not in remove}
    rotation = {v: hs for v, hs in w.rotation.items() if v not in remove}
    for vid, k, c, rot in new_vertices:
        kind[vid] = k
        color[vid] = c
        rotation[vid] = tuple(rot)
    twin = {h: t for h, t in w.twin.items() if h not in removed_h and t not in removed_h}
    visited = set()

    def follow(r: int) -> int:
        # r is a removed half-edge reached from outside; walk to the far alive/new end
        while True:
            visited.add(r)
            if r not in link:
                raise InvariantBreach(f"Splice leaves half-edge {r} dangling")
            p = link[r]
            visited.add(p)
            if p in new_h:
                return p
            q = w.twin[p]
            if q not in removed_h:
                return q
            r = q

    for h, t in w.twin.items():
        if h not in removed_h and t in removed_h and h not in twin:
            far = follow(t)
            twin[h] = far
            twin[far] = h
    for h in new_h:
        if h in twin:
            continue
        if h not in link:
            raise InvariantBreach(f"New half-edge {h} is not linked")
        p = link[h]
        visited.add(h)
        if p in new_h:
            far = p
        else:
            visited.add(p)
            q = w.twin[p]
            far = q if q not in removed_h else follow(q)
        if far == h:
            raise InvariantBreach(f"Splice closes new half-edge {h} onto itself")
        twin[h] = far
        twin[far] = h
    loops = w.loops
    for r in removed_h:
        if r in link and r not in visited:
            # closed chain: r -> link -> old twin -> ...
            x = r
            while x not in visited:
                visited.add(x)
                p = link[x]
                visited.add(p)
                x = w.twin[p]
                if x not in removed_h or x not in link:
                    raise InvariantBreach("Splice produced an open chain inside removed region")
            loops += 1
    boundary = [b for b in w.boundary if b not in remove]
    over = {c: o for c, o in w.over.items() if c not in remove}
    side = {h: s for h, s in w.side.items() if h not in removed_h}
    return Web(kind, color, rotation, twin, boundary, over, side, loops)


# -- builders -------------------------------------------------------------------

class WebBuilder:
    """Incremental construction; rotations follow the order edges are added unless reset"""

    def __init__(self):
        self.kind: Dict[int, str] = {}
        self.color: Dict[int, str] = {}
        self.rotation: Dict[int, List[int]] = {}
        self.twin: Dict[int, int] = {}
        self.boundary: List[int] = []
        self.coords: Dict[int, Tuple[float, float]] = {}
        self._next_v = 0
        self._next_h = 0

    def add_vertex(self, kind: str, color: str = None, at: Tuple[float, float] = None) -> int:
        v = self._next_v
        self._next_v += 1
        self.kind[v] = kind
        self.color[v] = color
        self.rotation[v] = []
        if at is not None:
            self.coords[v] = at
        return v

    def add_boundary(self, color: str, at: Tuple[float, float] = None) -> int:
        v = self.add_vertex(BOUNDARY, color, at)
        self.boundary.append(v)
        return v

    def add_edge(self, u: int, w: int) -> Tuple[int, int]:
        hu, hw = self._next_h, self._next_h + 1
        self._next_h += 2
        self.twin[hu] = hw
        self.twin[hw] = hu
        self.rotation[u].append(hu)
        self.rotation[w].append(hw)
        return hu, hw

    def set_rotation(self, v: int, order: Sequence[int]):
        if sorted(order) != sorted(self.rotation[v]):
            raise InvariantBreach(f"Rotation reset at {v} changes its half-edges")
        self.rotation[v] = list(order)

    def build(self, loops: int = 0) -> Web:
        return Web(self.kind, self.color, self.rotation, self.twin, self.boundary,
                   loops=loops, coords=self.coords or None)


def empty_web(loops: int = 0) -> Web:
    return Web({}, {}, {}, {}, (), loops=loops)


def cup_web(first: str = WHITE) -> Web:
    """The U invariant: one edge between two boundary points"""
    wb = WebBuilder()
    b0 = wb.add_boundary(first)
    b1 = wb.add_boundary(opposite(first))
    wb.add_edge(b0, b1)
    return wb.build()


def tripod_web(color: str = WHITE) -> Web:
    """T with three boundary points of `color` joined at one internal vertex"""
    wb = WebBuilder()
    bs = [wb.add_boundary(color) for _ in range(3)]
    center = wb.add_vertex(INTERNAL, opposite(color))
    for b in bs:
        wb.add_edge(center, b)
    return wb.build()


def polygon_web(n: int, first: str = BLACK) -> Web:
    """An n-cycle with one leg per vertex (n = 2 bigon, 4 square, 6 hexagon)"""
    if n < 2 or n % 2:
        raise MalformedInputError(f"Polygon web needs an even number of sides, got {n}")
    wb = WebBuilder()
    color = first
    bs, us = [], []
    for _ in range(n):
        bs.append(wb.add_boundary(color))
        color = opposite(color)
    for i in range(n):
        us.append(wb.add_vertex(INTERNAL, opposite(wb.color[bs[i]])))
    legs = [wb.add_edge(us[i], bs[i])[0] for i in range(n)]
    nxt_half, prev_half = {}, {}
    for i in range(n):
        a, b = wb.add_edge(us[i], us[(i + 1) % n])
        nxt_half[i] = a
        prev_half[(i + 1) % n] = b
    for i in range(n):
        wb.set_rotation(us[i], [legs[i], nxt_half[i], prev_half[i]])
    return wb.build()


def arc_ring(colors: Sequence[str], width: int = 1) -> Web:
    """
    `width` nested rings of U arcs joining adjacent clasps, clasped.

    Clasp c gets `width` left strands and `width` right strands; ring r joins
    the r-th right strand of clasp c to the r-th left strand of clasp c+1.
    """
    wb = WebBuilder()
    clasps = [wb.add_boundary(c) for c in colors]
    n = len(clasps)
    for c in range(n):
        if colors[c] == colors[(c + 1) % n]:
            raise MalformedInputError("Adjacent clasps of an arc ring must have opposite colors")
    left = {c: [] for c in range(n)}
    right = {c: [] for c in range(n)}
    for r in range(width):
        for c in range(n):
            a, b = wb.add_edge(clasps[c], clasps[(c + 1) % n])
            right[c].append(a)
            left[(c + 1) % n].append(b)
    for c in range(n):
        # outermost ring sits furthest from the middle of the clasp
        wb.set_rotation(clasps[c], list(reversed(left[c])) + right[c])
    return wb.build()


def nest_in_ring(w: Web) -> Web:
    """w ∪ (arc ring) for a clasped web whose consecutive clasps alternate colors"""
    colors = [w.color[b] for b in w.boundary]
    n = len(colors)
    for c in range(n):
        if colors[c] == colors[(c + 1) % n]:
            raise MalformedInputError("Arc ring union needs alternating clasp colors")
    nv, nh = w.fresh_vertex(), w.fresh_half_edge()
    twin = dict(w.twin)
    rotation = dict(w.rotation)
    left, right = {}, {}
    for c in range(n):
        a, b = nh, nh + 1
        nh += 2
        twin[a], twin[b] = b, a
        right[c] = a
        left[(c + 1) % n] = b
    for c, bv in enumerate(w.boundary):
        rotation[bv] = (left[c],) + tuple(w.rotation[bv]) + (right[c],)
    return w.replace(rotation=rotation, twin=twin)


_SQ3 = math.sqrt(3) / 2
# corner offsets of a pointy-top hexagon in (sqrt(3)/2, 1/2) lattice units, clockwise from the top
_CORNERS = ((0, 2), (1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1))
_BLACK_CORNERS = {(0, 2), (1, -1), (-1, -1)}


def _lattice_point(X: int, Y: int) -> Tuple[float, float]:
    return (X * _SQ3, Y / 2)


def honeycomb_web(k: int, clasped: bool = False) -> Web:
    """
    The k-fold thickening of the hexagon W as an explicit honeycomb patch.

    3k(k-1)+1 hexagons, 6k^2 internal vertices, 6k legs in six clasps of k
    (SW, NW, N, NE, SE, S clockwise). Clasped output starts at the SW clasp; the
    unclasped output puts the marked point inside the S clasp so that the last
    floor(k/2) strands of that clasp come first.
    """
    if k < 1:
        raise MalformedInputError(f"Honeycomb side must be positive, got {k}")
    centers = [(2 * q + r, 3 * r)
               for q in range(-(k - 1), k) for r in range(-(k - 1), k) if abs(q + r) <= k - 1]
    corner_kind: Dict[Tuple[int, int], Tuple[int, int]] = {}
    adjacency: Dict[Tuple[int, int], set] = {}
    for cx, cy in centers:
        pts = [(cx + dx, cy + dy) for dx, dy in _CORNERS]
        for (dx, dy), p in zip(_CORNERS, pts):
            corner_kind.setdefault(p, (dx, dy))
            adjacency.setdefault(p, set())
        for i in range(6):
            a, b = pts[i], pts[(i + 1) % 6]
            adjacency[a].add(b)
            adjacency[b].add(a)
    wb = WebBuilder()
    vid = {}
    for p in sorted(adjacency):
        color = BLACK if corner_kind[p] in _BLACK_CORNERS else WHITE
        vid[p] = wb.add_vertex(INTERNAL, color, at=_lattice_point(*p))
    legs = []
    for p, nbrs in adjacency.items():
        if len(nbrs) == 2:
            dx, dy = corner_kind[p]
            tip = (p[0] + dx, p[1] + dy)
            legs.append((p, tip))
    rev = {v: p for p, v in vid.items()}
    edge_half = {}
    for p in sorted(adjacency):
        for q in sorted(adjacency[p]):
            if p < q:
                a, b = wb.add_edge(vid[p], vid[q])
                edge_half[(p, q)] = a
                edge_half[(q, p)] = b

    def clockwise_key(tip):
        x, y = _lattice_point(*tip)
        if tip[0] == 0 and tip[1] < 0:
            return 360.0
        return (-90.0 - math.degrees(math.atan2(y, x))) % 360.0

    legs.sort(key=lambda item: clockwise_key(item[1]))
    if not clasped:
        order = legs
    else:
        # rotate so the S clasp sits at the end as a whole
        shift = k // 2
        order = legs[shift:] + legs[:shift] if shift else legs
    leg_half = {}
    for p, tip in order:
        b = wb.add_boundary(opposite(wb.color[vid[p]]), at=_lattice_point(*tip))
        a, _ = wb.add_edge(vid[p], b)
        leg_half[p] = a
    for p, nbrs in adjacency.items():
        halves = [(q, edge_half[(p, q)]) for q in nbrs]
        if p in leg_half:
            dx, dy = corner_kind[p]
            halves.append(((p[0] + dx, p[1] + dy), leg_half[p]))
        x0, y0 = _lattice_point(*p)
        halves.sort(key=lambda item: -math.atan2(_lattice_point(*item[0])[1] - y0,
                                                  _lattice_point(*item[0])[0] - x0))
        wb.set_rotation(vid[p], [h for _, h in halves])
    web = wb.build()
    if clasped:
        web = clasp(web, [k] * 6)
        web.coords = None
    logger.debug(f"Honeycomb k={k}: {len(rev)} internal vertices, {len(order)} legs")
    return web


def hexagon_web() -> Web:
    """The hexagon W; signature wbwbwb from the marked point"""
    return honeycomb_web(1)


# -- linear combinations ---------------------------------------------------------

class WebCombo:
    """Formal combination of webs keyed by canonical key"""

    def __init__(self, terms: Iterable[Tuple[Web, LaurentPoly]] = ()):
        self._terms: Dict[bytes, Tuple[Web, LaurentPoly]] = {}
        for web, coeff in terms:
            self.add_term(web, coeff)

    @classmethod
    def of(cls, web: Web, coeff=1) -> 'WebCombo':
        return cls([(web, LaurentPoly.constant(coeff) if not isinstance(coeff, LaurentPoly) else coeff)])

    def add_term(self, web: Web, coeff: LaurentPoly, key: bytes = None):
        if not isinstance(coeff, LaurentPoly):
            coeff = LaurentPoly.constant(coeff)
        key = key or web.key()
        if key in self._terms:
            old_web, old = self._terms[key]
            total = old + coeff
            if total.is_zero():
                del self._terms[key]
            else:
                self._terms[key] = (old_web, total)
        elif not coeff.is_zero():
            self._terms[key] = (web, coeff)

    def items(self) -> List[Tuple[Web, LaurentPoly]]:
        return [self._terms[k] for k in sorted(self._terms)]

    def keys(self):
        return set(self._terms)

    def coefficient(self, web_or_key) -> LaurentPoly:
        key = web_or_key if isinstance(web_or_key, bytes) else web_or_key.key()
        return self._terms.get(key, (None, LaurentPoly.zero()))[1]

    def single(self) -> Optional[Tuple[Web, LaurentPoly]]:
        return next(iter(self._terms.values())) if len(self._terms) == 1 else None

    def is_zero(self) -> bool:
        return not self._terms

    def scale(self, c) -> 'WebCombo':
        return WebCombo((w, coeff * c) for w, coeff in self._terms.values())

    def map_coefficients(self, fn) -> 'WebCombo':
        return WebCombo((w, fn(coeff)) for w, coeff in self._terms.values())

    def __add__(self, other: 'WebCombo') -> 'WebCombo':
        out = WebCombo(self._terms.values())
        for key, (w, c) in other._terms.items():
            out.add_term(w, c, key)
        return out

    def __sub__(self, other: 'WebCombo') -> 'WebCombo':
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WebCombo):
            return NotImplemented
        if set(self._terms) != set(other._terms):
            return False
        return all(self._terms[k][1] == other._terms[k][1] for k in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        parts = [f"({c})*{w!r}" for w, c in self.items()]
        return 'WebCombo[' + ' + '.join(parts) + ']' if parts else 'WebCombo[0]'

    def first_difference(self, other: 'WebCombo') -> Optional[str]:
        """Human-readable description of the first differing term"""
        for key in sorted(set(self._terms) | set(other._terms)):
            a = self.coefficient(key)
            b = other.coefficient(key)
            if a != b:
                web = (self._terms.get(key) or other._terms.get(key))[0]
                return f"{web!r}: {a} vs {b}"
        return None


# -- interchange ---------------------------------------------------------------

def web_to_dict(w: Web) -> Dict:
    vertices = [{'id': v, 'color': w.color.get(v), 'kind': w.kind[v]} for v in sorted(w.rotation)]
    half_edges = []
    for v in sorted(w.rotation):
        rot = w.rotation[v]
        for i, h in enumerate(rot):
            if w.kind[v] == BOUNDARY:
                nxt = rot[i + 1] if i + 1 < len(rot) else None
            else:
                nxt = rot[(i + 1) % len(rot)]
            half_edges.append({'id': h, 'twin': w.twin[h], 'next': nxt, 'vertex': v})
    data = {
        'signature': signature_string(w),
        'marked': 0,
        'vertices': vertices,
        'halfEdges': half_edges,
        'boundary': list(w.boundary),
        'multiplicities': {str(b): len(w.rotation[b]) for b in w.boundary},
    }
    if w.over:
        data['over'] = {str(c): o for c, o in w.over.items()}
    if w.side:
        data['sides'] = {str(h): s for h, s in w.side.items()}
    if w.loops:
        data['loops'] = w.loops
    return data


def web_to_json(w: Web) -> str:
    return json.dumps(web_to_dict(w), indent=2)


def web_from_dict(data: Dict) -> Web:
    try:
        kind = {int(v['id']): v['kind'] for v in data['vertices']}
        color = {int(v['id']): v.get('color') for v in data['vertices']}
        nxt, twin, owner = {}, {}, {}
        for he in data['halfEdges']:
            h = int(he['id'])
            twin[h] = int(he['twin'])
            nxt[h] = None if he.get('next') is None else int(he['next'])
            owner[h] = int(he['vertex'])
        by_vertex: Dict[int, List[int]] = {v: [] for v in kind}
        for h, v in owner.items():
            by_vertex[v].append(h)
        rotation = {}
        for v, hs in by_vertex.items():
            if not hs:
                raise MalformedInputError(f"Vertex {v} has no half-edges")
            if kind[v] == BOUNDARY:
                pointed = {nxt[h] for h in hs if nxt[h] is not None}
                starts = [h for h in hs if h not in pointed]
                if len(starts) != 1:
                    raise MalformedInputError(f"Boundary vertex {v} strands do not form a chain")
                start = starts[0]
            else:
                start = min(hs)
            order = [start]
            while len(order) < len(hs):
                h = nxt[order[-1]]
                if h is None or h in order or owner.get(h) != v:
                    raise MalformedInputError(f"Broken rotation at vertex {v}")
                order.append(h)
            rotation[v] = order
        boundary = [int(b) for b in data['boundary']]
        marked = int(data.get('marked', 0))
        if boundary:
            marked %= len(boundary)
            boundary = boundary[marked:] + boundary[:marked]
        mults = data.get('multiplicities', {})
        for b in boundary:
            if str(b) in mults and int(mults[str(b)]) != len(rotation[b]):
                raise MalformedInputError(f"Multiplicity of boundary vertex {b} disagrees with its strands")
        over = {int(c): int(o) for c, o in data.get('over', {}).items()}
        side = {int(h): s for h, s in data.get('sides', {}).items()}
        web = Web(kind, color, rotation, twin, boundary, over, side, int(data.get('loops', 0)))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, MalformedInputError):
            raise
        raise MalformedInputError(f"Malformed web JSON: {e}")
    sig = data.get('signature')
    if sig is not None and sig != signature_string(web):
        raise MalformedInputError(f"Signature {sig!r} disagrees with boundary colors {signature_string(web)!r}")
    return web.validate()


def web_from_json(text: str) -> Web:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInputError(f"Invalid JSON: {e}")
    return web_from_dict(data)


# -- rendering ---------------------------------------------------------------

def circle_layout(w: Web) -> Dict[int, Tuple[float, float]]:
    """Boundary on the unit circle clockwise from the top; other vertices on inner circles by depth"""
    pos = {}
    n = max(len(w.boundary), 1)
    for i, b in enumerate(w.boundary):
        angle = math.pi / 2 - 2 * math.pi * i / n
        pos[b] = (math.cos(angle), math.sin(angle))
    depth = {b: 0 for b in w.boundary}
    queue = deque(w.boundary)
    while queue:
        v = queue.popleft()
        for h in w.rotation[v]:
            u = w.neighbor(h)
            if u not in depth:
                depth[u] = depth[v] + 1
                queue.append(u)
    for v in w.rotation:
        depth.setdefault(v, 1)
    max_depth = max(depth.values(), default=1) or 1
    rings: Dict[int, List[int]] = {}
    for v in w.rotation:
        if w.kind[v] != BOUNDARY:
            rings.setdefault(depth[v], []).append(v)
    for d, vs in rings.items():
        radius = 1 - 0.85 * d / (max_depth + 0.5)
        for i, v in enumerate(vs):
            angle = math.pi / 2 - 2 * math.pi * (i + 0.5) / len(vs)
            pos[v] = (radius * math.cos(angle), radius * math.sin(angle))
    return pos


def to_dot(w: Web, name: str = 'web') -> str:
    lines = [f'graph {name} {{', '  node [shape=circle, label=""];']
    for v in sorted(w.rotation):
        if w.kind[v] == CROSSING:
            lines.append(f'  v{v} [shape=point];')
        else:
            fill = 'white' if w.color[v] == WHITE else 'black'
            extra = ', shape=square' if w.kind[v] == BOUNDARY else ''
            lines.append(f'  v{v} [style=filled, fillcolor={fill}{extra}];')
    for h, t in w.edges():
        lines.append(f'  v{w.origin[h]} -- v{w.origin[t]};')
    lines.append('}')
    return '\n'.join(lines)


def to_svg(w: Web, size: int = 400) -> str:
    pos = circle_layout(w)
    half = size / 2
    scale = size * 0.45

    def xy(v):
        x, y = pos[v]
        return half + scale * x, half - scale * y

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
           f'<circle cx="{half}" cy="{half}" r="{scale}" fill="none" stroke="#999"/>']
    for h, t in w.edges():
        (x1, y1), (x2, y2) = xy(w.origin[h]), xy(w.origin[t])
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="black"/>')
    for v in w.rotation:
        x, y = xy(v)
        if w.kind[v] == CROSSING:
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" fill="red"/>')
        else:
            fill = 'white' if w.color[v] == WHITE else 'black'
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="{fill}" stroke="black"/>')
    out.append('</svg>')
    return '\n'.join(out)
