"""
Exact numeric evaluation of tensor diagrams on vector/covector configurations.

[D](x, y) = sum over proper labellings l of the edges by 1, 2, 3 of
    prod over internal vertices of sign(l around v, clockwise)
    * prod over boundary strands of the l-th coordinate of that point's (co)vector.

White boundary vertices carry covectors, black ones carry vectors. Crossing
nodes are transparent: a strand keeps its label through them.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

import sympy

from src.laurent import LaurentPoly
from src.webgraph import (Web, WebCombo, BOUNDARY, INTERNAL, CROSSING, WHITE, BLACK, signature_type, cup_web,
                          tripod_web, polygon_web, hexagon_web)
from src.geometry import superimpose, EndpointPlan
from src.utils import setup_logging, make_rng, MalformedInputError, InvariantBreach

logger = setup_logging()

Vec = Tuple[Fraction, Fraction, Fraction]

_SIGN = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}


@dataclass
class Configuration:
    """Covectors for the white boundary vertices and vectors for the black ones, in boundary order"""
    covectors: List[Vec] = field(default_factory=list)
    vectors: List[Vec] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {'covectors': [[str(c) for c in x] for x in self.covectors],
                'vectors': [[str(c) for c in y] for y in self.vectors]}

    @classmethod
    def from_dict(cls, data: Dict) -> 'Configuration':
        try:
            cov = [tuple(Fraction(c) for c in x) for x in data.get('covectors', [])]
            vec = [tuple(Fraction(c) for c in y) for y in data.get('vectors', [])]
        except (TypeError, ValueError) as e:
            raise MalformedInputError(f"Configuration entries must be rationals: {e}")
        if any(len(x) != 3 for x in cov + vec):
            raise MalformedInputError("Configuration vectors must have three entries")
        return cls(cov, vec)


def standard_basis(i: int) -> Vec:
    return tuple(Fraction(1 if j == i else 0) for j in range(3))


def random_configuration(w: Web, rng=None, low: int = -9, high: int = 9) -> Configuration:
    """Random integer entries in [low, high] matching the diagram's type"""
    rng = rng or make_rng()
    a, b = signature_type(w.color[v] for v in w.boundary)

    def draw():
        return tuple(Fraction(rng.randint(low, high)) for _ in range(3))

    return Configuration([draw() for _ in range(a)], [draw() for _ in range(b)])


# (internal vertices, builder) for the pieces random diagrams are drawn from
_PIECES = (
    (0, lambda rng: cup_web(rng.choice((WHITE, BLACK)))),
    (1, lambda rng: tripod_web(rng.choice((WHITE, BLACK)))),
    (2, lambda rng: polygon_web(2, rng.choice((WHITE, BLACK)))),
    (4, lambda rng: polygon_web(4, rng.choice((WHITE, BLACK)))),
    (6, lambda rng: hexagon_web()),
)


def random_diagram(rng=None, max_internal: int = 10, max_crossings: int = 3, attempts: int = 40) -> Web:
    """
    Two or three small webs superimposed on randomly interleaved boundary slots.

    Draws are rejected until the crossing bound holds; the last attempt keeps
    every piece on its own arc, which never crosses.
    """
    rng = rng or make_rng()
    for attempt in range(attempts):
        parts, budget = [], max_internal
        for _ in range(rng.randint(2, 3)):
            internal, build = rng.choice([p for p in _PIECES if p[0] <= budget])
            parts.append(build(rng))
            budget -= internal
        labels = [p for p, part in enumerate(parts) for _ in part.boundary]
        if attempt < attempts - 1:
            rng.shuffle(labels)
        slots = [[s for s, q in enumerate(labels) if q == p] for p in range(len(parts))]
        d = superimpose(parts, EndpointPlan.disjoint(slots, len(labels)))
        if len(d.crossings()) <= max_crossings:
            return d
        logger.debug(f"Rejected a draw with {len(d.crossings())} crossings")
    raise InvariantBreach(f"No diagram within {max_crossings} crossings after {attempts} draws")


def random_sl3_matrix(rng=None, steps: int = 6) -> sympy.Matrix:
    """Product of random elementary matrices; determinant 1, rational entries"""
    rng = rng or make_rng()
    g = sympy.eye(3)
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        e = sympy.eye(3)
        e[i, j] = sympy.Rational(rng.randint(-3, 3), rng.randint(1, 3))
        g = g * e
    return g


def act_on_configuration(g: sympy.Matrix, config: Configuration) -> Configuration:
    """g acts on vectors, and covectors go through g^-1 so pairings are preserved"""
    g_inv = g.inv()

    def to_fraction(m):
        return tuple(Fraction(int(c.p), int(c.q)) for c in m)

    vectors = [to_fraction(g * sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in y]))
               for y in config.vectors]
    covectors = [to_fraction(sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in x]]) * g_inv)
                 for x in config.covectors]
    return Configuration(covectors, vectors)


# -- strand structure ----------------------------------------------------------

def _strand_classes(w: Web):
    """Union half-edges across edges and straight through crossings"""
    parent = {h: h for h in w.origin}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for h, t in w.twin.items():
        union(h, t)
    for c in w.crossings():
        g = w.rotation[c]
        union(g[0], g[2])
        union(g[1], g[3])
    classes: Dict[int, List[int]] = {}
    for h in w.origin:
        classes.setdefault(find(h), []).append(h)
    return classes


def _point_values(w: Web, config: Configuration) -> Dict[int, Vec]:
    a, b = signature_type(w.color[v] for v in w.boundary)
    if (a, b) != (len(config.covectors), len(config.vectors)):
        raise MalformedInputError(
            f"Diagram has type ({a},{b}) but configuration has {len(config.covectors)} covectors "
            f"and {len(config.vectors)} vectors")
    cov = iter(config.covectors)
    vec = iter(config.vectors)
    values = {}
    for v in w.boundary:
        values[v] = next(cov) if w.color[v] == WHITE else next(vec)
    return values


# -- evaluation ---------------------------------------------------------------------

def eval_numeric(w: Web, config: Configuration) -> Fraction:
    """Frontier elimination over internal vertices in breadth-first order from the boundary"""
    values = _point_values(w, config)
    total = Fraction(3) ** w.loops
    edge_of: Dict[int, int] = {}
    ends: Dict[int, List[int]] = {}
    for e, (root, members) in enumerate(_strand_classes(w).items()):
        endpoints = [h for h in members if w.kind[w.origin[h]] != CROSSING]
        if not endpoints:
            total *= 3
            continue
        if len(endpoints) != 2:
            raise MalformedInputError("Strand through crossings does not have two ends")
        ends[e] = endpoints
        for h in endpoints:
            edge_of[h] = e
    # edges joining two boundary points contribute a plain pairing
    for e, (h1, h2) in ends.items():
        v1, v2 = w.origin[h1], w.origin[h2]
        if w.kind[v1] == BOUNDARY and w.kind[v2] == BOUNDARY:
            total *= sum((values[v1][l] * values[v2][l] for l in range(3)), Fraction(0))
    if total == 0:
        return Fraction(0)
    order = _elimination_order(w, edge_of, ends)
    done = set()
    open_edges: List[int] = []
    table: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
    for v in order:
        hs = w.rotation[v]
        es = [edge_of[h] for h in hs]
        far = []
        for h in hs:
            e = edge_of[h]
            other = ends[e][0] if ends[e][1] == h else ends[e][1]
            far.append(w.origin[other])
        keep = [e for e in open_edges if e not in es]
        new_open = []
        for e, u in zip(es, far):
            if w.kind[u] == INTERNAL and u not in done and u != v and e not in open_edges:
                new_open.append(e)
        next_open = keep + new_open
        position = {e: i for i, e in enumerate(open_edges)}
        nxt: Dict[Tuple[int, ...], Fraction] = {}
        for state, value in table.items():
            fixed = [state[position[e]] if e in position else None for e in es]
            for labels in _completions(fixed):
                factor = Fraction(_SIGN[labels])
                for l, u in zip(labels, far):
                    if w.kind[u] == BOUNDARY:
                        factor *= values[u][l]
                        if factor == 0:
                            break
                if factor == 0:
                    continue
                assign = dict(zip(es, labels))
                key = tuple(state[position[e]] for e in keep) + tuple(assign[e] for e in new_open)
                nxt[key] = nxt.get(key, Fraction(0)) + value * factor
        table = nxt
        open_edges = next_open
        done.add(v)
        if not table:
            return Fraction(0)
    return total * table.get((), Fraction(0))


def _completions(fixed: Sequence):
    free = [i for i, l in enumerate(fixed) if l is None]
    used = {l for l in fixed if l is not None}
    if len(used) != 3 - len(free):
        return
    pool = [l for l in range(3) if l not in used]
    for choice in permutations(pool, len(free)):
        labels = list(fixed)
        for i, l in zip(free, choice):
            labels[i] = l
        yield tuple(labels)


def _elimination_order(w: Web, edge_of, ends) -> List[int]:
    """Internal vertices in breadth-first order from the boundary, closed components last"""
    def neighbors(v):
        for h in w.rotation[v]:
            e = edge_of[h]
            other = ends[e][0] if ends[e][1] == h else ends[e][1]
            yield w.origin[other]

    seen, order = set(), []
    queue = []
    for b in w.boundary:
        for u in neighbors(b):
            if w.kind[u] == INTERNAL and u not in seen:
                seen.add(u)
                queue.append(u)
    remaining = sorted(w.internal_vertices())
    while True:
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in neighbors(v):
                if w.kind[u] == INTERNAL and u not in seen:
                    seen.add(u)
                    queue.append(u)
        rest = [v for v in remaining if v not in seen]
        if not rest:
            return order
        seen.add(rest[0])
        queue.append(rest[0])


def eval_combo_numeric(combo: WebCombo, config: Configuration) -> Fraction:
    """Linear extension at v = -1"""
    total = Fraction(0)
    for web, coeff in combo.items():
        if not isinstance(coeff, LaurentPoly):
            coeff = LaurentPoly.constant(coeff)
        total += coeff.classical_limit() * eval_numeric(web, config)
    return total


def sl3_invariance_holds(w: Web, rng=None, trials: int = 5) -> bool:
    """Evaluation unchanged under random determinant-one transformations"""
    rng = rng or make_rng()
    config = random_configuration(w, rng)
    base = eval_numeric(w, config)
    for _ in range(trials):
        g = random_sl3_matrix(rng)
        if eval_numeric(w, act_on_configuration(g, config)) != base:
            logger.warning(f"⚠️ SL(3) invariance failed for {w!r}")
            return False
    return True
