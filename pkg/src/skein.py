"""
Skein reduction of diagrams to the non-elliptic web basis.

Rules (quantum coefficients; the commutative mode evaluates them at v = -1):
    closed loop       -> [3]
    bigon             -> (v + v^-1) * edge
    square            -> both parallel reconnections, coefficient 1 each
    crossing          -> S - v^(+-1) H   (S + H commutatively)
    Y into one clasp  -> 0               (commutative clasped mode only)

S is the smoothing that keeps the coloring bipartite, H the two-vertex web on
the same four ends. The H coefficient is -v^-1 when S is the smoothing on the
side of the over strand and -v otherwise, so that Reidemeister II is the identity.
"""
import heapq
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from src.laurent import LaurentPoly, V, V_INV, quantum_int
from src.webgraph import (Web, WebCombo, BOUNDARY, INTERNAL, opposite, splice, empty_web,
                          face_structure, is_non_elliptic)
from src.geometry import superimpose, EndpointPlan
from src.utils import setup_logging, make_rng, default_jobs, MalformedInputError, InvariantBreach

logger = setup_logging()

QUANTUM = 'quantum'
COMMUTATIVE = 'commutative'
MODES = (QUANTUM, COMMUTATIVE)

Term = Tuple[Web, LaurentPoly]


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise MalformedInputError(f"Unknown reduction mode {mode!r}; expected one of {MODES}")
    return mode


def _weight(poly: LaurentPoly, mode: str) -> LaurentPoly:
    return poly if mode == QUANTUM else LaurentPoly.constant(poly.classical_limit())


def loop_value(mode: str = QUANTUM) -> LaurentPoly:
    return _weight(quantum_int(3), mode)


def bigon_value(mode: str = QUANTUM) -> LaurentPoly:
    return _weight(-quantum_int(2), mode)


# -- redex search ---------------------------------------------------------------

def _external(w: Web, cycle: Sequence[int]) -> List[int]:
    """Half-edge at each face vertex that leaves the face"""
    out = []
    for k, h in enumerate(cycle):
        inside = {h, w.twin[cycle[k - 1]]}
        rest = [x for x in w.rotation[w.origin[h]] if x not in inside]
        out.append(rest[0])
    return out


def small_faces(w: Web) -> Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]]]:
    """Internal bigon and square faces bounded by distinct internal vertices"""
    fs = face_structure(w)
    bigons, squares = [], []
    for cycle, inner in zip(fs.cycles, fs.internal):
        if not inner or len(cycle) not in (2, 4):
            continue
        verts = [w.origin[h] for h in cycle]
        if any(w.kind[v] != INTERNAL for v in verts) or len(set(verts)) != len(verts):
            continue
        (bigons if len(cycle) == 2 else squares).append(cycle)
    return bigons, squares


def clasp_collisions(w: Web) -> List[int]:
    """Internal vertices with two strands into the same clasp"""
    hits = []
    for v in w.internal_vertices():
        ends = [w.neighbor(h) for h in w.rotation[v] if w.kind[w.neighbor(h)] == BOUNDARY]
        if len(ends) != len(set(ends)):
            hits.append(v)
    return hits


# -- single rules ---------------------------------------------------------------------

def remove_loop(d: Web, mode: str = QUANTUM) -> Term:
    """Drop all vertex-free loops, multiplying by [3] per loop"""
    if not d.loops:
        return d, LaurentPoly.one()
    return d.replace(loops=0), loop_value(mode) ** d.loops


def _collapse_bigon(d: Web, cycle: Sequence[int], mode: str) -> Term:
    x_u, x_w = _external(d, cycle)
    u, w = d.origin[cycle[0]], d.origin[cycle[1]]
    return splice(d, [u, w], [(x_u, x_w)]), bigon_value(mode)


def remove_bigon(d: Web, mode: str = QUANTUM) -> Term:
    bigons, _ = small_faces(d)
    if not bigons:
        return d, LaurentPoly.one()
    return _collapse_bigon(d, bigons[0], mode)


def _split_square(d: Web, cycle: Sequence[int]) -> List[Term]:
    x1, x2, x3, x4 = _external(d, cycle)
    verts = [d.origin[h] for h in cycle]
    one = LaurentPoly.one()
    return [(splice(d, verts, [(x1, x2), (x3, x4)]), one),
            (splice(d, verts, [(x2, x3), (x4, x1)]), one)]


def resolve_square(d: Web) -> List[Term]:
    _, squares = small_faces(d)
    if not squares:
        return [(d, LaurentPoly.one())]
    return _split_square(d, squares[0])


def _smooth_crossing(d: Web, c: int, mode: str) -> List[Term]:
    g = d.rotation[c]
    j = 0 if d.side[g[0]] != d.side[g[1]] else 1
    i = 1 - j
    smooth = splice(d, [c], [(g[j], g[(j + 1) % 4]), (g[(j + 2) % 4], g[(j + 3) % 4])])
    u = d.fresh_vertex()
    t = u + 1
    u_a, u_b, u_t, t_a, t_b, t_u = range(d.fresh_half_edge(), d.fresh_half_edge() + 6)
    near = d.side[g[i]]
    h_web = splice(d, [c],
                   [(u_a, g[i]), (u_b, g[(i + 1) % 4]), (t_a, g[(i + 2) % 4]), (t_b, g[(i + 3) % 4]),
                    (u_t, t_u)],
                   [(u, INTERNAL, opposite(near), (u_a, u_b, u_t)),
                    (t, INTERNAL, near, (t_a, t_b, t_u))])
    if mode == COMMUTATIVE:
        return [(smooth, LaurentPoly.one()), (h_web, LaurentPoly.one())]
    if c not in d.over:
        raise MalformedInputError(f"Crossing {c} has no over/under data; quantum reduction needs it")
    h_coeff = -V_INV if j == d.over[c] else -V
    return [(smooth, LaurentPoly.one()), (h_web, h_coeff)]


def resolve_crossing(d: Web, mode: str = QUANTUM) -> List[Term]:
    crossings = d.crossings()
    if not crossings:
        return [(d, LaurentPoly.one())]
    return _smooth_crossing(d, min(crossings), _check_mode(mode))


# -- reduction engine ---------------------------------------------------------------

class SkeinReducer:
    """Rewrites diagrams to WebCombo normal form, memoizing by canonical key"""

    def __init__(self, mode: str = QUANTUM, trace: bool = False, rng=None, max_steps: int = 2_000_000):
        self.mode = _check_mode(mode)
        self.trace = trace
        self.rng = rng
        self.max_steps = max_steps
        self._memo: Dict[bytes, WebCombo] = {}
        self._lock = threading.Lock()
        self.steps = 0

    def _emit(self, rule: str, d: Web, terms: int):
        if self.trace:
            logger.debug(json.dumps({'rule': rule, 'measure': list(d.measure()), 'terms': terms}))

    def _redexes(self, d: Web) -> List[Tuple[str, object]]:
        if self.mode == COMMUTATIVE and d.is_clasped():
            kills = clasp_collisions(d)
            if kills:
                return [('zero', v) for v in kills]
        bigons, squares = small_faces(d)
        crossings = d.crossings()
        if self.rng is not None:
            return ([('bigon', f) for f in bigons] + [('square', f) for f in squares]
                    + [('crossing', c) for c in crossings])
        if bigons:
            return [('bigon', bigons[0])]
        if crossings:
            near_edge = [c for c in crossings
                         if any(d.kind[d.neighbor(h)] == BOUNDARY for h in d.rotation[c])]
            return [('crossing', min(near_edge or crossings))]
        if squares:
            return [('square', squares[0])]
        return []

    def step(self, d: Web) -> Optional[List[Term]]:
        """One rewrite of a loop-free diagram; None when it is already normal"""
        redexes = self._redexes(d)
        if not redexes:
            return None
        rule, where = redexes[0] if self.rng is None else self.rng.choice(redexes)
        if rule == 'zero':
            terms = []
        elif rule == 'bigon':
            terms = [_collapse_bigon(d, where, self.mode)]
        elif rule == 'square':
            terms = _split_square(d, where)
        else:
            terms = _smooth_crossing(d, where, self.mode)
        self._emit(rule, d, len(terms))
        before = d.measure()
        for web, _ in terms:
            if web.measure() >= before:
                raise InvariantBreach(f"Rule {rule} did not decrease the measure {before} -> {web.measure()}")
        return terms

    def reduce(self, d: Web) -> WebCombo:
        """Normal form of a diagram"""
        if self.mode == QUANTUM and d.is_clasped():
            raise MalformedInputError("Quantum reduction works on unclasped diagrams; unclasp first")
        key = d.key()
        with self._lock:
            cached = self._memo.get(key)
        if cached is not None:
            return cached
        result = self._reduce(d)
        with self._lock:
            self._memo.setdefault(key, result)
        return result

    def _reduce(self, d: Web) -> WebCombo:
        pending: Dict[bytes, List] = {}
        heap: List[Tuple[int, int, int, bytes]] = []
        counter = 0

        def push(web: Web, coeff: LaurentPoly):
            nonlocal counter
            web, factor = remove_loop(web, self.mode)
            coeff = coeff * factor
            if coeff.is_zero():
                return
            k = web.key()
            if k in pending:
                pending[k][1] = pending[k][1] + coeff
                return
            pending[k] = [web, coeff]
            crossings, internal = web.measure()
            heapq.heappush(heap, (-crossings, -internal, counter, k))
            counter += 1

        push(d, LaurentPoly.one())
        result = WebCombo()
        steps = 0
        while heap:
            _, _, _, k = heapq.heappop(heap)
            web, coeff = pending.pop(k)
            if coeff.is_zero():
                continue
            terms = self.step(web)
            steps += 1
            if steps > self.max_steps:
                raise InvariantBreach(f"Reduction exceeded {self.max_steps} rewrite steps")
            if terms is None:
                if not is_non_elliptic(web):
                    raise InvariantBreach(f"Reduction stuck at an elliptic web {web!r}")
                result.add_term(web, coeff, k)
                continue
            for new_web, c in terms:
                push(new_web, coeff * c)
        with self._lock:
            self.steps += steps
        logger.debug(f"Reduced {d!r} in {steps} steps to {len(result)} basis webs")
        return result

    def reduce_combo(self, combo: WebCombo) -> WebCombo:
        out = WebCombo()
        for web, coeff in combo.items():
            for w, c in self.reduce(web).items():
                out.add_term(w, coeff * c)
        return out

    def reduce_many(self, diagrams: Sequence[Web], jobs: int = None) -> List[WebCombo]:
        jobs = jobs or default_jobs()
        if jobs <= 1:
            return [self.reduce(d) for d in diagrams]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(self.reduce, diagrams))


@lru_cache(maxsize=None)
def default_reducer(mode: str = QUANTUM) -> SkeinReducer:
    return SkeinReducer(mode)


def reduce_to_basis(d: Web, mode: str = QUANTUM) -> WebCombo:
    return default_reducer(_check_mode(mode)).reduce(d)


# -- combination arithmetic ---------------------------------------------------------

def combo_add(c1: WebCombo, c2: WebCombo) -> WebCombo:
    return c1 + c2


def combo_scale(c: WebCombo, k) -> WebCombo:
    return c.scale(k)


def multiply_webs(w1: Web, w2: Web, reducer: SkeinReducer = None) -> WebCombo:
    """Product of two invariants on the same clasps, as a reduced combination"""
    reducer = reducer or default_reducer(COMMUTATIVE)
    if reducer.mode != COMMUTATIVE:
        raise MalformedInputError("Products of invariants are taken in commutative mode")
    if len(w2.boundary) == 0:
        w1, w2 = w2, w1
    if len(w1.boundary) == 0:
        scalar = reducer.reduce(w1).coefficient(empty_web())
        return reducer.reduce(w2).scale(scalar)
    if [w1.color[b] for b in w1.boundary] != [w2.color[b] for b in w2.boundary]:
        raise MalformedInputError("Multiplied webs must share clasp colors")
    return reducer.reduce(superimpose([w1, w2], EndpointPlan.stacked([w1, w2])))


def multiply(c1: WebCombo, c2: WebCombo, reducer: SkeinReducer = None) -> WebCombo:
    out = WebCombo()
    for w1, a in c1.items():
        for w2, b in c2.items():
            for w, c in multiply_webs(w1, w2, reducer).items():
                out.add_term(w, a * b * c)
    return out


def random_strategy_reducer(mode: str, seed: int, trace: bool = False) -> SkeinReducer:
    """Reducer that picks a random applicable rule at every step"""
    return SkeinReducer(mode, trace=trace, rng=make_rng(seed))
