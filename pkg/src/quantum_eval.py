"""
Quantum evaluation of webs in the tensor product basis.

A web is cut by a sweep line into elementary layers, with the boundary on
top. Edge labels are in {1, 0, -1}, read upward; label 1 on a boundary edge
means the flow points away from the boundary point. Local weights are
monomials in v:

    cup (p, -p)                 v^(p-1)
    vertex creating (a, b, c)   v^-inv(a, b, c)
    split z -> (x, y)           1 if x > y else v^-1
    merge (x, y) -> x + y       v if x > y else 1
    vertex absorbing (a, b, c)  v^(3 - inv(a, b, c))

Three evaluators are provided: layered contraction, explicit flow
enumeration and, for honeycomb-type drawings, disc configurations. Flow
weights do not use the tables above: each vertex reads the inflow labels
clockwise from its leftmost upper edge, contributes minus their inversions,
and adds 1 - label for every lower edge.
"""
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import pandas as pd

from src.laurent import LaurentPoly, quantum_int
from src.webgraph import (Web, BOUNDARY, INTERNAL, WHITE, BLACK, unclasp, is_non_elliptic, face_structure,
                          unclasped_signature)
from src.utils import setup_logging, MalformedInputError, InvariantBreach, format_state

logger = setup_logging()

State = Tuple[int, ...]

STATE_VALUES = (1, 0, -1)
# webs up to these sizes get their dominant path from a full expansion
FULL_EXPANSION_LIMIT = 24
FULL_EXPANSION_STRANDS = 12

_PERMS = list(permutations(STATE_VALUES))
_SPLITS = {1: ((1, 0), (0, 1)), 0: ((1, -1), (-1, 1)), -1: ((0, -1), (-1, 0))}


def _inversions(labels: Sequence[int]) -> int:
    return sum(1 for i in range(len(labels)) for j in range(i + 1, len(labels)) if labels[i] < labels[j])


# -- expansions -----------------------------------------------------------------------

@dataclass
class Expansion:
    """Coefficients of a web invariant in the tensor product basis, keyed by state"""
    coeffs: Dict[State, LaurentPoly]
    signature: str

    def coefficient(self, state: Sequence[int]) -> LaurentPoly:
        return self.coeffs.get(tuple(state), LaurentPoly.zero())

    def states(self) -> List[State]:
        """Nonzero states, lexicographically largest first (1 > 0 > -1)"""
        return sorted(self.coeffs, reverse=True)

    def leading_state(self) -> Optional[State]:
        return max(self.coeffs) if self.coeffs else None

    def is_nonnegative(self) -> bool:
        return all(c.has_nonnegative_coefficients() for c in self.coeffs.values())

    def scale(self, c: LaurentPoly) -> 'Expansion':
        coeffs = {s: p * c for s, p in self.coeffs.items()}
        return Expansion({s: p for s, p in coeffs.items() if not p.is_zero()}, self.signature)

    def first_difference(self, other: 'Expansion') -> Optional[str]:
        for s in sorted(set(self.coeffs) | set(other.coeffs), reverse=True):
            a, b = self.coefficient(s), other.coefficient(s)
            if a != b:
                return f"state {format_state(s)}: {a} != {b}"
        return None

    def to_records(self) -> List[Dict[str, str]]:
        return [{'state': format_state(s), 'coeff': str(self.coeffs[s])} for s in self.states()]

    def to_dict(self) -> Dict:
        return {'signature': self.signature, 'terms': self.to_records()}

    def __len__(self) -> int:
        return len(self.coeffs)


def _collect(counts: Dict[State, Counter], w: Web) -> Expansion:
    scalar = quantum_int(3) ** w.loops
    coeffs = {}
    for state, exps in counts.items():
        poly = LaurentPoly.from_counts(exps) * scalar
        if not poly.is_zero():
            coeffs[state] = poly
    return Expansion(coeffs, unclasped_signature(w))


def expansion_to_frame(expansion: Expansion) -> pd.DataFrame:
    """One row per nonzero state, dominant state first"""
    rows = []
    for s in expansion.states():
        c = expansion.coeffs[s]
        rows.append({
            'state': format_state(s),
            'coefficient': str(c),
            'terms': sum(int(x) for _, x in c.items()),
            'constant_term': int(c.constant_term()),
            'min_exp': c.valuation(),
            'max_exp': c.degree(),
        })
    return pd.DataFrame(rows, columns=['state', 'coefficient', 'terms', 'constant_term', 'min_exp', 'max_exp'])


# -- slicing ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Layer:
    """Frontier entries `above` at position `at` are replaced by `below` (vertex None: a cup)"""
    at: int
    above: Tuple[int, ...]
    below: Tuple[int, ...]
    vertex: Optional[int]


def _prepare(w: Web) -> Web:
    if w.has_crossings():
        raise MalformedInputError("Quantum evaluation needs a crossing-free web; reduce it first")
    if w.is_clasped():
        logger.debug("Unclasping web for quantum evaluation")
        w = unclasp(w)
    return w


def _check_state(w: Web, state: Sequence[int]) -> State:
    state = tuple(state)
    if len(state) != len(w.strands()):
        raise MalformedInputError(f"State has {len(state)} entries, web has {len(w.strands())} boundary strands")
    if any(s not in STATE_VALUES for s in state):
        raise MalformedInputError(f"State entries must be in {{1, 0, -1}}: {format_state(state)}")
    return state


def _moves(w: Web, frontier: List[int], pending: set) -> List[Layer]:
    moves = []
    targets: Dict[int, List[int]] = {}
    for i, h in enumerate(frontier):
        t = w.twin[h]
        if i + 1 < len(frontier) and frontier[i + 1] == t:
            moves.append(Layer(i, (h, t), (), None))
        u = w.origin[t]
        if u in pending:
            targets.setdefault(u, []).append(i)
    for u, positions in targets.items():
        if positions[-1] - positions[0] != len(positions) - 1:
            continue
        rot = w.rotation[u]
        twins = [w.twin[frontier[i]] for i in positions]
        start = rot.index(twins[0])
        if any(rot[(start + m) % 3] != twins[m] for m in range(len(twins))):
            continue
        rest = [rot[(start + m) % 3] for m in range(len(twins), 3)]
        # clockwise after the upper edges come the lower ones, right to left
        moves.append(Layer(positions[0], tuple(frontier[i] for i in positions), tuple(reversed(rest)), u))
    return moves


def _sweep_depth(w: Web) -> Dict[int, int]:
    """Graph distance of internal vertices from the boundary strands opposite the marked point"""
    strands = w.strands()
    n = len(strands)
    depth: Dict[int, int] = {}
    queue = deque()
    reach = max(n / 12, 0.5)
    for i, h in enumerate(strands):
        u = w.neighbor(h)
        if abs(i + 0.5 - n / 2) <= reach and w.kind[u] == INTERNAL and u not in depth:
            depth[u] = 0
            queue.append(u)
    while queue:
        v = queue.popleft()
        for h in w.rotation[v]:
            u = w.neighbor(h)
            if w.kind[u] == INTERNAL and u not in depth:
                depth[u] = depth[v] + 1
                queue.append(u)
    return depth


def slice_web(w: Web, rng=None) -> List[Layer]:
    """
    Top-down sequence of layers ending with an empty frontier.

    Deterministic slicing closes cups first, then sweeps from the far side of
    the boundary toward the marked point; ties go to the move that shrinks the
    frontier most, then the leftmost one. With rng every available move is
    equally likely.
    """
    w = _prepare(w)
    frontier = list(w.strands())
    pending = set(w.internal_vertices())
    depth = _sweep_depth(w)
    unreached = len(pending) + 1

    def priority(m: Layer):
        if m.vertex is None:
            return (1, 0, 0, -m.at)
        return (0, -depth.get(m.vertex, unreached), len(m.above) - len(m.below), -m.at)

    layers: List[Layer] = []
    while frontier or pending:
        if not frontier:
            # closed component
            v = rng.choice(sorted(pending)) if rng else min(pending)
            layer = Layer(0, (), tuple(reversed(w.rotation[v])), v)
        else:
            moves = _moves(w, frontier, pending)
            if not moves:
                raise InvariantBreach(f"Web cannot be sliced at frontier {frontier}")
            if rng:
                layer = rng.choice(moves)
            else:
                layer = max(moves, key=priority)
        frontier[layer.at:layer.at + len(layer.above)] = layer.below
        if layer.vertex is not None:
            pending.discard(layer.vertex)
        layers.append(layer)
    return layers


def _lower(layer: Layer, above: State) -> Iterator[Tuple[State, int]]:
    """Labels below a layer compatible with the labels above, with weight exponents"""
    k = len(layer.above)
    if layer.vertex is None:
        p, q = above
        if q == -p:
            yield (), p - 1
    elif k == 3:
        if sorted(above) == [-1, 0, 1]:
            yield (), -_inversions(above)
    elif k == 2:
        x, y = above
        if x != y:
            yield (x + y,), (0 if x > y else -1)
    elif k == 1:
        for x, y in _SPLITS[above[0]]:
            yield (x, y), (1 if x > y else 0)
    else:
        for perm in _PERMS:
            yield perm, 3 - _inversions(perm)


def _raise(layer: Layer, below: State) -> Iterator[Tuple[State, int]]:
    """Labels above a layer compatible with the labels below, with weight exponents"""
    k = len(layer.above)
    if layer.vertex is None:
        for p in STATE_VALUES:
            yield (p, -p), p - 1
    elif k == 3:
        for perm in _PERMS:
            yield perm, -_inversions(perm)
    elif k == 2:
        for x, y in _SPLITS[below[0]]:
            yield (x, y), (0 if x > y else -1)
    elif k == 1:
        x, y = below
        if x != y:
            yield (x + y,), (1 if x > y else 0)
    else:
        if sorted(below) == [-1, 0, 1]:
            yield (), 3 - _inversions(below)


# -- layered contraction -----------------------------------------------------------------

def expand_by_contraction(w: Web, rng=None) -> Expansion:
    """Bottom-up contraction of the layer tensors into the full expansion"""
    w = _prepare(w)
    layers = slice_web(w, rng)
    table: Dict[State, Counter] = {(): Counter({0: 1})}
    peak = 1
    for layer in reversed(layers):
        nxt: Dict[State, Counter] = {}
        at, d = layer.at, len(layer.below)
        for state, exps in table.items():
            for above, e in _raise(layer, state[at:at + d]):
                bucket = nxt.setdefault(state[:at] + above + state[at + d:], Counter())
                for x, c in exps.items():
                    bucket[x + e] += c
        table = nxt
        peak = max(peak, len(table))
    logger.debug(f"Contraction of {w!r}: {len(layers)} layers, peak {peak} frontier states")
    return _collect(table, w)


# second weight coordinate of a downward label, by the colour of the vertex below it;
# the first coordinate is the label itself
_SECOND_WEIGHT = {WHITE: {1: 0, 0: 1, -1: -1}, BLACK: {1: 1, 0: -1, -1: 0}}


def _frontier_groups(w: Web, layers: List[Layer]) -> List[List[Tuple[int, str]]]:
    """
    For the frontier above each layer (and the final one): positions grouped by
    the connected component of the unsliced web below them, with the colour of
    the vertex each entry points into. Weight sums over a group are conserved.
    """
    frontier = list(w.strands())
    pending = set(w.internal_vertices())
    out = []
    for step in range(len(layers) + 1):
        parent = {v: v for v in pending}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in pending:
            for h in w.rotation[v]:
                u = w.neighbor(h)
                if u in pending:
                    parent[find(u)] = find(v)
        groups: Dict[int, List[Tuple[int, str]]] = {}
        for i, h in enumerate(frontier):
            low = w.neighbor(h)
            if low in pending:
                groups.setdefault(find(low), []).append((i, w.color[low]))
        out.append(list(groups.values()))
        if step < len(layers):
            layer = layers[step]
            frontier[layer.at:layer.at + len(layer.above)] = layer.below
            pending.discard(layer.vertex)
    return out


def _balanced(state: State, groups: List[List[Tuple[int, str]]]) -> bool:
    for group in groups:
        if sum(state[i] for i, _ in group) or sum(_SECOND_WEIGHT[c][state[i]] for i, c in group):
            return False
    return True


def _descend(w: Web, state: State, layers: List[Layer], keep: bool = False):
    """
    Top-down pass with the boundary state fixed; returns the final table and, if
    kept, every table. Frontier states whose component weights are unbalanced
    cannot reach the empty frontier and are dropped.
    """
    groups = _frontier_groups(w, layers)
    table: Dict[State, Counter] = {state: Counter({0: 1})} if _balanced(state, groups[0]) else {}
    history = []
    peak = 1
    for step, layer in enumerate(layers):
        if keep:
            history.append(table)
        nxt: Dict[State, Counter] = {}
        at, k = layer.at, len(layer.above)
        for st, exps in table.items():
            for below, e in _lower(layer, st[at:at + k]):
                bucket = nxt.setdefault(st[:at] + below + st[at + k:], Counter())
                for x, c in exps.items():
                    bucket[x + e] += c
        table = {s: c for s, c in nxt.items() if _balanced(s, groups[step + 1])}
        peak = max(peak, len(table))
        if not table:
            break
    if keep:
        history.append(table)
    logger.debug(f"Descent for {format_state(state)}: peak {peak} frontier states")
    return table, history


def coefficient_at(w: Web, state: Sequence[int]) -> LaurentPoly:
    """Single coefficient, enumerating only partial flows compatible with the state"""
    w = _prepare(w)
    state = _check_state(w, state)
    table, _ = _descend(w, state, slice_web(w))
    counts = table.get((), Counter())
    return LaurentPoly.from_counts(counts) * quantum_int(3) ** w.loops


# -- flows ------------------------------------------------------------------------------

@dataclass(frozen=True)
class Flow:
    """Half-edges traversed in the direction of the flow, with the boundary state and weight exponent"""
    edges: FrozenSet[int]
    state: State
    exponent: int


def _label(flow_edges: FrozenSet[int], w: Web, h: int) -> int:
    if h in flow_edges:
        return 1
    if w.twin[h] in flow_edges:
        return -1
    return 0


def flow_exponent(w: Web, edges: FrozenSet[int], layers: List[Layer]) -> int:
    """Weight exponent of a flow from the local rule at every vertex and cup of the slicing"""
    total = 0
    for layer in layers:
        if layer.vertex is None:
            total += _label(edges, w, layer.above[0]) - 1
            continue
        rot = w.rotation[layer.vertex]
        first = w.twin[layer.above[0]] if layer.above else layer.below[-1]
        start = rot.index(first)
        # inflow along each half-edge at the vertex, clockwise
        around = [_label(edges, w, w.twin[rot[(start + m) % 3]]) for m in range(3)]
        if sorted(around) != [-1, 0, 1]:
            raise InvariantBreach(f"Flow is not one in and one out at vertex {layer.vertex}")
        total += -_inversions(around) + sum(1 - _label(edges, w, h) for h in layer.below)
    return total


def _edge_order(w: Web, layers: List[Layer]) -> List[int]:
    seen, order = set(), []
    for h in w.strands():
        if h not in seen:
            seen.update((h, w.twin[h]))
            order.append(h)
    for layer in layers:
        for h in layer.below:
            if h not in seen:
                seen.update((h, w.twin[h]))
                order.append(h)
    return order


def enumerate_flows(w: Web, state: Sequence[int] = None) -> Iterator[Flow]:
    """Every flow (two of three edges at each vertex, one in and one out), by backtracking"""
    w = _prepare(w)
    layers = slice_web(w)
    fixed: Dict[int, int] = {}
    if state is not None:
        state = _check_state(w, state)
        for h, j in zip(w.strands(), state):
            fixed[h] = j
    order = _edge_order(w, layers)
    ins = {v: 0 for v in w.internal_vertices()}
    outs = dict(ins)
    todo = {v: 3 for v in ins}
    chosen: List[int] = []

    def options(h: int):
        t = w.twin[h]
        if h in fixed:
            if t in fixed and fixed[t] != -fixed[h]:
                return ()
            return (fixed[h],)
        if t in fixed:
            return (-fixed[t],)
        return STATE_VALUES

    def assign(v: int, out: bool, delta: int):
        if w.kind[v] != INTERNAL:
            return
        todo[v] -= delta
        if out is True:
            outs[v] += delta
        elif out is False:
            ins[v] += delta

    def feasible(v: int) -> bool:
        if w.kind[v] != INTERNAL:
            return True
        if ins[v] > 1 or outs[v] > 1:
            return False
        return (1 - ins[v]) + (1 - outs[v]) <= todo[v]

    def walk(i: int):
        if i == len(order):
            edges = frozenset(chosen)
            st = tuple(_label(edges, w, h) for h in w.strands())
            yield Flow(edges, st, flow_exponent(w, edges, layers))
            return
        h = order[i]
        t = w.twin[h]
        a, b = w.origin[h], w.origin[t]
        for value in options(h):
            # value 1: along h (out of a, into b); -1: along t
            out_a = None if value == 0 else value == 1
            out_b = None if value == 0 else value == -1
            assign(a, out_a, 1)
            assign(b, out_b, 1)
            if feasible(a) and feasible(b):
                if value:
                    chosen.append(h if value == 1 else t)
                yield from walk(i + 1)
                if value:
                    chosen.pop()
            assign(a, out_a, -1)
            assign(b, out_b, -1)

    yield from walk(0)


def expand_by_flows(w: Web) -> Expansion:
    """Sum of flow weights per boundary state"""
    w = _prepare(w)
    counts: Dict[State, Counter] = {}
    total = 0
    for flow in enumerate_flows(w):
        counts.setdefault(flow.state, Counter())[flow.exponent] += 1
        total += 1
    logger.debug(f"Flow enumeration of {w!r}: {total} flows")
    return _collect(counts, w)


def witness_flows(w: Web, state: Sequence[int], limit: int = None, exponent: int = None) -> List[Flow]:
    """Explicit flows with the given boundary state (and weight exponent, if given)"""
    w = _prepare(w)
    state = _check_state(w, state)
    layers = slice_web(w)
    table, history = _descend(w, state, layers, keep=True)
    if () not in table or len(history) != len(layers) + 1:
        return []
    found: List[Flow] = []

    def climb(i: int, current: State, acc: int, labels: Dict[int, int]):
        # current: labels on the frontier below layer i-1
        if limit is not None and len(found) >= limit:
            return
        if i == 0:
            edges = frozenset(h if x == 1 else w.twin[h] for h, x in labels.items() if x)
            found.append(Flow(edges, state, acc))
            return
        layer = layers[i - 1]
        at, d = layer.at, len(layer.below)
        for above, e in _raise(layer, current[at:at + d]):
            prev = current[:at] + above + current[at + d:]
            exps = history[i - 1].get(prev)
            if not exps:
                continue
            if exponent is not None and (exponent - acc - e) not in exps:
                continue
            for h, x in zip(layer.above, above):
                labels[h] = x
            climb(i - 1, prev, acc + e, labels)
            for h in layer.above:
                labels.pop(h, None)

    climb(len(layers), (), 0, {})
    return found


def weight_one_flows(w: Web, state: Sequence[int], limit: int = None) -> List[Flow]:
    return witness_flows(w, state, limit=limit, exponent=0)


def flow_lines(w: Web, flow: Flow) -> Tuple[List[List[int]], List[List[int]]]:
    """Split a flow into open lines (boundary to boundary) and closed loops, as half-edge paths"""
    outgoing: Dict[int, int] = {}
    for h in flow.edges:
        v = w.origin[h]
        if w.kind[v] == INTERNAL:
            outgoing[v] = h
    used = set()
    lines = []
    for h in w.strands():
        if h not in flow.edges:
            continue
        path = [h]
        used.add(h)
        v = w.origin[w.twin[h]]
        while w.kind[v] == INTERNAL:
            nxt = outgoing[v]
            path.append(nxt)
            used.add(nxt)
            v = w.origin[w.twin[nxt]]
        lines.append(path)
    loops = []
    for h in sorted(flow.edges - used):
        if h in used:
            continue
        path = []
        while h not in used:
            used.add(h)
            path.append(h)
            h = outgoing[w.origin[w.twin[h]]]
        loops.append(path)
    return lines, loops


# -- minimal cut paths and dominant paths -----------------------------------------------------

def cut_path_state(w: Web) -> State:
    """State read from face depths: entry s is depth(after s) - depth(before s), depths from the marked region"""
    w = _prepare(w)
    fs = face_structure(w)
    n = len(w.strands())
    segment: Dict[int, int] = {}
    for idx, cycle in enumerate(fs.cycles):
        for h in cycle:
            if isinstance(h, tuple) and h[0] == 'l':
                segment[h[1]] = idx
    adjacency: Dict[int, set] = {i: set() for i in range(len(fs.cycles))}
    for h, t in w.twin.items():
        adjacency[fs.face_of[h]].add(fs.face_of[t])
    depth = {segment[0]: 0}
    queue = [segment[0]]
    while queue:
        f = queue.pop(0)
        for g in adjacency[f]:
            if g not in depth:
                depth[g] = depth[f] + 1
                queue.append(g)
    return tuple(depth[segment[(s + 1) % n]] - depth[segment[s]] for s in range(n))


def dominant_path(w: Web, certify: bool = True) -> State:
    """
    Lexicographically largest state with nonzero coefficient.

    Small webs are fully expanded and checked against the minimal cut path;
    larger ones use the cut path, certified by a single-state extraction.
    """
    w = _prepare(w)
    if not is_non_elliptic(w):
        raise MalformedInputError(f"Dominant paths are defined for non-elliptic webs, got {w!r}")
    candidate = cut_path_state(w)
    if len(w.internal_vertices()) <= FULL_EXPANSION_LIMIT and len(w.strands()) <= FULL_EXPANSION_STRANDS:
        expansion = expand_by_contraction(w)
        leading = expansion.leading_state()
        if leading != candidate:
            logger.error(f"❌ Leading state {format_state(leading)} differs from cut path {format_state(candidate)}")
            raise InvariantBreach("Leading state differs from the minimal cut path")
        coeff = expansion.coefficient(leading)
    elif certify:
        coeff = coefficient_at(w, candidate)
    else:
        return candidate
    if coeff != LaurentPoly.one():
        logger.error(f"❌ Dominant coefficient of {w!r} is {coeff}")
        raise InvariantBreach(f"Dominant coefficient is {coeff}, expected 1")
    return candidate


# -- disc configurations ---------------------------------------------------------------------

DIRECTIONS = ('N', 'NE', 'SE', 'S', 'SW', 'NW')
_ANGLES = {'N': 90, 'NE': 30, 'SE': 330, 'S': 270, 'SW': 210, 'NW': 150}
# weight exponent of one clockwise 60-degree step of the travel direction; anticlockwise is the inverse
CLOCKWISE_STEP = {('N', 'NE'): 0, ('NE', 'SE'): 0, ('SE', 'S'): 0, ('S', 'SW'): 1, ('SW', 'NW'): -1, ('NW', 'N'): 1}
_Y_DIRECTIONS = {'S', 'NE', 'NW'}
_LAMBDA_DIRECTIONS = {'N', 'SE', 'SW'}
_CLOCKWISE_RANK = {'SW': 1, 'NW': 2, 'N': 3, 'NE': 4, 'SE': 5}


def turn_exponent(d_in: str, d_out: str) -> int:
    if (d_in, d_out) in CLOCKWISE_STEP:
        return CLOCKWISE_STEP[(d_in, d_out)]
    if (d_out, d_in) in CLOCKWISE_STEP:
        return -CLOCKWISE_STEP[(d_out, d_in)]
    raise MalformedInputError(f"Flow turns from {d_in} to {d_out}, not a 60 degree step")


def _direction(w: Web, h: int) -> str:
    """Compass direction of travel along half-edge h in the drawing"""
    x0, y0 = w.coords[w.origin[h]]
    x1, y1 = w.coords[w.origin[w.twin[h]]]
    angle = math.degrees(math.atan2(y1 - y0, x1 - x0)) % 360.0
    for name, target in _ANGLES.items():
        if abs((angle - target + 180.0) % 360.0 - 180.0) < 1.0:
            return name
    raise MalformedInputError(f"Edge at angle {angle:.1f} is not a lattice direction")


def position_string(w: Web) -> Tuple[str, ...]:
    """Check the lambda/Y drawing hypothesis and return the direction of each boundary edge"""
    w = _prepare(w)
    if not w.coords or any(v not in w.coords for v in w.rotation):
        raise MalformedInputError("Disc configurations need drawing coordinates for every vertex")
    for v in w.internal_vertices():
        dirs = {_direction(w, h) for h in w.rotation[v]}
        if dirs not in (_Y_DIRECTIONS, _LAMBDA_DIRECTIONS):
            raise MalformedInputError(f"Vertex {v} is neither a Y nor a lambda: {sorted(dirs)}")
    positions = []
    for h in w.strands():
        if w.kind[w.neighbor(h)] == BOUNDARY:
            raise MalformedInputError("Disc configurations need a web without boundary-to-boundary edges")
        positions.append(_direction(w, w.twin[h]))
    # clockwise from the marked point at the bottom: S (left part), SW, NW, N, NE, SE, S (right part)
    ranks = []
    leading = True
    for p in positions:
        if p != 'S':
            leading = False
        ranks.append(0 if p == 'S' and leading else _CLOCKWISE_RANK.get(p, 6))
    if ranks != sorted(ranks):
        raise MalformedInputError(f"Boundary order {positions} does not run clockwise from the bottom")
    return tuple(positions)


def _routing_sides(positions: Sequence[str]) -> List[Optional[str]]:
    """Boundary edges pointing down are routed around the left or right side to reach the top"""
    sides = []
    leading = True
    for p in positions:
        if p != 'S':
            leading = False
        if p == 'SW' or (p == 'S' and leading):
            sides.append('left')
        elif p == 'SE' or p == 'S':
            sides.append('right')
        else:
            sides.append(None)
    return sides


def disc_counts(positions: Sequence[str], state: Sequence[int]) -> Tuple[int, int]:
    """(U, E): U counts state 1 routed right or -1 routed left; E counts state 0 on a routed edge"""
    u = e = 0
    for side, j in zip(_routing_sides(positions), state):
        if side is None:
            continue
        if j == 0:
            e += 1
        elif (side == 'right' and j == 1) or (side == 'left' and j == -1):
            u += 1
    return u, e


def disc_offset(w: Web, state: Sequence[int]) -> int:
    """2U - E for a boundary state; the routing exponent of the same state is -(2U + E)"""
    w = _prepare(w)
    u, e = disc_counts(position_string(w), _check_state(w, state))
    return 2 * u - e


def routing_exponent(positions: Sequence[str], state: Sequence[int]) -> int:
    """Weight exponent of the cups that carry downward boundary edges up to the boundary line"""
    u, e = disc_counts(positions, state)
    return -2 * u - e


@dataclass
class DiscConfiguration:
    """Arcs (k, l, exponent) from boundary point k to l and closed loops (exponent +1 clockwise, -1 anticlockwise)"""
    state: State
    arcs: List[Tuple[int, int, int]] = field(default_factory=list)
    loops: List[int] = field(default_factory=list)

    @property
    def red(self) -> int:
        return sum(1 for *_, x in self.arcs if x == 1) + sum(1 for x in self.loops if x == 1)

    @property
    def green(self) -> int:
        return sum(1 for *_, x in self.arcs if x == -1) + sum(1 for x in self.loops if x == -1)

    @property
    def exponent(self) -> int:
        return sum(x for *_, x in self.arcs) + sum(self.loops)


def configuration_of(w: Web, flow: Flow) -> DiscConfiguration:
    """Turn exponents of each flow line, summed over its 60-degree turns"""
    lines, loops = flow_lines(w, flow)
    point = {h: i for i, h in enumerate(w.strands())}
    config = DiscConfiguration(flow.state)
    for path in lines:
        total = sum(turn_exponent(_direction(w, a), _direction(w, b)) for a, b in zip(path, path[1:]))
        config.arcs.append((point[path[0]], point[w.twin[path[-1]]], total))
    for path in loops:
        closed = path + path[:1]
        total = sum(turn_exponent(_direction(w, a), _direction(w, b)) for a, b in zip(closed, closed[1:]))
        if total not in (1, -1):
            raise InvariantBreach(f"Closed flow line with turn exponent {total}")
        config.loops.append(total)
    return config


def disc_configurations(w: Web, state: Sequence[int], limit: int = None) -> List[DiscConfiguration]:
    w = _prepare(w)
    position_string(w)
    return [configuration_of(w, f) for f in witness_flows(w, state, limit=limit)]


def expand_by_disc_config(w: Web) -> Expansion:
    """Per state: v^(routing exponent) times the sum over configurations of v^(turn exponents)"""
    w = _prepare(w)
    positions = position_string(w)
    counts: Dict[State, Counter] = {}
    for flow in enumerate_flows(w):
        config = configuration_of(w, flow)
        exp = routing_exponent(positions, flow.state) + config.exponent
        counts.setdefault(flow.state, Counter())[exp] += 1
    return _collect(counts, w)
