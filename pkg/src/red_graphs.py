"""
Red graphs on non-elliptic webs.

A red graph G is a non-empty set of internal faces of W, taken with the dual
adjacencies between them, such that no three faces meeting at a vertex of W
all lie in G. Its level is

    I(G) = 2 |V(G)| - |E(G)| - ed(G) / 2

where ed(f) counts the legs at vertices of f that bound no face of G. G is
admissible when some orientation of its edges keeps indegree(f) at most
2 - ed(f) / 2 everywhere, and exact when it is admissible of level zero.
If W has no exact red graph then [W] is dual canonical.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import pandas as pd

from src.webgraph import Web, WebCombo, face_structure, splice, clasp, unclasp
from src.skein import SkeinReducer, QUANTUM, clasp_collisions, _external
from src.utils import setup_logging, default_jobs, MalformedInputError, InvariantBreach

logger = setup_logging()

# webs with more internal faces than this are searched through face cycles only
EXHAUSTIVE_FACE_LIMIT = 20
CYCLE_LENGTH_BOUND = 12
EXHAUSTIVE = "exhaustive"
CYCLES = "cycles"
SEARCH_MODES = (EXHAUSTIVE, CYCLES)

DualEdge = Tuple[int, int, int]
Pair = Tuple[int, int]


@dataclass(frozen=True)
class RedGraph:
    faces: FrozenSet[int]
    edges: Tuple[DualEdge, ...]
    external_degree: Tuple[Tuple[int, int], ...]
    gray_half_edges: Tuple[int, ...]

    @property
    def ed(self) -> Dict[int, int]:
        return dict(self.external_degree)

    def level(self) -> Fraction:
        return 2 * len(self.faces) - len(self.edges) - Fraction(sum(self.ed.values()), 2)

    def capacity(self, f: int) -> Fraction:
        return 2 - Fraction(self.ed[f], 2)

    def graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.faces)
        for a, b, key in self.edges:
            g.add_edge(a, b, key=key)
        return g

    def has_cycle(self) -> bool:
        return len(self.edges) - len(self.faces) + nx.number_connected_components(self.graph()) > 0

    def to_dict(self) -> Dict:
        return {
            'faces': sorted(self.faces),
            'edges': [list(e) for e in self.edges],
            'external_degree': {str(f): d for f, d in self.external_degree},
            'level': str(self.level()),
        }


@dataclass(frozen=True)
class GReduction:
    graph: RedGraph
    pairing: Tuple[Pair, ...]
    combo: WebCombo
    survivors: WebCombo


def level(g: RedGraph) -> Fraction:
    return g.level()


def per_vertex_level(g: RedGraph, orientation: Dict[int, int]) -> Dict[int, Fraction]:
    """i_o(f) = 2 - ed(f) / 2 - indegree(f); orientation maps each dual edge key to its head face"""
    indegree = {f: 0 for f in g.faces}
    for _, _, key in g.edges:
        indegree[orientation[key]] += 1
    return {f: g.capacity(f) - indegree[f] for f in g.faces}


def fitting_orientation(g: RedGraph) -> Optional[Dict[int, int]]:
    """An orientation with every i_o(f) >= 0, found as a saturating flow; None when there is none"""
    caps = {f: floor(g.capacity(f)) for f in g.faces}
    if any(c < 0 for c in caps.values()):
        return None
    if not g.edges:
        return {}
    net = nx.DiGraph()
    net.add_node('source')
    net.add_node('sink')
    for a, b, key in g.edges:
        net.add_edge('source', ('e', key), capacity=1)
        net.add_edge(('e', key), ('f', a), capacity=1)
        net.add_edge(('e', key), ('f', b), capacity=1)
    for f, c in caps.items():
        net.add_edge(('f', f), 'sink', capacity=c)
    value, flow = nx.maximum_flow(net, 'source', 'sink')
    if value < len(g.edges):
        return None
    orientation = {}
    for a, b, key in g.edges:
        orientation[key] = a if flow[('e', key)].get(('f', a), 0) else b
    return orientation


def is_admissible(g: RedGraph) -> bool:
    return fitting_orientation(g) is not None


def is_exact(g: RedGraph) -> bool:
    return g.level() == 0 and is_admissible(g)


class RedGraphAnalyzer:
    """Dual graph and leg bookkeeping of one unclasped non-elliptic web"""

    def __init__(self, w: Web):
        if w.is_clasped():
            raise MalformedInputError("Red graphs are analyzed on unclasped webs")
        if w.has_crossings():
            raise MalformedInputError("Red graphs need a crossing-free web")
        self.web = w
        self.fs = face_structure(w)
        self.internal = [i for i, inner in enumerate(self.fs.internal) if inner]
        self.face_vertices = {i: {w.origin[h] for h in self.fs.cycles[i]} for i in self.internal}
        self.legs = {i: _external(w, self.fs.cycles[i]) for i in self.internal}
        self.dual = nx.MultiGraph()
        self.dual.add_nodes_from(self.internal)
        inner = set(self.internal)
        for h, t in w.edges():
            a, b = self.fs.face_of[h], self.fs.face_of[t]
            if a in inner and b in inner and a != b:
                self.dual.add_edge(a, b, key=min(h, t))
        self.corners = [frozenset(self.fs.face_of[h] for h in w.rotation[v]) for v in w.internal_vertices()]

    def __repr__(self) -> str:
        return f"RedGraphAnalyzer(faces={len(self.internal)}, dual_edges={self.dual.number_of_edges()})"

    def _bounding(self, h: int) -> Tuple[int, int]:
        return self.fs.face_of[h], self.fs.face_of[self.web.twin[h]]

    def violates_triple(self, faces) -> bool:
        return any(len(c) == 3 and c <= faces for c in self.corners)

    def red_graph(self, faces) -> RedGraph:
        faces = frozenset(faces)
        if not faces or not faces <= set(self.internal):
            raise MalformedInputError(f"A red graph is a non-empty set of internal faces, got {sorted(faces)}")
        if self.violates_triple(faces):
            raise MalformedInputError(f"Faces {sorted(faces)} contain three faces around one vertex")
        edges = tuple(sorted((min(a, b), max(a, b), key) for a, b, key in self.dual.edges(keys=True)
                             if a in faces and b in faces))
        ed = {}
        gray = []
        for f in sorted(faces):
            count = 0
            for leg in self.legs[f]:
                if not set(self._bounding(leg)) & faces:
                    count += 1
                    gray.append(leg)
            ed[f] = count
        return RedGraph(faces, edges, tuple(sorted(ed.items())), tuple(gray))

    def enumerate(self) -> List[RedGraph]:
        """Every red graph, by inclusion and exclusion over the internal faces"""
        if len(self.internal) > EXHAUSTIVE_FACE_LIMIT:
            raise MalformedInputError(f"{len(self.internal)} internal faces is beyond the exhaustive search "
                                      f"limit of {EXHAUSTIVE_FACE_LIMIT}; search face cycles instead")
        out = []

        def grow(i: int, chosen: FrozenSet[int]):
            if i == len(self.internal):
                if chosen:
                    out.append(self.red_graph(chosen))
                return
            grow(i + 1, chosen)
            bigger = chosen | {self.internal[i]}
            if not self.violates_triple(bigger):
                grow(i + 1, bigger)

        grow(0, frozenset())
        logger.debug(f"{len(out)} red graphs on {len(self.internal)} faces")
        return out

    def face_cycles(self, length_bound: int = CYCLE_LENGTH_BOUND) -> Iterator[FrozenSet[int]]:
        """Chordless cycles of at least six faces in the dual graph"""
        simple = nx.Graph(self.dual)
        for cycle in nx.chordless_cycles(simple, length_bound=length_bound):
            if len(cycle) >= 6:
                yield frozenset(cycle)

    def exact_graphs(self, exhaustive: bool = None, jobs: int = None,
                     length_bound: int = CYCLE_LENGTH_BOUND) -> List[RedGraph]:
        if exhaustive is None:
            exhaustive = len(self.internal) <= EXHAUSTIVE_FACE_LIMIT
        if exhaustive:
            return [g for g in self.enumerate() if is_exact(g)]
        seeds = [c for c in self.face_cycles(length_bound) if not self.violates_triple(c)]
        graphs = [self.red_graph(c) for c in seeds]
        jobs = jobs or default_jobs()
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            flags = list(pool.map(is_exact, graphs))
        found = {g.faces: g for g, ok in zip(graphs, flags) if ok}
        logger.info(f"🔍 {len(found)} exact face cycles among {len(seeds)} seeds")
        return [found[k] for k in sorted(found, key=sorted)]

    # -- G-reductions ----------------------------------------------------------

    def pairings(self, g: RedGraph) -> List[Tuple[Pair, ...]]:
        """Perfect matchings of the gray half-edges: partners share a face of W and start at opposite colors"""
        w = self.web
        gray = list(g.gray_half_edges)

        def compatible(a: int, b: int) -> bool:
            if w.twin[a] == b:
                return False
            shared = set(self._bounding(a)) & set(self._bounding(b))
            return bool(shared - g.faces) and w.color[w.origin[a]] != w.color[w.origin[b]]

        out = []

        def match(rest: List[int], acc: List[Pair]):
            if not rest:
                out.append(tuple(acc))
                return
            a = rest[0]
            for i in range(1, len(rest)):
                if compatible(a, rest[i]):
                    match(rest[1:i] + rest[i + 1:], acc + [(a, rest[i])])

        match(gray, [])
        return out

    def g_web(self, g: RedGraph, pairing: Sequence[Pair]) -> Web:
        """W_G: drop every vertex of a face of G and join the gray half-edges pairwise"""
        remove = set()
        for f in g.faces:
            remove |= self.face_vertices[f]
        paired = {h for pair in pairing for h in pair}
        if paired != set(g.gray_half_edges):
            raise MalformedInputError("Pairing must cover each gray half-edge exactly once")
        try:
            return splice(self.web, remove, pairing).validate()
        except InvariantBreach as e:
            raise MalformedInputError(f"Pairing does not close up: {e}")

    def reduce(self, g: RedGraph, pairing: Sequence[Pair], reducer: SkeinReducer = None) -> WebCombo:
        reducer = reducer or SkeinReducer(QUANTUM)
        return reducer.reduce(self.g_web(g, pairing))


def _exhaustive(mode: Optional[str]) -> Optional[bool]:
    if mode is None:
        return None
    if mode not in SEARCH_MODES:
        raise MalformedInputError(f"Unknown search mode {mode!r}; expected one of {SEARCH_MODES}")
    return mode == EXHAUSTIVE


def dual_graph(w: Web) -> nx.MultiGraph:
    """Internal faces of w, one edge per web edge shared by two of them"""
    return RedGraphAnalyzer(unclasp(w)).dual


def gray_half_edges(w: Web, faces) -> Tuple[int, ...]:
    return RedGraphAnalyzer(unclasp(w)).red_graph(faces).gray_half_edges


def external_degree(w: Web, faces) -> Dict[int, int]:
    return RedGraphAnalyzer(unclasp(w)).red_graph(faces).ed


def pairings(w: Web, g: RedGraph) -> List[Tuple[Pair, ...]]:
    return RedGraphAnalyzer(unclasp(w)).pairings(g)


def enumerate_red_graphs(w: Web) -> List[RedGraph]:
    return RedGraphAnalyzer(unclasp(w)).enumerate()


def exact_red_graphs(w: Web, mode: str = None, jobs: int = None) -> List[RedGraph]:
    """Exact red graphs; `mode` is 'exhaustive' or 'cycles', chosen by face count when omitted"""
    return RedGraphAnalyzer(unclasp(w)).exact_graphs(_exhaustive(mode), jobs)


def has_exact_red_graph(w: Web, mode: str = None) -> bool:
    return bool(exact_red_graphs(w, mode))


def uses_exhaustive_search(w: Web, mode: str = None) -> bool:
    """Whether exact_red_graphs(w, mode) covers every red graph rather than face cycles only"""
    flag = _exhaustive(mode)
    if flag is None:
        return len(RedGraphAnalyzer(unclasp(w)).internal) <= EXHAUSTIVE_FACE_LIMIT
    return flag


def reduce_by_red_graph(w: Web, g: RedGraph, pairing: Sequence[Pair] = None) -> WebCombo:
    """Skein-reduced W_G; the pairing defaults to the only one when it is forced"""
    analyzer = RedGraphAnalyzer(unclasp(w))
    if pairing is None:
        options = analyzer.pairings(g)
        if len(options) != 1:
            raise MalformedInputError(f"Red graph has {len(options)} pairings; pass one explicitly")
        pairing = options[0]
    return analyzer.reduce(g, pairing)


def g_reductions(clasped: Web, mode: str = None, jobs: int = None) -> List[GReduction]:
    """
    Every planar G-reduction over the exact red graphs of a clasped web.

    Terms are re-clasped with the web's clasp sizes; survivors are the terms
    with no internal vertex sending two strands into one clasp.
    """
    runs = [clasped.multiplicity(b) for b in clasped.boundary]
    analyzer = RedGraphAnalyzer(unclasp(clasped))
    reducer = SkeinReducer(QUANTUM)
    out = []
    for g in analyzer.exact_graphs(_exhaustive(mode), jobs):
        for pairing in analyzer.pairings(g):
            try:
                combo = analyzer.reduce(g, pairing, reducer)
            except MalformedInputError as e:
                logger.debug(f"Skipping pairing {pairing}: {e}")
                continue
            survivors = WebCombo()
            for web, coeff in combo.items():
                reclasped = clasp(web, runs)
                if not clasp_collisions(reclasped):
                    survivors.add_term(reclasped, coeff)
            out.append(GReduction(g, tuple(pairing), combo, survivors))
    logger.info(f"📊 {len(out)} G-reductions, {sum(1 for r in out if not r.survivors.is_zero())} with survivors")
    return out


def g_reduction_frame(reductions: Sequence[GReduction]) -> pd.DataFrame:
    rows = []
    for r in reductions:
        rows.append({
            'faces': ' '.join(str(f) for f in sorted(r.graph.faces)),
            'cycle_length': len(r.graph.faces),
            'pairs': len(r.pairing),
            'terms': len(r.combo),
            'survivors': len(r.survivors),
        })
    return pd.DataFrame(rows, columns=['faces', 'cycle_length', 'pairs', 'terms', 'survivors'])


def g_reduction_report(clasped: Web, mode: str = None, jobs: int = None) -> pd.DataFrame:
    return g_reduction_frame(g_reductions(clasped, mode, jobs))
