#!/usr/bin/env python3
"""
Red graph checks: levels, fitting orientations, exact graphs and G-reductions
Usage: python test_red_graphs.py
Set SL3WEB_SLOW=1 to include the triple honeycomb.
"""

import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.webgraph import (WHITE, BLACK, cup_web, tripod_web, hexagon_web, honeycomb_web, arc_ring, nest_in_ring,
                          clasp, unclasp, signature_of)
from src.geometry import superimpose, EndpointPlan
from src.red_graphs import (RedGraph, RedGraphAnalyzer, enumerate_red_graphs, exact_red_graphs, has_exact_red_graph,
                            fitting_orientation, per_vertex_level, is_admissible, is_exact, reduce_by_red_graph,
                            g_reductions, g_reduction_frame, dual_graph, external_degree, g_reduction_report)
from src.utils import setup_logging, get_env_variable, MalformedInputError

logger = setup_logging()


def _thick2():
    return unclasp(honeycomb_web(2, clasped=True))


def _ring(graphs):
    rings = [g for g in graphs if len(g.faces) == 6]
    assert len(rings) == 1
    return rings[0]


def test_hexagon_has_no_exact_graph():
    graphs = enumerate_red_graphs(hexagon_web())
    assert len(graphs) == 1
    g = graphs[0]
    assert list(g.ed.values()) == [6]
    assert g.level() == -1
    assert not is_admissible(g)
    assert not has_exact_red_graph(hexagon_web())


def test_trees_have_no_red_graphs():
    assert enumerate_red_graphs(tripod_web(WHITE)) == []
    assert not has_exact_red_graph(cup_web(BLACK))


def test_level_formula():
    lone = RedGraph(frozenset({0}), (), ((0, 4),), ())
    assert lone.level() == 0
    assert fitting_orientation(lone) == {}
    assert is_exact(lone)
    assert per_vertex_level(lone, {}) == {0: 0}


def test_thick_two_ring():
    exact = exact_red_graphs(_thick2(), mode='exhaustive')
    assert exact
    assert all(g.has_cycle() for g in exact)
    ring = _ring(exact)
    assert set(ring.ed.values()) == {2}
    assert len(ring.edges) == 6
    assert ring.level() == 0
    orientation = fitting_orientation(ring)
    assert orientation is not None
    assert set(per_vertex_level(ring, orientation).values()) == {0}
    assert len(ring.gray_half_edges) == 12
    assert dual_graph(_thick2()).number_of_nodes() == 7
    assert external_degree(_thick2(), ring.faces) == ring.ed


def test_cycle_search_agrees_with_exhaustive():
    analyzer = RedGraphAnalyzer(_thick2())
    exhaustive = {g.faces for g in analyzer.exact_graphs(exhaustive=True)}
    seeded = {g.faces for g in analyzer.exact_graphs(exhaustive=False, jobs=2)}
    assert seeded
    assert seeded <= exhaustive


def test_ring_reduction_gives_arc_ring():
    clasped = honeycomb_web(2, clasped=True)
    w = unclasp(clasped)
    analyzer = RedGraphAnalyzer(w)
    ring = _ring(analyzer.exact_graphs(exhaustive=True))
    assert len(analyzer.pairings(ring)) == 1
    combo = reduce_by_red_graph(w, ring)
    single = combo.single()
    assert single is not None
    web, _ = single
    assert signature_of(web) == signature_of(w)
    assert clasp(web, [2] * 6).key() == arc_ring(list(signature_of(clasped))).key()
    reductions = g_reductions(clasped, mode='exhaustive')
    frame = g_reduction_frame(reductions)
    assert len(frame) == len(reductions)
    assert len(g_reduction_report(clasped)) == len(frame)
    assert (frame['survivors'] > 0).any()


def test_errors():
    crossing = superimpose([cup_web(WHITE), cup_web(BLACK)], EndpointPlan.disjoint([[0, 2], [1, 3]], 4))
    analyzer = RedGraphAnalyzer(hexagon_web())
    for bad in (lambda: RedGraphAnalyzer(crossing),
                lambda: RedGraphAnalyzer(honeycomb_web(2, clasped=True)),
                lambda: analyzer.red_graph([]),
                lambda: RedGraphAnalyzer(honeycomb_web(5)).enumerate()):
        try:
            bad()
            assert False, "malformed input accepted"
        except MalformedInputError:
            pass


def test_thick_three_reductions():
    if get_env_variable('SL3WEB_SLOW', '0') != '1':
        logger.info("⚠️ Skipping triple honeycomb red graphs (set SL3WEB_SLOW=1)")
        return
    clasped = honeycomb_web(3, clasped=True)
    exact = exact_red_graphs(clasped, mode='cycles')
    assert exact and all(g.has_cycle() and len(g.faces) >= 6 for g in exact)
    w_union_b = nest_in_ring(honeycomb_web(1, clasped=True)).key()
    reductions = g_reductions(clasped, mode='cycles')
    assert any(w_union_b in r.survivors.keys() for r in reductions)


if __name__ == "__main__":
    test_hexagon_has_no_exact_graph()
    test_trees_have_no_red_graphs()
    test_level_formula()
    test_thick_two_ring()
    test_cycle_search_agrees_with_exhaustive()
    test_ring_reduction_gives_arc_ring()
    test_errors()
    test_thick_three_reductions()
    print("✅ Red graph checks passed")
