#!/usr/bin/env python3
"""
Quantum evaluation checks: fundamental tables, evaluator agreement, leading terms
Usage: python test_quantum_eval.py
"""

import sys
from itertools import product
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.laurent import LaurentPoly, quantum_int
from src.webgraph import (Web, WebBuilder, WHITE, BLACK, INTERNAL, cup_web, tripod_web, polygon_web,
                          hexagon_web, honeycomb_web, empty_web, nest_in_ring, unclasp, rotate_boundary,
                          unclasped_signature)
from src.geometry import superimpose, EndpointPlan
from src.quantum_eval import (expand_by_contraction, expand_by_flows, expand_by_disc_config, coefficient_at,
                              dominant_path, cut_path_state, weight_one_flows, witness_flows, disc_offset,
                              disc_configurations, position_string, expansion_to_frame, enumerate_flows,
                              routing_exponent)
from src.utils import setup_logging, make_rng, get_env_variable, parse_state_string, MalformedInputError

logger = setup_logging()

S5 = "bbwwwwwbbbbbwwwwwbbbbbwwwwwbbb"
THICK5_PATH = parse_state_string("1 1  1 1 1 1 1  0 0 1 1 1  0 0 0 0 0  -1 -1 0 0 0  -1 -1 -1 -1 -1  -1 -1 -1")
WBB_PATH = parse_state_string("1 1  -1 -1 1 1 1  -1 -1 1 1 1  -1 -1 0 1 1  -1 -1 0 1 1  -1 -1 -1 1 1  -1 -1 -1")


def _h_web() -> Web:
    """Two tripods joined by one edge: black legs on the left, white on the right"""
    wb = WebBuilder()
    b = [wb.add_boundary(c) for c in (BLACK, BLACK, WHITE, WHITE)]
    u = wb.add_vertex(INTERNAL, WHITE)
    x = wb.add_vertex(INTERNAL, BLACK)
    wb.add_edge(u, b[0])
    wb.add_edge(u, b[1])
    wb.add_edge(u, x)
    wb.add_edge(x, b[2])
    wb.add_edge(x, b[3])
    return wb.build().validate()


def _theta() -> Web:
    wb = WebBuilder()
    u = wb.add_vertex(INTERNAL, WHITE)
    w = wb.add_vertex(INTERNAL, BLACK)
    pairs = [wb.add_edge(u, w) for _ in range(3)]
    wb.set_rotation(w, [pairs[2][1], pairs[1][1], pairs[0][1]])
    return wb.build().validate()


def _w_union_b_union_b() -> Web:
    w = nest_in_ring(nest_in_ring(honeycomb_web(1, clasped=True)))
    return rotate_boundary(unclasp(w), 28)


def _y_tripod() -> Web:
    """A Y on the lattice: legs S, NW and NE, boundary read clockwise from the bottom"""
    r = 3 ** 0.5 / 2
    wb = WebBuilder()
    legs = [wb.add_boundary(BLACK, at=p) for p in ((0.0, -1.0), (-r, 0.5), (r, 0.5))]
    center = wb.add_vertex(INTERNAL, WHITE, at=(0.0, 0.0))
    for b in legs:
        wb.add_edge(center, b)
    return wb.build().validate()


def _pairing_web(colors, pairs) -> Web:
    wb = WebBuilder()
    bs = [wb.add_boundary(c) for c in colors]
    for a, b in pairs:
        wb.add_edge(bs[a], bs[b])
    return wb.build()


def test_fundamental_tables():
    v = LaurentPoly.monomial
    cup = expand_by_contraction(cup_web(WHITE))
    assert cup.coeffs == {(1, -1): v(0), (0, 0): v(-1), (-1, 1): v(-2)}
    tripod = expand_by_contraction(tripod_web(WHITE))
    assert tripod.coeffs == {(1, 0, -1): v(0), (0, 1, -1): v(-1), (1, -1, 0): v(-1),
                             (0, -1, 1): v(-2), (-1, 1, 0): v(-2), (-1, 0, 1): v(-3)}
    h = expand_by_contraction(_h_web())
    assert len(h) == 12
    assert all(len(list(c.items())) == 1 for c in h.coeffs.values())
    assert expand_by_contraction(empty_web(loops=1)).coeffs == {(): quantum_int(3)}


def test_evaluators_agree():
    webs = [cup_web(BLACK), tripod_web(BLACK), _h_web(), _theta(), polygon_web(2), polygon_web(4),
            hexagon_web(), honeycomb_web(2)]
    for w in webs:
        reference = expand_by_contraction(w)
        assert expand_by_flows(w) == reference, reference.first_difference(expand_by_flows(w))
        for seed in range(3):
            assert expand_by_contraction(w, rng=make_rng(seed)) == reference
    for w in (hexagon_web(), honeycomb_web(2)):
        assert expand_by_disc_config(w) == expand_by_flows(w)


def test_disc_routing_calibration():
    y = _y_tripod()
    positions = position_string(y)
    assert positions == ('S', 'NW', 'NE')
    contraction = expand_by_contraction(y)
    assert expand_by_disc_config(y) == contraction, contraction.first_difference(expand_by_disc_config(y))
    for flow in enumerate_flows(y):
        s = flow.state
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if s[i] < s[j])
        assert flow.exponent == -inversions
    # a zero on the routed S leg: U = 0, E = 1
    assert disc_offset(y, (0, 1, -1)) == -1
    assert routing_exponent(positions, (0, 1, -1)) == -1
    assert contraction.coefficient((0, 1, -1)) == LaurentPoly.monomial(-1)
    # -1 routed left: U = 1, E = 0
    assert disc_offset(y, (-1, 1, 0)) == 2
    assert routing_exponent(positions, (-1, 1, 0)) == -2


def test_skein_consistency():
    bigon = expand_by_contraction(polygon_web(2))
    assert bigon == expand_by_contraction(cup_web(BLACK)).scale(LaurentPoly.parse('v + v^-1'))
    theta = expand_by_contraction(_theta())
    assert theta.coeffs == {(): LaurentPoly.parse('v + v^-1') * quantum_int(3)}
    square = expand_by_contraction(polygon_web(4))
    colors = (BLACK, WHITE, BLACK, WHITE)
    expected = {}
    for pairs in (((0, 1), (2, 3)), ((1, 2), (3, 0))):
        for state, c in expand_by_contraction(_pairing_web(colors, pairs)).coeffs.items():
            expected[state] = expected.get(state, LaurentPoly.zero()) + c
    assert square.coeffs == expected


def test_leading_term_law():
    for w in (cup_web(WHITE), tripod_web(WHITE), _h_web(), hexagon_web(), honeycomb_web(2)):
        expansion = expand_by_contraction(w)
        assert expansion.is_nonnegative()
        lead = dominant_path(w)
        assert lead == expansion.leading_state() == cut_path_state(w)
        assert expansion.coefficient(lead) == LaurentPoly.one()
    w = hexagon_web()
    assert dominant_path(w) == (1, 1, 0, 0, -1, -1)
    expansion = expand_by_contraction(w)
    for state in expansion.states()[:5]:
        assert coefficient_at(w, state) == expansion.coefficient(state)
    assert coefficient_at(w, (1, 1, 1, -1, -1, -1)).is_zero()
    assert len(weight_one_flows(w, (1, 1, 0, 0, -1, -1))) == 1
    frame = expansion_to_frame(expansion)
    assert frame.iloc[0]['state'] == '1,1,0,0,-1,-1'


def test_rotation_keeps_support_size():
    for w in (hexagon_web(), _h_web(), tripod_web(BLACK)):
        assert len(expand_by_contraction(w)) == len(expand_by_contraction(rotate_boundary(w, 1)))


def test_witness_flows_match_coefficients():
    w = honeycomb_web(2)
    state = expand_by_contraction(w).states()[3]
    flows = witness_flows(w, state)
    counts = {}
    for f in flows:
        counts[f.exponent] = counts.get(f.exponent, 0) + 1
        assert f.state == state
    assert LaurentPoly.from_counts(counts) == coefficient_at(w, state)
    configs = disc_configurations(w, state)
    assert len(configs) == len(flows)


def test_large_honeycomb_paths():
    thick5 = honeycomb_web(5)
    wbb = _w_union_b_union_b()
    assert unclasped_signature(thick5) == S5 == unclasped_signature(wbb)
    assert cut_path_state(thick5) == THICK5_PATH
    assert dominant_path(thick5) == THICK5_PATH
    assert cut_path_state(wbb) == WBB_PATH
    assert disc_offset(thick5, WBB_PATH) == 8
    assert position_string(thick5)[:2] == ('S', 'S')
    thick3 = honeycomb_web(3)
    path = dominant_path(thick3)
    assert coefficient_at(thick3, path) == LaurentPoly.one()


def test_coefficient_six():
    thick5 = honeycomb_web(5)
    coeff = coefficient_at(thick5, WBB_PATH)
    logger.info(f"📊 Coefficient at J(W∪B∪B): {coeff}")
    assert coeff.constant_term() >= 6
    assert coeff.has_nonnegative_coefficients()
    flows = weight_one_flows(thick5, WBB_PATH, limit=6)
    assert len(flows) == 6
    assert len({f.edges for f in flows}) == 6
    assert all(f.exponent == 0 and f.state == WBB_PATH for f in flows)


def test_pruned_descent_matches_full_expansion():
    two_tripods = superimpose([tripod_web(WHITE), tripod_web(BLACK)], EndpointPlan.disjoint([[0, 1, 2], [3, 4, 5]], 6))
    assert not two_tripods.crossings()
    for w in (hexagon_web(), _h_web(), two_tripods):
        expansion = expand_by_contraction(w)
        for state in product((1, 0, -1), repeat=len(w.strands())):
            assert coefficient_at(w, state) == expansion.coefficient(state), state
    assert coefficient_at(honeycomb_web(3), (1,) * 18).is_zero()


def test_errors():
    crossing = superimpose([cup_web(WHITE), cup_web(BLACK)], EndpointPlan.disjoint([[0, 2], [1, 3]], 4))
    for bad in (lambda: expand_by_contraction(crossing),
                lambda: coefficient_at(hexagon_web(), (1, 0, -1)),
                lambda: dominant_path(polygon_web(4)),
                lambda: position_string(cup_web(WHITE))):
        try:
            bad()
            assert False, "malformed input accepted"
        except MalformedInputError:
            pass


if __name__ == "__main__":
    test_fundamental_tables()
    test_evaluators_agree()
    test_disc_routing_calibration()
    test_skein_consistency()
    test_leading_term_law()
    test_rotation_keeps_support_size()
    test_witness_flows_match_coefficients()
    test_large_honeycomb_paths()
    test_coefficient_six()
    test_pruned_descent_matches_full_expansion()
    test_errors()
    print("✅ Quantum evaluation checks passed")
