#!/usr/bin/env python3
"""
Web data model checks: builders, faces, canonical keys, clasps, JSON
Usage: python test_webgraph.py
"""

import sys
import json
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.webgraph import (Web, WebCombo, BOUNDARY, WHITE, BLACK, hexagon_web, honeycomb_web, polygon_web, tripod_web,
                          cup_web, arc_ring, nest_in_ring, signature_string, unclasped_signature,
                          faces_of, euler_defect, is_non_elliptic, has_boundary_y, unclasp, clasp,
                          rotate_boundary, same_up_to_rotation, splice, web_to_json, web_from_json,
                          web_to_dict, web_from_dict)
from src.laurent import LaurentPoly
from src.utils import setup_logging, MalformedInputError

logger = setup_logging()


def _relabel(w: Web, dv: int, dh: int) -> Web:
    """Same web with shifted ids and internal rotations started elsewhere"""
    rotation = {}
    for v, hs in w.rotation.items():
        hs = tuple(h + dh for h in hs)
        if w.kind[v] != BOUNDARY:
            hs = hs[1:] + hs[:1]
        rotation[v + dv] = hs
    return Web({v + dv: k for v, k in w.kind.items()}, {v + dv: c for v, c in w.color.items()},
               rotation, {h + dh: t + dh for h, t in w.twin.items()}, [b + dv for b in w.boundary],
               {c + dv: o for c, o in w.over.items()}, {h + dh: s for h, s in w.side.items()}, w.loops)


def test_hexagon():
    w = hexagon_web().validate()
    assert signature_string(w) == 'wbwbwb'
    faces = faces_of(w)
    assert len(faces) == 1 and len(faces[0]) == 6
    assert is_non_elliptic(w)
    assert not has_boundary_y(w)
    assert euler_defect(w) == 0


def test_honeycomb_counts():
    for k in (1, 2, 3):
        w = honeycomb_web(k).validate()
        assert len(w.internal_vertices()) == 6 * k * k
        assert len(w.boundary) == 6 * k
        faces = faces_of(w)
        assert len(faces) == 3 * k * (k - 1) + 1
        assert all(len(f) == 6 for f in faces)
        assert is_non_elliptic(w)
    assert unclasped_signature(honeycomb_web(2)) == 'bwwbbwwbbwwb'
    assert unclasped_signature(honeycomb_web(5)) == 'bbwwwwwbbbbbwwwwwbbbbbwwwwwbbb'
    clasped = honeycomb_web(2, clasped=True).validate()
    assert signature_string(clasped) == 'wbwbwb'
    assert all(clasped.multiplicity(b) == 2 for b in clasped.boundary)


def test_small_builders():
    assert is_non_elliptic(cup_web())
    assert has_boundary_y(tripod_web(WHITE))
    assert signature_string(tripod_web(BLACK)) == 'bbb'
    square = polygon_web(4).validate()
    assert not is_non_elliptic(square)
    assert [len(f) for f in faces_of(square)] == [4]
    ring = arc_ring([WHITE, BLACK] * 3).validate()
    assert signature_string(ring) == 'wbwbwb'
    assert all(ring.multiplicity(b) == 2 for b in ring.boundary)
    nested = nest_in_ring(honeycomb_web(1, clasped=True)).validate()
    assert all(nested.multiplicity(b) == 3 for b in nested.boundary)
    try:
        polygon_web(3)
        assert False, "odd polygon accepted"
    except MalformedInputError:
        pass


def test_canonical_key_invariance():
    for w in (hexagon_web(), honeycomb_web(2), polygon_web(4), arc_ring([WHITE, BLACK] * 2)):
        assert _relabel(w, 100, 1000).key() == w.key()
    hexagon = hexagon_web()
    assert rotate_boundary(hexagon, 1).key() != hexagon.key()
    assert rotate_boundary(hexagon, 2).key() == hexagon.key()
    assert same_up_to_rotation(hexagon, rotate_boundary(hexagon, 1))
    assert hexagon.key() != honeycomb_web(2).key()


def test_clasp_round_trip():
    clasped = honeycomb_web(2, clasped=True)
    flat = unclasp(clasped)
    assert len(flat.boundary) == 12
    assert signature_string(flat) == 'wwbbwwbbwwbb'
    assert clasp(flat, [2] * 6).key() == clasped.key()
    try:
        clasp(hexagon_web(), [2, 2, 2])
        assert False, "mixed-color clasp accepted"
    except MalformedInputError:
        pass


def test_planarity_check():
    w = hexagon_web()
    v = w.internal_vertices()[0]
    a, b, c = w.rotation[v]
    rotation = dict(w.rotation)
    rotation[v] = (a, c, b)
    flipped = w.replace(rotation=rotation)
    assert euler_defect(flipped) != 0
    try:
        flipped.validate()
        assert False, "non-planar rotation accepted"
    except MalformedInputError:
        pass


def test_splice_bigon_to_arc():
    bigon = polygon_web(2).validate()
    u0, u1 = bigon.internal_vertices()
    spliced = splice(bigon, [u0, u1], [(bigon.rotation[u0][0], bigon.rotation[u1][0])]).validate()
    assert spliced.key() == cup_web(BLACK).key()
    assert spliced.loops == 0


def test_json_round_trip():
    for w in (hexagon_web(), honeycomb_web(2, clasped=True), arc_ring([WHITE, BLACK] * 3, 2)):
        assert web_from_json(web_to_json(w)).key() == w.key()
    data = web_to_dict(hexagon_web())
    data['signature'] = 'bbbbbb'
    try:
        web_from_dict(data)
        assert False, "wrong signature accepted"
    except MalformedInputError:
        pass
    data = web_to_dict(hexagon_web())
    data['halfEdges'].pop()
    try:
        web_from_json(json.dumps(data))
        assert False, "missing half-edge accepted"
    except MalformedInputError:
        pass
    try:
        web_from_json('{not json')
        assert False, "broken JSON accepted"
    except MalformedInputError:
        pass


def test_combinations():
    hexagon = hexagon_web()
    combo = WebCombo.of(hexagon) + WebCombo.of(_relabel(hexagon, 7, 9), LaurentPoly.parse('v'))
    assert len(combo) == 1
    assert combo.coefficient(hexagon) == LaurentPoly.parse('v + 1')
    assert (combo - combo).is_zero()
    other = WebCombo.of(hexagon, 2)
    assert combo.first_difference(other) is not None
    assert combo.first_difference(combo) is None


if __name__ == "__main__":
    test_hexagon()
    test_honeycomb_counts()
    test_small_builders()
    test_canonical_key_invariance()
    test_clasp_round_trip()
    test_planarity_check()
    test_splice_bigon_to_arc()
    test_json_round_trip()
    test_combinations()
    print("✅ Web data model checks passed")
