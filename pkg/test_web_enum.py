#!/usr/bin/env python3
"""
Basis enumeration checks: dimension oracle, completeness, growth inversion, persistence
Usage: python test_web_enum.py
Set SL3WEB_SLOW=1 to check every catalog up to eight boundary points against the evaluators.
"""

import sys
import tempfile
from itertools import product
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.webgraph import WHITE, cup_web, tripod_web, hexagon_web, honeycomb_web, nest_in_ring, unclasp, rotate_boundary
from src.laurent import LaurentPoly
from src.quantum_eval import dominant_path, expand_by_contraction, expand_by_flows
from src.web_enum import (dim_invariants, weights_tensor, spanning_partitions, enumerate_basis, growth_inverse,
                          save_catalog, load_catalog, catalog_summary)
from src.utils import setup_logging, get_env_variable, parse_state_string, MalformedInputError

logger = setup_logging()


def test_dimension_oracle():
    assert dim_invariants('wb') == 1
    assert dim_invariants('www') == 1
    assert dim_invariants('ww') == 0
    assert dim_invariants('') == 1
    assert dim_invariants('wbwb') == 2
    assert dim_invariants('wbwbwb') == 6
    assert dim_invariants('wwwwww') == 5
    assert dim_invariants('wwwbbb') == 6
    assert weights_tensor({(0, 0): 1}, 'w') == {(1, 0): 1}
    try:
        dim_invariants('wxb')
        assert False, "bad signature accepted"
    except MalformedInputError:
        pass


def test_spanning_partitions():
    assert spanning_partitions('wb') == [[(0, 1)]]
    assert spanning_partitions('www') == [[(0, 1, 2)]]
    assert len(spanning_partitions('wbwb')) == 2
    # the crossing matching comes last
    assert spanning_partitions('wwbb') == [[(0, 3), (1, 2)], [(0, 2), (1, 3)]]


def test_small_catalogs():
    cup = enumerate_basis('wb', use_cache=False, progress=False)
    assert cup.paths() == [(1, -1)]
    assert cup.web_for((1, -1)).key() == cup_web(WHITE).key()
    tripod = enumerate_basis('www', use_cache=False, progress=False)
    assert tripod.web_for((1, 0, -1)).key() == tripod_web(WHITE).key()
    assert len(enumerate_basis('ww', use_cache=False, progress=False)) == 0


def test_completeness_up_to_six():
    for n in range(1, 7):
        for letters in product('wb', repeat=n):
            sig = ''.join(letters)
            catalog = enumerate_basis(sig, use_cache=False, progress=False)
            assert len(catalog) == dim_invariants(sig), sig
            for state, w in catalog.entries.items():
                assert growth_inverse(sig, state, candidates=[w]).key() == w.key()


def test_catalogs_up_to_eight():
    if get_env_variable('SL3WEB_SLOW', '0') != '1':
        logger.info("⚠️ Skipping catalogs up to eight boundary points (set SL3WEB_SLOW=1)")
        return
    checked = 0
    for n in range(1, 9):
        for letters in product('wb', repeat=n):
            sig = ''.join(letters)
            catalog = enumerate_basis(sig, use_cache=False, progress=False)
            assert len(catalog) == dim_invariants(sig), sig
            for state, w in catalog.entries.items():
                if n > 6:
                    assert growth_inverse(sig, state, candidates=[w]).key() == w.key()
                expansion = expand_by_contraction(w)
                assert expand_by_flows(w) == expansion, expansion.first_difference(expand_by_flows(w))
                assert expansion.is_nonnegative()
                assert expansion.leading_state() == state == dominant_path(w)
                assert expansion.coefficient(state) == LaurentPoly.one()
                checked += 1
    logger.info(f"✅ {checked} basis webs agree across evaluators")


def test_hexagon_in_catalog():
    catalog = enumerate_basis('wbwbwb', use_cache=False, progress=False)
    assert len(catalog) == 6
    keys = catalog.keys()
    assert hexagon_web().key() in keys
    assert keys[hexagon_web().key()] == (1, 1, 0, 0, -1, -1)
    assert growth_inverse('wbwbwb', (1, 1, 0, 0, -1, -1)).key() == hexagon_web().key()
    frame = catalog_summary(catalog)
    assert len(frame) == 6
    assert frame['hexagons'].sum() == 1


def test_growth_inverse_on_thick_webs():
    thick5 = honeycomb_web(5)
    wbb = rotate_boundary(unclasp(nest_in_ring(nest_in_ring(honeycomb_web(1, clasped=True)))), 28)
    path = parse_state_string("1 1  1 1 1 1 1  0 0 1 1 1  0 0 0 0 0  -1 -1 0 0 0  -1 -1 -1 -1 -1  -1 -1 -1")
    sig = "bbwwwwwbbbbbwwwwwbbbbbwwwwwbbb"
    assert growth_inverse(sig, path, candidates=[wbb, thick5]).key() == thick5.key()
    try:
        growth_inverse('wbwbwb', (1, 1, 1, -1, -1, -1))
        assert False, "non-dominant path accepted"
    except MalformedInputError:
        pass


def test_catalog_persistence():
    catalog = enumerate_basis('wbwb', use_cache=False, progress=False)
    with tempfile.TemporaryDirectory() as tmp:
        save_catalog(catalog, Path(tmp))
        loaded = load_catalog('wbwb', Path(tmp))
        assert loaded is not None
        assert loaded.keys() == catalog.keys()
        assert load_catalog('wbwbwb', Path(tmp)) is None
    for state, w in catalog.entries.items():
        assert dominant_path(w) == state


if __name__ == "__main__":
    test_dimension_oracle()
    test_spanning_partitions()
    test_small_catalogs()
    test_completeness_up_to_six()
    test_catalogs_up_to_eight()
    test_hexagon_in_catalog()
    test_growth_inverse_on_thick_webs()
    test_catalog_persistence()
    print("✅ Basis enumeration checks passed")
