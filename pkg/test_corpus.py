#!/usr/bin/env python3
"""
Golden corpus: building, writing and loading the named webs
Usage: python test_corpus.py
"""

import json
import sys
import tempfile
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.webgraph import hexagon_web, honeycomb_web, unclasped_signature, signature_string
from src.corpus import S5, CORPUS, build_web, build_corpus, load_web, ring_b, w_union_b_union_b
from src.utils import setup_logging, MalformedInputError

logger = setup_logging()


def test_named_webs():
    assert build_web('hexW').key() == hexagon_web().key()
    assert unclasped_signature(build_web('thick5W')) == S5
    assert unclasped_signature(w_union_b_union_b(unclasped=True)) == S5
    assert signature_string(ring_b()) == signature_string(honeycomb_web(1, clasped=True))
    assert not ring_b().internal_vertices()


def test_build_and_load():
    names = ['hexW', 'B', 'WuB']
    with tempfile.TemporaryDirectory() as tmp:
        manifest = build_corpus(Path(tmp), names)
        assert [m['name'] for m in manifest] == names
        with open(Path(tmp) / 'manifest.json') as f:
            assert json.load(f) == manifest
        for name in names:
            assert load_web(str(Path(tmp) / f"{name}.json")).key() == build_web(name).key()
    assert load_web('hexW').key() == hexagon_web().key()


def test_unknown_names():
    assert 'thick2W' in CORPUS
    for bad in (lambda: build_web('hexagon'), lambda: load_web('no/such/web.json')):
        try:
            bad()
            assert False, "unknown corpus entry accepted"
        except MalformedInputError:
            pass


if __name__ == "__main__":
    test_named_webs()
    test_build_and_load()
    test_unknown_names()
    print("✅ Corpus checks passed")
