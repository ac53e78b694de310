"""
Golden corpus: the named webs every report and command works from.

Files are web JSON documents under SL3WEB_CORPUS_DIR together with a
manifest.json listing signatures and sizes.
"""
import json
import os
from pathlib import Path
from typing import Callable, Dict, Iterable, List

from src.webgraph import (Web, hexagon_web, honeycomb_web, arc_ring, nest_in_ring, unclasp, rotate_boundary,
                          signature_string, unclasped_signature, web_to_json, web_from_json)
from src.geometry import parallel_copies
from src.chebops import thick
from src.utils import setup_logging, get_env_variable, parse_state_string, MalformedInputError, InvariantBreach

logger = setup_logging()

S5 = "bbwwwwwbbbbbwwwwwbbbbbwwwwwbbb"
THICK5_PATH = parse_state_string("1 1  1 1 1 1 1  0 0 1 1 1  0 0 0 0 0  -1 -1 0 0 0  -1 -1 -1 -1 -1  -1 -1 -1")
WBB_PATH = parse_state_string("1 1  -1 -1 1 1 1  -1 -1 1 1 1  -1 -1 0 1 1  -1 -1 0 1 1  -1 -1 -1 1 1  -1 -1 -1")
# unclasped W∪B∪B starts at the SW clasp; this shift moves its marked point to that of Thick_5(W)
WBB_SHIFT = 28


def corpus_dir() -> Path:
    return Path(get_env_variable('SL3WEB_CORPUS_DIR', 'corpus'))


def ring_b() -> Web:
    """B(W): six U arcs joining neighbouring clasps, colored like the clasped hexagon"""
    w = honeycomb_web(1, clasped=True)
    return arc_ring([w.color[b] for b in w.boundary])


def thick_web(k: int, via_reduction: bool = False) -> Web:
    """Thick_k(W), clasped; via_reduction rebuilds it from k parallel copies and checks it against the honeycomb"""
    patch = honeycomb_web(k, clasped=True)
    if not via_reduction or k == 1:
        return patch
    reduced = thick(hexagon_web(), k)
    if reduced.key() != patch.key():
        logger.error(f"❌ Reduced thickening by {k} differs from the honeycomb patch")
        raise InvariantBreach(f"Thickening by {k} does not match the honeycomb patch")
    return reduced


def w_union_b() -> Web:
    return nest_in_ring(honeycomb_web(1, clasped=True))


def w_union_b_union_b(unclasped: bool = False) -> Web:
    """W∪B∪B; unclasped it reads the signature S5 from the same marked point as Thick_5(W)"""
    w = nest_in_ring(w_union_b())
    return rotate_boundary(unclasp(w), WBB_SHIFT) if unclasped else w


def thick3_union_b() -> Web:
    return nest_in_ring(honeycomb_web(3, clasped=True))


CORPUS: Dict[str, Callable[[], Web]] = {
    'hexW': hexagon_web,
    'B': ring_b,
    'WxW': lambda: parallel_copies(hexagon_web(), 2),
    'thick2W': lambda: thick_web(2, via_reduction=True),
    'thick3W': lambda: thick_web(3),
    'thick5W': lambda: honeycomb_web(5),
    'WuB': w_union_b,
    'thick3WuB': thick3_union_b,
    'WuBuB': lambda: w_union_b_union_b(unclasped=True),
}


def build_web(name: str) -> Web:
    if name not in CORPUS:
        raise MalformedInputError(f"Unknown corpus web {name!r}; expected one of {sorted(CORPUS)}")
    return CORPUS[name]()


def build_corpus(directory: Path = None, names: Iterable[str] = None) -> List[Dict]:
    """Write each corpus web as JSON, checking that it reads back to the same web"""
    directory = Path(directory or corpus_dir())
    os.makedirs(directory, exist_ok=True)
    manifest = []
    for name in names or CORPUS:
        w = build_web(name)
        text = web_to_json(w)
        if web_from_json(text).key() != w.key():
            logger.error(f"❌ Corpus web {name} does not survive a JSON round trip")
            raise InvariantBreach(f"JSON round trip changed corpus web {name}")
        path = directory / f"{name}.json"
        with open(path, 'w') as f:
            f.write(text)
        manifest.append({
            'name': name,
            'file': path.name,
            'signature': signature_string(w),
            'unclasped_signature': unclasped_signature(w),
            'internal_vertices': len(w.internal_vertices()),
            'crossings': len(w.crossings()),
        })
        logger.info(f"✅ Wrote {path}")
    with open(directory / 'manifest.json', 'w') as f:
        json.dump(manifest, f, indent=2)
    logger.info(f"🎉 Corpus of {len(manifest)} webs in {directory}")
    return manifest


def load_web(source: str) -> Web:
    """A web from a JSON file, or a corpus name when no such file exists"""
    path = Path(source)
    if path.exists():
        with open(path) as f:
            return web_from_json(f.read())
    if source in CORPUS:
        cached = corpus_dir() / f"{source}.json"
        if cached.exists():
            return load_web(str(cached))
        return build_web(source)
    raise MalformedInputError(f"No web file or corpus entry named {source!r}")
