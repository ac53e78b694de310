"""
Non-elliptic web bases: dimension oracle, enumeration, growth inversion.

The invariant space is spanned by products of pairings and determinants. Each
such product is drawn as cups and tripods superimposed in one disc; reducing
these diagrams and collecting the supports yields every basis web. Enumeration
stops as soon as the collected count reaches the dimension.
"""
import bisect
import json
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from src.webgraph import (Web, WHITE, BLACK, cup_web, tripod_web, empty_web, faces_of, unclasp,
                          unclasped_signature, web_to_dict, web_from_dict)
from src.geometry import superimpose, EndpointPlan
from src.skein import SkeinReducer, QUANTUM
from src.quantum_eval import dominant_path
from src.utils import (setup_logging, get_env_variable, default_jobs, chunk_list, format_state,
                       parse_state_string, validate_signature, MalformedInputError, InvariantBreach)

logger = setup_logging()

State = Tuple[int, ...]
Weight = Tuple[int, int]

# highest weights of the two fundamental representations
FUNDAMENTAL = {WHITE: (1, 0), BLACK: (0, 1)}
_STEPS = {
    (1, 0): ((1, 0), (-1, 1), (0, -1)),
    (0, 1): ((0, 1), (1, -1), (-1, 0)),
}


def check_signature(signature: Iterable[str]) -> str:
    sig = ''.join(signature)
    if sig and not validate_signature(sig):
        raise MalformedInputError(f"Signature letters must be 'w' or 'b': {sig!r}")
    return sig


def weights_tensor(weights: Counter, letter: str) -> Counter:
    """Tensor a dominant-weight multiset with a fundamental representation"""
    out: Counter = Counter()
    for (a, b), m in weights.items():
        for da, db in _STEPS[FUNDAMENTAL[letter]]:
            x, y = a + da, b + db
            if x >= 0 and y >= 0:
                out[(x, y)] += m
    return out


def dim_invariants(signature: Iterable[str]) -> int:
    """Multiplicity of the trivial representation in the tensor product"""
    sig = check_signature(signature)
    weights: Counter = Counter({(0, 0): 1})
    for letter in sig:
        weights = weights_tensor(weights, letter)
    return weights.get((0, 0), 0)


# -- spanning family -------------------------------------------------------------

def _interleavings(groups: Sequence[Tuple[int, ...]]) -> int:
    """Pairs of groups whose chords would cross"""
    count = 0
    for i, a in enumerate(groups):
        for b in groups[i + 1:]:
            arcs = {bisect.bisect(a, x) % len(a) for x in b}
            if len(arcs) > 1:
                count += 1
    return count


def spanning_partitions(signature: str) -> List[List[Tuple[int, ...]]]:
    """Partitions of the boundary into opposite-colored pairs and same-colored triples, planar ones first"""
    def build(free: List[int]) -> Iterator[List[Tuple[int, ...]]]:
        if not free:
            yield []
            return
        i, rest = free[0], free[1:]
        for x, j in enumerate(rest):
            if signature[j] != signature[i]:
                for tail in build(rest[:x] + rest[x + 1:]):
                    yield [(i, j)] + tail
        for x, j in enumerate(rest):
            if signature[j] != signature[i]:
                continue
            for k in rest[x + 1:]:
                if signature[k] == signature[i]:
                    remaining = [r for r in rest if r not in (j, k)]
                    for tail in build(remaining):
                        yield [(i, j, k)] + tail

    return sorted(build(list(range(len(signature)))), key=_interleavings)


def partition_diagram(signature: str, groups: Sequence[Tuple[int, ...]]) -> Web:
    parts = [cup_web(signature[g[0]]) if len(g) == 2 else tripod_web(signature[g[0]]) for g in groups]
    return superimpose(parts, EndpointPlan.disjoint([list(g) for g in groups], len(signature)))


# -- catalogs ----------------------------------------------------------------------

@dataclass(frozen=True)
class BasisCatalog:
    """Basis webs of one signature keyed by dominant path"""
    signature: str
    dimension: int
    entries: Dict[State, Web] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def paths(self) -> List[State]:
        return sorted(self.entries, reverse=True)

    def web_for(self, state: Sequence[int]) -> Web:
        state = tuple(state)
        if state not in self.entries:
            raise MalformedInputError(f"{format_state(state)} is not a dominant path for {self.signature!r}")
        return self.entries[state]

    def keys(self) -> Dict[bytes, State]:
        return {w.key(): s for s, w in self.entries.items()}

    def to_dict(self) -> Dict:
        return {
            'signature': self.signature,
            'dimension': self.dimension,
            'entries': [{'path': format_state(s), 'web': web_to_dict(self.entries[s])} for s in self.paths()],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'BasisCatalog':
        try:
            entries = {}
            for item in data['entries']:
                path = parse_state_string(item['path']) if item['path'] else ()
                entries[path] = web_from_dict(item['web'])
            return cls(check_signature(data['signature']), int(data['dimension']), entries)
        except (KeyError, TypeError) as e:
            raise MalformedInputError(f"Malformed catalog: {e}")


def cache_dir() -> Path:
    return Path(get_env_variable('SL3WEB_CACHE_DIR', '.sl3web_cache'))


def _catalog_file(signature: str, directory: Path = None) -> Path:
    return (directory or cache_dir()) / f"catalog_{signature or 'empty'}.json"


def save_catalog(catalog: BasisCatalog, directory: Path = None) -> Path:
    path = _catalog_file(catalog.signature, directory)
    os.makedirs(path.parent, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(catalog.to_dict(), f)
    logger.info(f"✅ Saved catalog {catalog.signature!r} ({len(catalog)} webs) to {path}")
    return path


def load_catalog(signature: str, directory: Path = None) -> Optional[BasisCatalog]:
    path = _catalog_file(check_signature(signature), directory)
    if not path.exists():
        return None
    try:
        with open(path) as f:
            catalog = BasisCatalog.from_dict(json.load(f))
    except (json.JSONDecodeError, MalformedInputError) as e:
        logger.warning(f"⚠️ Ignoring unreadable catalog {path}: {e}")
        return None
    if len(catalog) != catalog.dimension:
        logger.warning(f"⚠️ Ignoring incomplete catalog {path}")
        return None
    return catalog


def _seal(signature: str, dimension: int, webs: Iterable[Web]) -> BasisCatalog:
    entries: Dict[State, Web] = {}
    for w in webs:
        path = dominant_path(w)
        if path in entries:
            logger.error(f"❌ Two basis webs share the dominant path {format_state(path)}")
            raise InvariantBreach(f"Dominant path {format_state(path)} is not injective on {signature!r}")
        entries[path] = w
    return BasisCatalog(signature, dimension, entries)


def enumerate_basis(signature: Iterable[str], jobs: int = None, use_cache: bool = True,
                    progress: bool = True) -> BasisCatalog:
    """All non-elliptic webs of a signature, checked against the dimension oracle"""
    sig = check_signature(signature)
    dimension = dim_invariants(sig)
    if use_cache:
        cached = load_catalog(sig)
        if cached is not None:
            logger.debug(f"Catalog {sig!r} loaded from cache")
            return cached
    if dimension == 0:
        return BasisCatalog(sig, 0, {})
    if not sig:
        return _seal(sig, 1, [empty_web()])

    jobs = jobs or default_jobs()
    partitions = spanning_partitions(sig)
    reducer = SkeinReducer(QUANTUM)
    found: Dict[bytes, Web] = {}
    logger.info(f"🔍 Enumerating basis of {sig!r}: dimension {dimension}, {len(partitions)} spanning diagrams")
    chunks = chunk_list(partitions, max(8, 4 * jobs))
    for chunk in tqdm(chunks, desc=f"basis {sig}", disable=not progress):
        diagrams = [partition_diagram(sig, groups) for groups in chunk]
        for combo in reducer.reduce_many(diagrams, jobs):
            for w, _ in combo.items():
                found.setdefault(w.key(), w)
        if len(found) >= dimension:
            break
    if len(found) != dimension:
        logger.error(f"❌ Spanning family for {sig!r} gave {len(found)} webs, dimension is {dimension}")
        raise InvariantBreach(f"Basis enumeration for {sig!r} found {len(found)} webs, expected {dimension}")

    catalog = _seal(sig, dimension, found.values())
    logger.info(f"✅ Basis of {sig!r}: {len(catalog)} webs")
    if use_cache:
        save_catalog(catalog)
    return catalog


def growth_inverse(signature: Iterable[str], state: Sequence[int], candidates: Iterable[Web] = None,
                   jobs: int = None) -> Web:
    """
    The basis web whose dominant path is `state`.

    Without candidates the signature's catalog is enumerated; with candidates
    (large signatures) the first web of matching signature and dominant path
    is returned.
    """
    sig = check_signature(signature)
    state = tuple(state)
    if len(state) != len(sig):
        raise MalformedInputError(f"State {format_state(state)} does not fit signature {sig!r}")
    if candidates is None:
        return enumerate_basis(sig, jobs=jobs).web_for(state)
    for w in candidates:
        w = unclasp(w)
        if unclasped_signature(w) == sig and dominant_path(w, certify=False) == state:
            return w
    raise MalformedInputError(f"No candidate web has dominant path {format_state(state)}")


def catalog_summary(catalog: BasisCatalog) -> pd.DataFrame:
    rows = []
    for s in catalog.paths():
        w = catalog.entries[s]
        faces = faces_of(w)
        rows.append({
            'dominant_path': format_state(s),
            'internal_vertices': len(w.internal_vertices()),
            'internal_faces': len(faces),
            'hexagons': sum(1 for f in faces if len(f) == 6),
        })
    return pd.DataFrame(rows, columns=['dominant_path', 'internal_vertices', 'internal_faces', 'hexagons'])
