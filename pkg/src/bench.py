"""
Timing harness for the three expansion strategies on the thick_k family
"""
import time
from typing import Callable, Dict, Iterable, List

import pandas as pd
from tqdm import tqdm

from src.webgraph import Web, honeycomb_web
from src.quantum_eval import expand_by_contraction, expand_by_flows, expand_by_disc_config, expansion_to_frame
from src.utils import setup_logging, MalformedInputError

logger = setup_logging()

COLUMNS = ['verb', 'input', 'strategy', 'wall_ms', 'states', 'flows']

STRATEGIES: Dict[str, Callable[[Web], object]] = {
    'contraction': expand_by_contraction,
    'flows': expand_by_flows,
    'disc': expand_by_disc_config,
}


def time_strategy(name: str, label: str, w: Web, strategy: str) -> Dict:
    if strategy not in STRATEGIES:
        raise MalformedInputError(f"Unknown strategy {strategy!r}; expected one of {sorted(STRATEGIES)}")
    start = time.perf_counter()
    expansion = STRATEGIES[strategy](w)
    wall_ms = (time.perf_counter() - start) * 1000
    frame = expansion_to_frame(expansion)
    return {
        'verb': name,
        'input': label,
        'strategy': strategy,
        'wall_ms': round(wall_ms, 3),
        'states': len(expansion),
        # every flow of a loop-free web is one monomial with coefficient 1
        'flows': int(frame['terms'].sum()) if len(frame) else 0,
    }


def run_bench(ks: Iterable[int], strategies: Iterable[str] = None, webs: Dict[str, Web] = None) -> pd.DataFrame:
    """Time each strategy on Thick_k(W) for k in ks, plus any extra named webs"""
    strategies = list(strategies or STRATEGIES)
    inputs = {f"thick{k}W": honeycomb_web(k) for k in ks}
    inputs.update(webs or {})
    rows: List[Dict] = []
    jobs = [(label, w, s) for label, w in inputs.items() for s in strategies]
    for label, w, strategy in tqdm(jobs, desc="bench"):
        row = time_strategy('expand', label, w, strategy)
        logger.info(f"📊 {label} {strategy}: {row['wall_ms']} ms, {row['states']} states, {row['flows']} flows")
        rows.append(row)
    frame = pd.DataFrame(rows, columns=COLUMNS)
    for label in inputs:
        counts = frame[frame['input'] == label][['states', 'flows']].drop_duplicates()
        if len(counts) > 1:
            logger.warning(f"⚠️ Strategies disagree on the size of the expansion of {label}")
    return frame
