#!/usr/bin/env python3
"""
Time the expansion strategies on Thick_k(W) and write a CSV
Usage: python scripts/bench.py --k 3 --output bench.csv
       python scripts/bench.py --k 2 --strategies contraction flows
"""

import sys
import argparse
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent))

from src.bench import STRATEGIES, run_bench
from src.utils import setup_logging, Sl3WebError

logger = setup_logging()


def main():
    parser = argparse.ArgumentParser(description='Benchmark expansion strategies on the thick_k family')
    parser.add_argument('--k', type=int, default=2, help='Largest thickening to time')
    parser.add_argument('--strategies', nargs='+', choices=sorted(STRATEGIES), default=None)
    parser.add_argument('--output', default='bench.csv', help='CSV output file')

    args = parser.parse_args()

    try:
        logger.info(f"⏱️ Timing thick_1..thick_{args.k}...")
        frame = run_bench(range(1, args.k + 1), args.strategies)
        frame.to_csv(args.output, index=False)
        logger.info("=" * 60)
        logger.info(f"🎉 Wrote {len(frame)} rows to {args.output}")
        for strategy, total in frame.groupby('strategy')['wall_ms'].sum().items():
            logger.info(f"  📊 {strategy}: {total:.1f} ms")
    except Sl3WebError as e:
        logger.error(f"❌ Benchmark failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
