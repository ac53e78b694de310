#!/usr/bin/env python3
"""
Write the golden corpus of named webs as JSON, with a manifest
Usage: python scripts/build_corpus.py --output corpus
       python scripts/build_corpus.py --names hexW WxW thick2W
"""

import sys
import argparse
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent))

from src.corpus import CORPUS, build_corpus, corpus_dir
from src.utils import setup_logging, Sl3WebError

logger = setup_logging()


def main():
    parser = argparse.ArgumentParser(description='Build the golden web corpus')
    parser.add_argument('--output', default=None, help='Target directory (default SL3WEB_CORPUS_DIR)')
    parser.add_argument('--names', nargs='+', choices=sorted(CORPUS), default=None, help='Subset of corpus webs')

    args = parser.parse_args()
    directory = Path(args.output) if args.output else corpus_dir()

    try:
        logger.info(f"🔄 Building corpus in {directory}...")
        logger.info("=" * 60)
        manifest = build_corpus(directory, args.names)
        logger.info("=" * 60)
        logger.info("📊 Summary:")
        for entry in manifest:
            logger.info(f"  {entry['name']}: {entry['signature']} ({entry['internal_vertices']} internal vertices)")
    except Sl3WebError as e:
        logger.error(f"❌ Corpus build failed: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
