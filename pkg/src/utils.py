import os
import random
import logging
from typing import List, Sequence, Iterable, Tuple
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Sl3WebError(Exception):
    """Base error for the web calculus"""


class MalformedInputError(Sl3WebError, ValueError):
    """Input web, state string, signature or configuration is not well formed"""


class InvariantBreach(Sl3WebError):
    """An internal consistency check failed"""


def setup_logging(log_level: str = None) -> logging.Logger:
    """Setup logging configuration"""
    if log_level is None:
        log_level = os.getenv('SL3WEB_LOG_LEVEL', 'INFO')
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(os.getenv('SL3WEB_LOG_FILE', 'sl3web.log')),
            logging.StreamHandler()
        ]
    )
    return logging.getLogger(__name__)


def get_env_variable(var_name: str, default: str = None) -> str:
    """Get environment variable with error handling"""
    value = os.getenv(var_name, default)
    if value is None:
        raise ValueError(f"Environment variable {var_name} is required")
    return value


def default_jobs() -> int:
    """Worker cap from SL3WEB_JOBS"""
    return max(1, int(get_env_variable('SL3WEB_JOBS', '1')))


def make_rng(seed: int = None) -> random.Random:
    """Seeded RNG; falls back to SL3WEB_SEED"""
    if seed is None:
        seed = int(get_env_variable('SL3WEB_SEED', '0'))
    return random.Random(seed)


def chunk_list(lst: List, chunk_size: int) -> List[List]:
    """Split list into chunks"""
    return [lst[i:i + chunk_size] for i in range(0, len(lst), chunk_size)]


def parse_state_string(text: str) -> Tuple[int, ...]:
    """Parse '1,0,-1' (or '1 0 -1') into a state tuple"""
    tokens = text.replace(',', ' ').split()
    if not tokens:
        raise MalformedInputError("Empty state string")
    try:
        state = tuple(int(tok) for tok in tokens)
    except ValueError:
        raise MalformedInputError(f"State string contains non-integer entries: {text!r}")
    if any(s not in (-1, 0, 1) for s in state):
        raise MalformedInputError(f"State entries must be in {{1, 0, -1}}: {text!r}")
    return state


def format_state(state: Sequence[int]) -> str:
    """Render a state tuple as '1,0,-1'"""
    return ','.join(str(s) for s in state)


def validate_signature(signature: Iterable[str]) -> bool:
    """Validate signature letters (w/b)"""
    letters = list(signature)
    return len(letters) > 0 and all(c in ('w', 'b') for c in letters)
