#!/usr/bin/env python3
"""
Command-line front end for the SL(3) web calculus
Usage: python sl3web.py reduce corpus/WxW.json
       python sl3web.py coeff corpus/thick5W.json --state "1,1,-1,-1,..."
       python sl3web.py cheb verify-band corpus/hexW.json --k 3
       python sl3web.py canon prop13 --flows
Exit status: 0 success, 1 malformed input, 2 internal invariant breach.
"""

import sys
import os
import json
import logging
import argparse
from pathlib import Path
from typing import Dict, List

import pandas as pd

sys.path.append(str(Path(__file__).parent))

from src.webgraph import WebCombo, unclasp, web_to_dict, to_dot, to_svg
from src.skein import SkeinReducer, MODES, COMMUTATIVE, random_strategy_reducer
from src.classical_eval import Configuration, eval_numeric, eval_combo_numeric, random_configuration
from src.quantum_eval import (expand_by_contraction, expand_by_flows, expand_by_disc_config, expansion_to_frame,
                              coefficient_at, weight_one_flows, disc_offset)
from src.web_enum import dim_invariants, enumerate_basis, growth_inverse, catalog_summary
from src.chebops import verify_bracelet, verify_band, monomial_report
from src.red_graphs import SEARCH_MODES, enumerate_red_graphs, exact_red_graphs, g_reduction_report
from src.dual_canon import negative_exponent_check, proposition_report
from src.corpus import load_web
from src.bench import STRATEGIES, run_bench
from src.utils import setup_logging, make_rng, parse_state_string, format_state, MalformedInputError, InvariantBreach

logger = setup_logging()

EXPANSIONS = {'contraction': expand_by_contraction, 'flows': expand_by_flows, 'disc': expand_by_disc_config}


def print_header(title: str):
    print("=" * 120)
    print(title)
    print("=" * 120)


def emit(result, fmt: str):
    """Print a DataFrame or JSON-able result in the requested format"""
    if isinstance(result, pd.DataFrame):
        if fmt == 'csv':
            print(result.to_csv(index=False), end='')
        elif fmt == 'json':
            print(result.to_json(orient='records', indent=2))
        else:
            print(result.to_string(index=False) if len(result) else "(no rows)")
    elif isinstance(result, str):
        print(result)
    else:
        print(json.dumps(result, indent=2, default=str))


def combo_to_dict(combo: WebCombo) -> Dict:
    return {'terms': [{'coeff': str(c), 'web': web_to_dict(w)} for w, c in combo.items()]}


# -- verbs --------------------------------------------------------------------------

def cmd_reduce(args):
    w = load_web(args.web)
    if args.seed is not None:
        reducer = random_strategy_reducer(args.mode, args.seed, trace=args.trace)
    else:
        reducer = SkeinReducer(args.mode, trace=args.trace)
    combo = reducer.reduce(w)
    logger.info(f"✅ Reduced to {len(combo)} basis webs in {reducer.steps} rewrites")
    return combo_to_dict(combo)


def cmd_eval_classical(args):
    w = load_web(args.web)
    if args.config:
        with open(args.config) as f:
            config = Configuration.from_dict(json.load(f))
    else:
        config = random_configuration(w, make_rng(args.seed))
    result = {'configuration': config.to_dict(), 'value': str(eval_numeric(w, config))}
    if args.normal_form:
        combo = SkeinReducer(COMMUTATIVE).reduce(w)
        result['normal_form_value'] = str(eval_combo_numeric(combo, config))
    return result


def cmd_expand(args):
    expansion = EXPANSIONS[args.method](load_web(args.web))
    if args.format == 'json':
        return expansion.to_dict()
    return expansion_to_frame(expansion)


def cmd_coeff(args):
    w = unclasp(load_web(args.web))
    state = parse_state_string(args.state)
    coeff = coefficient_at(w, state)
    result = {'state': format_state(state), 'coeff': str(coeff), 'constant_term': int(coeff.constant_term())}
    if args.flows:
        result['weight_one_flows'] = len(weight_one_flows(w, state, limit=args.flows))
    if args.offset:
        result['disc_offset'] = disc_offset(w, state)
    return result


def cmd_dim(args):
    return {'signature': args.signature, 'dimension': dim_invariants(args.signature)}


def cmd_enumerate(args):
    catalog = enumerate_basis(args.signature, use_cache=not args.no_cache)
    if args.format == 'json':
        return catalog.to_dict()
    return catalog_summary(catalog)


def cmd_grow(args):
    w = growth_inverse(args.signature, parse_state_string(args.state))
    return web_to_dict(w)


def cmd_cheb(args):
    if args.action == 'monomial':
        return pd.DataFrame(monomial_report(args.k))
    if not args.web:
        raise MalformedInputError(f"cheb {args.action} needs a web")
    verify = verify_bracelet if args.action == 'verify-bracelet' else verify_band
    frame = verify(load_web(args.web), args.k)
    if not frame['equal'].all():
        failed = list(frame.loc[~frame['equal'], 'k'])
        logger.error(f"❌ {args.action} failed for k in {failed}")
        raise InvariantBreach(f"{args.action} identity fails for k in {failed}")
    if args.verbose:
        emit(frame, args.format)
    return "OK"


def cmd_redgraph(args):
    w = load_web(args.web)
    if args.action == 'reduce':
        return g_reduction_report(w, args.mode)
    graphs = exact_red_graphs(w, args.mode) if args.exact else enumerate_red_graphs(unclasp(w))
    return [g.to_dict() for g in graphs]


def cmd_canon(args):
    if args.action == 'prop13':
        return proposition_report(flows=args.flows, mode=args.mode)
    if not args.web:
        raise MalformedInputError("canon check needs a web")
    return negative_exponent_check(load_web(args.web), mode=args.mode).to_dict()


def cmd_render(args):
    w = load_web(args.web)
    text = to_svg(w) if args.to == 'svg' else to_dot(w, Path(args.web).stem.replace('-', '_') or 'web')
    if args.output:
        with open(args.output, 'w') as f:
            f.write(text)
        logger.info(f"✅ Wrote {args.output}")
        return {'output': args.output}
    return text


def cmd_bench(args):
    webs = {Path(p).stem: load_web(p) for p in args.webs}
    frame = run_bench(range(1, args.k + 1), args.strategies, webs)
    if args.output:
        frame.to_csv(args.output, index=False)
        logger.info(f"✅ Wrote {args.output}")
    return frame


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='SL(3) web calculus')
    parser.add_argument('--format', choices=['table', 'csv', 'json'], default='table', help='Output format')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging')
    parser.add_argument('--seed', type=int, default=None, help='Seed for randomized strategies and oracles')
    parser.add_argument('--jobs', type=int, default=None, help='Worker cap (overrides SL3WEB_JOBS)')
    sub = parser.add_subparsers(dest='verb', required=True)

    p = sub.add_parser('reduce', help='Reduce a diagram to non-elliptic webs')
    p.add_argument('web')
    p.add_argument('--mode', choices=MODES, default=COMMUTATIVE)
    p.add_argument('--trace', action='store_true', help='Log every rewrite as a JSON event')
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser('eval-classical', help='Evaluate at rational vectors and covectors')
    p.add_argument('web')
    p.add_argument('config', nargs='?', help='Configuration JSON; random when omitted')
    p.add_argument('--normal-form', action='store_true', help='Also evaluate the reduced combination')
    p.set_defaults(func=cmd_eval_classical)

    p = sub.add_parser('expand', help='Full tensor basis expansion')
    p.add_argument('web')
    p.add_argument('--method', choices=sorted(EXPANSIONS), default='contraction')
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser('coeff', help='Coefficient at one boundary state')
    p.add_argument('web')
    p.add_argument('--state', required=True)
    p.add_argument('--flows', type=int, default=0, help='Also list up to N weight-one flows')
    p.add_argument('--offset', action='store_true', help='Also report the disc offset 2U - E')
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser('dim', help='Dimension of the invariant space')
    p.add_argument('signature')
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser('enumerate', help='Non-elliptic basis of a signature')
    p.add_argument('signature')
    p.add_argument('--no-cache', action='store_true')
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser('grow', help='Basis web with a given dominant path')
    p.add_argument('signature')
    p.add_argument('--state', required=True)
    p.set_defaults(func=cmd_grow)

    p = sub.add_parser('cheb', help='Chebyshev identities')
    p.add_argument('action', choices=['verify-bracelet', 'verify-band', 'monomial'])
    p.add_argument('web', nargs='?')
    p.add_argument('--k', type=int, default=2)
    p.set_defaults(func=cmd_cheb)

    p = sub.add_parser('redgraph', help='Red graphs and G-reductions')
    p.add_argument('action', choices=['list', 'reduce'])
    p.add_argument('web')
    p.add_argument('--mode', choices=SEARCH_MODES, default=None)
    p.add_argument('--exact', action='store_true', help='Only exact red graphs')
    p.set_defaults(func=cmd_redgraph)

    p = sub.add_parser('canon', help='Dual canonical diagnostics')
    p.add_argument('action', choices=['check', 'prop13'])
    p.add_argument('web', nargs='?')
    p.add_argument('--mode', choices=SEARCH_MODES, default=None)
    p.add_argument('--flows', action='store_true', help='Exhibit the weight-one flows')
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser('render', help='SVG or DOT drawing')
    p.add_argument('web')
    p.add_argument('--to', choices=['svg', 'dot'], default='svg')
    p.add_argument('--output', '-o')
    p.set_defaults(func=cmd_render)

    p = sub.add_parser('bench', help='Time expansion strategies on thick_k')
    p.add_argument('--k', type=int, default=2)
    p.add_argument('--strategies', nargs='+', choices=sorted(STRATEGIES), default=None)
    p.add_argument('--webs', nargs='*', default=[], help='Extra webs to time')
    p.add_argument('--output', '-o', help='CSV file')
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: List[str] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    if args.jobs is not None:
        os.environ['SL3WEB_JOBS'] = str(args.jobs)
    if args.seed is not None:
        os.environ['SL3WEB_SEED'] = str(args.seed)

    try:
        result = args.func(args)
        if args.format == 'table' and not isinstance(result, str):
            print_header(f"📊 {args.verb}")
        emit(result, args.format)
        return 0
    except InvariantBreach as e:
        logger.error(f"❌ Internal invariant breach: {e}")
        return 2
    except (MalformedInputError, json.JSONDecodeError, OSError) as e:
        logger.error(f"❌ Malformed input: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
