#!/usr/bin/env python3
"""
Command-line checks: verbs, output formats and exit statuses
Usage: python test_cli.py
"""

import io
import json
import sys
import tempfile
from contextlib import redirect_stdout
from pathlib import Path
sys.path.append(str(Path(__file__).parent))

from src.laurent import LaurentPoly
from src.webgraph import hexagon_web, web_to_json
from sl3web import main
from src.utils import setup_logging

logger = setup_logging()


def _run(argv):
    out = io.StringIO()
    with redirect_stdout(out):
        status = main(argv)
    return status, out.getvalue()


def test_dim_and_reduce():
    status, out = _run(['--format', 'json', 'dim', 'wbwb'])
    assert status == 0
    assert json.loads(out) == {'signature': 'wbwb', 'dimension': 2}
    status, out = _run(['--format', 'json', 'reduce', 'WxW'])
    assert status == 0
    terms = json.loads(out)['terms']
    assert len(terms) == 1
    assert terms[0]['coeff'] == str(LaurentPoly.one())


def test_expand_formats():
    status, out = _run(['--format', 'csv', 'expand', 'hexW'])
    assert status == 0
    assert out.splitlines()[0] == 'state,coefficient,terms,constant_term,min_exp,max_exp'
    status, out = _run(['--format', 'json', 'expand', 'hexW', '--method', 'flows'])
    assert status == 0
    assert json.loads(out)['signature']


def test_web_files_and_render():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / 'hex.json'
        path.write_text(web_to_json(hexagon_web()))
        status, out = _run(['render', str(path), '--to', 'dot'])
        assert status == 0
        assert out.startswith('graph hex')
        svg = Path(tmp) / 'hex.svg'
        status, _ = _run(['render', str(path), '-o', str(svg)])
        assert status == 0
        assert svg.read_text().lstrip().startswith('<svg')


def test_cheb_and_canon():
    status, out = _run(['cheb', 'verify-band', 'hexW', '--k', '2'])
    assert status == 0
    assert out.strip() == 'OK'
    status, out = _run(['--format', 'json', 'canon', 'check', 'hexW'])
    assert status == 0
    assert json.loads(out)['status'] == 'dual_canonical'


def test_bench_csv():
    status, out = _run(['--format', 'csv', 'bench', '--k', '1', '--strategies', 'contraction', 'flows'])
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == 'verb,input,strategy,wall_ms,states,flows'
    assert len(lines) == 3
    assert all(line.startswith('expand,thick1W,') for line in lines[1:])


def test_exit_statuses():
    assert _run(['reduce', 'no/such/web.json'])[0] == 1
    assert _run(['coeff', 'hexW', '--state', '1,2,3'])[0] == 1
    assert _run(['no-such-verb'])[0] == 1
    with tempfile.TemporaryDirectory() as tmp:
        bad = Path(tmp) / 'bad.json'
        bad.write_text('{not json')
        assert _run(['expand', str(bad)])[0] == 1


if __name__ == "__main__":
    test_dim_and_reduce()
    test_expand_formats()
    test_web_files_and_render()
    test_cheb_and_canon()
    test_bench_csv()
    test_exit_statuses()
    print("✅ CLI checks passed")
