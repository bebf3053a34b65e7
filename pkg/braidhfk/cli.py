#!/usr/bin/env python3
"""
Command line driver.

    braidhfk braid info '3: 1 -2 1'
    braidhfk braid floor '2: 1 1 1 1'
    braidhfk theta '2: -1' --axis --budget 8
    braidhfk fixture verify triple_identity --check corners
    braidhfk corpus run fdtc_floors --workers 4 --output out.csv

Results are JSON on stdout, diagnostics go to stderr. Exit codes: 0 ok,
1 input error, 2 resource error, 3 a check that must hold failed.
"""
import argparse
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from . import braidlab as BL
from . import constants as C
from . import gridfloer as GF
from . import run_cache as RC
from .braidlab import BraidWord
from .cfg import corpora
from .cfg.run_cfg import RunCfg, name2runcfg
from .errors import BraidHFKError, InputError, ResourceError, TheoremShadowViolation
from .obdiagrams import domains as DM
from .obdiagrams import fixture_format as FF
from .obdiagrams import identity_family as IF
from .obdiagrams import triples as TR
from .obdiagrams.diagram import CombinatorialDiagram, check, validate

logger = logging.getLogger(__name__)

CHECKS = ('valid', 'admissibility', 'uniqueness', 'splitting', 'corners')

PASS = 'pass'
FAIL = 'fail'
VIOLATION = 'violation'
SKIPPED = 'skipped'
RESOURCE = 'resource'
ERROR = 'error'
ROW_COLUMNS = ['row', 'input', 'status', 'verdict', 'floor', 'detail', 'wall_time_ms']


# braids

def braid_info(word: BraidWord, floor_kwargs: Optional[Dict] = None) -> dict:
    sl, per_component = GF.self_linking(word)
    out = {
        'schema_version': C.SCHEMA_VERSION,
        'input_word': word.format(),
        'strands': word.strands,
        'length': len(word),
        'free_reduced': BL.free_reduce(word).format(),
        'writhe': BL.writhe(word),
        'permutation': list(BL.permutation(word)),
        'components': BL.closure_components(word),
        'sl': sl,
        'sl_components': per_component,
    }
    if word.strands < 2:
        out.update({'floor': None, 'fdtc_interval': None})
        return out
    cert = BL.dehornoy_floor(word, **(floor_kwargs or {}))
    out['floor'] = cert.floor
    out.update(BL.fdtc_bounds(word, cert).as_dict())
    return out


def braid_floor(word: BraidWord, floor_kwargs: Optional[Dict] = None) -> dict:
    cert = BL.dehornoy_floor(word, **(floor_kwargs or {}))
    return {
        'schema_version': C.SCHEMA_VERSION,
        'input_word': word.format(),
        'floor': cert.floor,
        'lower_witness': cert.lower_witness.format(),
        'upper_witness': cert.upper_witness.format(),
        'verified': cert.verify(),
    }


def theta_record(word: BraidWord, axis: bool, grid_kwargs: Dict,
                 cache: Optional[RC.RunCache] = None) -> RC.RunRecord:
    params = dict(grid_kwargs, word=word.format(), axis=axis)
    return RC.cached_run(cache, 'theta', params,
                         lambda: GF.run_theta(word, axis=axis, **grid_kwargs).as_dict())


# fixtures

def resolve_fixture(target: str) -> CombinatorialDiagram:
    """A path, a shipped fixture name or an identity open book name."""
    if os.path.isfile(target):
        return FF.load(target)
    stem = os.path.splitext(os.path.basename(target))[0]
    params = IF.parse_identity_name(stem)
    if params is not None:
        return IF.build_identity_open_book_diagram(*params)
    shipped = os.path.join(C.FIXTURES_DIR, stem + '.hd')
    if os.path.isfile(shipped):
        return FF.load(shipped)
    raise InputError('no fixture {}'.format(target))


def verify_fixture(d: CombinatorialDiagram, which: str, fixture_kwargs: Optional[Dict] = None) -> dict:
    fixture_kwargs = fixture_kwargs or {}
    if which == 'valid':
        report = validate(d).as_dict()
    elif which == 'admissibility':
        check(d)
        witness = DM.nonnegative_periodic_domain(d)
        report = {'fixture': d.name, 'ok': witness is None,
                  'periodic_rank': len(DM.periodic_domains(d)),
                  'nonnegative_periodic_domain': witness.as_dict() if witness else None}
    elif which == 'uniqueness':
        report = IF.verify_unique_top_generator(check(d)).as_dict()
    elif which == 'splitting':
        report = IF.verify_top_splitting(check(d)).as_dict()
    elif which == 'corners':
        report = TR.corner_forcing_fixture(check(d), fixture_kwargs.get('bound')).as_dict()
    else:
        raise InputError('unknown check {!r}, expected one of {}'.format(which, ', '.join(CHECKS)))
    report['check'] = which
    report['schema_version'] = C.SCHEMA_VERSION
    return report


# corpora

def _verdict(word: BraidWord, axis: bool, grid_kwargs: Dict, cache) -> str:
    return theta_record(word, axis, grid_kwargs, cache).report['verdict']


def _check_row(kind: str, row: dict, run_cfg: RunCfg, grid_kwargs: Dict,
               cache) -> Tuple[str, str, Optional[int], str]:
    """(input, verdict, floor, violation message or '') for one corpus row."""
    if kind == corpora.FLOOR:
        w = BraidWord.parse(row['word'])
        floor = BL.dehornoy_floor(w, **run_cfg.get_floor_cfg()).floor
        v = _verdict(w, False, grid_kwargs, cache)
        bad = (floor >= 2 and v != GF.NONZERO) or (floor <= -2 and v != GF.ZERO)
        return w.format(), v, floor, 'floor {} with verdict {}'.format(floor, v) if bad else ''
    if kind == corpora.AXIS:
        w = BraidWord.parse(row['word'])
        v = _verdict(w, True, grid_kwargs, cache)
        return w.format(), v, None, 'axis verdict {}'.format(v) if v != GF.NONZERO else ''
    if kind == corpora.MULTIPLICATIVITY:
        g, h = BraidWord.parse(row['word_g']), BraidWord.parse(row['word_h'])
        text = '{} * {}'.format(h.format(), g.format())
        vg, vh = _verdict(g, False, grid_kwargs, cache), _verdict(h, False, grid_kwargs, cache)
        if vg != GF.NONZERO or vh != GF.NONZERO:
            return text, '{}/{}'.format(vg, vh), None, SKIPPED
        v = _verdict(BL.multiply(h, g), False, grid_kwargs, cache)
        return text, v, None, 'product verdict {}'.format(v) if v != GF.NONZERO else ''
    if kind == corpora.CONJUGATION:
        w, by = BraidWord.parse(row['word']), BraidWord.parse(row['by'])
        v, vc = _verdict(w, False, grid_kwargs, cache), _verdict(BL.conjugate(w, by), False, grid_kwargs, cache)
        bad = 'verdict {} but {} after conjugation'.format(v, vc) if v != vc else ''
        return w.format(), v, None, bad
    raise InputError('unknown corpus kind {!r}'.format(kind))


def evaluate_row(task) -> dict:
    """Runs in worker processes, so it only takes picklable arguments."""
    index, kind, row, cfg_name, cache_dir, grid_overrides = task
    run_cfg = name2runcfg[cfg_name]()
    grid_kwargs = dict(run_cfg.get_grid_cfg(), **grid_overrides)
    cache = RC.RunCache(cache_dir) if cache_dir else None
    start = time.perf_counter()
    out = {'row': index, 'input': ' | '.join(str(row.get(c, '')) for c in corpora.KIND_COLUMNS[kind]),
           'status': PASS, 'verdict': None, 'floor': None, 'detail': ''}
    try:
        text, verdict, floor, problem = _check_row(kind, row, run_cfg, grid_kwargs, cache)
        out.update({'input': text, 'verdict': verdict, 'floor': floor})
        expected = str(row.get('expected', '') or '').strip()
        expected_floor = str(row.get('floor', '') or '').strip()
        if problem == SKIPPED:
            out['status'] = SKIPPED
        elif problem:
            out.update({'status': VIOLATION, 'detail': problem})
        elif expected and expected != verdict:
            out.update({'status': FAIL, 'detail': 'expected {}'.format(expected)})
        elif expected_floor and floor is not None and int(expected_floor) != floor:
            out.update({'status': FAIL, 'detail': 'expected floor {}'.format(expected_floor)})
    except ResourceError as e:
        out.update({'status': RESOURCE, 'detail': str(e)})
    except BraidHFKError as e:
        out.update({'status': ERROR, 'detail': '{}: {}'.format(type(e).__name__, e)})
    out['wall_time_ms'] = int(round((time.perf_counter() - start) * 1000))
    return out


def load_corpus(target: str) -> Tuple[str, str, pd.DataFrame, Dict]:
    entry = corpora.name2corpus.get(target)
    if entry and 'build' in entry:
        df = entry['build']()
        return target, entry['kind'], df, dict(entry.get('grid_cfg', {}))
    path = entry['path'] if entry else target
    if not os.path.isfile(path):
        raise InputError('no corpus {}'.format(target))
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, comment='#', skipinitialspace=True)
    except pd.errors.EmptyDataError:
        df = pd.DataFrame()
    kind = entry['kind'] if entry else corpora.infer_kind(df.columns)
    missing = [c for c in corpora.KIND_COLUMNS[kind] if c not in df.columns]
    if missing and len(df):
        raise InputError('{}: {} corpus needs columns {}'.format(path, kind, ', '.join(missing)))
    name = target if entry else os.path.splitext(os.path.basename(path))[0]
    return name, kind, df, dict(entry.get('grid_cfg', {})) if entry else {}


def summarize(name: str, kind: str, frame: pd.DataFrame) -> dict:
    counts = frame['status'].value_counts()
    times = frame['wall_time_ms'].to_numpy(dtype=float)
    summary = {
        'schema_version': C.SCHEMA_VERSION,
        'corpus': name,
        'kind': kind,
        'rows': int(len(frame)),
        'violations': [],
    }
    for status in (PASS, FAIL, VIOLATION, SKIPPED, RESOURCE, ERROR):
        summary[status] = int(counts.get(status, 0))
    for _, r in frame[frame['status'] == VIOLATION].iterrows():
        summary['violations'].append({'row': int(r['row']), 'input': r['input'], 'detail': r['detail']})
    summary['wall_time_ms'] = {
        'p50': float(np.percentile(times, 50)) if len(times) else None,
        'p90': float(np.percentile(times, 90)) if len(times) else None,
        'max': float(times.max()) if len(times) else None,
    }
    return summary


def run_corpus(target: str, cfg_name: str = 'default', cache_dir: Optional[str] = None,
               workers: int = 1, verbose: bool = False) -> Tuple[pd.DataFrame, dict]:
    name, kind, df, grid_overrides = load_corpus(target)
    tasks = [(i, kind, rec, cfg_name, cache_dir, grid_overrides) for i, rec in enumerate(df.to_dict('records'))]
    logger.info('running %s corpus %s: %d rows on %d workers', kind, name, len(tasks), workers)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map keeps input order
            results = list(tqdm(pool.map(evaluate_row, tasks), total=len(tasks), disable=not verbose))
    else:
        results = [evaluate_row(t) for t in tqdm(tasks, disable=not verbose)]
    frame = pd.DataFrame(results, columns=ROW_COLUMNS)
    summary = summarize(name, kind, frame)
    for v in summary['violations']:
        logger.error('%s row %d (%s): %s', name, v['row'], v['input'], v['detail'])
    return frame, summary


# commands

def _cache(args, run_cfg: RunCfg) -> Optional[RC.RunCache]:
    cache_cfg = run_cfg.get_cache_cfg()
    if args.no_cache or not cache_cfg['enabled']:
        return None
    return RC.RunCache(RC.resolve_cache_dir(args.cache_dir or cache_cfg['cache_dir']))


def _emit(data: bytes) -> None:
    sys.stdout.write(data.decode('utf-8'))
    sys.stdout.flush()


def cmd_braid(args, run_cfg: RunCfg) -> int:
    word = BraidWord.parse(args.word)
    if args.action == 'info':
        report = braid_info(word, run_cfg.get_floor_cfg())
    else:
        report = braid_floor(word, run_cfg.get_floor_cfg())
    _emit(RC.encode_report(report))
    return C.EXIT_OK


def cmd_theta(args, run_cfg: RunCfg) -> int:
    word = BraidWord.parse(args.word)
    grid_kwargs = run_cfg.get_grid_cfg()
    if args.budget is not None:
        grid_kwargs['max_size'] = args.budget
    if args.max_window_states is not None:
        grid_kwargs['max_window_states'] = args.max_window_states
    record = theta_record(word, args.axis, grid_kwargs, _cache(args, run_cfg))
    if not args.picture:
        _emit(record.result)
        return C.EXIT_OK
    report = record.report
    target = BL.axis_augment(word) if args.axis else word
    report['grid'] = GF.grid_from_braid(target).ascii_picture().splitlines()
    _emit(RC.encode_report(report))
    return C.EXIT_OK


def cmd_fixture(args, run_cfg: RunCfg) -> int:
    fixture_kwargs = run_cfg.get_fixture_cfg()
    if args.bound is not None:
        fixture_kwargs['bound'] = args.bound
    report = verify_fixture(resolve_fixture(args.fixture), args.check, fixture_kwargs)
    _emit(RC.encode_report(report))
    if report['ok']:
        return C.EXIT_OK
    if args.check == 'valid':
        return C.EXIT_INPUT_ERROR
    raise TheoremShadowViolation('{} fails the {} check'.format(report.get('fixture', args.fixture), args.check))


def cmd_corpus(args, run_cfg: RunCfg) -> int:
    if args.action == 'list':
        _emit(RC.encode_report({k: {'path': v.get('path', 'generated'), 'kind': v['kind']}
                                for k, v in corpora.name2corpus.items()}))
        return C.EXIT_OK
    if args.corpus is None:
        raise InputError('corpus run needs a corpus name or CSV path')
    cache = _cache(args, run_cfg)
    frame, summary = run_corpus(args.corpus, args.cfg, cache.directory if cache else None,
                                args.workers, args.verbose)
    if args.output:
        frame.to_csv(args.output, index=False)
    _emit(RC.encode_report(summary))
    if summary['violations']:
        raise TheoremShadowViolation('{} violations in corpus {}'.format(len(summary['violations']), summary['corpus']))
    return C.EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', action='store_true', default=False)
    common.add_argument('--debug', action='store_true', default=False)
    common.add_argument('--no-cache', action='store_true', default=False)
    common.add_argument('--cache-dir', type=str, default=None,
                        help='defaults to ${} or {}'.format(C.CACHE_ENV_VAR, C.DEFAULT_CACHE_DIR))
    common.add_argument('--cfg', type=str, default='default', choices=sorted(name2runcfg))

    parser = argparse.ArgumentParser(prog='braidhfk', description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('braid', parents=[common])
    p.add_argument('action', choices=['info', 'floor'])
    p.add_argument('word', type=str)
    p.set_defaults(func=cmd_braid)

    p = sub.add_parser('theta', parents=[common])
    p.add_argument('word', type=str)
    p.add_argument('--axis', action='store_true', default=False)
    p.add_argument('--budget', type=int, default=None, help='largest grid size to build')
    p.add_argument('--max-window-states', type=int, default=None)
    p.add_argument('--picture', action='store_true', default=False, help='add the grid, top row first')
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser('fixture', parents=[common])
    p.add_argument('action', choices=['verify'])
    p.add_argument('fixture', type=str)
    p.add_argument('--check', type=str, default='valid', choices=CHECKS)
    p.add_argument('--bound', type=int, default=None)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser('corpus', parents=[common])
    p.add_argument('action', choices=['run', 'list'])
    p.add_argument('corpus', type=str, nargs='?', default=None)
    p.add_argument('--workers', type=int, default=1)
    p.add_argument('--output', type=str, default=None, help='CSV file for the per-row results')
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    run_cfg = name2runcfg[args.cfg]()
    try:
        return args.func(args, run_cfg)
    except ResourceError as e:
        _emit(RC.encode_report({'schema_version': C.SCHEMA_VERSION, 'error': 'resource',
                                'message': str(e), 'attempted': e.attempted, 'budget': e.budget}))
        sys.stderr.write('ResourceError: {}\n'.format(e))
        return e.exit_code
    except BraidHFKError as e:
        sys.stderr.write('{}: {}\n'.format(type(e).__name__, e))
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
