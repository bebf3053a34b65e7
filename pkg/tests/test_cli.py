import json
import os

import pytest

from braidhfk import cli
from braidhfk import constants as C
from braidhfk import run_cache as RC
from braidhfk.errors import UnsupportedError


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_csv(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_braid_info_identity(capsys):
    code, out, _ = run(capsys, 'braid', 'info', '2: ')
    report = json.loads(out)
    assert code == C.EXIT_OK
    assert (report['writhe'], report['floor'], report['components']) == (0, 0, 2)
    assert report['fdtc_interval'] == [0, 1]
    assert report['free_reduced'] == '2: '


def test_braid_info_reports_the_twist_interval(capsys):
    code, out, _ = run(capsys, 'braid', 'info', '3: 1 1 1 1 1 1 1 1')
    report = json.loads(out)
    assert code == C.EXIT_OK
    lo, hi = report['fdtc_interval']
    assert hi == lo + 1 == report['floor'] + 1
    assert report['components'] == 3


def test_bad_word_names_the_token(capsys):
    code, out, err = run(capsys, 'braid', 'info', '2: 5')
    assert code == C.EXIT_INPUT_ERROR
    assert out == ''
    assert 'index-out-of-range' in err


def test_braid_floor(capsys):
    code, out, _ = run(capsys, 'braid', 'floor', '2: 1 1 1 1')
    report = json.loads(out)
    assert (code, report['floor'], report['verified']) == (0, 2, True)


@pytest.mark.parametrize('argv, verdict', [
    (['2: 1 1 1'], 'nonzero'),
    (['2: -1 -1 -1'], 'zero'),
    (['2: -1', '--axis'], 'nonzero'),
])
def test_theta_verdicts(capsys, argv, verdict):
    code, out, _ = run(capsys, 'theta', *argv, '--no-cache')
    assert code == C.EXIT_OK
    assert json.loads(out)['verdict'] == verdict


def test_theta_cache_hit_is_byte_identical(capsys, tmp_path):
    cache_dir = str(tmp_path / 'cache')
    _, first, _ = run(capsys, 'theta', '2: 1 -1 1', '--cache-dir', cache_dir)
    _, second, _ = run(capsys, 'theta', '2: 1 -1 1', '--cache-dir', cache_dir)
    assert first == second
    key = RC.cache_key('theta', dict(cli.name2runcfg['default']().get_grid_cfg(), word='2: 1 -1 1', axis=False))
    assert os.path.isfile(RC.RunCache(cache_dir).path(key))
    _, fresh, _ = run(capsys, 'theta', '2: 1 -1 1', '--no-cache')
    assert RC.same_result(first.encode(), fresh.encode())[0]


def test_theta_env_cache_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(C.CACHE_ENV_VAR, str(tmp_path))
    run(capsys, 'theta', '2: 1')
    assert any(name.endswith('.json') for _, _, files in os.walk(str(tmp_path)) for name in files)


def test_theta_budget_is_a_resource_error(capsys):
    code, out, err = run(capsys, 'theta', '3: 1 2 1 2 1 2 1 2', '--budget', '6', '--no-cache')
    assert code == C.EXIT_RESOURCE_ERROR
    report = json.loads(out)
    assert report['error'] == 'resource'
    assert report['budget'] == 6
    assert 'ResourceError' in err


@pytest.mark.parametrize('fixture, check', [
    ('triple_identity', 'valid'),
    ('triple_identity', 'admissibility'),
    ('triple_identity', 'corners'),
    ('identity_g1_n1_k0', 'uniqueness'),
    ('identity_g0_n1_k0', 'uniqueness'),
    ('identity_g0_n2_k1', 'splitting'),
    ('torus_unknot.hd', 'admissibility'),
])
def test_fixture_checks_pass(capsys, fixture, check):
    code, out, _ = run(capsys, 'fixture', 'verify', fixture, '--check', check)
    report = json.loads(out)
    assert code == C.EXIT_OK, report
    assert report['ok'] and report['check'] == check


def test_fixture_path_argument(capsys):
    path = os.path.join(C.FIXTURES_DIR, 'torus_unknot_augmented.hd')
    code, out, _ = run(capsys, 'fixture', 'verify', path, '--check', 'admissibility')
    report = json.loads(out)
    assert code == C.EXIT_THEOREM_SHADOW
    assert report['nonnegative_periodic_domain'] is not None


def test_corrupted_fixture_names_the_region(capsys):
    code, out, _ = run(capsys, 'fixture', 'verify', 'broken_region', '--check', 'valid')
    report = json.loads(out)
    assert code == C.EXIT_INPUT_ERROR
    assert not report['ok']
    assert any('R1' in p for p in report['problems'])


def test_unblocked_triple_fails_admissibility(capsys):
    code, _, err = run(capsys, 'fixture', 'verify', 'triple_identity_unblocked', '--check', 'admissibility')
    assert code == C.EXIT_THEOREM_SHADOW
    assert 'TheoremShadowViolation' in err


def test_fixture_errors(capsys, tmp_path):
    code, _, err = run(capsys, 'fixture', 'verify', 'no_such_fixture')
    assert code == C.EXIT_INPUT_ERROR and 'no_such_fixture' in err
    bad = write_csv(tmp_path, 'bad.hd', 'curve α1 : a\ncurve β1 : a\nsign + : a\nfrobnicate\n')
    code, _, err = run(capsys, 'fixture', 'verify', bad)
    assert code == C.EXIT_INPUT_ERROR and 'bad.hd:4' in err
    bare = write_csv(tmp_path, 'bare.hd', 'curve α1 : a\ncurve β1 : a\nsign + : a\n')
    code, _, err = run(capsys, 'fixture', 'verify', bare, '--check', 'admissibility')
    assert code == C.EXIT_INPUT_ERROR and 'region' in err
    code, _, _ = run(capsys, 'fixture', 'verify', 'identity_g2_n1_k0')
    assert code == C.EXIT_INPUT_ERROR


def test_empty_corpus(capsys, tmp_path):
    path = write_csv(tmp_path, 'empty.csv', 'word\n')
    code, out, _ = run(capsys, 'corpus', 'run', path, '--no-cache')
    summary = json.loads(out)
    assert code == C.EXIT_OK
    assert summary['rows'] == 0 and summary['violations'] == []
    assert summary['wall_time_ms']['p50'] is None


def test_floor_corpus(capsys, tmp_path):
    path = write_csv(tmp_path, 'small.csv',
                     'word,expected,floor\n2: 1 1 1 1,nonzero,2\n2: -1 -1 -1 -1,zero,-2\n2: 1,zero,\n2: 5,,\n')
    out_csv = str(tmp_path / 'rows.csv')
    code, out, _ = run(capsys, 'corpus', 'run', path, '--no-cache', '--output', out_csv)
    summary = json.loads(out)
    assert code == C.EXIT_OK
    assert (summary['rows'], summary['pass'], summary['fail'], summary['error']) == (4, 2, 1, 1)
    rows = open(out_csv, encoding='utf-8').read().splitlines()
    assert rows[0].split(',') == cli.ROW_COLUMNS
    assert len(rows) == 5


def test_wrong_floor_is_a_failure(capsys, tmp_path):
    path = write_csv(tmp_path, 'floors.csv', 'word,floor\n2: 1 1 1,2\n')
    _, out, _ = run(capsys, 'corpus', 'run', path, '--no-cache')
    assert json.loads(out)['fail'] == 1


def test_worker_count_does_not_change_results(capsys, tmp_path):
    path = write_csv(tmp_path, 'pairs.csv', 'word_g,word_h\n2: 1,2: 1 1\n2: -1,2: 1\n3: 1,3: 2\n')
    _, one, _ = run(capsys, 'corpus', 'run', path, '--no-cache', '--workers', '1')
    _, two, _ = run(capsys, 'corpus', 'run', path, '--no-cache', '--workers', '2')
    assert RC.same_result(one.encode(), two.encode())[0]
    summary = json.loads(one)
    assert summary['kind'] == 'multiplicativity'
    assert (summary['pass'], summary['skipped']) == (2, 1)


def test_cache_does_not_change_verdicts(capsys, tmp_path):
    path = write_csv(tmp_path, 'conj.csv', 'word,by\n2: 1 1,2: 1\n2: -1,2: 1\n')
    cache_dir = str(tmp_path / 'cache')
    _, cold, _ = run(capsys, 'corpus', 'run', path, '--cache-dir', cache_dir)
    _, warm, _ = run(capsys, 'corpus', 'run', path, '--cache-dir', cache_dir)
    _, off, _ = run(capsys, 'corpus', 'run', path, '--no-cache')
    assert RC.same_result(cold.encode(), warm.encode())[0]
    assert RC.same_result(cold.encode(), off.encode())[0]


def test_row_errors_do_not_stop_the_run(capsys, tmp_path, monkeypatch):
    def no_routing(word, **kwargs):
        raise UnsupportedError('no closure routing found for {}'.format(word.format()))

    monkeypatch.setattr(cli.GF, 'run_theta', no_routing)
    path = write_csv(tmp_path, 'rows.csv', 'word\n2: 1\n2: 1 1 1\n')
    out_csv = str(tmp_path / 'out.csv')
    code, out, _ = run(capsys, 'corpus', 'run', path, '--no-cache', '--output', out_csv)
    summary = json.loads(out)
    assert code == C.EXIT_OK
    assert (summary['rows'], summary['error']) == (2, 2)
    assert 'UnsupportedError' in open(out_csv, encoding='utf-8').read()


def test_conjugates_corpus_caps_the_window():
    grid_cfg = cli.corpora.name2corpus['conjugates']['grid_cfg']
    assert grid_cfg['max_size'] <= 10
    assert grid_cfg['max_window_states'] < cli.name2runcfg['default']().get_grid_cfg()['max_window_states']


def test_corpus_list(capsys):
    code, out, _ = run(capsys, 'corpus', 'list')
    assert code == C.EXIT_OK
    assert set(json.loads(out)) == set(cli.corpora.name2corpus)


def test_theta_picture(capsys):
    code, out, _ = run(capsys, 'theta', '2: 1', '--picture', '--no-cache')
    assert code == C.EXIT_OK
    report = json.loads(out)
    assert report['grid'] == ['. O X', 'O X .', 'X . O']
    assert report['N'] == 3
    code, out, _ = run(capsys, 'theta', '2: 1', '--no-cache')
    assert 'grid' not in json.loads(out)


def test_generated_corpus_loads(capsys):
    name, kind, df, grid_cfg = cli.load_corpus('multiplicativity_random')
    assert (name, kind) == ('multiplicativity_random', cli.corpora.MULTIPLICATIVITY)
    assert len(df) >= 50
    assert grid_cfg['max_size'] == 10
    _, out, _ = run(capsys, 'corpus', 'list')
    assert json.loads(out)['multiplicativity_random']['path'] == 'generated'


def test_corpus_run_needs_a_corpus(capsys):
    code, _, _ = run(capsys, 'corpus', 'run', '--no-cache')
    assert code == C.EXIT_INPUT_ERROR


@pytest.mark.slow
@pytest.mark.parametrize('name', ['fdtc_floors', 'multiplicativity', 'multiplicativity_random', 'axis', 'conjugates'])
def test_shipped_corpora_pass(capsys, name):
    code, out, _ = run(capsys, 'corpus', 'run', name, '--no-cache', '--workers', '4')
    summary = json.loads(out)
    assert code == C.EXIT_OK
    assert summary['violations'] == []
    assert summary['fail'] == summary['error'] == summary['resource'] == 0
