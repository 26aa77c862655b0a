import io
import json

import pandas as pd
import pytest

import integra.__main__ as cli
from conftest import fixture_file
from integra.__main__ import EXIT_ERROR, main
from integra.core.base.tools import read_config
from integra.core.market import Side
from integra.core.market_file import load_market


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve(capsys):
    code, out, _ = run(capsys, 'solve', '--market-file', fixture_file('prop1_2x2'))
    assert code == 0
    result = json.loads(out)
    assert result['population'] == '{0,1}'
    assert result['matching'] == [['0.m.0', '1.w.0'], ['1.m.0', '0.w.0']]
    assert result['total_proposals'] == 3


def test_solve_one_community(capsys):
    _, out, _ = run(capsys, 'solve', '--market-file', fixture_file('prop1_2x2'), '--population', '1')
    assert json.loads(out)['matching'] == [['1.m.0', '1.w.0']]


def test_verify(capsys):
    code, out, _ = run(capsys, 'verify', '--market-file', fixture_file('prop1_2x2'))
    assert code == 0
    report = json.loads(out)
    assert report['stable']['holds'] is True
    assert report['wim']['holds'] is False
    assert '0.m.0' in report['wim']['witness']
    assert report['hurt_partition']['frac_worse'] == 0.5
    assert report['hurt_partition']['rescue_violations'] == []


def test_gen_writes_a_market(tmp_path, capsys):
    path = tmp_path / 'market.mkt'
    code, _, _ = run(capsys, 'gen', '--n', '3', '--kappa', '2', '--rho', '0.5', '--seed', '4', '--out', str(path))
    assert code == 0
    market = load_market(str(path))
    assert market.kappa == 2
    assert market.count(Side.MAN) == 6


def test_errors_exit_with_json(capsys):
    code, out, err = run(capsys, 'solve', '--market-file', 'no_such_file.mkt')
    assert code == EXIT_ERROR
    assert out == ''
    assert json.loads(err.strip().splitlines()[-1])['error'] == 'InvalidArgumentError'


def test_bad_arguments_are_rejected(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['table1', '--runs', '0'])
    assert excinfo.value.code == EXIT_ERROR
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error['error'] == 'InvalidArgumentError'
    assert '--runs' in error['message']


def test_non_utf8_market_file(tmp_path, capsys):
    path = tmp_path / 'bad.mkt'
    path.write_bytes(b'2 1x1 1x1\n0 m 0 : 0.0 1.0 \xff\xfe\n')
    code, out, err = run(capsys, 'solve', '--market-file', str(path))
    assert code == EXIT_ERROR
    assert out == ''
    assert json.loads(err.strip().splitlines()[-1])['error'] == 'MarketFormatError'


def test_output_into_a_missing_directory(tmp_path, capsys):
    out = tmp_path / 'missing' / 'market.mkt'
    code, _, err = run(capsys, 'gen', '--n', '2', '--kappa', '2', '--out', str(out))
    assert code == EXIT_ERROR
    assert json.loads(err.strip().splitlines()[-1])['error'] == 'InvalidArgumentError'
    code, _, err = run(capsys, 'table1', '--n', '4', '--kappa', '2', '--runs', '1', '--workers', '1',
                       '--out', str(tmp_path / 'missing' / 'table1.csv'))
    assert code == EXIT_ERROR
    assert 'cannot write' in err


def test_campaign_to_stdout(capsys):
    code, out, _ = run(capsys, 'table1', '--n', '4', '--kappa', '2', '--runs', '3', '--workers', '1')
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith('schema,cell,n,kappa,rho,swaps')
    assert len(lines) == 2


def test_campaign_to_file(tmp_path, capsys):
    out = tmp_path / 'table2.jsonl'
    code, _, _ = run(capsys, 'table2', '--n', '4', '--kappa', '2,3', '--runs', '2', '--out', str(out))
    assert code == 0
    frame = pd.read_json(out, lines=True)
    assert frame['kappa'].tolist() == [2, 3]
    assert 'mean_loss_men_mean' in frame.columns


def test_nc_needs_a_file(capsys):
    code, _, err = run(capsys, 'table1', '--runs', '1', '--format', 'nc')
    assert code == EXIT_ERROR
    assert 'nc' in err


def test_output_settings_of_the_config(tmp_path, capsys, monkeypatch):
    general = dict(read_config()[0])
    general['output'] = {'format': 'json', 'directory': str(tmp_path), 'store_config': True}
    monkeypatch.setattr(cli, 'read_config', lambda: (general, 'integra_config.yml'))
    code, _, _ = run(capsys, 'table1', '--n', '4', '--kappa', '2', '--runs', '2', '--workers', '1',
                     '--out', 'table1.out', '--records', 'runs.out')
    assert code == 0
    assert pd.read_json(tmp_path / 'table1.out', lines=True)['runs'].tolist() == [2]
    assert len(pd.read_json(tmp_path / 'runs.out', lines=True)) == 2
    assert (tmp_path / 'table1.yml').is_file()


def test_campaign_swap_mode(capsys):
    code, out, _ = run(capsys, 'table3', '--n', '4', '--kappa', '2', '--rho', '0.5', '--runs', '2',
                       '--workers', '1', '--swap-mode', 'overlapping', '--format', 'json')
    assert code == 0
    assert pd.read_json(io.StringIO(out), lines=True)['swaps'].tolist() == [4]
