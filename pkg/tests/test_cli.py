import orjson
import pytest

from bilinear_census.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_OK, main


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.delenv('BILINEAR_CENSUS_CACHE', raising=False)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_census_json(capsys):
    code, out = _run(capsys, ['census', '--q', '2', '--n', '4', '--k', '2'])
    assert code == EXIT_OK
    entries = orjson.loads(out)
    assert [e['count'] for e in entries] == ['20', '12', '3']
    assert {e['type'] for e in entries} == {'N0na'}


def test_census_single_ell_csv(capsys):
    code, out = _run(capsys, ['census', '--q', '3', '--n', '4', '--k', '1', '--l', '1', '--format', 'csv'])
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == 'q,type,n,k,l,count'
    assert lines[1].split(',')[-1] == '16'


def test_census_from_gram_file(capsys, tmp_path):
    path = tmp_path / 'dot4.json'
    path.write_bytes(orjson.dumps({'q': 2, 'gram': [[int(i == j) for j in range(4)] for i in range(4)]}))
    code, out = _run(capsys, ['census', '--gram', str(path), '--k', '2', '--l', '2'])
    assert code == EXIT_OK
    assert orjson.loads(out)[0]['count'] == '3'


def test_classify(capsys, tmp_path):
    path = tmp_path / 'identity4.json'
    path.write_bytes(orjson.dumps({'q': 2, 'gram': [[int(i == j) for j in range(4)] for i in range(4)]}))
    code, out = _run(capsys, ['classify', '--gram', str(path)])
    assert code == EXIT_OK
    info = orjson.loads(out)
    assert info['type'] == 'N0na'
    assert info['witt'] == 2
    assert info['discriminantSquare'] is True
    assert info['alternating'] is False


def test_weights_csv(capsys):
    code, out = _run(capsys, ['weights', '--q', '2', '--n', '4', '--k', '2', '--l', '2', '--format', 'csv'])
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == 'i,aggregate,average_num,average_den'
    assert [line.split(',')[1] for line in lines[1:]] == ['3', '0', '6', '0', '3']


def test_verify_passes(capsys):
    code, out = _run(capsys, ['verify', '--q', '2', '--n', '3'])
    assert code == EXIT_OK
    report = orjson.loads(out)
    assert report['summary']['ok'] is True
    assert report['failures'] == []


def test_verify_budget_exceeded(capsys):
    code, _ = _run(capsys, ['verify', '--q', '2', '--n', '4', '--budget', '5'])
    assert code == EXIT_BUDGET


def test_sample_reproducible(capsys):
    argv = ['sample', '--q', '3', '--n', '4', '--k', '1', '--l', '1', '--count', '5', '--seed', '42']
    code, first = _run(capsys, argv)
    assert code == EXIT_OK
    _, second = _run(capsys, argv)
    assert first == second
    records = [orjson.loads(line) for line in first.splitlines()]
    assert len(records) == 5
    assert all(r['q'] == 3 and len(r['generator']) == 1 for r in records)


def test_asymptotics_report(capsys):
    code, out = _run(capsys, ['asymptotics', '--target', 'so-density', '--type', 'P', '--n', '5', '--k', '2',
                              '--residue', 'odd', '--ladder', '3,5,7'])
    assert code == EXIT_OK
    payload = orjson.loads(out)
    assert {'prediction', 'parameter', 'samples', 'verdict'} <= set(payload)
    assert len(payload['samples']) == 3


def test_invalid_field_size(capsys):
    code = main(['census', '--q', '6', '--n', '4', '--k', '2'])
    captured = capsys.readouterr()
    assert code == EXIT_INVALID
    assert captured.out == ''
    assert '错误' in captured.err


def test_missing_arguments():
    with pytest.raises(SystemExit) as info:
        main(['census'])
    assert info.value.code == 2


def test_cache_env_var(capsys, monkeypatch, tmp_path):
    cache = tmp_path / 'sigma.jsonl'
    monkeypatch.setenv('BILINEAR_CENSUS_CACHE', str(cache))
    argv = ['census', '--q', '2', '--n', '6', '--k', '2']
    _, cold = _run(capsys, argv)
    assert cache.exists()
    _, warm = _run(capsys, argv)
    assert cold == warm
    assert orjson.loads(warm)[2]['count'] == '75'
