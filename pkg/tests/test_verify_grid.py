import importlib.util
from pathlib import Path

import pytest

from bilinear_census.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK
from bilinear_census.errors import BudgetExceeded

SCRIPT = Path(__file__).parent.parent / "scripts" / "verify_grid.py"


@pytest.fixture(scope="module")
def verify_grid():
    spec = importlib.util.spec_from_file_location("verify_grid", SCRIPT)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture
def recorder(verify_grid, tmp_path):
    rec = verify_grid.GridProgressRecorder(tmp_path / "progress.db")
    yield rec
    rec.close()


OK_SUMMARY = {'pass': 10, 'fail': 0, 'skip': 0, 'ok': True}


def test_complete_grid_succeeds(verify_grid, recorder):
    recorder.add_record(2, 3, 'dot', OK_SUMMARY, 'q2_n3_dot.jsonl')
    assert recorder.is_processed(2, 3, 'dot')
    assert verify_grid.final_status(recorder) == EXIT_OK


def test_skipped_point_blocks_success(verify_grid, recorder, capsys):
    recorder.add_record(2, 3, 'dot', OK_SUMMARY, 'q2_n3_dot.jsonl')
    recorder.add_skipped(5, 6, 'dot', 'subspace enumeration over budget')
    assert not recorder.is_processed(5, 6, 'dot')
    assert verify_grid.final_status(recorder) == EXIT_BUDGET
    out = capsys.readouterr().out
    assert 'q=5 n=6 dot' in out
    assert '全部一致' not in out


def test_mismatch_takes_precedence(verify_grid, recorder):
    recorder.add_skipped(5, 6, 'dot', 'over budget')
    recorder.add_record(2, 4, 'dot', {'pass': 3, 'fail': 1, 'skip': 0, 'ok': False}, 'q2_n4_dot.jsonl')
    assert verify_grid.final_status(recorder) == EXIT_MISMATCH


def test_later_success_clears_skip(verify_grid, recorder):
    recorder.add_skipped(5, 6, 'dot', 'over budget')
    recorder.add_record(5, 6, 'dot', OK_SUMMARY, 'q5_n6_dot.jsonl')
    assert recorder.skipped_points() == []
    assert verify_grid.final_status(recorder) == EXIT_OK


def test_run_point_reports_budget_skip(verify_grid, monkeypatch):
    def over_budget(q, n, gram_kind, extended):
        raise BudgetExceeded("subspace enumeration", 10 ** 9, 10 ** 8, q=q, n=n)

    monkeypatch.setattr(verify_grid, 'verify_point', over_budget)
    point, summary, filename, _, reason = verify_grid.run_point((5, 6, 'dot'))
    assert point == (5, 6, 'dot')
    assert summary is None and filename is None
    assert 'subspace enumeration' in reason
