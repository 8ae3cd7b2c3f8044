#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
公式 vs 穷举 oracle 的全网格校验（多进程 + 断点续传）
- 网格：q ∈ {2,3,4,5}，n ≤ 6，外加 q=2, n=7；偶数 q、偶数 n 时再跑分块 Gram
- 重量分布 / 坐标相交等扩展检查只在 q ∈ {2,3} 上跑
- 每个网格点的 CheckResult 写入一个 JSONL 文件
- 支持断点续传（使用 SQLite 记录已完成的网格点）
- 超出穷举预算的网格点单独记录；网格不完整时退出码为 3
"""

import sys
import time
import sqlite3
import argparse
from pathlib import Path
from multiprocessing import Pool

import orjson
from tqdm import tqdm

# 添加项目根目录到路径
sys.path.insert(0, str(Path(__file__).parent.parent))
from bilinear_census.cli import EXIT_BUDGET, EXIT_MISMATCH, EXIT_OK
from bilinear_census.config import PROJECT_ROOT
from bilinear_census.errors import BudgetExceeded
from bilinear_census.log_utils import log_performance, setup_logger
from bilinear_census.verify import summarize, verify_point

# =============================================================================
# 配置参数
# =============================================================================

GRID_Q = (2, 3, 4, 5)
MAX_N = 6
EXTRA_POINTS = ((2, 7),)
EXTENDED_Q = (2, 3)          # 重量分布、坐标相交、σ̃ 只在小域上跑
NUM_WORKERS = 4
OUTPUT_DIR = PROJECT_ROOT / "results" / "verify_grid"
SQLITE_DB = PROJECT_ROOT / "results" / "verify_grid_progress.db"

logger = setup_logger('verify_grid', 'verify_grid.log')

# =============================================================================
# SQLite 进度管理
# =============================================================================


class GridProgressRecorder:
    """网格进度记录器（使用 SQLite）"""

    def __init__(self, db_path):
        Path(db_path).parent.mkdir(parents=True, exist_ok=True)
        self.conn = sqlite3.connect(str(db_path), check_same_thread=False)
        self._init_database()

    def _init_database(self):
        cursor = self.conn.cursor()
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS grid_progress (
                q INT NOT NULL,
                n INT NOT NULL,
                gram_kind TEXT NOT NULL,
                passed INT NOT NULL,
                failed INT NOT NULL,
                skipped INT NOT NULL,
                filename TEXT NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                PRIMARY KEY (q, n, gram_kind)
            )
        """)
        cursor.execute("""
            CREATE TABLE IF NOT EXISTS grid_skipped (
                q INT NOT NULL,
                n INT NOT NULL,
                gram_kind TEXT NOT NULL,
                reason TEXT NOT NULL,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                PRIMARY KEY (q, n, gram_kind)
            )
        """)
        self.conn.commit()

    def is_processed(self, q: int, n: int, gram_kind: str) -> bool:
        """检查网格点是否已完成"""
        cursor = self.conn.cursor()
        cursor.execute(
            "SELECT 1 FROM grid_progress WHERE q = ? AND n = ? AND gram_kind = ?",
            (q, n, gram_kind)
        )
        return cursor.fetchone() is not None

    def add_record(self, q: int, n: int, gram_kind: str, summary: dict, filename: str):
        """记录已完成的网格点"""
        cursor = self.conn.cursor()
        cursor.execute(
            "INSERT OR REPLACE INTO grid_progress (q, n, gram_kind, passed, failed, skipped, filename) "
            "VALUES (?, ?, ?, ?, ?, ?, ?)",
            (q, n, gram_kind, summary['pass'], summary['fail'], summary['skip'], filename)
        )
        cursor.execute(
            "DELETE FROM grid_skipped WHERE q = ? AND n = ? AND gram_kind = ?",
            (q, n, gram_kind)
        )
        self.conn.commit()

    def add_skipped(self, q: int, n: int, gram_kind: str, reason: str):
        """记录因超出穷举预算而跳过的网格点（不算已完成，下次会重试）"""
        cursor = self.conn.cursor()
        cursor.execute(
            "INSERT OR REPLACE INTO grid_skipped (q, n, gram_kind, reason) VALUES (?, ?, ?, ?)",
            (q, n, gram_kind, reason)
        )
        self.conn.commit()

    def skipped_points(self) -> list:
        cursor = self.conn.cursor()
        cursor.execute("SELECT q, n, gram_kind, reason FROM grid_skipped ORDER BY q, n")
        return cursor.fetchall()

    def failed_points(self) -> list:
        cursor = self.conn.cursor()
        cursor.execute("SELECT q, n, gram_kind, failed FROM grid_progress WHERE failed > 0 ORDER BY q, n")
        return cursor.fetchall()

    def close(self):
        self.conn.close()

# =============================================================================
# 网格
# =============================================================================


def grid_points(max_n: int = MAX_N) -> list:
    """(q, n, gram_kind) 列表，按规模从小到大"""
    points = []
    for q in GRID_Q:
        for n in range(1, max_n + 1):
            points.append((q, n, 'dot'))
            if q % 2 == 0 and n % 2 == 0:
                points.append((q, n, 'alternating'))
    for q, n in EXTRA_POINTS:
        points.append((q, n, 'dot'))
    return sorted(points, key=lambda p: (p[0] ** p[1], p))


def run_point(point):
    """Worker：跑一个网格点，写 JSONL，返回 (point, summary, filename, elapsed, reason)"""
    q, n, gram_kind = point
    t0 = time.time()
    try:
        results = verify_point(q, n, gram_kind, extended=q in EXTENDED_Q)
    except BudgetExceeded as e:
        logger.warning(f"跳过 q={q} n={n} {gram_kind}: {e}")
        return point, None, None, time.time() - t0, str(e)

    filename = OUTPUT_DIR / f"q{q}_n{n}_{gram_kind}.jsonl"
    filename.parent.mkdir(parents=True, exist_ok=True)
    with open(filename, 'wb') as f:
        for r in results:
            f.write(orjson.dumps(r.to_json()) + b"\n")
    return point, summarize(results), str(filename), time.time() - t0, None


def final_status(recorder: GridProgressRecorder) -> int:
    """
    打印结果汇总并给出退出码

    有不一致返回 1；没有不一致但有网格点因预算被跳过返回 3（网格不完整）；否则 0。
    """
    failed = recorder.failed_points()
    skipped = recorder.skipped_points()

    if failed:
        print(f"✗ {len(failed)} 个网格点存在不一致:")
        for q, n, gram_kind, count in failed:
            print(f"  q={q} n={n} {gram_kind}: {count}")
    if skipped:
        print(f"⚠️  {len(skipped)} 个网格点超出穷举预算，未校验:")
        for q, n, gram_kind, reason in skipped:
            print(f"  q={q} n={n} {gram_kind}: {reason}")

    if failed:
        return EXIT_MISMATCH
    if skipped:
        return EXIT_BUDGET
    print("✓ 全部一致")
    return EXIT_OK


def main():
    parser = argparse.ArgumentParser(description="公式 vs 穷举 oracle 的全网格校验")
    parser.add_argument('--workers', type=int, default=NUM_WORKERS, help='worker 进程数')
    parser.add_argument('--max-n', type=int, default=MAX_N, help='n 的上限')
    parser.add_argument('--restart', action='store_true', help='忽略已有进度，全部重跑')
    args = parser.parse_args()

    recorder = GridProgressRecorder(SQLITE_DB)
    points = grid_points(args.max_n)
    if not args.restart:
        points = [p for p in points if not recorder.is_processed(*p)]

    print("=" * 80)
    print("公式 vs 穷举 oracle 全网格校验")
    print("=" * 80)
    print(f"Worker进程数: {args.workers}")
    print(f"待处理网格点: {len(points)}")
    print(f"输出目录: {OUTPUT_DIR}")
    print(f"SQLite进度库: {SQLITE_DB}")
    print("=" * 80)

    overall_start = time.time()
    try:
        with Pool(processes=args.workers) as pool:
            for point, summary, filename, elapsed, reason in tqdm(pool.imap_unordered(run_point, points),
                                                                  total=len(points), desc="grid"):
                if summary is None:
                    recorder.add_skipped(*point, reason)
                    tqdm.write(f"⚠️  q={point[0]} n={point[1]} {point[2]}: 超出预算，已跳过")
                    continue
                recorder.add_record(*point, summary, filename)
                log_performance("verify_grid", point=point, elapsed=f"{elapsed:.2f}s", **summary)
                if not summary['ok']:
                    tqdm.write(f"✗ q={point[0]} n={point[1]} {point[2]}: {summary['fail']} 项不一致")
    except KeyboardInterrupt:
        print("\n⚠️  用户中断处理，已完成的网格点会在下次运行时跳过")

    print("\n" + "=" * 80)
    print(f"耗时: {time.time() - overall_start:.1f} 秒")
    status = final_status(recorder)
    print("=" * 80)
    recorder.close()
    sys.exit(status)


if __name__ == '__main__':
    main()
