"""
命令行入口

数据写到 stdout（JSON / CSV / JSON Lines），提示与错误写到 stderr。
退出码：0 成功；1 校验不一致；2 参数无效；3 超出穷举预算。
"""
import argparse
import csv
import io
import sys

import orjson

from .asymptotics import TARGETS, BoundsPair, bounds_report, build_target, convergence_report, get_residue
from .bilinear import dot_type, gram_from_json
from .cache import open_cache
from .census import census_entry, census_for_space, census_table
from .config import LOG_CONFIG, ORACLE_BUDGET_CONFIG, get_cache_path, get_residue_ladder
from .errors import BudgetExceeded, CensusError, InternalInconsistency, MaxRejectionsExceeded
from .gf import field_new
from .log_utils import setup_logger
from .oracle import OracleBudget
from .sampler import Sampler, sample_many, sample_record
from .verify import GRAM_KINDS, build_space, failure_matrix, run_checks, summarize
from .weights import aggregate_ell

logger = setup_logger('bilinear_census.cli')

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3


# =============================================================================
# 输出
# =============================================================================

def _emit_json(data):
    sys.stdout.buffer.write(orjson.dumps(data, option=orjson.OPT_INDENT_2) + b"\n")
    sys.stdout.flush()


def _emit_jsonl(records):
    for record in records:
        sys.stdout.buffer.write(orjson.dumps(record) + b"\n")
    sys.stdout.flush()


def _emit_csv(rows):
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    sys.stdout.write(buffer.getvalue())
    sys.stdout.flush()


def _parse_ladder(value: str) -> list:
    try:
        return [int(x) for x in value.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"ladder must be comma-separated integers, got {value!r}")


def _load_gram(path, q=None):
    with open(path, 'rb') as f:
        data = orjson.loads(f.read())
    if isinstance(data, dict) and q is not None:
        if 'q' in data and int(data['q']) != q:
            raise ValueError(f"--q {q} disagrees with q={data['q']} in {path}")
        data = {**data, 'q': q}
    elif isinstance(data, list):
        if q is None:
            raise ValueError("a bare Gram matrix needs --q")
        data = {'q': q, 'gram': data}
    return gram_from_json(data)


def _budget(args) -> OracleBudget:
    return OracleBudget.from_config(max_subspaces=args.budget, max_codewords=args.max_codewords)


# =============================================================================
# 子命令
# =============================================================================

def cmd_census(args) -> int:
    cache = open_cache(get_cache_path(args.cache))
    if args.gram:
        space = _load_gram(args.gram, args.q)
        entries = census_for_space(space, args.k, args.l, cache=cache)
    else:
        tag = args.type or dot_type(args.q, args.n)
        if args.l is None:
            entries = census_table(args.q, tag, args.n, args.k, cache=cache)
        else:
            entries = [census_entry(tag, args.n, args.k, args.l, args.q, cache=cache)]

    if args.format == 'csv':
        rows = [['q', 'type', 'n', 'k', 'l', 'count']]
        rows += [[str(e.q), e.type_tag.value, str(e.n), str(e.k), str(e.l), str(e.count)] for e in entries]
        _emit_csv(rows)
    else:
        _emit_json([e.to_json() for e in entries])
    return EXIT_OK


def cmd_weights(args) -> int:
    table = aggregate_ell(args.q, args.n, args.k, args.l)
    if args.format == 'csv':
        _emit_csv(table.to_csv_rows())
    else:
        _emit_json(table.to_json())
    return EXIT_OK


def cmd_asymptotics(args) -> int:
    residue = get_residue(args.residue)
    prediction, exact, description = build_target(
        args.target, residue, args.n, k=args.k, d=args.d, j=args.j, type_tag=args.type, w=args.w,
    )
    ladder = args.ladder or list(get_residue_ladder(residue.value))
    if isinstance(prediction, BoundsPair):
        report = bounds_report(exact, prediction, ladder, description, workers=args.workers)
        payload = {'prediction': prediction.to_json(), **report.to_json()}
    else:
        report = convergence_report(exact, prediction, ladder, description, workers=args.workers)
        payload = {'prediction': prediction.to_json(), **report.to_json()}
    _emit_json(payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.gram:
        space = _load_gram(args.gram, args.q)
    else:
        space = build_space(args.q, args.n, args.gram_kind)
    results = run_checks(space, _budget(args), args.workers, extended=not args.basic)
    summary = summarize(results)
    _emit_json({
        'q': space.field.q,
        'n': space.n,
        'type': space.type_tag.value,
        'summary': summary,
        'matrix': failure_matrix(results),
        'failures': [r.to_json() for r in results if r.status == 'fail'],
    })
    if not summary['ok']:
        print(f"verification failed: {summary['fail']} mismatches", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_sample(args) -> int:
    sampler = Sampler(seed=args.seed, max_rejections=args.max_rejections)
    _emit_jsonl(sample_record(c) for c in sample_many(args.q, args.n, args.k, args.l, args.count, sampler))
    return EXIT_OK


def cmd_classify(args) -> int:
    space = _load_gram(args.gram, args.q)
    _emit_json({
        'q': space.field.q,
        'n': space.n,
        'type': space.type_tag.value,
        'witt': space.witt,
        'discriminantSquare': space.discriminant_is_square(),
        'alternating': space.is_alternating(),
    })
    return EXIT_OK


COMMANDS = {
    'census': cmd_census,
    'weights': cmd_weights,
    'asymptotics': cmd_asymptotics,
    'verify': cmd_verify,
    'sample': cmd_sample,
    'classify': cmd_classify,
}


# =============================================================================
# 参数解析
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bilinear_census',
        description="有限双线性空间中 ℓ-互补子空间的精确计数、重量分布、渐近估计与穷举校验",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
使用示例:
  # σ_2(4,2,ℓ)，ℓ = 0..2
  python -m bilinear_census census --q 2 --n 4 --k 2

  # 总重量分布（CSV）
  python -m bilinear_census weights --q 2 --n 4 --k 2 --l 2 --format csv

  # 公式 vs 穷举，全部一致时退出码为 0
  python -m bilinear_census verify --q 2 --n 4 --workers 4

  # 渐近收敛报告
  python -m bilinear_census asymptotics --target so-density --type P --n 5 --k 2 --residue odd

注意：
  - 计数在 JSON 中一律输出为十进制字符串
  - 环境变量 BILINEAR_CENSUS_CACHE 优先于 --cache
        """
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--workers', type=int, default=None, help='oracle / 收敛报告使用的进程数')
    common.add_argument('--budget', type=int, default=None, help='单次穷举的子空间数上限')
    common.add_argument('--max-codewords', type=int, default=None, help='单个码的码字数上限')
    common.add_argument('--cache', default=None, help='σ 缓存文件（JSONL）')
    common.add_argument('--perf-log', action='store_true', help='写性能日志到 logs/running.log')
    common.add_argument('--progress', action='store_true', help='显示 oracle 进度条')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('census', parents=[common], help='σ(V,B,k,ℓ)')
    p.add_argument('--q', type=int, default=None)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--l', type=int, default=None, help='缺省时输出全部 ℓ')
    p.add_argument('--type', default=None, help='类型标签（P/H/E/N1/N0a/N0na），缺省为标准内积的类型')
    p.add_argument('--gram', default=None, help='Gram JSON 文件')
    p.add_argument('--format', choices=['json', 'csv'], default='json')

    p = sub.add_parser('weights', parents=[common], help='ℓ-互补码的总/平均重量分布')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--l', type=int, required=True)
    p.add_argument('--format', choices=['json', 'csv'], default='json')

    p = sub.add_parser('asymptotics', parents=[common], help='精确值 / 渐近预测的收敛报告')
    p.add_argument('--target', choices=TARGETS, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, default=None)
    p.add_argument('--d', type=int, default=None)
    p.add_argument('--j', type=int, default=None, help='重量下标（zeta / avg-weight）')
    p.add_argument('--w', type=int, default=None, help='tau 的 Witt 参数')
    p.add_argument('--type', default=None)
    p.add_argument('--residue', default='any')
    p.add_argument('--ladder', type=_parse_ladder, default=None, help='q 序列，如 3,5,7,9')

    p = sub.add_parser('verify', parents=[common], help='公式 vs 穷举 oracle')
    p.add_argument('--q', type=int, default=None)
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--gram', default=None, help='Gram JSON 文件，缺省用 --gram-kind')
    p.add_argument('--gram-kind', choices=GRAM_KINDS, default='dot')
    p.add_argument('--basic', action='store_true', help='只对照 σ、Witt 指数、递推与 ζ')

    p = sub.add_parser('sample', parents=[common], help='均匀随机采样，输出 JSON Lines')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--l', type=int, default=None, help='缺省时在全部 k 维子空间上采样')
    p.add_argument('--count', type=int, default=1)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--max-rejections', type=int, default=None)

    p = sub.add_parser('classify', parents=[common], help='Gram 矩阵的类型、判别式与 Witt 指数')
    p.add_argument('--gram', required=True)
    p.add_argument('--q', type=int, default=None)
    return parser


_TARGET_PARAMS = {
    'so-density': ('k',),
    'sigma': ('k',),
    'zeta': ('j',),
    'avg-weight': ('k', 'j'),
    'avg-weight-unrestricted': ('k', 'j'),
    'tau': ('k',),
    'non-mds': ('k', 'd'),
    'unrestricted-non-mds': ('k', 'd'),
}


def _validate(parser, args):
    """在分派计算之前检查参数组合"""
    if args.command == 'census' and not args.gram and (args.q is None or args.n is None):
        parser.error("census needs --q and --n, or --gram")
    if args.command == 'verify' and not args.gram and (args.q is None or args.n is None):
        parser.error("verify needs --q and --n, or --gram")
    if args.command == 'asymptotics':
        for name in _TARGET_PARAMS[args.target]:
            if getattr(args, name) is None:
                parser.error(f"--target {args.target} needs --{name}")
    if getattr(args, 'q', None) is not None:
        field_new(args.q)
    if args.command == 'sample' and args.count < 0:
        parser.error("--count must be non-negative")
    if args.workers is not None and args.workers < 1:
        parser.error("--workers must be positive")
    for name in ('budget', 'max_codewords'):
        value = getattr(args, name)
        if value is not None and value < 1:
            parser.error(f"--{name.replace('_', '-')} must be positive")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.perf_log:
        LOG_CONFIG['enable_performance_log'] = True
    if args.progress:
        ORACLE_BUDGET_CONFIG['show_progress'] = True

    try:
        _validate(parser, args)
        return COMMANDS[args.command](args)
    except BudgetExceeded as e:
        print(f"错误：{e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InternalInconsistency, MaxRejectionsExceeded) as e:
        print(f"错误：{e}", file=sys.stderr)
        return EXIT_MISMATCH
    except (CensusError, ValueError, OSError) as e:
        print(f"错误：{e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
