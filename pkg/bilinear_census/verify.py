"""
公式 vs oracle 校验

对一个 (q, n, Gram) 点跑完整的对照表，每项返回一条 CheckResult。
cli verify、scripts/verify_grid.py 与测试共用这里的检查。
"""
import itertools
from dataclasses import dataclass

from .bilinear import BilinearSpace, TypeTag, alternating_block_space, is_dot_space, standard_dot_space
from .census import (
    count_alternating_induced,
    count_so_containing,
    count_so_meeting_coordinate,
    cumulative_radical_dim,
    gaussian_binomial,
    sigma_ell,
    sigma_so,
    sigma_so_recursive,
)
from .gf import field_new
from .linalg import Subspace, all_one_vector, contains, iter_rref_blocks
from .log_utils import setup_logger
from .oracle import (
    _budget,
    _so_only,
    oracle_aggregate_profile,
    oracle_count_alternating_induced,
    oracle_count_so_containing,
    oracle_meeting_coordinate,
    oracle_radical_profile,
    oracle_witt_index,
    oracle_zeta_profile,
)
from .weights import aggregate_ell, zeta

logger = setup_logger('bilinear_census.verify')

GRAM_KINDS = ('dot', 'alternating')


@dataclass(frozen=True)
class CheckResult:
    """status: 'pass' / 'fail' / 'skip'"""
    check: str
    params: str
    expected: str
    actual: str
    status: str

    @property
    def passed(self) -> bool:
        return self.status != 'fail'

    def to_json(self) -> dict:
        return {
            'check': self.check,
            'params': self.params,
            'expected': self.expected,
            'actual': self.actual,
            'status': self.status,
        }


def _result(check: str, params: str, expected, actual) -> CheckResult:
    status = 'pass' if expected == actual else 'fail'
    if status == 'fail':
        logger.warning(f"{check} {params}: expected {expected}, got {actual}")
    return CheckResult(check, params, str(expected), str(actual), status)


def build_space(q: int, n: int, gram_kind: str = 'dot') -> BilinearSpace:
    if gram_kind not in GRAM_KINDS:
        raise ValueError(f"Invalid gram kind: {gram_kind}. Valid: {list(GRAM_KINDS)}")
    field = field_new(q)
    if gram_kind == 'alternating':
        return alternating_block_space(field, n)
    return standard_dot_space(field, n)


# =============================================================================
# 各组检查
# =============================================================================

def check_census(space: BilinearSpace, budget=None, workers=None) -> list:
    """σ(V,B,k,ℓ)、划分恒等式、累计根基维数"""
    q, n, tag = space.field.q, space.n, space.type_tag
    results = []
    for k in range(n + 1):
        profile = oracle_radical_profile(space, k, budget, workers)
        for l in range(k + 1):
            results.append(_result('sigma_ell', f"type={tag.value} k={k} l={l}", sigma_ell(tag, n, k, l, q), profile[l]))
        results.append(_result('partition', f"k={k}", gaussian_binomial(n, k, q),
                               sum(sigma_ell(tag, n, k, l, q) for l in range(k + 1))))
        results.append(_result('cumulative_radical', f"k={k}", cumulative_radical_dim(tag, n, k, q),
                               sum(l * c for l, c in enumerate(profile))))
    return results


def check_witt(space: BilinearSpace, budget=None, workers=None) -> list:
    return [_result('witt_index', f"type={space.type_tag.value}", space.witt, oracle_witt_index(space, budget, workers))]


def check_recursion(space: BilinearSpace) -> list:
    q, n, tag = space.field.q, space.n, space.type_tag
    if tag == TypeTag.N0NA:
        return []
    return [
        _result('sigma_recursive', f"type={tag.value} k={k}", sigma_so(tag, n, k, q), sigma_so_recursive(tag, n, k, q))
        for k in range(space.witt + 1)
    ]


def check_zeta(space: BilinearSpace, budget=None) -> list:
    q, n = space.field.q, space.n
    profile = oracle_zeta_profile(space, budget)
    return [_result('zeta', f"i={i}", zeta(q, n, i), profile[i]) for i in range(n + 1)]


def check_weights(space: BilinearSpace, budget=None, workers=None) -> list:
    """总重量分布；码字总数超出预算的 k 记为 skip"""
    q, n = space.field.q, space.n
    limit = _budget(budget).max_codewords
    results = []
    for k in range(1, n + 1):
        if gaussian_binomial(n, k, q) * q ** k > limit:
            results.append(CheckResult('aggregate_weights', f"k={k}", '', '', 'skip'))
            continue
        profile = oracle_aggregate_profile(space, k, budget, workers)
        for l in range(k + 1):
            table = aggregate_ell(q, n, k, l)
            results.append(_result('aggregate_weights', f"k={k} l={l}", list(table.aggregate), profile[l]))
            if table.average:
                results.append(_result('average_sum', f"k={k} l={l}", q ** k, sum(table.average)))
    return results


def check_meeting_coordinate(space: BilinearSpace, budget=None, workers=None) -> list:
    """每个 t、每个大小为 t 的 S 都要与公式一致"""
    q, n = space.field.q, space.n
    results = []
    for k in range(1, space.witt + 1):
        for t in range(1, n):
            expected = count_so_meeting_coordinate(n, k, t, q)
            for positions in itertools.combinations(range(n), t):
                actual = oracle_meeting_coordinate(q, n, k, positions, budget, workers)
                results.append(_result('meeting_coordinate', f"k={k} S={list(positions)}", expected, actual))
    return results


def _representative_so_subspaces(space: BilinearSpace, t: int) -> list:
    """每类取一个 t 维自正交子空间：N0na 区分是否含全一向量"""
    one = Subspace.span(space.field, all_one_vector(space.n), space.n)
    found = {}
    for _, block in iter_rref_blocks(space.field, space.n, t):
        for basis in _so_only(space.field, space.gram, block):
            u = Subspace.from_rref(space.field.q, basis)
            key = contains(u, one) if space.type_tag == TypeTag.N0NA else False
            found.setdefault(key, u)
        if len(found) == 2 or (found and space.type_tag != TypeTag.N0NA):
            break
    return sorted(found.items())


def check_so_containing(space: BilinearSpace, budget=None, workers=None) -> list:
    q, n, tag = space.field.q, space.n, space.type_tag
    results = []
    for t in range(1, space.witt + 1):
        for has_one, u in _representative_so_subspaces(space, t):
            for k in range(t, space.witt + 1):
                expected = count_so_containing(tag, n, k, t, has_one, q)
                actual = oracle_count_so_containing(space, k, u, budget, workers)
                results.append(_result('so_containing', f"t={t} k={k} one_in_U={has_one}", expected, actual))
    return results


def check_alternating_induced(space: BilinearSpace, budget=None, workers=None) -> list:
    q, n = space.field.q, space.n
    return [
        _result('alternating_induced', f"k={k}", count_alternating_induced(n, k, q),
                oracle_count_alternating_induced(space, k, budget, workers))
        for k in range(1, space.witt + 1)
    ]


def run_checks(space: BilinearSpace, budget=None, workers=None, extended: bool = True) -> list:
    """
    跑完 space 适用的全部对照

    标准内积空间额外检查 ζ；extended 时再检查重量分布、坐标相交与 σ̃，
    N0na 型还有交错诱导计数。
    """
    results = []
    results += check_census(space, budget, workers)
    results += check_witt(space, budget, workers)
    results += check_recursion(space)
    if is_dot_space(space):
        results += check_zeta(space, budget)
        if extended:
            results += check_weights(space, budget, workers)
            results += check_meeting_coordinate(space, budget, workers)
            results += check_so_containing(space, budget, workers)
            if space.type_tag == TypeTag.N0NA:
                results += check_alternating_induced(space, budget, workers)
    return results


def verify_point(q: int, n: int, gram_kind: str = 'dot', budget=None, workers=None, extended: bool = True) -> list:
    return run_checks(build_space(q, n, gram_kind), budget, workers, extended)


def summarize(results: list) -> dict:
    counts = {'pass': 0, 'fail': 0, 'skip': 0}
    for r in results:
        counts[r.status] += 1
    counts['ok'] = counts['fail'] == 0
    return counts


def failure_matrix(results: list) -> dict:
    """check 名 -> [通过数, 失败数]"""
    matrix = {}
    for r in results:
        row = matrix.setdefault(r.check, [0, 0])
        if r.status == 'pass':
            row[0] += 1
        elif r.status == 'fail':
            row[1] += 1
    return matrix
