"""
穷举 oracle：逐个枚举子空间，直接计算公式所预测的每个量

按 RREF 主元集合划分任务，可分给多个进程；各任务返回定长整数数组，
汇总只做加法，结果与进程数无关。
"""
import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np
from tqdm import tqdm

from .bilinear import BilinearSpace, standard_dot_space
from .config import get_oracle_config
from .errors import BudgetExceeded, PreconditionViolated, WittViolation, ZeroCode
from .gf import GaloisField, field_new
from .linalg import (
    Subspace,
    batch_rank,
    codewords,
    count_rref_shapes,
    hamming_weight,
    iter_rref_blocks,
    mat_mul,
    message_vectors,
)
from .log_utils import log_performance, setup_logger

logger = setup_logger('bilinear_census.oracle')


@dataclass(frozen=True)
class OracleBudget:
    max_subspaces: int
    max_codewords: int

    def __post_init__(self):
        if self.max_subspaces <= 0 or self.max_codewords <= 0:
            raise ValueError("oracle budgets must be positive")

    @classmethod
    def from_config(cls, **overrides) -> "OracleBudget":
        config = get_oracle_config(**overrides)
        return cls(config['max_subspaces'], config['max_codewords'])


@dataclass(frozen=True)
class LowDistanceCount:
    """total: 扫描的码数；low: d(C) <= d-1 的个数；mds: d(C) = n-k+1 的个数"""
    total: int
    low: int
    mds: int


def _budget(budget) -> OracleBudget:
    return budget if budget is not None else OracleBudget.from_config()


def _check_codeword_budget(budget: OracleBudget, q: int, n: int, k: int):
    words = q ** k
    if words > budget.max_codewords:
        raise BudgetExceeded("codeword enumeration", words, budget.max_codewords, q=q, n=n, k=k)


# =============================================================================
# 块处理函数（顶层定义，便于多进程序列化）
# =============================================================================

def _restricted_grams(field: GaloisField, gram: np.ndarray, block: np.ndarray) -> np.ndarray:
    return mat_mul(field, mat_mul(field, block, gram), np.swapaxes(block, -1, -2))


def _so_only(field, gram, block):
    return block[~np.any(_restricted_grams(field, gram, block), axis=(1, 2))]


def _codeword_batches(field, selected, codeword_chunk):
    k = selected.shape[1]
    msgs = message_vectors(field.q, k)
    step = max(1, codeword_chunk // len(msgs))
    for start in range(0, len(selected), step):
        yield mat_mul(field, msgs[None, :, :], selected[start:start + step])


def _profile_block(field, gram, block, params, codeword_chunk):
    k = block.shape[1]
    if k == 0:
        return np.array([len(block)], dtype=np.int64)
    ell = k - batch_rank(field, _restricted_grams(field, gram, block))
    return np.bincount(ell, minlength=k + 1).astype(np.int64)


def _aggregate_block(field, gram, block, params, codeword_chunk):
    """hist[ℓ, i]：补指数为 ℓ 的码中重量为 i 的码字总数"""
    n, k = block.shape[2], block.shape[1]
    hist = np.zeros((k + 1, n + 1), dtype=np.int64)
    if k:
        ell = k - batch_rank(field, _restricted_grams(field, gram, block))
    else:
        ell = np.zeros(len(block), dtype=np.int64)
    for l in np.unique(ell):
        for words in _codeword_batches(field, block[ell == l], codeword_chunk):
            hist[l] += np.bincount(hamming_weight(words).ravel(), minlength=n + 1)
    return hist


def _low_distance_block(field, gram, block, params, codeword_chunk):
    n, k = block.shape[2], block.shape[1]
    selected = _so_only(field, gram, block) if params['so_only'] else block
    result = np.zeros(3, dtype=np.int64)
    result[0] = len(selected)
    for words in _codeword_batches(field, selected, codeword_chunk):
        weights = hamming_weight(words)
        weights[weights == 0] = n + 1
        d_min = weights.min(axis=1)
        result[1] += np.count_nonzero(d_min <= params['d'] - 1)
        result[2] += np.count_nonzero(d_min == n - k + 1)
    return result


def _meeting_block(field, gram, block, params, codeword_chunk):
    # C ∩ F_q^n(S) ≠ 0 ⇔ 基限制到 S 以外的列后秩 < k
    selected = _so_only(field, gram, block)
    k = block.shape[1]
    outside = [c for c in range(block.shape[2]) if c not in params['positions']]
    if not len(selected):
        return np.zeros(1, dtype=np.int64)
    ranks = batch_rank(field, selected[:, :, outside])
    return np.array([np.count_nonzero(ranks < k)], dtype=np.int64)


def _containing_block(field, gram, block, params, codeword_chunk):
    selected = _so_only(field, gram, block)
    k = block.shape[1]
    if not len(selected):
        return np.zeros(1, dtype=np.int64)
    u = np.asarray(params['u'], dtype=np.int64).reshape(-1, block.shape[2])
    stacked = np.concatenate([selected, np.broadcast_to(u, (len(selected),) + u.shape)], axis=1)
    return np.array([np.count_nonzero(batch_rank(field, stacked) == k)], dtype=np.int64)


def _alternating_block(field, gram, block, params, codeword_chunk):
    # 特征 2 下 B(v,v) = λ(v)^2，λ 的系数为 sqrt(G_ii)；
    # B_W 交错 ⇔ λ 在 W^⊥ 上为零 ⇔ λ 落在 W·G 的行空间里
    selected = _so_only(field, gram, block)
    k = block.shape[1]
    if not len(selected):
        return np.zeros(1, dtype=np.int64)
    row = np.asarray(params['lambda'], dtype=np.int64)
    wg = mat_mul(field, selected, gram)
    stacked = np.concatenate([wg, np.broadcast_to(row, (len(selected), 1, len(row)))], axis=1)
    return np.array([np.count_nonzero(batch_rank(field, stacked) == k)], dtype=np.int64)


_BLOCK_HANDLERS = {
    'profile': _profile_block,
    'aggregate': _aggregate_block,
    'low_distance': _low_distance_block,
    'meeting': _meeting_block,
    'containing': _containing_block,
    'alternating': _alternating_block,
}


def _scan_task(q, gram_rows, n, k, kind, params, chunk_size, codeword_chunk, pivot_sets):
    """单个任务：扫描一组主元集合，返回累加后的数组"""
    field = field_new(q)
    gram = np.array(gram_rows, dtype=np.int64).reshape(n, n)
    handler = _BLOCK_HANDLERS[kind]
    acc = None
    for _, block in iter_rref_blocks(field, n, k, chunk_size, pivot_sets=pivot_sets):
        part = handler(field, gram, block, params, codeword_chunk)
        acc = part if acc is None else acc + part
    return acc


def _scan(space: BilinearSpace, k: int, kind: str, params: dict, budget=None, workers: int = None) -> np.ndarray:
    """
    枚举 space 的全部 k 维子空间并按 kind 汇总

    Raises:
        BudgetExceeded: 子空间个数超过预算
    """
    budget = _budget(budget)
    config = get_oracle_config()
    field = space.field
    q, n = field.q, space.n
    if not 0 <= k <= n:
        raise PreconditionViolated(f"need 0 <= k <= n, got n={n}, k={k}")
    total = count_rref_shapes(q, n, k)
    if total > budget.max_subspaces:
        raise BudgetExceeded("subspace enumeration", total, budget.max_subspaces, q=q, n=n, k=k)

    pivot_sets = list(itertools.combinations(range(n), k))
    workers = workers or config['workers']
    if workers > 1:
        groups = [pivot_sets[i::workers * 4] for i in range(workers * 4)]
        groups = [g for g in groups if g]
    else:
        groups = [pivot_sets]
    task = partial(_scan_task, q, space.gram.tolist(), n, k, kind, params,
                   config['chunk_size'], config['codeword_chunk'])

    t0 = time.time()
    desc = f"{kind} q={q} n={n} k={k}"
    acc = None
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = executor.map(task, groups)
            for part in tqdm(results, total=len(groups), desc=desc, disable=not config['show_progress']):
                acc = part if acc is None else acc + part
    else:
        for group in tqdm(groups, desc=desc, disable=not config['show_progress']):
            part = task(group)
            acc = part if acc is None else acc + part

    elapsed = time.time() - t0
    log_performance("oracle_scan", kind=kind, q=q, n=n, k=k, subspaces=total,
                    workers=workers, elapsed=f"{elapsed:.3f}s")
    logger.debug(f"{desc}: {total} subspaces in {elapsed:.3f}s")
    return acc


# =============================================================================
# 公开接口
# =============================================================================

def oracle_radical_profile(space: BilinearSpace, k: int, budget=None, workers: int = None) -> list:
    """profile[ℓ] = 补指数为 ℓ 的 k 维子空间个数"""
    return [int(x) for x in _scan(space, k, 'profile', {}, budget, workers)]


def oracle_sigma_ell(space: BilinearSpace, k: int, l: int, budget=None, workers: int = None) -> int:
    profile = oracle_radical_profile(space, k, budget, workers)
    return profile[l] if 0 <= l < len(profile) else 0


def oracle_cumulative_radical(space: BilinearSpace, k: int, budget=None, workers: int = None) -> int:
    profile = oracle_radical_profile(space, k, budget, workers)
    return sum(l * count for l, count in enumerate(profile))


def _iter_so_bases(space: BilinearSpace, k: int):
    config = get_oracle_config()
    for _, block in iter_rref_blocks(space.field, space.n, k, config['chunk_size']):
        yield from _so_only(space.field, space.gram, block)


def oracle_witt_index(space: BilinearSpace, budget=None, workers: int = None) -> int:
    """
    最大的自正交子空间维数；同时检查每个更低维的自正交子空间都不是极大的

    Raises:
        WittViolation: 存在维数小于 w 的极大自正交子空间
    """
    budget = _budget(budget)
    field = space.field
    q, n = field.q, space.n
    witt = 0
    for k in range(1, n // 2 + 1):
        if oracle_radical_profile(space, k, budget, workers)[k] == 0:
            break
        witt = k

    for k in range(witt):
        _check_codeword_budget(budget, q, n, n - k)
        for basis in _iter_so_bases(space, k):
            perp = space.orthogonal(Subspace.from_rref(q, basis))
            isotropic = np.count_nonzero(space.quadratic_values(codewords(field, perp.matrix)) == 0)
            # C 的 q^k 个向量都在 C^⊥ 中且迷向
            if isotropic <= q ** k:
                raise WittViolation(
                    f"maximal self-orthogonal subspace of dimension {k} < {witt} in {space!r}: {basis.tolist()}"
                )
    return witt


def oracle_aggregate_profile(space: BilinearSpace, k: int, budget=None, workers: int = None) -> list:
    """一次扫描得到所有 ℓ 的总重量分布，profile[ℓ][i]"""
    budget = _budget(budget)
    _check_codeword_budget(budget, space.field.q, space.n, k)
    hist = _scan(space, k, 'aggregate', {}, budget, workers)
    return [[int(x) for x in row] for row in hist]


def oracle_aggregate_weights(space: BilinearSpace, k: int, l: int, budget=None, workers: int = None) -> list:
    """Σ_{C ∈ Σ(n,k,ℓ)} A^{(i)}(C)"""
    profile = oracle_aggregate_profile(space, k, budget, workers)
    return profile[l] if 0 <= l <= k else [0] * (space.n + 1)


def min_distance(code: Subspace, budget=None) -> int:
    if code.dim == 0:
        raise ZeroCode("the zero code has no minimum distance")
    budget = _budget(budget)
    _check_codeword_budget(budget, code.q, code.n, code.dim)
    weights = hamming_weight(codewords(code.field, code.matrix))
    return int(weights[weights > 0].min())


def _low_distance(space, k, d, so_only, budget, workers):
    if k < 1:
        raise PreconditionViolated(f"need k >= 1, got {k}")
    budget = _budget(budget)
    _check_codeword_budget(budget, space.field.q, space.n, k)
    total, low, mds = (int(x) for x in _scan(space, k, 'low_distance', {'d': d, 'so_only': so_only}, budget, workers))
    return LowDistanceCount(total, low, mds)


def oracle_low_distance_so_count(q: int, n: int, k: int, d: int, budget=None, workers: int = None) -> LowDistanceCount:
    """自正交 [n,k]_q 码中 d(C) <= d-1 的个数"""
    return _low_distance(standard_dot_space(field_new(q), n), k, d, True, budget, workers)


def oracle_unrestricted_low_distance_count(q: int, n: int, k: int, d: int, budget=None,
                                           workers: int = None) -> LowDistanceCount:
    """全部 [n,k]_q 码中 d(C) <= d-1 的个数"""
    return _low_distance(standard_dot_space(field_new(q), n), k, d, False, budget, workers)


def oracle_zeta_profile(space: BilinearSpace, budget=None) -> list:
    """profile[i] = 重量为 i 且 B(v,v) = 0 的向量个数"""
    budget = _budget(budget)
    field, n = space.field, space.n
    _check_codeword_budget(budget, field.q, n, n)
    vectors = message_vectors(field.q, n)
    isotropic = space.quadratic_values(vectors) == 0
    return [int(x) for x in np.bincount(hamming_weight(vectors[isotropic]), minlength=n + 1)]


def oracle_zeta(q: int, n: int, i: int, budget=None) -> int:
    return oracle_zeta_profile(standard_dot_space(field_new(q), n), budget)[i]


def oracle_meeting_coordinate(q: int, n: int, k: int, positions, budget=None, workers: int = None) -> int:
    """与 F_q^n(S) 非平凡相交的 k 维自正交码个数（S 为 0 起始坐标集合）"""
    space = standard_dot_space(field_new(q), n)
    return int(_scan(space, k, 'meeting', {'positions': tuple(sorted(positions))}, budget, workers)[0])


def oracle_count_so_containing(space: BilinearSpace, k: int, u: Subspace, budget=None, workers: int = None) -> int:
    """包含 U 的 k 维自正交子空间个数"""
    return int(_scan(space, k, 'containing', {'u': u.to_json_rows()}, budget, workers)[0])


def oracle_count_alternating_induced(space: BilinearSpace, k: int, budget=None, workers: int = None) -> int:
    """B_W 交错的 k 维自正交子空间 W 的个数（偶数 q）"""
    field = space.field
    if field.p != 2:
        raise PreconditionViolated("induced alternating forms need even q")
    row = [field.sqrt(int(g)) for g in np.diagonal(space.gram)]
    return int(_scan(space, k, 'alternating', {'lambda': row}, budget, workers)[0])
