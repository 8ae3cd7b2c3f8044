"""
F_q 上的向量、矩阵与子空间

矩阵统一用 int64 的 numpy 数组存放域元素下标，形状 (rows, cols)；
批量运算的数组形状为 (batch, rows, cols)。
子空间用 RREF 基（去掉零行）做规范形，可哈希、可直接比较。
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import ORACLE_BUDGET_CONFIG
from .errors import BudgetExceeded, Degenerate, DimensionMismatch
from .gf import GaloisField, field_new


def as_matrix(rows, n: int) -> np.ndarray:
    """把嵌套列表 / 数组整理成 (m, n) 的 int64 矩阵（允许 m = 0）"""
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def all_one_vector(n: int) -> np.ndarray:
    return np.ones(n, dtype=np.int64)


def hamming_weight(v) -> np.ndarray:
    """非零坐标个数（沿最后一维）"""
    return np.count_nonzero(np.asarray(v), axis=-1)


def support(v) -> tuple:
    return tuple(int(i) for i in np.nonzero(np.asarray(v))[0])


# =============================================================================
# 矩阵运算
# =============================================================================

def mat_mul(field: GaloisField, a, b) -> np.ndarray:
    """
    F_q 上的矩阵乘法，支持 numpy 广播的批量形状 (..., m, r) @ (..., r, c)
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if field.e == 1:
        return (a @ b) % field.p

    inner = a.shape[-1]
    out_shape = np.broadcast_shapes(a.shape[:-1] + (1,), b.shape[:-2] + (1,) + b.shape[-1:])
    out = np.zeros(out_shape, dtype=np.int64)
    for j in range(inner):
        out = field.add(out, field.mul(a[..., :, j:j + 1], b[..., j:j + 1, :]))
    return out


def rref(field: GaloisField, m) -> tuple[np.ndarray, tuple]:
    """
    约化行阶梯形

    Returns:
        (R, pivots)：R 去掉了零行，pivots 是各行主元所在列
    """
    m = np.array(m, dtype=np.int64, copy=True)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = field.mul(m[r], field.inv(int(m[r, c])))
        factors = m[:, c].copy()
        factors[r] = 0
        mask = factors != 0
        if mask.any():
            m[mask] = field.sub(m[mask], field.mul(factors[mask, None], m[r][None, :]))
        pivots.append(c)
        r += 1
    return m[:r], tuple(pivots)


def rank(field: GaloisField, m) -> int:
    return len(rref(field, m)[1])


def determinant(field: GaloisField, m) -> int:
    """方阵行列式（高斯消元，记录换行与主元乘积）"""
    m = np.array(m, dtype=np.int64, copy=True)
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionMismatch(f"determinant of non-square matrix {m.shape}")
    det = 1
    for c in range(n):
        nz = np.nonzero(m[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            m[[c, i]] = m[[i, c]]
            det = field.neg(det)
        pivot = int(m[c, c])
        det = field.mul(det, pivot)
        if c + 1 < n:
            factors = field.mul(m[c + 1:, c], field.inv(pivot))
            m[c + 1:] = field.sub(m[c + 1:], field.mul(factors[:, None], m[c][None, :]))
    return det


def inverse(field: GaloisField, m) -> np.ndarray:
    """方阵求逆：对 [M | I] 做 RREF"""
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    r, pivots = rref(field, np.hstack([m, identity(n)]))
    if pivots[:n] != tuple(range(n)) or len(r) < n:
        raise Degenerate("matrix is singular")
    return r[:, n:]


def batch_rank(field: GaloisField, blocks) -> np.ndarray:
    """
    一批矩阵 (batch, r, c) 的秩，整批同步做高斯消元

    每一列上，各矩阵在自己当前秩以下找第一个非零行作为主元行；
    没有主元的矩阵本列跳过。
    """
    m = np.array(blocks, dtype=np.int64, copy=True)
    batch, r, c = m.shape
    ranks = np.zeros(batch, dtype=np.int64)
    if batch == 0 or r == 0:
        return ranks
    row_idx = np.arange(r)
    for col in range(c):
        cand = (m[:, :, col] != 0) & (row_idx[None, :] >= ranks[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        pr = np.argmax(cand[b], axis=1)
        rk = ranks[b]

        pivot_rows = m[b, pr].copy()
        m[b, pr] = m[b, rk]
        m[b, rk] = pivot_rows

        inv = field.inv(m[b, rk, col])
        m[b, rk] = field.mul(m[b, rk], inv[:, None])
        pivot_rows = m[b, rk]

        factors = m[b, :, col].copy()
        factors[np.arange(len(b)), rk] = 0
        m[b] = field.sub(m[b], field.mul(factors[:, :, None], pivot_rows[:, None, :]))
        ranks[b] += 1
        if np.all(ranks == r):
            break
    return ranks


# =============================================================================
# 子空间
# =============================================================================

@dataclass(frozen=True)
class Subspace:
    """F_q^n 的子空间，rows 是 RREF 基（无零行）"""
    q: int
    n: int
    rows: tuple

    @classmethod
    def span(cls, field: GaloisField, vectors, n: int) -> "Subspace":
        basis, _ = rref(field, as_matrix(vectors, n))
        return cls(field.q, n, tuple(tuple(int(x) for x in row) for row in basis))

    @classmethod
    def from_rref(cls, q: int, basis) -> "Subspace":
        """basis 已是 RREF（例如枚举器产出的块），不再消元"""
        basis = np.asarray(basis)
        return cls(q, basis.shape[-1], tuple(tuple(int(x) for x in row) for row in basis))

    @classmethod
    def zero(cls, field: GaloisField, n: int) -> "Subspace":
        return cls(field.q, n, ())

    @classmethod
    def full(cls, field: GaloisField, n: int) -> "Subspace":
        return cls.span(field, identity(n), n)

    @property
    def field(self) -> GaloisField:
        return field_new(self.q)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def matrix(self) -> np.ndarray:
        return as_matrix(self.rows, self.n)

    @property
    def pivots(self) -> tuple:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.rows)

    def to_json_rows(self) -> list:
        return [list(row) for row in self.rows]


def _check_compatible(a: Subspace, b: Subspace):
    if a.q != b.q or a.n != b.n:
        raise DimensionMismatch(f"subspaces live in different spaces: F_{a.q}^{a.n} vs F_{b.q}^{b.n}")


def kernel(field: GaloisField, m) -> Subspace:
    """{v : M v = 0}"""
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[1]
    r, pivots = rref(field, m)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, pc in enumerate(pivots):
            basis[row, pc] = field.neg(int(r[i, f]))
    return Subspace.span(field, basis, n)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_compatible(a, b)
    return Subspace.span(a.field, np.vstack([a.matrix, b.matrix]), a.n)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """A ∩ B = ann(ann(A) + ann(B))，ann 取标准点积下的零化子"""
    _check_compatible(a, b)
    field = a.field
    ann = np.vstack([kernel(field, a.matrix).matrix, kernel(field, b.matrix).matrix])
    return kernel(field, ann)


def contains(a: Subspace, b: Subspace) -> bool:
    """B ⊆ A"""
    _check_compatible(a, b)
    if b.dim == 0:
        return True
    return rank(a.field, np.vstack([a.matrix, b.matrix])) == a.dim


def coordinates(c: Subspace, vectors) -> np.ndarray:
    """
    vectors 在 C 的 RREF 基下的坐标（主元列上的值即坐标）

    Raises:
        ValueError: 某个向量不在 C 中
    """
    vectors = as_matrix(vectors, c.n)
    coords = vectors[:, list(c.pivots)]
    if not np.array_equal(mat_mul(c.field, coords, c.matrix), vectors):
        raise ValueError("vector does not lie in the subspace")
    return coords


def coordinate_subspace(field: GaloisField, n: int, positions) -> Subspace:
    """F_q^n(S)：支撑在 S 内的向量（S 为 0 起始的坐标集合）"""
    basis = np.zeros((len(positions), n), dtype=np.int64)
    for row, j in enumerate(sorted(positions)):
        basis[row, j] = 1
    return Subspace.span(field, basis, n)


@lru_cache(maxsize=32)
def message_vectors(q: int, k: int) -> np.ndarray:
    """F_q^k 全体向量，按字典序排列，形状 (q^k, k)"""
    idx = np.arange(q ** k, dtype=np.int64)
    place = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // place[None, :]) % q


def codewords(field: GaloisField, basis) -> np.ndarray:
    """basis 张成的码的全部码字；basis 可为 (k, n) 或批量 (m, k, n)"""
    basis = np.asarray(basis, dtype=np.int64)
    return mat_mul(field, message_vectors(field.q, basis.shape[-2]), basis)


# =============================================================================
# 子空间枚举
# =============================================================================

def _free_cells(n: int, pivots: tuple) -> list:
    pivot_set = set(pivots)
    return [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivot_set]


def count_rref_shapes(q: int, n: int, k: int) -> int:
    """各主元集合对应的 RREF 个数之和（= 高斯二项式）"""
    return sum(q ** len(_free_cells(n, piv)) for piv in itertools.combinations(range(n), k))


def iter_rref_blocks(field: GaloisField, n: int, k: int, chunk_size: int = 1 << 15, pivot_sets=None):
    """
    按块产出全部 k 维子空间的 RREF 基

    顺序：主元集合按字典序，同一主元集合内自由元按 q 进制从高位到低位递增。

    Yields:
        (pivots, block)，block 形状 (m, k, n)
    """
    q = field.q
    if pivot_sets is None:
        pivot_sets = itertools.combinations(range(n), k)
    for pivots in pivot_sets:
        cells = _free_cells(n, pivots)
        f = len(cells)
        template = np.zeros((k, n), dtype=np.int64)
        for i, p in enumerate(pivots):
            template[i, p] = 1
        total = q ** f
        place = q ** np.arange(f - 1, -1, -1, dtype=np.int64)
        cell_rows = np.array([r for r, _ in cells], dtype=np.int64)
        cell_cols = np.array([c for _, c in cells], dtype=np.int64)
        for start in range(0, total, chunk_size):
            idx = np.arange(start, min(start + chunk_size, total), dtype=np.int64)
            block = np.broadcast_to(template, (len(idx), k, n)).copy()
            if f:
                digits = (idx[:, None] // place[None, :]) % q
                block[:, cell_rows, cell_cols] = digits
            yield pivots, block


def enumerate_subspaces(field: GaloisField, n: int, k: int, budget: int = None):
    """
    逐个产出 F_q^n 的全部 k 维子空间（RREF 规范形，顺序确定）

    Raises:
        BudgetExceeded: 子空间总数超过 budget
    """
    if not 0 <= k <= n:
        raise ValueError(f"invalid dimension k={k} for n={n}")
    limit = ORACLE_BUDGET_CONFIG['max_subspaces'] if budget is None else budget
    total = count_rref_shapes(field.q, n, k)
    if total > limit:
        raise BudgetExceeded("subspace enumeration", total, limit, q=field.q, n=n, k=k)
    for _, block in iter_rref_blocks(field, n, k):
        for basis in block:
            yield Subspace.from_rref(field.q, basis)
