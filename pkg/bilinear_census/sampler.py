"""
随机采样：均匀的 k 维子空间、自正交码与 ℓ-互补码

自正交码用链式采样 U_0 < U_1 < ... < U_k：每一步在 U_t^⊥/U_t 中选一条迷向直线，
权重为（同类直线条数）×（每条直线的补全个数），补全个数由 count_so_containing 给出。
每个 k 维自正交码包含的完全旗个数相同，所以结果在 Σ_q(n,k) 上精确均匀。
"""
import numpy as np

from .bilinear import BilinearSpace, TypeTag, is_dot_space, standard_dot_space
from .census import count_so_containing, sigma_q_ell, sigma_so
from .config import SAMPLER_CONFIG
from .errors import (
    EmptyStratum,
    InternalInconsistency,
    MaxRejectionsExceeded,
    PreconditionViolated,
    UnsupportedType,
)
from .gf import field_new
from .linalg import Subspace, all_one_vector, contains, mat_mul, rank
from .log_utils import setup_logger

logger = setup_logger('bilinear_census.sampler')


class Sampler:
    """
    带种子的随机源，每个线程各用一个实例

    相同 (seed, 参数) 产生完全相同的序列。
    """

    def __init__(self, seed: int = None, max_rejections: int = None):
        self.seed = SAMPLER_CONFIG['seed'] if seed is None else seed
        self.max_rejections = max_rejections or SAMPLER_CONFIG['max_rejections']
        self.rng = np.random.default_rng(self.seed)

    def __repr__(self):
        return f"Sampler(seed={self.seed}, max_rejections={self.max_rejections})"

    def uniform_below(self, bound: int) -> int:
        """[0, bound) 上的均匀大整数（按位拒绝）"""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        bits = (bound - 1).bit_length()
        if bits == 0:
            return 0
        nbytes = (bits + 7) // 8
        while True:
            value = int.from_bytes(self.rng.bytes(nbytes), 'little') >> (8 * nbytes - bits)
            if value < bound:
                return value

    def weighted_index(self, weights) -> int:
        """按大整数权重精确地选一个下标"""
        total = sum(weights)
        if total <= 0:
            raise ValueError("weights must have a positive sum")
        x = self.uniform_below(total)
        for i, weight in enumerate(weights):
            if x < weight:
                return i
            x -= weight
        raise InternalInconsistency("weighted choice fell off the end")

    def elements(self, q: int, shape) -> np.ndarray:
        return self.rng.integers(0, q, size=shape, dtype=np.int64)


def _sampler(rng) -> Sampler:
    return rng if rng is not None else Sampler()


# =============================================================================
# Grassmannian 上的均匀采样
# =============================================================================

def sample_uniform_subspace(q: int, n: int, k: int, rng: Sampler = None) -> Subspace:
    """
    随机 k×n 矩阵直到满秩，返回其行空间

    每个子空间的满秩生成矩阵个数相同，所以结果均匀。
    """
    field = field_new(q)
    if not 0 <= k <= n:
        raise PreconditionViolated(f"need 0 <= k <= n, got n={n}, k={k}")
    if k == 0:
        return Subspace.zero(field, n)
    if k == n:
        return Subspace.full(field, n)
    rng = _sampler(rng)
    for _ in range(rng.max_rejections):
        m = rng.elements(q, (k, n))
        if rank(field, m) == k:
            return Subspace.span(field, m, n)
    raise MaxRejectionsExceeded(f"no full-rank {k}x{n} matrix over F_{q}", rng.max_rejections, 0)


# =============================================================================
# 自正交码：链式采样
# =============================================================================

def _nonzero_vector(rng: Sampler, q: int, dim: int) -> np.ndarray:
    while True:
        v = rng.elements(q, dim)
        if np.any(v):
            return v


def _isotropic_vector(rng: Sampler, quotient_space: BilinearSpace, excluded) -> np.ndarray:
    """
    商空间中均匀的非零迷向向量，且不在 excluded 张成的直线上

    偶数 q 时迷向向量构成子空间，直接在其中取；奇数 q 时拒绝采样。
    """
    field = quotient_space.field
    q, m = field.q, quotient_space.n
    excluded_line = None if excluded is None else Subspace.span(field, excluded, m)

    def acceptable(v):
        if excluded_line is None:
            return True
        return not contains(excluded_line, Subspace.span(field, v, m))

    if field.p == 2:
        iso = quotient_space.isotropic_subspace
        for _ in range(rng.max_rejections):
            v = mat_mul(field, _nonzero_vector(rng, q, iso.dim)[None, :], iso.matrix)[0]
            if acceptable(v):
                return v
    else:
        for _ in range(rng.max_rejections):
            v = _nonzero_vector(rng, q, m)
            if int(quotient_space.quadratic_values(v[None, :])[0]) == 0 and acceptable(v):
                return v
    raise MaxRejectionsExceeded(f"no isotropic vector in a {m}-dimensional quotient over F_{q}",
                                rng.max_rejections, 0)


def _extend_chain(space: BilinearSpace, u: Subspace, k: int, rng: Sampler) -> Subspace:
    """U_t ↦ U_{t+1}，按补全个数加权"""
    field, n, tag = space.field, space.n, space.type_tag
    q, t = field.q, u.dim
    quotient = space.quotient_space(u)
    qspace = quotient.space

    if tag != TypeTag.N0NA:
        v = _isotropic_vector(rng, qspace, None)
        return quotient.lift(Subspace.span(field, v, quotient.dim))

    one = Subspace.span(field, all_one_vector(n), n)
    if contains(u, one):
        v = _isotropic_vector(rng, qspace, None)
        return quotient.lift(Subspace.span(field, v, quotient.dim))

    # 1 ⊥ U_t 且迷向，π(1) 所在直线单独成一类
    one_image = quotient.project_vectors(all_one_vector(n))[0]
    lines = sigma_so(qspace.type_tag, qspace.n, 1, q)
    weights = [
        count_so_containing(tag, n, k, t + 1, True, q),
        (lines - 1) * count_so_containing(tag, n, k, t + 1, False, q),
    ]
    if rng.weighted_index(weights) == 0:
        return quotient.lift(Subspace.span(field, one_image, quotient.dim))
    v = _isotropic_vector(rng, qspace, one_image)
    return quotient.lift(Subspace.span(field, v, quotient.dim))


def sample_self_orthogonal_in(space: BilinearSpace, k: int, rng: Sampler = None) -> Subspace:
    """
    在 space 的 Σ(V,B,k) 上均匀采样

    N0na 型只对标准内积成立（补全个数依赖全一向量）。

    Raises:
        PreconditionViolated: k 超出 Witt 指数
        UnsupportedType: 非标准内积的 N0na 型空间
    """
    if space.type_tag == TypeTag.N0NA and not is_dot_space(space):
        raise UnsupportedType("completion counts for type N0na are known for the dot product only")
    if not 0 <= k <= space.witt:
        raise PreconditionViolated(f"need 0 <= k <= w={space.witt}, got k={k}")
    rng = _sampler(rng)
    u = Subspace.zero(space.field, space.n)
    for _ in range(k):
        u = _extend_chain(space, u, k, rng)
    if space.compl_index(u) != k:
        raise InternalInconsistency(f"sampled subspace is not self-orthogonal: {u.rows}")
    return u


def sample_self_orthogonal(q: int, n: int, k: int, rng: Sampler = None) -> Subspace:
    """Σ_q(n,k) 上的均匀自正交 [n,k]_q 码"""
    return sample_self_orthogonal_in(standard_dot_space(field_new(q), n), k, rng)


# =============================================================================
# ℓ-互补码：拒绝采样
# =============================================================================

def sample_ell_complementary(q: int, n: int, k: int, l: int, rng: Sampler = None) -> Subspace:
    """
    Σ_q(n,k,ℓ) 上的均匀采样：从 Grassmannian 均匀抽取，接受 dim(C ∩ C^⊥) = ℓ 的码

    Raises:
        EmptyStratum: σ_q(n,k,ℓ) = 0
        MaxRejectionsExceeded: 附带实测接受率
    """
    if not 0 <= l <= k <= n:
        raise PreconditionViolated(f"need 0 <= l <= k <= n, got n={n}, k={k}, l={l}")
    count = sigma_q_ell(n, k, l, q)
    if count == 0:
        raise EmptyStratum(f"sigma_{q}({n},{k},{l}) = 0")
    if l == k:
        return sample_self_orthogonal(q, n, k, rng)

    rng = _sampler(rng)
    space = standard_dot_space(field_new(q), n)
    for attempt in range(1, rng.max_rejections + 1):
        c = sample_uniform_subspace(q, n, k, rng)
        if space.compl_index(c) == l:
            logger.debug(f"accepted after {attempt} draws")
            return c
    raise MaxRejectionsExceeded(f"no {l}-complementary [{n},{k}]_{q} code", rng.max_rejections, 0)


def sample_many(q: int, n: int, k: int, l: int = None, count: int = 1, rng: Sampler = None):
    """
    连续采样 count 个码；l 为 None 时在整个 Grassmannian 上采样
    """
    rng = _sampler(rng)
    for _ in range(count):
        if l is None:
            yield sample_uniform_subspace(q, n, k, rng)
        else:
            yield sample_ell_complementary(q, n, k, l, rng)


def sample_record(c: Subspace) -> dict:
    """输出格式 {"q": ..., "generator": [[...]]}"""
    return {'q': c.q, 'generator': c.to_json_rows()}
