"""
计数公式

所有公式都以 (类型标签, n, q) 为键，不需要构造 Gram 矩阵；
结果是 Python 大整数，平均值用 Fraction。
σ_q(n, k) 等带下标 q 的量指标准内积空间 (F_q^n, ·)。
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .bilinear import BilinearSpace, TypeTag, check_type_matches_q, dot_type, get_type_tag, witt_index_for_type
from .errors import InternalInconsistency, NonIntegralResult, PreconditionViolated, UnsupportedType

_PARITY_OF_N = {
    TypeTag.P: 1,
    TypeTag.N1: 1,
    TypeTag.H: 0,
    TypeTag.E: 0,
    TypeTag.N0A: 0,
    TypeTag.N0NA: 0,
}


def _exact_div(num: int, den: int) -> int:
    quotient, remainder = divmod(num, den)
    if remainder:
        raise NonIntegralResult(f"{num} is not divisible by {den}")
    return quotient


def _check_type(tag, n: int, q: int) -> TypeTag:
    tag = get_type_tag(tag)
    check_type_matches_q(tag, q)
    if n < 0 or n % 2 != _PARITY_OF_N[tag]:
        raise PreconditionViolated(f"type {tag.value} does not occur in dimension n={n}")
    if tag == TypeTag.E and n < 2:
        raise PreconditionViolated("type E needs n >= 2")
    return tag


# =============================================================================
# 基本量
# =============================================================================

@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int, q: int) -> int:
    """[n k]_q，a < 0 或 b < 0 或 b > a 时为 0"""
    if n < 0 or k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return _exact_div(num, den)


def a_factor(k: int, q: int) -> int:
    """a_k = ∏_{i=1}^k (q^i - 1)"""
    result = 1
    for i in range(1, k + 1):
        result *= q ** i - 1
    return result


def b_factor(n: int, k: int, q: int) -> int:
    """b_{n,k} = ∏_{i=1}^{k-1} (q^{n-2i} - 1)"""
    result = 1
    for i in range(1, k):
        result *= q ** (n - 2 * i) - 1
    return result


def sigma_lines(tag, n: int, q: int, w: int = None) -> int:
    """
    σ(V,B,1)：自正交一维子空间个数

    Args:
        w: Witt 指数，缺省时由类型推出
    """
    tag = get_type_tag(tag)
    if n < 1:
        raise PreconditionViolated(f"n must be >= 1, got {n}")
    if w is None:
        w = witt_index_for_type(tag, n)
    if tag.odd_q:
        return _exact_div((q ** w - 1) * (q ** (n - w - 1) + 1), q - 1)
    if tag == TypeTag.N0A:
        return _exact_div(q ** n - 1, q - 1)
    return _exact_div(q ** (n - 1) - 1, q - 1)


# =============================================================================
# 自正交子空间个数 σ(V,B,k)
# =============================================================================

@lru_cache(maxsize=None)
def sigma_so(tag, n: int, k: int, q: int) -> int:
    """σ(V,B,k)，按类型分派的闭式"""
    tag = _check_type(tag, n, q)
    if k < 0:
        raise PreconditionViolated(f"k must be >= 0, got {k}")
    if k == 0:
        return 1
    w = witt_index_for_type(tag, n)
    if k > w:
        return 0

    if tag in (TypeTag.P, TypeTag.N1):
        num = 1
        for i in range(1, k + 1):
            num *= q ** (n + 1 - 2 * i) - 1
    elif tag in (TypeTag.H, TypeTag.E):
        eps = 1 if tag == TypeTag.H else -1
        half = n // 2
        num = (q ** (n - k) + eps * q ** half - eps * q ** (half - k) - 1) * b_factor(n, k, q)
    elif tag == TypeTag.N0A:
        num = 1
        for i in range(1, k + 1):
            num *= q ** (n - 2 * i + 2) - 1
    else:
        num = (q ** (n - k) - 1) * b_factor(n, k, q)
    return _exact_div(num, a_factor(k, q))


def sigma_so_recursive(tag, n: int, k: int, q: int) -> int:
    """
    σ(V,B,k) = σ(V,B,k-1) · Q，只用于与闭式互相校验

    Raises:
        UnsupportedType: 类型为 N0na（诱导类型依赖于子空间）
    """
    tag = _check_type(tag, n, q)
    if tag == TypeTag.N0NA:
        raise UnsupportedType("the recursion does not apply to type N0na")
    if k < 0:
        raise PreconditionViolated(f"k must be >= 0, got {k}")
    w = witt_index_for_type(tag, n)
    if k > w:
        return 0

    value = 1
    for j in range(1, k + 1):
        if tag.odd_q:
            num = (q ** (w - j + 1) - 1) * (q ** (n - j - w) + 1)
        elif tag == TypeTag.N0A:
            num = q ** (n - 2 * j + 2) - 1
        else:
            num = q ** (n - 2 * j + 1) - 1
        value = _exact_div(value * num, q ** j - 1)
    return value


def tau(n: int, k: int, w: int, q: int) -> int:
    """τ_q(n,k,w) = ∏_{i=1}^k (q^{n-w-i}+1)(q^{w-i+1}-1)/(q^i-1)，τ_q(n,0,w) = 1"""
    if k == 0:
        return 1
    if not 1 <= k <= w or 2 * w > n:
        raise PreconditionViolated(f"tau needs 1 <= k <= w <= n/2, got n={n}, k={k}, w={w}")
    value = Fraction(1)
    for i in range(1, k + 1):
        value *= Fraction((q ** (n - w - i) + 1) * (q ** (w - i + 1) - 1), q ** i - 1)
    if value.denominator != 1:
        raise NonIntegralResult(f"tau_{q}({n},{k},{w}) = {value} is not an integer")
    return value.numerator


# =============================================================================
# ℓ-互补子空间个数 σ(V,B,k,ℓ)
# =============================================================================

@lru_cache(maxsize=None)
def sigma_ell(tag, n: int, k: int, l: int, q: int) -> int:
    """σ(V,B,k,ℓ)：对 s = ℓ..w 的交错和"""
    tag = _check_type(tag, n, q)
    if not 0 <= l <= k <= n:
        raise PreconditionViolated(f"need 0 <= l <= k <= n, got n={n}, k={k}, l={l}")
    w = witt_index_for_type(tag, n)
    total = 0
    for s in range(l, w + 1):
        term = sigma_so(tag, n, s, q) * gaussian_binomial(s, l, q) * gaussian_binomial(n - 2 * s, k - s, q)
        term *= q ** comb(s - l, 2)
        total += -term if (s - l) % 2 else term
    if total < 0:
        raise InternalInconsistency(f"negative count {total} for sigma({tag.value}, n={n}, k={k}, l={l}, q={q})")
    return total


def cumulative_radical_dim(tag, n: int, k: int, q: int) -> int:
    """Σ_C dim(C ∩ C^⊥)，C 取遍所有 k 维子空间"""
    if not 0 <= k <= n:
        raise PreconditionViolated(f"need 0 <= k <= n, got n={n}, k={k}")
    return sum(l * sigma_ell(tag, n, k, l, q) for l in range(k + 1))


def average_radical_dim(tag, n: int, k: int, q: int) -> Fraction:
    return Fraction(cumulative_radical_dim(tag, n, k, q), gaussian_binomial(n, k, q))


# =============================================================================
# 标准内积空间 (F_q^n, ·)
# =============================================================================

def sigma_q(n: int, k: int, q: int) -> int:
    """σ_q(n,k)；约定 σ_q(0,0) = 1"""
    return sigma_so(dot_type(q, n), n, k, q)


def sigma_q_ell(n: int, k: int, l: int, q: int) -> int:
    return sigma_ell(dot_type(q, n), n, k, l, q)


def dot_witt(q: int, n: int) -> int:
    return witt_index_for_type(dot_type(q, n), n)


def so_vector_count(q: int, t: int) -> int:
    """F_q^t 中自正交向量个数（含零向量）= (q-1)σ_q(t,1) + 1"""
    if t == 0:
        return 1
    return (q - 1) * sigma_q(t, 1, q) + 1


def count_alternating_induced(n: int, k: int, q: int) -> int:
    """
    N0na 型空间中满足 B_W 交错的 k 维自正交子空间 W 的个数

    Raises:
        UnsupportedType: type(q,n) 不是 N0na
    """
    if dot_type(q, n) != TypeTag.N0NA:
        raise UnsupportedType(f"type(q={q}, n={n}) is not N0na")
    if not 1 <= k <= n // 2:
        raise PreconditionViolated(f"need 1 <= k <= n/2, got n={n}, k={k}")
    return _exact_div(b_factor(n, k, q), a_factor(k - 1, q))


def count_so_containing(tag, n: int, k: int, t: int, contains_all_one: bool, q: int) -> int:
    """
    σ̃_{k,U}：包含给定 t 维自正交子空间 U 的 k 维自正交子空间个数

    contains_all_one 只对 N0na 有意义（U 是否包含全一向量）。
    """
    tag = _check_type(tag, n, q)
    w = witt_index_for_type(tag, n)
    if not 0 <= t <= k <= w:
        raise PreconditionViolated(f"need 0 <= t <= k <= w={w}, got t={t}, k={k}")
    if tag == TypeTag.N0NA:
        if contains_all_one:
            if t == 0:
                raise PreconditionViolated("the zero subspace cannot contain the all-one vector")
            return sigma_so(TypeTag.N1, n - 2 * t + 1, k - t, q)
        return sigma_so(TypeTag.N0NA, n - 2 * t, k - t, q)
    if tag == TypeTag.N0A:
        return sigma_so(TypeTag.N0A, n - 2 * t, k - t, q)
    return tau(n - 2 * t, k - t, w - t, q)


def delta_coeff(tag, n: int, k: int, i: int, q: int) -> int:
    """δ_q(n,k,i)"""
    tag = _check_type(tag, n, q)
    w = witt_index_for_type(tag, n)
    if not 1 <= k <= w or not 0 <= i <= k:
        raise PreconditionViolated(f"need 1 <= k <= w={w} and 0 <= i <= k, got k={k}, i={i}")
    if tag == TypeTag.N0NA:
        return sigma_so(TypeTag.N0NA, n - 2 * i, k - i, q)
    if tag == TypeTag.N0A:
        raise UnsupportedType("delta is defined for the dot-product types only")
    return tau(n - 2 * i, k - i, w - i, q)


def count_so_meeting_coordinate(n: int, k: int, t: int, q: int) -> int:
    """
    与 F_q^n(S)（|S| = t）非平凡相交的 k 维自正交码个数，只依赖 t
    """
    w = dot_witt(q, n)
    if not 1 <= t < n or not 1 <= k <= w:
        raise PreconditionViolated(f"need 1 <= t < n and 1 <= k <= w={w}, got t={t}, k={k}")
    tag = dot_type(q, n)
    w_hat = dot_witt(q, t)
    total = 0
    for i in range(1, min(k, w_hat) + 1):
        term = sigma_q(t, i, q) * delta_coeff(tag, n, k, i, q) * q ** comb(i, 2)
        total += term if (i - 1) % 2 == 0 else -term
    return total


# =============================================================================
# 结果记录
# =============================================================================

@dataclass(frozen=True)
class CensusEntry:
    q: int
    type_tag: TypeTag
    n: int
    k: int
    l: int
    count: int

    @property
    def key(self) -> tuple:
        return (self.q, self.type_tag.value, self.n, self.k, self.l)

    def to_json(self) -> dict:
        """计数用十进制字符串"""
        return {
            'q': self.q,
            'type': self.type_tag.value,
            'n': self.n,
            'k': self.k,
            'l': self.l,
            'count': str(self.count),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CensusEntry":
        return cls(
            q=int(data['q']),
            type_tag=get_type_tag(data['type']),
            n=int(data['n']),
            k=int(data['k']),
            l=int(data['l']),
            count=int(data['count']),
        )


def census_entry(tag, n: int, k: int, l: int, q: int, cache=None) -> CensusEntry:
    """单个 σ(V,B,k,ℓ)，cache 命中时直接返回"""
    tag = get_type_tag(tag)
    if cache is not None:
        hit = cache.get(q, tag, n, k, l)
        if hit is not None:
            return hit
    entry = CensusEntry(q, tag, n, k, l, sigma_ell(tag, n, k, l, q))
    if cache is not None:
        cache.put(entry)
    return entry


def census_table(q: int, tag, n: int, k: int, cache=None) -> list:
    """ℓ = 0..k 全部 CensusEntry"""
    return [census_entry(tag, n, k, l, q, cache=cache) for l in range(k + 1)]


def census_for_space(space: BilinearSpace, k: int, l: int = None, cache=None) -> list:
    """按空间缓存的类型查询"""
    q = space.field.q
    if l is None:
        return census_table(q, space.type_tag, space.n, k, cache=cache)
    return [census_entry(space.type_tag, space.n, k, l, q, cache=cache)]
