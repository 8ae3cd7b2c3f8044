"""
重量分布

ζ_q(n,i)、Krawtchouk 系数、MacWilliams 变换，以及 ℓ-互补 [n,k]_q 码的
总重量分布 A_q^{(i)}(n,k,ℓ) 与平均重量分布（精确有理数）。
全部针对标准内积空间 (F_q^n, ·)。
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .bilinear import TypeTag, dot_type, standard_dot_space
from .census import (
    _exact_div,
    dot_witt,
    gaussian_binomial,
    sigma_q,
    sigma_q_ell,
    so_vector_count,
    tau,
)
from .errors import InternalInconsistency, NonIntegralResult, PreconditionViolated
from .gf import field_new
from .linalg import Subspace, codewords, hamming_weight
from .oracle import oracle_aggregate_weights


@dataclass(frozen=True)
class WeightDistribution:
    """counts[i] = 重量为 i 的码字个数"""
    n: int
    counts: tuple

    @classmethod
    def of_code(cls, code: Subspace) -> "WeightDistribution":
        words = codewords(code.field, code.matrix)
        hist = np.bincount(hamming_weight(words), minlength=code.n + 1)
        return cls(code.n, tuple(int(x) for x in hist))

    @property
    def total(self) -> int:
        return sum(self.counts)


@lru_cache(maxsize=None)
def zeta(q: int, n: int, i: int) -> int:
    """ζ_q(n,i)：F_q^n 中重量为 i 的自正交向量个数"""
    if not 0 <= i <= n:
        raise PreconditionViolated(f"need 0 <= i <= n, got n={n}, i={i}")
    if i == 0:
        return 1
    inner = (-1) ** i
    for j in range(1, i + 1):
        inner += comb(i, j) * (-1) ** (i - j) * so_vector_count(q, j)
    return comb(n, i) * inner


@lru_cache(maxsize=None)
def krawtchouk(q: int, n: int, i: int, j: int) -> int:
    """K_q(n,i,j) = Σ_r (-1)^r (q-1)^{i-r} C(j,r) C(n-j,i-r)"""
    return sum(
        (-1) ** r * (q - 1) ** (i - r) * comb(j, r) * comb(n - j, i - r)
        for r in range(i + 1)
    )


def macwilliams(dist: WeightDistribution, k: int, q: int) -> WeightDistribution:
    """
    由 k 维码的重量分布求对偶码的重量分布

    Raises:
        NonIntegralResult: 输入不是某个 k 维码的重量分布
    """
    n = dist.n
    dual = []
    for i in range(n + 1):
        s = sum(dist.counts[j] * krawtchouk(q, n, i, j) for j in range(n + 1))
        try:
            dual.append(_exact_div(s, q ** k))
        except NonIntegralResult as e:
            raise NonIntegralResult(f"not the distribution of a {k}-dimensional code: {e}") from e
    return WeightDistribution(n, tuple(dual))


# =============================================================================
# 自正交码的总重量分布 A_q^{(j)}(n,k,k)
# =============================================================================

@lru_cache(maxsize=None)
def aggregate_so(q: int, n: int, k: int) -> tuple:
    """
    所有 k 维自正交码的重量分布之和，j = 0 项为 σ_q(n,k)
    """
    w = dot_witt(q, n)
    if k == 0:
        return (1,) + (0,) * n
    if not 1 <= k <= w:
        raise PreconditionViolated(f"need 1 <= k <= w={w}, got k={k}")
    tag = dot_type(q, n)
    if tag == TypeTag.N0NA:
        factor = sigma_q(n - 2, k - 1, q)
    else:
        factor = tau(n - 2, k - 1, w - 1, q)

    result = [sigma_q(n, k, q)]
    for j in range(1, n + 1):
        result.append(zeta(q, n, j) * factor)
    if tag == TypeTag.N0NA:
        # 全一向量所在直线单独计数
        result[n] += (q - 1) * (sigma_q(n - 1, k - 1, q) - sigma_q(n - 2, k - 1, q))
    return tuple(result)


# =============================================================================
# ℓ-互补码的总/平均重量分布
# =============================================================================

@dataclass(frozen=True)
class AggregateWeightTable:
    q: int
    n: int
    k: int
    l: int
    aggregate: tuple
    average: tuple   # Fraction；σ = 0 时为空

    @property
    def count(self) -> int:
        return self.aggregate[0]

    def to_csv_rows(self) -> list:
        rows = [['i', 'aggregate', 'average_num', 'average_den']]
        for i, total in enumerate(self.aggregate):
            if self.average:
                avg = self.average[i]
                rows.append([str(i), str(total), str(avg.numerator), str(avg.denominator)])
            else:
                rows.append([str(i), str(total), '', ''])
        return rows

    def to_json(self) -> dict:
        return {
            'q': self.q,
            'n': self.n,
            'k': self.k,
            'l': self.l,
            'aggregate': [str(x) for x in self.aggregate],
            'average': [f"{x.numerator}/{x.denominator}" for x in self.average],
        }


def _bracket_difference(n: int, k: int, s: int, q: int) -> int:
    g1 = gaussian_binomial(n - 2 * s, k - s, q)
    g2 = gaussian_binomial(n - 2 * s - 1, k - s - 1, q)
    if s > k:
        simplified = 0
    elif s == k and 2 * s == n:
        simplified = 1
    else:
        simplified = q ** (k - s) * gaussian_binomial(n - 2 * s - 1, k - s, q)
    if g1 - g2 != simplified:
        raise InternalInconsistency(f"bracket difference mismatch at n={n}, k={k}, s={s}, q={q}")
    return g1 - g2


def _aggregate_ell_formula(q: int, n: int, k: int, l: int) -> tuple:
    w = dot_witt(q, n)
    totals = [0] * (n + 1)
    for s in range(l, w + 1):
        a_s = aggregate_so(q, n, s)
        diff = _bracket_difference(n, k, s, q)
        g2 = gaussian_binomial(n - 2 * s - 1, k - s - 1, q)
        coeff = gaussian_binomial(s, l, q) * q ** comb(s - l, 2) * (-1) ** (s - l)
        for i in range(n + 1):
            dual_sum = sum(a_s[j] * krawtchouk(q, n, i, j) for j in range(n + 1))
            b_s = diff * a_s[i] + g2 * _exact_div(dual_sum, q ** s)
            totals[i] += coeff * b_s
    return tuple(totals)


def aggregate_ell(q: int, n: int, k: int, l: int) -> AggregateWeightTable:
    """
    A_q^{(i)}(n,k,ℓ) 与平均分布

    n < 3 时公式不适用，改由穷举计算（规模极小）。

    Raises:
        InternalInconsistency: aggregate[0] 与 σ_q(n,k,ℓ) 不一致
    """
    if not 1 <= k <= n or not 0 <= l <= k:
        raise PreconditionViolated(f"need 1 <= k <= n and 0 <= l <= k, got n={n}, k={k}, l={l}")
    if n >= 3:
        aggregate = _aggregate_ell_formula(q, n, k, l)
    else:
        aggregate = tuple(oracle_aggregate_weights(standard_dot_space(field_new(q), n), k, l))

    count = sigma_q_ell(n, k, l, q)
    if aggregate[0] != count:
        raise InternalInconsistency(
            f"A^(0)_{q}({n},{k},{l}) = {aggregate[0]} but sigma = {count}"
        )
    average = tuple(Fraction(x, count) for x in aggregate) if count else ()
    return AggregateWeightTable(q, n, k, l, aggregate, average)


# =============================================================================
# 无限制码
# =============================================================================

def unrestricted_aggregate(q: int, n: int, k: int, j: int) -> int:
    """B_q^{(j)}(n,k) = C(n,j)(q-1)^j [n-1 k-1]_q；j = 0 时为 [n k]_q"""
    if not 1 <= k <= n or not 0 <= j <= n:
        raise PreconditionViolated(f"need 1 <= k <= n and 0 <= j <= n, got n={n}, k={k}, j={j}")
    if j == 0:
        return gaussian_binomial(n, k, q)
    return comb(n, j) * (q - 1) ** j * gaussian_binomial(n - 1, k - 1, q)


def unrestricted_average(q: int, n: int, k: int, j: int) -> Fraction:
    return Fraction(unrestricted_aggregate(q, n, k, j), gaussian_binomial(n, k, q))
