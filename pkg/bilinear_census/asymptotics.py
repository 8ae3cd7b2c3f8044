"""
q → ∞ 渐近预测与收敛诊断

预测式编码为 (系数, 指数, 剩余类) 三元组：value(q) = 系数 · (q - offset)^指数，
全部用 Fraction 精确求值。exact=True 的预测对每个合法 q 都精确成立（例如 ζ_q(n,2)）。
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import partial
from math import comb

from .bilinear import TypeTag, dot_type, get_type_tag, witt_index_for_type
from .census import gaussian_binomial, sigma_q, sigma_so, tau
from .config import CONVERGENCE_CONFIG
from .errors import PreconditionViolated, ResidueMismatch
from .log_utils import log_performance, setup_logger
from .oracle import oracle_low_distance_so_count, oracle_unrestricted_low_distance_count
from .weights import aggregate_so, unrestricted_average, zeta

logger = setup_logger('bilinear_census.asymptotics')


class Residue(str, Enum):
    ANY = "any"
    EVEN = "even"
    ODD = "odd"
    ONE_MOD_4 = "1mod4"
    THREE_MOD_4 = "3mod4"

    def admits(self, q: int) -> bool:
        if self == Residue.EVEN:
            return q % 2 == 0
        if self == Residue.ODD:
            return q % 2 == 1
        if self == Residue.ONE_MOD_4:
            return q % 4 == 1
        if self == Residue.THREE_MOD_4:
            return q % 4 == 3
        return True


# 每个剩余类取代表 q；type(q,n) 只依赖 q 的奇偶与模 4 余数
_RESIDUE_REPRESENTATIVES = {
    Residue.ANY: (2, 3, 5),
    Residue.EVEN: (2,),
    Residue.ODD: (3, 5),
    Residue.ONE_MOD_4: (5,),
    Residue.THREE_MOD_4: (3,),
}


def get_residue(value) -> Residue:
    if isinstance(value, Residue):
        return value
    for residue in Residue:
        if residue.value == value:
            return residue
    raise ValueError(f"Invalid residue: {value}. Valid: {[r.value for r in Residue]}")


def candidate_dot_types(residue, n: int) -> set:
    residue = get_residue(residue)
    return {dot_type(q, n) for q in _RESIDUE_REPRESENTATIVES[residue]}


def _residue_for_type(tag: TypeTag) -> Residue:
    return Residue.ODD if tag.odd_q else Residue.EVEN


# =============================================================================
# 预测式
# =============================================================================

@dataclass(frozen=True)
class AsymptoticPrediction:
    coefficient: Fraction
    exponent: int
    residue: Residue = Residue.ANY
    offset: int = 0
    exact: bool = False

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    def value(self, q: int) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.coefficient) * Fraction(q - self.offset) ** self.exponent

    def describe(self) -> str:
        if self.is_zero:
            return "0"
        base = f"(q-{self.offset})" if self.offset else "q"
        return f"{self.coefficient}*{base}^{self.exponent}"

    def to_json(self) -> dict:
        return {
            'coefficient': str(self.coefficient),
            'exponent': self.exponent,
            'residue': self.residue.value,
            'offset': self.offset,
            'exact': self.exact,
        }


@dataclass(frozen=True)
class BoundsPair:
    """只知道 limsup 的上下界，不给点预测"""
    lower: AsymptoticPrediction
    upper: AsymptoticPrediction

    def to_json(self) -> dict:
        return {'lower': self.lower.to_json(), 'upper': self.upper.to_json()}


def _zero(residue: Residue) -> AsymptoticPrediction:
    return AsymptoticPrediction(Fraction(0), 0, residue, exact=True)


def _unambiguous(residue: Residue, n: int, build):
    """在剩余类允许的所有 type(q,n) 上求值，结果必须一致"""
    results = {build(tag) for tag in candidate_dot_types(residue, n)}
    if len(results) != 1:
        raise PreconditionViolated(f"prediction depends on q beyond the residue class {residue.value} (n={n})")
    return results.pop()


def _dot_witt_for_residue(residue: Residue, n: int) -> int:
    return min(witt_index_for_type(tag, n) for tag in candidate_dot_types(residue, n))


def predict_so_density(tag, n: int, k: int) -> AsymptoticPrediction:
    """σ(V,B,k) / [n k]_q"""
    tag = get_type_tag(tag)
    w = witt_index_for_type(tag, n)
    if not 1 <= k <= w:
        raise PreconditionViolated(f"need 1 <= k <= w={w}, got k={k}")
    residue = _residue_for_type(tag)
    if tag == TypeTag.N0A:
        return AsymptoticPrediction(Fraction(1), k - comb(k + 1, 2), residue)
    if tag == TypeTag.H and 2 * k == n:
        return AsymptoticPrediction(Fraction(2), -comb(k + 1, 2), residue)
    return AsymptoticPrediction(Fraction(1), -comb(k + 1, 2), residue)


def predict_sigma_so(residue, n: int, k: int) -> AsymptoticPrediction:
    """σ_q(n,k)"""
    residue = get_residue(residue)
    w = _dot_witt_for_residue(residue, n)
    if not 1 <= k <= w:
        raise PreconditionViolated(f"need 1 <= k <= w={w}, got k={k}")
    exponent = k * (n - k) - comb(k + 1, 2)

    def build(tag):
        coefficient = 2 if tag == TypeTag.H and 2 * k == n else 1
        return AsymptoticPrediction(Fraction(coefficient), exponent, residue)

    return _unambiguous(residue, n, build)


def predict_zeta(residue, n: int, i: int) -> AsymptoticPrediction:
    """ζ_q(n,i)；i = 1, 2 时是精确式"""
    residue = get_residue(residue)
    if not 1 <= i <= n:
        raise PreconditionViolated(f"need 1 <= i <= n, got n={n}, i={i}")
    if i == 1:
        return _zero(residue)
    if i == 2:
        if residue == Residue.EVEN:
            return AsymptoticPrediction(Fraction(comb(n, 2)), 1, residue, offset=1, exact=True)
        if residue == Residue.ONE_MOD_4:
            return AsymptoticPrediction(Fraction(2 * comb(n, 2)), 1, residue, offset=1, exact=True)
        if residue == Residue.THREE_MOD_4:
            return _zero(residue)
        raise PreconditionViolated(f"zeta(n,2) needs residue even, 1mod4 or 3mod4, got {residue.value}")
    return AsymptoticPrediction(Fraction(comb(n, i)), i - 1, residue)


def predict_avg_weight_so(residue, n: int, k: int, j: int) -> AsymptoticPrediction:
    """自正交码的平均重量分布第 j 项"""
    residue = get_residue(residue)
    w = _dot_witt_for_residue(residue, n)
    if not 2 <= j <= n or not 1 <= k <= w:
        raise PreconditionViolated(f"need 2 <= j <= n and 1 <= k <= w={w}, got j={j}, k={k}")
    exponent = j - n + k
    if j == 2:
        if residue == Residue.THREE_MOD_4:
            return _zero(residue)
        if residue == Residue.ONE_MOD_4:
            return AsymptoticPrediction(Fraction(2 * comb(n, 2)), exponent, residue)
        if residue != Residue.EVEN:
            raise PreconditionViolated(f"average weight j=2 needs residue even, 1mod4 or 3mod4, got {residue.value}")
    return AsymptoticPrediction(Fraction(comb(n, j)), exponent, residue)


def predict_avg_weight_unrestricted(n: int, k: int, j: int) -> AsymptoticPrediction:
    if not 0 <= j <= n or not 1 <= k <= n:
        raise PreconditionViolated(f"need 0 <= j <= n and 1 <= k <= n, got j={j}, k={k}")
    if j == 0:
        return AsymptoticPrediction(Fraction(1), 0, Residue.ANY, exact=True)
    return AsymptoticPrediction(Fraction(comb(n, j)), j - n + k, Residue.ANY)


def predict_tau(n: int, k: int, w: int) -> AsymptoticPrediction:
    if not 1 <= k <= w or 2 * w > n:
        raise PreconditionViolated(f"need 1 <= k <= w <= n/2, got n={n}, k={k}, w={w}")
    coefficient = 2 if 2 * k == n and k == w else 1
    return AsymptoticPrediction(Fraction(coefficient), k * (n - k) - comb(k + 1, 2), Residue.ANY)


def predict_non_mds_density(n: int, k: int, d: int, residue=Residue.ANY):
    """
    d(C) <= d-1 的自正交码占比

    Returns:
        AsymptoticPrediction；k = n-d+1 = n/2 时返回 BoundsPair
    """
    residue = get_residue(residue)
    w = _dot_witt_for_residue(residue, n)
    if not 4 <= d < n or not 1 <= k <= min(n - d + 1, w):
        raise PreconditionViolated(f"need 4 <= d < n and 1 <= k <= min(n-d+1, w={w}), got d={d}, k={k}")
    if k <= n - d:
        return AsymptoticPrediction(Fraction(comb(n, d - 1)), d + k - n - 2, residue)
    if 2 * k < n:
        return AsymptoticPrediction(Fraction(comb(n, k)), -1, residue)
    return BoundsPair(
        lower=AsymptoticPrediction(Fraction(comb(n, d - 2)), -2, residue),
        upper=AsymptoticPrediction(Fraction(comb(n, d - 1)), -1, residue),
    )


def predict_unrestricted_non_mds_density(n: int, k: int, d: int) -> AsymptoticPrediction:
    if not 2 <= d <= n or not 1 <= k <= n - d + 1:
        raise PreconditionViolated(f"need 2 <= d <= n and 1 <= k <= n-d+1, got d={d}, k={k}")
    return AsymptoticPrediction(Fraction(comb(n, d - 1)), d + k - n - 2, Residue.ANY)


# =============================================================================
# 精确值（q 的函数）
# =============================================================================

def _so_density(tag, n, k, q):
    return Fraction(sigma_so(tag, n, k, q), gaussian_binomial(n, k, q))


def _avg_weight_so(n, k, j, q):
    return Fraction(aggregate_so(q, n, k)[j], sigma_q(n, k, q))


def _non_mds_density(n, k, d, q):
    return Fraction(oracle_low_distance_so_count(q, n, k, d).low, sigma_q(n, k, q))


def _unrestricted_non_mds_density(n, k, d, q):
    return Fraction(oracle_unrestricted_low_distance_count(q, n, k, d).low, gaussian_binomial(n, k, q))


def exact_so_density(tag, n: int, k: int):
    return partial(_so_density, get_type_tag(tag), n, k)


def exact_sigma_so(n: int, k: int):
    return lambda q: sigma_q(n, k, q)


def exact_zeta(n: int, i: int):
    return lambda q: zeta(q, n, i)


def exact_avg_weight_so(n: int, k: int, j: int):
    return partial(_avg_weight_so, n, k, j)


def exact_avg_weight_unrestricted(n: int, k: int, j: int):
    return lambda q: unrestricted_average(q, n, k, j)


def exact_tau(n: int, k: int, w: int):
    return lambda q: tau(n, k, w, q)


def exact_non_mds_density(n: int, k: int, d: int):
    """穷举计算，只适合小 q"""
    return partial(_non_mds_density, n, k, d)


def exact_unrestricted_non_mds_density(n: int, k: int, d: int):
    return partial(_unrestricted_non_mds_density, n, k, d)


# =============================================================================
# 收敛报告
# =============================================================================

@dataclass(frozen=True)
class Sample:
    q: int
    exact: Fraction
    predicted: Fraction
    ratio: Fraction   # predicted = 0 时为 None

    def to_json(self) -> dict:
        return {
            'q': self.q,
            'exact': str(self.exact),
            'predicted': str(self.predicted),
            'ratio': None if self.ratio is None else str(self.ratio),
        }


@dataclass(frozen=True)
class ConvergenceReport:
    parameter: str
    samples: tuple
    verdict: bool

    @property
    def deviations(self) -> list:
        return [abs(s.ratio - 1) for s in self.samples if s.ratio is not None]

    @property
    def improved(self) -> bool:
        """最大 q 处的 |ratio - 1| 严格小于最小 q 处"""
        devs = self.deviations
        return len(devs) >= 2 and devs[-1] < devs[0]

    def to_json(self) -> dict:
        return {
            'parameter': self.parameter,
            'samples': [s.to_json() for s in self.samples],
            'verdict': self.verdict,
        }


def _trend_verdict(deviations: list) -> bool:
    if not deviations:
        return False
    window = deviations[-CONVERGENCE_CONFIG['trend_window']:]
    monotone = all(a >= b for a, b in zip(window, window[1:]))
    return monotone or window[-1] < CONVERGENCE_CONFIG['threshold']


def _evaluate(exact, q_list: list, workers: int) -> list:
    if workers > 1 and len(q_list) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(exact, q_list))
    return [exact(q) for q in q_list]


def _check_ladder(residue: Residue, q_list) -> list:
    bad = [q for q in q_list if not residue.admits(q)]
    if bad:
        raise ResidueMismatch(f"q values {bad} do not satisfy residue {residue.value}")
    return sorted(q_list)


def convergence_report(exact, prediction: AsymptoticPrediction, q_list, parameter: str = "",
                       workers: int = None) -> ConvergenceReport:
    """
    逐个 q 计算 exact / predicted

    verdict：最后 trend_window 个点上 |ratio - 1| 单调不增，或已低于 threshold；
    预测为精确零时要求所有精确值都为 0。

    Raises:
        ResidueMismatch: q_list 中有不满足剩余类约束的 q
    """
    q_list = _check_ladder(prediction.residue, q_list)
    workers = workers or CONVERGENCE_CONFIG['workers']
    values = _evaluate(exact, q_list, workers)

    samples = []
    for q, value in zip(q_list, values):
        value = Fraction(value)
        predicted = prediction.value(q)
        ratio = value / predicted if predicted != 0 else None
        samples.append(Sample(q, value, predicted, ratio))

    if prediction.is_zero:
        verdict = all(s.exact == 0 for s in samples)
    else:
        verdict = _trend_verdict([abs(s.ratio - 1) for s in samples])
    parameter = parameter or prediction.describe()
    log_performance("convergence_report", parameter=parameter, points=len(samples), verdict=verdict)
    logger.info(f"{parameter}: verdict={verdict}")
    return ConvergenceReport(parameter, tuple(samples), verdict)


def bounds_report(exact, bounds: BoundsPair, q_list, parameter: str = "", workers: int = None) -> ConvergenceReport:
    """
    只有上下界时：ratio 取 exact / upper，verdict = 最大 q 处 lower <= exact <= upper
    """
    q_list = _check_ladder(bounds.upper.residue, q_list)
    workers = workers or CONVERGENCE_CONFIG['workers']
    values = _evaluate(exact, q_list, workers)
    samples = []
    for q, value in zip(q_list, values):
        value = Fraction(value)
        upper = bounds.upper.value(q)
        samples.append(Sample(q, value, upper, value / upper))
    last = samples[-1] if samples else None
    verdict = bool(last) and bounds.lower.value(last.q) <= last.exact <= last.predicted
    parameter = parameter or f"[{bounds.lower.describe()}, {bounds.upper.describe()}]"
    return ConvergenceReport(parameter, tuple(samples), verdict)


# =============================================================================
# CLI 目标
# =============================================================================

def build_target(target: str, residue, n: int, k: int = None, d: int = None, j: int = None, type_tag=None,
                 w: int = None):
    """
    按目标名构造 (预测, 精确值函数, 描述)

    target: so-density | sigma | zeta | avg-weight | avg-weight-unrestricted |
            tau | non-mds | unrestricted-non-mds
    """
    residue = get_residue(residue)
    if target == 'so-density':
        if type_tag is None:
            tags = candidate_dot_types(residue, n)
            if len(tags) != 1:
                raise PreconditionViolated(f"type(q,{n}) is not determined by residue {residue.value}; pass --type")
            type_tag = tags.pop()
        prediction = predict_so_density(type_tag, n, k)
        prediction = AsymptoticPrediction(prediction.coefficient, prediction.exponent, residue)
        return prediction, exact_so_density(type_tag, n, k), f"so-density {get_type_tag(type_tag).value} n={n} k={k}"
    if target == 'sigma':
        return predict_sigma_so(residue, n, k), exact_sigma_so(n, k), f"sigma n={n} k={k}"
    if target == 'zeta':
        return predict_zeta(residue, n, j), exact_zeta(n, j), f"zeta n={n} i={j}"
    if target == 'avg-weight':
        return predict_avg_weight_so(residue, n, k, j), exact_avg_weight_so(n, k, j), f"avg-weight n={n} k={k} j={j}"
    if target == 'avg-weight-unrestricted':
        return (predict_avg_weight_unrestricted(n, k, j), exact_avg_weight_unrestricted(n, k, j),
                f"avg-weight-unrestricted n={n} k={k} j={j}")
    if target == 'tau':
        w = _dot_witt_for_residue(residue, n) if w is None else w
        return predict_tau(n, k, w), exact_tau(n, k, w), f"tau n={n} k={k} w={w}"
    if target == 'non-mds':
        return predict_non_mds_density(n, k, d, residue), exact_non_mds_density(n, k, d), f"non-mds n={n} k={k} d={d}"
    if target == 'unrestricted-non-mds':
        return (predict_unrestricted_non_mds_density(n, k, d), exact_unrestricted_non_mds_density(n, k, d),
                f"unrestricted-non-mds n={n} k={k} d={d}")
    raise ValueError(f"Invalid target: {target}. Valid: {list(TARGETS)}")


TARGETS = (
    'so-density', 'sigma', 'zeta', 'avg-weight', 'avg-weight-unrestricted',
    'tau', 'non-mds', 'unrestricted-non-mds',
)
