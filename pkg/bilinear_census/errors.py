"""
异常定义

所有库异常都继承自 CensusError，同时继承最接近的内置异常，
调用方按内置异常捕获时仍然有效。
"""


class CensusError(Exception):
    """bilinear_census 所有异常的基类"""


# =============================================================================
# 有限域
# =============================================================================

class NotAPrimePower(CensusError, ValueError):
    """q 不是素数幂"""


class OutOfRange(CensusError, ValueError):
    """参数超出支持范围（例如 q > 2^16）"""


class DivisionByZero(CensusError, ZeroDivisionError):
    """对 0 求逆"""


class ZeroArgument(CensusError, ValueError):
    """参数不能为 0（isSquare 不接受 0）"""


# =============================================================================
# 线性代数 / 双线性空间
# =============================================================================

class DimensionMismatch(CensusError, ValueError):
    """子空间/矩阵的域或维数不一致"""


class NotSymmetric(CensusError, ValueError):
    """Gram 矩阵不对称"""


class Degenerate(CensusError, ValueError):
    """Gram 矩阵奇异"""


class NotSelfOrthogonal(CensusError, ValueError):
    """子空间不是自正交的"""


class BudgetExceeded(CensusError, RuntimeError):
    """穷举规模超过预算，带上出问题的 (q, n, k)"""

    def __init__(self, what: str, requested: int, limit: int, q=None, n=None, k=None):
        self.what = what
        self.requested = requested
        self.limit = limit
        self.q = q
        self.n = n
        self.k = k
        super().__init__(
            f"{what}: {requested} exceeds budget {limit} (q={q}, n={n}, k={k})"
        )


# =============================================================================
# 计数公式
# =============================================================================

class PreconditionViolated(CensusError, ValueError):
    """参数不满足公式前提"""


class UnsupportedType(CensusError, ValueError):
    """该类型不适用此公式"""


class NonIntegralResult(CensusError, ArithmeticError):
    """应当整除的地方出现了余数"""


class InternalInconsistency(CensusError, RuntimeError):
    """两条独立计算路径给出的结果不一致"""


class WittViolation(InternalInconsistency):
    """oracle 找到了维数不等于 Witt 指数的极大自正交子空间"""


class ResidueMismatch(CensusError, ValueError):
    """q 不满足预测式的剩余类约束"""


# =============================================================================
# oracle / sampler
# =============================================================================

class ZeroCode(CensusError, ValueError):
    """零码没有最小距离"""


class EmptyStratum(CensusError, ValueError):
    """σ(n,k,ℓ) = 0，没有可采样的码"""


class MaxRejectionsExceeded(CensusError, RuntimeError):
    """拒绝采样次数用尽"""

    def __init__(self, message: str, attempts: int, accepted: int = 0):
        self.attempts = attempts
        self.accepted = accepted
        self.acceptance_rate = accepted / attempts if attempts else 0.0
        super().__init__(f"{message} (attempts={attempts}, acceptance_rate={self.acceptance_rate:.3g})")
