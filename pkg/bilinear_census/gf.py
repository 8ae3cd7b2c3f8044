"""
有限域 F_q 运算（q 为素数幂，q <= 2^16）

元素用 [0, q) 的稠密整数编码：下标的 p 进制展开即多项式基下的系数
（第 i 位是 x^i 的系数）。0 是加法单位元，1 是乘法单位元。
所有运算既接受 int 也接受 numpy 整数数组（逐元素计算）。
"""
import itertools
from functools import lru_cache

import numpy as np

from .config import FIELD_LIMITS
from .errors import DivisionByZero, NotAPrimePower, OutOfRange, ZeroArgument

FieldElement = int


def prime_power_decomposition(q: int) -> tuple[int, int]:
    """
    分解 q = p^e

    Returns:
        (p, e)
    """
    if q < 2:
        raise NotAPrimePower(f"{q} is not a prime power")
    p = None
    m = q
    d = 2
    while d * d <= m:
        if m % d == 0:
            p = d
            break
        d += 1
    if p is None:
        return q, 1
    e = 0
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise NotAPrimePower(f"{q} has at least two distinct prime factors")
    return p, e


# =============================================================================
# F_p 上的多项式（系数元组，低次在前）
# =============================================================================

def _poly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p: int) -> list:
    """a mod m，m 首一"""
    a = _poly_trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _is_irreducible(poly: tuple, p: int) -> bool:
    """穷举所有次数 <= e/2 的首一多项式做试除"""
    e = len(poly) - 1
    if e <= 1:
        return True
    if poly[0] == 0:
        return False
    for d in range(1, e // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            divisor = tuple(reversed(lower)) + (1,)
            if not _poly_mod(poly, divisor, p):
                return False
    return True


def least_irreducible(p: int, e: int) -> tuple:
    """
    字典序最小的 e 次首一不可约多项式

    候选按 (c_{e-1}, ..., c_0) 的字典序遍历，返回低次在前的系数元组（含首项 1）。
    """
    if e == 1:
        return ()
    for high_to_low in itertools.product(range(p), repeat=e):
        poly = tuple(reversed(high_to_low)) + (1,)
        if _is_irreducible(poly, p):
            return poly
    raise RuntimeError(f"no irreducible polynomial of degree {e} over F_{p}")


def _distinct_prime_factors(m: int) -> list:
    factors = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    return factors


class GaloisField:
    """F_q，构造时预计算 log/antilog 表，构造后不可变"""

    def __init__(self, q: int):
        if q > FIELD_LIMITS['max_q']:
            raise OutOfRange(f"q={q} exceeds the supported maximum {FIELD_LIMITS['max_q']}")
        p, e = prime_power_decomposition(q)
        self.q = q
        self.p = p
        self.e = e
        self.modulus = least_irreducible(p, e)

        # 每个元素的 p 进制数字，以及把数字还原为下标用的位权
        self._place = p ** np.arange(e, dtype=np.int64)
        self._digits = (np.arange(q, dtype=np.int64)[:, None] // self._place[None, :]) % p

        self._log = np.zeros(q, dtype=np.int64)
        self._exp = np.zeros(2 * (q - 1), dtype=np.int64)
        self._build_tables()

    def __repr__(self):
        return f"GaloisField(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, GaloisField) and other.q == self.q

    def __hash__(self):
        return hash(('GF', self.q))

    def __reduce__(self):
        return (field_new, (self.q,))

    # ------------------------------------------------------------------
    # 表的构造
    # ------------------------------------------------------------------

    def _slow_mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        da = self._digits[a].tolist()
        db = self._digits[b].tolist()
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        reduced = _poly_mod(prod, self.modulus, self.p)
        return sum(c * self.p ** i for i, c in enumerate(reduced))

    def _slow_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            k >>= 1
        return result

    def _find_generator(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _distinct_prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise RuntimeError(f"no primitive element found in F_{self.q}")

    def _build_tables(self):
        order = self.q - 1
        g = self._find_generator()
        x = 1
        for i in range(order):
            self._exp[i] = x
            self._log[x] = i
            x = self._slow_mul(x, g)
        self._exp[order:] = self._exp[:order]

    # ------------------------------------------------------------------
    # 元素运算
    # ------------------------------------------------------------------

    @staticmethod
    def _wrap(result, *args):
        if all(isinstance(a, (int, np.integer)) for a in args):
            return int(result)
        return result

    def _from_digits(self, digits):
        return digits @ self._place

    def add(self, a, b):
        if self.p == 2:
            return self._wrap(np.bitwise_xor(a, b), a, b)
        if self.e == 1:
            return self._wrap((np.asarray(a) + np.asarray(b)) % self.p, a, b)
        return self._wrap(self._from_digits((self._digits[a] + self._digits[b]) % self.p), a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        if self.e == 1:
            return self._wrap((-np.asarray(a)) % self.p, a)
        return self._wrap(self._from_digits((-self._digits[a]) % self.p), a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return self._wrap((np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.p, a, b)
        a_arr = np.asarray(a)
        b_arr = np.asarray(b)
        result = self._exp[self._log[a_arr] + self._log[b_arr]]
        result = np.where((a_arr == 0) | (b_arr == 0), 0, result)
        return self._wrap(result, a, b)

    def inv(self, a):
        a_arr = np.asarray(a)
        if np.any(a_arr == 0):
            raise DivisionByZero(f"inverse of 0 in F_{self.q}")
        result = self._exp[(self.q - 1 - self._log[a_arr]) % (self.q - 1)]
        return self._wrap(result, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a: int, k: int) -> int:
        """a^k，k >= 0"""
        if a == 0:
            return 0 if k > 0 else 1
        return int(self._exp[(int(self._log[a]) * k) % (self.q - 1)])

    def is_square(self, a: int) -> bool:
        """a 是否属于非零平方集合 Q_q"""
        if a == 0:
            raise ZeroArgument("isSquare is only defined for nonzero elements")
        if self.p == 2:
            return True
        return self.power(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int) -> int:
        """偶特征下 Frobenius 的逆：a^(q/2)"""
        if self.p != 2:
            raise NotImplementedError("sqrt is only provided for even q")
        return self.power(a, self.q // 2)

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field_new(q: int) -> GaloisField:
    """构造（并缓存）F_q"""
    if q > FIELD_LIMITS['max_q']:
        raise OutOfRange(f"q={q} exceeds the supported maximum {FIELD_LIMITS['max_q']}")
    if q < FIELD_LIMITS['min_q']:
        raise NotAPrimePower(f"{q} is not a prime power")
    return GaloisField(q)
