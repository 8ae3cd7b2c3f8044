"""
双线性空间 (V, B)

Gram 矩阵对称且非奇异；构造时确定类型标签与 Witt 指数并缓存。
类型：奇数 q 为 P / H / E，偶数 q 为 N1 / N0a / N0na。
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import numpy as np
import orjson

from .errors import (
    Degenerate,
    DimensionMismatch,
    NotSelfOrthogonal,
    NotSymmetric,
    PreconditionViolated,
)
from .gf import GaloisField, field_new
from .linalg import (
    Subspace,
    all_one_vector,
    as_matrix,
    contains,
    determinant,
    identity,
    intersect,
    inverse,
    kernel,
    mat_mul,
    rank,
    rref,
)


class TypeTag(str, Enum):
    P = "P"
    H = "H"
    E = "E"
    N1 = "N1"
    N0A = "N0a"
    N0NA = "N0na"

    @property
    def odd_q(self) -> bool:
        return self in (TypeTag.P, TypeTag.H, TypeTag.E)


def get_type_tag(value) -> TypeTag:
    """按名称取类型标签（'P', 'H', 'E', 'N1', 'N0a', 'N0na'）"""
    if isinstance(value, TypeTag):
        return value
    for tag in TypeTag:
        if tag.value == value:
            return tag
    raise ValueError(f"Invalid type: {value}. Valid: {[t.value for t in TypeTag]}")


def witt_index_for_type(tag: TypeTag, n: int) -> int:
    """给定类型和维数的 Witt 指数"""
    if tag in (TypeTag.P, TypeTag.N1):
        return (n - 1) // 2
    if tag == TypeTag.E:
        return n // 2 - 1
    return n // 2


def dot_type(q: int, n: int) -> TypeTag:
    """标准内积空间 F_q^n 的类型 type(q, n)"""
    if q % 2 == 0:
        return TypeTag.N1 if n % 2 else TypeTag.N0NA
    if n % 2:
        return TypeTag.P
    if n % 4 == 0 or q % 4 == 1:
        return TypeTag.H
    return TypeTag.E


def check_type_matches_q(tag: TypeTag, q: int):
    if tag.odd_q != (q % 2 == 1):
        raise PreconditionViolated(f"type {tag.value} does not occur for q={q}")


class BilinearSpace:
    """非退化对称双线性空间，构造后不可变"""

    def __init__(self, field: GaloisField, gram):
        gram = np.array(gram, dtype=np.int64)
        if gram.ndim != 2 or gram.shape[0] != gram.shape[1] or gram.shape[0] < 1:
            raise DimensionMismatch(f"Gram matrix must be square and non-empty, got shape {gram.shape}")
        if np.any(gram < 0) or np.any(gram >= field.q):
            raise DimensionMismatch(f"Gram entries must lie in [0, {field.q})")
        if not np.array_equal(gram, gram.T):
            raise NotSymmetric("Gram matrix is not symmetric")
        det = determinant(field, gram)
        if det == 0:
            raise Degenerate("Gram matrix is singular")

        gram.setflags(write=False)
        self.field = field
        self.n = gram.shape[0]
        self.gram = gram
        self.det = det
        self.witt = self.witt_index_formula()
        self.type_tag = self._classify()

    def __repr__(self):
        return f"BilinearSpace(q={self.field.q}, n={self.n}, type={self.type_tag.value}, witt={self.witt})"

    # ------------------------------------------------------------------
    # 判别式 / 类型 / Witt 指数
    # ------------------------------------------------------------------

    def is_alternating(self) -> bool:
        return self.field.p == 2 and not np.any(np.diagonal(self.gram))

    def discriminant_is_square(self) -> bool:
        return self.field.is_square(self.det)

    def witt_index_formula(self) -> int:
        n = self.n
        if n % 2:
            return (n - 1) // 2
        if self.field.p == 2:
            return n // 2
        sign = 1 if (n // 2) % 2 == 0 else self.field.neg(1)
        if self.field.is_square(self.field.mul(sign, self.det)):
            return n // 2
        return n // 2 - 1

    def _classify(self) -> TypeTag:
        if self.field.p == 2:
            if self.n % 2:
                return TypeTag.N1
            return TypeTag.N0A if self.is_alternating() else TypeTag.N0NA
        if self.n % 2:
            return TypeTag.P
        return TypeTag.H if self.witt == self.n // 2 else TypeTag.E

    # ------------------------------------------------------------------
    # 形式求值
    # ------------------------------------------------------------------

    def _check_subspace(self, c: Subspace):
        if c.q != self.field.q or c.n != self.n:
            raise DimensionMismatch(f"subspace of F_{c.q}^{c.n} does not live in F_{self.field.q}^{self.n}")

    def form(self, u, v) -> np.ndarray:
        """B(u_i, v_j) 组成的矩阵，u: (a, n)，v: (b, n)"""
        u = as_matrix(u, self.n)
        v = as_matrix(v, self.n)
        return mat_mul(self.field, mat_mul(self.field, u, self.gram), v.T)

    def quadratic_values(self, vectors) -> np.ndarray:
        """批量计算 B(v, v)，vectors 形状 (..., n)"""
        vectors = np.asarray(vectors, dtype=np.int64)
        left = mat_mul(self.field, vectors[..., None, :], self.gram)
        return mat_mul(self.field, left, vectors[..., :, None])[..., 0, 0]

    def restricted_gram(self, c: Subspace) -> np.ndarray:
        self._check_subspace(c)
        return self.form(c.matrix, c.matrix)

    # ------------------------------------------------------------------
    # 正交、根基与补指数
    # ------------------------------------------------------------------

    def orthogonal(self, c: Subspace) -> Subspace:
        """C^⊥ = ker(basis(C) · G)"""
        self._check_subspace(c)
        return kernel(self.field, mat_mul(self.field, c.matrix, self.gram))

    def radical(self, c: Subspace) -> Subspace:
        return intersect(c, self.orthogonal(c))

    def compl_index(self, c: Subspace) -> int:
        """ℓ = dim(C ∩ C^⊥) = dim C - rank(G|_C)"""
        if c.dim == 0:
            self._check_subspace(c)
            return 0
        return c.dim - rank(self.field, self.restricted_gram(c))

    def is_self_orthogonal(self, c: Subspace) -> bool:
        return not np.any(self.restricted_gram(c))

    def is_lcd(self, c: Subspace) -> bool:
        return self.compl_index(c) == 0

    @cached_property
    def isotropic_subspace(self) -> Subspace:
        """
        偶数 q 时 I = {v : B(v,v) = 0}

        特征 2 下 B(v,v) = (Σ sqrt(G_ii) v_i)^2，所以 I 是一个线性方程的解空间。
        """
        if self.field.p != 2:
            raise PreconditionViolated("the isotropic vectors form a subspace only for even q")
        row = np.array([[self.field.sqrt(int(g)) for g in np.diagonal(self.gram)]], dtype=np.int64)
        return kernel(self.field, row)

    # ------------------------------------------------------------------
    # 商空间 U^⊥/U
    # ------------------------------------------------------------------

    def quotient_space(self, u: Subspace) -> "QuotientSpace":
        """
        构造 (U^⊥/U, B_U)

        陪集代表元取 U^⊥ 的 RREF 基中依次不落在 U + 已选代表元张成空间里的行。

        Raises:
            NotSelfOrthogonal: U 不是自正交的
        """
        self._check_subspace(u)
        if u.dim and not self.is_self_orthogonal(u):
            raise NotSelfOrthogonal("quotient requires a self-orthogonal subspace")
        u_perp = self.orthogonal(u)

        chosen = []
        current = u.matrix
        current_rank = u.dim
        for row in u_perp.matrix:
            trial = np.vstack([current, row[None, :]])
            trial_rank = rank(self.field, trial)
            if trial_rank > current_rank:
                chosen.append(row)
                current, current_rank = trial, trial_rank
        reps = as_matrix(chosen, self.n)

        space = BilinearSpace(self.field, self.form(reps, reps)) if len(reps) else None
        return QuotientSpace(parent=self, u=u, u_perp=u_perp, reps=reps, space=space)


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    """U^⊥/U 及其与 V 中包含 U 的子空间之间的双射"""
    parent: BilinearSpace
    u: Subspace
    u_perp: Subspace
    reps: np.ndarray
    space: BilinearSpace = None

    @property
    def dim(self) -> int:
        return len(self.reps)

    @cached_property
    def _coordinate_map(self):
        # U^⊥ 的基 [U; reps] 在主元列上的子矩阵可逆，坐标 = v[主元列] · 逆矩阵
        basis = np.vstack([self.u.matrix, self.reps])
        _, pivots = rref(self.parent.field, basis)
        return list(pivots), inverse(self.parent.field, basis[:, list(pivots)])

    def lift(self, w: Subspace) -> Subspace:
        """商空间的子空间 W ↦ U + span(W 的代表元)"""
        if w.q != self.parent.field.q or w.n != self.dim:
            raise DimensionMismatch(f"subspace of F_{w.q}^{w.n} is not in the {self.dim}-dimensional quotient")
        field = self.parent.field
        lifted = mat_mul(field, w.matrix, self.reps) if w.dim else as_matrix([], self.parent.n)
        return Subspace.span(field, np.vstack([self.u.matrix, lifted]), self.parent.n)

    def project(self, c: Subspace) -> Subspace:
        """U ⊆ C ⊆ U^⊥ 的子空间 C ↦ C/U"""
        field = self.parent.field
        if not contains(c, self.u) or not contains(self.u_perp, c):
            raise ValueError("projection requires U <= C <= U^perp")
        pivots, inv = self._coordinate_map
        coords = mat_mul(field, c.matrix[:, pivots], inv)
        return Subspace.span(field, coords[:, self.u.dim:], self.dim)

    def project_vectors(self, vectors) -> np.ndarray:
        """U^⊥ 中向量在代表元上的坐标"""
        field = self.parent.field
        pivots, inv = self._coordinate_map
        vectors = as_matrix(vectors, self.parent.n)
        return mat_mul(field, vectors[:, pivots], inv)[:, self.u.dim:]


# =============================================================================
# 构造函数
# =============================================================================

def space_from_gram(field: GaloisField, gram) -> BilinearSpace:
    return BilinearSpace(field, gram)


def standard_dot_space(field: GaloisField, n: int) -> BilinearSpace:
    """Gram = 单位阵"""
    if n < 1:
        raise DimensionMismatch(f"dimension must be positive, got {n}")
    return BilinearSpace(field, identity(n))


def alternating_block_space(field: GaloisField, n: int) -> BilinearSpace:
    """
    分块对角 [[0,1],[1,0]] ⊕ ...（偶数 q 下为交错形式，奇数 q 下为双曲型）
    """
    if n < 2 or n % 2:
        raise PreconditionViolated(f"block Gram needs an even dimension, got {n}")
    gram = np.zeros((n, n), dtype=np.int64)
    for i in range(0, n, 2):
        gram[i, i + 1] = gram[i + 1, i] = 1
    return BilinearSpace(field, gram)


def is_dot_space(space: BilinearSpace) -> bool:
    return np.array_equal(space.gram, identity(space.n))


def induced_alternating_dot(space: BilinearSpace, u: Subspace) -> bool:
    """
    标准内积、q 与 n 均为偶数时：B_U 交错 ⇔ 全一向量 ∈ U
    """
    if space.field.p != 2 or space.n % 2:
        raise PreconditionViolated(f"needs even q and even n, got q={space.field.q}, n={space.n}")
    if not is_dot_space(space):
        raise PreconditionViolated("criterion is stated for the standard dot product")
    if u.dim and not space.is_self_orthogonal(u):
        raise NotSelfOrthogonal("U must be self-orthogonal")
    one = Subspace.span(space.field, all_one_vector(space.n), space.n)
    return contains(u, one)


# =============================================================================
# Gram JSON：{"q": int, "gram": [[int, ...], ...]}
# =============================================================================

def gram_from_json(data) -> BilinearSpace:
    if isinstance(data, (bytes, str)):
        data = orjson.loads(data)
    try:
        q = int(data['q'])
        gram = data['gram']
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"malformed Gram document: {e}") from e
    field = field_new(q)
    n = len(gram)
    return BilinearSpace(field, as_matrix(gram, n) if n else gram)


def load_gram_json(path) -> BilinearSpace:
    return gram_from_json(Path(path).read_bytes())


def dump_gram_json(space: BilinearSpace) -> bytes:
    return orjson.dumps({'q': space.field.q, 'gram': space.gram.tolist()})
