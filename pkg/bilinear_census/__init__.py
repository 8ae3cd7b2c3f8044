"""
bilinear_census

有限双线性空间 (F_q^n, B) 中 ℓ-互补子空间的精确计数：
类型分类、σ(V,B,k,ℓ) 闭式、重量分布、渐近估计，以及用于交叉校验的穷举 oracle 与均匀采样器。
"""
from .bilinear import BilinearSpace, TypeTag, alternating_block_space, space_from_gram, standard_dot_space
from .census import CensusEntry, census_table, gaussian_binomial, sigma_ell, sigma_so
from .errors import BudgetExceeded, CensusError
from .gf import GaloisField, field_new
from .linalg import Subspace
from .weights import aggregate_ell, zeta

__version__ = "0.1.0"

__all__ = [
    'BilinearSpace',
    'BudgetExceeded',
    'CensusEntry',
    'CensusError',
    'GaloisField',
    'Subspace',
    'TypeTag',
    'aggregate_ell',
    'alternating_block_space',
    'census_table',
    'field_new',
    'gaussian_binomial',
    'sigma_ell',
    'sigma_so',
    'space_from_gram',
    'standard_dot_space',
    'zeta',
]
