#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Census Configuration
"""
import os
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent.parent

# =============================================================================
# Field Limits
# =============================================================================

FIELD_LIMITS = {
    'min_q': 2,
    'max_q': 2 ** 16,  # log/antilog 表大小上限
}

# =============================================================================
# Oracle Budget Config
# =============================================================================

ORACLE_BUDGET_CONFIG = {
    'max_subspaces': 10 ** 8,   # 单次穷举的子空间数上限
    'max_codewords': 10 ** 7,   # 单个码的码字数上限 (q^k)
    'chunk_size': 1 << 15,      # 每个 RREF 块的子空间个数
    'codeword_chunk': 1 << 20,  # 每块码字总数 (子空间数 * q^k)
    'workers': 1,               # >1 时按主元集合分给多个进程
    'show_progress': False,     # tqdm 进度条
}

# =============================================================================
# Sampler Config
# =============================================================================

SAMPLER_CONFIG = {
    'seed': 20240601,
    'max_rejections': 10 ** 6,
}

# =============================================================================
# Asymptotics Config
# =============================================================================

# 各剩余类的默认 q 序列
RESIDUE_LADDERS = {
    'even': (2, 4, 8, 16, 32),
    '1mod4': (5, 9, 13, 17, 25),
    '3mod4': (3, 7, 11, 19, 23),
    'odd': (3, 5, 7, 9, 11, 13, 17, 19, 23, 25),
    'any': (2, 3, 4, 5, 7, 8, 9, 11, 13, 16),
}

CONVERGENCE_CONFIG = {
    'threshold': 0.05,   # |ratio - 1| 低于此值视为已收敛
    'trend_window': 3,   # 单调性检查看最后几个点
    'workers': 1,
}

# =============================================================================
# Cache / Log Config
# =============================================================================

CACHE_CONFIG = {
    'env_var': 'BILINEAR_CENSUS_CACHE',
    'default_path': None,  # None = 不使用缓存
}

LOG_CONFIG = {
    'log_dir': PROJECT_ROOT / "logs",
    'running_log': PROJECT_ROOT / "logs" / "running.log",
    'enable_file_logging': False,
    'enable_performance_log': False,
}


def get_residue_ladder(residue: str) -> tuple:
    """
    获取剩余类对应的默认 q 序列

    Args:
        residue: 剩余类 ('even', '1mod4', '3mod4', 'odd', 'any')

    Returns:
        q 的元组（递增）
    """
    if residue not in RESIDUE_LADDERS:
        raise ValueError(f"Invalid residue: {residue}. Valid: {list(RESIDUE_LADDERS.keys())}")
    return RESIDUE_LADDERS[residue]


def get_cache_path(cli_value=None):
    """
    确定缓存文件路径：环境变量优先于命令行参数，都没有时用默认值

    Returns:
        Path 或 None
    """
    env_value = os.environ.get(CACHE_CONFIG['env_var'])
    if env_value:
        return Path(env_value)
    if cli_value:
        return Path(cli_value)
    default = CACHE_CONFIG['default_path']
    return Path(default) if default else None


def get_oracle_config(**overrides) -> dict:
    """
    获取 oracle 预算配置（可覆盖部分字段）
    """
    unknown = [key for key in overrides if key not in ORACLE_BUDGET_CONFIG]
    if unknown:
        raise ValueError(f"Invalid oracle config keys: {unknown}. Valid: {list(ORACLE_BUDGET_CONFIG.keys())}")

    config = ORACLE_BUDGET_CONFIG.copy()
    config.update({key: value for key, value in overrides.items() if value is not None})
    return config
