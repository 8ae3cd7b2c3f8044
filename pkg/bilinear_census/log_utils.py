"""
日志工具：logger 配置与性能日志
"""
import logging
import sys
from datetime import datetime

from .config import LOG_CONFIG


def setup_logger(name: str, log_file: str = None, console_output: bool = True, enable_file: bool = None):
    """配置日志（控制台输出到 stderr，stdout 只留给数据）"""
    logger = logging.getLogger(name)
    logger.setLevel(logging.INFO)

    if logger.handlers:
        return logger

    if enable_file is None:
        enable_file = LOG_CONFIG['enable_file_logging']

    formatter = logging.Formatter('%(asctime)s - %(processName)s - %(levelname)s - %(message)s')

    if console_output:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(formatter)
        console_handler.setLevel(logging.WARNING)
        logger.addHandler(console_handler)

    if log_file and enable_file:
        LOG_CONFIG['log_dir'].mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(LOG_CONFIG['log_dir'] / log_file, encoding='utf-8')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def log_performance(stage, **metrics):
    """记录性能日志到 running.log（LOG_CONFIG 中关闭时直接返回）"""
    if not LOG_CONFIG['enable_performance_log']:
        return
    timestamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
    metrics_str = " | ".join([f"{k}={v}" for k, v in metrics.items()])
    log_line = f"[{timestamp}] {stage} | {metrics_str}\n"
    running_log = LOG_CONFIG['running_log']
    running_log.parent.mkdir(parents=True, exist_ok=True)
    with open(running_log, 'a', encoding='utf-8') as f:
        f.write(log_line)
