"""
σ(V,B,k,ℓ) 的持久化缓存（JSONL）

每行一个 CensusEntry：{"q", "type", "n", "k", "l", "count"}，count 为十进制字符串。
内容寻址：同一个键只会写入同一个值，文件可随时删除。
"""
import threading
from pathlib import Path

import orjson

from .census import CensusEntry
from .log_utils import setup_logger

logger = setup_logger('bilinear_census.cache')


class CensusCache:
    """线程安全的 JSONL 缓存，读入时跳过损坏行"""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries = {}
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        bad = 0
        with open(self.path, 'rb') as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = CensusEntry.from_json(orjson.loads(line))
                except (orjson.JSONDecodeError, KeyError, ValueError, TypeError):
                    bad += 1
                    continue
                self._entries[entry.key] = entry
        if bad:
            logger.warning(f"跳过 {bad} 行无法解析的缓存记录: {self.path}")

    def __len__(self):
        return len(self._entries)

    def get(self, q: int, tag, n: int, k: int, l: int):
        value = tag.value if hasattr(tag, 'value') else tag
        return self._entries.get((q, value, n, k, l))

    def put(self, entry: CensusEntry):
        with self._lock:
            if entry.key in self._entries:
                return
            self._entries[entry.key] = entry
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'ab') as f:
                f.write(orjson.dumps(entry.to_json()) + b"\n")


def open_cache(path):
    """path 为 None 时不使用缓存"""
    return CensusCache(path) if path else None
