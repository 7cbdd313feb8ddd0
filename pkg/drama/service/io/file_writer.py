"""
原子文件写入

先写同目录临时文件再 os.replace；所有写操作经同一把可重入锁串行（读-改-写的追加也持有它）。
"""

import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Callable, TextIO, Union

from drama.base.error_exceptions import DramaIOError

logger = logging.getLogger(__name__)

WRITE_LOCK = threading.RLock()


def atomic_write(path: Union[str, Path], write: Callable[[TextIO], None]) -> Path:
    """以 UTF-8、\\n 换行写出文件"""
    target = Path(path)
    with WRITE_LOCK:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, temp_name = tempfile.mkstemp(
                prefix=f".{target.name}.", suffix=".tmp", dir=target.parent
            )
        except OSError as e:
            raise DramaIOError(f"无法创建临时文件: {e}", str(target))
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                write(handle)
            os.replace(temp_name, target)
        except OSError as e:
            raise DramaIOError(f"写入失败: {e}", str(target))
        finally:
            if os.path.exists(temp_name):
                os.remove(temp_name)
    logger.debug(f"已写入 {target}")
    return target


def atomic_write_text(path: Union[str, Path], text: str) -> Path:
    return atomic_write(path, lambda handle: handle.write(text))
