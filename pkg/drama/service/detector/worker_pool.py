"""
有界线程池

网格单元互相独立；结果按提交顺序组装，与完成顺序无关。
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from drama.config import get_runner_config

logger = logging.getLogger(__name__)

T = TypeVar("T")


def resolve_workers(workers: Optional[int] = None) -> int:
    """显式参数 > 配置/DRAMA_WORKERS > CPU 核数"""
    if workers is None:
        workers = get_runner_config().workers
    if workers is None:
        workers = os.cpu_count() or 1
    return max(1, int(workers))


def run_ordered(
    jobs: Sequence[Callable[[], T]], workers: Optional[int] = None
) -> List[T]:
    """
    执行一组无参任务，按 jobs 顺序返回结果

    任一任务抛出异常时取消尚未开始的任务，并按 jobs 顺序抛出第一个异常。
    """
    jobs = list(jobs)
    if not jobs:
        return []
    workers = min(resolve_workers(workers), len(jobs))
    if workers == 1:
        return [job() for job in jobs]

    logger.debug(f"并行执行 {len(jobs)} 个任务，workers={workers}")
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="drama") as pool:
        futures = [pool.submit(job) for job in jobs]
        try:
            return [future.result() for future in futures]
        except BaseException:
            for future in futures:
                future.cancel()
            raise
