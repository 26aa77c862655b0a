"""
integra.core.base.general_worker
================================
A WorkerPool runs a function over many tasks in separate processes and returns the results in task order, whichever
process finished first. With a single worker everything runs in the calling process, which keeps debugging and
profiling simple.

The function and the tasks must be picklable (a module level function and plain values).
"""
import logging
from concurrent.futures import ProcessPoolExecutor


class WorkerPool:
    def __init__(self, workers=1, chunksize=1):
        """
        :param workers: number of worker processes (1 runs in process)
        :type workers: int
        :param chunksize: number of tasks handed to a process at once
        :type chunksize: int
        """
        self.logger = logging.getLogger(__name__)
        if workers < 1 or chunksize < 1:
            raise ValueError('workers and chunksize should be positive')
        self.workers = int(workers)
        self.chunksize = int(chunksize)
        self._executor = None

    def map(self, function, tasks):
        """
        Apply function to every task.

        :return: the results, in the order of the tasks
        :rtype: list
        """
        tasks = list(tasks)
        if self.workers == 1 or len(tasks) <= 1:
            return [function(task) for task in tasks]
        if self._executor is None:
            self.logger.debug(f'starting {self.workers} worker processes')
            self._executor = ProcessPoolExecutor(max_workers=self.workers)
        return list(self._executor.map(function, tasks, chunksize=self.chunksize))

    def close(self):
        """Gracefully stop the worker processes (they are started again by the next map)."""
        if self._executor is not None:
            self.logger.debug('stopping worker processes')
            self._executor.shutdown(wait=True)
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
