from .operator_base import OperatorBase
from .general_worker import WorkerPool
