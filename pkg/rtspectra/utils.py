import math
import time
from typing import Any, Optional

import numpy as np


def default_rng(seed: Optional[int] = 42) -> np.random.Generator:
    return np.random.default_rng(seed)


def to_jsonable(obj: Any) -> Any:
    """Converts numpy scalars/arrays and non-finite floats into plain JSON
    values. Non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        return value if math.isfinite(value) else None
    return obj


class Timer:
    def __init__(self) -> None:
        self.start_time = 0.0

    def start(self) -> None:
        self.start_time = time.perf_counter()

    def end(self) -> float:
        return time.perf_counter() - self.start_time
