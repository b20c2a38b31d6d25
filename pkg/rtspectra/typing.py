"""Array and frequency aliases used across the package."""
from typing import Tuple

import numpy as np
import numpy.typing as npt

NDFloat = npt.NDArray[np.float64]
NDInt = npt.NDArray[np.int64]
NDBool = npt.NDArray[np.bool_]

# horizontal frequency (ξ₁, ξ₂)
Frequency = Tuple[float, float]
