# adave/models/_arrays.py

"""Helpers for pydantic models that carry numpy arrays."""

import numpy as np
from pydantic import ConfigDict

ARRAY_MODEL_CONFIG = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def frozen_array(value, dtype) -> np.ndarray:
    """
    Copy value into a C-contiguous read-only array of the given dtype.

    Raises:
        ValueError: Values outside the range of an integer dtype
    """
    dtype = np.dtype(dtype)
    if np.issubdtype(dtype, np.integer):
        source = np.asarray(value)
        if source.size and source.dtype.kind in "iuf":
            info = np.iinfo(dtype)
            low, high = source.min(), source.max()
            if not (info.min <= low and high <= info.max):
                raise ValueError(
                    f"values span [{low}, {high}], outside the {dtype} range "
                    f"[{info.min}, {info.max}]"
                )
    arr = np.array(value, dtype=dtype, copy=True, order="C")
    arr.flags.writeable = False
    return arr
