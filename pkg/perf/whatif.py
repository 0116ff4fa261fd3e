"""
What-if tables: predicted minutes over a grid of image counts, epochs and threads.

Layout: one block of rows per thread count, one row per (i, it) image scale,
one ep_<E> column per epoch count.
"""
from pathlib import Path
from typing import Sequence, Tuple, Union

import pandas as pd

from components.perf_params import PerfModelParams, WorkloadSpec
from perf.model import predict_time
from perf.presets import DEFAULT_EPOCHS, DEFAULT_IMAGES, DEFAULT_THREADS


def what_if(params: PerfModelParams,
            images: Sequence[Tuple[int, int]] = DEFAULT_IMAGES,
            epochs: Sequence[int] = DEFAULT_EPOCHS,
            threads: Sequence[int] = DEFAULT_THREADS) -> pd.DataFrame:
    """
    Predicted minutes for every (p, i, it, ep) in the grid

    Args:
        params: Model parameters
        images: (i, it) pairs, one row each
        epochs: Epoch counts, one column each
        threads: Thread counts, one block each

    Returns:
        DataFrame with columns threads, i, it, ep_<E>...
    """
    rows = []
    for p in threads:
        for i, it in images:
            row = {"threads": p, "i": i, "it": it}
            for ep in epochs:
                row[f"ep_{ep}"] = predict_time(params, WorkloadSpec(i, it, ep, p)) / 60.0
            rows.append(row)
    columns = ["threads", "i", "it"] + [f"ep_{ep}" for ep in epochs]
    return pd.DataFrame(rows, columns=columns)


def write_what_if(path: Union[str, Path], table: pd.DataFrame) -> Path:
    path = Path(path)
    table.to_csv(path, index=False, float_format="%.4f")
    return path
