#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Binary layouts of dataset and model checkpoint files. Little-endian throughout.
"""

import numpy as np

###############################################################################

DATASET_HEADER = np.dtype(
    [
        ("magic", "S8"),
        ("version", "<u2"),
        ("L", "<u2"),
        ("T", "<u2"),
        ("p", "<f8"),
        ("circuit_seed", "<u8"),
        ("axis", "u1"),
        ("window_center", "<u2"),
        ("window_width", "<u2"),
        ("window_depth", "<u2"),
        ("n_records", "<u8"),
    ]
)

CHECKPOINT_HEADER = np.dtype(
    [
        ("magic", "S8"),
        ("version", "<u2"),
        ("config_length", "<u4"),
    ]
)

TENSOR_DTYPE = np.dtype("<f4")

###############################################################################


def dataset_record(depth: int, width: int) -> np.dtype:
    """One record: outcome matrix, label, trajectory seed."""
    return np.dtype(
        [
            ("outcomes", "i1", (depth, width)),
            ("label", "i1"),
            ("trajectory_seed", "<u8"),
        ]
    )
