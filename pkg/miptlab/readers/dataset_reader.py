#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np

from .. import constants, exceptions, formats
from ..trajectories import Dataset
from ..types import Axis, WindowSpec
from .reader import Reader

###############################################################################


class DatasetReader(Reader):
    """
    Reads trajectory dataset files written by DatasetWriter.

    Parameters
    ----------
    uri: types.PathLike
        Path or URI of the dataset file.
    fs_kwargs: Dict[str, Any]
        Any specific keyword arguments to pass down to the fsspec created filesystem.
        Default: {}
    """

    MAGIC = constants.DATASET_MAGIC
    VERSION = constants.DATASET_VERSION

    @staticmethod
    def _parse(raw: bytes, path: str) -> Dataset:
        header_size = formats.DATASET_HEADER.itemsize
        if len(raw) < header_size:
            raise exceptions.CorruptFileError(
                f"Dataset file '{path}' holds {len(raw)} bytes, fewer than its "
                f"{header_size} byte header."
            )
        header = np.frombuffer(raw, dtype=formats.DATASET_HEADER, count=1)[0]

        width = int(header["window_width"])
        window = None
        if width > 0:
            window = WindowSpec(
                int(header["window_center"]), width, int(header["window_depth"])
            )
            shape = (window.depth, window.width)
        else:
            shape = (int(header["T"]), int(header["L"]))

        record_dtype = formats.dataset_record(*shape)
        n_records = int(header["n_records"])
        expected = header_size + n_records * record_dtype.itemsize
        if len(raw) != expected:
            problem = "truncated" if len(raw) < expected else "overlong"
            raise exceptions.CorruptFileError(
                f"Dataset file '{path}' is {problem}: header declares {n_records} "
                f"records ({expected} bytes) but the file holds {len(raw)} bytes."
            )

        records = np.frombuffer(
            raw, dtype=record_dtype, count=n_records, offset=header_size
        )
        axis_code = int(header["axis"])
        return Dataset(
            L=int(header["L"]),
            T=int(header["T"]),
            p=float(header["p"]),
            circuit_seed=int(header["circuit_seed"]),
            axis=None if axis_code == constants.AXIS_NONE_CODE else Axis(axis_code),
            window=window,
            outcomes=records["outcomes"].copy(),
            labels=records["label"].copy(),
            trajectory_seeds=records["trajectory_seed"].astype(np.uint64),
        )
