#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from typing import TYPE_CHECKING, Any, Dict

import numpy as np

from .. import constants, formats, types
from ..utils import io_utils
from .writer import Writer

if TYPE_CHECKING:
    from ..trajectories import Dataset

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


class DatasetWriter(Writer):
    """
    Writes a labelled trajectory dataset: a fixed header followed by one
    fixed-size record (outcomes, label, trajectory seed) per trajectory.
    """

    @classmethod
    def to_bytes(cls, data: "Dataset") -> bytes:
        header = np.zeros(1, dtype=formats.DATASET_HEADER)
        header["magic"] = constants.DATASET_MAGIC
        header["version"] = constants.DATASET_VERSION
        header["L"] = data.L
        header["T"] = data.T
        header["p"] = data.p
        header["circuit_seed"] = data.circuit_seed
        header["axis"] = (
            constants.AXIS_NONE_CODE if data.axis is None else int(data.axis)
        )
        if data.window is not None:
            header["window_center"] = data.window.center
            header["window_width"] = data.window.width
            header["window_depth"] = data.window.depth
        header["n_records"] = len(data)

        depth, width = data.image_shape
        records = np.zeros(len(data), dtype=formats.dataset_record(depth, width))
        records["outcomes"] = data.outcomes
        records["label"] = data.labels
        records["trajectory_seed"] = data.trajectory_seeds

        return header.tobytes() + records.tobytes()

    @staticmethod
    def save(
        data: "Dataset",
        uri: types.PathLike,
        fs_kwargs: Dict[str, Any] = {},
        **kwargs: Any,
    ) -> None:
        """
        Write a Dataset to any fsspec filesystem.

        Parameters
        ----------
        data: Dataset
            The dataset to store.
        uri: types.PathLike
            The URI or local path for where to save the data.
        fs_kwargs: Dict[str, Any]
            Any specific keyword arguments to pass down to the fsspec created
            filesystem.
            Default: {}
        """
        payload = DatasetWriter.to_bytes(data)
        io_utils.write_bytes(uri, payload, fs_kwargs=fs_kwargs)
        log.debug(f"Wrote {len(data)} records ({len(payload)} bytes) to {uri}")
