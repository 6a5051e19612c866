#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json
from typing import TYPE_CHECKING, Any, Dict

import numpy as np

from .. import constants, formats, types
from ..utils import io_utils
from .writer import Writer

if TYPE_CHECKING:
    from ..nn.model import TrainedModel

###############################################################################


class CheckpointWriter(Writer):
    """
    Writes a model checkpoint: header, a JSON echo of the model config and
    training metadata, then every parameter tensor as little-endian float32 in
    layer order (conv1 W, b, conv2 W, b, dense1 W, b, dense2 W, b).
    """

    @classmethod
    def to_bytes(cls, data: "TrainedModel") -> bytes:
        config = json.dumps(
            {"model": data.config.to_dict(), "metadata": data.metadata},
            sort_keys=True,
        ).encode("utf-8")

        header = np.zeros(1, dtype=formats.CHECKPOINT_HEADER)
        header["magic"] = constants.CHECKPOINT_MAGIC
        header["version"] = constants.CHECKPOINT_VERSION
        header["config_length"] = len(config)

        tensors = [
            np.ascontiguousarray(array, dtype=formats.TENSOR_DTYPE).tobytes()
            for array in data.parameter_arrays()
        ]
        return header.tobytes() + config + b"".join(tensors)

    @staticmethod
    def save(
        data: "TrainedModel",
        uri: types.PathLike,
        fs_kwargs: Dict[str, Any] = {},
        **kwargs: Any,
    ) -> None:
        io_utils.write_bytes(uri, CheckpointWriter.to_bytes(data), fs_kwargs=fs_kwargs)
