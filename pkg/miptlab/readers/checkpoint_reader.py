#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json

import numpy as np

from .. import constants, exceptions, formats
from ..nn.model import ModelConfig, TrainedModel, model_from_config
from .reader import Reader

###############################################################################


class CheckpointReader(Reader):
    """
    Reads model checkpoints written by CheckpointWriter. Parameters are stored as
    float32 and widened back to float64 on load.
    """

    MAGIC = constants.CHECKPOINT_MAGIC
    VERSION = constants.CHECKPOINT_VERSION

    @staticmethod
    def _parse(raw: bytes, path: str) -> TrainedModel:
        header_size = formats.CHECKPOINT_HEADER.itemsize
        if len(raw) < header_size:
            raise exceptions.CorruptFileError(
                f"Checkpoint '{path}' is shorter than its {header_size} byte header."
            )
        header = np.frombuffer(raw, dtype=formats.CHECKPOINT_HEADER, count=1)[0]
        config_end = header_size + int(header["config_length"])
        if len(raw) < config_end:
            raise exceptions.CorruptFileError(
                f"Checkpoint '{path}' is truncated inside its config block."
            )

        echo = json.loads(raw[header_size:config_end].decode("utf-8"))
        model = model_from_config(ModelConfig.from_dict(echo["model"]))
        model.metadata = echo.get("metadata", {})

        arrays = []
        offset = config_end
        for target in model.parameter_arrays():
            size = target.size * formats.TENSOR_DTYPE.itemsize
            if len(raw) < offset + size:
                raise exceptions.CorruptFileError(
                    f"Checkpoint '{path}' is truncated inside its parameter tensors."
                )
            tensor = np.frombuffer(
                raw, dtype=formats.TENSOR_DTYPE, count=target.size, offset=offset
            )
            arrays.append(tensor.astype(np.float64).reshape(target.shape))
            offset += size

        model.load_parameter_arrays(arrays)
        return model
