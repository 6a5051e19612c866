#!/usr/bin/env python
# -*- coding: utf-8 -*-

from abc import ABC, abstractmethod
from typing import Any, Dict

from .. import types

###############################################################################


class Writer(ABC):
    """
    A small class to build standardized binary writers for miptlab artifacts.
    """

    @staticmethod
    @abstractmethod
    def save(
        data: Any,
        uri: types.PathLike,
        fs_kwargs: Dict[str, Any] = {},
        **kwargs: Any,
    ) -> None:
        """
        Write an artifact to a file.

        Parameters
        ----------
        data: Any
            The object to store (a Dataset, a TrainedModel, ...).
        uri: types.PathLike
            The URI or local path for where to save the data.
        fs_kwargs: Dict[str, Any]
            Any specific keyword arguments to pass down to the fsspec created
            filesystem.
            Default: {}

        Examples
        --------
        >>> dataset = generate_dataset(build_circuit(spec), 1000)
        ... DatasetWriter.save(dataset, "s3://bucket/circuit-0.mipt")
        """

    @classmethod
    @abstractmethod
    def to_bytes(cls, data: Any) -> bytes:
        """Serialize the artifact to the exact bytes `save` writes."""
