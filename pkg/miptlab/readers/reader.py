#!/usr/bin/env python
# -*- coding: utf-8 -*-

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from fsspec.spec import AbstractFileSystem

from .. import exceptions, types
from ..utils import io_utils

###############################################################################


class Reader(ABC):
    """
    A small class to build standardized readers for miptlab binary artifacts.

    Parameters
    ----------
    uri: types.PathLike
        Path or URI of the file to read.
    fs_kwargs: Dict[str, Any]
        Any specific keyword arguments to pass down to the fsspec created filesystem.
        Default: {}

    Raises
    ------
    exceptions.UnsupportedFileFormatError
        The file does not start with the magic bytes and version of this reader.

    Notes
    -----
    The file is validated on construction and parsed lazily on first access to
    `data`.
    """

    _data: Optional[Any] = None
    _fs: AbstractFileSystem
    _path: str

    MAGIC: bytes = b""
    VERSION: int = 0

    @staticmethod
    @abstractmethod
    def _parse(raw: bytes, path: str) -> Any:
        """
        Parse the full file contents into the artifact object.

        Raises
        ------
        exceptions.CorruptFileError
            The contents are shorter than the header implies.
        """

    @classmethod
    def _is_supported_file(cls, fs: AbstractFileSystem, path: str) -> bool:
        prefix_size = len(cls.MAGIC) + 2
        with fs.open(path, "rb") as open_resource:
            prefix = open_resource.read(prefix_size)

        if len(prefix) < prefix_size or prefix[: len(cls.MAGIC)] != cls.MAGIC:
            return False
        return int.from_bytes(prefix[len(cls.MAGIC) :], "little") == cls.VERSION

    @classmethod
    def is_supported_file(
        cls, uri: types.PathLike, fs_kwargs: Dict[str, Any] = {}
    ) -> bool:
        """
        Asserts that the provided file is supported by the current Reader.

        Parameters
        ----------
        uri: types.PathLike
            The filepath to validate.
        fs_kwargs: Dict[str, Any]
            Any specific keyword arguments to pass down to the fsspec created
            filesystem.
            Default: {}

        Returns
        -------
        supported: bool
            Whether the magic bytes and version match this reader.
        """
        fs, path = io_utils.pathlike_to_fs(
            uri, enforce_exists=True, fs_kwargs=fs_kwargs
        )
        return cls._is_supported_file(fs, path)

    def __init__(self, uri: types.PathLike, fs_kwargs: Dict[str, Any] = {}):
        self._fs, self._path = io_utils.pathlike_to_fs(
            uri, enforce_exists=True, fs_kwargs=fs_kwargs
        )
        if not self._is_supported_file(self._fs, self._path):
            raise exceptions.UnsupportedFileFormatError(
                self.__class__.__name__,
                self._path,
                f"Expected magic {self.MAGIC!r} with version {self.VERSION}.",
            )

    @property
    def data(self) -> Any:
        if self._data is None:
            with self._fs.open(self._path, "rb") as open_resource:
                raw = open_resource.read()
            self._data = self._parse(raw, self._path)

        return self._data

    def __str__(self) -> str:
        return f"<{self.__class__.__name__} [path: {self._path}]>"

    def __repr__(self) -> str:
        return str(self)
