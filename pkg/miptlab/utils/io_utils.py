#!/usr/bin/env python
# -*- coding: utf-8 -*-

from pathlib import Path
from typing import Any, Dict, Tuple

from fsspec.core import url_to_fs
from fsspec.spec import AbstractFileSystem

from ..types import PathLike

###############################################################################


def pathlike_to_fs(
    uri: PathLike,
    enforce_exists: bool = False,
    create_parents: bool = False,
    fs_kwargs: Dict[str, Any] = {},
) -> Tuple[AbstractFileSystem, str]:
    """
    Resolve a local path or URI of a dataset, checkpoint or result file to an
    fsspec filesystem and the path on it.

    Parameters
    ----------
    uri: PathLike
        The local or remote path or uri.
    enforce_exists: bool
        Raise FileNotFoundError when the resource is missing.
        Default: False
    create_parents: bool
        Create the parent directory of the resource when it is missing.
        Default: False
    fs_kwargs: Dict[str, Any]
        Any specific keyword arguments to pass down to the fsspec created filesystem.
        Default: {}

    Returns
    -------
    fs: AbstractFileSystem
        The filesystem to operate on.
    path: str
        The full path to the target resource.

    Raises
    ------
    FileNotFoundError
        enforce_exists is set and the resource is not found or is unavailable.
    """
    fs, path = url_to_fs(str(uri) if isinstance(uri, Path) else uri, **fs_kwargs)

    if enforce_exists and not fs.exists(path):
        raise FileNotFoundError(f"{fs.protocol}://{path}")

    if create_parents:
        parent = fs._parent(path)
        if parent and not fs.exists(parent):
            fs.makedirs(parent, exist_ok=True)

    # Callers open the path themselves inside a context manager so no file
    # handle outlives the call that needed it.
    return fs, path


def read_bytes(uri: PathLike, fs_kwargs: Dict[str, Any] = {}) -> bytes:
    fs, path = pathlike_to_fs(uri, enforce_exists=True, fs_kwargs=fs_kwargs)
    with fs.open(path, "rb") as open_resource:
        return open_resource.read()


def write_bytes(uri: PathLike, data: bytes, fs_kwargs: Dict[str, Any] = {}) -> None:
    """Write bytes to a resource, creating parent directories when needed."""
    fs, path = pathlike_to_fs(uri, create_parents=True, fs_kwargs=fs_kwargs)
    with fs.open(path, "wb") as open_resource:
        open_resource.write(data)


def write_text(uri: PathLike, text: str, fs_kwargs: Dict[str, Any] = {}) -> None:
    write_bytes(uri, text.encode("utf-8"), fs_kwargs=fs_kwargs)


def join(directory: PathLike, name: str) -> str:
    return f"{str(directory).rstrip('/')}/{name}"
