#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .. import get_module_version
from ..types import PathLike
from ..utils import io_utils

###############################################################################

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"

###############################################################################


def write_table(
    rows: Sequence[Dict[str, Any]],
    uri: PathLike,
    columns: Optional[Sequence[str]] = None,
    fs_kwargs: Dict[str, Any] = {},
) -> pd.DataFrame:
    """
    Write result rows as CSV with a header row.

    Parameters
    ----------
    rows: Sequence[Dict[str, Any]]
        One mapping per row, already in output order.
    uri: PathLike
        Destination.
    columns: Optional[Sequence[str]]
        Column order. Default: the key order of the first row.
    fs_kwargs: Dict[str, Any]
        Keyword arguments for the fsspec filesystem.
        Default: {}

    Returns
    -------
    table: pd.DataFrame
        The table that was written.
    """
    table = pd.DataFrame(list(rows), columns=list(columns) if columns else None)
    io_utils.write_text(uri, table.to_csv(index=False), fs_kwargs=fs_kwargs)
    log.info(f"Wrote {len(table)} rows to {uri}")
    return table


def write_manifest(
    out_dir: PathLike,
    subcommand: str,
    config: Dict[str, Any],
    outputs: List[str],
    fs_kwargs: Dict[str, Any] = {},
) -> str:
    """Write manifest.json: subcommand, config echo, package version, outputs."""
    manifest = {
        "subcommand": subcommand,
        "config": config,
        "version": get_module_version(),
        "outputs": sorted(outputs),
    }
    uri = io_utils.join(out_dir, MANIFEST_NAME)
    io_utils.write_text(
        uri, json.dumps(manifest, sort_keys=True, indent=2) + "\n", fs_kwargs=fs_kwargs
    )
    return uri
