#!/usr/bin/env python
# -*- coding: utf-8 -*-

from typing import Optional, Tuple

import numpy as np

from .exceptions import UnexpectedShapeError
from .types import WindowSpec

###############################################################################


def window_sites(window: WindowSpec, n_sites: int) -> np.ndarray:
    """
    Site indices covered by a window, left to right, wrapping periodically.

    Parameters
    ----------
    window: WindowSpec
        The crop descriptor.
    n_sites: int
        Width of the circuit the window is applied to.

    Returns
    -------
    sites: np.ndarray
        `window.width` site indices; the window center sits at position
        `window.width // 2`.
    """
    start = window.center - window.width // 2
    return (start + np.arange(window.width)) % n_sites


def crop_to_window(outcomes: np.ndarray, window: Optional[WindowSpec]) -> np.ndarray:
    """
    Crop outcome matrices of shape (..., T, L) to a window.

    Parameters
    ----------
    outcomes: np.ndarray
        One outcome matrix or a stack of them; the last two axes are layers and
        sites.
    window: Optional[WindowSpec]
        The crop. None returns the input unchanged.

    Returns
    -------
    cropped: np.ndarray
        Array of shape (..., window.depth, window.width).

    Raises
    ------
    UnexpectedShapeError
        The window is deeper or wider than the outcome matrices.
    """
    if window is None:
        return outcomes

    n_layers, n_sites = outcomes.shape[-2:]
    if window.depth > n_layers or window.width > n_sites:
        raise UnexpectedShapeError(
            f"Window {window} does not fit outcome matrices with {n_layers} layers "
            f"and {n_sites} sites."
        )
    if window.depth < 1 or window.width < 1:
        raise UnexpectedShapeError(f"Window {window} is empty.")

    cropped = outcomes[..., : window.depth, :]
    return np.take(cropped, window_sites(window, n_sites), axis=-1)


def pad_to_minimum(images: np.ndarray, minimum: Tuple[int, int]) -> np.ndarray:
    """
    Zero-pad the two spatial axes of an image batch of shape (N, H, W, C) at the
    bottom and right up to `minimum` = (H_min, W_min). Larger images pass through.
    """
    height, width = images.shape[1:3]
    pad_height = max(0, minimum[0] - height)
    pad_width = max(0, minimum[1] - width)
    if pad_height == 0 and pad_width == 0:
        return images

    return np.pad(images, ((0, 0), (0, pad_height), (0, pad_width), (0, 0)))
