#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Numpy layers with explicit forward and backward passes.

Activations are channels-last: image batches are (N, H, W, C), dense batches
(N, features). Every layer keeps what its backward pass needs from the last
forward call, so a layer instance serves one forward/backward pair at a time.
"""

from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.special import expit

###############################################################################


def he_uniform(
    rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int
) -> np.ndarray:
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape)


def glorot_uniform(
    rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int, fan_out: int
) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


###############################################################################


class Layer(ABC):
    """
    Base class of all layers.

    Attributes
    ----------
    params: Dict[str, np.ndarray]
        Trainable tensors by name ("W", "b"); empty for parameter-free layers.
    grads: Dict[str, np.ndarray]
        Gradients of the last backward pass, same keys and shapes as params.
    """

    name: str = "layer"

    def __init__(self) -> None:
        self.params: Dict[str, np.ndarray] = {}
        self.grads: Dict[str, np.ndarray] = {}

    @abstractmethod
    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        pass

    @abstractmethod
    def backward(self, dout: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        """Output shape for a single sample of the given shape (no batch axis)."""

    def parameter_count(self) -> int:
        return int(sum(param.size for param in self.params.values()))

    def __repr__(self) -> str:
        shapes = {key: value.shape for key, value in self.params.items()}
        return f"<{self.__class__.__name__} {shapes}>"


class Conv2D(Layer):
    """
    2D convolution (cross-correlation) with valid padding and unit stride.

    Parameters
    ----------
    in_channels: int
        Channels of the input.
    filters: int
        Output channels.
    kernel_size: Tuple[int, int]
        Kernel height and width.
    rng: np.random.Generator
        Source of the He-uniform initial weights. Biases start at zero.
    """

    name = "conv"

    def __init__(
        self,
        in_channels: int,
        filters: int,
        kernel_size: Tuple[int, int],
        rng: np.random.Generator,
    ):
        super().__init__()
        kh, kw = kernel_size
        self.kernel_size = (kh, kw)
        self.params["W"] = he_uniform(
            rng, (kh, kw, in_channels, filters), fan_in=kh * kw * in_channels
        )
        self.params["b"] = np.zeros(filters)
        self._windows: Optional[np.ndarray] = None
        self._input_shape: Tuple[int, ...] = ()

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        h, w, _ = input_shape
        kh, kw = self.kernel_size
        return (h - kh + 1, w - kw + 1, self.params["W"].shape[3])

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        # windows: (N, H', W', C, kh, kw)
        windows = sliding_window_view(x, self.kernel_size, axis=(1, 2))
        self._windows = windows
        self._input_shape = x.shape
        out = np.tensordot(windows, self.params["W"], axes=([3, 4, 5], [2, 0, 1]))
        return out + self.params["b"]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._windows is not None
        kh, kw = self.kernel_size
        W = self.params["W"]

        self.grads["W"] = np.tensordot(
            self._windows, dout, axes=([0, 1, 2], [0, 1, 2])
        ).transpose(1, 2, 0, 3)
        self.grads["b"] = dout.sum(axis=(0, 1, 2))

        # Full correlation of the padded output gradient with the flipped kernel
        padded = np.pad(dout, ((0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1), (0, 0)))
        windows = sliding_window_view(padded, (kh, kw), axis=(1, 2))
        flipped = W[::-1, ::-1]
        return np.tensordot(windows, flipped, axes=([3, 4, 5], [3, 0, 1]))


class ReLU(Layer):
    name = "relu"

    def __init__(self) -> None:
        super().__init__()
        self._mask: Optional[np.ndarray] = None

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        return input_shape

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._mask is not None
        return np.where(self._mask, dout, 0.0)


class MaxPool2D(Layer):
    """
    Non-overlapping max pooling. Odd spatial sizes are padded by one zero row or
    column at the bottom or right before pooling. Gradients flow to the first
    maximum of each block.
    """

    name = "maxpool"

    def __init__(self, pool_size: int = 2):
        super().__init__()
        self.pool_size = pool_size
        self._argmax: Optional[np.ndarray] = None
        self._input_shape: Tuple[int, ...] = ()

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        h, w, c = input_shape
        s = self.pool_size
        return (-(-h // s), -(-w // s), c)

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        s = self.pool_size
        n, h, w, c = x.shape
        ho, wo = -(-h // s), -(-w // s)
        padded = np.pad(x, ((0, 0), (0, ho * s - h), (0, wo * s - w), (0, 0)))

        blocks = (
            padded.reshape(n, ho, s, wo, s, c)
            .transpose(0, 1, 3, 5, 2, 4)
            .reshape(n, ho, wo, c, s * s)
        )
        self._argmax = blocks.argmax(axis=-1)
        self._input_shape = x.shape
        return np.take_along_axis(blocks, self._argmax[..., np.newaxis], axis=-1)[
            ..., 0
        ]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._argmax is not None
        s = self.pool_size
        n, h, w, c = self._input_shape
        ho, wo = dout.shape[1:3]

        blocks = np.zeros((n, ho, wo, c, s * s), dtype=dout.dtype)
        np.put_along_axis(
            blocks, self._argmax[..., np.newaxis], dout[..., np.newaxis], axis=-1
        )
        dx = (
            blocks.reshape(n, ho, wo, c, s, s)
            .transpose(0, 1, 4, 2, 5, 3)
            .reshape(n, ho * s, wo * s, c)
        )
        return dx[:, :h, :w, :]


class Dropout(Layer):
    """
    Inverted dropout: in training each unit is zeroed with probability `rate` and
    survivors are scaled by 1 / (1 - rate); at inference the layer is the identity.

    Attributes
    ----------
    rng: Optional[np.random.Generator]
        Source of dropout masks, set by the training loop.
    """

    name = "dropout"

    def __init__(self, rate: float):
        super().__init__()
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"Dropout rate must lie in [0, 1) (received {rate}).")
        self.rate = rate
        self.rng: Optional[np.random.Generator] = None
        self._mask: Optional[np.ndarray] = None

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        return input_shape

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        if not training or self.rate == 0.0:
            self._mask = None
            return x

        if self.rng is None:
            self.rng = np.random.default_rng(0)
        self._mask = (self.rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * self._mask

    def backward(self, dout: np.ndarray) -> np.ndarray:
        if self._mask is None:
            return dout
        return dout * self._mask


class Flatten(Layer):
    name = "flatten"

    def __init__(self) -> None:
        super().__init__()
        self._input_shape: Tuple[int, ...] = ()

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        return (int(np.prod(input_shape)),)

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        self._input_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dout: np.ndarray) -> np.ndarray:
        return dout.reshape(self._input_shape)


class Dense(Layer):
    """
    Fully connected layer. Weights are He-uniform for layers feeding a ReLU and
    Glorot-uniform otherwise; biases start at zero.
    """

    name = "dense"

    def __init__(
        self,
        in_features: int,
        units: int,
        rng: np.random.Generator,
        init: str = "he",
    ):
        super().__init__()
        if init == "he":
            weights = he_uniform(rng, (in_features, units), fan_in=in_features)
        elif init == "glorot":
            weights = glorot_uniform(
                rng, (in_features, units), fan_in=in_features, fan_out=units
            )
        else:
            raise ValueError(f"Unknown initializer '{init}'.")

        self.params["W"] = weights
        self.params["b"] = np.zeros(units)
        self._x: Optional[np.ndarray] = None

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        return (self.params["W"].shape[1],)

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        self._x = x
        return x @ self.params["W"] + self.params["b"]

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._x is not None
        self.grads["W"] = self._x.T @ dout
        self.grads["b"] = dout.sum(axis=0)
        return dout @ self.params["W"].T


class Sigmoid(Layer):
    name = "sigmoid"

    def __init__(self) -> None:
        super().__init__()
        self._out: Optional[np.ndarray] = None

    def output_shape(self, input_shape: Tuple[int, ...]) -> Tuple[int, ...]:
        return input_shape

    def forward(self, x: np.ndarray, training: bool = False) -> np.ndarray:
        self._out = expit(x)
        return self._out

    def backward(self, dout: np.ndarray) -> np.ndarray:
        assert self._out is not None
        return dout * self._out * (1.0 - self._out)
