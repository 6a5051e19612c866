#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from .. import constants
from ..exceptions import UnexpectedShapeError, WindowTooSmallError
from ..transforms import pad_to_minimum
from ..types import WindowSpec
from ..utils.random_streams import keyed_generator
from .layers import Conv2D, Dense, Dropout, Flatten, Layer, MaxPool2D, ReLU, Sigmoid

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


def dense_units(n_train: int) -> int:
    """N_n = 512 * (1 + 2 * floor(N_t / 2000))."""
    return constants.DENSE_UNIT_BASE * (
        1 + 2 * (n_train // constants.DENSE_UNIT_STEP)
    )


def minimum_input_size(
    kernel_sizes: Tuple[Tuple[int, int], ...] = constants.KERNEL_SIZES,
) -> Tuple[int, int]:
    """Smallest (H, W) giving at least one pixel after the valid convolutions."""
    height = 1 + sum(kh - 1 for kh, _ in kernel_sizes)
    width = 1 + sum(kw - 1 for _, kw in kernel_sizes)
    return height, width


@dataclass(frozen=True)
class ModelConfig:
    """
    Architecture of the decoder network.

    Parameters
    ----------
    depth: int
        Layers in the input window (image height before padding).
    width: int
        Sites in the input window, L_q (image width before padding).
    filters: int
        Filters of both convolutions, L_q / 2.
    dense_units: int
        Units of the hidden dense layer, N_n.
    init_seed: int
        Seed of the initial weights.
    """

    depth: int
    width: int
    filters: int
    dense_units: int
    init_seed: int = 0
    kernel_sizes: Tuple[Tuple[int, int], ...] = constants.KERNEL_SIZES
    pool_size: int = constants.POOL_SIZE
    dropout_rate: float = constants.DROPOUT_RATE

    def __post_init__(self) -> None:
        if self.depth < 1 or self.width < 1:
            raise WindowTooSmallError(
                f"Network input must be at least 1x1 (received "
                f"{self.depth}x{self.width})."
            )

    @classmethod
    def for_window(
        cls, window: WindowSpec, n_train: int, init_seed: int = 0
    ) -> "ModelConfig":
        return cls(
            depth=window.depth,
            width=window.width,
            filters=max(1, window.width // 2),
            dense_units=dense_units(n_train),
            init_seed=init_seed,
        )

    @property
    def input_shape(self) -> Tuple[int, int]:
        """Image size fed to the first convolution, after zero padding."""
        min_height, min_width = minimum_input_size(self.kernel_sizes)
        return max(self.depth, min_height), max(self.width, min_width)

    def to_dict(self) -> Dict[str, Any]:
        values = asdict(self)
        values["kernel_sizes"] = [list(kernel) for kernel in self.kernel_sizes]
        return values

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "ModelConfig":
        values = dict(values)
        if "kernel_sizes" in values:
            values["kernel_sizes"] = tuple(
                tuple(kernel) for kernel in values["kernel_sizes"]
            )
        return cls(**values)


@dataclass
class TrainHistory:
    """Per-epoch losses of one training run; best_val_loss is the running minimum."""

    train_loss: List[float] = field(default_factory=list)
    val_loss: List[float] = field(default_factory=list)
    best_val_loss: List[float] = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False

    @property
    def epochs_run(self) -> int:
        return len(self.train_loss)


@dataclass
class TrainedModel:
    """
    The eight-layer decoder network with its parameters and training metadata.

    Layers: conv (L_q/2 filters, 4x4) + ReLU, conv (L_q/2 filters, 3x3) + ReLU,
    2x2 max pool, dropout, flatten, dense (N_n units) + ReLU, dropout,
    dense (1 unit) + sigmoid.

    Attributes
    ----------
    config: ModelConfig
        Architecture and init seed.
    layers: List[Layer]
        Layers in forward order.
    metadata: Dict[str, Any]
        Training metadata (n_train, epochs_run, final losses). JSON serializable.
    history: Optional[TrainHistory]
        Losses of the last training run, None for untrained or loaded models.
    """

    config: ModelConfig
    layers: List[Layer]
    metadata: Dict[str, Any] = field(default_factory=dict)
    history: Optional[TrainHistory] = field(default=None, repr=False)

    ###########################################################################

    def _prepare(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images, dtype=np.float64)
        if images.ndim == 3:
            images = images[..., np.newaxis]
        if images.ndim != 4 or images.shape[-1] != 1:
            raise UnexpectedShapeError(
                f"Expected an image batch of shape (N, H, W, 1), received "
                f"{images.shape}."
            )
        if images.shape[1:3] != (self.config.depth, self.config.width):
            raise UnexpectedShapeError(
                f"Model expects {self.config.depth}x{self.config.width} images, "
                f"received {images.shape[1]}x{images.shape[2]}."
            )
        return pad_to_minimum(images, self.config.input_shape)

    def logits(self, images: np.ndarray, training: bool = False) -> np.ndarray:
        """Pre-sigmoid outputs, shape (N,)."""
        out = self._prepare(images)
        for layer in self.layers[:-1]:
            out = layer.forward(out, training=training)
        return out[:, 0]

    def backward(self, dlogits: np.ndarray) -> None:
        """Backpropagate d(loss)/d(logits) through every layer below the sigmoid."""
        grad = dlogits[:, np.newaxis]
        for layer in reversed(self.layers[:-1]):
            grad = layer.backward(grad)

    def predict_proba(self, images: np.ndarray) -> np.ndarray:
        """Probability that each label is +1; dropout inactive."""
        return expit(self.logits(images, training=False))

    def predict(self, images: np.ndarray) -> np.ndarray:
        """Hard labels: +1 where the probability is at least 0.5, else -1."""
        return np.where(self.predict_proba(images) >= 0.5, 1, -1).astype(np.int8)

    ###########################################################################

    @property
    def trainable_layers(self) -> List[Layer]:
        return [layer for layer in self.layers if layer.params]

    def parameter_arrays(self) -> List[np.ndarray]:
        """Parameter tensors in checkpoint order: W then b of each trainable layer."""
        return [
            layer.params[key] for layer in self.trainable_layers for key in ("W", "b")
        ]

    def gradient_arrays(self) -> List[np.ndarray]:
        return [
            layer.grads[key] for layer in self.trainable_layers for key in ("W", "b")
        ]

    def load_parameter_arrays(self, arrays: List[np.ndarray]) -> None:
        targets = self.parameter_arrays()
        if len(arrays) != len(targets):
            raise UnexpectedShapeError(
                f"Expected {len(targets)} parameter tensors, received {len(arrays)}."
            )
        for target, array in zip(targets, arrays):
            if target.shape != array.shape:
                raise UnexpectedShapeError(
                    f"Parameter shape mismatch: {target.shape} vs {array.shape}."
                )
            target[...] = array

    def copy_parameters(self) -> List[np.ndarray]:
        return [array.copy() for array in self.parameter_arrays()]

    def negated(self) -> "TrainedModel":
        """
        Copy with the output layer negated, so every logit flips sign.

        Training the copy on negated labels mirrors training this model on the
        original labels step for step.
        """
        mirror = model_from_config(self.config)
        mirror.load_parameter_arrays(self.copy_parameters())
        output = mirror.trainable_layers[-1]
        output.params["W"] *= -1.0
        output.params["b"] *= -1.0
        return mirror

    def parameter_count(self) -> int:
        return sum(layer.parameter_count() for layer in self.layers)

    def set_dropout_rng(self, rng: np.random.Generator) -> None:
        for layer in self.layers:
            if isinstance(layer, Dropout):
                layer.rng = rng

    def __repr__(self) -> str:
        return (
            f"<TrainedModel {self.config.depth}x{self.config.width} "
            f"[parameters: {self.parameter_count()}]>"
        )


def _build_layers(config: ModelConfig) -> List[Layer]:
    rng = keyed_generator(config.init_seed, tag="init")
    (k1, k2) = config.kernel_sizes
    height, width = config.input_shape

    conv_1 = Conv2D(1, config.filters, k1, rng)
    conv_2 = Conv2D(config.filters, config.filters, k2, rng)
    pool = MaxPool2D(config.pool_size)

    shape: Tuple[int, ...] = (height, width, 1)
    for layer in (conv_1, conv_2, pool):
        shape = layer.output_shape(shape)
    flat = int(np.prod(shape))

    return [
        conv_1,
        ReLU(),
        conv_2,
        ReLU(),
        pool,
        Dropout(config.dropout_rate),
        Flatten(),
        Dense(flat, config.dense_units, rng, init="he"),
        ReLU(),
        Dropout(config.dropout_rate),
        Dense(config.dense_units, 1, rng, init="glorot"),
        Sigmoid(),
    ]


def model_from_config(config: ModelConfig) -> TrainedModel:
    return TrainedModel(config, _build_layers(config))


def build_model(window: WindowSpec, N_t: int, init_seed: int = 0) -> TrainedModel:
    """
    Build an untrained decoder for images cropped to `window`.

    Parameters
    ----------
    window: WindowSpec
        Input window; image height is window.depth and width window.width.
        Inputs smaller than 6x6 are zero padded up to 6x6.
    N_t: int
        Training set size, which sets the dense width N_n.
    init_seed: int
        Seed of the He / Glorot uniform initial weights.
        Default: 0

    Returns
    -------
    model: TrainedModel
        Untrained model with zero biases.

    Raises
    ------
    WindowTooSmallError
        The window is empty.
    """
    config = ModelConfig.for_window(window, N_t, init_seed=init_seed)
    model = model_from_config(config)
    log.debug(f"Built {model}")
    return model


def forward(model: TrainedModel, images: np.ndarray) -> np.ndarray:
    """Inference pass: per-sample probability that the label is +1."""
    return model.predict_proba(images)
