#!/usr/bin/env python
# -*- coding: utf-8 -*-

import logging
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
from scipy.special import expit

from .. import constants
from ..circuits import CircuitInstance
from ..exceptions import (
    CircuitNotDecodableError,
    ConflictingArgumentsError,
    TrainingDivergedError,
)
from ..trajectories import Dataset, full_window, generate_dataset, run_trajectory
from ..types import WindowSpec
from ..utils.random_streams import keyed_generator
from .layers import MaxPool2D, ReLU
from .model import TrainedModel, TrainHistory, build_model

###############################################################################

log = logging.getLogger(__name__)

###############################################################################


@dataclass(frozen=True)
class TrainConfig:
    """
    Frozen training protocol: Adam on binary cross-entropy with early stopping on
    a validation split carved from the training set.
    """

    learning_rate: float = constants.LEARNING_RATE
    beta_1: float = constants.ADAM_BETA_1
    beta_2: float = constants.ADAM_BETA_2
    epsilon: float = constants.ADAM_EPSILON
    batch_size: int = constants.BATCH_SIZE
    max_epochs: int = constants.MAX_EPOCHS
    patience: int = constants.PATIENCE
    validation_fraction: float = constants.VALIDATION_FRACTION
    init_seed: int = 0
    shuffle_seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "TrainConfig":
        unknown = set(values) - {f.name for f in fields(cls)}
        if unknown:
            raise ConflictingArgumentsError(
                f"Unknown training options: {sorted(unknown)}"
            )
        return cls(**values)


@dataclass(frozen=True)
class EvalReport:
    error: float
    n_test: int
    learned: bool
    epsilon: float = constants.LEARNING_ERROR


class Classifier(Protocol):
    def predict_proba(self, images: np.ndarray) -> np.ndarray:
        ...


###############################################################################


class Adam:
    """Adam with bias correction, updating parameter arrays in place."""

    def __init__(
        self,
        params: Sequence[np.ndarray],
        learning_rate: float = constants.LEARNING_RATE,
        beta_1: float = constants.ADAM_BETA_1,
        beta_2: float = constants.ADAM_BETA_2,
        epsilon: float = constants.ADAM_EPSILON,
    ):
        self.params = list(params)
        self.learning_rate = learning_rate
        self.beta_1 = beta_1
        self.beta_2 = beta_2
        self.epsilon = epsilon
        self.step_count = 0
        self._m = [np.zeros_like(p) for p in self.params]
        self._v = [np.zeros_like(p) for p in self.params]

    def step(self, grads: Sequence[np.ndarray]) -> None:
        self.step_count += 1
        correction_1 = 1.0 - self.beta_1**self.step_count
        correction_2 = 1.0 - self.beta_2**self.step_count
        for param, grad, m, v in zip(self.params, grads, self._m, self._v):
            m *= self.beta_1
            m += (1.0 - self.beta_1) * grad
            v *= self.beta_2
            v += (1.0 - self.beta_2) * grad * grad
            m_hat = m / correction_1
            v_hat = v / correction_2
            param -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.epsilon)


def bce_with_logits(
    logits: np.ndarray, targets: np.ndarray
) -> Tuple[float, np.ndarray]:
    """
    Mean binary cross-entropy of sigmoid(logits) against 0/1 targets, computed
    stably from the logits, and its gradient with respect to the logits.
    """
    n = max(1, logits.shape[0])
    # -[y log s(z) + (1 - y) log(1 - s(z))] = log(1 + e^z) - y z
    losses = np.logaddexp(0.0, logits) - targets * logits
    grad = (expit(logits) - targets) / n
    return float(losses.mean()) if logits.size else 0.0, grad


def _dataset_loss(
    model: TrainedModel, images: np.ndarray, targets: np.ndarray
) -> float:
    loss, _ = bce_with_logits(model.logits(images, training=False), targets)
    return loss


###############################################################################


def train(
    model: TrainedModel,
    dataset: Dataset,
    train_config: TrainConfig = TrainConfig(),
) -> TrainedModel:
    """
    Fit a model with mini-batch Adam on binary cross-entropy.

    The trailing `validation_fraction` of the dataset is held out; training stops
    once the validation loss has not improved for `patience` epochs and the
    parameters of the best epoch are restored.

    Parameters
    ----------
    model: TrainedModel
        The model to train, updated in place.
    dataset: Dataset
        Training records. Labels +1 / -1 become targets 1 / 0.
    train_config: TrainConfig
        The training protocol.
        Default: TrainConfig()

    Returns
    -------
    model: TrainedModel
        The same model, with `metadata` describing the run and `history`
        holding the per-epoch losses.

    Raises
    ------
    ValueError
        Empty dataset.
    TrainingDivergedError
        The loss became NaN or infinite.
    """
    if len(dataset) == 0:
        raise ValueError("Cannot train on an empty dataset.")

    train_set, val_set = dataset.split(train_config.validation_fraction)
    if len(train_set) == 0:
        train_set, val_set = dataset, dataset.subset(0)

    x_train, y_train = train_set.images(), train_set.targets()
    x_val, y_val = val_set.images(), val_set.targets()
    has_validation = len(val_set) > 0

    shuffle_rng = keyed_generator(train_config.shuffle_seed, tag="shuffle")
    model.set_dropout_rng(keyed_generator(train_config.shuffle_seed, tag="dropout"))
    optimizer = Adam(
        model.parameter_arrays(),
        learning_rate=train_config.learning_rate,
        beta_1=train_config.beta_1,
        beta_2=train_config.beta_2,
        epsilon=train_config.epsilon,
    )

    history = TrainHistory()
    best_loss = np.inf
    best_params = model.copy_parameters()
    waited = 0
    n = len(train_set)
    for epoch in range(train_config.max_epochs):
        order = shuffle_rng.permutation(n)
        total = 0.0
        for start in range(0, n, train_config.batch_size):
            batch = order[start : start + train_config.batch_size]
            logits = model.logits(x_train[batch], training=True)
            loss, dlogits = bce_with_logits(logits, y_train[batch])
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"Training loss became {loss} at epoch {epoch + 1}."
                )
            model.backward(dlogits)
            optimizer.step(model.gradient_arrays())
            total += loss * len(batch)

        train_loss = total / n
        val_loss = (
            _dataset_loss(model, x_val, y_val) if has_validation else train_loss
        )
        if not np.isfinite(val_loss):
            raise TrainingDivergedError(
                f"Validation loss became {val_loss} at epoch {epoch + 1}."
            )

        if val_loss < best_loss:
            best_loss = val_loss
            best_params = model.copy_parameters()
            history.best_epoch = epoch + 1
            waited = 0
        else:
            waited += 1

        history.train_loss.append(train_loss)
        history.val_loss.append(val_loss)
        history.best_val_loss.append(best_loss)
        if waited >= train_config.patience:
            history.stopped_early = True
            log.debug(
                f"Early stop after epoch {epoch + 1}, best epoch "
                f"{history.best_epoch} (val loss {best_loss:.4f})"
            )
            break

    model.load_parameter_arrays(best_params)
    model.metadata = {
        "n_train": len(dataset),
        "epochs_run": history.epochs_run,
        "best_epoch": history.best_epoch,
        "final_train_loss": history.train_loss[-1],
        "final_val_loss": history.val_loss[-1],
        "train_config": train_config.to_dict(),
    }
    model.history = history
    return model


def evaluate(
    model: Classifier,
    test_set: Dataset,
    epsilon: float = constants.LEARNING_ERROR,
) -> EvalReport:
    """
    Hard-classify a held-out test set and compare against ε_l.

    Any object with `predict_proba(images)` may be scored, including the exact
    key-measurement predictor. Probabilities of exactly 0.5 count as +1.

    Raises
    ------
    ValueError
        Empty test set.
    """
    if len(test_set) == 0:
        raise ValueError("Cannot evaluate on an empty test set.")

    probabilities = model.predict_proba(test_set.images())
    predictions = np.where(probabilities >= 0.5, 1, -1)
    error = float(np.mean(predictions != test_set.labels))
    return EvalReport(error, len(test_set), error <= epsilon, epsilon)


###############################################################################


def default_sample_grid(
    base: int = constants.SAMPLE_GRID_BASE, cap: int = constants.SAMPLE_GRID_CAP
) -> List[int]:
    """Geometric grid base * 2^k up to the cap."""
    grid = []
    value = base
    while value <= cap:
        grid.append(value)
        value *= 2
    return grid


def min_training_samples(
    instance: CircuitInstance,
    epsilon: float = constants.LEARNING_ERROR,
    sample_grid: Optional[Sequence[int]] = None,
    window: Optional[WindowSpec] = None,
    train_config: TrainConfig = TrainConfig(),
    n_test: int = constants.TEST_SET_SIZE,
    force_labels: bool = False,
) -> Optional[int]:
    """
    Smallest training budget M(ε_l) on a grid at which a freshly built model
    reaches test error at most ε_l.

    Training sets for the grid points are nested prefixes of one dataset; the
    test set uses trajectory seeds disjoint from every training seed.

    Parameters
    ----------
    instance: CircuitInstance
        The circuit to learn.
    epsilon: float
        Learning error threshold ε_l.
        Default: 0.02
    sample_grid: Optional[Sequence[int]]
        Ascending budgets. Default: 250, 500, ..., 16000.
    window: Optional[WindowSpec]
        Crop of the training and test outcomes. Default: the whole circuit.
    train_config: TrainConfig
        Training protocol shared by every grid point.
    n_test: int
        Test set size.
        Default: 2000
    force_labels: bool
        Run the search on an unpurified circuit with coin-flip labels.
        Default: False

    Returns
    -------
    M: Optional[int]
        The smallest sufficient budget, or None if no grid value reached ε_l.

    Raises
    ------
    CircuitNotDecodableError
        The circuit never purifies and `force_labels` is not set.
    """
    grid = sorted(sample_grid) if sample_grid is not None else default_sample_grid()
    if len(grid) == 0:
        raise ValueError("Sample grid is empty.")

    if not force_labels and run_trajectory(instance, 0).t_p is None:
        raise CircuitNotDecodableError(instance.fingerprint(), instance.depth)

    window = window or full_window(instance)
    training = generate_dataset(instance, grid[-1], window=window, force=force_labels)
    test = generate_dataset(
        instance,
        n_test,
        window=window,
        seed_offset=constants.TEST_SEED_OFFSET,
        force=force_labels,
    )

    for budget in grid:
        model = build_model(window, budget, init_seed=train_config.init_seed)
        train(model, training.subset(budget), train_config)
        report = evaluate(model, test, epsilon)
        log.debug(
            f"Circuit {instance.fingerprint()}: N_t={budget} error={report.error:.4f}"
        )
        if report.learned:
            return budget

    return None


###############################################################################


def _activation_pattern(model: TrainedModel) -> List[np.ndarray]:
    """ReLU masks and max pool winners of the last forward pass."""
    pattern = []
    for layer in model.layers:
        if isinstance(layer, ReLU) and layer._mask is not None:
            pattern.append(layer._mask.copy())
        elif isinstance(layer, MaxPool2D) and layer._argmax is not None:
            pattern.append(layer._argmax.copy())
    return pattern


def _same_pattern(a: List[np.ndarray], b: List[np.ndarray]) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a, b))


def gradient_check(
    model: TrainedModel,
    images: np.ndarray,
    targets: np.ndarray,
    n_params: int = 200,
    step: float = 1e-5,
    seed: int = 0,
    floor: float = 1e-4,
) -> float:
    """
    Compare backpropagated gradients of the BCE loss with central finite
    differences on randomly chosen parameter entries (dropout disabled).

    Entries whose perturbation moves a ReLU or a max pool across a kink are
    skipped: the loss is not differentiable there and the finite difference
    measures the kink, not the gradient.

    Parameters
    ----------
    model: TrainedModel
        The model to check. Parameters are restored after every probe.
    images: np.ndarray
        Input batch (N, depth, width, 1).
    targets: np.ndarray
        BCE targets in [0, 1].
    n_params: int
        Number of parameter entries to probe.
        Default: 200
    step: float
        Finite difference step h.
        Default: 1e-5
    seed: int
        Seed of the entry selection.
        Default: 0
    floor: float
        Lower bound of the denominator of the relative error, so gradients that
        vanish up to rounding do not inflate it.
        Default: 1e-4

    Returns
    -------
    max_error: float
        Largest |analytic - numeric| / max(|analytic|, |numeric|, floor).
    """
    images = np.asarray(images, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)

    def loss() -> Tuple[float, List[np.ndarray]]:
        value, _ = bce_with_logits(model.logits(images, training=False), targets)
        return value, _activation_pattern(model)

    _, dlogits = bce_with_logits(model.logits(images, training=False), targets)
    reference = _activation_pattern(model)
    model.backward(dlogits)
    analytic = [grad.copy() for grad in model.gradient_arrays()]
    params = model.parameter_arrays()

    sizes = np.array([param.size for param in params])
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    rng = np.random.default_rng(seed)
    picks = rng.choice(offsets[-1], size=min(n_params, int(offsets[-1])), replace=False)

    max_error = 0.0
    skipped = 0
    for flat_index in np.sort(picks):
        which = int(np.searchsorted(offsets, flat_index, side="right") - 1)
        local = int(flat_index - offsets[which])
        view = params[which].reshape(-1)
        original = view[local]

        view[local] = original + step
        plus, plus_pattern = loss()
        view[local] = original - step
        minus, minus_pattern = loss()
        view[local] = original

        if not (
            _same_pattern(reference, plus_pattern)
            and _same_pattern(reference, minus_pattern)
        ):
            skipped += 1
            continue

        numeric = (plus - minus) / (2 * step)
        exact = analytic[which].reshape(-1)[local]
        scale = max(abs(exact), abs(numeric), floor)
        max_error = max(max_error, abs(exact - numeric) / scale)

    if skipped:
        log.debug(f"Gradient check skipped {skipped} entries next to a kink")
    return max_error
